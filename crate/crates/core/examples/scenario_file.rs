//! Builds a scenario file in memory, runs every start and writes the
//! trajectories and plot data to a temporary directory.

use hybrid_nav::cli::{cmd_grid, cmd_plotdata, parse_config};
use hybrid_nav::Trajectory;

const SCENARIO: &str = r#"
dimension = 2
target = [4.0, 0.0]
e = 0.05
starts = [[-4.0, 0.0], [-4.0, 1.0], [0.0, 4.0]]

[obstacle]
center = [0.0, 0.0]
radius = 1.5

[sim]
h = 2e-3
"#;

fn main() -> hybrid_nav::Result<()> {
    let cfg = parse_config(SCENARIO, "inline")?;
    let out = std::env::temp_dir().join("hybrid-nav-scenario-file");
    for (i, r) in cmd_grid(&cfg, &out)?.iter().enumerate() {
        println!("start {i}: {} with {} jump(s), ratio {:.5}", r.status, r.jumps, r.optimality_ratio);
    }
    let traj = Trajectory::read_csv(std::fs::File::open(out.join("traj_0.csv"))?)?;
    cmd_plotdata(&traj, &cfg.scenario, &out)?;
    println!("artifacts in {}", out.display());
    Ok(())
}
