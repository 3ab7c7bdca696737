//! Spatial runs stay in the plane through target, centre and start.

use std::path::Path;

use hybrid_nav::cli::load_config;

fn main() -> hybrid_nav::Result<()> {
    let cfg = load_config(&Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/spatial.toml"))?;
    for i in 0..cfg.starts.len() {
        let (traj, _, r) = cfg.run(i)?;
        println!(
            "start {i} {:?}: {} with {} jump(s), {} samples, plane deviation {:.1e}, ratio {:.6}",
            cfg.starts[i].as_slice(),
            r.status,
            r.jumps,
            traj.samples.len(),
            r.max_plane_deviation,
            r.optimality_ratio
        );
    }
    Ok(())
}
