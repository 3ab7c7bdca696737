//! Runs the committed planar grid and prints one report line per start.

use std::path::Path;

use hybrid_nav::cli::load_config;

fn main() -> hybrid_nav::Result<()> {
    let cfg = load_config(&Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/planar.toml"))?;
    println!("{:>3} {:>22} {:>10} {:>5} {:>10} {:>10} {:>11}", "id", "start", "status", "jumps", "length", "ratio", "clearance");
    for i in 0..cfg.starts.len() {
        let (_, _, r) = cfg.run(i)?;
        let s = &cfg.starts[i];
        println!(
            "{i:>3} {:>22} {:>10} {:>5} {:>10.5} {:>10.6} {:>11.2e}",
            format!("({:.2}, {:.2})", s[0], s[1]),
            r.status.as_str(),
            r.jumps,
            r.path_length,
            r.optimality_ratio,
            r.min_clearance
        );
    }
    Ok(())
}
