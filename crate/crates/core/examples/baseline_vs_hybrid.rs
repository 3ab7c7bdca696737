//! The continuous law stalls behind the obstacle; the hybrid law does not.

use hybrid_nav::analysis::{compare_baseline, Law};
use hybrid_nav::sim::StallConfig;
use hybrid_nav::{vector, Obstacle, Scenario, SimConfig};

fn main() -> hybrid_nav::Result<()> {
    let s = Scenario::with_defaults(Obstacle::new(vector(&[0., -5.]), 2.0)?, vector(&[0., 0.]))?;
    let starts = [vector(&[0., -10.]), vector(&[0.5, -10.]), vector(&[6., 3.])];
    let rows = compare_baseline(&s, &starts, None, &SimConfig::default(), StallConfig::default())?;
    for r in rows {
        let law = match r.law {
            Law::Baseline => "baseline",
            Law::Hybrid => "hybrid",
        };
        println!(
            "start {:?} {law:>8}: {:<10} jumps {} length {:>9.5} (shortest {:.5})",
            starts[r.start_id].as_slice(),
            r.status.as_str(),
            r.jumps,
            r.path_length,
            r.oracle_length
        );
    }
    Ok(())
}
