//! Control jump at the switch back to straight mode, for several step sizes.

use hybrid_nav::analysis::{fitted_order, projection_exit_gap};
use hybrid_nav::{select_virtual_destinations, simulate_with, vector, HybridController, Obstacle, Scenario, SimConfig};

fn main() -> hybrid_nav::Result<()> {
    let s = Scenario::with_defaults(Obstacle::new(vector(&[0., -5.]), 2.0)?, vector(&[0., 0.]))?;
    let starts = [vector(&[-3.83, -9.24]), vector(&[3.83, -9.24]), vector(&[0., -10.]), vector(&[1.2, -12.])];
    let hs = [1e-2, 3e-3, 1e-3, 3e-4];
    let mut gaps = Vec::new();
    for h in hs {
        let cfg = SimConfig { h, ..SimConfig::default() };
        let mut worst = 0.0f64;
        for x0 in &starts {
            let vd = select_virtual_destinations(&s, x0, None)?;
            let traj = simulate_with(&s, &vd, x0, None, &cfg)?;
            worst = worst.max(projection_exit_gap(&traj, &HybridController::new(&s, &vd)?)?);
        }
        println!("h = {h:.0e}: max gap {worst:.3e} (20*gamma*h = {:.1e})", 20.0 * s.gain() * h);
        gaps.push(worst);
    }
    println!("fitted order: {:.3}", fitted_order(&hs, &gaps)?);
    Ok(())
}
