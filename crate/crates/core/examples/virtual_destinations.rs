//! Virtual destinations, their hysteresis cones and the plane of motion.

use hybrid_nav::controller::check_virtual_destinations;
use hybrid_nav::{select_virtual_destinations, vector, Obstacle, Scenario};

fn main() -> hybrid_nav::Result<()> {
    let planar = Scenario::with_defaults(Obstacle::new(vector(&[0., -5.]), 2.0)?, vector(&[0., 0.]))?;
    for x0 in [vector(&[3., -9.]), vector(&[-3., -9.])] {
        let vd = select_virtual_destinations(&planar, &x0, None)?;
        check_virtual_destinations(&vd, &planar, 1e-9)?;
        println!(
            "2D start {:?}: x_d+ = {:?}, x_d- = {:?}, phi = {:.5}",
            x0.as_slice(),
            vd.xd_plus.as_slice(),
            vd.xd_minus.as_slice(),
            vd.phi
        );
    }

    let spatial = Scenario::with_defaults(Obstacle::new(vector(&[1., 1., 1.]), 0.7)?, vector(&[0., 0., 0.]))?;
    for x0 in [vector(&[2.5, 2.0, 3.0]), vector(&[3., 3., 3.])] {
        let vd = select_virtual_destinations(&spatial, &x0, None)?;
        let residual = [&vd.xd_plus, &vd.xd_minus, &x0].iter().map(|p| vd.plane.distance(p)).fold(0.0, f64::max);
        println!(
            "3D start {:?}: x_d+ = {:.4?}, plane residual {residual:.1e}",
            x0.as_slice(),
            vd.xd_plus.as_slice()
        );
    }
    Ok(())
}
