//! Cone and half-space membership, reflectors and the plane helper.
//!
//! Run with `cargo run --example geometry_predicates`.

use hybrid_nav::geometry::{angle_between, plane_through, project_orthogonal, project_parallel, reflect, Cone, HalfSpace, Sense};
use hybrid_nav::vector;
use std::f64::consts::FRAC_PI_4;

fn main() -> hybrid_nav::Result<()> {
    let apex = vector(&[0., 0.]);
    let cone = Cone::new(apex.clone(), &vector(&[1., 0.]), FRAC_PI_4, Sense::Le)?;
    for q in [vector(&[2., 1.]), vector(&[1., 1.]), vector(&[-1., 0.])] {
        println!(
            "cone(axis x, 45 deg) contains {:?}: {} (margin {:+.4})",
            q.as_slice(),
            cone.contains(&q, 0.0),
            cone.margin(&q)
        );
    }
    let on_surface = cone.with_sense(Sense::Eq);
    println!("(1,1) on the lateral surface: {}", on_surface.contains(&vector(&[1., 1.]), 1e-12));

    let upper = HalfSpace::new(apex, &vector(&[0., 1.]), Sense::Ge)?;
    println!("half-space y >= 0 contains (3,-1): {}", upper.contains(&vector(&[3., -1.]), 0.0));

    let v = vector(&[0., 1.]);
    let x = vector(&[2., 3.]);
    println!("reflect (2,3) across v=(0,1): {:?}", reflect(&v, &x)?.as_slice());
    println!(
        "parallel part {:?} + orthogonal part {:?}",
        project_parallel(&v, &x)?.as_slice(),
        project_orthogonal(&v, &x)?.as_slice()
    );
    println!("angle between (1,0) and (0,1): {:.6} rad", angle_between(&vector(&[1., 0.]), &vector(&[0., 1.]))?);

    let plane = plane_through(&vector(&[0., 0., 0.]), &vector(&[1., 0., 0.]), &vector(&[0., 1., 0.]))?;
    println!("distance of (1,2,5) to the xy-plane: {}", plane.distance(&vector(&[1., 2., 5.])));
    Ok(())
}
