//! Geodesic length around a disc or sphere, compared with a straight line.

use hybrid_nav::analysis::{segment_meets_obstacle, shortest_path_oracle};
use hybrid_nav::{vector, Obstacle};

fn main() -> hybrid_nav::Result<()> {
    let disc = Obstacle::new(vector(&[0., 0.]), 1.0)?;
    let cases = [
        (vector(&[-2., 0.]), vector(&[2., 0.])),
        (vector(&[-2., 2.]), vector(&[2., 2.])),
        (vector(&[0., 1.]), vector(&[0., -1.])),
    ];
    for (a, b) in &cases {
        println!(
            "{:?} -> {:?}: blocked {}, shortest {:.6}, straight {:.6}",
            a.as_slice(),
            b.as_slice(),
            segment_meets_obstacle(a, b, &disc),
            shortest_path_oracle(a, b, &disc)?,
            (a - b).norm()
        );
    }
    let ball = Obstacle::new(vector(&[1., 1., 1.]), 0.7)?;
    let from = vector(&[3., 3., 3.]);
    println!("behind the sphere to the origin: {:.6}", shortest_path_oracle(&from, &vector(&[0., 0., 0.]), &ball)?);
    Ok(())
}
