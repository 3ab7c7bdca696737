//! ASCII map of the shadow, its exit set and the visible region of a target.
//!
//! `#` obstacle, `s` shadow, `e` exit surface, `.` visible, `T` target.

use hybrid_nav::world::Shadow;
use hybrid_nav::{vector, Obstacle};

fn main() -> hybrid_nav::Result<()> {
    let obstacle = Obstacle::new(vector(&[0., -5.]), 2.0)?;
    let target = vector(&[0., 0.]);
    let shadow = Shadow::new(&target, &obstacle)?;
    println!("half-aperture seen from the target: {:.5} rad", shadow.half_aperture());
    let (cols, rows) = (61, 31);
    for j in 0..rows {
        let y = 2.0 - 18.0 * j as f64 / (rows - 1) as f64;
        let line: String = (0..cols)
            .map(|i| {
                let x = -12.0 + 24.0 * i as f64 / (cols - 1) as f64;
                let q = vector(&[x, y]);
                if (&q - &target).norm() < 0.4 {
                    'T'
                } else if obstacle.clearance(&q) < 0.0 {
                    '#'
                } else if shadow.exit_contains(&q, 0.15) {
                    'e'
                } else if shadow.contains(&q, 0.0) {
                    's'
                } else {
                    '.'
                }
            })
            .collect();
        println!("{line}");
    }
    Ok(())
}
