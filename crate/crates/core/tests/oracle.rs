mod support;

use approx::assert_relative_eq;
use hybrid_nav::analysis::{segment_meets_obstacle, shortest_path_oracle};
use hybrid_nav::{vector, Obstacle, VectorN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{segment_hits_ball, visibility_graph_length, visibility_graph_length_2d};

fn random_free_point(rng: &mut ChaCha8Rng, n: usize, obstacle: &Obstacle) -> VectorN {
    loop {
        let p = VectorN::from_fn(n, |_, _| rng.random_range(-8.0..8.0));
        if obstacle.clearance(&p) > 1e-3 {
            return p;
        }
    }
}

#[test]
fn hand_computed_instance_matches_graph() {
    let l = shortest_path_oracle(&vector(&[-2., 0.]), &vector(&[2., 0.]), &Obstacle::new(vector(&[0., 0.]), 1.0).unwrap()).unwrap();
    let g = visibility_graph_length_2d([-2., 0.], [2., 0.], [0., 0.], 1.0);
    assert!((l - g).abs() / l <= 1e-3, "{l} vs {g}");
}

#[test]
fn oracle_agrees_with_visibility_graph_2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut blocked = 0;
    for _ in 0..200 {
        let c = vector(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        let o = Obstacle::new(c, rng.random_range(0.3..3.0)).unwrap();
        let x0 = random_free_point(&mut rng, 2, &o);
        let xd = random_free_point(&mut rng, 2, &o);
        let l = shortest_path_oracle(&x0, &xd, &o).unwrap();
        let g = visibility_graph_length(&x0, &xd, &o);
        assert!((l - g).abs() <= 1e-3 * l, "{l} vs {g}");
        blocked += usize::from(segment_meets_obstacle(&x0, &xd, &o));
    }
    assert!(blocked > 20, "only {blocked} blocked instances");
}

#[test]
fn oracle_agrees_with_visibility_graph_3d() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let o = Obstacle::new(vector(&[1., 1., 1.]), rng.random_range(0.3..2.0)).unwrap();
        let x0 = random_free_point(&mut rng, 3, &o);
        let xd = random_free_point(&mut rng, 3, &o);
        let l = shortest_path_oracle(&x0, &xd, &o).unwrap();
        let g = visibility_graph_length(&x0, &xd, &o);
        assert!((l - g).abs() <= 1e-3 * l, "{l} vs {g}");
    }
}

#[test]
fn oracle_bounds_and_line_of_sight_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let o = Obstacle::new(vector(&[0., 0., 0.]), rng.random_range(0.5..2.0)).unwrap();
        let x0 = random_free_point(&mut rng, 3, &o);
        let xd = random_free_point(&mut rng, 3, &o);
        let l = shortest_path_oracle(&x0, &xd, &o).unwrap();
        let straight = (&x0 - &xd).norm();
        assert!(l >= straight - 1e-12);
        let hits = segment_hits_ball(&x0, &xd, o.center(), o.radius());
        if hits {
            assert!(l > straight, "blocked segment must be strictly longer");
        } else {
            assert_eq!(l, straight);
        }
    }
}

#[test]
fn boundary_antipodes_give_half_circumference() {
    let o = Obstacle::new(vector(&[0., 0.]), 1.5).unwrap();
    let l = shortest_path_oracle(&vector(&[0., 1.5]), &vector(&[0., -1.5]), &o).unwrap();
    assert!(l.is_finite() && l > 0.0);
    assert_relative_eq!(l, std::f64::consts::PI * 1.5, max_relative = 1e-12);
}
