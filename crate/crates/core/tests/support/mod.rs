//! Test-only oracles and fixtures.
#![allow(dead_code)]

use std::path::PathBuf;

use hybrid_nav::cli::{load_config, Config};
use hybrid_nav::geometry::plane_through;
use hybrid_nav::{vector, Obstacle, VectorN};
use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};

pub const POLYGON_NODES: usize = 720;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub fn planar() -> Config {
    load_config(&scenario_path("planar.toml")).expect("2D fixture")
}

pub fn spatial() -> Config {
    load_config(&scenario_path("spatial.toml")).expect("3D fixture")
}

/// Closest-point test of a planar segment against the open disc.
fn segment_clear_2d(a: [f64; 2], b: [f64; 2], c: [f64; 2], r: f64) -> bool {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((c[0] - a[0]) * d[0] + (c[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let p = [a[0] + s * d[0] - c[0], a[1] + s * d[1] - c[1]];
    (p[0] * p[0] + p[1] * p[1]).sqrt() >= r
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Shortest path in the plane around a disc, computed on a visibility graph
/// whose boundary nodes form a regular polygon circumscribing the disc.
pub fn visibility_graph_length_2d(x0: [f64; 2], xd: [f64; 2], c: [f64; 2], r: f64) -> f64 {
    let big = r / (std::f64::consts::PI / POLYGON_NODES as f64).cos();
    let ring: Vec<[f64; 2]> = (0..POLYGON_NODES)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / POLYGON_NODES as f64;
            [c[0] + big * a.cos(), c[1] + big * a.sin()]
        })
        .collect();
    let mut g: UnGraph<[f64; 2], f64> = UnGraph::new_undirected();
    let nodes: Vec<NodeIndex> = ring.iter().map(|p| g.add_node(*p)).collect();
    for k in 0..POLYGON_NODES {
        let next = (k + 1) % POLYGON_NODES;
        g.add_edge(nodes[k], nodes[next], dist(ring[k], ring[next]));
    }
    let s = g.add_node(x0);
    let t = g.add_node(xd);
    if segment_clear_2d(x0, xd, c, r) {
        g.add_edge(s, t, dist(x0, xd));
    }
    for (k, p) in ring.iter().enumerate() {
        for (end, q) in [(s, x0), (t, xd)] {
            if segment_clear_2d(q, *p, c, r) {
                g.add_edge(end, nodes[k], dist(q, *p));
            }
        }
    }
    let costs = dijkstra(&g, s, Some(t), |e| *e.weight());
    costs[&t]
}

/// Visibility-graph length in the plane through `x0`, `xd` and the centre.
pub fn visibility_graph_length(x0: &VectorN, xd: &VectorN, obstacle: &Obstacle) -> f64 {
    let c = obstacle.center();
    if x0.len() == 2 {
        return visibility_graph_length_2d([x0[0], x0[1]], [xd[0], xd[1]], [c[0], c[1]], obstacle.radius());
    }
    let plane = plane_through(xd, c, x0).expect("non-degenerate instance");
    let p = |q: &VectorN| {
        let (u, v) = plane.coordinates(q);
        [u, v]
    };
    visibility_graph_length_2d(p(x0), p(xd), p(c), obstacle.radius())
}

/// Whether the segment `[a, b]` enters the open ball, from the roots of
/// `|a + s(b − a) − c|² = r²`.
pub fn segment_hits_ball(a: &VectorN, b: &VectorN, c: &VectorN, r: f64) -> bool {
    let d = b - a;
    let f = a - c;
    let qa = d.dot(&d);
    let qb = 2.0 * f.dot(&d);
    let qc = f.dot(&f) - r * r;
    if qc < 0.0 {
        return true;
    }
    if qa == 0.0 {
        return false;
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return false;
    }
    let s1 = (-qb - disc.sqrt()) / (2.0 * qa);
    let s2 = (-qb + disc.sqrt()) / (2.0 * qa);
    s1 < 1.0 && s2 > 0.0
}

pub fn ring_point(radius: f64, degrees: f64) -> VectorN {
    let a = degrees.to_radians();
    vector(&[radius * a.cos(), radius * a.sin()])
}
