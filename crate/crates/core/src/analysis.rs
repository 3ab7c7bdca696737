//! Post-processing of trajectories: path length, the geodesic reference
//! length, and the per-run report.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::controller::{select_virtual_destinations, HybridController, Mode, VirtualDestinations};
use crate::error::{Error, Result};
use crate::geometry::{acos_clamped, VectorN};
use crate::sim::{simulate_baseline, simulate_with, RunStatus, SimConfig, StallConfig, Trajectory};
use crate::world::{Obstacle, Scenario};

/// Whether the segment `[a, b]` meets the open ball of the obstacle.
pub fn segment_meets_obstacle(a: &VectorN, b: &VectorN, obstacle: &Obstacle) -> bool {
    let c = obstacle.center();
    let ab = b - a;
    let len2 = ab.norm_squared();
    let s = if len2 == 0.0 { 0.0 } else { ((c - a).dot(&ab) / len2).clamp(0.0, 1.0) };
    let closest = a + ab * s;
    (closest - c).norm() < obstacle.radius()
}

/// Length of the shortest path from `x0` to `xd` in the closed free space.
///
/// When the segment is blocked, the path consists of the two tangent segments
/// and the arc of the great circle between the tangent points. That circle
/// lies in the plane through `x0`, `xd` and the centre, so the planar formula
/// holds in any dimension.
pub fn shortest_path_oracle(x0: &VectorN, xd: &VectorN, obstacle: &Obstacle) -> Result<f64> {
    let r = obstacle.radius();
    let c = obstacle.center();
    for (name, p) in [("start", x0), ("destination", xd)] {
        if p.len() != obstacle.dimension() {
            return Err(Error::domain(format!("{name} has the wrong dimension")));
        }
        if obstacle.clearance(p) < 0.0 {
            return Err(Error::domain(format!("{name} lies inside the obstacle")));
        }
    }
    if !segment_meets_obstacle(x0, xd, obstacle) {
        return Ok((x0 - xd).norm());
    }
    let (a, b) = (x0 - c, xd - c);
    let (d0, dd) = (a.norm(), b.norm());
    let angle = acos_clamped(a.dot(&b) / (d0 * dd));
    let alpha = (angle - acos_clamped(r / d0) - acos_clamped(r / dd)).max(0.0);
    let tangent = |d: f64| (d * d - r * r).max(0.0).sqrt();
    Ok(tangent(d0) + tangent(dd) + r * alpha)
}

/// Polyline length of the samples; jumps add nothing since `x⁺ = x`.
pub fn path_length(traj: &Trajectory) -> f64 {
    traj.samples
        .windows(2)
        .filter(|w| w[0].time.j == w[1].time.j)
        .map(|w| (&w[1].x - &w[0].x).norm())
        .sum()
}

/// Ratio of the travelled length to the geodesic length. A converged run
/// stops short of the target, so its residual straight segment is added.
pub fn optimality_ratio(traj: &Trajectory, target: &VectorN, oracle: f64) -> f64 {
    let residual = match (traj.status, traj.last()) {
        (RunStatus::Converged, Some(last)) => (&last.x - target).norm(),
        _ => 0.0,
    };
    if oracle > 1e-12 {
        (path_length(traj) + residual) / oracle
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovViolations {
    pub count: usize,
    /// Largest excess of `ΔV` over the allowed slack; 0 without violations.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub status: RunStatus,
    pub min_clearance: f64,
    pub path_length: f64,
    pub oracle_length: f64,
    pub optimality_ratio: f64,
    pub lyapunov_violations: LyapunovViolations,
    pub max_control_gap_at_jumps: f64,
    pub max_plane_deviation: f64,
    pub jumps: usize,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Counts steps on which `V = ½‖x − x_d^m‖²` grows by more than
/// `10·dt²·γ²·V`, taking each flow interval separately.
pub fn lyapunov_check(traj: &Trajectory, scenario: &Scenario, vd: &VirtualDestinations) -> LyapunovViolations {
    let gamma = scenario.gain();
    let mut out = LyapunovViolations { count: 0, worst: 0.0 };
    for w in traj.samples.windows(2) {
        if w[0].time.j != w[1].time.j {
            continue;
        }
        let dest = vd.destination(w[0].m).unwrap_or(scenario.target());
        let v = |x: &VectorN| 0.5 * (x - dest).norm_squared();
        let (v0, v1) = (v(&w[0].x), v(&w[1].x));
        let dt = w[1].time.t - w[0].time.t;
        let excess = v1 - v0 - 10.0 * dt * dt * gamma * gamma * v0;
        if excess > 0.0 {
            out.count += 1;
            out.worst = out.worst.max(excess);
        }
    }
    out
}

/// Largest `‖u(x, m⁻) − u(x, m⁺)‖` over the projection-to-straight jumps.
pub fn projection_exit_gap(traj: &Trajectory, ctrl: &HybridController<'_>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for jr in traj.jump_log.iter().filter(|jr| jr.from.is_projection() && jr.to == Mode::Straight) {
        worst = worst.max((ctrl.control(&jr.x, jr.from)? - ctrl.control(&jr.x, jr.to)?).norm());
    }
    Ok(worst)
}

/// Fills an [`AnalysisReport`] for a finished run.
pub fn verify(traj: &Trajectory, scenario: &Scenario, vd: &VirtualDestinations) -> Result<AnalysisReport> {
    let ctrl = HybridController::new(scenario, vd)?;
    let obstacle = scenario.obstacle();
    let start = traj.start().ok_or_else(|| Error::invalid("trajectory", "no samples"))?;
    let min_clearance = traj
        .samples
        .iter()
        .map(|s| obstacle.clearance(&s.x))
        .fold(f64::INFINITY, f64::min);
    let length = path_length(traj);
    let oracle = shortest_path_oracle(start, scenario.target(), obstacle)?;
    let ratio = optimality_ratio(traj, scenario.target(), oracle);
    let mut gap: f64 = 0.0;
    for jr in &traj.jump_log {
        gap = gap.max((ctrl.control(&jr.x, jr.from)? - ctrl.control(&jr.x, jr.to)?).norm());
    }
    let plane_dev = traj.samples.iter().map(|s| vd.plane.distance(&s.x)).fold(0.0, f64::max);
    Ok(AnalysisReport {
        status: traj.status,
        min_clearance,
        path_length: length,
        oracle_length: oracle,
        optimality_ratio: ratio,
        lyapunov_violations: lyapunov_check(traj, scenario, vd),
        max_control_gap_at_jumps: gap,
        max_plane_deviation: plane_dev,
        jumps: traj.jumps(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Baseline,
    Hybrid,
}

/// One row of the baseline comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub start_id: usize,
    pub law: Law,
    pub status: RunStatus,
    pub jumps: usize,
    pub path_length: f64,
    pub oracle_length: f64,
    pub ratio: f64,
    pub stalled: bool,
}

/// Runs the continuous law and the hybrid law from every start.
pub fn compare_baseline(
    scenario: &Scenario,
    starts: &[VectorN],
    m0: Option<Mode>,
    cfg: &SimConfig,
    stall: StallConfig,
) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::with_capacity(2 * starts.len());
    for (id, x0) in starts.iter().enumerate() {
        let oracle = shortest_path_oracle(x0, scenario.target(), scenario.obstacle())?;
        let row = |law, traj: &Trajectory| {
            ComparisonRow {
                start_id: id,
                law,
                status: traj.status,
                jumps: traj.jumps(),
                path_length: path_length(traj),
                oracle_length: oracle,
                ratio: optimality_ratio(traj, scenario.target(), oracle),
                stalled: traj.status == RunStatus::Stalled,
            }
        };
        let base = simulate_baseline(scenario, x0, cfg, stall)?;
        rows.push(row(Law::Baseline, &base));
        let vd = select_virtual_destinations(scenario, x0, None)?;
        let hybrid = simulate_with(scenario, &vd, x0, m0, cfg)?;
        rows.push(row(Law::Hybrid, &hybrid));
    }
    Ok(rows)
}

pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_order(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::domain("need at least two paired samples"));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::domain("log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("abscissae are all equal"));
    }
    Ok(sxy / sxx)
}
