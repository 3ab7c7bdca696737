//! Hybrid-time simulation of the closed loop.
//!
//! The state flows along `ẋ = u(x, m)` while it stays in the flow set of its
//! mode and jumps (`x⁺ = x`, `m⁺ ∈ M(x, m)`) once it leaves it. Crossings are
//! localized by bisecting the last step.

use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::controller::{baseline_control, select, select_virtual_destinations, HybridController, Mode, VirtualDestinations};
use crate::error::{Error, Result};
use crate::geometry::VectorN;
use crate::world::Scenario;

/// Iterations used to pull a step that penetrated the obstacle back to its boundary.
const OBSTACLE_BISECTIONS: usize = 40;
/// Iterations used to localize a flow-set exit inside one step (`h/1024`).
const EXIT_BISECTIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Euler,
    Rk4,
}

impl FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" | "explicit-euler" => Ok(Integrator::Euler),
            "rk4" => Ok(Integrator::Rk4),
            other => Err(Error::invalid("sim.integrator", format!("unknown integrator `{other}`"))),
        }
    }
}

/// Simulator settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Nominal step size.
    pub h: f64,
    pub max_t: f64,
    pub max_jumps: usize,
    /// Distance to the target at which a run counts as converged.
    pub convergence_tol: f64,
    pub integrator: Integrator,
    /// Admissible penetration of the obstacle before a run is flagged unsafe.
    pub safety_tol: f64,
    /// Relaxation of the flow set while flowing.
    pub flow_tol: f64,
    /// Enlargement of the jump set when a jump is taken.
    pub jump_tol: f64,
    /// Mode chosen when the jump map or the initialization is set-valued.
    pub tie_break: Mode,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            h: 1e-3,
            max_t: 100.0,
            max_jumps: 10,
            convergence_tol: 1e-3,
            integrator: Integrator::Rk4,
            safety_tol: 1e-6,
            flow_tol: 0.0,
            jump_tol: 1e-9,
            tie_break: Mode::Positive,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::invalid("sim.h", "must be positive"));
        }
        if !(self.max_t > 0.0) || self.h > self.max_t {
            return Err(Error::invalid("sim.max_t", "must be positive and at least sim.h"));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::invalid("sim.convergence_tol", "must be positive"));
        }
        if !(self.safety_tol > 0.0) {
            return Err(Error::invalid("sim.safety_tol", "must be positive"));
        }
        if self.tie_break == Mode::Straight {
            return Err(Error::invalid("tie_break", "must be -1 or 1"));
        }
        Ok(())
    }

    fn step_budget(&self) -> usize {
        // partial steps near boundaries count too
        ((self.max_t / self.h).ceil() as usize).saturating_mul(4).max(1000)
    }
}

/// Hybrid time `(t, j)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct HybridTime {
    pub t: f64,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: HybridTime,
    pub x: VectorN,
    pub m: Mode,
    pub u: VectorN,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpRecord {
    /// Hybrid time just before the jump.
    pub time: HybridTime,
    pub from: Mode,
    pub to: Mode,
    pub x: VectorN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Converged,
    Timeout,
    JumpBudget,
    SafetyViolation,
    NumericFailure,
    /// Continuous law stuck at an undesired equilibrium.
    Stalled,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::Timeout => "timeout",
            RunStatus::JumpBudget => "jump-budget",
            RunStatus::SafetyViolation => "safety-violation",
            RunStatus::NumericFailure => "numeric-failure",
            RunStatus::Stalled => "stalled",
        }
    }
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Samples of one solution over its hybrid time domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub jump_log: Vec<JumpRecord>,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn dimension(&self) -> usize {
        self.samples.first().map_or(0, |s| s.x.len())
    }

    pub fn jumps(&self) -> usize {
        self.jump_log.len()
    }

    pub fn start(&self) -> Option<&VectorN> {
        self.samples.first().map(|s| &s.x)
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Writes `t,j,m,x0..,u0..`, one row per sample.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.dimension();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string(), "j".into(), "m".into()];
        header.extend((0..n).map(|i| format!("x{i}")));
        header.extend((0..n).map(|i| format!("u{i}")));
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![s.time.t.to_string(), s.time.j.to_string(), s.m.to_string()];
            row.extend(s.x.iter().map(f64::to_string));
            row.extend(s.u.iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a trajectory written by [`write_csv`](Self::write_csv).
    ///
    /// The jump log is rebuilt from rows where `j` increments, and the status
    /// is set to `converged`; callers decide the actual outcome.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        let n = headers.iter().filter(|h| h.starts_with('x')).count();
        if headers.len() != 3 + 2 * n || n == 0 {
            return Err(Error::invalid("trajectory", "header must be t,j,m,x0..,u0.."));
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| Error::invalid("trajectory", format!("bad {what} value `{s}`")))
        };
        let mut samples: Vec<Sample> = Vec::new();
        let mut jump_log = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let t = parse(&rec[0], "t")?;
            let j = rec[1]
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid("trajectory", "bad j value"))?;
            let m = rec[2]
                .trim()
                .parse::<i64>()
                .ok()
                .and_then(Mode::from_value)
                .ok_or_else(|| Error::invalid("trajectory", "bad m value"))?;
            let x = (0..n).map(|i| parse(&rec[3 + i], "x")).collect::<Result<Vec<_>>>()?;
            let u = (0..n).map(|i| parse(&rec[3 + n + i], "u")).collect::<Result<Vec<_>>>()?;
            let sample = Sample {
                time: HybridTime { t, j },
                x: VectorN::from_vec(x),
                m,
                u: VectorN::from_vec(u),
            };
            if let Some(prev) = samples.last() {
                if sample.time.j > prev.time.j {
                    jump_log.push(JumpRecord {
                        time: prev.time,
                        from: prev.m,
                        to: sample.m,
                        x: prev.x.clone(),
                    });
                }
            }
            samples.push(sample);
        }
        Ok(Self {
            samples,
            jump_log,
            status: RunStatus::Converged,
        })
    }
}

fn step_with<F>(field: F, x: &VectorN, h: f64, integrator: Integrator) -> Result<VectorN>
where
    F: Fn(&VectorN) -> Result<VectorN>,
{
    match integrator {
        Integrator::Euler => Ok(x + field(x)? * h),
        Integrator::Rk4 => {
            let k1 = field(x)?;
            let k2 = field(&(x + &k1 * (h / 2.0)))?;
            let k3 = field(&(x + &k2 * (h / 2.0)))?;
            let k4 = field(&(x + &k3 * h))?;
            Ok(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
        }
    }
}

/// One integrator step of `field`; if it ends deeper than `safety_tol` inside
/// the obstacle, the step is shortened by bisection until it lands within
/// `safety_tol` of the boundary. A remaining shallow penetration is removed
/// by radial projection onto the sphere, where exact solutions slide.
/// Returns the new position and the time used.
fn guarded_step<F>(
    scenario: &Scenario,
    field: F,
    x: &VectorN,
    h: f64,
    integrator: Integrator,
    safety_tol: f64,
) -> Result<(VectorN, f64)>
where
    F: Fn(&VectorN) -> Result<VectorN>,
{
    let obstacle = scenario.obstacle();
    let mut next = step_with(&field, x, h, integrator)?;
    let mut dt = h;
    let clearance = obstacle.clearance(&next);
    if clearance < -safety_tol {
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut best = (x.clone(), 0.0);
        for _ in 0..OBSTACLE_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            let trial = step_with(&field, x, mid * h, integrator)?;
            let cl = obstacle.clearance(&trial);
            if cl >= -safety_tol {
                lo = mid;
                best = (trial, mid * h);
                if cl <= safety_tol {
                    break;
                }
            } else {
                hi = mid;
            }
        }
        (next, dt) = best;
    }
    if obstacle.clearance(&next) < 0.0 {
        next = project_to_surface(obstacle, &next);
    }
    Ok((next, dt))
}

fn project_to_surface(obstacle: &crate::world::Obstacle, x: &VectorN) -> VectorN {
    let c = obstacle.center();
    let offset = x - c;
    let d = offset.norm();
    if d == 0.0 {
        return x.clone();
    }
    let mut scale = obstacle.radius() / d;
    let mut p = c + &offset * scale;
    while obstacle.clearance(&p) < 0.0 {
        scale *= 1.0 + f64::EPSILON;
        p = c + &offset * scale;
    }
    p
}

/// One flow step of the hybrid closed loop with the mode held fixed.
/// Returns the new state and the time actually advanced.
pub fn flow_step(
    ctrl: &HybridController<'_>,
    s: &crate::controller::HybridState,
    h: f64,
    integrator: Integrator,
    safety_tol: f64,
) -> Result<(crate::controller::HybridState, f64)> {
    let m = s.m;
    let (x, dt) = guarded_step(ctrl.scenario(), |p| ctrl.control(p, m), &s.x, h, integrator, safety_tol)?;
    Ok((crate::controller::HybridState::new(x, m), dt))
}

/// Applies the jump map at `s`, resolving set-valued outcomes with `tie_break`.
pub fn resolve_jump(
    ctrl: &HybridController<'_>,
    s: &crate::controller::HybridState,
    tie_break: Mode,
) -> Result<crate::controller::HybridState> {
    let modes = ctrl.jump_map(&s.x, s.m);
    let m = select(&modes, tie_break).ok_or_else(|| Error::Internal(format!("empty jump map at {:?}", s.x.as_slice())))?;
    Ok(crate::controller::HybridState::new(s.x.clone(), m))
}

struct Recorder {
    samples: Vec<Sample>,
    jump_log: Vec<JumpRecord>,
}

impl Recorder {
    fn push(&mut self, t: f64, j: usize, x: &VectorN, m: Mode, u: VectorN) {
        self.samples.push(Sample {
            time: HybridTime { t, j },
            x: x.clone(),
            m,
            u,
        });
    }

    fn finish(self, status: RunStatus) -> Trajectory {
        Trajectory {
            samples: self.samples,
            jump_log: self.jump_log,
            status,
        }
    }
}

fn is_finite(x: &VectorN) -> bool {
    x.iter().all(|v| v.is_finite())
}

/// Simulates the hybrid closed loop from `x0`, choosing virtual destinations
/// in the plane of `x0`. Without `m0` the mode is initialized to keep the
/// path shortest.
pub fn simulate(scenario: &Scenario, x0: &VectorN, m0: Option<Mode>, cfg: &SimConfig) -> Result<Trajectory> {
    scenario.check_start(x0)?;
    let vd = select_virtual_destinations(scenario, x0, None)?;
    simulate_with(scenario, &vd, x0, m0, cfg)
}

/// Simulates with a given pair of virtual destinations.
pub fn simulate_with(
    scenario: &Scenario,
    vd: &VirtualDestinations,
    x0: &VectorN,
    m0: Option<Mode>,
    cfg: &SimConfig,
) -> Result<Trajectory> {
    use crate::controller::HybridState;

    cfg.validate()?;
    scenario.check_start(x0)?;
    let ctrl = HybridController::new(scenario, vd)?;
    let target = scenario.target();
    let mut state = HybridState::new(x0.clone(), m0.unwrap_or_else(|| ctrl.initialize_mode(x0, cfg.tie_break)));
    let mut t = 0.0;
    let mut j = 0;
    let mut rec = Recorder {
        samples: Vec::new(),
        jump_log: Vec::new(),
    };
    rec.push(t, j, &state.x, state.m, ctrl.control(&state.x, state.m)?);

    let converged = |x: &VectorN| (x - target).norm() <= cfg.convergence_tol;
    let jump = |state: &mut HybridState, j: &mut usize, rec: &mut Recorder, t: f64| -> Result<()> {
        let next = resolve_jump(&ctrl, state, cfg.tie_break)?;
        rec.jump_log.push(JumpRecord {
            time: HybridTime { t, j: *j },
            from: state.m,
            to: next.m,
            x: state.x.clone(),
        });
        *j += 1;
        *state = next;
        rec.push(t, *j, &state.x, state.m, ctrl.control(&state.x, state.m)?);
        Ok(())
    };

    let budget = cfg.step_budget();
    let mut steps = 0;
    loop {
        if converged(&state.x) {
            return Ok(rec.finish(RunStatus::Converged));
        }
        if !ctrl.in_flow_set(&state.x, state.m, cfg.flow_tol) {
            debug_assert!(ctrl.in_jump_set(&state.x, state.m, cfg.jump_tol));
            if j >= cfg.max_jumps {
                return Ok(rec.finish(RunStatus::JumpBudget));
            }
            jump(&mut state, &mut j, &mut rec, t)?;
            continue;
        }
        if t >= cfg.max_t || steps >= budget {
            return Ok(rec.finish(RunStatus::Timeout));
        }
        steps += 1;
        let h = cfg.h.min(cfg.max_t - t).max(f64::MIN_POSITIVE);
        let (mut next, mut dt) = match flow_step(&ctrl, &state, h, cfg.integrator, cfg.safety_tol) {
            Ok(v) => v,
            Err(Error::Domain(_)) => return Ok(rec.finish(RunStatus::NumericFailure)),
            Err(e) => return Err(e),
        };
        if !is_finite(&next.x) {
            return Ok(rec.finish(RunStatus::NumericFailure));
        }
        if !ctrl.in_flow_set(&next.x, state.m, cfg.flow_tol) {
            // localize the exit: `lo` stays in the flow set, `hi` does not
            let (mut lo, mut hi) = (0.0, dt);
            for _ in 0..EXIT_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                let (trial, used) = flow_step(&ctrl, &state, mid, cfg.integrator, cfg.safety_tol)?;
                if ctrl.in_flow_set(&trial.x, state.m, cfg.flow_tol) {
                    lo = used;
                } else {
                    hi = used;
                    next = trial;
                    dt = used;
                }
            }
        }
        t += dt;
        state = next;
        if scenario.obstacle().clearance(&state.x) < -cfg.safety_tol {
            rec.push(t, j, &state.x, state.m, ctrl.control(&state.x, state.m)?);
            return Ok(rec.finish(RunStatus::SafetyViolation));
        }
        let u = match ctrl.control(&state.x, state.m) {
            Ok(u) => u,
            Err(Error::Domain(_)) => return Ok(rec.finish(RunStatus::NumericFailure)),
            Err(e) => return Err(e),
        };
        rec.push(t, j, &state.x, state.m, u);
    }
}

/// Thresholds for declaring the continuous law stalled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StallConfig {
    pub speed: f64,
    pub steps: usize,
}

impl Default for StallConfig {
    fn default() -> Self {
        Self { speed: 1e-9, steps: 1000 }
    }
}

/// Integrates the continuous (non-hybrid) law. All samples carry mode 0.
pub fn simulate_baseline(scenario: &Scenario, x0: &VectorN, cfg: &SimConfig, stall: StallConfig) -> Result<Trajectory> {
    cfg.validate()?;
    scenario.check_start(x0)?;
    let target = scenario.target();
    let mut rec = Recorder {
        samples: Vec::new(),
        jump_log: Vec::new(),
    };
    let mut x = x0.clone();
    let mut t = 0.0;
    let mut u = baseline_control(&x, scenario)?;
    rec.push(t, 0, &x, Mode::Straight, u.clone());
    let mut slow = 0;
    let budget = cfg.step_budget();
    let mut steps = 0;
    loop {
        if (&x - target).norm() <= cfg.convergence_tol {
            return Ok(rec.finish(RunStatus::Converged));
        }
        if u.norm() < stall.speed {
            slow += 1;
            if slow >= stall.steps {
                return Ok(rec.finish(RunStatus::Stalled));
            }
        } else {
            slow = 0;
        }
        if t >= cfg.max_t || steps >= budget {
            return Ok(rec.finish(RunStatus::Timeout));
        }
        steps += 1;
        let h = cfg.h.min(cfg.max_t - t).max(f64::MIN_POSITIVE);
        let (next, dt) = guarded_step(scenario, |p| baseline_control(p, scenario), &x, h, cfg.integrator, cfg.safety_tol)?;
        if !is_finite(&next) {
            return Ok(rec.finish(RunStatus::NumericFailure));
        }
        x = next;
        t += dt;
        u = baseline_control(&x, scenario)?;
        rec.push(t, 0, &x, Mode::Straight, u.clone());
        if scenario.obstacle().clearance(&x) < -cfg.safety_tol {
            return Ok(rec.finish(RunStatus::SafetyViolation));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controller::HybridState;
    use crate::geometry::vector;
    use crate::world::Obstacle;
    use approx::assert_abs_diff_eq;

    fn planar() -> Scenario {
        Scenario::with_defaults(Obstacle::new(vector(&[0., -5.]), 2.0).unwrap(), vector(&[0., 0.])).unwrap()
    }

    #[test]
    fn rk4_step_matches_exponential() {
        let s = planar();
        let x = vector(&[2., 0.]);
        let vd = select_virtual_destinations(&s, &vector(&[3., -9.]), None).unwrap();
        let ctrl = HybridController::new(&s, &vd).unwrap();
        let st = HybridState::new(x.clone(), Mode::Straight);
        let (next, dt) = flow_step(&ctrl, &st, 0.1, Integrator::Rk4, 1e-6).unwrap();
        assert_eq!(dt, 0.1);
        assert_abs_diff_eq!(next.x[0], 2.0 * (-0.1f64).exp(), epsilon = 1e-6);
        assert_abs_diff_eq!(next.x[0], 1.809674836, epsilon = 1e-6);
        let (euler, _) = flow_step(&ctrl, &st, 0.1, Integrator::Euler, 1e-6).unwrap();
        // Euler local error is O(h²): 2·h²/2 = 0.01
        assert!((euler.x[0] - next.x[0]).abs() < 0.011);
        assert_eq!(next.m, Mode::Straight);
    }

    #[test]
    fn converged_at_start() {
        let s = planar();
        let traj = simulate(&s, s.target(), None, &SimConfig::default()).unwrap();
        assert_eq!(traj.status, RunStatus::Converged);
        assert_eq!(traj.samples.len(), 1);
        assert_eq!(traj.jumps(), 0);
    }

    #[test]
    fn visible_start_runs_straight() {
        let s = planar();
        let x0 = vector(&[6., 3.]);
        let traj = simulate(&s, &x0, None, &SimConfig::default()).unwrap();
        assert_eq!(traj.status, RunStatus::Converged);
        assert_eq!(traj.jumps(), 0);
        let dir = x0.normalize();
        for smp in &traj.samples {
            let perp = &smp.x - &dir * dir.dot(&smp.x);
            assert!(perp.norm() < 1e-6);
        }
    }

    #[test]
    fn axis_start_from_straight_mode_jumps_twice() {
        let s = planar();
        let traj = simulate(&s, &vector(&[0., -10.]), Some(Mode::Straight), &SimConfig::default()).unwrap();
        assert_eq!(traj.status, RunStatus::Converged);
        assert_eq!(traj.jumps(), 2);
        assert_eq!(traj.jump_log[0].from, Mode::Straight);
        assert!(traj.jump_log[0].to.is_projection());
        assert_eq!(traj.jump_log[1].to, Mode::Straight);
        for jr in &traj.jump_log {
            // x⁺ = x: the rows on either side of the jump share the position
            let idx = traj.samples.iter().position(|s| s.time.j == jr.time.j + 1).unwrap();
            assert_eq!(traj.samples[idx].x, traj.samples[idx - 1].x);
            assert_eq!(traj.samples[idx].time.t, traj.samples[idx - 1].time.t);
        }
    }

    #[test]
    fn resolve_jump_examples() {
        let s = planar();
        let x0 = vector(&[0.3, -9.]);
        let vd = select_virtual_destinations(&s, &x0, None).unwrap();
        let ctrl = HybridController::new(&s, &vd).unwrap();
        let out = resolve_jump(&ctrl, &HybridState::new(x0.clone(), Mode::Straight), Mode::Positive).unwrap();
        assert!(out.m.is_projection());
        assert_eq!(out.x, x0);
        assert!(ctrl.in_flow_set(&out.x, out.m, 0.0));
        let deep = s.obstacle().center() + vd.v_plus.normalize() * 6.0;
        let out = resolve_jump(&ctrl, &HybridState::new(deep, Mode::Positive), Mode::Positive).unwrap();
        assert_eq!(out.m, Mode::Straight);
    }

    #[test]
    fn sample_spacing_and_clearance() {
        let s = planar();
        let cfg = SimConfig::default();
        for x0 in [vector(&[1.0, -10.]), vector(&[-2.5, -8.5]), vector(&[0., -7.01])] {
            let traj = simulate(&s, &x0, None, &cfg).unwrap();
            assert_eq!(traj.status, RunStatus::Converged, "{x0:?}");
            for w in traj.samples.windows(2) {
                if w[0].time.j == w[1].time.j {
                    let gap = w[1].time.t - w[0].time.t;
                    assert!(gap > 0.0 && gap <= cfg.h * (1.0 + 1e-12));
                }
                assert!(s.obstacle().clearance(&w[1].x) >= -cfg.safety_tol);
            }
        }
    }

    #[test]
    fn boundary_start_keeps_clearance() {
        let s = planar();
        let cfg = SimConfig::default();
        for a in [-1.2f64, -1.5, -1.8, -2.0] {
            let x0 = s.obstacle().center() + vector(&[a.cos(), a.sin()]) * 2.0;
            let traj = simulate(&s, &x0, None, &cfg).unwrap();
            assert_eq!(traj.status, RunStatus::Converged);
            let worst = traj.samples.iter().map(|p| s.obstacle().clearance(&p.x)).fold(f64::INFINITY, f64::min);
            assert!(worst >= -cfg.safety_tol, "{worst}");
        }
    }

    #[test]
    fn baseline_stalls_on_axis() {
        let s = planar();
        let traj = simulate_baseline(&s, &vector(&[0., -10.]), &SimConfig::default(), StallConfig::default()).unwrap();
        assert_eq!(traj.status, RunStatus::Stalled);
        let traj = simulate_baseline(&s, &vector(&[0.5, -10.]), &SimConfig::default(), StallConfig::default()).unwrap();
        assert_eq!(traj.status, RunStatus::Converged);
    }

    #[test]
    fn csv_round_trip() {
        let s = planar();
        let traj = simulate(&s, &vector(&[0., -10.]), Some(Mode::Straight), &SimConfig { h: 1e-2, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,j,m,x0,x1,u0,u1\n"));
        let back = Trajectory::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.samples, traj.samples);
        assert_eq!(back.jump_log, traj.jump_log);
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig { h: 0.0, ..Default::default() }.validate().is_err());
        assert!(SimConfig { h: 2.0, max_t: 1.0, ..Default::default() }.validate().is_err());
        assert!(SimConfig { tie_break: Mode::Straight, ..Default::default() }.validate().is_err());
        assert_eq!("RK4".parse::<Integrator>().unwrap(), Integrator::Rk4);
        assert_eq!("explicit-euler".parse::<Integrator>().unwrap(), Integrator::Euler);
        assert!("leapfrog".parse::<Integrator>().is_err());
    }
}
