//! Continuous and hybrid feedback laws, flow/jump sets and the jump map.
//!
//! The hybrid controller carries a discrete mode: `Straight` drives the robot
//! towards the target along a line, while `Positive`/`Negative` steer it
//! along the cone enclosing the obstacle towards one of two virtual
//! destinations placed on the hat of the target's enclosing cone. The
//! virtual destinations are mirror images of each other through the axis
//! from the target to the obstacle centre.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{
    angle_between, plane_through, reflect, Cone, HalfSpace, PlaneBasis, Sense, VectorN, GRAM_MIN,
};
use crate::world::{Scenario, Shadow};

/// Discrete controller mode `m ∈ {−1, 0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Negative,
    Straight,
    Positive,
}

impl Mode {
    pub fn value(self) -> i8 {
        match self {
            Mode::Negative => -1,
            Mode::Straight => 0,
            Mode::Positive => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            -1 => Some(Mode::Negative),
            0 => Some(Mode::Straight),
            1 => Some(Mode::Positive),
            _ => None,
        }
    }

    pub fn is_projection(self) -> bool {
        self != Mode::Straight
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Mode::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("mode must be -1, 0 or 1, got {v}")))
    }
}

/// Position paired with the controller mode.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    pub x: VectorN,
    pub m: Mode,
}

impl HybridState {
    pub fn new(x: VectorN, m: Mode) -> Self {
        Self { x, m }
    }
}

/// The two virtual destinations and the quantities derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualDestinations {
    /// Virtual destination of mode `+1`.
    pub xd_plus: VectorN,
    /// Virtual destination of mode `−1`.
    pub xd_minus: VectorN,
    /// Motion plane: origin at the target, `b1` towards the obstacle centre.
    pub plane: PlaneBasis,
    /// `c − x_d^{+1}`.
    pub v_plus: VectorN,
    /// `c − x_d^{−1}`.
    pub v_minus: VectorN,
    /// `x_d^{−1} − x_d^{+1}`.
    pub w: VectorN,
    /// Half-aperture of the hysteresis cones around `v_plus` and `v_minus`.
    pub phi: f64,
}

impl VirtualDestinations {
    pub fn destination(&self, m: Mode) -> Option<&VectorN> {
        match m {
            Mode::Positive => Some(&self.xd_plus),
            Mode::Negative => Some(&self.xd_minus),
            Mode::Straight => None,
        }
    }

    pub fn axis(&self, m: Mode) -> Option<&VectorN> {
        match m {
            Mode::Positive => Some(&self.v_plus),
            Mode::Negative => Some(&self.v_minus),
            Mode::Straight => None,
        }
    }
}

/// Deterministic in-plane direction used when the start lies on the line
/// through the target and the obstacle centre: the coordinate axis with the
/// largest component orthogonal to `axis`, lowest index on ties.
fn default_fallback(axis: &VectorN) -> VectorN {
    let n = axis.len();
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..n {
        // ‖π⊥(â) e_i‖² = 1 − â_i²
        let val = 1.0 - axis[i] * axis[i];
        if val > best_val + 1e-15 {
            best = i;
            best_val = val;
        }
    }
    let mut e = VectorN::zeros(n);
    e[best] = 1.0;
    e
}

/// Unit vector orthogonal to `axis` within span{axis, dir}, or `None` when
/// `dir` is parallel to `axis`.
fn orthogonal_direction(axis: &VectorN, dir: &VectorN) -> Option<VectorN> {
    let gram = dir.norm_squared() - axis.dot(dir).powi(2);
    if !(gram > GRAM_MIN) {
        return None;
    }
    let perp = dir - axis * axis.dot(dir);
    let n = perp.norm();
    (n > 0.0).then(|| perp / n)
}

/// Hysteresis-cone half-aperture `κ · min{ψ/2, (π − ψ)/2}`, `ψ = ∠(v₁, v₋₁)`.
fn phi_for(v_plus: &VectorN, v_minus: &VectorN, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::invalid("kappa", format!("must lie in (0, 1), got {kappa}")));
    }
    let psi = angle_between(v_plus, v_minus)?;
    if psi <= f64::EPSILON || psi >= std::f64::consts::PI - f64::EPSILON {
        return Err(Error::domain(format!(
            "virtual destinations are degenerate (angle between v₁ and v₋₁ is {psi})"
        )));
    }
    Ok(kappa * (psi / 2.0).min((std::f64::consts::PI - psi) / 2.0))
}

/// Hysteresis-cone half-aperture for a pair of virtual destinations.
pub fn design_phi(vd: &VirtualDestinations, kappa: f64) -> Result<f64> {
    phi_for(&vd.v_plus, &vd.v_minus, kappa)
}

/// Places the virtual destinations in the plane through the target, the
/// obstacle centre and `x0`.
///
/// With `â = (c − x_d)/‖c − x_d‖`, `b̂` the unit in-plane direction orthogonal
/// to `â` pointing towards `x0`, and `θ_d` the target's half-aperture, the
/// destinations are `x_d + e(cos θ_d â ± sin θ_d b̂)`. When `x0` is on the
/// line through target and centre, `fallback_dir` (or a coordinate axis)
/// defines the plane instead.
pub fn select_virtual_destinations(
    scenario: &Scenario,
    x0: &VectorN,
    fallback_dir: Option<&VectorN>,
) -> Result<VirtualDestinations> {
    let target = scenario.target();
    let c = scenario.obstacle().center();
    if x0.len() != scenario.dimension() {
        return Err(Error::invalid("starts", "dimension mismatch"));
    }
    let a = (c - target).normalize();
    let b = match orthogonal_direction(&a, &(x0 - target)) {
        Some(b) => b,
        None => {
            let dir = match fallback_dir {
                Some(d) => d.clone(),
                None => default_fallback(&a),
            };
            if dir.len() != scenario.dimension() {
                return Err(Error::invalid("fallback_dir", "dimension mismatch"));
            }
            orthogonal_direction(&a, &dir).ok_or_else(|| {
                Error::invalid("fallback_dir", "must not be parallel to the target-centre line")
            })?
        }
    };
    let theta_d = scenario.obstacle().half_aperture(target)?;
    let e = scenario.hat_offset();
    let along = &a * (e * theta_d.cos());
    let side = &b * (e * theta_d.sin());
    let xd_plus = target + &along + &side;
    let xd_minus = target + &along - &side;
    let plane = plane_through(target, c, &(target + &b))?;
    let v_plus = c - &xd_plus;
    let v_minus = c - &xd_minus;
    let phi = phi_for(&v_plus, &v_minus, scenario.cone_fraction())?;
    Ok(VirtualDestinations {
        w: &xd_minus - &xd_plus,
        xd_plus,
        xd_minus,
        plane,
        v_plus,
        v_minus,
        phi,
    })
}

/// Checks the defining identities of a virtual-destination pair.
pub fn check_virtual_destinations(vd: &VirtualDestinations, scenario: &Scenario, tol: f64) -> Result<()> {
    let target = scenario.target();
    let shadow = scenario.target_shadow();
    for (name, p) in [("xd_plus", &vd.xd_plus), ("xd_minus", &vd.xd_minus)] {
        let off = ((p - target).norm() - scenario.hat_offset()).abs();
        if off > tol {
            return Err(Error::Internal(format!("{name} is not at distance e from the target ({off:e})")));
        }
        if shadow.cone_margin(p).abs() > tol {
            return Err(Error::Internal(format!("{name} is off the enclosing cone")));
        }
        if shadow.exit_contains(p, 0.0) {
            return Err(Error::Internal(format!("{name} lies on the exit set")));
        }
    }
    let axis = (scenario.obstacle().center() - target).normalize();
    let mirrored = target - reflect(&axis, &(&vd.xd_plus - target))?;
    if (mirrored - &vd.xd_minus).norm() > tol {
        return Err(Error::Internal("virtual destinations are not mirror images".into()));
    }
    let bound = {
        let psi = angle_between(&vd.v_plus, &vd.v_minus)?;
        (psi / 2.0).min((std::f64::consts::PI - psi) / 2.0)
    };
    if !(vd.phi < bound) {
        return Err(Error::Internal("hysteresis cones overlap".into()));
    }
    Ok(())
}

/// Nominal velocity towards `dest` projected onto the cone from `x` enclosing
/// the obstacle: `u_d − τ (c − x)/‖c − x‖` with `τ = ‖u_d‖ sin(θ − β)/sin θ`.
///
/// Returns the velocity together with `β` and `θ`.
fn cone_projected(scenario: &Scenario, x: &VectorN, dest: &VectorN) -> Result<(VectorN, f64, f64)> {
    let obstacle = scenario.obstacle();
    let to_center = obstacle.center() - x;
    let dc = to_center.norm();
    if dc == 0.0 {
        return Err(Error::domain("position coincides with the obstacle centre"));
    }
    let nominal = (dest - x) * scenario.gain();
    let speed = nominal.norm();
    let r = obstacle.radius();
    // cot θ from the tangent length; points within rounding of the sphere count as on it
    let excess = dc * dc - r * r;
    let cot = if excess <= 8.0 * f64::EPSILON * r * r { 0.0 } else { excess.sqrt() / r };
    let theta = cot.recip().atan();
    if speed == 0.0 {
        return Ok((nominal, 0.0, theta));
    }
    let beta = crate::geometry::acos_clamped(to_center.dot(&nominal) / (dc * speed));
    // speed · sin(θ − β) / sin θ
    let tau = speed * (beta.cos() - cot * beta.sin());
    Ok((nominal - to_center * (tau / dc), beta, theta))
}

/// Continuous law: straight to the target when visible, otherwise slide along
/// the enclosing cone. Its undesired equilibria are the half-line behind the
/// obstacle on the line through target and centre.
pub fn baseline_control(x: &VectorN, scenario: &Scenario) -> Result<VectorN> {
    let target = scenario.target();
    if !scenario.target_shadow().contains(x, 0.0) {
        return Ok((target - x) * scenario.gain());
    }
    Ok(cone_projected(scenario, x, target)?.0)
}

/// Hybrid controller bound to one scenario and one pair of virtual destinations.
#[derive(Debug, Clone)]
pub struct HybridController<'a> {
    scenario: &'a Scenario,
    vd: &'a VirtualDestinations,
    target_shadow: Shadow,
    plus_shadow: Shadow,
    minus_shadow: Shadow,
    plus_cone: Cone,
    minus_cone: Cone,
    split: HalfSpace,
}

impl<'a> HybridController<'a> {
    pub fn new(scenario: &'a Scenario, vd: &'a VirtualDestinations) -> Result<Self> {
        let obstacle = scenario.obstacle();
        let c = obstacle.center().clone();
        Ok(Self {
            target_shadow: scenario.target_shadow(),
            plus_shadow: Shadow::new(&vd.xd_plus, obstacle)?,
            minus_shadow: Shadow::new(&vd.xd_minus, obstacle)?,
            plus_cone: Cone::new(c.clone(), &vd.v_plus, vd.phi, Sense::Le)?,
            minus_cone: Cone::new(c.clone(), &vd.v_minus, vd.phi, Sense::Le)?,
            split: HalfSpace::new(c, &vd.w, Sense::Lt)?,
            scenario,
            vd,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    pub fn destinations(&self) -> &VirtualDestinations {
        self.vd
    }

    fn shadow(&self, m: Mode) -> &Shadow {
        match m {
            Mode::Positive => &self.plus_shadow,
            Mode::Negative => &self.minus_shadow,
            Mode::Straight => &self.target_shadow,
        }
    }

    fn hysteresis_cone(&self, m: Mode) -> &Cone {
        match m {
            Mode::Negative => &self.minus_cone,
            _ => &self.plus_cone,
        }
    }

    /// Control input `u(x, m)`.
    pub fn control(&self, x: &VectorN, m: Mode) -> Result<VectorN> {
        let Some(dest) = self.vd.destination(m) else {
            return Ok((self.scenario.target() - x) * self.scenario.gain());
        };
        let dist = (x - dest).norm();
        if dist == 0.0 {
            return Err(Error::domain("position coincides with the virtual destination"));
        }
        let (u, beta, theta) = cone_projected(self.scenario, x, dest)?;
        let mu = 1.0 + self.scenario.hat_offset() / dist * (beta / theta);
        Ok(u * mu)
    }

    /// Membership in the flow set of mode `m`, each defining inequality relaxed by `tol`.
    pub fn in_flow_set(&self, x: &VectorN, m: Mode, tol: f64) -> bool {
        match m {
            // closure of the visible set
            Mode::Straight => !self.target_shadow.interior_contains(x, tol),
            _ => self.shadow(m).contains(x, tol) && self.hysteresis_cone(m).margin(x) <= tol,
        }
    }

    /// Membership in the jump set of mode `m`, enlarged by `tol`.
    pub fn in_jump_set(&self, x: &VectorN, m: Mode, tol: f64) -> bool {
        match m {
            Mode::Straight => self.target_shadow.contains(x, tol),
            _ => {
                let shadow = self.shadow(m);
                shadow.cone_margin(x) <= tol
                    || shadow.rear_margin(x) <= tol
                    || (x - shadow.dest()).norm() <= tol
                    || self.hysteresis_cone(m).margin(x) >= -tol
            }
        }
    }

    /// Modes reachable by a jump from `(x, m)`, in increasing order.
    pub fn jump_map(&self, x: &VectorN, m: Mode) -> Vec<Mode> {
        if m.is_projection() {
            return vec![Mode::Straight];
        }
        // closed exteriors of the two hysteresis cones
        let outside_plus = self.plus_cone.margin(x) <= 0.0;
        let outside_minus = self.minus_cone.margin(x) <= 0.0;
        let mut modes = Vec::with_capacity(2);
        if outside_minus && !outside_plus {
            modes.push(Mode::Negative);
        }
        if outside_plus && !outside_minus {
            modes.push(Mode::Positive);
        }
        if outside_plus && outside_minus {
            modes.extend([Mode::Negative, Mode::Positive]);
        }
        modes
    }

    /// Mode selection at the initial position that keeps the path shortest.
    ///
    /// Visible starts use `Straight`. Shadowed starts in both projection flow
    /// sets pick the side of the hyperplane through `c` orthogonal to `w`,
    /// with `tie_break` on the hyperplane. A start in exactly one projection
    /// flow set takes that mode; a start in neither takes the jump map's choice.
    pub fn initialize_mode(&self, x0: &VectorN, tie_break: Mode) -> Mode {
        if self.in_flow_set(x0, Mode::Straight, 0.0) {
            return Mode::Straight;
        }
        let plus = self.in_flow_set(x0, Mode::Positive, 0.0);
        let minus = self.in_flow_set(x0, Mode::Negative, 0.0);
        match (plus, minus) {
            (true, true) => {
                let d = self.split.signed_distance(x0);
                let tol = 1e-12 * (1.0 + (x0 - self.split_anchor()).norm());
                if d < -tol {
                    Mode::Positive
                } else if d > tol {
                    Mode::Negative
                } else {
                    tie_break
                }
            }
            (true, false) => Mode::Positive,
            (false, true) => Mode::Negative,
            (false, false) => select(&self.jump_map(x0, Mode::Straight), tie_break).unwrap_or(tie_break),
        }
    }

    fn split_anchor(&self) -> &VectorN {
        self.scenario.obstacle().center()
    }
}

/// Picks `tie_break` when it is admissible, otherwise the single admissible mode.
pub fn select(modes: &[Mode], tie_break: Mode) -> Option<Mode> {
    if modes.contains(&tie_break) {
        Some(tie_break)
    } else {
        modes.first().copied()
    }
}

pub fn hybrid_control(s: &HybridState, vd: &VirtualDestinations, scenario: &Scenario) -> Result<VectorN> {
    HybridController::new(scenario, vd)?.control(&s.x, s.m)
}

pub fn in_flow_set(s: &HybridState, vd: &VirtualDestinations, scenario: &Scenario, tol: f64) -> Result<bool> {
    Ok(HybridController::new(scenario, vd)?.in_flow_set(&s.x, s.m, tol))
}

pub fn in_jump_set(s: &HybridState, vd: &VirtualDestinations, scenario: &Scenario, tol: f64) -> Result<bool> {
    Ok(HybridController::new(scenario, vd)?.in_jump_set(&s.x, s.m, tol))
}

pub fn jump_map(s: &HybridState, vd: &VirtualDestinations, scenario: &Scenario) -> Result<Vec<Mode>> {
    Ok(HybridController::new(scenario, vd)?.jump_map(&s.x, s.m))
}

pub fn initialize_mode(x0: &VectorN, vd: &VirtualDestinations, scenario: &Scenario, tie_break: Mode) -> Result<Mode> {
    Ok(HybridController::new(scenario, vd)?.initialize_mode(x0, tie_break))
}
