//! Obstacle, scenario and the free-space sets: shadow, exit and visible.
//!
//! For a destination `d` the shadow region is the part of the free space that
//! lies inside the cone from `d` enclosing the obstacle and behind the sphere
//! with diameter `[c, d]`; points there have no line of sight to `d`.

use crate::error::{Error, Result};
use crate::geometry::{asin_clamped, VectorN};

/// Default hat offset of the virtual destinations.
pub const DEFAULT_HAT_OFFSET: f64 = 0.1;
/// Default fraction of the admissible hysteresis-cone half-aperture.
pub const DEFAULT_CONE_FRACTION: f64 = 0.5;

/// Spherical obstacle `B(c, r)`; the free space is everything outside its interior.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    center: VectorN,
    radius: f64,
}

impl Obstacle {
    pub fn new(center: VectorN, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("obstacle.radius", format!("must be positive, got {radius}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("obstacle.center", "coordinates must be finite"));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &VectorN {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    /// `‖q − c‖ − r`; negative inside the obstacle.
    pub fn clearance(&self, q: &VectorN) -> f64 {
        (q - &self.center).norm() - self.radius
    }

    /// Half-aperture `arcsin(r/‖q − c‖)` of the cone from `q` enclosing the obstacle.
    pub fn half_aperture(&self, q: &VectorN) -> Result<f64> {
        let d = (q - &self.center).norm();
        if d < self.radius {
            return Err(Error::domain(format!(
                "point lies inside the obstacle (distance {d} < radius {})",
                self.radius
            )));
        }
        Ok(asin_clamped(self.radius / d))
    }
}

pub fn half_aperture(q: &VectorN, obstacle: &Obstacle) -> Result<f64> {
    obstacle.half_aperture(q)
}

pub fn clearance(q: &VectorN, obstacle: &Obstacle) -> f64 {
    obstacle.clearance(q)
}

/// Shadow region of one destination, with its cone data precomputed.
#[derive(Debug, Clone)]
pub struct Shadow {
    dest: VectorN,
    center: VectorN,
    axis: VectorN,
    dist: f64,
    cos_half: f64,
}

impl Shadow {
    pub fn new(dest: &VectorN, obstacle: &Obstacle) -> Result<Self> {
        let delta = obstacle.center() - dest;
        let dist = delta.norm();
        if dist <= obstacle.radius() {
            return Err(Error::domain("destination must lie outside the obstacle"));
        }
        let sin_half = obstacle.radius() / dist;
        Ok(Self {
            dest: dest.clone(),
            center: obstacle.center().clone(),
            axis: delta / dist,
            dist,
            cos_half: (1.0 - sin_half * sin_half).sqrt(),
        })
    }

    pub fn dest(&self) -> &VectorN {
        &self.dest
    }

    /// Half-aperture of the enclosing cone seen from the destination.
    pub fn half_aperture(&self) -> f64 {
        self.cos_half.acos()
    }

    /// Positive strictly inside the enclosing cone, zero on its surface.
    pub fn cone_margin(&self, q: &VectorN) -> f64 {
        let d = q - &self.dest;
        self.axis.dot(&d) - d.norm() * self.cos_half
    }

    /// `(c − q)ᵀ(dest − q) / ‖c − dest‖`: non-negative behind the sphere with
    /// diameter `[c, dest]`, i.e. behind the tangent points.
    pub fn rear_margin(&self, q: &VectorN) -> f64 {
        (&self.center - q).dot(&(&self.dest - q)) / self.dist
    }

    /// Radius of the ball around the cone vertex excluded from the relaxed
    /// shadow. In the cone near its vertex the rear margin is about
    /// `−‖q − dest‖ cos θ`, so this keeps `dest` and its `tol`-neighbourhood visible.
    fn vertex_exclusion(&self, tol: f64) -> f64 {
        tol / self.cos_half
    }

    fn is_vertex(&self, q: &VectorN, tol: f64) -> bool {
        let d = (q - &self.dest).norm();
        d == 0.0 || d <= self.vertex_exclusion(tol)
    }

    /// Closed shadow region enlarged by `tol`.
    pub fn contains(&self, q: &VectorN, tol: f64) -> bool {
        self.cone_margin(q) >= -tol && self.rear_margin(q) >= -tol && !self.is_vertex(q, tol)
    }

    /// Interior of the shadow region shrunk by `tol`.
    pub fn interior_contains(&self, q: &VectorN, tol: f64) -> bool {
        self.cone_margin(q) > tol && self.rear_margin(q) > tol
    }

    /// Exit set: the lateral cone surface behind the tangent points, within `tol`.
    pub fn exit_contains(&self, q: &VectorN, tol: f64) -> bool {
        self.cone_margin(q).abs() <= tol && self.rear_margin(q) >= -tol && !self.is_vertex(q, tol)
    }
}

/// Whether `q` lies in the (tol-enlarged, closed) shadow region of `dest`.
pub fn in_shadow(q: &VectorN, dest: &VectorN, obstacle: &Obstacle, tol: f64) -> Result<bool> {
    Ok(Shadow::new(dest, obstacle)?.contains(q, tol))
}

/// Whether `q` lies on the exit set of `dest`.
pub fn on_exit_set(q: &VectorN, dest: &VectorN, obstacle: &Obstacle, tol: f64) -> Result<bool> {
    Ok(Shadow::new(dest, obstacle)?.exit_contains(q, tol))
}

/// Whether `q` has a clear line of sight to `dest`; the complement of [`in_shadow`].
pub fn in_visible(q: &VectorN, dest: &VectorN, obstacle: &Obstacle, tol: f64) -> Result<bool> {
    Ok(!in_shadow(q, dest, obstacle, tol)?)
}

/// Workspace, target and controller parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    obstacle: Obstacle,
    target: VectorN,
    gain: f64,
    hat_offset: f64,
    cone_fraction: f64,
}

impl Scenario {
    /// Validates and builds a scenario.
    ///
    /// Rejects a target inside the obstacle and a hat offset large enough to
    /// push the virtual destinations past the tangent points, where they would
    /// fall on the exit set or into the obstacle.
    pub fn new(
        obstacle: Obstacle,
        target: VectorN,
        gain: f64,
        hat_offset: f64,
        cone_fraction: f64,
    ) -> Result<Self> {
        let n = obstacle.dimension();
        if n < 2 {
            return Err(Error::invalid("dimension", format!("must be at least 2, got {n}")));
        }
        if target.len() != n {
            return Err(Error::invalid(
                "target",
                format!("expected {n} coordinates, got {}", target.len()),
            ));
        }
        if target.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("target", "coordinates must be finite"));
        }
        let dist = (&target - obstacle.center()).norm();
        if dist <= obstacle.radius() {
            return Err(Error::invalid("target", "must lie in the interior of the free space"));
        }
        if !(gain > 0.0 && gain.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be positive, got {gain}")));
        }
        if !(cone_fraction > 0.0 && cone_fraction < 1.0) {
            return Err(Error::invalid("kappa", format!("must lie in (0, 1), got {cone_fraction}")));
        }
        let tangent = (dist * dist - obstacle.radius().powi(2)).sqrt();
        if !(hat_offset > 0.0 && hat_offset < tangent) {
            return Err(Error::invalid(
                "e",
                format!(
                    "must lie in (0, {tangent}) so the virtual destinations stay on the hat of the cone, got {hat_offset}"
                ),
            ));
        }
        Ok(Self {
            obstacle,
            target,
            gain,
            hat_offset,
            cone_fraction,
        })
    }

    /// Scenario with the default `e` and `κ` and unit gain.
    pub fn with_defaults(obstacle: Obstacle, target: VectorN) -> Result<Self> {
        Self::new(obstacle, target, 1.0, DEFAULT_HAT_OFFSET, DEFAULT_CONE_FRACTION)
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    pub fn obstacle(&self) -> &Obstacle {
        &self.obstacle
    }

    pub fn target(&self) -> &VectorN {
        &self.target
    }

    /// Gain `γ` of the nominal controller.
    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Distance `e` between the target and each virtual destination.
    pub fn hat_offset(&self) -> f64 {
        self.hat_offset
    }

    /// Fraction `κ` used when sizing the hysteresis cones.
    pub fn cone_fraction(&self) -> f64 {
        self.cone_fraction
    }

    /// Shadow region of the target.
    pub fn target_shadow(&self) -> Shadow {
        Shadow::new(&self.target, &self.obstacle).expect("target validated outside obstacle")
    }

    /// Checks that `x` has the scenario dimension, is finite and lies in free space.
    pub fn check_start(&self, x: &VectorN) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::invalid(
                "starts",
                format!("expected {} coordinates, got {}", self.dimension(), x.len()),
            ));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("starts", "coordinates must be finite"));
        }
        if self.obstacle.clearance(x) < 0.0 {
            return Err(Error::invalid("starts", "start violates free space"));
        }
        Ok(())
    }
}
