//! Dimension-generic vector algebra and set-membership predicates.
//!
//! Vectors are dynamically sized ([`VectorN`]) so that one scenario file can
//! describe a planar or an n-dimensional workspace. Every predicate takes an
//! explicit tolerance; tolerances are additive slack in workspace length units
//! and always enlarge the tested set.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// A point or direction in the n-dimensional workspace.
pub type VectorN = DVector<f64>;

/// Tolerance on `|‖v‖ − 1|` accepted by the reflector and projections.
pub const UNIT_TOL: f64 = 1e-9;

/// Gram-determinant threshold below which two directions are treated as parallel.
pub const GRAM_MIN: f64 = 1e-18;

/// Builds a vector from a slice.
pub fn vector(coords: &[f64]) -> VectorN {
    VectorN::from_column_slice(coords)
}

/// Clamped `acos`, safe for dot products that overshoot `[-1, 1]` by a few ulps.
pub fn acos_clamped(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// Clamped `asin`.
pub fn asin_clamped(s: f64) -> f64 {
    s.clamp(-1.0, 1.0).asin()
}

/// Angle between two non-zero vectors, in `[0, π]`.
pub fn angle_between(x: &VectorN, y: &VectorN) -> Result<f64> {
    let nx = x.norm();
    let ny = y.norm();
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::domain("angle between a zero vector"));
    }
    Ok(acos_clamped(x.dot(y) / (nx * ny)))
}

fn check_unit(v: &VectorN) -> Result<()> {
    if (v.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::domain(format!(
            "expected a unit vector, got norm {}",
            v.norm()
        )));
    }
    Ok(())
}

/// Elementary reflector `(I − 2vvᵀ)x` about the hyperplane orthogonal to `v`.
pub fn reflect(v: &VectorN, x: &VectorN) -> Result<VectorN> {
    check_unit(v)?;
    Ok(x - v * (2.0 * v.dot(x)))
}

/// Projection of `x` onto the line spanned by the unit vector `v`.
pub fn project_parallel(v: &VectorN, x: &VectorN) -> Result<VectorN> {
    check_unit(v)?;
    Ok(v * v.dot(x))
}

/// Projection of `x` onto the hyperplane orthogonal to the unit vector `v`.
pub fn project_orthogonal(v: &VectorN, x: &VectorN) -> Result<VectorN> {
    check_unit(v)?;
    Ok(x - v * v.dot(x))
}

/// Comparison used by cones and half-spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Sense {
    /// Tests `margin Δ 0` where a positive margin means "on the `<`/`≤` side".
    ///
    /// `tol` is slack in favour of membership: `Le` accepts `margin ≥ −tol`,
    /// `Eq` accepts `|margin| ≤ tol`, and so on.
    fn holds(self, margin: f64, tol: f64) -> bool {
        match self {
            Sense::Lt => margin > -tol,
            Sense::Le => margin >= -tol,
            Sense::Eq => margin.abs() <= tol,
            Sense::Ge => margin <= tol,
            Sense::Gt => margin < tol,
        }
    }
}

/// Circular cone with a vertex, an axis and a half-aperture.
///
/// `Le` is the closed solid cone, `Lt` its interior, `Eq` the lateral surface,
/// `Ge`/`Gt` the closed/open exterior.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    vertex: VectorN,
    axis: VectorN,
    half_aperture: f64,
    sense: Sense,
    cos_half: f64,
}

impl Cone {
    pub fn new(vertex: VectorN, axis: &VectorN, half_aperture: f64, sense: Sense) -> Result<Self> {
        let n = axis.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("cone.axis", "axis must be non-zero"));
        }
        if axis.len() != vertex.len() {
            return Err(Error::invalid("cone.axis", "dimension mismatch with vertex"));
        }
        if !(half_aperture > 0.0 && half_aperture <= std::f64::consts::PI) {
            return Err(Error::invalid(
                "cone.half_aperture",
                format!("must lie in (0, π], got {half_aperture}"),
            ));
        }
        Ok(Self {
            vertex,
            axis: axis / n,
            half_aperture,
            sense,
            cos_half: half_aperture.cos(),
        })
    }

    pub fn vertex(&self) -> &VectorN {
        &self.vertex
    }

    /// Unit axis.
    pub fn axis(&self) -> &VectorN {
        &self.axis
    }

    pub fn half_aperture(&self) -> f64 {
        self.half_aperture
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Same cone with a different comparison.
    pub fn with_sense(&self, sense: Sense) -> Self {
        Self {
            sense,
            ..self.clone()
        }
    }

    /// `âᵀ(q − x) − ‖q − x‖ cos φ`: positive strictly inside, zero on the
    /// surface and at the vertex.
    pub fn margin(&self, q: &VectorN) -> f64 {
        let d = q - &self.vertex;
        self.axis.dot(&d) - d.norm() * self.cos_half
    }

    pub fn contains(&self, q: &VectorN, tol: f64) -> bool {
        self.sense.holds(self.margin(q), tol)
    }
}

/// Free-function form of [`Cone::contains`].
pub fn cone_contains(cone: &Cone, q: &VectorN, tol: f64) -> bool {
    cone.contains(q, tol)
}

/// Half-space `{q | nᵀ(q − anchor) Δ 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    anchor: VectorN,
    normal: VectorN,
    sense: Sense,
}

impl HalfSpace {
    pub fn new(anchor: VectorN, normal: &VectorN, sense: Sense) -> Result<Self> {
        let n = normal.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("halfspace.normal", "normal must be non-zero"));
        }
        Ok(Self {
            anchor,
            normal: normal / n,
            sense,
        })
    }

    /// Signed distance `n̂ᵀ(q − anchor)`.
    pub fn signed_distance(&self, q: &VectorN) -> f64 {
        self.normal.dot(&(q - &self.anchor))
    }

    pub fn contains(&self, q: &VectorN, tol: f64) -> bool {
        // Sense::holds treats positive margins as the `<` side.
        self.sense.holds(-self.signed_distance(q), tol)
    }
}

pub fn halfspace_contains(h: &HalfSpace, q: &VectorN, tol: f64) -> bool {
    h.contains(q, tol)
}

/// True when two closed cones with a common vertex, axes `a1`/`a2` and
/// half-apertures `phi1`/`phi2` intersect only at that vertex, i.e.
/// `φ1 + φ2 < ψ < π − (φ1 + φ2)` with `ψ = ∠(a1, a2)`.
///
/// The vertex itself does not enter the test.
pub fn cones_meet_only_at_vertex(a1: &VectorN, a2: &VectorN, phi1: f64, phi2: f64) -> Result<bool> {
    let psi = angle_between(a1, a2)?;
    let sum = phi1 + phi2;
    Ok(sum < psi && psi < std::f64::consts::PI - sum)
}

/// Orthonormal frame of a two-dimensional affine plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneBasis {
    pub origin: VectorN,
    pub b1: VectorN,
    pub b2: VectorN,
}

impl PlaneBasis {
    /// Orthogonal projection of `q` onto the plane.
    pub fn project(&self, q: &VectorN) -> VectorN {
        let d = q - &self.origin;
        &self.origin + &self.b1 * self.b1.dot(&d) + &self.b2 * self.b2.dot(&d)
    }

    /// Euclidean distance from `q` to the plane.
    pub fn distance(&self, q: &VectorN) -> f64 {
        (q - self.project(q)).norm()
    }

    /// In-plane coordinates of `q` relative to `origin`.
    pub fn coordinates(&self, q: &VectorN) -> (f64, f64) {
        let d = q - &self.origin;
        (self.b1.dot(&d), self.b2.dot(&d))
    }
}

/// Plane through `p0`, `p1`, `p2` with origin `p0`, first axis towards `p1`.
pub fn plane_through(p0: &VectorN, p1: &VectorN, p2: &VectorN) -> Result<PlaneBasis> {
    let d1 = p1 - p0;
    let d2 = p2 - p0;
    let gram = d1.norm_squared() * d2.norm_squared() - d1.dot(&d2).powi(2);
    if !(gram > GRAM_MIN) {
        return Err(Error::DegeneratePlane { gram });
    }
    let b1 = d1.normalize();
    let b2 = (&d2 - &b1 * b1.dot(&d2)).normalize();
    Ok(PlaneBasis {
        origin: p0.clone(),
        b1,
        b2,
    })
}
