//! Finite-dimensional convex bodies with membership tests, Euclidean
//! projection, support functions, and normal-cone membership.
//!
//! Everything here is a pure function of immutable values, so all types are
//! safe to share across threads.

use crate::error::{Error, Result};

/// Maximum number of Dykstra sweeps before a halfspace intersection is
/// declared infeasible.
pub(crate) const DYKSTRA_MAX_SWEEPS: usize = 10_000;

/// Relative displacement threshold that stops a Dykstra sweep.
pub(crate) const DYKSTRA_TOL: f64 = 1e-12;

/// Dense point in R^n.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting NaN/infinite coordinates and zero length.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidVector("length must be >= 1".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidVector(format!(
                "coordinate {i} is not finite: {}",
                coords[i]
            )));
        }
        Ok(Vector(coords))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    /// All-zero vector of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            })
        }
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Closed halfspace `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::InvalidBody(format!(
                "halfspace offset is not finite: {offset}"
            )));
        }
        if normal.norm() == 0.0 {
            return Err(Error::InvalidBody("halfspace normal is zero".into()));
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed slack `<a, x> - b`; positive means `x` violates the halfspace.
    pub fn violation(&self, x: &Vector) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.violation(x) <= tol * self.normal.norm()
    }

    /// Closed-form Euclidean projection onto the halfspace.
    pub fn project(&self, x: &Vector) -> Vector {
        let v = self.violation(x);
        if v <= 0.0 {
            return x.clone();
        }
        let nn = self.normal.dot(&self.normal);
        x.add_scaled(-v / nn, &self.normal)
    }
}

/// Convex bodies used for targets and constraints.
///
/// `Point`, `Box`, and `Ball` are closed bounded convex sets with closed-form
/// projections and support functions. `HalfspaceIntersection` is closed
/// convex but not assumed bounded; callers that require boundedness must
/// check the variant.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Point { p: Vector },
    Box { lower: Vector, upper: Vector },
    Ball { center: Vector, radius: f64 },
    HalfspaceIntersection { faces: Vec<Halfspace> },
}

impl ConvexBody {
    pub fn point(p: Vector) -> Result<Self> {
        Ok(ConvexBody::Point { p })
    }

    pub fn boxed(lower: Vector, upper: Vector) -> Result<Self> {
        lower.check_dim(upper.dim())?;
        for j in 0..lower.dim() {
            if lower[j] > upper[j] {
                return Err(Error::InvalidBody(format!(
                    "box lower[{j}]={} exceeds upper[{j}]={}",
                    lower[j], upper[j]
                )));
            }
        }
        Ok(ConvexBody::Box { lower, upper })
    }

    /// Axis-aligned box from a center and a common half-width.
    pub fn box_centered(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidBody(format!(
                "box radius must be > 0, got {radius}"
            )));
        }
        let lower = Vector::new(center.coords().iter().map(|c| c - radius).collect())?;
        let upper = Vector::new(center.coords().iter().map(|c| c + radius).collect())?;
        Ok(ConvexBody::Box { lower, upper })
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidBody(format!(
                "ball radius must be > 0, got {radius}"
            )));
        }
        Ok(ConvexBody::Ball { center, radius })
    }

    pub fn halfspace_intersection(faces: Vec<Halfspace>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::InvalidBody(
                "halfspace intersection needs at least one face".into(),
            ));
        }
        let n = faces[0].dim();
        for (i, f) in faces.iter().enumerate() {
            if f.dim() != n {
                return Err(Error::InvalidBody(format!(
                    "face {i} has dimension {} but face 0 has {n}",
                    f.dim()
                )));
            }
        }
        Ok(ConvexBody::HalfspaceIntersection { faces })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Point { p } => p.dim(),
            ConvexBody::Box { lower, .. } => lower.dim(),
            ConvexBody::Ball { center, .. } => center.dim(),
            ConvexBody::HalfspaceIntersection { faces } => faces[0].dim(),
        }
    }

    /// `Point`, `Box`, and `Ball` are bounded by construction.
    pub fn is_bounded(&self) -> bool {
        !matches!(self, ConvexBody::HalfspaceIntersection { .. })
    }

    fn variant_name(&self) -> &'static str {
        match self {
            ConvexBody::Point { .. } => "point",
            ConvexBody::Box { .. } => "box",
            ConvexBody::Ball { .. } => "ball",
            ConvexBody::HalfspaceIntersection { .. } => "halfspace_intersection",
        }
    }

    /// Membership with every defining inequality inflated by `tol`.
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool> {
        x.check_dim(self.dim())?;
        if tol < 0.0 {
            return Err(Error::Precondition(format!("tol must be >= 0, got {tol}")));
        }
        Ok(match self {
            ConvexBody::Point { p } => x.dist(p) <= tol,
            ConvexBody::Box { lower, upper } => (0..x.dim())
                .all(|j| x[j] >= lower[j] - tol && x[j] <= upper[j] + tol),
            ConvexBody::Ball { center, radius } => x.dist(center) <= radius + tol,
            ConvexBody::HalfspaceIntersection { faces } => {
                faces.iter().all(|f| f.contains(x, tol))
            }
        })
    }

    /// Euclidean projection: the unique minimizer of `||. - x||` over the body.
    ///
    /// Closed forms for point/box/ball; Dykstra's alternating projections for
    /// halfspace intersections. An intersection whose Dykstra sweep fails to
    /// settle is reported as infeasible.
    pub fn euclidean_project(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        match self {
            ConvexBody::Point { p } => Ok(p.clone()),
            ConvexBody::Box { lower, upper } => Ok(Vector(
                (0..x.dim())
                    .map(|j| x[j].clamp(lower[j], upper[j]))
                    .collect(),
            )),
            ConvexBody::Ball { center, radius } => {
                let d = x.sub(center);
                let norm = d.norm();
                if norm <= *radius {
                    Ok(x.clone())
                } else {
                    Ok(center.add_scaled(radius / norm, &d))
                }
            }
            ConvexBody::HalfspaceIntersection { faces } => {
                if self.contains(x, 0.0)? {
                    return Ok(x.clone());
                }
                let sets: Vec<ProjectionSet<'_>> =
                    faces.iter().map(ProjectionSet::Face).collect();
                let feasibility_tol = 1e-9 * (1.0 + x.norm());
                let out = dykstra(&sets, x, DYKSTRA_MAX_SWEEPS, DYKSTRA_TOL, feasibility_tol);
                if out.converged {
                    Ok(out.point)
                } else {
                    Err(Error::InfeasibleSet(
                        "halfspace intersection projection did not settle inside \
                         the set; the intersection is empty or nearly so"
                            .into(),
                    ))
                }
            }
        }
    }

    /// Support function `sup { <v, y> : y in body }`; bounded bodies only.
    pub fn support(&self, v: &Vector) -> Result<f64> {
        v.check_dim(self.dim())?;
        match self {
            ConvexBody::Point { p } => Ok(v.dot(p)),
            ConvexBody::Box { lower, upper } => Ok((0..v.dim())
                .map(|j| {
                    if v[j] >= 0.0 {
                        v[j] * upper[j]
                    } else {
                        v[j] * lower[j]
                    }
                })
                .sum()),
            ConvexBody::Ball { center, radius } => Ok(v.dot(center) + radius * v.norm()),
            ConvexBody::HalfspaceIntersection { .. } => Err(Error::UnsupportedBody {
                op: "support",
                body: self.variant_name(),
            }),
        }
    }

    /// Tests `v in N(w; body)` via the support-function characterization
    /// `support(body, v) - <v, w> <= tol * (1 + ||v||)`.
    ///
    /// Requires `w` to lie in the body within `tol`.
    pub fn normal_cone_contains(&self, w: &Vector, v: &Vector, tol: f64) -> Result<bool> {
        if !self.contains(w, tol)? {
            return Err(Error::Precondition(
                "normal_cone_contains called with a base point outside the body".into(),
            ));
        }
        let s = self.support(v)?;
        Ok(s - v.dot(w) <= tol * (1.0 + v.norm()))
    }

    /// Axis-aligned bounding box; bounded bodies only.
    pub fn bounding_box(&self) -> Result<(Vector, Vector)> {
        match self {
            ConvexBody::Point { p } => Ok((p.clone(), p.clone())),
            ConvexBody::Box { lower, upper } => Ok((lower.clone(), upper.clone())),
            ConvexBody::Ball { center, radius } => {
                let lower = Vector(center.coords().iter().map(|c| c - radius).collect());
                let upper = Vector(center.coords().iter().map(|c| c + radius).collect());
                Ok((lower, upper))
            }
            ConvexBody::HalfspaceIntersection { .. } => Err(Error::UnsupportedBody {
                op: "bounding_box",
                body: self.variant_name(),
            }),
        }
    }

    /// Euclidean diameter; bounded bodies only.
    pub fn diameter(&self) -> Result<f64> {
        match self {
            ConvexBody::Point { .. } => Ok(0.0),
            ConvexBody::Box { lower, upper } => Ok(upper.sub(lower).norm()),
            ConvexBody::Ball { radius, .. } => Ok(2.0 * radius),
            ConvexBody::HalfspaceIntersection { .. } => Err(Error::UnsupportedBody {
                op: "diameter",
                body: self.variant_name(),
            }),
        }
    }
}

/// A set Dykstra can project onto: a single halfspace or a bounded body.
pub(crate) enum ProjectionSet<'a> {
    Face(&'a Halfspace),
    Body(&'a ConvexBody),
}

impl ProjectionSet<'_> {
    fn project(&self, x: &Vector) -> Vector {
        match self {
            ProjectionSet::Face(f) => f.project(x),
            // Bounded bodies only; their projections cannot fail.
            ProjectionSet::Body(b) => b.euclidean_project(x).expect("bounded body projection"),
        }
    }

    pub(crate) fn contains(&self, x: &Vector, tol: f64) -> bool {
        match self {
            ProjectionSet::Face(f) => f.contains(x, tol),
            ProjectionSet::Body(b) => b.contains(x, tol).unwrap_or(false),
        }
    }
}

pub(crate) struct DykstraOutcome {
    pub point: Vector,
    pub converged: bool,
    #[allow(dead_code)]
    pub sweeps: usize,
}

/// Dykstra's alternating projection onto an intersection of convex sets.
///
/// Converges to the Euclidean projection of `start` when the intersection is
/// nonempty. A sweep counts as converged once the iterate both moves by less
/// than `tol * (1 + ||start||)` and lies in every set within `feas_tol`; the
/// displacement alone is not enough because on an empty intersection the
/// iterates settle into a cycle outside the sets while the corrections grow.
/// An exhausted sweep budget therefore signals an empty (or numerically
/// empty) intersection.
pub(crate) fn dykstra(
    sets: &[ProjectionSet<'_>],
    start: &Vector,
    max_sweeps: usize,
    tol: f64,
    feas_tol: f64,
) -> DykstraOutcome {
    let n = start.dim();
    let mut p = start.clone();
    let mut corrections: Vec<Vector> = vec![Vector::zeros(n); sets.len()];
    let stop = tol * (1.0 + start.norm());
    for sweep in 1..=max_sweeps {
        let prev = p.clone();
        for (i, set) in sets.iter().enumerate() {
            let y = p.add(&corrections[i]);
            let q = set.project(&y);
            corrections[i] = y.sub(&q);
            p = q;
        }
        if p.dist(&prev) < stop && sets.iter().all(|s| s.contains(&p, feas_tol)) {
            return DykstraOutcome {
                point: p,
                converged: true,
                sweeps: sweep,
            };
        }
    }
    DykstraOutcome {
        point: p,
        converged: false,
        sweeps: max_sweeps,
    }
}
