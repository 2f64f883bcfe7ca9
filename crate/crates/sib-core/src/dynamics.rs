//! The dynamic `F` as a halfspace intersection with the origin in its
//! interior: gauge evaluation, recession cone membership, gauge
//! subdifferential generators, and the Lipschitz modulus of the gauge.

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Vector};

/// Relative tolerance for detecting ties in the active index set of the
/// gauge. Exact-equality ties are floating-point unstable; over-inclusion
/// only enlarges the generator list.
pub const ACTIVE_TOL: f64 = 1e-9;

/// `F = { x : <a_i, x> <= b_i, i = 1..q }` with every `b_i > 0`, so that the
/// origin is interior. `F` may be unbounded.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralDynamic {
    faces: Vec<Halfspace>,
}

/// One gauge evaluation: the value, the active face indices, and the number
/// of subdifferential generators those faces contribute.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeEval {
    pub value: f64,
    pub active: Vec<usize>,
    pub generator_count: usize,
}

impl PolyhedralDynamic {
    pub fn new(faces: Vec<Halfspace>) -> Result<Self> {
        let dynamic = PolyhedralDynamic { faces };
        dynamic.validate()?;
        Ok(dynamic)
    }

    /// Checks the defining invariants, naming the first violating face.
    pub fn validate(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(Error::InvalidDynamic {
                face: 0,
                reason: "dynamic needs at least one face".into(),
            });
        }
        let n = self.faces[0].dim();
        for (i, f) in self.faces.iter().enumerate() {
            if f.normal.norm() == 0.0 {
                return Err(Error::InvalidDynamic {
                    face: i,
                    reason: "zero normal".into(),
                });
            }
            if !(f.offset > 0.0) {
                return Err(Error::InvalidDynamic {
                    face: i,
                    reason: format!("offset b must be > 0, got {}", f.offset),
                });
            }
            if f.dim() != n {
                return Err(Error::InvalidDynamic {
                    face: i,
                    reason: format!("dimension {} differs from face 0 dimension {n}", f.dim()),
                });
            }
        }
        Ok(())
    }

    pub fn faces(&self) -> &[Halfspace] {
        &self.faces
    }

    pub fn dim(&self) -> usize {
        self.faces[0].dim()
    }

    /// True when every face normal has exactly one nonzero coordinate.
    /// Axis-aligned dynamics admit the componentwise clamp closed form for
    /// minimal times to boxes.
    pub fn is_axis_aligned(&self) -> bool {
        self.faces
            .iter()
            .all(|f| f.normal.coords().iter().filter(|c| **c != 0.0).count() == 1)
    }

    /// Minkowski gauge of `F`: `max(0, max_i <a_i, u> / b_i)`, together with
    /// the near-active index set.
    pub fn gauge(&self, u: &Vector) -> Result<GaugeEval> {
        u.check_dim(self.dim())?;
        let mut value = 0.0f64;
        let mut ratios = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let r = f.normal.dot(u) / f.offset;
            ratios.push(r);
            value = value.max(r);
        }
        let cut = value - ACTIVE_TOL * (1.0 + value);
        let active: Vec<usize> = ratios
            .iter()
            .enumerate()
            .filter(|(_, r)| **r >= cut)
            .map(|(i, _)| i)
            .collect();
        let generator_count = active.len();
        Ok(GaugeEval {
            value,
            active,
            generator_count,
        })
    }

    /// Membership of `d` in the recession cone
    /// `F_inf = { d : <a_i, d> <= 0 for all i }`.
    pub fn recession_contains(&self, d: &Vector, tol: f64) -> Result<bool> {
        d.check_dim(self.dim())?;
        Ok(self
            .faces
            .iter()
            .all(|f| f.normal.dot(d) <= tol * f.normal.norm()))
    }

    /// Extreme-point generators `{ a_i / b_i : i active at u }` of the gauge
    /// subdifferential at `u`; the full subdifferential is their convex hull.
    ///
    /// Requires `gauge(u) > 0` (equivalently `u` outside the recession cone);
    /// the formula has no meaning on the zero level set.
    pub fn gauge_subgrad_generators(&self, u: &Vector) -> Result<Vec<Vector>> {
        let eval = self.gauge(u)?;
        if !(eval.value > 0.0) {
            return Err(Error::Precondition(
                "gauge subdifferential generators require gauge(u) > 0".into(),
            ));
        }
        Ok(eval
            .active
            .iter()
            .map(|&i| self.faces[i].normal.scale(1.0 / self.faces[i].offset))
            .collect())
    }

    /// Lipschitz modulus of the gauge: `max_i ||a_i|| / b_i`, the reciprocal
    /// of the radius of the largest origin-centered ball inside `F`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| f.normal.norm() / f.offset)
            .fold(0.0, f64::max)
    }
}
