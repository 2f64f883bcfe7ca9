//! Minimal-time evaluation `T(x) = inf { gauge(w - x) : w in target }` with a
//! witness attaining (or approximating) the infimum.
//!
//! Closed forms: point targets always; box targets when the dynamic is
//! axis-aligned (the componentwise clamp is an exact minimizer). Everything
//! else runs an inner projected subgradient method over the target, preceded
//! by an exact feasibility test for the zero level set: `T(x) = 0` holds
//! exactly when the translated recession cone `x + F_inf` meets the target,
//! and projection methods decide that much more reliably than a diminishing
//! step-size subgradient loop can.

use crate::dynamics::PolyhedralDynamic;
use crate::error::{Error, Result};
use crate::geometry::{dykstra, ConvexBody, Halfspace, ProjectionSet, Vector};
use crate::geometry::{DYKSTRA_MAX_SWEEPS, DYKSTRA_TOL};

/// Budget and step scale for the inner projected subgradient minimizer.
///
/// `c = None` uses the target diameter, which keeps the first steps on the
/// scale of the feasible region.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerConfig {
    pub c: Option<f64>,
    pub max_inner: usize,
}

impl Default for InnerConfig {
    fn default() -> Self {
        InnerConfig {
            c: None,
            max_inner: 2_000,
        }
    }
}

/// A minimal-time value together with the witness in the target attaining it.
/// `exact` distinguishes closed-form values from inner-solver approximations.
#[derive(Clone, Debug, PartialEq)]
pub struct MinTimeResult {
    pub value: f64,
    pub witness: Vector,
    pub exact: bool,
}

/// Evaluates the minimal time from `x` to `target` under `dynamic`.
///
/// Unbounded targets are rejected: the infimum may not be attained and the
/// witness contract could not be honored.
pub fn minimal_time(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
    cfg: &InnerConfig,
) -> Result<MinTimeResult> {
    x.check_dim(dynamic.dim())?;
    if target.dim() != dynamic.dim() {
        return Err(Error::DimensionMismatch {
            expected: dynamic.dim(),
            got: target.dim(),
        });
    }
    if !target.is_bounded() {
        return Err(Error::UnsupportedBody {
            op: "minimal_time",
            body: "halfspace_intersection",
        });
    }
    match target {
        ConvexBody::Point { p } => {
            let value = dynamic.gauge(&p.sub(x))?.value;
            Ok(MinTimeResult {
                value,
                witness: p.clone(),
                exact: true,
            })
        }
        ConvexBody::Box { .. } if dynamic.is_axis_aligned() => {
            // Each face constrains a single coordinate of the witness, so the
            // componentwise clamp minimizes every face term simultaneously.
            let witness = target.euclidean_project(x)?;
            let value = dynamic.gauge(&witness.sub(x))?.value;
            Ok(MinTimeResult {
                value,
                witness,
                exact: true,
            })
        }
        _ => minimal_time_iterative(dynamic, target, x, cfg),
    }
}

/// Decides `T(x) <= tol`, which by the zero-level characterization decides
/// membership of `x` in `target - F_inf`.
pub fn is_zero_level(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
    tol: f64,
    cfg: &InnerConfig,
) -> Result<bool> {
    Ok(minimal_time(dynamic, target, x, cfg)?.value <= tol)
}

/// Decides whether `x + rF` meets the target: `T(x) <= r + tol`.
pub fn reaches_within(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
    r: f64,
    tol: f64,
    cfg: &InnerConfig,
) -> Result<bool> {
    if r < 0.0 {
        return Err(Error::Precondition(format!("radius must be >= 0, got {r}")));
    }
    Ok(minimal_time(dynamic, target, x, cfg)?.value <= r + tol)
}

/// Exact lower bound from per-face minima over the target:
/// `T(x) >= max(0, max_i (min_w <a_i, w> - <a_i, x>) / b_i)`.
fn face_lower_bound(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
) -> Result<f64> {
    let mut lb = 0.0f64;
    for f in dynamic.faces() {
        let min_aw = -target.support(&f.normal.scale(-1.0))?;
        lb = lb.max((min_aw - f.normal.dot(x)) / f.offset);
    }
    Ok(lb)
}

/// Looks for a point of `target` inside the translated recession cone
/// `x + F_inf`. Any such point is a witness for `T(x) = 0`.
fn zero_level_witness(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
) -> Result<Option<Vector>> {
    let cone_faces: Vec<Halfspace> = dynamic
        .faces()
        .iter()
        .map(|f| Halfspace {
            normal: f.normal.clone(),
            offset: f.normal.dot(x),
        })
        .collect();
    match target {
        ConvexBody::Ball { center, radius } => {
            // The cone meets the ball iff the center projects within radius.
            // The cone is nonempty (it contains x), so Dykstra converges.
            let sets: Vec<ProjectionSet<'_>> =
                cone_faces.iter().map(ProjectionSet::Face).collect();
            let tol = 1e-9 * (1.0 + x.norm() + center.norm() + radius);
            let out = dykstra(&sets, center, DYKSTRA_MAX_SWEEPS, DYKSTRA_TOL, tol);
            if !out.converged {
                return Ok(None);
            }
            if out.point.dist(center) <= radius + tol {
                Ok(Some(target.euclidean_project(&out.point)?))
            } else {
                Ok(None)
            }
        }
        _ => {
            // target ∩ cone may be empty here, in which case the sweeps are
            // wasted work; keep the probe budget modest and fall back to the
            // subgradient phase on timeout.
            let mut sets: Vec<ProjectionSet<'_>> = vec![ProjectionSet::Body(target)];
            sets.extend(cone_faces.iter().map(ProjectionSet::Face));
            let start = target.euclidean_project(x)?;
            let tol = 1e-9 * (1.0 + x.norm());
            let out = dykstra(&sets, &start, 2_000, DYKSTRA_TOL, tol);
            if out.converged {
                Ok(Some(target.euclidean_project(&out.point)?))
            } else {
                Ok(None)
            }
        }
    }
}

fn minimal_time_iterative(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
    cfg: &InnerConfig,
) -> Result<MinTimeResult> {
    let start = target.euclidean_project(x)?;
    let start_value = dynamic.gauge(&start.sub(x))?.value;
    if start_value == 0.0 {
        return Ok(MinTimeResult {
            value: 0.0,
            witness: start,
            exact: false,
        });
    }

    let lb = face_lower_bound(dynamic, target, x)?;
    let zero_gate = 1e-9 * (1.0 + x.norm());
    if lb <= zero_gate {
        if let Some(witness) = zero_level_witness(dynamic, target, x)? {
            let value = dynamic.gauge(&witness.sub(x))?.value;
            return Ok(MinTimeResult {
                value,
                witness,
                exact: false,
            });
        }
    }

    // Projected subgradient on w -> gauge(w - x) over the target, step c/k,
    // tracking the best iterate. Every evaluated iterate is feasible, so the
    // returned value never underestimates the true minimal time.
    let c = match cfg.c {
        Some(c) => c,
        None => target.diameter()?,
    };
    let mut omega = start;
    let mut best_value = start_value;
    let mut best_witness = omega.clone();
    for k in 1..=cfg.max_inner {
        let eval = dynamic.gauge(&omega.sub(x))?;
        if eval.value < best_value {
            best_value = eval.value;
            best_witness = omega.clone();
        }
        if best_value <= lb + 1e-12 * (1.0 + lb) {
            break; // certified against the face lower bound
        }
        if eval.value == 0.0 {
            break; // global minimum of the inner objective
        }
        let i = eval.active[0];
        let face = &dynamic.faces()[i];
        let g = face.normal.scale(1.0 / face.offset);
        omega = target.euclidean_project(&omega.add_scaled(-(c / k as f64), &g))?;
    }
    Ok(MinTimeResult {
        value: best_value,
        witness: best_witness,
        exact: false,
    })
}
