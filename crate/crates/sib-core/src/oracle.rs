//! Brute-force reference evaluations: grid minimization of the objective
//! over the constraint, grid evaluation of minimal time over a target, and a
//! scan-based gauge check. These validate every closed form and the solver
//! at desk scale.

use crate::dynamics::PolyhedralDynamic;
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Vector};
use crate::solver::{objective, SibProblem};

/// Result of a grid scan: minimum value, the grid point attaining it, the
/// spacing used, and how many feasible points were evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub argmin: Vector,
    pub resolution: f64,
    pub points_evaluated: u64,
}

/// Iterates the axis-aligned grid of spacing `h` anchored at `lower`,
/// visiting points in lexicographically ascending coordinate order.
pub(crate) struct GridIter {
    lower: Vec<f64>,
    h: f64,
    counts: Vec<usize>,
    index: Vec<usize>,
    done: bool,
}

pub(crate) fn grid_points(lower: &Vector, upper: &Vector, h: f64) -> GridIter {
    let n = lower.dim();
    let counts: Vec<usize> = (0..n)
        .map(|j| {
            let span = (upper[j] - lower[j]).max(0.0);
            // Include the far endpoint when it lands on the grid up to fp noise.
            (span / h + 1e-9).floor() as usize + 1
        })
        .collect();
    GridIter {
        lower: lower.coords().to_vec(),
        h,
        counts,
        index: vec![0; n],
        done: false,
    }
}

impl Iterator for GridIter {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        if self.done {
            return None;
        }
        let coords: Vec<f64> = self
            .index
            .iter()
            .zip(&self.lower)
            .map(|(i, l)| l + (*i as f64) * self.h)
            .collect();
        // Odometer increment with the last coordinate fastest, so visits are
        // lexicographically ascending.
        let mut j = self.index.len();
        loop {
            if j == 0 {
                self.done = true;
                break;
            }
            j -= 1;
            self.index[j] += 1;
            if self.index[j] < self.counts[j] {
                break;
            }
            self.index[j] = 0;
        }
        Some(Vector::new(coords).expect("grid coordinates are finite"))
    }
}

/// Minimizes the problem objective over all grid points of spacing `h` inside
/// the constraint, with a smallest-lexicographic tie-break on the argmin.
///
/// The returned value is within `L * h * sqrt(n)` of the true optimum, where
/// `L` is the Lipschitz modulus of the gauge.
pub fn grid_minimize(problem: &SibProblem, h: f64) -> Result<OracleResult> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!(
            "grid spacing must be > 0, got {h}"
        )));
    }
    let (lower, upper) = problem.constraint.bounding_box()?;
    let mut best: Option<(f64, Vector)> = None;
    let mut evaluated = 0u64;
    for p in grid_points(&lower, &upper, h) {
        if !problem.constraint.contains(&p, 0.0)? {
            continue;
        }
        let value = objective(problem, &p)?.value;
        evaluated += 1;
        match &best {
            Some((bv, _)) if value >= *bv => {}
            _ => best = Some((value, p)),
        }
    }
    match best {
        Some((value, argmin)) => Ok(OracleResult {
            value,
            argmin,
            resolution: h,
            points_evaluated: evaluated,
        }),
        None => Err(Error::EmptyGrid(
            "no grid point lies inside the constraint".into(),
        )),
    }
}

/// Grid evaluation of the minimal time: minimum of `gauge(w - x)` over grid
/// points of spacing `h` covering the target (membership inflated by `h/2`).
pub fn minimal_time_oracle(
    dynamic: &PolyhedralDynamic,
    target: &ConvexBody,
    x: &Vector,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!(
            "grid spacing must be > 0, got {h}"
        )));
    }
    x.check_dim(dynamic.dim())?;
    let (lower, upper) = target.bounding_box()?;
    let mut best: Option<f64> = None;
    for w in grid_points(&lower, &upper, h) {
        if !target.contains(&w, h / 2.0)? {
            continue;
        }
        let g = dynamic.gauge(&w.sub(x))?.value;
        best = Some(match best {
            Some(b) => b.min(g),
            None => g,
        });
    }
    best.ok_or_else(|| Error::EmptyGrid("no grid point lies inside the target".into()))
}

/// Scan evaluation of the Minkowski gauge: the smallest `t` on the grid
/// `{0, t_hi/steps, ..., t_hi}` with `u` inside `t F`.
pub fn gauge_oracle(
    dynamic: &PolyhedralDynamic,
    u: &Vector,
    t_hi: f64,
    steps: usize,
) -> Result<f64> {
    if steps < 10 {
        return Err(Error::Precondition(format!(
            "scan needs at least 10 steps, got {steps}"
        )));
    }
    if !(t_hi >= 0.0) || !t_hi.is_finite() {
        return Err(Error::Precondition(format!(
            "scan ceiling must be finite and >= 0, got {t_hi}"
        )));
    }
    u.check_dim(dynamic.dim())?;
    for j in 0..=steps {
        let t = t_hi * (j as f64) / (steps as f64);
        let feasible = dynamic
            .faces()
            .iter()
            .all(|f| f.normal.dot(u) <= t * f.offset);
        if feasible {
            return Ok(t);
        }
    }
    Err(Error::Precondition(format!(
        "no feasible t <= {t_hi}; the scan ceiling is below the gauge value"
    )))
}
