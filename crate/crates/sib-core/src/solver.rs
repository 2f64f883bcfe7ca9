//! The minimax objective over the targets, subgradient selection at the
//! active target's witness, the projected subgradient iteration with its
//! running-best record, the rate certificate, and solution certification.

use crate::dynamics::PolyhedralDynamic;
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Vector};
use crate::minimal_time::{minimal_time, reaches_within, InnerConfig, MinTimeResult};
use crate::oracle::grid_points;

/// Relative tolerances shared across one problem instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative slack for active-set ties (objective and gauge).
    pub active: f64,
    /// Relative threshold under which a minimal time counts as zero.
    pub zero: f64,
    /// Absolute slack for set membership and normal-cone tests.
    pub membership: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            active: 1e-9,
            zero: 1e-9,
            membership: 1e-6,
        }
    }
}

/// One smallest-intersecting-ball instance: a dynamic, bounded targets, and
/// a constraint set, all in one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct SibProblem {
    pub dynamic: PolyhedralDynamic,
    pub targets: Vec<ConvexBody>,
    pub constraint: ConvexBody,
    pub tolerances: Tolerances,
    pub inner: InnerConfig,
}

impl SibProblem {
    pub fn new(
        dynamic: PolyhedralDynamic,
        targets: Vec<ConvexBody>,
        constraint: ConvexBody,
        tolerances: Tolerances,
        inner: InnerConfig,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidBody("at least one target is required".into()));
        }
        let n = dynamic.dim();
        for (i, t) in targets.iter().enumerate() {
            if !t.is_bounded() {
                return Err(Error::InvalidBody(format!(
                    "target {i} is a halfspace intersection; targets must be bounded"
                )));
            }
            if t.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: t.dim(),
                });
            }
        }
        if constraint.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: constraint.dim(),
            });
        }
        for (name, tol) in [
            ("active", tolerances.active),
            ("zero", tolerances.zero),
            ("membership", tolerances.membership),
        ] {
            if !(tol >= 0.0) {
                return Err(Error::Precondition(format!(
                    "tolerance `{name}` must be >= 0, got {tol}"
                )));
            }
        }
        Ok(SibProblem {
            dynamic,
            targets,
            constraint,
            tolerances,
            inner,
        })
    }

    pub fn dim(&self) -> usize {
        self.dynamic.dim()
    }
}

/// Objective value at a point together with all per-target evaluations and
/// the near-active target indices (ascending).
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveEval {
    pub value: f64,
    pub per_target: Vec<MinTimeResult>,
    pub active: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    OneOverK,
    COverKPlusK0,
}

/// Diminishing step schedule; both kinds are divergent-sum, square-summable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSchedule {
    pub kind: StepKind,
    pub c: f64,
    pub k0: u64,
}

impl StepSchedule {
    pub fn one_over_k() -> Self {
        StepSchedule {
            kind: StepKind::OneOverK,
            c: 1.0,
            k0: 0,
        }
    }

    pub fn alpha(&self, k: u64) -> f64 {
        match self.kind {
            StepKind::OneOverK => self.c / k as f64,
            StepKind::COverKPlusK0 => self.c / (k + self.k0) as f64,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::Precondition(format!(
                "step constant c must be > 0, got {}",
                self.c
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub x0: Vector,
    pub step: StepSchedule,
    pub max_iters: u64,
    pub trace_every: u64,
    /// Reserved for randomized tie-breaks; the default path is deterministic.
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(x0: Vector) -> Self {
        SolverConfig {
            x0,
            step: StepSchedule::one_over_k(),
            max_iters: 200_000,
            trace_every: 1_000,
            seed: 0,
        }
    }
}

/// One sampled iterate of the solve loop.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub k: u64,
    pub x: Vector,
    /// Objective value T(x_k).
    pub objective: f64,
    /// Running best V_k = min over j <= k of T(x_j).
    pub v_k: f64,
    /// Selected active target index (smallest, zero-based).
    pub active_index: usize,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub x_best: Vector,
    pub v_best: f64,
    pub v_series: Vec<TracePoint>,
    pub iterations_run: u64,
    /// Rate certificate at the final iteration.
    pub bound_certificate: f64,
    pub warnings: Vec<String>,
}

/// Evaluates `T(x) = max_i T_i(x)` with the problem's inner budget.
pub fn objective(problem: &SibProblem, x: &Vector) -> Result<ObjectiveEval> {
    objective_with_inner(problem, x, &problem.inner)
}

pub(crate) fn objective_with_inner(
    problem: &SibProblem,
    x: &Vector,
    inner: &InnerConfig,
) -> Result<ObjectiveEval> {
    x.check_dim(problem.dim())?;
    let per_target: Vec<MinTimeResult> = problem
        .targets
        .iter()
        .map(|t| minimal_time(&problem.dynamic, t, x, inner))
        .collect::<Result<_>>()?;
    let value = per_target.iter().fold(0.0f64, |m, r| m.max(r.value));
    let cut = value - problem.tolerances.active * (1.0 + value);
    let active: Vec<usize> = per_target
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value >= cut)
        .map(|(i, _)| i)
        .collect();
    Ok(ObjectiveEval {
        value,
        per_target,
        active,
    })
}

/// Picks a subgradient of the objective at `x` from the smallest active
/// target: zero when that target's minimal time vanishes, otherwise an
/// element of the negated gauge subdifferential at the witness that also lies
/// in the target's normal cone there.
///
/// Singles are tried in face order first; a min-norm pass over convex
/// combinations of the generators absorbs witness inexactness. Failure
/// signals an inaccurate witness and the caller should retry with a
/// tightened inner budget.
pub fn select_subgradient(
    problem: &SibProblem,
    x: &Vector,
    eval: &ObjectiveEval,
) -> Result<Vector> {
    let i = *eval
        .active
        .first()
        .ok_or_else(|| Error::Precondition("objective evaluation has no active target".into()))?;
    let ti = &eval.per_target[i];
    if ti.value <= problem.tolerances.zero * (1.0 + x.norm()) {
        return Ok(Vector::zeros(x.dim()));
    }
    let omega = &ti.witness;
    let generators = problem.dynamic.gauge_subgrad_generators(&omega.sub(x))?;
    let target = &problem.targets[i];
    let mtol = problem.tolerances.membership;

    for generator in &generators {
        let g = generator.scale(-1.0);
        if target.normal_cone_contains(omega, &g, mtol)? {
            return Ok(g);
        }
    }

    let weights = min_norm_simplex_weights(&generators, 200);
    for candidate_weights in [&weights, &uniform_weights(generators.len())] {
        let g = combine(&generators, candidate_weights).scale(-1.0);
        if target.normal_cone_contains(omega, &g, mtol)? {
            return Ok(g);
        }
    }

    Err(Error::SubgradientSelection(format!(
        "no element of the negated gauge subdifferential at the witness of \
         target {i} passed the normal-cone test; the witness is likely inexact"
    )))
}

fn uniform_weights(m: usize) -> Vec<f64> {
    vec![1.0 / m as f64; m]
}

fn combine(generators: &[Vector], weights: &[f64]) -> Vector {
    let mut out = Vector::zeros(generators[0].dim());
    for (g, w) in generators.iter().zip(weights) {
        out = out.add_scaled(*w, g);
    }
    out
}

/// Minimizes `|| sum_i w_i g_i ||^2` over the probability simplex by
/// projected gradient with a fixed safe step.
fn min_norm_simplex_weights(generators: &[Vector], iters: usize) -> Vec<f64> {
    let m = generators.len();
    let mut w = uniform_weights(m);
    let mut gram = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            gram[a * m + b] = generators[a].dot(&generators[b]);
        }
    }
    let trace: f64 = (0..m).map(|a| gram[a * m + a]).sum();
    if trace <= 0.0 {
        return w;
    }
    let step = 1.0 / (2.0 * trace);
    for _ in 0..iters {
        let mut grad = vec![0.0; m];
        for (a, ga) in grad.iter_mut().enumerate() {
            *ga = 2.0 * (0..m).map(|b| gram[a * m + b] * w[b]).sum::<f64>();
        }
        for a in 0..m {
            w[a] -= step * grad[a];
        }
        w = project_simplex(&w);
    }
    w
}

/// Euclidean projection onto the probability simplex (sort-based).
fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite weights"));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|&yi| (yi - theta).max(0.0)).collect()
}

/// One projected subgradient update `x_{k+1} = P(x_k - alpha_k g; constraint)`.
pub fn step(
    problem: &SibProblem,
    config: &SolverConfig,
    k: u64,
    x_k: &Vector,
    g: &Vector,
) -> Result<Vector> {
    let alpha = config.step.alpha(k);
    problem
        .constraint
        .euclidean_project(&x_k.add_scaled(-alpha, g))
}

/// Runs the projected subgradient method for `config.max_iters` iterations,
/// maintaining the running best value and a sampled trace. Deterministic for
/// a fixed configuration.
pub fn solve(problem: &SibProblem, config: &SolverConfig) -> Result<SolveReport> {
    config.x0.check_dim(problem.dim())?;
    config.step.validate()?;
    if config.max_iters < 1 {
        return Err(Error::Precondition("max_iters must be >= 1".into()));
    }
    if !problem
        .constraint
        .contains(&config.x0, problem.tolerances.membership)?
    {
        return Err(Error::Precondition(
            "starting point x0 lies outside the constraint".into(),
        ));
    }

    let mut warnings = Vec::new();
    advisory_nondegeneracy(problem, &mut warnings);

    let mut x = config.x0.clone();
    let mut v_best = f64::INFINITY;
    let mut x_best = x.clone();
    let mut v_series: Vec<TracePoint> = Vec::new();
    let mut final_point: Option<TracePoint> = None;

    for k in 1..=config.max_iters {
        let eval = objective(problem, &x)?;
        if eval.value < v_best {
            v_best = eval.value;
            x_best = x.clone();
        }
        let alpha = config.step.alpha(k);
        let active_index = eval.active[0];
        let traced = config.trace_every > 0 && k % config.trace_every == 0;
        if traced || k == config.max_iters {
            let point = TracePoint {
                k,
                x: x.clone(),
                objective: eval.value,
                v_k: v_best,
                active_index,
                alpha,
            };
            if traced {
                v_series.push(point.clone());
            }
            if k == config.max_iters {
                final_point = Some(point);
            }
        }

        let g = match select_subgradient(problem, &x, &eval) {
            Ok(g) => g,
            Err(Error::SubgradientSelection(_)) => {
                let tightened = InnerConfig {
                    c: problem.inner.c,
                    max_inner: problem.inner.max_inner.saturating_mul(10),
                };
                let refined = objective_with_inner(problem, &x, &tightened)?;
                select_subgradient(problem, &x, &refined)?
            }
            Err(e) => return Err(e),
        };
        x = problem
            .constraint
            .euclidean_project(&x.add_scaled(-alpha, &g))?;
    }

    // Close the trace with the final iterate when it was not already sampled.
    if let Some(point) = final_point {
        if !v_series.is_empty() && v_series.last().map(|t| t.k) != Some(point.k) {
            v_series.push(point);
        }
    }

    let lipschitz = problem.dynamic.lipschitz_bound();
    let bound_certificate = match problem.constraint.diameter() {
        Ok(d) => error_bound(&config.step, config.max_iters, d, lipschitz)?,
        Err(_) => {
            warnings.push(
                "rate certificate unavailable: the constraint has no computable diameter"
                    .to_string(),
            );
            f64::INFINITY
        }
    };

    Ok(SolveReport {
        x_best,
        v_best,
        v_series,
        iterations_run: config.max_iters,
        bound_certificate,
        warnings,
    })
}

fn advisory_nondegeneracy(problem: &SibProblem, warnings: &mut Vec<String>) {
    if problem.dim() > 3 {
        warnings.push(
            "nondegeneracy check skipped: advisory grid is limited to dimension <= 3"
                .to_string(),
        );
        return;
    }
    let resolution = match problem.constraint.diameter() {
        Ok(d) if d > 0.0 => d / 100.0,
        Ok(_) => {
            // Point constraint: test the single point directly.
            0.0
        }
        Err(_) => {
            warnings.push(
                "nondegeneracy check skipped: the constraint has no computable bounding box"
                    .to_string(),
            );
            return;
        }
    };
    let outcome = if resolution == 0.0 {
        match &problem.constraint {
            ConvexBody::Point { p } => objective(problem, p).map(|eval| {
                eval.value > problem.tolerances.zero * (1.0 + p.norm())
            }),
            _ => Ok(true),
        }
    } else {
        check_nondegenerate(problem, resolution)
    };
    match outcome {
        Ok(true) => {}
        Ok(false) => warnings.push(
            "problem looks degenerate: some feasible point reaches every target at \
             time zero, so the optimal value may be 0 and the smallest-ball reading \
             of the minimizer weakens"
                .to_string(),
        ),
        Err(e) => warnings.push(format!("nondegeneracy check failed to run: {e}")),
    }
}

/// Numerically checks the well-posedness condition: no grid point of the
/// constraint (spacing `resolution`) reaches every target at time zero.
pub fn check_nondegenerate(problem: &SibProblem, resolution: f64) -> Result<bool> {
    if !(resolution > 0.0) {
        return Err(Error::Precondition(format!(
            "resolution must be > 0, got {resolution}"
        )));
    }
    let (lower, upper) = problem.constraint.bounding_box()?;
    for p in grid_points(&lower, &upper, resolution) {
        if !problem.constraint.contains(&p, 0.0)? {
            continue;
        }
        let eval = objective(problem, &p)?;
        if eval.value <= problem.tolerances.zero * (1.0 + p.norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rate certificate `(D^2 + L^2 sum alpha_i^2) / (2 sum alpha_i)` over the
/// first `k` steps of the schedule.
pub fn error_bound(schedule: &StepSchedule, k: u64, d: f64, l: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::Precondition("error bound needs k >= 1".into()));
    }
    schedule.validate()?;
    let mut sum_alpha = 0.0;
    let mut sum_alpha_sq = 0.0;
    for i in 1..=k {
        let a = schedule.alpha(i);
        sum_alpha += a;
        sum_alpha_sq += a * a;
    }
    Ok((d * d + l * l * sum_alpha_sq) / (2.0 * sum_alpha))
}

/// Certifies a candidate solution: `x` feasible and every target reachable
/// within radius `r` (both within `tol`).
pub fn certify(problem: &SibProblem, x: &Vector, r: f64, tol: f64) -> Result<bool> {
    if r < 0.0 {
        return Err(Error::Precondition(format!("radius must be >= 0, got {r}")));
    }
    if !problem.constraint.contains(x, tol)? {
        return Ok(false);
    }
    for target in &problem.targets {
        if !reaches_within(&problem.dynamic, target, x, r, tol, &problem.inner)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Halfspace;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords).unwrap()
    }

    fn face(a: &[f64], b: f64) -> Halfspace {
        Halfspace::new(v(a), b).unwrap()
    }

    fn corner_dynamic() -> PolyhedralDynamic {
        PolyhedralDynamic::new(vec![face(&[1.0, 0.0], 1.0), face(&[0.0, 1.0], 1.0)]).unwrap()
    }

    pub(crate) fn figure_problem() -> SibProblem {
        let centers = [
            (-30.0, 0.0),
            (-26.0, -34.0),
            (-20.0, -15.0),
            (-13.0, 8.0),
            (-9.0, -25.0),
            (2.0, -1.0),
            (8.0, -30.0),
            (8.0, 5.0),
        ];
        let targets = centers
            .iter()
            .map(|(cx, cy)| ConvexBody::box_centered(v(&[*cx, *cy]), 2.0).unwrap())
            .collect();
        SibProblem::new(
            corner_dynamic(),
            targets,
            ConvexBody::ball(v(&[-7.0, -4.0]), 4.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn objective_at_start_is_thirteen() {
        let p = figure_problem();
        let eval = objective(&p, &v(&[-7.0, -4.0])).unwrap();
        assert!((eval.value - 13.0).abs() < 1e-12);
        // Two squares tie at 13: (8, -30) and (8, 5).
        assert_eq!(eval.active, vec![6, 7]);
    }

    #[test]
    fn objective_at_optimum() {
        let p = figure_problem();
        let eval = objective(&p, &v(&[-3.10208, -3.10208])).unwrap();
        assert!((eval.value - 9.10208).abs() < 1e-12);
        // Three-way tie: squares at (-13, 8), (8, -30), (8, 5).
        assert_eq!(eval.active, vec![3, 6, 7]);
    }

    #[test]
    fn objective_single_point_target() {
        let p = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::point(v(&[0.0, 0.0])).unwrap()],
            ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        let eval = objective(&p, &v(&[0.0, 0.0])).unwrap();
        assert_eq!(eval.value, 0.0);
        assert_eq!(eval.active, vec![0]);
    }

    #[test]
    fn subgradient_box_left_of_start() {
        // Square at (-30, 0) seen from (-7, -4): the witness clamps to
        // (-28, -2), the vertical face drives the gauge, so g = (0, -1).
        let p = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::box_centered(v(&[-30.0, 0.0]), 2.0).unwrap()],
            ConvexBody::ball(v(&[-7.0, -4.0]), 40.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        let x = v(&[-7.0, -4.0]);
        let eval = objective(&p, &x).unwrap();
        assert!((eval.value - 2.0).abs() < 1e-12);
        let g = select_subgradient(&p, &x, &eval).unwrap();
        assert_eq!(g, v(&[0.0, -1.0]));
    }

    #[test]
    fn subgradient_box_below_start() {
        // Square at (0, -30) seen from (-7, -4): the witness clamps to
        // (-2, -28), the horizontal face drives the gauge, so g = (-1, 0).
        let p = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::box_centered(v(&[0.0, -30.0]), 2.0).unwrap()],
            ConvexBody::ball(v(&[-7.0, -4.0]), 40.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        let x = v(&[-7.0, -4.0]);
        let eval = objective(&p, &x).unwrap();
        assert!((eval.value - 5.0).abs() < 1e-12);
        let g = select_subgradient(&p, &x, &eval).unwrap();
        assert_eq!(g, v(&[-1.0, 0.0]));
    }

    #[test]
    fn subgradient_zero_inside_reachable_set() {
        // x inside target - F_inf for the active target: zero subgradient.
        let p = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::box_centered(v(&[-30.0, -30.0]), 2.0).unwrap()],
            ConvexBody::ball(v(&[-7.0, -4.0]), 40.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        let x = v(&[-7.0, -4.0]);
        let eval = objective(&p, &x).unwrap();
        assert_eq!(eval.value, 0.0);
        let g = select_subgradient(&p, &x, &eval).unwrap();
        assert_eq!(g, Vector::zeros(2));
    }

    #[test]
    fn step_examples() {
        let p = figure_problem();
        let cfg = SolverConfig::new(v(&[-7.0, -4.0]));
        // Zero subgradient leaves an interior iterate fixed.
        let x = v(&[-7.0, -4.0]);
        assert_eq!(step(&p, &cfg, 1, &x, &Vector::zeros(2)).unwrap(), x);
        // Interior move: no projection needed.
        let next = step(&p, &cfg, 1, &x, &v(&[-1.0, 0.0])).unwrap();
        assert_eq!(next, v(&[-6.0, -4.0]));
        // Radial projection back to the boundary.
        let tiny = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::point(v(&[0.0, 0.0])).unwrap()],
            ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        let next = step(&tiny, &cfg, 1, &v(&[1.0, 0.0]), &v(&[-2.0, 0.0])).unwrap();
        assert_eq!(next, v(&[1.0, 0.0]));
    }

    #[test]
    fn solve_trivial_point_target() {
        let x0 = v(&[0.25, -0.5]);
        let p = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::point(x0.clone()).unwrap()],
            ConvexBody::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        let mut cfg = SolverConfig::new(x0.clone());
        cfg.max_iters = 5;
        cfg.trace_every = 1;
        let report = solve(&p, &cfg).unwrap();
        assert_eq!(report.v_best, 0.0);
        assert_eq!(report.x_best, x0);
        assert_eq!(report.v_series.len(), 5);
    }

    #[test]
    fn solve_monotone_running_best_and_feasible_iterates() {
        let p = figure_problem();
        let mut cfg = SolverConfig::new(v(&[-7.0, -4.0]));
        cfg.max_iters = 2_000;
        cfg.trace_every = 50;
        let report = solve(&p, &cfg).unwrap();
        assert!(report.warnings.is_empty());
        let mut prev = f64::INFINITY;
        for t in &report.v_series {
            assert!(t.v_k <= prev + 1e-15);
            prev = t.v_k;
            assert!(p
                .constraint
                .contains(&t.x, p.tolerances.membership)
                .unwrap());
            assert!(t.v_k <= t.objective + 1e-15);
        }
        assert_eq!(report.v_series.last().unwrap().v_k, report.v_best);
        // The running best is attained by x_best.
        let at_best = objective(&p, &report.x_best).unwrap().value;
        assert!((at_best - report.v_best).abs() < 1e-12);
    }

    #[test]
    fn solve_reproduces_early_iterates() {
        // With the smallest-index tie-break the first steps move only in x1:
        // x_10 = (-7 + H(9), -4) where H is the harmonic sum.
        let p = figure_problem();
        let mut cfg = SolverConfig::new(v(&[-7.0, -4.0]));
        cfg.max_iters = 10;
        cfg.trace_every = 1;
        let report = solve(&p, &cfg).unwrap();
        let h9: f64 = (1..=9).map(|k| 1.0 / k as f64).sum();
        let x10 = &report.v_series[9];
        assert!((x10.x[0] - (-7.0 + h9)).abs() < 1e-12);
        assert!((x10.x[1] - (-4.0)).abs() < 1e-12);
        assert!((x10.v_k - (13.0 - h9)).abs() < 1e-12);
    }

    #[test]
    fn solve_is_deterministic() {
        let p = figure_problem();
        let mut cfg = SolverConfig::new(v(&[-7.0, -4.0]));
        cfg.max_iters = 500;
        cfg.trace_every = 10;
        let a = solve(&p, &cfg).unwrap();
        let b = solve(&p, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solve_rejects_outside_start() {
        let p = figure_problem();
        let cfg = SolverConfig::new(v(&[50.0, 50.0]));
        assert!(matches!(solve(&p, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn error_bound_examples() {
        let schedule = StepSchedule::one_over_k();
        assert!((error_bound(&schedule, 1, 8.0, 1.0).unwrap() - 32.5).abs() < 1e-12);
        assert!((error_bound(&schedule, 1, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-12);
        // Independent evaluation path: sum the series in reverse order.
        let k = 100_000u64;
        let mut sa = 0.0;
        let mut sa2 = 0.0;
        for i in (1..=k).rev() {
            let a = 1.0 / i as f64;
            sa += a;
            sa2 += a * a;
        }
        let expected = (64.0 + sa2) / (2.0 * sa);
        let got = error_bound(&schedule, k, 8.0, 1.0).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected);
        assert!(matches!(
            error_bound(&schedule, 0, 8.0, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn certify_figure_scene() {
        let p = figure_problem();
        let x = v(&[-3.10208, -3.10208]);
        // The truncated optimum sits ~5e-6 outside the disk, so a matching
        // membership slack is needed.
        assert!(certify(&p, &x, 9.10218, 1e-5).unwrap());
        assert!(!certify(&p, &x, 9.0, 1e-5).unwrap());
        assert!(!certify(&p, &v(&[20.0, 20.0]), 9.10218, 1e-5).unwrap());
    }

    #[test]
    fn nondegeneracy_detects_overlap() {
        let p = figure_problem();
        assert!(check_nondegenerate(&p, 0.1).unwrap());

        // A target whose zero level set swallows the constraint.
        let degenerate = SibProblem::new(
            corner_dynamic(),
            vec![ConvexBody::boxed(v(&[0.0, 0.0]), v(&[1.0, 1.0])).unwrap()],
            ConvexBody::ball(v(&[3.0, 3.0]), 1.0).unwrap(),
            Tolerances::default(),
            InnerConfig::default(),
        )
        .unwrap();
        assert!(!check_nondegenerate(&degenerate, 0.1).unwrap());
        let mut cfg = SolverConfig::new(v(&[3.0, 3.0]));
        cfg.max_iters = 3;
        cfg.trace_every = 1;
        let report = solve(&degenerate, &cfg).unwrap();
        assert!(report
            .warnings
            .iter()
            .any(|w| w.contains("degenerate")));
        assert_eq!(report.v_best, 0.0);
    }
}
