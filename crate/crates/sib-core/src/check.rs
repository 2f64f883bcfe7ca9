//! Seeded invariant suites run by the `check` subcommand against a concrete
//! scenario: gauge identities, projection and support contracts, and
//! minimal-time witness consistency.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::geometry::{ConvexBody, Vector};
use crate::minimal_time::minimal_time;
use crate::oracle::minimal_time_oracle;
use crate::solver::SibProblem;

/// Result of one invariant suite.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failure, when any.
    pub detail: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Suite {
    name: String,
    cases: usize,
    failures: usize,
    detail: Option<String>,
}

impl Suite {
    fn new(name: &str) -> Self {
        Suite {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            detail: None,
        }
    }

    fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            detail: self.detail,
        }
    }
}

/// Axis-aligned sampling window covering the scene with generous margin.
fn sampling_window(problem: &SibProblem) -> (Vec<f64>, Vec<f64>) {
    let n = problem.dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    let mut absorb = |body: &ConvexBody| {
        if let Ok((l, u)) = body.bounding_box() {
            for j in 0..n {
                lo[j] = lo[j].min(l[j]);
                hi[j] = hi[j].max(u[j]);
            }
        }
    };
    for t in &problem.targets {
        absorb(t);
    }
    absorb(&problem.constraint);
    for j in 0..n {
        if !lo[j].is_finite() {
            lo[j] = -10.0;
            hi[j] = 10.0;
        }
        let span = (hi[j] - lo[j]).max(1.0);
        lo[j] -= 0.5 * span;
        hi[j] += 0.5 * span;
    }
    (lo, hi)
}

fn sample(lo: &[f64], hi: &[f64], rng: &mut StdRng) -> Vector {
    Vector::new(
        lo.iter()
            .zip(hi)
            .map(|(l, h)| rng.random_range(*l..=*h))
            .collect(),
    )
    .expect("window coordinates are finite")
}

fn sample_in_body(body: &ConvexBody, rng: &mut StdRng) -> Option<Vector> {
    match body {
        ConvexBody::Point { p } => Some(p.clone()),
        ConvexBody::Box { lower, upper } => Some(
            Vector::new(
                (0..lower.dim())
                    .map(|j| rng.random_range(lower[j]..=upper[j]))
                    .collect(),
            )
            .expect("box bounds are finite"),
        ),
        ConvexBody::Ball { center, radius } => loop {
            let d: Vec<f64> = (0..center.dim())
                .map(|_| rng.random_range(-1.0..=1.0))
                .collect();
            let cand = Vector::new(d).expect("finite");
            if cand.norm() <= 1.0 {
                return Some(center.add_scaled(*radius, &cand));
            }
        },
        ConvexBody::HalfspaceIntersection { .. } => None,
    }
}

/// Runs every suite against the scenario's dynamic and bodies.
pub fn run_all(problem: &SibProblem, seed: u64) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    vec![
        gauge_positive_homogeneity(problem, &mut rng),
        gauge_subadditivity(problem, &mut rng),
        gauge_zero_set_matches_recession_cone(problem, &mut rng),
        gauge_lipschitz(problem, &mut rng),
        gauge_subgradient_inequality(problem, &mut rng),
        gauge_unit_sublevel_membership(problem, &mut rng),
        projection_contracts(problem, &mut rng),
        support_dominance(problem, &mut rng),
        minimal_time_witness_validity(problem, &mut rng),
        minimal_time_oracle_agreement(problem, &mut rng),
    ]
}

fn gauge_positive_homogeneity(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("gauge/positive-homogeneity");
    let (lo, hi) = sampling_window(problem);
    for _ in 0..500 {
        let u = sample(&lo, &hi, rng);
        let lambda = rng.random_range(1e-3..10.0);
        let gu = problem.dynamic.gauge(&u).unwrap().value;
        let glu = problem.dynamic.gauge(&u.scale(lambda)).unwrap().value;
        let ok = (glu - lambda * gu).abs() <= 1e-12 * (1.0 + lambda * gu);
        suite.case(ok, || format!("u={:?} lambda={lambda}", u.coords()));
    }
    suite.finish()
}

fn gauge_subadditivity(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("gauge/subadditivity");
    let (lo, hi) = sampling_window(problem);
    for _ in 0..500 {
        let u = sample(&lo, &hi, rng);
        let w = sample(&lo, &hi, rng);
        let gu = problem.dynamic.gauge(&u).unwrap().value;
        let gw = problem.dynamic.gauge(&w).unwrap().value;
        let gs = problem.dynamic.gauge(&u.add(&w)).unwrap().value;
        suite.case(gs <= gu + gw + 1e-9, || {
            format!("u={:?} w={:?}", u.coords(), w.coords())
        });
    }
    suite.finish()
}

fn gauge_zero_set_matches_recession_cone(
    problem: &SibProblem,
    rng: &mut StdRng,
) -> CheckOutcome {
    let mut suite = Suite::new("gauge/zero-set-recession-cone");
    let (lo, hi) = sampling_window(problem);
    for _ in 0..500 {
        let u = sample(&lo, &hi, rng);
        let zero = problem.dynamic.gauge(&u).unwrap().value == 0.0;
        let cone = problem.dynamic.recession_contains(&u, 0.0).unwrap();
        suite.case(zero == cone, || format!("u={:?}", u.coords()));
    }
    suite.finish()
}

fn gauge_lipschitz(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("gauge/lipschitz");
    let (lo, hi) = sampling_window(problem);
    let ell = problem.dynamic.lipschitz_bound();
    for _ in 0..500 {
        let u = sample(&lo, &hi, rng);
        let w = sample(&lo, &hi, rng);
        let gu = problem.dynamic.gauge(&u).unwrap().value;
        let gw = problem.dynamic.gauge(&w).unwrap().value;
        suite.case((gu - gw).abs() <= ell * u.dist(&w) + 1e-9, || {
            format!("u={:?} w={:?}", u.coords(), w.coords())
        });
    }
    suite.finish()
}

fn gauge_subgradient_inequality(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("gauge/subgradient-inequality");
    let (lo, hi) = sampling_window(problem);
    let mut tested = 0;
    while tested < 50 {
        let u = sample(&lo, &hi, rng);
        let gu = problem.dynamic.gauge(&u).unwrap().value;
        if gu <= 0.0 {
            continue;
        }
        tested += 1;
        let generators = problem.dynamic.gauge_subgrad_generators(&u).unwrap();
        for g in &generators {
            for _ in 0..20 {
                let z = sample(&lo, &hi, rng);
                let gz = problem.dynamic.gauge(&z).unwrap().value;
                suite.case(gz >= gu + g.dot(&z.sub(&u)) - 1e-9, || {
                    format!("u={:?} z={:?}", u.coords(), z.coords())
                });
            }
        }
    }
    suite.finish()
}

fn gauge_unit_sublevel_membership(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("gauge/unit-sublevel-membership");
    let (lo, hi) = sampling_window(problem);
    for _ in 0..500 {
        let u = sample(&lo, &hi, rng);
        let gu = problem.dynamic.gauge(&u).unwrap().value;
        let f = if gu > 1.0 { u.scale(1.0 / gu) } else { u };
        let inside = problem
            .dynamic
            .faces()
            .iter()
            .all(|face| face.normal.dot(&f) <= face.offset + 1e-9);
        suite.case(inside, || format!("f={:?}", f.coords()));
    }
    suite.finish()
}

fn projection_contracts(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("geometry/projection");
    let (lo, hi) = sampling_window(problem);
    let bodies: Vec<&ConvexBody> = problem
        .targets
        .iter()
        .chain(std::iter::once(&problem.constraint))
        .collect();
    for body in bodies {
        for _ in 0..10 {
            let x = sample(&lo, &hi, rng);
            let p = match body.euclidean_project(&x) {
                Ok(p) => p,
                Err(_) => continue,
            };
            suite.case(body.contains(&p, 1e-6).unwrap_or(false), || {
                format!("projection left the body at x={:?}", x.coords())
            });
            for _ in 0..50 {
                let Some(y) = sample_in_body(body, rng) else {
                    break;
                };
                suite.case(p.dist(&x) <= y.dist(&x) + 1e-9, || {
                    format!("suboptimal projection at x={:?}", x.coords())
                });
                suite.case(x.sub(&p).dot(&y.sub(&p)) <= 1e-9, || {
                    format!("characterization failed at x={:?}", x.coords())
                });
            }
        }
    }
    suite.finish()
}

fn support_dominance(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("geometry/support-dominance");
    let (lo, hi) = sampling_window(problem);
    let bodies: Vec<&ConvexBody> = problem
        .targets
        .iter()
        .chain(std::iter::once(&problem.constraint))
        .filter(|b| b.is_bounded())
        .collect();
    for body in bodies {
        for _ in 0..10 {
            let dir = sample(&lo, &hi, rng);
            let s = body.support(&dir).unwrap();
            for _ in 0..50 {
                let Some(y) = sample_in_body(body, rng) else {
                    break;
                };
                suite.case(dir.dot(&y) <= s + 1e-9, || {
                    format!("support violated along {:?}", dir.coords())
                });
            }
        }
    }
    suite.finish()
}

fn minimal_time_witness_validity(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("minimal-time/witness-validity");
    let (lo, hi) = sampling_window(problem);
    for _ in 0..100 {
        let x = sample(&lo, &hi, rng);
        for target in &problem.targets {
            let r = minimal_time(&problem.dynamic, target, &x, &problem.inner).unwrap();
            suite.case(target.contains(&r.witness, 1e-6).unwrap(), || {
                format!("witness outside target at x={:?}", x.coords())
            });
            let recomputed = problem.dynamic.gauge(&r.witness.sub(&x)).unwrap().value;
            suite.case((recomputed - r.value).abs() <= 1e-9, || {
                format!("witness value drift at x={:?}", x.coords())
            });
        }
    }
    suite.finish()
}

fn minimal_time_oracle_agreement(problem: &SibProblem, rng: &mut StdRng) -> CheckOutcome {
    let mut suite = Suite::new("minimal-time/oracle-agreement");
    let (lo, hi) = sampling_window(problem);
    let h = 0.05;
    let ell = problem.dynamic.lipschitz_bound();
    let slack = ell * h * (problem.dim() as f64).sqrt() + 1e-9;
    for _ in 0..25 {
        let x = sample(&lo, &hi, rng);
        for target in &problem.targets {
            let r = minimal_time(&problem.dynamic, target, &x, &problem.inner).unwrap();
            if !r.exact {
                continue; // the grid bound certifies closed-form paths only
            }
            let oracle = minimal_time_oracle(&problem.dynamic, target, &x, h).unwrap();
            suite.case((r.value - oracle).abs() <= slack, || {
                format!(
                    "closed form {} vs oracle {oracle} at x={:?}",
                    r.value,
                    x.coords()
                )
            });
        }
    }
    suite.finish()
}
