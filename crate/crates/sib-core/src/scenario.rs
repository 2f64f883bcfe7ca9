//! Scenario files: JSON ingestion to a validated problem + solver
//! configuration, and the reverse serialization.
//!
//! Box targets accept either `{lower, upper}` or `{center, radius}`; both
//! normalize to lower/upper bounds internally and serialize back in the
//! normalized form.

use serde::{Deserialize, Serialize};

use crate::dynamics::PolyhedralDynamic;
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Halfspace, Vector};
use crate::minimal_time::InnerConfig;
use crate::solver::{
    SibProblem, SolverConfig, StepKind, StepSchedule, Tolerances,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub dimension: usize,
    pub dynamic: DynamicSpec,
    pub targets: Vec<BodySpec>,
    pub constraint: BodySpec,
    pub solver: SolverSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<InnerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicSpec {
    pub halfspaces: Vec<FaceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodySpec {
    Point {
        p: Vec<f64>,
    },
    Box {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<Vec<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Halfspaces {
        faces: Vec<FaceSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSpec {
    pub x0: Vec<f64>,
    #[serde(default = "StepSpec::one_over_k")]
    pub step: StepSpec,
    #[serde(default = "default_max_iters")]
    pub max_iters: u64,
    #[serde(default = "default_trace_every")]
    pub trace_every: u64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub kind: StepKindSpec,
    #[serde(default = "default_step_c")]
    pub c: f64,
    #[serde(default)]
    pub k0: u64,
}

impl StepSpec {
    fn one_over_k() -> Self {
        StepSpec {
            kind: StepKindSpec::OneOverK,
            c: 1.0,
            k0: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKindSpec {
    OneOverK,
    COverKPlusK0,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancesSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default = "default_max_inner")]
    pub max_inner: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub grid: f64,
}

fn default_max_iters() -> u64 {
    200_000
}

fn default_trace_every() -> u64 {
    1_000
}

fn default_step_c() -> f64 {
    1.0
}

fn default_max_inner() -> usize {
    2_000
}

/// Parses a scenario document into its raw spec form, reporting the JSON
/// path of the first malformed field.
pub fn parse_scenario_file(text: &str) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Scenario {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Parses and fully validates a scenario into a problem and solver
/// configuration, applying defaults for omitted fields.
pub fn parse_scenario(text: &str) -> Result<(SibProblem, SolverConfig)> {
    let scenario = parse_scenario_file(text)?;
    build_problem(&scenario)
}

fn vector_field(coords: &[f64], dimension: usize, path: &str) -> Result<Vector> {
    if coords.len() != dimension {
        return Err(Error::Scenario {
            path: path.to_string(),
            message: format!(
                "expected {dimension} coordinates, got {}",
                coords.len()
            ),
        });
    }
    Vector::from_slice(coords).map_err(|e| Error::Scenario {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn body_from_spec(spec: &BodySpec, dimension: usize, path: &str) -> Result<ConvexBody> {
    let wrap = |e: Error| Error::Scenario {
        path: path.to_string(),
        message: e.to_string(),
    };
    match spec {
        BodySpec::Point { p } => {
            ConvexBody::point(vector_field(p, dimension, path)?).map_err(wrap)
        }
        BodySpec::Box {
            center,
            radius,
            lower,
            upper,
        } => match (center, radius, lower, upper) {
            (Some(c), Some(r), None, None) => {
                ConvexBody::box_centered(vector_field(c, dimension, path)?, *r).map_err(wrap)
            }
            (None, None, Some(l), Some(u)) => ConvexBody::boxed(
                vector_field(l, dimension, path)?,
                vector_field(u, dimension, path)?,
            )
            .map_err(wrap),
            _ => Err(Error::Scenario {
                path: path.to_string(),
                message: "a box needs either {center, radius} or {lower, upper}".into(),
            }),
        },
        BodySpec::Ball { center, radius } => {
            ConvexBody::ball(vector_field(center, dimension, path)?, *radius).map_err(wrap)
        }
        BodySpec::Halfspaces { faces } => {
            let hs = faces
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    Halfspace::new(
                        vector_field(&f.a, dimension, &format!("{path}.faces[{i}].a"))?,
                        f.b,
                    )
                    .map_err(wrap)
                })
                .collect::<Result<Vec<_>>>()?;
            ConvexBody::halfspace_intersection(hs).map_err(wrap)
        }
    }
}

/// Builds the validated problem + configuration from a parsed scenario.
pub fn build_problem(scenario: &Scenario) -> Result<(SibProblem, SolverConfig)> {
    if scenario.dimension == 0 {
        return Err(Error::Scenario {
            path: "dimension".into(),
            message: "dimension must be >= 1".into(),
        });
    }
    let n = scenario.dimension;

    let faces = scenario
        .dynamic
        .halfspaces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let a = vector_field(&f.a, n, &format!("dynamic.halfspaces[{i}].a"))?;
            Halfspace::new(a, f.b).map_err(|e| Error::Scenario {
                path: format!("dynamic.halfspaces[{i}]"),
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dynamic = PolyhedralDynamic::new(faces).map_err(|e| Error::Scenario {
        path: "dynamic".into(),
        message: e.to_string(),
    })?;

    let targets = scenario
        .targets
        .iter()
        .enumerate()
        .map(|(i, t)| body_from_spec(t, n, &format!("targets[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let constraint = body_from_spec(&scenario.constraint, n, "constraint")?;

    let defaults = Tolerances::default();
    let tolerances = match &scenario.tolerances {
        Some(t) => Tolerances {
            active: t.active.unwrap_or(defaults.active),
            zero: t.zero.unwrap_or(defaults.zero),
            membership: t.membership.unwrap_or(defaults.membership),
        },
        None => defaults,
    };
    let inner = match &scenario.inner {
        Some(i) => InnerConfig {
            c: i.c,
            max_inner: i.max_inner,
        },
        None => InnerConfig::default(),
    };

    let problem = SibProblem::new(dynamic, targets, constraint, tolerances, inner)?;

    let x0 = vector_field(&scenario.solver.x0, n, "solver.x0")?;
    let step = StepSchedule {
        kind: match scenario.solver.step.kind {
            StepKindSpec::OneOverK => StepKind::OneOverK,
            StepKindSpec::COverKPlusK0 => StepKind::COverKPlusK0,
        },
        c: scenario.solver.step.c,
        k0: scenario.solver.step.k0,
    };
    if !(step.c > 0.0) {
        return Err(Error::Scenario {
            path: "solver.step.c".into(),
            message: format!("step constant must be > 0, got {}", step.c),
        });
    }
    if scenario.solver.max_iters < 1 {
        return Err(Error::Scenario {
            path: "solver.max_iters".into(),
            message: "must be >= 1".into(),
        });
    }
    if scenario.solver.trace_every < 1 {
        return Err(Error::Scenario {
            path: "solver.trace_every".into(),
            message: "must be >= 1".into(),
        });
    }
    let config = SolverConfig {
        x0,
        step,
        max_iters: scenario.solver.max_iters,
        trace_every: scenario.solver.trace_every,
        seed: scenario.solver.seed,
    };
    Ok((problem, config))
}

fn body_to_spec(body: &ConvexBody) -> BodySpec {
    match body {
        ConvexBody::Point { p } => BodySpec::Point {
            p: p.coords().to_vec(),
        },
        ConvexBody::Box { lower, upper } => BodySpec::Box {
            center: None,
            radius: None,
            lower: Some(lower.coords().to_vec()),
            upper: Some(upper.coords().to_vec()),
        },
        ConvexBody::Ball { center, radius } => BodySpec::Ball {
            center: center.coords().to_vec(),
            radius: *radius,
        },
        ConvexBody::HalfspaceIntersection { faces } => BodySpec::Halfspaces {
            faces: faces
                .iter()
                .map(|f| FaceSpec {
                    a: f.normal.coords().to_vec(),
                    b: f.offset,
                })
                .collect(),
        },
    }
}

/// Serializes a problem and configuration back to scenario JSON. Feeding the
/// output to `parse_scenario` reproduces the inputs field for field.
pub fn serialize_scenario(problem: &SibProblem, config: &SolverConfig) -> String {
    let scenario = Scenario {
        dimension: problem.dim(),
        dynamic: DynamicSpec {
            halfspaces: problem
                .dynamic
                .faces()
                .iter()
                .map(|f| FaceSpec {
                    a: f.normal.coords().to_vec(),
                    b: f.offset,
                })
                .collect(),
        },
        targets: problem.targets.iter().map(body_to_spec).collect(),
        constraint: body_to_spec(&problem.constraint),
        solver: SolverSpec {
            x0: config.x0.coords().to_vec(),
            step: StepSpec {
                kind: match config.step.kind {
                    StepKind::OneOverK => StepKindSpec::OneOverK,
                    StepKind::COverKPlusK0 => StepKindSpec::COverKPlusK0,
                },
                c: config.step.c,
                k0: config.step.k0,
            },
            max_iters: config.max_iters,
            trace_every: config.trace_every,
            seed: config.seed,
        },
        tolerances: Some(TolerancesSpec {
            active: Some(problem.tolerances.active),
            zero: Some(problem.tolerances.zero),
            membership: Some(problem.tolerances.membership),
        }),
        inner: Some(InnerSpec {
            c: problem.inner.c,
            max_inner: problem.inner.max_inner,
        }),
        oracle: None,
    };
    serde_json::to_string_pretty(&scenario).expect("scenario serialization cannot fail")
}
