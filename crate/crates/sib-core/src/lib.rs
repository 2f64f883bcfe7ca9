//! Smallest intersecting ball problems driven by polyhedral dynamics.
//!
//! The library models a closed convex dynamic `F` as a halfspace
//! intersection `{x : <a_i, x> <= b_i}` with all `b_i > 0` (so the origin is
//! interior and `F` may be unbounded), evaluates minimal-time functions
//! `T(x) = inf { t >= 0 : (x + tF) meets the target }` through the Minkowski
//! gauge of `F`, and minimizes the worst minimal time over a convex
//! constraint set with a projected subgradient method. Brute-force grid
//! oracles validate every closed form at desk scale, and scenario files,
//! CSV traces, and SVG renderings connect the solver to the command line.
//!
//! Module map:
//! - [`geometry`]: vectors, halfspaces, convex bodies (membership,
//!   projection, support, normal cones).
//! - [`dynamics`]: the dynamic `F`, its gauge, recession cone, gauge
//!   subdifferential generators, and Lipschitz modulus.
//! - [`minimal_time`]: minimal-time evaluation with witnesses.
//! - [`solver`]: the minimax objective, subgradient selection, the
//!   projected subgradient loop, rate certificates, and certification.
//! - [`oracle`]: grid-based reference evaluations.
//! - [`scenario`], [`trace`], [`svg`]: file formats for the CLI.
//! - [`check`]: seeded invariant suites for the `check` subcommand.

pub mod check;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod minimal_time;
pub mod oracle;
pub mod scenario;
pub mod solver;
pub mod svg;
pub mod trace;

pub use dynamics::{GaugeEval, PolyhedralDynamic};
pub use error::{Error, Result};
pub use geometry::{ConvexBody, Halfspace, Vector};
pub use minimal_time::{is_zero_level, minimal_time, reaches_within, InnerConfig, MinTimeResult};
pub use oracle::{gauge_oracle, grid_minimize, minimal_time_oracle, OracleResult};
pub use scenario::{parse_scenario, serialize_scenario, Scenario};
pub use solver::{
    certify, check_nondegenerate, error_bound, objective, select_subgradient, solve, step,
    ObjectiveEval, SibProblem, SolveReport, SolverConfig, StepKind, StepSchedule, Tolerances,
    TracePoint,
};
pub use svg::{emit_svg, svg_to_string};
pub use trace::{emit_trace, trace_to_string, DEFAULT_PRECISION};
