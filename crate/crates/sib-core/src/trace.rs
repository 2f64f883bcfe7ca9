//! Iterate-trace CSV emission.
//!
//! One row per traced iterate with header
//! `k,x_1,...,x_n,T,V_k,active_index,alpha_k`. Target indices are printed
//! one-based; numeric columns use a configurable decimal precision
//! (default 6).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::solver::SolveReport;

pub const DEFAULT_PRECISION: usize = 6;

/// Renders the trace CSV for a solve report.
pub fn trace_to_string(report: &SolveReport, precision: usize) -> String {
    let n = report.x_best.dim();
    let mut out = String::new();
    out.push('k');
    for j in 1..=n {
        let _ = write!(out, ",x_{j}");
    }
    out.push_str(",T,V_k,active_index,alpha_k\n");
    for t in &report.v_series {
        let _ = write!(out, "{}", t.k);
        for j in 0..n {
            let _ = write!(out, ",{:.precision$}", t.x[j]);
        }
        let _ = writeln!(
            out,
            ",{:.precision$},{:.precision$},{},{:.precision$}",
            t.objective,
            t.v_k,
            t.active_index + 1,
            t.alpha,
        );
    }
    out
}

/// Writes the trace CSV to `path`.
pub fn emit_trace(report: &SolveReport, path: &Path, precision: usize) -> Result<()> {
    fs::write(path, trace_to_string(report, precision))?;
    Ok(())
}
