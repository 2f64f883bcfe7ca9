//! Static 2-D SVG rendering of a problem instance and its solution: the
//! constraint outline, every target outline, the best-point marker, and the
//! traced iterate path when one exists.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Vector};
use crate::solver::{SibProblem, SolveReport};

/// Renders the scene to a standalone SVG document. Two-dimensional problems
/// only. The viewBox is fitted to the drawn elements with a 10% margin; the
/// vertical axis is flipped so the picture uses mathematical orientation.
pub fn svg_to_string(problem: &SibProblem, report: &SolveReport) -> Result<String> {
    if problem.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: problem.dim(),
        });
    }

    let mut bounds = Bounds::new();
    for target in &problem.targets {
        bounds.add_body(target);
    }
    bounds.add_body(&problem.constraint);
    bounds.add_point(&report.x_best);
    for t in &report.v_series {
        bounds.add_point(&t.x);
    }
    let (min_x, min_y, max_x, max_y) = bounds.finish();
    let margin = 0.1 * (max_x - min_x).max(max_y - min_y).max(1.0);
    let (lo_x, lo_y) = (min_x - margin, min_y - margin);
    let (hi_x, hi_y) = (max_x + margin, max_y + margin);
    let (width, height) = (hi_x - lo_x, hi_y - lo_y);
    let stroke = 0.008 * width.max(height);
    let marker_r = 1.5 * stroke;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        lo_x, -hi_y, width, height
    );

    let constraint_style = format!(
        r##"fill="none" stroke="#1f4e8c" stroke-width="{stroke:.6}" stroke-dasharray="{dash:.6} {dash:.6}""##,
        dash = 3.0 * stroke
    );
    draw_body(
        &mut out,
        &problem.constraint,
        &constraint_style,
        (lo_x, lo_y, hi_x, hi_y),
        stroke,
    );

    let target_style = format!(
        r##"fill="#d7e3f4" fill-opacity="0.6" stroke="#333333" stroke-width="{stroke:.6}""##
    );
    for target in &problem.targets {
        draw_body(&mut out, target, &target_style, (lo_x, lo_y, hi_x, hi_y), stroke);
    }

    if report.v_series.len() >= 2 {
        let _ = write!(
            out,
            r##"  <polyline fill="none" stroke="#888888" stroke-width="{:.6}" points=""##,
            0.5 * stroke
        );
        for (i, t) in report.v_series.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.6},{:.6}", t.x[0], -t.x[1]);
        }
        out.push_str("\"/>\n");
    }

    let _ = writeln!(
        out,
        r##"  <circle class="solution" cx="{:.6}" cy="{:.6}" r="{marker_r:.6}" fill="#c0392b"/>"##,
        report.x_best[0], -report.x_best[1]
    );

    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes the rendered scene to `path`.
pub fn emit_svg(problem: &SibProblem, report: &SolveReport, path: &Path) -> Result<()> {
    fs::write(path, svg_to_string(problem, report)?)?;
    Ok(())
}

fn draw_body(
    out: &mut String,
    body: &ConvexBody,
    style: &str,
    scene: (f64, f64, f64, f64),
    stroke: f64,
) {
    match body {
        ConvexBody::Point { p } => {
            let _ = writeln!(
                out,
                r#"  <circle cx="{:.6}" cy="{:.6}" r="{:.6}" {style}/>"#,
                p[0],
                -p[1],
                1.2 * stroke
            );
        }
        ConvexBody::Box { lower, upper } => {
            let _ = writeln!(
                out,
                r#"  <rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" {style}/>"#,
                lower[0],
                -upper[1],
                upper[0] - lower[0],
                upper[1] - lower[1]
            );
        }
        ConvexBody::Ball { center, radius } => {
            let _ = writeln!(
                out,
                r#"  <circle cx="{:.6}" cy="{:.6}" r="{:.6}" {style}/>"#,
                center[0], -center[1], radius
            );
        }
        ConvexBody::HalfspaceIntersection { faces } => {
            // No closed outline without vertex enumeration; draw each face
            // boundary line clipped to the scene rectangle.
            for f in faces {
                if let Some(((x1, y1), (x2, y2))) =
                    clip_line_to_rect(f.normal.coords(), f.offset, scene)
                {
                    let _ = writeln!(
                        out,
                        r#"  <line x1="{x1:.6}" y1="{:.6}" x2="{x2:.6}" y2="{:.6}" {style}/>"#,
                        -y1, -y2
                    );
                }
            }
        }
    }
}

/// Clips the line `<a, p> = b` to an axis-aligned rectangle, returning the
/// visible segment endpoints when nonempty.
fn clip_line_to_rect(
    a: &[f64],
    b: f64,
    (lo_x, lo_y, hi_x, hi_y): (f64, f64, f64, f64),
) -> Option<((f64, f64), (f64, f64))> {
    let nn = a[0] * a[0] + a[1] * a[1];
    if nn == 0.0 {
        return None;
    }
    let base = (a[0] * b / nn, a[1] * b / nn);
    let dir = (-a[1], a[0]);
    let mut t_min = f64::NEG_INFINITY;
    let mut t_max = f64::INFINITY;
    for (p, d, lo, hi) in [
        (base.0, dir.0, lo_x, hi_x),
        (base.1, dir.1, lo_y, hi_y),
    ] {
        if d.abs() < 1e-300 {
            if p < lo || p > hi {
                return None;
            }
        } else {
            let (t1, t2) = ((lo - p) / d, (hi - p) / d);
            t_min = t_min.max(t1.min(t2));
            t_max = t_max.min(t1.max(t2));
        }
    }
    if t_min >= t_max {
        return None;
    }
    Some((
        (base.0 + t_min * dir.0, base.1 + t_min * dir.1),
        (base.0 + t_max * dir.0, base.1 + t_max * dir.1),
    ))
}

struct Bounds {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Bounds {
    fn new() -> Self {
        Bounds {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn add_point(&mut self, p: &Vector) {
        self.min_x = self.min_x.min(p[0]);
        self.max_x = self.max_x.max(p[0]);
        self.min_y = self.min_y.min(p[1]);
        self.max_y = self.max_y.max(p[1]);
    }

    fn add_body(&mut self, body: &ConvexBody) {
        if let Ok((lower, upper)) = body.bounding_box() {
            self.min_x = self.min_x.min(lower[0]);
            self.min_y = self.min_y.min(lower[1]);
            self.max_x = self.max_x.max(upper[0]);
            self.max_y = self.max_y.max(upper[1]);
        }
    }

    fn finish(self) -> (f64, f64, f64, f64) {
        (self.min_x, self.min_y, self.max_x, self.max_y)
    }
}
