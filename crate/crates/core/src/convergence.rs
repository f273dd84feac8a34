//! Grid-refinement driver: runs a solver on successively halved steps,
//! reports errors and observed orders, and renders small CSV / Markdown
//! tables.

use crate::deriv::{caputo_approx, TestFunction};
use crate::error::{validate_alpha, Error, Result};
use crate::relaxation::{self, RelaxEquation};
use crate::subdiffusion::{example_1, example_2, regularize_example_2, SpaceTimeGrid};
use crate::weights::{expansion_coeff, SchemeId};

/// Errors at or below this are treated as round-off; no order is reported
/// across them.
pub const ORDER_FLOOR: f64 = 1e-13;

/// Observed convergence order between two errors one halving apart.
pub fn observed_order(e_coarse: f64, e_fine: f64) -> Result<f64> {
    if !(e_coarse > 0.0) || !(e_fine > 0.0) || !e_coarse.is_finite() || !e_fine.is_finite() {
        return Err(Error::OrderUndefined {
            coarse: e_coarse,
            fine: e_fine,
        });
    }
    Ok((e_coarse / e_fine).log2())
}

/// Least-squares slope of `ln e` against `ln h`; `None` when the data are
/// unusable (fewer than two points, nonpositive values, or a degenerate
/// spread of steps).
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(h, e) in points {
        if !(h > 0.0 && e > 0.0) || !h.is_finite() || !e.is_finite() {
            return None;
        }
        logs.push((h.ln(), e.ln()));
    }
    let n = logs.len() as f64;
    let (mx, my) = logs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (num, den) = logs.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    if den == 0.0 {
        return None;
    }
    Some(num / den)
}

/// What a refinement sweep solves at each level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaskKind {
    /// Relaxation benchmark: max trajectory error on `[0, 1]`.
    Relax {
        equation: RelaxEquation,
        scheme: SchemeId,
    },
    /// Subdiffusion benchmark (`example` is 1 or 2) on the square grid
    /// `τ = h`; optionally the regularized form of example 2.
    Subdiff { example: u8, regularize: Option<usize> },
    /// Pointwise derivative approximation error at `x`.
    Caputo {
        function: TestFunction,
        scheme: SchemeId,
        x: f64,
    },
}

/// A refinement request: start at step `h_start` and halve `levels − 1`
/// times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementSpec {
    pub task: TaskKind,
    pub alpha: f64,
    pub h_start: f64,
    pub levels: usize,
}

/// One refinement level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub h: f64,
    pub error: f64,
    /// Observed order versus the previous (twice as coarse) level; `None`
    /// when no coarser run exists or either error sits at round-off.
    pub order: Option<f64>,
}

/// Errors and observed orders for one refinement sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
}

/// Generic driver: `eval(m)` returns the error with `m` steps across an
/// interval of length `scale`. An extra run at `2·h_start` (when it exists)
/// gives the first row an order too.
pub fn run_refinement_with(
    scale: f64,
    h_start: f64,
    levels: usize,
    min_steps: usize,
    eval: impl Fn(usize) -> Result<f64>,
) -> Result<ConvergenceReport> {
    if !(scale > 0.0) {
        return Err(Error::NonPositive {
            what: "refinement interval",
            value: scale,
        });
    }
    if !(h_start > 0.0) {
        return Err(Error::NonPositive {
            what: "starting step",
            value: h_start,
        });
    }
    if !(2..=24).contains(&levels) {
        return Err(Error::InvalidArgument(format!(
            "refinement needs between 2 and 24 levels, got {levels}"
        )));
    }
    let m0f = (scale / h_start).round();
    if !m0f.is_finite() || m0f < min_steps as f64 || (m0f * h_start / scale - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "starting step {h_start} must divide the interval {scale} into at least {min_steps} equal parts"
        )));
    }
    let m0 = m0f as usize;
    if m0 > usize::MAX >> levels {
        return Err(Error::InvalidArgument(format!(
            "refinement from {m0} steps over {levels} levels overflows"
        )));
    }

    let mut prev = if m0.is_multiple_of(2) && m0 / 2 >= min_steps {
        Some(eval(m0 / 2)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(levels);
    for i in 0..levels {
        let m = m0 << i;
        let error = eval(m)?;
        let order = match prev {
            Some(pe) if pe > ORDER_FLOOR && error > ORDER_FLOOR => Some((pe / error).log2()),
            _ => None,
        };
        rows.push(ReportRow {
            h: scale / m as f64,
            error,
            order,
        });
        prev = Some(error);
    }
    Ok(ConvergenceReport { rows })
}

/// Run the refinement described by `spec`.
pub fn run_refinement(spec: &RefinementSpec) -> Result<ConvergenceReport> {
    validate_alpha(spec.alpha)?;
    match spec.task {
        TaskKind::Relax { equation, scheme } => {
            let problem = equation.problem(spec.alpha)?;
            run_refinement_with(1.0, spec.h_start, spec.levels, 2, move |m| {
                let traj = relaxation::solve(&problem, scheme, 1.0 / m as f64, m)?;
                relaxation::max_error(&traj, &problem)
            })
        }
        TaskKind::Subdiff {
            example,
            regularize,
        } => match regularize {
            Some(order) => {
                if example != 2 {
                    return Err(Error::InvalidArgument(format!(
                        "regularization is defined for example 2 only, not example {example}"
                    )));
                }
                let reg = regularize_example_2(spec.alpha, order)?;
                run_refinement_with(1.0, spec.h_start, spec.levels, 2, move |m| {
                    let sol = reg.solve(SpaceTimeGrid::square(m)?)?;
                    sol.max_error(reg.problem())
                })
            }
            None => {
                let problem = match example {
                    1 => example_1(spec.alpha)?,
                    2 => example_2(spec.alpha)?,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown subdiffusion example {other} (expected 1 or 2)"
                        )))
                    }
                };
                run_refinement_with(1.0, spec.h_start, spec.levels, 2, move |m| {
                    let sol = crate::subdiffusion::solve(&problem, SpaceTimeGrid::square(m)?)?;
                    sol.max_error(&problem)
                })
            }
        },
        TaskKind::Caputo {
            function,
            scheme,
            x,
        } => {
            let exact = function.exact_caputo(spec.alpha, x)?;
            let alpha = spec.alpha;
            run_refinement_with(x, spec.h_start, spec.levels, scheme.min_points(), move |n| {
                Ok((caputo_approx(scheme, alpha, function, x, n)? - exact).abs())
            })
        }
    }
}

/// Plain-text output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Csv,
    Md,
}

impl std::str::FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(RenderFormat::Csv),
            "md" | "markdown" => Ok(RenderFormat::Md),
            _ => Err(Error::InvalidArgument(format!(
                "unknown format `{s}` (expected csv or md)"
            ))),
        }
    }
}

impl std::fmt::Display for RenderFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RenderFormat::Csv => "csv",
            RenderFormat::Md => "md",
        })
    }
}

/// Format with six significant digits, `%g`-style (fixed point near 1,
/// scientific for extreme magnitudes, no trailing zeros).
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_trailing(format!("{:.*}", decimals, x))
    } else {
        let s = format!("{:.5e}", x);
        match s.find('e') {
            Some(pos) => {
                let mantissa = trim_trailing(s[..pos].to_string());
                format!("{mantissa}{}", &s[pos..])
            }
            None => s,
        }
    }
}

fn trim_trailing(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn fmt_error_table(e: f64) -> String {
    if e.abs() >= 1e-5 {
        format!("{e:.7}")
    } else {
        format!("{e:.1e}")
    }
}

/// Render a report as CSV (`h,error,order`, six significant digits) or as a
/// Markdown table (fixed-point errors above 1e−5, scientific below; orders
/// to four decimals). Missing orders render as empty cells in both.
pub fn render(report: &ConvergenceReport, format: RenderFormat) -> String {
    let mut out = String::new();
    match format {
        RenderFormat::Csv => {
            out.push_str("h,error,order\n");
            for row in &report.rows {
                out.push_str(&fmt_g6(row.h));
                out.push(',');
                out.push_str(&fmt_g6(row.error));
                out.push(',');
                if let Some(p) = row.order {
                    out.push_str(&fmt_g6(p));
                }
                out.push('\n');
            }
        }
        RenderFormat::Md => {
            out.push_str("| h | error | order |\n| --- | --- | --- |\n");
            for row in &report.rows {
                let order = row.order.map(|p| format!("{p:.4}")).unwrap_or_default();
                out.push_str(&format!(
                    "| {} | {} | {} |\n",
                    fmt_g6(row.h),
                    fmt_error_table(row.error),
                    order
                ));
            }
        }
    }
    out
}

/// Magnitudes of the leading error coefficients of the four schemes that
/// have one, sampled at one order value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSample {
    pub alpha: f64,
    pub l1: f64,
    pub trap_sigma: f64,
    pub quad_sigma: f64,
    pub mid_sigma: f64,
}

/// Sample the expansion-coefficient magnitudes on a grid of orders; each
/// requested value is clipped into `[0.01, 0.99]` to stay clear of the
/// endpoint singularities.
pub fn coefficient_curve(alphas: &[f64]) -> Result<Vec<CoefficientSample>> {
    alphas
        .iter()
        .map(|&raw| {
            let alpha = raw.clamp(0.01, 0.99);
            Ok(CoefficientSample {
                alpha,
                l1: expansion_coeff(SchemeId::L1, alpha)?.abs(),
                trap_sigma: expansion_coeff(SchemeId::TrapSigma, alpha)?.abs(),
                quad_sigma: expansion_coeff(SchemeId::QuadSigma, alpha)?.abs(),
                mid_sigma: expansion_coeff(SchemeId::MidSigma, alpha)?.abs(),
            })
        })
        .collect()
}

/// Render coefficient samples in the same two formats as [`render`].
pub fn render_coefficients(rows: &[CoefficientSample], format: RenderFormat) -> String {
    let mut out = String::new();
    match format {
        RenderFormat::Csv => {
            out.push_str("alpha,l1,trap-sigma,quad-sigma,mid-sigma\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_g6(r.alpha),
                    fmt_g6(r.l1),
                    fmt_g6(r.trap_sigma),
                    fmt_g6(r.quad_sigma),
                    fmt_g6(r.mid_sigma)
                ));
            }
        }
        RenderFormat::Md => {
            out.push_str(
                "| alpha | l1 | trap-sigma | quad-sigma | mid-sigma |\n| --- | --- | --- | --- | --- |\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    fmt_g6(r.alpha),
                    fmt_g6(r.l1),
                    fmt_g6(r.trap_sigma),
                    fmt_g6(r.quad_sigma),
                    fmt_g6(r.mid_sigma)
                ));
            }
        }
    }
    out
}
