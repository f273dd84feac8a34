//! Command-line driver: weight rows, pointwise derivatives, the two
//! benchmark solvers, refinement sweeps and coefficient curves.
//!
//! Exit codes: 0 on success, 2 for domain/validation problems (including
//! argument parsing), 3 when the numerics themselves fail.

// `if !(x > 0.0)` is the NaN-rejecting form of a domain guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use caputo::convergence::{
    coefficient_curve, render, render_coefficients, run_refinement, RefinementSpec, RenderFormat,
    TaskKind,
};
use caputo::deriv::{caputo_approx, TestFunction};
use caputo::relaxation::{self, RelaxEquation};
use caputo::subdiffusion::{self, SpaceTimeGrid};
use caputo::weights::generate;
use caputo::{Error, SchemeId};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "caputo",
    version,
    about = "Weight schemes and benchmark solvers for Caputo fractional derivatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format: csv or md
    #[arg(long, default_value = "csv")]
    format: RenderFormat,
    /// Write the output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print one weight row w_0..w_n of a scheme
    Weights {
        /// One of: l1, l1-delta, trap-sigma, quad-sigma, mid-omega, mid-sigma, mid-delta
        #[arg(long)]
        scheme: SchemeId,
        /// Derivative order in (0, 1)
        #[arg(long)]
        alpha: f64,
        /// Number of subintervals
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Approximate the Caputo derivative of a test function at a point
    Caputo {
        #[arg(long)]
        scheme: SchemeId,
        #[arg(long)]
        alpha: f64,
        /// One of: one, x, x2, x3, poly4, exp, cos2pi
        #[arg(long)]
        function: TestFunction,
        /// Evaluation point
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        /// Number of subintervals
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Solve the relaxation benchmark D^a y + y = F
    Relax {
        /// Benchmark equation: I (quartic), II (exponential), III (cosine)
        #[arg(long)]
        equation: RelaxEquation,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "mid-sigma")]
        scheme: SchemeId,
        /// Time step (must divide the interval evenly)
        #[arg(long)]
        h: f64,
        #[arg(long, default_value_t = 1.0)]
        t_final: f64,
        /// Also write the trajectory (t,value,exact,error) as CSV to this file
        #[arg(long)]
        emit_trajectory: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Solve a subdiffusion benchmark on the square grid (tau = h, T = 1)
    Subdiff {
        /// Benchmark number: 1 (exponential) or 2 (decaying mode)
        #[arg(long)]
        example: u8,
        #[arg(long)]
        alpha: f64,
        /// Grid cells in each direction
        #[arg(long)]
        steps: usize,
        /// Solve the regularized form of example 2, subtracting this many terms
        #[arg(long)]
        regularize_m: Option<usize>,
        /// Also write the final layer (x,value,exact,error) as CSV to this file
        #[arg(long)]
        emit_field: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Halve the step repeatedly, reporting errors and observed orders
    Converge {
        /// What to refine: relax, subdiff or caputo
        #[arg(long)]
        task: String,
        #[arg(long)]
        alpha: f64,
        /// Coarsest step
        #[arg(long)]
        h_start: f64,
        /// Number of refinement levels (>= 2)
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Scheme (relax and caputo tasks)
        #[arg(long, default_value = "mid-sigma")]
        scheme: SchemeId,
        /// Equation (relax task)
        #[arg(long, default_value = "I")]
        equation: RelaxEquation,
        /// Benchmark number (subdiff task)
        #[arg(long, default_value_t = 2)]
        example: u8,
        /// Test function (caputo task)
        #[arg(long, default_value = "x2")]
        function: TestFunction,
        /// Evaluation point (caputo task)
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        /// Regularization order (subdiff task, example 2)
        #[arg(long)]
        regularize_m: Option<usize>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Magnitudes of the leading error coefficients across orders
    Coeffs {
        /// Number of sample points spread over [0.01, 0.99]
        #[arg(long, default_value_t = 99)]
        points: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

enum AppError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Core(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

fn exit_code_for(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(AppError::Core(e)) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
        Err(AppError::Io(e)) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn emit(output: &OutputOpts, text: &str) -> Result<(), AppError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Key/value row rendered as one-line CSV or a two-row Markdown table.
fn render_record(fields: &[(&str, String)], format: RenderFormat) -> String {
    match format {
        RenderFormat::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
        RenderFormat::Md => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let rule: Vec<&str> = fields.iter().map(|_| "---").collect();
            let values: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!(
                "| {} |\n| {} |\n| {} |\n",
                header.join(" | "),
                rule.join(" | "),
                values.join(" | ")
            )
        }
    }
}

/// Number of equal steps of size `h` covering `interval`.
fn steps_for(interval: f64, h: f64) -> Result<usize, Error> {
    if !(interval > 0.0) {
        return Err(Error::NonPositive {
            what: "final time",
            value: interval,
        });
    }
    if !(h > 0.0) {
        return Err(Error::NonPositive {
            what: "step h",
            value: h,
        });
    }
    let m = (interval / h).round();
    if !m.is_finite() || m < 2.0 || (m * h / interval - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "step {h} must divide the interval {interval} into at least 2 equal steps"
        )));
    }
    Ok(m as usize)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Weights {
            scheme,
            alpha,
            n,
            output,
        } => {
            let w = generate(scheme, alpha, n)?;
            let mut text = String::new();
            match output.format {
                RenderFormat::Csv => {
                    text.push_str("k,weight\n");
                    for (k, wk) in w.weights.iter().enumerate() {
                        text.push_str(&format!("{k},{wk}\n"));
                    }
                }
                RenderFormat::Md => {
                    text.push_str("| k | weight |\n| --- | --- |\n");
                    for (k, wk) in w.weights.iter().enumerate() {
                        text.push_str(&format!("| {k} | {wk} |\n"));
                    }
                }
            }
            emit(&output, &text)
        }
        Command::Caputo {
            scheme,
            alpha,
            function,
            x,
            n,
            output,
        } => {
            let approximation = caputo_approx(scheme, alpha, function, x, n)?;
            let exact = function.exact_caputo(alpha, x)?;
            let error = (approximation - exact).abs();
            let text = render_record(
                &[
                    ("scheme", scheme.name().to_string()),
                    ("alpha", alpha.to_string()),
                    ("function", function.name().to_string()),
                    ("x", x.to_string()),
                    ("n", n.to_string()),
                    ("approximation", approximation.to_string()),
                    ("exact", exact.to_string()),
                    ("abs_error", error.to_string()),
                ],
                output.format,
            );
            emit(&output, &text)
        }
        Command::Relax {
            equation,
            alpha,
            scheme,
            h,
            t_final,
            emit_trajectory,
            output,
        } => {
            let m = steps_for(t_final, h)?;
            let problem = equation.problem(alpha)?;
            let traj = relaxation::solve(&problem, scheme, h, m)?;
            let max_error = relaxation::max_error(&traj, &problem)?;
            if let Some(path) = emit_trajectory {
                write_trajectory(&path, &traj, &problem)?;
            }
            let text = render_record(
                &[
                    ("equation", equation.name().to_string()),
                    ("scheme", scheme.name().to_string()),
                    ("alpha", alpha.to_string()),
                    ("h", h.to_string()),
                    ("steps", m.to_string()),
                    ("max_error", max_error.to_string()),
                ],
                output.format,
            );
            emit(&output, &text)
        }
        Command::Subdiff {
            example,
            alpha,
            steps,
            regularize_m,
            emit_field,
            output,
        } => {
            let grid = SpaceTimeGrid::square(steps)?;
            let max_error = match regularize_m {
                Some(order) => {
                    if example != 2 {
                        return Err(Error::InvalidArgument(format!(
                            "regularization is defined for example 2 only, not example {example}"
                        ))
                        .into());
                    }
                    let reg = subdiffusion::regularize_example_2(alpha, order)?;
                    let solution = reg.solve(grid)?;
                    if let Some(path) = &emit_field {
                        write_field(path, &solution, reg.problem())?;
                    }
                    solution.max_error(reg.problem())?
                }
                None => {
                    let problem = match example {
                        1 => subdiffusion::example_1(alpha)?,
                        2 => subdiffusion::example_2(alpha)?,
                        other => {
                            return Err(Error::InvalidArgument(format!(
                                "unknown subdiffusion example {other} (expected 1 or 2)"
                            ))
                            .into())
                        }
                    };
                    let solution = subdiffusion::solve(&problem, grid)?;
                    if let Some(path) = &emit_field {
                        write_field(path, &solution, &problem)?;
                    }
                    solution.max_error(&problem)?
                }
            };
            let text = render_record(
                &[
                    ("example", example.to_string()),
                    ("alpha", alpha.to_string()),
                    ("steps", steps.to_string()),
                    (
                        "regularized",
                        regularize_m.map(|m| m.to_string()).unwrap_or_default(),
                    ),
                    ("max_error", max_error.to_string()),
                ],
                output.format,
            );
            emit(&output, &text)
        }
        Command::Converge {
            task,
            alpha,
            h_start,
            levels,
            scheme,
            equation,
            example,
            function,
            x,
            regularize_m,
            output,
        } => {
            let task = match task.as_str() {
                "relax" => TaskKind::Relax { equation, scheme },
                "subdiff" => TaskKind::Subdiff {
                    example,
                    regularize: regularize_m,
                },
                "caputo" => TaskKind::Caputo {
                    function,
                    scheme,
                    x,
                },
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown task `{other}` (expected relax, subdiff or caputo)"
                    ))
                    .into())
                }
            };
            let report = run_refinement(&RefinementSpec {
                task,
                alpha,
                h_start,
                levels,
            })?;
            emit(&output, &render(&report, output.format))
        }
        Command::Coeffs { points, output } => {
            if points < 2 {
                return Err(Error::InvalidArgument(format!(
                    "need at least 2 sample points, got {points}"
                ))
                .into());
            }
            let alphas: Vec<f64> = (0..points)
                .map(|i| 0.01 + 0.98 * i as f64 / (points - 1) as f64)
                .collect();
            let rows = coefficient_curve(&alphas)?;
            emit(&output, &render_coefficients(&rows, output.format))
        }
    }
}

fn write_trajectory(
    path: &Path,
    traj: &relaxation::Trajectory,
    problem: &relaxation::RelaxationProblem,
) -> Result<(), AppError> {
    let mut text = String::from("t,value,exact,error\n");
    for (n, &v) in traj.values.iter().enumerate() {
        let t = traj.time(n);
        match problem.exact(t) {
            Some(y) => {
                let y = y?;
                text.push_str(&format!("{t},{v},{y},{}\n", (v - y).abs()));
            }
            None => text.push_str(&format!("{t},{v},,\n")),
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn write_field(
    path: &Path,
    solution: &subdiffusion::SubdiffusionSolution,
    problem: &subdiffusion::SubdiffusionProblem,
) -> Result<(), AppError> {
    let mut text = String::from("x,value,exact,error\n");
    let t = solution.t_final;
    for (i, &v) in solution.final_layer().iter().enumerate() {
        let x = solution.interior_x(i);
        match problem.exact(x, t) {
            Some(u) => {
                let u = u?;
                text.push_str(&format!("{x},{v},{u},{}\n", (v - u).abs()));
            }
            None => text.push_str(&format!("{x},{v},,\n")),
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}
