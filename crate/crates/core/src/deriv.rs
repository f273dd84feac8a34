//! Application of a weight scheme to grid samples of a function, plus a small
//! library of test functions whose Caputo derivatives have closed forms.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::str::FromStr;

use crate::error::{validate_alpha, Error, Result};
use crate::specfun::{gamma_raw, mittag_leffler, zeta_raw};
use crate::sum::Accumulator;
use crate::weights::{generate, SchemeId, WeightVector};

/// Functions with known Caputo derivatives, used as manufactured solutions
/// throughout the solvers and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunction {
    /// `y(x) = 1`; derivative 0 (constants are annihilated).
    One,
    /// `y(x) = x`; derivative `x^{1−α}/Γ(2−α)`.
    X,
    /// `y(x) = x²`; derivative `2x^{2−α}/Γ(3−α)`.
    X2,
    /// `y(x) = x³`; derivative `6x^{3−α}/Γ(4−α)`. Vanishes to second order
    /// at 0, which the expansion-residual check requires.
    X3,
    /// `y(x) = 1 + x + x² + x³ + x⁴` (the polynomial relaxation solution).
    Poly4,
    /// `y(x) = e^x`; derivative `x^{1−α} E_{1,2−α}(x)`.
    Exp,
    /// `y(x) = cos(2πx)`; derivative `−2π x^{1−α} Im E_{1,2−α}(2πi x)`.
    Cos2Pi,
}

impl TestFunction {
    pub const ALL: [TestFunction; 7] = [
        TestFunction::One,
        TestFunction::X,
        TestFunction::X2,
        TestFunction::X3,
        TestFunction::Poly4,
        TestFunction::Exp,
        TestFunction::Cos2Pi,
    ];

    /// Stable identifier (the CLI `--function` value).
    pub fn name(self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::X => "x",
            TestFunction::X2 => "x2",
            TestFunction::X3 => "x3",
            TestFunction::Poly4 => "poly4",
            TestFunction::Exp => "exp",
            TestFunction::Cos2Pi => "cos2pi",
        }
    }

    /// Point value `y(x)`.
    pub fn evaluate(self, x: f64) -> f64 {
        match self {
            TestFunction::One => 1.0,
            TestFunction::X => x,
            TestFunction::X2 => x * x,
            TestFunction::X3 => x * x * x,
            TestFunction::Poly4 => 1.0 + x * (1.0 + x * (1.0 + x * (1.0 + x))),
            TestFunction::Exp => x.exp(),
            TestFunction::Cos2Pi => (2.0 * PI * x).cos(),
        }
    }

    /// First derivative `y'(x)`.
    pub fn first_derivative(self, x: f64) -> f64 {
        match self {
            TestFunction::One => 0.0,
            TestFunction::X => 1.0,
            TestFunction::X2 => 2.0 * x,
            TestFunction::X3 => 3.0 * x * x,
            TestFunction::Poly4 => 1.0 + x * (2.0 + x * (3.0 + x * 4.0)),
            TestFunction::Exp => x.exp(),
            TestFunction::Cos2Pi => -2.0 * PI * (2.0 * PI * x).sin(),
        }
    }

    /// Second derivative `y''(x)`.
    pub fn second_derivative(self, x: f64) -> f64 {
        match self {
            TestFunction::One | TestFunction::X => 0.0,
            TestFunction::X2 => 2.0,
            TestFunction::X3 => 6.0 * x,
            TestFunction::Poly4 => 2.0 + x * (6.0 + x * 12.0),
            TestFunction::Exp => x.exp(),
            TestFunction::Cos2Pi => -4.0 * PI * PI * (2.0 * PI * x).cos(),
        }
    }

    /// Closed-form Caputo derivative of order `alpha` at `x ≥ 0`.
    ///
    /// Power functions use `D^α x^m = Γ(m+1)/Γ(m+1−α) · x^{m−α}`; the
    /// exponential and cosine reduce to Mittag-Leffler evaluations.
    pub fn exact_caputo(self, alpha: f64, x: f64) -> Result<f64> {
        validate_alpha(alpha)?;
        if !(x >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Caputo derivative evaluation point must be >= 0, got {x}"
            )));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let power = |m: f64| -> f64 {
            gamma_raw(m + 1.0) / gamma_raw(m + 1.0 - alpha) * x.powf(m - alpha)
        };
        Ok(match self {
            TestFunction::One => 0.0,
            TestFunction::X => power(1.0),
            TestFunction::X2 => power(2.0),
            TestFunction::X3 => power(3.0),
            TestFunction::Poly4 => power(1.0) + power(2.0) + power(3.0) + power(4.0),
            TestFunction::Exp => {
                let e = mittag_leffler(1.0, 2.0 - alpha, Complex64::new(x, 0.0))?;
                x.powf(1.0 - alpha) * e.re
            }
            TestFunction::Cos2Pi => {
                let e = mittag_leffler(1.0, 2.0 - alpha, Complex64::new(0.0, 2.0 * PI * x))?;
                -2.0 * PI * x.powf(1.0 - alpha) * e.im
            }
        })
    }
}

impl std::fmt::Display for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canon = s.trim().to_ascii_lowercase();
        for f in TestFunction::ALL {
            if canon == f.name() {
                return Ok(f);
            }
        }
        Err(Error::InvalidArgument(format!(
            "unknown test function `{s}` (expected one of: one, x, x2, x3, poly4, exp, cos2pi)"
        )))
    }
}

/// Uniform samples `y_0..y_n` of a function on `[0, x]` with step `h = x/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSample {
    /// Evaluation point (right end of the sampled interval).
    pub x: f64,
    /// Step `x / n`.
    pub h: f64,
    /// `values[k] = y(k·x/n)`, length `n + 1`.
    pub values: Vec<f64>,
}

impl GridSample {
    /// Sample a test function at `k·x/n` for `k = 0..=n`.
    pub fn from_function(f: TestFunction, x: f64, n: usize) -> Result<GridSample> {
        GridSample::from_fn(|t| f.evaluate(t), x, n)
    }

    /// Sample an arbitrary function at `k·x/n` for `k = 0..=n`.
    ///
    /// Nodes are computed as `k·x/n` (not repeated addition of `h`) so they
    /// carry no accumulated drift.
    pub fn from_fn(y: impl Fn(f64) -> f64, x: f64, n: usize) -> Result<GridSample> {
        if !(x > 0.0) {
            return Err(Error::NonPositive {
                what: "evaluation point x",
                value: x,
            });
        }
        if n == 0 {
            return Err(Error::NonPositive {
                what: "subinterval count n",
                value: 0.0,
            });
        }
        let values = (0..=n).map(|k| y(k as f64 * x / n as f64)).collect();
        Ok(GridSample {
            x,
            h: x / n as f64,
            values,
        })
    }

    /// Wrap existing samples (length `n + 1 ≥ 2`) taken uniformly on `[0, x]`.
    pub fn from_values(x: f64, values: Vec<f64>) -> Result<GridSample> {
        if !(x > 0.0) {
            return Err(Error::NonPositive {
                what: "evaluation point x",
                value: x,
            });
        }
        if values.len() < 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                actual: values.len(),
            });
        }
        let n = values.len() - 1;
        Ok(GridSample {
            x,
            h: x / n as f64,
            values,
        })
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

/// Apply a weight row to a sample: `(1/(c·h^α)) Σ_{k=0}^{n} w_k y_{n−k}`.
pub fn apply(w: &WeightVector, s: &GridSample) -> Result<f64> {
    if w.weights.len() != s.values.len() {
        return Err(Error::LengthMismatch {
            expected: w.weights.len(),
            actual: s.values.len(),
        });
    }
    let n = s.n();
    let mut acc = Accumulator::new();
    for (k, &wk) in w.weights.iter().enumerate() {
        acc.add(wk * s.values[n - k]);
    }
    Ok(acc.total() / (w.normalization * s.h.powf(w.alpha)))
}

/// Approximate `D^α f(x)` with `scheme` on an `n`-subinterval grid.
pub fn caputo_approx(
    scheme: SchemeId,
    alpha: f64,
    f: TestFunction,
    x: f64,
    n: usize,
) -> Result<f64> {
    let w = generate(scheme, alpha, n)?;
    let s = GridSample::from_function(f, x, n)?;
    apply(&w, &s)
}

/// One refinement level of the midpoint-scheme expansion check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub h: f64,
    /// Signed error of the uncorrected midpoint scheme.
    pub raw: f64,
    /// Signed error after subtracting the two leading expansion terms;
    /// shrinks as O(h²) when the expansion is right.
    pub corrected: f64,
}

/// Evaluate the midpoint scheme's error expansion on grids of `ns`
/// subintervals.
///
/// The uncorrected midpoint approximation of `D^α y(x)` expands as
///
/// ```text
///   exact + c₁ y'(x) h^{1−α} + c₂ y''(x) h^{2−α} + O(h²),
///   c₁ = (2^α − 1) ζ(α) / Γ(1−α),   c₂ = −(2^{α−1} − 1) ζ(α−1) / Γ(1−α)
/// ```
///
/// provided `y(0) = y'(0) = y''(0) = 0`. The returned points carry both the
/// raw error and the residual after subtracting the two terms; a log-log
/// slope fit of |corrected| should give ≈ 2 (and of |raw| ≈ 1−α).
pub fn expansion_residual(
    f: TestFunction,
    alpha: f64,
    x: f64,
    ns: &[usize],
) -> Result<Vec<ResidualPoint>> {
    validate_alpha(alpha)?;
    let vanishes =
        f.evaluate(0.0) == 0.0 && f.first_derivative(0.0) == 0.0 && f.second_derivative(0.0) == 0.0;
    if !(vanishes || f == TestFunction::One) {
        return Err(Error::InvalidArgument(format!(
            "expansion residual requires y(0) = y'(0) = y''(0) = 0; `{f}` does not qualify"
        )));
    }
    let c1 = (2f64.powf(alpha) - 1.0) * zeta_raw(alpha) / gamma_raw(1.0 - alpha);
    let c2 = -(2f64.powf(alpha - 1.0) - 1.0) * zeta_raw(alpha - 1.0) / gamma_raw(1.0 - alpha);
    let exact = f.exact_caputo(alpha, x)?;
    let yp = f.first_derivative(x);
    let ypp = f.second_derivative(x);
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let h = x / n as f64;
        let raw = caputo_approx(SchemeId::MidOmega, alpha, f, x, n)? - exact;
        let corrected = raw - c1 * yp * h.powf(1.0 - alpha) - c2 * ypp * h.powf(2.0 - alpha);
        out.push(ResidualPoint { h, raw, corrected });
    }
    Ok(out)
}
