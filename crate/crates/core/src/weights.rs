//! Convolution weights for finite-difference approximations of the Caputo
//! derivative of order `alpha` in (0, 1).
//!
//! Every scheme here approximates the derivative at `x = n h` as
//!
//! ```text
//!     D^alpha y(x)  ~  (1 / (c * h^alpha)) * sum_{k=0}^{n} w_k * y(x - k h)
//! ```
//!
//! where `c` is a scheme-specific gamma-function normalization. All seven
//! weight rows share one construction: an `n`-independent base sequence, a
//! head correction touching `w_0..w_2`, and an `n`-dependent tail correction
//! touching `w_{n-1}, w_n`. The pieces superpose additively, which keeps
//! small `n` (where head and tail indices overlap) well-defined.

use std::fmt;
use std::str::FromStr;

use crate::error::{validate_alpha, Error, Result};
use crate::specfun::{gamma_raw, zeta_raw};
use crate::sum::Accumulator;

/// The seven weight schemes.
///
/// Naming: `L1` is the classical piecewise-linear scheme; the `Delta`
/// variants add a three-point head correction lifting the order to 2; the
/// `Sigma` variants carry the tail correction that makes them exact on linear
/// functions; `MidOmega` is the uncorrected midpoint-kernel scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    /// Piecewise-linear scheme, order `2 - alpha`, normalization `Γ(2-α)`.
    L1,
    /// L1 plus a second-difference head correction; order 2.
    L1Delta,
    /// Trapezoid-based scheme with zeta-head and partial-sum tail; order
    /// `2 - alpha`, normalization `2Γ(1-α)`.
    TrapSigma,
    /// Quadratic-interpolation scheme; order `2 - alpha`, normalization
    /// `Γ(-α)` (negative on (0,1)).
    QuadSigma,
    /// Midpoint-kernel scheme without corrections; order `1 - alpha`.
    MidOmega,
    /// Midpoint scheme with head and tail corrections; order `2 - alpha`.
    MidSigma,
    /// Midpoint scheme with the second-order head correction; order 2.
    MidDelta,
}

impl SchemeId {
    /// All schemes, in a fixed presentation order.
    pub const ALL: [SchemeId; 7] = [
        SchemeId::L1,
        SchemeId::L1Delta,
        SchemeId::TrapSigma,
        SchemeId::QuadSigma,
        SchemeId::MidOmega,
        SchemeId::MidSigma,
        SchemeId::MidDelta,
    ];

    /// Stable kebab-case identifier (the CLI `--scheme` value).
    pub fn name(self) -> &'static str {
        match self {
            SchemeId::L1 => "l1",
            SchemeId::L1Delta => "l1-delta",
            SchemeId::TrapSigma => "trap-sigma",
            SchemeId::QuadSigma => "quad-sigma",
            SchemeId::MidOmega => "mid-omega",
            SchemeId::MidSigma => "mid-sigma",
            SchemeId::MidDelta => "mid-delta",
        }
    }

    /// The constant `c` in the approximation `(1/(c h^alpha)) Σ w_k y_{n-k}`.
    pub fn normalization(self, alpha: f64) -> Result<f64> {
        validate_alpha(alpha)?;
        Ok(match self {
            SchemeId::L1 | SchemeId::L1Delta => gamma_raw(2.0 - alpha),
            SchemeId::TrapSigma => 2.0 * gamma_raw(1.0 - alpha),
            SchemeId::QuadSigma => gamma_raw(-alpha),
            SchemeId::MidOmega | SchemeId::MidSigma | SchemeId::MidDelta => {
                gamma_raw(1.0 - alpha)
            }
        })
    }

    /// Design order of accuracy in the step size.
    pub fn nominal_order(self, alpha: f64) -> f64 {
        match self {
            SchemeId::L1 | SchemeId::TrapSigma | SchemeId::QuadSigma | SchemeId::MidSigma => {
                2.0 - alpha
            }
            SchemeId::L1Delta | SchemeId::MidDelta => 2.0,
            SchemeId::MidOmega => 1.0 - alpha,
        }
    }

    /// Smallest `n` accepted by [`generate`]: below this the scheme's
    /// documented weight list does not have distinct head, interior and tail
    /// slots.
    pub fn min_points(self) -> usize {
        match self {
            SchemeId::L1 | SchemeId::MidOmega => 1,
            SchemeId::MidSigma => 2,
            SchemeId::L1Delta | SchemeId::MidDelta => 3,
            SchemeId::TrapSigma | SchemeId::QuadSigma => 4,
        }
    }

    /// Smallest `n` for which the additive construction itself is
    /// well-formed (head and tail superpose on overlapping indices). The
    /// time-stepping solvers run down to this bound; below it they
    /// substitute an L1 row.
    pub(crate) fn solver_min(self) -> usize {
        match self {
            SchemeId::L1 | SchemeId::MidOmega => 1,
            SchemeId::L1Delta | SchemeId::MidSigma | SchemeId::MidDelta => 2,
            // The trapezoid tail references (n-2)^(-alpha): singular at n=2.
            // The quadratic tail shares an index with its head at n=2.
            SchemeId::TrapSigma | SchemeId::QuadSigma => 3,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let canon = s.trim().to_ascii_lowercase().replace('_', "-");
        for scheme in SchemeId::ALL {
            if canon == scheme.name() {
                return Ok(scheme);
            }
        }
        Err(Error::InvalidArgument(format!(
            "unknown scheme `{s}` (expected one of: l1, l1-delta, trap-sigma, \
             quad-sigma, mid-omega, mid-sigma, mid-delta)"
        )))
    }
}

/// A complete weight row `w_0..w_n` for one scheme at one `(alpha, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub scheme: SchemeId,
    pub alpha: f64,
    /// `w_0..w_n`; index `k` multiplies the sample `y(x - k h)`.
    pub weights: Vec<f64>,
    /// The constant `c` of the scheme.
    pub normalization: f64,
}

impl WeightVector {
    /// Number of subintervals (`weights.len() - 1`).
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }
}

/// The tail quantity `W_n` that corrects the last two midpoint weights, with
/// its proven upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCorrection {
    pub alpha: f64,
    pub n: usize,
    /// `W_n = ζ(α) − n^{1−α}/(1−α) + 2^α (Σ_{k=1}^{n} (2k−1)^{−α} − ζ(α))`.
    pub value: f64,
    /// `α / (24 n^{1+α})`; the value satisfies `0 < value < upper_bound`.
    pub upper_bound: f64,
}

/// Incremental weight-row generator.
///
/// Time-stepping solvers need the full row at every `n = 2, 3, ..., M`; the
/// base sequence and the partial sums feeding the tail corrections are all
/// extendable in O(1) work per step, so the total cost stays at the O(M²)
/// of the convolutions themselves instead of O(M²) extra power evaluations.
/// Rows for decreasing `n` are still valid (the cache only ever grows).
pub(crate) struct StepWeights {
    scheme: SchemeId,
    alpha: f64,
    /// Base sequence entries `0..=m` where `m` is the largest `n` seen.
    base: Vec<f64>,
    /// `Σ_{k=1}^{m} (2k−1)^{−α}` (feeds `W_n`).
    sum_odd: Accumulator,
    /// `Σ_{j=1}^{m−1} j^{−α}` (feeds the trapezoid/quadratic tails).
    sum_pow: Accumulator,
    /// `Σ_{j=1}^{m−1} j^{−(1+α)}` (feeds the quadratic tail).
    sum_pow1: Accumulator,
    zeta_a: f64,
    zeta_ap1: f64,
    /// Additive head correction for `w_0..w_2` (zero where unused).
    head: [f64; 3],
}

impl StepWeights {
    pub(crate) fn new(scheme: SchemeId, alpha: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        let zeta_a = zeta_raw(alpha);
        let zeta_am1 = zeta_raw(alpha - 1.0);
        let zeta_ap1 = zeta_raw(alpha + 1.0);
        let head = match scheme {
            SchemeId::L1 | SchemeId::TrapSigma | SchemeId::QuadSigma | SchemeId::MidOmega => {
                [0.0; 3]
            }
            SchemeId::L1Delta => [-zeta_am1, 2.0 * zeta_am1, -zeta_am1],
            SchemeId::MidSigma => {
                let s = (2f64.powf(alpha) - 1.0) * zeta_a;
                [-s, s, 0.0]
            }
            SchemeId::MidDelta => {
                let c1 = (1.0 - 2f64.powf(alpha)) * zeta_a;
                let c2 = (2f64.powf(alpha - 1.0) - 1.0) * zeta_am1;
                [1.5 * c1 + c2, -2.0 * c1 - 2.0 * c2, 0.5 * c1 + c2]
            }
        };
        let base0 = match scheme {
            SchemeId::L1 | SchemeId::L1Delta => 1.0,
            SchemeId::TrapSigma => 1.0 - 2.0 * zeta_a,
            SchemeId::QuadSigma => zeta_a - zeta_ap1,
            SchemeId::MidOmega | SchemeId::MidSigma | SchemeId::MidDelta => 2f64.powf(alpha),
        };
        Ok(StepWeights {
            scheme,
            alpha,
            base: vec![base0],
            sum_odd: Accumulator::new(),
            sum_pow: Accumulator::new(),
            sum_pow1: Accumulator::new(),
            zeta_a,
            zeta_ap1,
            head,
        })
    }

    fn base_term(&self, k: usize) -> f64 {
        let a = self.alpha;
        let kf = k as f64;
        match self.scheme {
            SchemeId::L1 | SchemeId::L1Delta => {
                (kf + 1.0).powf(1.0 - a) - 2.0 * kf.powf(1.0 - a) + (kf - 1.0).powf(1.0 - a)
            }
            SchemeId::TrapSigma => {
                if k == 1 {
                    2f64.powf(-a) + 2.0 * self.zeta_a
                } else {
                    (kf + 1.0).powf(-a) - (kf - 1.0).powf(-a)
                }
            }
            SchemeId::QuadSigma => {
                if k == 1 {
                    1.0 - self.zeta_a
                } else {
                    kf.powf(-(1.0 + a))
                }
            }
            SchemeId::MidOmega | SchemeId::MidSigma | SchemeId::MidDelta => {
                2f64.powf(a) * ((2.0 * kf + 1.0).powf(-a) - (2.0 * kf - 1.0).powf(-a))
            }
        }
    }

    /// Extend the cached base sequence and running sums through index `n`.
    fn ensure(&mut self, n: usize) {
        let a = self.alpha;
        while self.base.len() <= n {
            let m = self.base.len();
            let term = self.base_term(m);
            self.base.push(term);
            let mf = m as f64;
            self.sum_odd.add((2.0 * mf - 1.0).powf(-a));
            if m >= 2 {
                let j = mf - 1.0;
                self.sum_pow.add(j.powf(-a));
                self.sum_pow1.add(j.powf(-(1.0 + a)));
            }
        }
    }

    /// Write the full row `w_0..w_n` into `out`.
    pub(crate) fn fill_row(&mut self, n: usize, out: &mut Vec<f64>) -> Result<()> {
        if n < self.scheme.solver_min() {
            return Err(Error::TooFewSteps {
                scheme: self.scheme.name(),
                min: self.scheme.solver_min(),
                n,
            });
        }
        self.ensure(n);
        out.clear();
        out.extend_from_slice(&self.base[..=n]);

        let a = self.alpha;
        let nf = n as f64;

        // Tail: the last one or two weights replace the base entries.
        match self.scheme {
            SchemeId::L1 | SchemeId::L1Delta => {
                out[n] = (nf - 1.0).powf(1.0 - a) - nf.powf(1.0 - a);
            }
            SchemeId::TrapSigma => {
                // G collects the defect of the partial sum Σ j^{-α} against
                // its integral-plus-zeta asymptotics at j = n.
                let g = self.partial_pow(n) - nf.powf(1.0 - a) / (1.0 - a) - self.zeta_a;
                out[n - 1] = -(nf - 2.0).powf(-a) - 2.0 * g;
                out[n] = -(nf - 1.0).powf(-a) + 2.0 * g;
            }
            SchemeId::QuadSigma => {
                let p = self.zeta_ap1 - self.partial_pow1(n);
                let q = self.zeta_a - self.partial_pow(n);
                let bulk = nf.powf(1.0 - a) / (a * (1.0 - a));
                out[n - 1] = (nf - 1.0).powf(-(1.0 + a)) - bulk + nf * p - q;
                out[n] = (1.0 - nf) * p + q + bulk;
            }
            SchemeId::MidOmega | SchemeId::MidSigma | SchemeId::MidDelta => {
                out[n] = -2f64.powf(a) * (2.0 * nf - 1.0).powf(-a);
            }
        }

        // Head corrections add on top (indices may coincide with tail ones
        // at small n; superposition is the defined behavior there).
        if self.head != [0.0; 3] {
            for (k, delta) in self.head.iter().enumerate() {
                out[k] += delta;
            }
        }

        // Tail correction W_n for the exact-on-linear midpoint schemes.
        if matches!(self.scheme, SchemeId::MidSigma | SchemeId::MidDelta) {
            let w = self.tail_value(n);
            out[n - 1] -= w;
            out[n] += w;
        }
        Ok(())
    }

    /// `Σ_{j=1}^{n-1} j^{−α}` for the current row.
    fn partial_pow(&self, n: usize) -> f64 {
        debug_assert!(self.base.len() > n);
        // The running sum tracks the largest row seen; recompute cheaply for
        // a smaller n only when the caller walks backwards (rare).
        if self.base.len() == n + 1 {
            self.sum_pow.total()
        } else {
            let mut acc = Accumulator::new();
            for j in 1..n {
                acc.add((j as f64).powf(-self.alpha));
            }
            acc.total()
        }
    }

    /// `Σ_{j=1}^{n-1} j^{−(1+α)}` for the current row.
    fn partial_pow1(&self, n: usize) -> f64 {
        if self.base.len() == n + 1 {
            self.sum_pow1.total()
        } else {
            let mut acc = Accumulator::new();
            for j in 1..n {
                acc.add((j as f64).powf(-(1.0 + self.alpha)));
            }
            acc.total()
        }
    }

    /// `W_n` for the current row.
    fn tail_value(&self, n: usize) -> f64 {
        let a = self.alpha;
        let nf = n as f64;
        let odd = if self.base.len() == n + 1 {
            self.sum_odd.total()
        } else {
            let mut acc = Accumulator::new();
            for k in 1..=n {
                acc.add((2.0 * k as f64 - 1.0).powf(-a));
            }
            acc.total()
        };
        self.zeta_a - nf.powf(1.0 - a) / (1.0 - a) + 2f64.powf(a) * (odd - self.zeta_a)
    }
}

/// Generate the weight row for `scheme` at `(alpha, n)`.
pub fn generate(scheme: SchemeId, alpha: f64, n: usize) -> Result<WeightVector> {
    if n < scheme.min_points() {
        return Err(Error::TooFewSteps {
            scheme: scheme.name(),
            min: scheme.min_points(),
            n,
        });
    }
    let mut step = StepWeights::new(scheme, alpha)?;
    let mut weights = Vec::with_capacity(n + 1);
    step.fill_row(n, &mut weights)?;
    Ok(WeightVector {
        scheme,
        alpha,
        weights,
        normalization: scheme.normalization(alpha)?,
    })
}

/// Piecewise-linear scheme weights (`n ≥ 1`).
pub fn l1_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::L1, alpha, n)
}

/// L1 weights with the order-2 head correction (`n ≥ 3`).
pub fn l1_delta_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::L1Delta, alpha, n)
}

/// Trapezoid-based scheme weights (`n ≥ 4`).
pub fn trap_sigma_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::TrapSigma, alpha, n)
}

/// Quadratic-interpolation scheme weights (`n ≥ 4`).
pub fn quad_sigma_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::QuadSigma, alpha, n)
}

/// Uncorrected midpoint-kernel weights (`n ≥ 1`).
pub fn omega_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::MidOmega, alpha, n)
}

/// Midpoint weights with head and tail corrections (`n ≥ 2`).
pub fn mid_sigma_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::MidSigma, alpha, n)
}

/// Midpoint weights with the order-2 head correction (`n ≥ 3`).
pub fn mid_delta_weights(alpha: f64, n: usize) -> Result<WeightVector> {
    generate(SchemeId::MidDelta, alpha, n)
}

/// Compute the tail correction `W_n` by direct summation, together with its
/// upper bound `α/(24 n^{1+α})`.
pub fn tail_correction(alpha: f64, n: usize) -> Result<TailCorrection> {
    validate_alpha(alpha)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "tail correction requires n >= 1".into(),
        ));
    }
    let mut acc = Accumulator::new();
    for k in 1..=n {
        acc.add((2.0 * k as f64 - 1.0).powf(-alpha));
    }
    let nf = n as f64;
    let value = zeta_raw(alpha) - nf.powf(1.0 - alpha) / (1.0 - alpha)
        + 2f64.powf(alpha) * (acc.total() - zeta_raw(alpha));
    Ok(TailCorrection {
        alpha,
        n,
        value,
        upper_bound: alpha / (24.0 * nf.powf(1.0 + alpha)),
    })
}

/// Leading coefficient of the scheme's error expansion, for the four schemes
/// whose expansion has a single closed-form leading term.
///
/// The error of such a scheme behaves as `coeff · h^p · (next derivative
/// term)`; the four coefficients are compared on a grid by the
/// `coeffs` CLI command.
pub fn expansion_coeff(scheme: SchemeId, alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    let z = zeta_raw(alpha);
    let zm = zeta_raw(alpha - 1.0);
    match scheme {
        SchemeId::L1 => Ok(zm / gamma_raw(2.0 - alpha)),
        SchemeId::TrapSigma => Ok((z - 2.0 * zm) / (2.0 * gamma_raw(1.0 - alpha))),
        SchemeId::QuadSigma => Ok((z - zm) / (2.0 * gamma_raw(-alpha))),
        SchemeId::MidSigma => {
            let two_a = 2f64.powf(alpha);
            Ok(((2.0 - two_a) * zm - (two_a - 1.0) * z) / (2.0 * gamma_raw(1.0 - alpha)))
        }
        SchemeId::L1Delta | SchemeId::MidOmega | SchemeId::MidDelta => {
            Err(Error::NoExpansionCoefficient {
                scheme: scheme.name(),
            })
        }
    }
}

#[cfg(test)]
// Frozen oracle decimals are kept at full printed precision.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::specfun::zeta;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const ALPHAS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

    // ------------------------------------------------------------- oracle
    //
    // Straightforward transcription of each scheme's published weight list,
    // written per index range with no shared code with the production
    // implementation, used to pin the additive construction.
    fn oracle_row(scheme: SchemeId, a: f64, n: usize) -> Vec<f64> {
        let z = zeta(a).unwrap();
        let mut w = vec![0.0; n + 1];
        let l1 = |k: usize| -> f64 {
            let k = k as f64;
            if k == 0.0 {
                1.0
            } else {
                (k + 1.0).powf(1.0 - a) - 2.0 * k.powf(1.0 - a) + (k - 1.0).powf(1.0 - a)
            }
        };
        match scheme {
            SchemeId::L1 | SchemeId::L1Delta => {
                for (k, slot) in w.iter_mut().enumerate() {
                    *slot = l1(k);
                }
                w[n] = ((n - 1) as f64).powf(1.0 - a) - (n as f64).powf(1.0 - a);
                if scheme == SchemeId::L1Delta {
                    let zp = zeta(a - 1.0).unwrap();
                    w[0] -= zp;
                    w[1] += 2.0 * zp;
                    w[2] -= zp;
                }
            }
            SchemeId::TrapSigma => {
                w[0] = 1.0 - 2.0 * z;
                w[1] = 2f64.powf(-a) + 2.0 * z;
                for (k, slot) in w.iter_mut().enumerate().take(n - 1).skip(2) {
                    let k = k as f64;
                    *slot = (k + 1.0).powf(-a) - (k - 1.0).powf(-a);
                }
                let s1: f64 = (1..n).map(|j| (j as f64).powf(-a)).sum();
                let g = s1 - (n as f64).powf(1.0 - a) / (1.0 - a) - z;
                w[n - 1] = -((n - 2) as f64).powf(-a) - 2.0 * g;
                w[n] = -((n - 1) as f64).powf(-a) + 2.0 * g;
            }
            SchemeId::QuadSigma => {
                let z1 = zeta(1.0 + a).unwrap();
                w[0] = z - z1;
                w[1] = 1.0 - z;
                for (k, slot) in w.iter_mut().enumerate().take(n - 1).skip(2) {
                    *slot = (k as f64).powf(-(1.0 + a));
                }
                let s1: f64 = (1..n).map(|j| (j as f64).powf(-a)).sum();
                let s2: f64 = (1..n).map(|j| (j as f64).powf(-(1.0 + a))).sum();
                let (p, q) = (z1 - s2, z - s1);
                let nf = n as f64;
                w[n - 1] =
                    (nf - 1.0).powf(-(1.0 + a)) - nf.powf(1.0 - a) / (a * (1.0 - a)) + nf * p - q;
                w[n] = (1.0 - nf) * p + q + nf.powf(1.0 - a) / (a * (1.0 - a));
            }
            SchemeId::MidOmega | SchemeId::MidSigma | SchemeId::MidDelta => {
                w[0] = 2f64.powf(a);
                for (k, slot) in w.iter_mut().enumerate().take(n).skip(1) {
                    let k = k as f64;
                    *slot = 2f64.powf(a) * ((2.0 * k + 1.0).powf(-a) - (2.0 * k - 1.0).powf(-a));
                }
                w[n] = -2f64.powf(a) * ((2 * n - 1) as f64).powf(-a);
                if scheme == SchemeId::MidSigma {
                    let s = (2f64.powf(a) - 1.0) * z;
                    w[0] -= s;
                    w[1] += s;
                }
                if scheme == SchemeId::MidDelta {
                    let c1 = (1.0 - 2f64.powf(a)) * z;
                    let c2 = (2f64.powf(a - 1.0) - 1.0) * zeta(a - 1.0).unwrap();
                    w[0] += 1.5 * c1 + c2;
                    w[1] += -2.0 * c1 - 2.0 * c2;
                    w[2] += 0.5 * c1 + c2;
                }
                if scheme != SchemeId::MidOmega {
                    let t = tail_correction(a, n).unwrap().value;
                    w[n - 1] -= t;
                    w[n] += t;
                }
            }
        }
        w
    }

    #[test]
    fn generated_rows_match_piecewise_transcription() {
        for scheme in SchemeId::ALL {
            for &a in &ALPHAS {
                for n in scheme.min_points().max(4)..=40 {
                    let got = generate(scheme, a, n).unwrap();
                    let want = oracle_row(scheme, a, n);
                    for (k, (g, w)) in got.weights.iter().zip(&want).enumerate() {
                        assert_abs_diff_eq!(g, w, epsilon = 1e-13);
                        assert!(g.is_finite(), "{scheme} a={a} n={n} k={k} not finite");
                    }
                }
            }
        }
    }

    #[test]
    fn solver_rows_below_the_public_minimum_match_the_transcription() {
        // Time steppers need rows the public constructor refuses (their
        // early steps); those come from StepWeights and must still match
        // the piecewise transcription.
        for (scheme, n) in [
            (SchemeId::L1Delta, 2),
            (SchemeId::TrapSigma, 3),
            (SchemeId::QuadSigma, 3),
            (SchemeId::MidDelta, 2),
        ] {
            for &a in &ALPHAS {
                assert!(generate(scheme, a, n).is_err(), "{scheme} n={n}");
                let mut step = StepWeights::new(scheme, a).unwrap();
                let mut row = Vec::new();
                step.fill_row(n, &mut row).unwrap();
                let want = oracle_row(scheme, a, n);
                for (g, w) in row.iter().zip(&want) {
                    assert_abs_diff_eq!(g, w, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn incremental_rows_match_fresh_generation() {
        // One StepWeights instance walked forward must agree with fresh
        // full computations at every n (pins the running partial sums).
        for scheme in SchemeId::ALL {
            for &a in &[0.25, 0.75] {
                let mut step = StepWeights::new(scheme, a).unwrap();
                let mut row = Vec::new();
                for n in scheme.min_points()..=60 {
                    step.fill_row(n, &mut row).unwrap();
                    let fresh = generate(scheme, a, n).unwrap();
                    for (g, w) in row.iter().zip(&fresh.weights) {
                        assert_abs_diff_eq!(g, w, epsilon = 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn every_scheme_annihilates_constants() {
        // Σ w_k = 0 exhaustively up to n = 128.
        for scheme in SchemeId::ALL {
            for &a in &ALPHAS {
                let mut step = StepWeights::new(scheme, a).unwrap();
                let mut row = Vec::new();
                for n in scheme.min_points()..=128 {
                    step.fill_row(n, &mut row).unwrap();
                    let mut acc = Accumulator::new();
                    for &w in &row {
                        acc.add(w);
                    }
                    assert!(
                        acc.total().abs() <= 1e-12,
                        "{scheme} a={a} n={n}: row sum {}",
                        acc.total()
                    );
                }
            }
        }
    }

    // ----------------------------------------------------------------- L1

    #[test]
    fn l1_interior_weight_closed_form() {
        let w = l1_weights(0.5, 4).unwrap();
        assert_relative_eq!(w.weights[1], -0.585_786_437_626_904_95, max_relative = 1e-14);
        assert_relative_eq!(w.weights[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(w.normalization, 0.886_226_925_452_758, max_relative = 1e-13);
    }

    #[test]
    fn l1_first_moment_is_minus_n_to_one_minus_alpha() {
        // Σ k·w_k = −n^{1−α}
        for &a in &[0.25, 0.5, 0.75] {
            for &n in &[4usize, 16, 64] {
                let w = l1_weights(a, n).unwrap();
                let mut acc = Accumulator::new();
                for (k, &wk) in w.weights.iter().enumerate() {
                    acc.add(k as f64 * wk);
                }
                assert_abs_diff_eq!(acc.total(), -(n as f64).powf(1.0 - a), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn l1_sign_pattern_and_interior_monotonicity() {
        // w_0 > 0; w_1 < w_2 < ... < w_{n−1} < 0; w_n < 0.
        for &a in &ALPHAS {
            let mut step = StepWeights::new(SchemeId::L1, a).unwrap();
            let mut w = Vec::new();
            for n in 2..=128 {
                step.fill_row(n, &mut w).unwrap();
                assert!(w[0] > 0.0);
                assert!(w[n] < 0.0, "a={a} n={n}: w_n = {}", w[n]);
                for k in 1..n {
                    assert!(w[k] < 0.0, "a={a} n={n} k={k}: {}", w[k]);
                    if k + 1 < n {
                        assert!(w[k] < w[k + 1], "a={a} n={n}: not increasing at k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn l1_interior_asymptotics() {
        // k^{1+α} w_k → α(α−1) for interior weights.
        let k = 10_000usize;
        for &a in &[0.25, 0.5, 0.75] {
            let w = l1_weights(a, k + 1).unwrap();
            let scaled = (k as f64).powf(1.0 + a) * w.weights[k];
            let limit = a * (a - 1.0);
            assert!(
                (scaled - limit).abs() <= 0.05 * limit.abs(),
                "a={a}: k^(1+a) w_k = {scaled}, limit {limit}"
            );
        }
    }

    // ------------------------------------------------------------ L1 delta

    #[test]
    fn l1_delta_head_values_and_signs() {
        let w = l1_delta_weights(0.5, 4).unwrap();
        // w_0 = 1 − ζ(−1/2)
        assert_relative_eq!(w.weights[0], 1.207_886_224_977_354_6, max_relative = 1e-13);
        let w6 = l1_delta_weights(0.5, 6).unwrap();
        assert!(w6.weights[0] > 0.0 && w6.weights[1] < 0.0 && w6.weights[2] > 0.0);
    }

    #[test]
    fn l1_delta_is_l1_plus_second_difference_head() {
        let a = 0.35;
        let n = 12;
        let l1 = l1_weights(a, n).unwrap();
        let l1d = l1_delta_weights(a, n).unwrap();
        let zp = zeta(a - 1.0).unwrap();
        for k in 0..=n {
            let head = match k {
                0 | 2 => -zp,
                1 => 2.0 * zp,
                _ => 0.0,
            };
            assert_abs_diff_eq!(l1d.weights[k], l1.weights[k] + head, epsilon = 1e-14);
        }
    }

    // ------------------------------------------------- trapezoid/quadratic

    #[test]
    fn trap_sigma_spot_values() {
        let w = trap_sigma_weights(0.5, 4).unwrap();
        // interior k=2: 3^{−1/2} − 1
        assert_relative_eq!(w.weights[2], -0.422_649_730_810_374_24, max_relative = 1e-13);
        for &a in &[0.25, 0.5, 0.75] {
            assert!(trap_sigma_weights(a, 8).unwrap().weights[0] > 0.0);
        }
        assert_relative_eq!(
            trap_sigma_weights(0.5, 8).unwrap().normalization,
            3.544_907_701_811_032,
            max_relative = 1e-13
        );
    }

    #[test]
    fn quad_sigma_spot_values() {
        let w = quad_sigma_weights(0.5, 6).unwrap();
        assert_relative_eq!(w.weights[3], 0.192_450_089_729_875_25, max_relative = 1e-13);
        assert_relative_eq!(w.weights[1], 2.460_354_508_809_586_8, max_relative = 1e-13);
        // The normalization Γ(−α) is negative on (0,1).
        assert_relative_eq!(w.normalization, -3.544_907_701_811_032, max_relative = 1e-13);
    }

    // ------------------------------------------------------- midpoint family

    #[test]
    fn omega_spot_values() {
        let w = omega_weights(0.5, 3).unwrap();
        assert_relative_eq!(w.weights[0], 2f64.powf(0.5), max_relative = 1e-15);
        assert_relative_eq!(w.weights[1], -0.597_716_981_445_369, max_relative = 1e-13);
    }

    #[test]
    fn mid_sigma_leading_weight_frozen_value() {
        let w = mid_sigma_weights(0.5, 8).unwrap();
        assert_relative_eq!(w.weights[0], 2.019_112_205_794_725_4, max_relative = 1e-13);
    }

    #[test]
    fn mid_sigma_tail_weight_lower_bound() {
        // |w_n| > 1/(2 n^α)
        for &a in &[0.25, 0.5, 0.75] {
            let mut step = StepWeights::new(SchemeId::MidSigma, a).unwrap();
            let mut w = Vec::new();
            for n in 4..=256 {
                step.fill_row(n, &mut w).unwrap();
                let bound = 0.5 * (n as f64).powf(-a);
                assert!(
                    w[n].abs() > bound,
                    "a={a} n={n}: |w_n| = {} <= {bound}",
                    w[n].abs()
                );
            }
        }
    }

    #[test]
    fn mid_sigma_partial_sum_identity() {
        // All w_k (k ≥ 1) are negative and Σ_{k≥1} |w_k| = w_0.
        for &a in &ALPHAS {
            for &n in &[2usize, 8, 32, 128] {
                let w = mid_sigma_weights(a, n).unwrap();
                let mut acc = Accumulator::new();
                for &wk in &w.weights[1..] {
                    assert!(wk < 0.0, "a={a} n={n}: weight {wk} not negative");
                    acc.add(wk.abs());
                }
                assert_abs_diff_eq!(acc.total(), w.weights[0], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn mid_delta_head_closed_form() {
        let w = mid_delta_weights(0.5, 16).unwrap();
        let head0 = w.weights[0] - 2f64.powf(0.5);
        assert_relative_eq!(head0, 0.968_236_430_713_040_5, max_relative = 1e-12);
    }

    #[test]
    fn sigma_family_is_exact_on_linear_functions() {
        // Applying the weights to y(x) = x at x = nh reproduces
        // x^{1−α}/Γ(2−α) to near machine precision — the W_n construction's
        // defining property.
        for scheme in [SchemeId::MidSigma, SchemeId::MidDelta] {
            for &a in &[0.25, 0.5, 0.75] {
                for &n in &[16usize, 32] {
                    let x = 1.0;
                    let h = x / n as f64;
                    let w = generate(scheme, a, n).unwrap();
                    let mut acc = Accumulator::new();
                    for (k, &wk) in w.weights.iter().enumerate() {
                        let y = (n - k) as f64 * h;
                        acc.add(wk * y);
                    }
                    let approx = acc.total() / (w.normalization * h.powf(a));
                    let exact = x.powf(1.0 - a) / gamma_raw(2.0 - a);
                    assert_abs_diff_eq!(approx, exact, epsilon = 1e-13);
                }
            }
        }
    }

    // -------------------------------------------------------- tail correction

    #[test]
    fn tail_correction_frozen_value() {
        let t = tail_correction(0.5, 1).unwrap();
        assert_relative_eq!(t.value, 0.019_112_205_794_725_419, max_relative = 1e-12);
    }

    #[test]
    fn tail_correction_positive_and_bounded() {
        for &a in &[0.25, 0.5, 0.75] {
            for n in 1..=200 {
                let t = tail_correction(a, n).unwrap();
                assert!(
                    t.value > 0.0 && t.value < t.upper_bound,
                    "a={a} n={n}: W = {} bound {}",
                    t.value,
                    t.upper_bound
                );
            }
        }
    }

    #[test]
    fn tail_correction_scaled_limit() {
        // n^{1+α} W_n → α/24.
        let n = 10_000;
        for &a in &[0.25, 0.5, 0.75] {
            let t = tail_correction(a, n).unwrap();
            let scaled = (n as f64).powf(1.0 + a) * t.value;
            let limit = a / 24.0;
            assert!(
                (scaled - limit).abs() <= 0.02 * limit,
                "a={a}: n^(1+a) W_n = {scaled}, limit {limit}"
            );
        }
    }

    // ------------------------------------------------- expansion coefficients

    #[test]
    fn expansion_coefficients_frozen_values() {
        // Reference values carried to 17 digits.
        let cases = [
            (SchemeId::L1, 0.25, -0.145_412_059_062_831_06),
            (SchemeId::L1, 0.5, -0.234_574_485_390_577_69),
            (SchemeId::L1, 0.75, -0.353_541_911_391_934_35),
            (SchemeId::TrapSigma, 0.25, -0.222_778_445_605_623_64),
            (SchemeId::TrapSigma, 0.5, -0.294_671_158_383_395_64),
            (SchemeId::TrapSigma, 0.75, -0.386_194_727_146_121_4),
            (SchemeId::QuadSigma, 0.25, 0.069_326_991_938_546_32),
            (SchemeId::QuadSigma, 0.5, 0.176_657_389_865_520_03),
            (SchemeId::QuadSigma, 0.75, 0.322_790_599_552_584_9),
            (SchemeId::MidSigma, 0.25, 0.018_573_865_533_888_012),
            (SchemeId::MidSigma, 0.5, 0.136_286_118_821_548_44),
            (SchemeId::MidSigma, 0.75, 0.309_502_934_900_599_19),
        ];
        for (scheme, a, want) in cases {
            assert_relative_eq!(
                expansion_coeff(scheme, a).unwrap(),
                want,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn expansion_coefficient_ordering() {
        // |C(MidSigma)| < |C(L1)| across the interval.
        let mut a = 0.1;
        while a <= 0.91 {
            let c_mid = expansion_coeff(SchemeId::MidSigma, a).unwrap();
            let c_l1 = expansion_coeff(SchemeId::L1, a).unwrap();
            assert!(c_mid.abs() < c_l1.abs(), "ordering fails at a={a}");
            a += 0.1;
        }
    }

    #[test]
    fn expansion_coefficient_unsupported_schemes() {
        for scheme in [SchemeId::L1Delta, SchemeId::MidOmega, SchemeId::MidDelta] {
            assert!(matches!(
                expansion_coeff(scheme, 0.5),
                Err(Error::NoExpansionCoefficient { .. })
            ));
        }
    }

    // ----------------------------------------------------------- validation

    #[test]
    fn minimum_point_counts_are_enforced() {
        for scheme in SchemeId::ALL {
            let min = scheme.min_points();
            if min > 0 {
                assert!(matches!(
                    generate(scheme, 0.5, min - 1),
                    Err(Error::TooFewSteps { .. })
                ));
            }
            assert!(generate(scheme, 0.5, min).is_ok());
        }
    }

    #[test]
    fn alpha_domain_is_enforced() {
        for bad in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                generate(SchemeId::L1, bad, 8),
                Err(Error::AlphaOutOfRange(_))
            ));
            assert!(matches!(
                tail_correction(bad, 4),
                Err(Error::AlphaOutOfRange(_))
            ));
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in SchemeId::ALL {
            assert_eq!(scheme.name().parse::<SchemeId>().unwrap(), scheme);
            // Underscore spelling is accepted too.
            let underscored = scheme.name().replace('-', "_");
            assert_eq!(underscored.parse::<SchemeId>().unwrap(), scheme);
        }
        assert!("no-such-scheme".parse::<SchemeId>().is_err());
    }

    #[test]
    fn nominal_orders_match_the_design() {
        let a = 0.3;
        assert_eq!(SchemeId::L1.nominal_order(a), 2.0 - a);
        assert_eq!(SchemeId::L1Delta.nominal_order(a), 2.0);
        assert_eq!(SchemeId::TrapSigma.nominal_order(a), 2.0 - a);
        assert_eq!(SchemeId::QuadSigma.nominal_order(a), 2.0 - a);
        assert_eq!(SchemeId::MidOmega.nominal_order(a), 1.0 - a);
        assert_eq!(SchemeId::MidSigma.nominal_order(a), 2.0 - a);
        assert_eq!(SchemeId::MidDelta.nominal_order(a), 2.0);
    }
}
