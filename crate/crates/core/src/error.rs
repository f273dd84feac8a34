//! Error type shared by the whole crate.

/// Everything that can go wrong in this crate.
///
/// Errors split into two classes: *domain* errors (bad arguments, violated
/// preconditions) and *numerical* failures (an iteration that did not
/// converge, a degenerate linear system). [`Error::is_numerical`] exposes the
/// distinction so callers such as the CLI can map them to different exit
/// codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("alpha must lie strictly inside (0, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("gamma function pole at non-positive integer {0}")]
    GammaPole(f64),

    #[error("zeta function pole at s = 1")]
    ZetaPole,

    #[error("polylogarithm series diverges at x = 1 for s <= 1 (s = {s})")]
    PolylogDivergent { s: f64 },

    #[error("polylogarithm requires |x| <= 1, got x = {x}")]
    PolylogOutOfRange { x: f64 },

    #[error("mittag-leffler parameters must be positive, got a = {a}, b = {b}")]
    MittagLefflerParams { a: f64, b: f64 },

    #[error("mittag-leffler argument |z| = {abs} exceeds the supported radius {max}")]
    MittagLefflerRadius { abs: f64, max: f64 },

    #[error("series did not converge within {max_terms} terms")]
    SeriesNoConvergence { max_terms: usize },

    #[error("scheme {scheme} needs at least {min} steps, got n = {n}")]
    TooFewSteps {
        scheme: &'static str,
        min: usize,
        n: usize,
    },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("weight vector covers {expected} samples but {actual} were supplied")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("scheme {scheme} has no expansion coefficient")]
    NoExpansionCoefficient { scheme: &'static str },

    #[error("recurrence denominator degenerated at step {n} (lambda_0 = {lambda0}, shift = {shift})")]
    DegenerateDenominator { n: usize, lambda0: f64, shift: f64 },

    #[error("tridiagonal pivot {index} vanished during elimination")]
    ZeroPivot { index: usize },

    #[error("no exact solution attached to this problem")]
    NoExactSolution,

    #[error("observed order needs positive errors, got ({coarse}, {fine})")]
    OrderUndefined { coarse: f64, fine: f64 },
}

impl Error {
    /// `true` for failures of the numerics themselves (as opposed to bad
    /// input). The CLI exits with 3 for these and 2 for everything else.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SeriesNoConvergence { .. }
                | Error::DegenerateDenominator { .. }
                | Error::ZeroPivot { .. }
                | Error::OrderUndefined { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shared argument check: every approximation in this crate is built for
/// orders strictly between 0 and 1.
pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && 0.0 < alpha && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}
