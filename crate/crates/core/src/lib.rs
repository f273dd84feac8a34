//! Finite-difference approximations of the Caputo fractional derivative of
//! order `alpha` in (0, 1), and solvers built on top of them.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] — gamma, Riemann zeta, polylogarithm and Mittag-Leffler
//!   evaluations that the weight formulas and reference solutions require.
//! * [`weights`] — the convolution weight schemes themselves, their tail
//!   correction and the leading expansion coefficients.
//! * [`deriv`] — application of a weight scheme to grid samples of a
//!   function, with built-in test functions whose Caputo derivatives are
//!   known in closed form.
//! * [`relaxation`] — a one-step method for the fractional relaxation
//!   equation `y^(alpha) + y = F`.
//! * [`subdiffusion`] — an implicit scheme for the time-fractional diffusion
//!   equation `u^(alpha)_t = D u_xx + F` on an interval.
//! * [`convergence`] — grid-refinement drivers that measure observed orders
//!   of accuracy and render reports.

// Domain guards are written `if !(x > 0.0)` on purpose: the negated form
// also rejects NaN, which a rewritten `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convergence;
pub mod deriv;
pub mod error;
pub mod relaxation;
pub mod specfun;
pub mod subdiffusion;
pub mod weights;

mod sum;

pub use error::{Error, Result};
pub use weights::SchemeId;
