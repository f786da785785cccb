//! Exact truncated power series for the t-deformed convolution `⊞^t`.
//!
//! Coefficients are arbitrary-precision rationals throughout. `t = -1`
//! recovers classical additive convolution of moment sequences, `t = d`
//! (finite mode) recovers finite free convolution of degree-`d`
//! polynomials under coefficient reversal.

pub mod classical;
pub mod cumulants;
pub mod error;
pub mod exec;
pub mod generators;
pub mod limits;
pub mod pochhammer;
pub mod poly;
pub mod rational;
pub mod series;
pub mod special;
pub mod tconv;

pub use cumulants::{c_transform, classical_cumulants, from_cumulants, power_sums, CumulantVector};
pub use error::{Error, Result};
pub use exec::Exec;
pub use poly::Poly;
pub use rational::{format_rational, parse_rational, Rational};
pub use series::TruncatedSeries;
pub use tconv::{e_transform, finite_free_conv, phi_t, phi_t_inv, tconv, TParam};
