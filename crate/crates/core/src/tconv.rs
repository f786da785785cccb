//! The t-deformed convolution and the coefficient transforms around it.
//!
//! For `t` outside the non-negative integers,
//!
//! ```text
//! (A ⊞^t B)_k = sum_{i+j=k} (t)_k / ((t)_i (t)_j) a_i b_j,
//! ```
//!
//! where `(t)_k` is the falling factorial. At `t = d` (finite mode) the same
//! formula is used on series supported in degrees `<= d`, with every
//! coefficient above `d` equal to zero.
//!
//! `Φ_t` divides coefficient `k` by `(t)_k` and turns `⊞^t` into the
//! ordinary Cauchy product.

use std::str::FromStr;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::pochhammer::{falling_table, is_nonneg_integer};
use crate::rational::{format_rational, int, parse_rational, pow, Rational};
use crate::series::{check_orders, TruncatedSeries};

/// The deformation parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TParamRepr", into = "TParamRepr")]
pub enum TParam {
    /// `t` rational and not a non-negative integer.
    Generic(Rational),
    /// `t = d`, restricted to series of degree at most `d`.
    Finite(u32),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum TParamRepr {
    Generic { t: String },
    Finite { d: u32 },
}

impl TryFrom<TParamRepr> for TParam {
    type Error = Error;

    fn try_from(r: TParamRepr) -> Result<Self> {
        match r {
            TParamRepr::Generic { t } => TParam::generic(parse_rational(&t)?),
            TParamRepr::Finite { d } => TParam::finite(d),
        }
    }
}

impl From<TParam> for TParamRepr {
    fn from(t: TParam) -> Self {
        match t {
            TParam::Generic(t) => TParamRepr::Generic {
                t: format_rational(&t),
            },
            TParam::Finite(d) => TParamRepr::Finite { d },
        }
    }
}

impl TParam {
    pub fn generic(t: Rational) -> Result<Self> {
        if is_nonneg_integer(&t) {
            return Err(Error::parameter(format!(
                "generic t must not be a non-negative integer, got {}; use finite mode",
                format_rational(&t)
            )));
        }
        Ok(TParam::Generic(t))
    }

    pub fn finite(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::parameter("finite mode requires d >= 1"));
        }
        Ok(TParam::Finite(d))
    }

    /// `t = -1`, the classical case.
    pub fn classical() -> Self {
        TParam::Generic(int(-1))
    }

    /// The numeric value of `t` (equal to `d` in finite mode).
    pub fn value(&self) -> Rational {
        match self {
            TParam::Generic(t) => t.clone(),
            TParam::Finite(d) => int(*d as i64),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            TParam::Generic(_) => None,
            TParam::Finite(d) => Some(*d as usize),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TParam::Finite(_))
    }

    /// Highest coefficient index that can be nonzero at truncation `order`.
    pub fn top(&self, order: usize) -> usize {
        self.degree().map_or(order, |d| d.min(order))
    }

    /// `(t)_0, ..., (t)_n`. In finite mode entries above `d` are zero.
    pub fn falling_factorials(&self, n: usize) -> Vec<Rational> {
        falling_table(&self.value(), n)
    }

    /// In finite mode, rejects series with a nonzero coefficient above `d`.
    pub fn check_support(&self, a: &TruncatedSeries) -> Result<()> {
        if let Some(d) = self.degree() {
            if let Some(top) = a.support_degree() {
                if top > d {
                    return Err(Error::domain(format!(
                        "series has degree {top} but finite mode allows at most {d}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl FromStr for TParam {
    type Err = Error;

    /// `"d:N"` selects finite mode; anything else parses as a rational `t`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(d) = s.strip_prefix("d:") {
            let d: u32 = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("malformed finite-mode degree {s:?}")))?;
            return TParam::finite(d);
        }
        TParam::generic(parse_rational(s)?)
    }
}

impl std::fmt::Display for TParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TParam::Generic(t) => write!(f, "{}", format_rational(t)),
            TParam::Finite(d) => write!(f, "d:{d}"),
        }
    }
}

/// Coefficientwise weighted convolution
/// `c_k = sum (t)_k / ((t)_i (t)_j) a_i b_j` for `k <= top`, using only
/// terms whose coefficients are nonzero.
pub(crate) fn weighted_convolution(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    falling: &[Rational],
    top: usize,
) -> TruncatedSeries {
    let n = a.order();
    let (ac, bc) = (a.coeffs(), b.coeffs());
    TruncatedSeries::from_fn(n, |k| {
        if k > top {
            return Rational::zero();
        }
        let mut c = Rational::zero();
        for i in 0..=k {
            let j = k - i;
            if ac[i].is_zero() || bc[j].is_zero() {
                continue;
            }
            c += &falling[k] / (&falling[i] * &falling[j]) * &ac[i] * &bc[j];
        }
        c
    })
}

/// `A ⊞^t B`.
pub fn tconv(a: &TruncatedSeries, b: &TruncatedSeries, t: &TParam) -> Result<TruncatedSeries> {
    check_orders(a, b)?;
    t.check_support(a)?;
    t.check_support(b)?;
    let top = t.top(a.order());
    let falling = t.falling_factorials(top);
    Ok(weighted_convolution(a, b, &falling, top))
}

/// Finite free convolution `f ⊞_d g` of two monic polynomials of degree `d`.
pub fn finite_free_conv(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.degree() != g.degree() {
        return Err(Error::TruncationMismatch {
            left: f.degree(),
            right: g.degree(),
        });
    }
    if !f.is_monic() || !g.is_monic() {
        return Err(Error::domain("finite free convolution needs monic inputs"));
    }
    let d = f.degree();
    let falling = falling_table(&int(d as i64), d);
    let (a, b) = (f.coeffs(), g.coeffs());
    let coeffs = (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| &falling[k] / (&falling[i] * &falling[k - i]) * &a[i] * &b[k - i])
                .sum()
        })
        .collect();
    Poly::new(coeffs)
}

/// `Φ_t`: divide coefficient `k` by `(t)_k`.
pub fn phi_t(a: &TruncatedSeries, t: &TParam) -> Result<TruncatedSeries> {
    t.check_support(a)?;
    let falling = t.falling_factorials(a.order());
    Ok(a.map_coeffs(|k, c| {
        if c.is_zero() {
            Rational::zero()
        } else {
            c / &falling[k]
        }
    }))
}

/// `Φ_t^{-1}`: multiply coefficient `k` by `(t)_k`.
///
/// In finite mode `(d)_k = 0` for `k > d`, so the result is always
/// supported in degrees `<= d`.
pub fn phi_t_inv(a: &TruncatedSeries, t: &TParam) -> TruncatedSeries {
    let falling = t.falling_factorials(a.order());
    a.map_coeffs(|k, c| c * &falling[k])
}

/// `E^t[A]`: coefficient `k` becomes `t^k a_k / (t)_k`.
pub fn e_transform(a: &TruncatedSeries, t: &TParam) -> Result<TruncatedSeries> {
    if !a.coeff(0).is_one() {
        return Err(Error::domain("E^t requires constant term 1"));
    }
    Ok(phi_t(a, t)?.dilate(&t.value()))
}

/// Truncated `(t, r)` norm. Only a lower bound for the full series norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TNorm {
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    pub order: usize,
    pub lower_bound: bool,
}

/// `sum_{k<=N} |a_k / (t)_k| r^k`.
pub fn norm_t_r(a: &TruncatedSeries, r: &Rational, t: &TParam) -> Result<TNorm> {
    if t.is_finite() {
        return Err(Error::parameter("the (t, r) norm is defined for generic t only"));
    }
    if r.is_negative() {
        return Err(Error::domain("norm radius must be non-negative"));
    }
    let falling = t.falling_factorials(a.order());
    let value = a
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| (c / &falling[k]).abs() * pow(r, k))
        .sum();
    Ok(TNorm {
        value,
        order: a.order(),
        lower_bound: true,
    })
}

/// Undeformed weighted norm `sum |a_k| r^k`.
pub fn plain_norm(a: &TruncatedSeries, r: &Rational) -> Result<Rational> {
    if r.is_negative() {
        return Err(Error::domain("norm radius must be non-negative"));
    }
    Ok(a.weighted_l1(r))
}
