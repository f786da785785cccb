//! Dense truncated power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `z^0, ..., z^N`; every identity between series holds modulo `z^{N+1}`.
//! Binary operations require both operands to carry the same order.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<String>,
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        TruncatedSeries::new(coeffs, r.order)
    }
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            order: s.order(),
            coeffs: s.coeffs.iter().map(format_rational).collect(),
        }
    }
}

pub(crate) fn check_orders(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::TruncationMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(())
}

impl TruncatedSeries {
    /// Builds a series of order `order`, zero-filling missing coefficients.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Result<Self> {
        if coeffs.len() > order + 1 {
            return Err(Error::TruncationMismatch {
                left: coeffs.len() - 1,
                right: order,
            });
        }
        coeffs.resize(order + 1, Rational::zero());
        Ok(TruncatedSeries { coeffs })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| int(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Rational::one(), order)
    }

    /// `c z^k`, or zero when `k > order`.
    pub fn monomial(k: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series whose `k`-th coefficient is `f(k)`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        TruncatedSeries {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Highest index carrying a nonzero coefficient.
    pub fn support_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Truncates or zero-extends to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, &Rational) -> Rational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_orders(self, other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_orders(self, other)?;
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| -c)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|_, c| c * r)
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_orders(self, other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `m`-th power by repeated squaring; `pow(0)` is the unit.
    pub fn pow(&self, mut m: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    fn require_unit_constant(&self, what: &str) -> Result<()> {
        if !self.coeffs[0].is_one() {
            return Err(Error::domain(format!(
                "{what} requires constant term 1, got {}",
                format_rational(&self.coeffs[0])
            )));
        }
        Ok(())
    }

    /// Formal logarithm of a series with constant term 1.
    ///
    /// Solves `A L' = A'` coefficientwise:
    /// `k l_k = k a_k - sum_{j=1}^{k-1} (k-j) a_j l_{k-j}`.
    pub fn formal_log(&self) -> Result<Self> {
        self.require_unit_constant("formal_log")?;
        let n = self.order();
        let a = &self.coeffs;
        let mut l = vec![Rational::zero(); n + 1];
        for k in 1..=n {
            let mut acc = int(k as i64) * &a[k];
            for j in 1..k {
                if !a[j].is_zero() {
                    acc -= int((k - j) as i64) * &a[j] * &l[k - j];
                }
            }
            l[k] = acc / int(k as i64);
        }
        Ok(TruncatedSeries { coeffs: l })
    }

    /// Formal exponential of a series with zero constant term, via `E' = A'E`.
    pub fn formal_exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain(format!(
                "formal_exp requires constant term 0, got {}",
                format_rational(&self.coeffs[0])
            )));
        }
        let n = self.order();
        let a = &self.coeffs;
        let mut e = vec![Rational::zero(); n + 1];
        e[0] = Rational::one();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !a[j].is_zero() {
                    acc += int(j as i64) * &a[j] * &e[k - j];
                }
            }
            e[k] = acc / int(k as i64);
        }
        Ok(TruncatedSeries { coeffs: e })
    }

    /// `A(rz)`.
    pub fn dilate(&self, r: &Rational) -> Self {
        let mut rk = Rational::one();
        self.map_coeffs(|k, c| {
            if k > 0 {
                rk *= r;
            }
            c * &rk
        })
    }

    /// `-z A'(z) / A(z)`; coefficient `k` is the power sum `p_k(A)`.
    ///
    /// Uses Newton's identities `p_k = -k a_k - sum_{j=1}^{k-1} p_j a_{k-j}`.
    pub fn z_dlog(&self) -> Result<Self> {
        self.require_unit_constant("z_dlog")?;
        let n = self.order();
        let a = &self.coeffs;
        let mut p = vec![Rational::zero(); n + 1];
        for k in 1..=n {
            let mut acc = -(int(k as i64) * &a[k]);
            for j in 1..k {
                if !a[k - j].is_zero() {
                    acc -= &p[j] * &a[k - j];
                }
            }
            p[k] = acc;
        }
        Ok(TruncatedSeries { coeffs: p })
    }

    /// The unique series with constant term 1 and power sums `p_1, ..., p_N`,
    /// i.e. `exp(-sum p_k z^k / k)`.
    pub fn from_power_sums(p: &[Rational], order: usize) -> Result<Self> {
        if p.len() > order {
            return Err(Error::TruncationMismatch {
                left: p.len(),
                right: order,
            });
        }
        let log = Self::from_fn(order, |k| {
            if k == 0 || k > p.len() {
                Rational::zero()
            } else {
                -&p[k - 1] / int(k as i64)
            }
        });
        log.formal_exp()
    }

    /// Largest coefficientwise `|a_k - b_k|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<Rational> {
        check_orders(self, other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// `sum |a_k| r^k` over the stored coefficients.
    pub fn weighted_l1(&self, r: &Rational) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * pow(r, k))
            .sum()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if c.abs().is_one() => {}
                _ => write!(f, "{mag}")?,
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}
