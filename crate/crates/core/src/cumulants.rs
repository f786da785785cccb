//! t-deformed cumulants.
//!
//! `C^t[A](z) = sum κ_i z^i = -(z/t) d/dz log E^t[A](z)`, computed as
//! `(1/t) M[E^t[A]]` where `M` is [`TruncatedSeries::z_dlog`].

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::series::TruncatedSeries;
use crate::tconv::{e_transform, TParam};

/// `κ_1, ..., κ_N` together with the parameter they were taken at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CumulantVector {
    pub t: TParam,
    #[serde(with = "crate::rational::serde_vec")]
    pub kappas: Vec<Rational>,
}

impl CumulantVector {
    pub fn new(t: TParam, kappas: Vec<Rational>) -> Self {
        CumulantVector { t, kappas }
    }

    pub fn order(&self) -> usize {
        self.kappas.len()
    }

    /// `κ_n`, 1-based; zero beyond the stored range.
    pub fn kappa(&self, n: usize) -> Rational {
        assert!(n >= 1, "cumulants are indexed from 1");
        self.kappas.get(n - 1).cloned().unwrap_or_else(Rational::zero)
    }

    /// `C^t` as a series with zero constant term.
    pub fn as_series(&self) -> TruncatedSeries {
        let n = self.order();
        TruncatedSeries::from_fn(n, |k| {
            if k == 0 {
                Rational::zero()
            } else {
                self.kappas[k - 1].clone()
            }
        })
    }
}

/// Cumulants `κ_1..κ_N` of a series with constant term 1.
pub fn c_transform(a: &TruncatedSeries, t: &TParam) -> Result<CumulantVector> {
    if !a.coeff(0).is_one() {
        return Err(Error::domain("cumulants require constant term 1"));
    }
    let m = e_transform(a, t)?.z_dlog()?;
    let tv = t.value();
    let kappas = m.coeffs()[1..].iter().map(|p| p / &tv).collect();
    Ok(CumulantVector::new(t.clone(), kappas))
}

/// Inverse of [`c_transform`]: the unique series with constant term 1 whose
/// cumulants are `kv.kappas` (zero-filled up to `order`).
///
/// In finite mode the series is fixed by `κ_1..κ_d`; any further entries
/// must match the cumulants of that series.
pub fn from_cumulants(kv: &CumulantVector, order: usize) -> Result<TruncatedSeries> {
    if kv.order() > order {
        return Err(Error::TruncationMismatch {
            left: kv.order(),
            right: order,
        });
    }
    let t = &kv.t;
    let tv = t.value();
    // In finite mode only κ_1..κ_d determine the series; the rest must agree.
    let used = t.degree().map_or(kv.order(), |d| d.min(kv.order()));
    // log E^t[A] = -t sum κ_i z^i / i
    let log_e = TruncatedSeries::from_fn(order, |k| {
        if k == 0 || k > used {
            Rational::zero()
        } else {
            -(&tv * &kv.kappas[k - 1]) / int(k as i64)
        }
    });
    let e = log_e.formal_exp()?;
    // a_k = e_k (t)_k / t^k; in finite mode (d)_k = 0 drops everything above d
    let falling = t.falling_factorials(order);
    let a = e.dilate(&tv.recip()).map_coeffs(|k, c| c * &falling[k]);
    if used < kv.order() {
        let back = c_transform(&a, t)?;
        if back.kappas[..kv.order()] != kv.kappas[..] {
            return Err(Error::domain(format!(
                "cumulants are not those of a degree-{used} series"
            )));
        }
    }
    Ok(a)
}

/// Power sums `p_1..p_N` of a series with constant term 1.
pub fn power_sums(a: &TruncatedSeries) -> Result<Vec<Rational>> {
    Ok(a.z_dlog()?.into_coeffs().split_off(1))
}

/// Coefficients `c_1..c_N` of `log Ψ_X(z)` for a moment series `M_X`.
///
/// These are the classical cumulants divided by `n!`, taken over a real
/// variable; `n c_n = κ_n^{-1}(M_X)`.
pub fn classical_cumulants(moments: &TruncatedSeries) -> Result<Vec<Rational>> {
    if !moments.coeff(0).is_one() {
        return Err(Error::domain("moment series must start with m_0 = 1"));
    }
    let psi = e_transform(moments, &TParam::classical())?;
    Ok(psi.formal_log()?.into_coeffs().split_off(1))
}
