//! Convolution powers and exact LLN / CLT convergence tables.

use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cumulants::c_transform;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::{format_decimal, format_rational, int, pow, Rational};
use crate::series::TruncatedSeries;
use crate::special::{binomial_series, hermite_series};
use crate::tconv::{phi_t, phi_t_inv, TParam};

/// `A ⊞^t ... ⊞^t A` (`m` copies), via `Φ_t^{-1}(Φ_t(A)^m)`.
pub fn conv_power(a: &TruncatedSeries, m: u64, t: &TParam) -> Result<TruncatedSeries> {
    if m < 1 {
        return Err(Error::domain("convolution power needs m >= 1"));
    }
    if !a.coeff(0).is_one() {
        return Err(Error::domain("convolution power requires constant term 1"));
    }
    Ok(phi_t_inv(&phi_t(a, t)?.pow(m), t))
}

/// `D_{1/m}[A^{⊞m}]`.
pub fn lln_rescaled(a: &TruncatedSeries, m: u64, t: &TParam) -> Result<TruncatedSeries> {
    Ok(conv_power(a, m, t)?.dilate(&Rational::new(1.into(), m.into())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    pub m: u64,
    /// `|coefficient_k - limit_k|` for `k = 0..=N`.
    #[serde(with = "crate::rational::serde_vec")]
    pub coeff_errors: Vec<Rational>,
}

fn abs_errors(a: &TruncatedSeries, b: &TruncatedSeries) -> Vec<Rational> {
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).abs())
        .collect()
}

/// Deviation of `D_{1/m}[A^{⊞m}]` from `B_λ` with `λ = κ_1(A)`, one row per `m`.
pub fn lln_table(
    a: &TruncatedSeries,
    t: &TParam,
    ms: &[u64],
    exec: Exec,
) -> Result<Vec<ConvergenceRow>> {
    let lambda = c_transform(a, t)?.kappa(1);
    let limit = binomial_series(&lambda, t, a.order());
    exec.try_map(ms, |&m| {
        let scaled = lln_rescaled(a, m, t)?;
        Ok(ConvergenceRow {
            m,
            coeff_errors: abs_errors(&scaled, &limit),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CltRow {
    pub m: u64,
    /// Rescaled cumulants of `A^{⊞m}` for `n = 1..=N`: `κ_n / m^{n/2}` for
    /// even `n`, `κ_n^2 / m^n` for odd `n`.
    #[serde(with = "crate::rational::serde_vec")]
    pub cumulants: Vec<Rational>,
    /// Distance of each entry from its Hermite limit (1 at `n = 2`, else 0).
    #[serde(with = "crate::rational::serde_vec")]
    pub cumulant_errors: Vec<Rational>,
    /// Coefficient deviation from `H`, only when `m` is a perfect square.
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt"
    )]
    pub coeff_errors: Option<Vec<Rational>>,
}

fn serialize_opt<S: serde::Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    let strings: Option<Vec<String>> = v.as_ref().map(|v| v.iter().map(format_rational).collect());
    strings.serialize(s)
}

fn exact_sqrt(m: u64) -> Option<u64> {
    let r = m.isqrt();
    (r * r == m).then_some(r)
}

/// CLT diagnostics. `A` must have `κ_1 = 0` and `κ_2 = 1`.
pub fn clt_table(a: &TruncatedSeries, t: &TParam, ms: &[u64], exec: Exec) -> Result<Vec<CltRow>> {
    let k = c_transform(a, t)?;
    if !k.kappa(1).is_zero() || !k.kappa(2).is_one() {
        return Err(Error::Precondition(
            "CLT needs kappa_1 = 0 and kappa_2 = 1".into(),
        ));
    }
    let order = a.order();
    let limit = hermite_series(t, order);
    exec.try_map(ms, |&m| {
        if m < 1 {
            return Err(Error::domain("convolution power needs m >= 1"));
        }
        let power = conv_power(a, m, t)?;
        let kp = c_transform(&power, t)?;
        let mr = int(m as i64);
        let mut cumulants = Vec::with_capacity(order);
        let mut cumulant_errors = Vec::with_capacity(order);
        for n in 1..=order {
            let kn = kp.kappa(n);
            let (value, target) = if n % 2 == 0 {
                (kn / pow(&mr, n / 2), if n == 2 { int(1) } else { int(0) })
            } else {
                (&kn * &kn / pow(&mr, n), int(0))
            };
            cumulant_errors.push((&value - target).abs());
            cumulants.push(value);
        }
        let coeff_errors = exact_sqrt(m).map(|r| {
            let scaled = power.dilate(&Rational::new(1.into(), r.into()));
            abs_errors(&scaled, &limit)
        });
        Ok(CltRow {
            m,
            cumulants,
            cumulant_errors,
            coeff_errors,
        })
    })
}

fn csv<'a>(entries: impl Iterator<Item = (u64, usize, &'a Rational)>) -> String {
    let mut out = String::from("m,n,error,error_decimal\n");
    for (m, n, e) in entries {
        out.push_str(&format!("{m},{n},{},{}\n", format_rational(e), format_decimal(e)));
    }
    out
}

/// CSV with one line per `(m, coefficient index)`.
pub fn lln_csv(rows: &[ConvergenceRow]) -> String {
    csv(rows
        .iter()
        .flat_map(|r| r.coeff_errors.iter().enumerate().map(move |(n, e)| (r.m, n, e))))
}

/// CSV with one line per `(m, cumulant index)`, cumulants indexed from 1.
pub fn clt_csv(rows: &[CltRow]) -> String {
    csv(rows.iter().flat_map(|r| {
        r.cumulant_errors
            .iter()
            .enumerate()
            .map(move |(i, e)| (r.m, i + 1, e))
    }))
}

/// `e_{2m} / e_m` as a float, for ratio tests on exact error sequences.
pub fn decay_ratio(coarse: &Rational, fine: &Rational) -> Option<f64> {
    if coarse.is_zero() {
        return None;
    }
    (fine / coarse).to_f64()
}
