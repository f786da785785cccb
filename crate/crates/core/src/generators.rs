//! Generators of `⊞^t`-semigroups.
//!
//! A semigroup `Q_s` is diagonal in the `Φ_t` picture: `Φ_t(Q_s) = exp(s η)`,
//! so its generator acts on `A` as `Φ_t^{-1}(η Φ_t(A))`.

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{factorial, from_f64, int, pow, to_f64, Rational};
use crate::series::{check_orders, TruncatedSeries};
use crate::special::{binomial_series, hermite_semigroup, iota_d, iota_d_inv, laguerre_series};
use crate::tconv::{phi_t, phi_t_inv, tconv, TParam};

/// Drift `gamma`, Gaussian variance `a`, and a finitely supported jump
/// measure `nu` given as `(position, mass)` atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TripletRepr", into = "TripletRepr")]
pub struct LevyTriplet {
    gamma: Rational,
    a: Rational,
    nu: Vec<(Rational, Rational)>,
}

#[derive(Clone, Serialize, Deserialize)]
struct TripletRepr {
    #[serde(with = "crate::rational::serde_str")]
    gamma: Rational,
    #[serde(with = "crate::rational::serde_str")]
    a: Rational,
    #[serde(with = "crate::rational::serde_pairs", default)]
    nu: Vec<(Rational, Rational)>,
}

impl TryFrom<TripletRepr> for LevyTriplet {
    type Error = Error;

    fn try_from(r: TripletRepr) -> Result<Self> {
        LevyTriplet::new(r.gamma, r.a, r.nu)
    }
}

impl From<LevyTriplet> for TripletRepr {
    fn from(l: LevyTriplet) -> Self {
        TripletRepr {
            gamma: l.gamma,
            a: l.a,
            nu: l.nu,
        }
    }
}

impl LevyTriplet {
    pub fn new(gamma: Rational, a: Rational, nu: Vec<(Rational, Rational)>) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::domain("Gaussian part must be >= 0"));
        }
        for (x, w) in &nu {
            if x.is_zero() {
                return Err(Error::domain("Levy measure atoms must be away from 0"));
            }
            if !w.is_positive() {
                return Err(Error::domain("Levy measure masses must be positive"));
            }
        }
        Ok(LevyTriplet { gamma, a, nu })
    }

    /// Standard Brownian motion: `(0, 1, 0)`.
    pub fn brownian() -> Self {
        LevyTriplet {
            gamma: Rational::zero(),
            a: Rational::one(),
            nu: vec![],
        }
    }

    /// Poisson jumps of size `jump` at rate `rate`, compensated when `|jump| <= 1`.
    pub fn poisson(rate: Rational, jump: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::zero(), vec![(jump, rate)])
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn nu(&self) -> &[(Rational, Rational)] {
        &self.nu
    }
}

/// Closed-form families, each indexed by `s >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `H_s`, the Hermite family with variance `s`.
    Hermite,
    /// `L_s`, the Laguerre family with shape `s`.
    Laguerre,
    /// `B_{s λ}`.
    Binomial { lambda: Rational },
    /// `Φ_t^{-1}(exp(s η_{γ,a,ν}))`.
    Levy(LevyTriplet),
}

pub type Sampler = Arc<dyn Fn(&Rational) -> TruncatedSeries + Send + Sync>;

#[derive(Clone)]
pub enum SeriesSemigroup {
    ClosedForm { family: Family, t: TParam },
    /// Only sample values are known; `η` can be estimated but not derived.
    Sampled { t: TParam, sampler: Sampler },
}

impl fmt::Debug for SeriesSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSemigroup::ClosedForm { family, t } => f
                .debug_struct("ClosedForm")
                .field("family", family)
                .field("t", t)
                .finish(),
            SeriesSemigroup::Sampled { t, .. } => {
                f.debug_struct("Sampled").field("t", t).finish_non_exhaustive()
            }
        }
    }
}

impl SeriesSemigroup {
    pub fn closed(family: Family, t: TParam) -> Self {
        SeriesSemigroup::ClosedForm { family, t }
    }

    pub fn sampled(
        t: TParam,
        sampler: impl Fn(&Rational) -> TruncatedSeries + Send + Sync + 'static,
    ) -> Self {
        SeriesSemigroup::Sampled {
            t,
            sampler: Arc::new(sampler),
        }
    }

    pub fn t(&self) -> &TParam {
        match self {
            SeriesSemigroup::ClosedForm { t, .. } | SeriesSemigroup::Sampled { t, .. } => t,
        }
    }

    /// `Q_s` truncated at `order`.
    pub fn sample(&self, s: &Rational, order: usize) -> Result<TruncatedSeries> {
        if s.is_negative() {
            return Err(Error::domain("semigroup parameter must be >= 0"));
        }
        match self {
            SeriesSemigroup::Sampled { sampler, .. } => Ok(sampler(s).with_order(order)),
            SeriesSemigroup::ClosedForm { family, t } => match family {
                Family::Hermite => hermite_semigroup(s, t, order),
                Family::Laguerre if s.is_zero() => Ok(TruncatedSeries::one(order)),
                Family::Laguerre => laguerre_series(s, t, order),
                Family::Binomial { lambda } => Ok(binomial_series(&(s * lambda), t, order)),
                Family::Levy(_) => {
                    let eta = eta_closed_form(self, order)?;
                    evolve(&TruncatedSeries::one(order), &eta, s, t)
                }
            },
        }
    }
}

/// A series with zero constant term, playing the role of `η`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TruncatedSeries", into = "TruncatedSeries")]
pub struct EtaSeries {
    series: TruncatedSeries,
}

impl TryFrom<TruncatedSeries> for EtaSeries {
    type Error = Error;

    fn try_from(series: TruncatedSeries) -> Result<Self> {
        EtaSeries::new(series)
    }
}

impl From<EtaSeries> for TruncatedSeries {
    fn from(e: EtaSeries) -> Self {
        e.series
    }
}

impl EtaSeries {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if !series.coeff(0).is_zero() {
            return Err(Error::domain("eta must have zero constant term"));
        }
        Ok(EtaSeries { series })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }
}

/// Exact `η` for a closed-form family.
pub fn eta_closed_form(sg: &SeriesSemigroup, order: usize) -> Result<EtaSeries> {
    let SeriesSemigroup::ClosedForm { family, t } = sg else {
        return Err(Error::parameter(
            "sampled families have no closed-form eta; estimate it instead",
        ));
    };
    let tv = t.value();
    let series = match family {
        Family::Hermite => {
            let c = -(tv.recip() / int(2));
            TruncatedSeries::from_fn(order, |k| if k == 2 { c.clone() } else { Rational::zero() })
        }
        Family::Laguerre => {
            let inner = TruncatedSeries::from_fn(order, |k| match k {
                0 => Rational::one(),
                1 => -tv.recip(),
                _ => Rational::zero(),
            });
            inner.formal_log()?.scale(&tv)
        }
        // Φ_t(B_{sλ}) = exp(-sλz); only the linear term survives d/ds at 0.
        Family::Binomial { lambda } => {
            TruncatedSeries::from_fn(order, |k| if k == 1 { -lambda } else { Rational::zero() })
        }
        Family::Levy(tr) => levy_eta(tr, order),
    };
    EtaSeries::new(series)
}

fn levy_eta(tr: &LevyTriplet, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |k| match k {
        0 => Rational::zero(),
        1 => {
            let big: Rational = tr
                .nu
                .iter()
                .filter(|(x, _)| x.abs() > Rational::one())
                .map(|(x, w)| -(w * x))
                .sum();
            big - &tr.gamma
        }
        _ => {
            let gauss = if k == 2 { &tr.a / int(2) } else { Rational::zero() };
            let jumps: Rational = tr.nu.iter().map(|(x, w)| w * pow(&-x, k)).sum();
            gauss + jumps / factorial(k)
        }
    })
}

/// Float estimate of `η` with a per-coefficient error estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaEstimate {
    pub coeffs: Vec<f64>,
    pub error_estimates: Vec<f64>,
}

/// Estimates `η = lim (Φ_t(Q_s) - 1) / s` by polynomial extrapolation to
/// `s = 0` over the given strictly decreasing positive `s_values`.
///
/// Difference quotients are computed exactly and rounded only for the
/// extrapolation. A coefficient whose successive extrapolation corrections
/// grow (and are not already negligible) is reported as non-convergent.
pub fn eta_estimate(sg: &SeriesSemigroup, s_values: &[f64], order: usize) -> Result<EtaEstimate> {
    if s_values.len() < 2 {
        return Err(Error::parameter("need at least two s values"));
    }
    if s_values.iter().any(|s| !(*s > 0.0) || !s.is_finite())
        || s_values.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::parameter("s values must be positive and strictly decreasing"));
    }
    let t = sg.t();
    let mut quotients = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let sr = from_f64(s)?;
        let q = phi_t(&sg.sample(&sr, order)?, t)?;
        let d = q.sub(&TruncatedSeries::one(order))?.scale(&sr.recip());
        quotients.push(d.coeffs().iter().map(to_f64).collect::<Vec<_>>());
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut error_estimates = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let ys: Vec<f64> = quotients.iter().map(|q| q[k]).collect();
        let (value, corrections) = neville_at_zero(s_values, &ys);
        let last = corrections[corrections.len() - 1];
        let prev = corrections[corrections.len() - 2];
        let tol = 1e-6 * value.abs().max(1.0);
        if last > prev && last > tol {
            return Err(Error::Diagnostic(format!(
                "coefficient {k} does not settle: correction grew from {prev:.3e} to {last:.3e}"
            )));
        }
        coeffs.push(value);
        error_estimates.push(last);
    }
    Ok(EtaEstimate {
        coeffs,
        error_estimates,
    })
}

/// Value at 0 of the interpolating polynomial through `(xs, ys)`, together
/// with `|P_{0..j} - P_{0..j-1}|` for `j = 0..n` (first entry is 0).
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> (f64, Vec<f64>) {
    let n = xs.len();
    let mut p = ys.to_vec();
    let mut leading = vec![ys[0]];
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
        leading.push(p[0]);
    }
    let mut corrections = vec![0.0];
    corrections.extend(leading.windows(2).map(|w| (w[1] - w[0]).abs()));
    (leading[n - 1], corrections)
}

fn check_eta(eta: &EtaSeries, a: &TruncatedSeries) -> Result<()> {
    check_orders(eta.series(), a)
}

/// `Φ_t^{-1}(η Φ_t(A))`.
pub fn generator_apply(eta: &EtaSeries, a: &TruncatedSeries, t: &TParam) -> Result<TruncatedSeries> {
    check_eta(eta, a)?;
    let product = eta.series().mul(&phi_t(a, t)?)?;
    let out = phi_t_inv(&product, t);
    t.check_support(&out)?;
    Ok(out)
}

/// `Φ_t^{-1}(Φ_t(A) exp(s η))`.
pub fn evolve(
    a: &TruncatedSeries,
    eta: &EtaSeries,
    s: &Rational,
    t: &TParam,
) -> Result<TruncatedSeries> {
    if s.is_negative() {
        return Err(Error::domain("evolution time must be >= 0"));
    }
    check_eta(eta, a)?;
    let flow = eta.series().scale(s).formal_exp()?;
    Ok(phi_t_inv(&phi_t(a, t)?.mul(&flow)?, t))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForwardReport {
    /// `max_k |Φ_t(A ⊞^t Q_s) - Φ_t(A) exp(s η)|`, with `Q_s = Φ_t^{-1}(exp(s η))`.
    #[serde(with = "crate::rational::serde_str")]
    pub exact_residual: Rational,
    /// `max_k |D_k - (η Φ_t F(s))_k| / max(1, |(η Φ_t F(s))_k|)` where `D` is
    /// the Richardson combination of central differences in `s` at steps
    /// `h` and `h/2`, and `F = evolve(A, η, ·)`.
    pub float_residual: f64,
    /// Absolute residual of the plain central difference at step `h`.
    pub central_residual: f64,
}

/// Checks the forward equation `∂_s Φ_t(F(s)) = η Φ_t(F(s))` along the
/// evolution of `A`. Requires `s >= h > 0`. All arithmetic is exact until
/// the residuals are rounded.
pub fn forward_residual(
    a: &TruncatedSeries,
    eta: &EtaSeries,
    s: &Rational,
    h: f64,
    t: &TParam,
) -> Result<ForwardReport> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::parameter("step h must be positive"));
    }
    let hr = from_f64(h)?;
    if s < &hr {
        return Err(Error::domain("need s >= h for a central difference"));
    }
    check_eta(eta, a)?;
    let order = a.order();
    let top = t.top(order);

    let flow = eta.series().scale(s).formal_exp()?;
    let q_s = phi_t_inv(&flow, t);
    let lhs = phi_t(&tconv(a, &q_s, t)?, t)?;
    let rhs = phi_t(a, t)?.mul(&flow)?;
    let exact_residual = (0..=top)
        .map(|k| (lhs.coeff(k) - rhs.coeff(k)).abs())
        .max()
        .unwrap_or_else(Rational::zero);

    let at = |x: &Rational| -> Result<TruncatedSeries> { phi_t(&evolve(a, eta, x, t)?, t) };
    let central = |step: &Rational| -> Result<TruncatedSeries> {
        let plus = at(&(s + step))?;
        let minus = at(&(s - step))?;
        Ok(plus.sub(&minus)?.scale(&(int(2) * step).recip()))
    };
    let coarse = central(&hr)?;
    let fine = central(&(&hr / int(2)))?;
    let richardson = fine.scale(&int(4)).sub(&coarse)?.scale(&Rational::new(1.into(), 3.into()));
    let drift = eta.series().mul(&at(s)?)?;
    let float_of = |r: Rational| r.to_f64().unwrap_or(f64::INFINITY);
    let mut float_residual = 0.0f64;
    let mut central_residual = 0.0f64;
    for k in 0..=top {
        let scale = float_of(drift.coeff(k).abs()).max(1.0);
        float_residual = float_residual.max(float_of((richardson.coeff(k) - drift.coeff(k)).abs()) / scale);
        central_residual = central_residual.max(float_of((coarse.coeff(k) - drift.coeff(k)).abs()));
    }
    Ok(ForwardReport {
        exact_residual,
        float_residual,
        central_residual,
    })
}

/// The generator of a finite-mode family acting on a degree-`d` polynomial
/// through `ι_d`.
pub fn finite_free_generator_apply(f: &Poly, sg: &SeriesSemigroup) -> Result<Poly> {
    let t = sg.t();
    let Some(d) = t.degree() else {
        return Err(Error::parameter("finite free generator needs a finite-mode family"));
    };
    if f.degree() != d {
        return Err(Error::TruncationMismatch {
            left: f.degree(),
            right: d,
        });
    }
    let eta = eta_closed_form(sg, d)?;
    let out = generator_apply(&eta, &iota_d(f), t)?;
    iota_d_inv(&out, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{classical_conv, moments_discrete, normal_moments, DiscreteLaw};
    use crate::rational::rat;
    use crate::special::hermite_series;

    fn gen(p: i64, q: i64) -> TParam {
        TParam::generic(rat(p, q)).unwrap()
    }

    fn closed(family: Family, t: &TParam) -> SeriesSemigroup {
        SeriesSemigroup::closed(family, t.clone())
    }

    fn series(v: &[(i64, i64)], order: usize) -> TruncatedSeries {
        TruncatedSeries::new(v.iter().map(|&(n, d)| rat(n, d)).collect(), order).unwrap()
    }

    #[test]
    fn eta_examples() {
        let t = TParam::classical();
        let half_z2 = series(&[(0, 1), (0, 1), (1, 2)], 6);
        let h = eta_closed_form(&closed(Family::Hermite, &t), 6).unwrap();
        assert_eq!(h.series(), &half_z2);
        let b = eta_closed_form(&closed(Family::Levy(LevyTriplet::brownian()), &t), 6).unwrap();
        assert_eq!(b.series(), &half_z2);

        let lam = rat(3, 2);
        let p = LevyTriplet::poisson(lam.clone(), int(1)).unwrap();
        let e = eta_closed_form(&closed(Family::Levy(p), &t), 5).unwrap();
        // λ (e^{-z} - 1 + z)
        let expect = TruncatedSeries::from_fn(5, |k| {
            if k < 2 {
                Rational::zero()
            } else {
                &lam * pow(&int(-1), k) / factorial(k)
            }
        });
        assert_eq!(e.series(), &expect);
    }

    #[test]
    fn levy_large_jumps_enter_linearly() {
        let tr = LevyTriplet::new(rat(1, 3), int(0), vec![(int(2), rat(1, 4)), (rat(-1, 2), int(1))]).unwrap();
        let e = levy_eta(&tr, 3);
        assert_eq!(e.coeff(1), rat(-1, 2) - rat(1, 3));
        assert_eq!(e.coeff(2), (rat(1, 4) * int(4) + rat(1, 4)) / int(2));
    }

    #[test]
    fn triplet_validation_and_json() {
        assert!(LevyTriplet::new(int(0), int(-1), vec![]).is_err());
        assert!(LevyTriplet::new(int(0), int(0), vec![(int(0), int(1))]).is_err());
        assert!(LevyTriplet::new(int(0), int(0), vec![(int(1), int(0))]).is_err());
        let json = r#"{"gamma":"1/2","a":"1","nu":[["-2","3/4"]]}"#;
        let tr: LevyTriplet = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&tr).unwrap(), json);
    }

    #[test]
    fn sampled_has_no_closed_form() {
        let sg = SeriesSemigroup::sampled(gen(1, 2), |_| TruncatedSeries::one(4));
        assert!(matches!(eta_closed_form(&sg, 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn closed_form_families_are_semigroups() {
        let lam = rat(2, 5);
        let tr = LevyTriplet::new(rat(1, 2), rat(1, 3), vec![(int(2), rat(1, 4))]).unwrap();
        for t in [gen(-1, 1), gen(1, 2), gen(7, 3)] {
            for fam in [
                Family::Hermite,
                Family::Laguerre,
                Family::Binomial { lambda: lam.clone() },
                Family::Levy(tr.clone()),
            ] {
                let sg = closed(fam, &t);
                assert_eq!(sg.sample(&int(0), 8).unwrap(), TruncatedSeries::one(8));
                let (s1, s2) = (rat(1, 3), rat(5, 4));
                let lhs = tconv(&sg.sample(&s1, 8).unwrap(), &sg.sample(&s2, 8).unwrap(), &t).unwrap();
                assert_eq!(lhs, sg.sample(&(&s1 + &s2), 8).unwrap(), "{sg:?}");
            }
        }
    }

    #[test]
    fn eta_is_derivative_of_sample() {
        // Φ_t(Q_s) = exp(s η) for each closed form
        for t in [gen(-1, 1), gen(1, 2)] {
            for fam in [Family::Hermite, Family::Laguerre, Family::Binomial { lambda: rat(3, 2) }] {
                let sg = closed(fam, &t);
                let eta = eta_closed_form(&sg, 7).unwrap();
                let s = rat(2, 3);
                let lhs = phi_t(&sg.sample(&s, 7).unwrap(), &t).unwrap();
                assert_eq!(lhs, eta.series().scale(&s).formal_exp().unwrap(), "{sg:?}");
            }
        }
    }

    #[test]
    fn estimate_matches_closed_form() {
        let t = TParam::classical();
        let sg = SeriesSemigroup::sampled(t.clone(), {
            let t = t.clone();
            move |s| hermite_semigroup(s, &t, 8).unwrap()
        });
        let est = eta_estimate(&sg, &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0], 8).unwrap();
        for (k, c) in est.coeffs.iter().enumerate() {
            let want = if k == 2 { 0.5 } else { 0.0 };
            assert!((c - want).abs() <= 1e-6, "k = {k}: {c}");
        }

        let trivial = SeriesSemigroup::sampled(t, |_| TruncatedSeries::one(5));
        let est = eta_estimate(&trivial, &[0.5, 0.25], 5).unwrap();
        assert!(est.coeffs.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn estimate_laguerre() {
        let t = gen(1, 2);
        let sg = SeriesSemigroup::sampled(t.clone(), {
            let t = t.clone();
            move |s| laguerre_series(s, &t, 6).unwrap()
        });
        let s: Vec<f64> = (1..=6).map(|j| 0.5f64.powi(j)).collect();
        let est = eta_estimate(&sg, &s, 6).unwrap();
        let exact = eta_closed_form(&closed(Family::Laguerre, &t), 6).unwrap();
        for k in 0..=6 {
            assert!((est.coeffs[k] - to_f64(&exact.series().coeff(k))).abs() <= 1e-6);
        }
    }

    #[test]
    fn estimate_flags_divergence() {
        // Q_s jumps away from 1 as s shrinks: no limit.
        let sg = SeriesSemigroup::sampled(gen(1, 2), |s| {
            let mut c = vec![int(1), s.recip() * s.recip()];
            c.resize(3, int(0));
            TruncatedSeries::new(c, 2).unwrap()
        });
        assert!(matches!(
            eta_estimate(&sg, &[0.5, 0.25, 0.125], 2),
            Err(Error::Diagnostic(_))
        ));
        assert!(eta_estimate(&sg, &[0.25, 0.5], 2).is_err());
    }

    fn hermite_formula(a: &TruncatedSeries, t: &TParam) -> TruncatedSeries {
        let tv = t.value();
        TruncatedSeries::from_fn(a.order(), |n| {
            if n < 2 {
                return Rational::zero();
            }
            let k = n - 2;
            let kk = int(k as i64);
            -(&tv - &kk) * (&tv - &kk - int(1)) * a.coeff(k) / (int(2) * &tv)
        })
    }

    #[test]
    fn hermite_generator_formula() {
        let a = series(&[(1, 1), (2, 3), (-1, 2), (5, 7), (1, 9), (-3, 1), (2, 5)], 6);
        for t in [gen(-1, 1), gen(1, 2), gen(-5, 3)] {
            let eta = eta_closed_form(&closed(Family::Hermite, &t), 6).unwrap();
            assert_eq!(generator_apply(&eta, &a, &t).unwrap(), hermite_formula(&a, &t));
        }
        let t = TParam::Finite(4);
        let a = series(&[(1, 1), (2, 3), (-1, 2), (5, 7), (1, 9)], 6);
        let eta = eta_closed_form(&closed(Family::Hermite, &t), 6).unwrap();
        let got = generator_apply(&eta, &a, &t).unwrap();
        assert_eq!(got, hermite_formula(&a, &t));
        assert!(got.support_degree().unwrap() <= 4);

        let eta = eta_closed_form(&closed(Family::Hermite, &TParam::classical()), 4).unwrap();
        let z2 = generator_apply(&eta, &TruncatedSeries::one(4), &TParam::classical()).unwrap();
        assert_eq!(z2, TruncatedSeries::monomial(2, int(1), 4));
    }

    #[test]
    fn order_mismatch() {
        let t = gen(1, 2);
        let eta = eta_closed_form(&closed(Family::Hermite, &t), 4).unwrap();
        assert!(matches!(
            generator_apply(&eta, &TruncatedSeries::one(5), &t),
            Err(Error::TruncationMismatch { .. })
        ));
    }

    #[test]
    fn evolve_examples() {
        let t = TParam::classical();
        let eta = eta_closed_form(&closed(Family::Hermite, &t), 10).unwrap();
        let s = rat(3, 7);
        let one = TruncatedSeries::one(10);
        assert_eq!(evolve(&one, &eta, &s, &t).unwrap(), normal_moments(&s, 10));
        let a = series(&[(1, 1), (1, 2), (1, 3)], 10);
        assert_eq!(evolve(&a, &eta, &int(0), &t).unwrap(), a);
        assert!(evolve(&a, &eta, &int(-1), &t).is_err());

        let lam = rat(5, 2);
        let p = eta_closed_form(&closed(Family::Levy(LevyTriplet::poisson(lam.clone(), int(1)).unwrap()), &t), 4).unwrap();
        let m = evolve(&TruncatedSeries::one(4), &p, &s, &t).unwrap();
        assert_eq!(m.coeff(1), int(0));
        assert_eq!(m.coeff(2), &lam * &s);
    }

    #[test]
    fn evolve_semigroup_law() {
        let a = series(&[(1, 1), (2, 3), (-1, 2), (5, 7), (1, 9), (-3, 1)], 5);
        for t in [gen(-1, 1), gen(7, 3)] {
            let eta = eta_closed_form(&closed(Family::Laguerre, &t), 5).unwrap();
            let (s1, s2) = (rat(1, 4), rat(2, 3));
            let two_step = evolve(&evolve(&a, &eta, &s1, &t).unwrap(), &eta, &s2, &t).unwrap();
            assert_eq!(two_step, evolve(&a, &eta, &(s1 + s2), &t).unwrap());
        }
    }

    #[test]
    fn evolve_from_one_is_hermite_family() {
        for t in [gen(-1, 1), gen(1, 2), TParam::Finite(4)] {
            let eta = eta_closed_form(&closed(Family::Hermite, &t), 8).unwrap();
            let s = rat(4, 5);
            assert_eq!(
                evolve(&TruncatedSeries::one(8), &eta, &s, &t).unwrap(),
                hermite_semigroup(&s, &t, 8).unwrap()
            );
        }
        assert_eq!(
            hermite_semigroup(&int(1), &TParam::classical(), 6).unwrap(),
            hermite_series(&TParam::classical(), 6)
        );
    }

    #[test]
    fn difference_quotient_converges_at_first_order() {
        let t = gen(1, 2);
        let a = series(&[(1, 1), (2, 3), (-1, 2), (5, 7), (1, 9)], 4);
        let eta = eta_closed_form(&closed(Family::Laguerre, &t), 4).unwrap();
        let target = generator_apply(&eta, &a, &t).unwrap();
        let err = |j: i32| {
            let s = Rational::new(1.into(), num::BigInt::from(2).pow(j as u32));
            let q = evolve(&a, &eta, &s, &t).unwrap().sub(&a).unwrap().scale(&s.recip());
            to_f64(&q.max_abs_diff(&target).unwrap())
        };
        let errors: Vec<f64> = (6..=10).map(err).collect();
        for w in errors.windows(2) {
            assert!((w[1] / w[0] - 0.5).abs() < 0.05, "{errors:?}");
        }
    }

    /// `E[N^k]` for `N ~ Poisson(mu)` via Touchard polynomials.
    fn poisson_moments(mu: &Rational, order: usize) -> TruncatedSeries {
        let mut stirling = vec![vec![Rational::zero(); order + 1]; order + 1];
        stirling[0][0] = int(1);
        for n in 1..=order {
            for k in 1..=n {
                stirling[n][k] = int(k as i64) * &stirling[n - 1][k] + &stirling[n - 1][k - 1];
            }
        }
        TruncatedSeries::from_fn(order, |n| (0..=n).map(|k| &stirling[n][k] * pow(mu, k)).sum())
    }

    #[test]
    fn compensated_poisson_moments() {
        let t = TParam::classical();
        let (lam, s) = (rat(3, 2), rat(2, 3));
        let mu = &lam * &s;
        let tr = LevyTriplet::poisson(lam, int(1)).unwrap();
        let eta = eta_closed_form(&closed(Family::Levy(tr), &t), 8).unwrap();
        let shift = moments_discrete(&DiscreteLaw::point_mass(-mu.clone()), 8);
        let expect = classical_conv(&poisson_moments(&mu, 8), &shift).unwrap();
        assert_eq!(evolve(&TruncatedSeries::one(8), &eta, &s, &t).unwrap(), expect);
    }

    #[test]
    fn forward_equation() {
        let t = TParam::classical();
        let bm = eta_closed_form(&closed(Family::Levy(LevyTriplet::brownian()), &t), 8).unwrap();
        let r = forward_residual(&TruncatedSeries::one(8), &bm, &int(1), 1e-4, &t).unwrap();
        assert!(r.exact_residual.is_zero());
        assert!(r.float_residual <= 1e-6, "{}", r.float_residual);

        let r = forward_residual(&TruncatedSeries::one(8), &bm, &rat(3, 2), 1e-4, &t).unwrap();
        assert!(r.exact_residual.is_zero());

        let cp = eta_closed_form(
            &closed(Family::Levy(LevyTriplet::poisson(int(2), rat(3, 2)).unwrap()), &t),
            6,
        )
        .unwrap();
        let a = series(&[(1, 1), (1, 3), (-2, 5), (1, 7)], 6);
        let r = forward_residual(&a, &cp, &rat(1, 2), 1e-4, &t).unwrap();
        assert!(r.exact_residual.is_zero());
        assert!(r.float_residual <= 1e-6, "{}", r.float_residual);

        assert!(forward_residual(&a, &cp, &rat(1, 100_000), 1e-4, &t).is_err());
    }

    #[test]
    fn finite_free_heat_operator() {
        let sg = closed(Family::Hermite, &TParam::Finite(3));
        let x3 = Poly::from_ints(&[1, 0, 0, 0]).unwrap();
        assert_eq!(
            finite_free_generator_apply(&x3, &sg).unwrap(),
            Poly::from_ints(&[0, 0, -1, 0]).unwrap()
        );
        let sg4 = closed(Family::Hermite, &TParam::Finite(4));
        let f = Poly::new(vec![int(1), rat(1, 2), rat(-3, 4), int(2), rat(5, 3)]).unwrap();
        let heat = f.derivative().derivative().scale(&rat(-1, 8));
        assert_eq!(finite_free_generator_apply(&f, &sg4).unwrap(), heat);
        assert!(finite_free_generator_apply(&x3, &sg4).is_err());
        let generic = closed(Family::Hermite, &gen(1, 2));
        assert!(finite_free_generator_apply(&x3, &generic).is_err());
    }
}
