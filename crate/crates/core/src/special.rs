//! Named series families, the hypergeometric tower, and the `ι_d` bridge
//! between degree-`d` polynomials and truncated series.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pochhammer::{falling, is_nonneg_integer, rising};
use crate::poly::Poly;
use crate::rational::{factorial, int, pow, Rational};
use crate::series::TruncatedSeries;
use crate::tconv::{tconv, TParam};

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `B_λ`: coefficient `k` is `(-1)^k (t)_k λ^k / k!`.
pub fn binomial_series(lambda: &Rational, t: &TParam, order: usize) -> TruncatedSeries {
    let falling = t.falling_factorials(order);
    TruncatedSeries::from_fn(order, |k| {
        sign(k) * &falling[k] * pow(lambda, k) / factorial(k)
    })
}

/// `H`: coefficient of `z^{2k}` is `(-1)^k (t)_{2k} / (t^k 2^k k!)`.
pub fn hermite_series(t: &TParam, order: usize) -> TruncatedSeries {
    hermite_with(&Rational::one(), t, order)
}

/// The Hermite family indexed by variance: the `z^{2k}` coefficient of
/// [`hermite_series`] multiplied by `s^k`.
pub fn hermite_semigroup(s: &Rational, t: &TParam, order: usize) -> Result<TruncatedSeries> {
    if s.is_negative() {
        return Err(Error::domain("Hermite semigroup parameter must be >= 0"));
    }
    Ok(hermite_with(s, t, order))
}

fn hermite_with(s: &Rational, t: &TParam, order: usize) -> TruncatedSeries {
    let tv = t.value();
    let falling = t.falling_factorials(order);
    TruncatedSeries::from_fn(order, |n| {
        if n % 2 == 1 {
            return Rational::zero();
        }
        let k = n / 2;
        sign(k) * &falling[n] * pow(s, k) / (pow(&tv, k) * pow(&int(2), k) * factorial(k))
    })
}

/// `L_λ`: coefficient `k` is `(-1)^k (λt)_k (t)_k / (t^k k!)`.
pub fn laguerre_series(lambda: &Rational, t: &TParam, order: usize) -> Result<TruncatedSeries> {
    if !lambda.is_positive() {
        return Err(Error::domain("Laguerre parameter must be > 0"));
    }
    let tv = t.value();
    let ft = t.falling_factorials(order);
    let lt = lambda * &tv;
    Ok(TruncatedSeries::from_fn(order, |k| {
        sign(k) * falling(&lt, k) * &ft[k] / (pow(&tv, k) * factorial(k))
    }))
}

/// `D_t H[-; a]`: coefficient `k` is `(-1)^k (t)_k t^k / ((ta)_k k!)`.
pub fn bessel_series(a: &Rational, t: &TParam, order: usize) -> Result<TruncatedSeries> {
    let spec = HypergeometricSpec::new(vec![], vec![a.clone()], t.clone())?;
    Ok(hypergeometric_series(&spec, order)?.dilate(&t.value()))
}

/// `H[b; a]`.
pub fn jacobi_series(b: &Rational, a: &Rational, t: &TParam, order: usize) -> Result<TruncatedSeries> {
    let spec = HypergeometricSpec::new(vec![b.clone()], vec![a.clone()], t.clone())?;
    hypergeometric_series(&spec, order)
}

/// Parameters of `H[b; a]` at a given `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct HypergeometricSpec {
    upper: Vec<Rational>,
    lower: Vec<Rational>,
    t: TParam,
}

#[derive(Clone, Serialize, Deserialize)]
struct SpecRepr {
    #[serde(with = "crate::rational::serde_vec")]
    upper: Vec<Rational>,
    #[serde(with = "crate::rational::serde_vec")]
    lower: Vec<Rational>,
    t: TParam,
}

impl TryFrom<SpecRepr> for HypergeometricSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        HypergeometricSpec::new(r.upper, r.lower, r.t)
    }
}

impl From<HypergeometricSpec> for SpecRepr {
    fn from(s: HypergeometricSpec) -> Self {
        SpecRepr {
            upper: s.upper,
            lower: s.lower,
            t: s.t,
        }
    }
}

impl HypergeometricSpec {
    /// Rejects lower parameters with `t a` a non-negative integer.
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, t: TParam) -> Result<Self> {
        let tv = t.value();
        if let Some(a) = lower.iter().find(|a| is_nonneg_integer(&(*a * &tv))) {
            return Err(Error::parameter(format!(
                "lower parameter {a} makes (t a)_k vanish"
            )));
        }
        Ok(HypergeometricSpec { upper, lower, t })
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn t(&self) -> &TParam {
        &self.t
    }

    /// `(-1)^{i+j+1}` for `i` lower and `j` upper parameters.
    pub fn closure_sign(&self) -> Rational {
        sign(self.upper.len() + self.lower.len() + 1)
    }
}

/// `sum (-1)^k (t)_k / k! * prod (t b)_k / prod (t a)_k z^k`.
pub fn hypergeometric_series(spec: &HypergeometricSpec, order: usize) -> Result<TruncatedSeries> {
    let tv = spec.t.value();
    let falling_t = spec.t.falling_factorials(order);
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if falling_t[k].is_zero() {
            coeffs.push(Rational::zero());
            continue;
        }
        let mut c = sign(k) * &falling_t[k] / factorial(k);
        for b in &spec.upper {
            c *= falling(&(b * &tv), k);
        }
        for a in &spec.lower {
            let den = falling(&(a * &tv), k);
            if den.is_zero() {
                return Err(Error::parameter("lower Pochhammer symbol vanishes"));
            }
            c /= den;
        }
        coeffs.push(c);
    }
    TruncatedSeries::new(coeffs, order)
}

/// Generalized hypergeometric `F(d; c; scale x) = sum (d)^k / (c)^k (scale x)^k / k!`
/// with rising factorials.
pub fn pfq_series(
    upper: &[Rational],
    lower: &[Rational],
    scale: &Rational,
    order: usize,
) -> Result<TruncatedSeries> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut c = pow(scale, k) / factorial(k);
        for d in upper {
            c *= rising(d, k);
        }
        for e in lower {
            let den = rising(e, k);
            if den.is_zero() {
                return Err(Error::parameter("lower rising factorial vanishes"));
            }
            c /= den;
        }
        coeffs.push(c);
    }
    TruncatedSeries::new(coeffs, order)
}

/// One factor of a closure instance: `spec` evaluated at `scale * z`.
#[derive(Clone, Debug)]
pub struct ClosureTerm {
    pub spec: HypergeometricSpec,
    pub scale: Rational,
}

impl ClosureTerm {
    pub fn new(spec: HypergeometricSpec, scale: Rational) -> Self {
        ClosureTerm { spec, scale }
    }

    pub fn unit(spec: HypergeometricSpec) -> Self {
        Self::new(spec, Rational::one())
    }

    fn pfq(&self, order: usize) -> Result<TruncatedSeries> {
        let tv = self.spec.t.value();
        let neg = |v: &[Rational]| v.iter().map(|x| -(x * &tv)).collect::<Vec<_>>();
        pfq_series(&neg(&self.spec.upper), &neg(&self.spec.lower), &self.scale, order)
    }

    fn signed(&self, order: usize) -> Result<TruncatedSeries> {
        let s = self.spec.closure_sign() * &self.scale;
        Ok(hypergeometric_series(&self.spec, order)?.dilate(&s))
    }
}

/// Both sides of the hypergeometric closure equivalence on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    /// `F_1(c_1 x) F_2(c_2 x) = F_3(c_3 x)` for the generalized series.
    pub product_identity: bool,
    /// `H_1(s_1 c_1 z) ⊞^t H_2(s_2 c_2 z) = H_3(s_3 c_3 z)`.
    pub convolution_identity: bool,
}

impl ClosureReport {
    pub fn consistent(&self) -> bool {
        self.product_identity == self.convolution_identity
    }
}

/// Evaluates both identities independently. The two factors and the result
/// must share `t`.
pub fn compare_closure(
    first: &ClosureTerm,
    second: &ClosureTerm,
    result: &ClosureTerm,
    order: usize,
) -> Result<ClosureReport> {
    let t = &first.spec.t;
    if &second.spec.t != t || &result.spec.t != t {
        return Err(Error::parameter("closure terms use different t"));
    }
    let product = first.pfq(order)?.mul(&second.pfq(order)?)?;
    let product_identity = product == result.pfq(order)?;
    let conv = tconv(&first.signed(order)?, &second.signed(order)?, t)?;
    let convolution_identity = conv == result.signed(order)?;
    Ok(ClosureReport {
        product_identity,
        convolution_identity,
    })
}

/// `ι_d(f)(z) = z^d f(1/z)`: the coefficients of `f`, leading first.
pub fn iota_d(f: &Poly) -> TruncatedSeries {
    TruncatedSeries::new(f.coeffs().to_vec(), f.degree()).expect("length matches degree")
}

/// [`iota_d`] padded or truncated to `order`.
pub fn iota_d_to_order(f: &Poly, order: usize) -> TruncatedSeries {
    iota_d(f).with_order(order)
}

/// Inverse of [`iota_d`]; the series must vanish above degree `d`.
pub fn iota_d_inv(a: &TruncatedSeries, d: usize) -> Result<Poly> {
    if a.support_degree().is_some_and(|top| top > d) {
        return Err(Error::domain(format!(
            "series is not supported in degrees <= {d}"
        )));
    }
    Poly::new((0..=d).map(|k| a.coeff(k)).collect())
}
