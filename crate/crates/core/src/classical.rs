//! Moment series of concrete laws and classical convolution at `t = -1`.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pochhammer::rising;
use crate::rational::{factorial, int, pow, Rational};
use crate::series::TruncatedSeries;
use crate::special::HypergeometricSpec;
use crate::tconv::{tconv, TParam};

/// A finitely supported probability law with rational atoms and weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LawRepr", into = "LawRepr")]
pub struct DiscreteLaw {
    atoms: Vec<(Rational, Rational)>,
}

#[derive(Clone, Serialize, Deserialize)]
struct LawRepr {
    #[serde(with = "crate::rational::serde_pairs")]
    atoms: Vec<(Rational, Rational)>,
}

impl TryFrom<LawRepr> for DiscreteLaw {
    type Error = Error;

    fn try_from(r: LawRepr) -> Result<Self> {
        DiscreteLaw::new(r.atoms)
    }
}

impl From<DiscreteLaw> for LawRepr {
    fn from(l: DiscreteLaw) -> Self {
        LawRepr { atoms: l.atoms }
    }
}

impl DiscreteLaw {
    /// Weights must be positive and sum to 1.
    pub fn new(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        if atoms.iter().any(|(_, w)| !w.is_positive()) {
            return Err(Error::domain("atom weights must be positive"));
        }
        let total: Rational = atoms.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(Error::domain(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteLaw { atoms })
    }

    pub fn point_mass(x: Rational) -> Self {
        DiscreteLaw {
            atoms: vec![(x, Rational::one())],
        }
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }
}

/// `m_k = sum w_i x_i^k`.
pub fn moments_discrete(law: &DiscreteLaw, order: usize) -> TruncatedSeries {
    let mut m = vec![Rational::zero(); order + 1];
    for (x, w) in &law.atoms {
        let mut p = w.clone();
        for mk in m.iter_mut() {
            *mk += &p;
            p *= x;
        }
    }
    TruncatedSeries::new(m, order).expect("length matches order")
}

/// Moment series of `X + Y` for independent `X`, `Y`: `M_X ⊞^{-1} M_Y`.
pub fn classical_conv(mx: &TruncatedSeries, my: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !mx.coeff(0).is_one() || !my.coeff(0).is_one() {
        return Err(Error::domain("moment series must start with m_0 = 1"));
    }
    tconv(mx, my, &TParam::classical())
}

/// Moments of `Ga(b)`: `(b)^k` (rising).
pub fn gamma_moments(b: &Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |k| rising(b, k))
}

/// Moments of `N(0, v)`: `(2k-1)!! v^k` in even degrees.
pub fn normal_moments(variance: &Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| {
        if n % 2 == 1 {
            return Rational::zero();
        }
        let k = n / 2;
        factorial(n) / (factorial(k) * pow(&int(2), k)) * pow(variance, k)
    })
}

/// Product of independent `Beta(b, a - b)` and `Ga(b)` factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MixtureRepr", into = "MixtureRepr")]
pub struct MixtureSpec {
    beta: Vec<(Rational, Rational)>,
    gamma: Vec<Rational>,
}

#[derive(Clone, Serialize, Deserialize)]
struct MixtureRepr {
    #[serde(with = "crate::rational::serde_pairs", default)]
    beta: Vec<(Rational, Rational)>,
    #[serde(with = "crate::rational::serde_vec", default)]
    gamma: Vec<Rational>,
}

impl TryFrom<MixtureRepr> for MixtureSpec {
    type Error = Error;

    fn try_from(r: MixtureRepr) -> Result<Self> {
        MixtureSpec::new(r.beta, r.gamma)
    }
}

impl From<MixtureSpec> for MixtureRepr {
    fn from(s: MixtureSpec) -> Self {
        MixtureRepr {
            beta: s.beta,
            gamma: s.gamma,
        }
    }
}

impl MixtureSpec {
    /// `beta` holds `(b, a)` pairs with `0 < b < a`; `gamma` holds shapes `b > 0`.
    pub fn new(beta: Vec<(Rational, Rational)>, gamma: Vec<Rational>) -> Result<Self> {
        for (b, a) in &beta {
            if !b.is_positive() || !(a - b).is_positive() {
                return Err(Error::domain(format!("beta pair ({b}, {a}) needs 0 < b < a")));
            }
        }
        if let Some(b) = gamma.iter().find(|b| !b.is_positive()) {
            return Err(Error::domain(format!("gamma shape {b} must be > 0")));
        }
        Ok(MixtureSpec { beta, gamma })
    }

    pub fn beta(&self) -> &[(Rational, Rational)] {
        &self.beta
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }

    /// The matching hypergeometric parameters at `t = -1`. The number of
    /// gamma factors must be even, otherwise the series differs from the
    /// moment series by the sign `(-1)^k`.
    pub fn to_hypergeometric(&self) -> Result<HypergeometricSpec> {
        if self.gamma.len() % 2 != 0 {
            return Err(Error::domain(
                "an odd number of gamma factors has no sign-free hypergeometric form",
            ));
        }
        let upper = self
            .beta
            .iter()
            .map(|(b, _)| b.clone())
            .chain(self.gamma.iter().cloned())
            .collect();
        let lower = self.beta.iter().map(|(_, a)| a.clone()).collect();
        HypergeometricSpec::new(upper, lower, TParam::classical())
    }
}

/// `m_k = prod (b_s)^k / prod (a_r)^k` with rising factorials.
pub fn mixture_moments(spec: &MixtureSpec, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |k| {
        let num: Rational = spec
            .beta
            .iter()
            .map(|(b, _)| b)
            .chain(&spec.gamma)
            .map(|b| rising(b, k))
            .product();
        let den: Rational = spec.beta.iter().map(|(_, a)| rising(a, k)).product();
        num / den
    })
}

/// Real-form cumulants of the background driving process at time `s`:
/// `c_n ↦ s n c_n`.
pub fn bdlp_cumulants(c: &[Rational], s: &Rational) -> Result<Vec<Rational>> {
    if s.is_negative() {
        return Err(Error::domain("time must be >= 0"));
    }
    Ok(c
        .iter()
        .enumerate()
        .map(|(i, cn)| s * int(i as i64 + 1) * cn)
        .collect())
}
