//! Polynomials of a fixed formal degree, stored leading coefficient first.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// `f(x) = sum_{i=0}^{d} a_i x^{d-i}` with `coeffs = [a_0, ..., a_d]`.
///
/// The formal degree `d` is part of the value: `x` as a cubic is
/// `[0, 0, 1, 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct Poly {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    degree: usize,
    coeffs: Vec<String>,
}

impl TryFrom<PolyRepr> for Poly {
    type Error = Error;

    fn try_from(r: PolyRepr) -> Result<Self> {
        if r.coeffs.len() != r.degree + 1 {
            return Err(Error::TruncationMismatch {
                left: r.coeffs.len().saturating_sub(1),
                right: r.degree,
            });
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Poly::new(coeffs)
    }
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> Self {
        PolyRepr {
            degree: p.degree(),
            coeffs: p.coeffs.iter().map(format_rational).collect(),
        }
    }
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("polynomial needs at least one coefficient"));
        }
        Ok(Poly { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut coeffs = vec![Rational::one()];
        for r in roots {
            let mut next = coeffs.clone();
            next.push(Rational::zero());
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] -= c * r;
            }
            coeffs = next;
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs[0].is_one()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Derivative kept at the same formal degree (leading entry becomes 0).
    pub fn derivative(&self) -> Poly {
        let d = self.degree();
        let mut coeffs = vec![Rational::zero(); d + 1];
        for i in 0..d {
            coeffs[i + 1] = &self.coeffs[i] * int((d - i) as i64);
        }
        Poly { coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.degree();
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match d - i {
                0 => format_rational(c),
                1 => format!("{}x", format_rational(c)),
                e => format!("{}x^{e}", format_rational(c)),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
