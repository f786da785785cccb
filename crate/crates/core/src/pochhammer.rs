//! Falling and rising factorials.

use num::{One, Zero};

use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PochhammerKind {
    /// `x (x-1) ... (x-k+1)`
    Falling,
    /// `x (x+1) ... (x+k-1)`
    Rising,
}

impl PochhammerKind {
    pub fn eval(self, x: &Rational, k: usize) -> Rational {
        match self {
            PochhammerKind::Falling => falling(x, k),
            PochhammerKind::Rising => rising(x, k),
        }
    }

    /// Values for `k = 0..=n`.
    pub fn table(self, x: &Rational, n: usize) -> Vec<Rational> {
        let step = match self {
            PochhammerKind::Falling => -1,
            PochhammerKind::Rising => 1,
        };
        let mut out = Vec::with_capacity(n + 1);
        let mut acc = Rational::one();
        out.push(acc.clone());
        for i in 0..n {
            acc *= x + int(step * i as i64);
            out.push(acc.clone());
        }
        out
    }
}

pub fn falling(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (x - int(i as i64)))
}

pub fn rising(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (x + int(i as i64)))
}

/// Falling factorial table `(x)_0, ..., (x)_n`.
pub fn falling_table(x: &Rational, n: usize) -> Vec<Rational> {
    PochhammerKind::Falling.table(x, n)
}

/// True when `x` is a non-negative integer, i.e. some `(x)_k` vanishes.
pub fn is_nonneg_integer(x: &Rational) -> bool {
    x.is_integer() && *x >= Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn small_values() {
        assert_eq!(falling(&int(5), 3), int(60));
        assert_eq!(falling(&int(-1), 4), int(24));
        assert_eq!(falling(&int(3), 4), int(0));
        assert_eq!(rising(&int(1), 4), int(24));
        assert_eq!(rising(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(falling(&rat(7, 3), 0), int(1));
    }

    #[test]
    fn falling_of_negated_is_signed_rising() {
        let a = rat(5, 7);
        for k in 0..8 {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(falling(&-a.clone(), k), sign * rising(&a, k));
        }
    }

    #[test]
    fn tables_match_pointwise() {
        let x = rat(-3, 2);
        let f = falling_table(&x, 6);
        let r = PochhammerKind::Rising.table(&x, 6);
        for k in 0..=6 {
            assert_eq!(f[k], falling(&x, k));
            assert_eq!(r[k], rising(&x, k));
        }
    }
}
