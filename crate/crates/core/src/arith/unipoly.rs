//! Polynomials in one coordinate `x` whose coefficients are [`MultiPoly`] values.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;

use super::{MultiPoly, Rational};

/// Integration bound: a fixed polynomial value (a rational or the symbol `T`)
/// or the running coordinate `x` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Value(MultiPoly),
    X,
}

impl Bound {
    pub fn rational(r: Rational) -> Self {
        Bound::Value(MultiPoly::constant(r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<MultiPoly>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: MultiPoly) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn x() -> Self {
        UniPoly::monomial(1, MultiPoly::one())
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: MultiPoly) -> Self {
        let mut coeffs = vec![MultiPoly::zero(); k + 1];
        coeffs[k] = c;
        UniPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<MultiPoly>) -> Self {
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> MultiPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn scale(&self, c: &MultiPoly) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation at a polynomial value.
    pub fn eval(&self, at: &MultiPoly) -> MultiPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(MultiPoly::zero(), |acc, c| &(&acc * at) + c)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> UniPoly {
        let mut coeffs = vec![MultiPoly::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&Rational::new(BigInt::from(1), BigInt::from(k + 1))));
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// `∫ self dx` between two bounds. A bound equal to `x` yields a polynomial in `x`.
    pub fn integrate(&self, lower: &Bound, upper: &Bound) -> UniPoly {
        let anti = self.antiderivative();
        let at = |b: &Bound| match b {
            Bound::X => anti.clone(),
            Bound::Value(v) => UniPoly::constant(anti.eval(v)),
        };
        &at(upper) - &at(lower)
    }

    /// `∫_lower^upper self dx` for fixed bounds.
    pub fn definite(&self, lower: &MultiPoly, upper: &MultiPoly) -> MultiPoly {
        let anti = self.antiderivative();
        &anti.eval(upper) - &anti.eval(lower)
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![MultiPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn constant(r: Rational) -> Bound {
        Bound::rational(r)
    }

    #[test]
    fn unit_integral() {
        let one = UniPoly::constant(MultiPoly::one());
        assert_eq!(
            one.definite(&MultiPoly::zero(), &MultiPoly::one()),
            MultiPoly::one()
        );
    }

    #[test]
    fn running_bound_gauge_profile() {
        // (p - q)s + qT integrated from 0 to x.
        let w = UniPoly::from_coeffs(vec![poly("qT"), poly("p - q")]);
        let got = w.integrate(&constant(int(0)), &Bound::X);
        let want = UniPoly::from_coeffs(vec![MultiPoly::zero(), poly("qT"), poly("1/2p - 1/2q")]);
        assert_eq!(got, want);
    }

    #[test]
    fn weighted_profile_on_unit_cell() {
        // p(s - 1) + q(2 - s) over [1, 2].
        let g = UniPoly::from_coeffs(vec![poly("-p + 2q"), poly("p - q")]);
        assert_eq!(
            g.definite(&MultiPoly::one(), &MultiPoly::from_int(2)),
            poly("1/2p + 1/2q")
        );
    }

    #[test]
    fn symbolic_upper_bound() {
        let g = UniPoly::x();
        assert_eq!(
            g.definite(&MultiPoly::zero(), &MultiPoly::t()),
            poly("1/2T^2")
        );
    }

    proptest! {
        #[test]
        fn additive_over_adjacent_intervals(
            cs in prop::collection::vec(-6i64..7, 0..5),
            a in -4i64..4, b in -4i64..4, c in -4i64..4,
        ) {
            let g = UniPoly::from_coeffs(cs.iter().map(|&k| MultiPoly::from_int(k) * MultiPoly::p()).collect());
            let (a, b, c) = (MultiPoly::from_int(a), MultiPoly::constant(rat(b, 3)), MultiPoly::from_int(c));
            prop_assert_eq!(&g.definite(&a, &b) + &g.definite(&b, &c), g.definite(&a, &c));
            let doubled = &g + &g;
            prop_assert_eq!(doubled.definite(&a, &c), g.definite(&a, &c).scale(&int(2)));
        }
    }
}
