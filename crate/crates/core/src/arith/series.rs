//! Truncated power series in `z` with [`MultiPoly`] coefficients.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{MultiPoly, Rational};
use crate::error::{Error, Result};

/// Power series known exactly through `z^order`.
///
/// Binary operations keep the smaller of the two operand orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<MultiPoly>,
    order: usize,
}

impl PowerSeries {
    /// Builds a series from leading coefficients; missing ones are zero, extra ones are dropped.
    pub fn new(mut coeffs: Vec<MultiPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        PowerSeries { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::new(vec![MultiPoly::one()], order)
    }

    pub fn z(order: usize) -> Self {
        PowerSeries::new(vec![MultiPoly::zero(), MultiPoly::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &MultiPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> PowerSeries {
        PowerSeries::new(
            self.coeffs[..=order.min(self.order)].to_vec(),
            order.min(self.order),
        )
    }

    pub fn scale(&self, c: &MultiPoly) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|a| a * c).collect(), self.order)
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn invert(&self) -> Result<PowerSeries> {
        let c0 = self.coeffs[0].as_constant().ok_or(Error::NotInvertible)?;
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut out = vec![MultiPoly::constant(inv0.clone())];
        for n in 1..=self.order {
            let acc: MultiPoly = (1..=n).map(|k| &self.coeffs[k] * &out[n - k]).sum();
            out.push(acc.scale(&-inv0.clone()));
        }
        Ok(PowerSeries::new(out, self.order))
    }

    /// Square root with constant term 1; requires the input's constant term to be 1.
    pub fn sqrt(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SqrtConstantTerm);
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut out = vec![MultiPoly::one()];
        for n in 1..=self.order {
            let cross: MultiPoly = (1..n).map(|k| &out[k] * &out[n - k]).sum();
            out.push((&self.coeffs[n] - &cross).scale(&half));
        }
        Ok(PowerSeries::new(out, self.order))
    }

    /// Formal derivative; known one order less than the input.
    pub fn derivative(&self) -> PowerSeries {
        let order = self.order.saturating_sub(1);
        let coeffs = (1..=self.order)
            .map(|k| self.coeffs[k].scale(&Rational::from_integer(BigInt::from(k))))
            .collect();
        PowerSeries::new(coeffs, order)
    }

    /// Multiplication by `z`; the result is known one order further.
    pub fn shift(&self) -> PowerSeries {
        let mut coeffs = vec![MultiPoly::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries::new(coeffs, self.order + 1)
    }

    pub fn pow(&self, e: u32) -> PowerSeries {
        (0..e).fold(PowerSeries::one(self.order), |acc, _| &acc * self)
    }

    /// First index where two series differ within their common order.
    pub fn first_difference(&self, other: &PowerSeries) -> Option<usize> {
        (0..=self.order.min(other.order)).find(|&n| self.coeffs[n] != other.coeffs[n])
    }
}

impl Add<&PowerSeries> for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        PowerSeries::new(
            (0..=order)
                .map(|n| &self.coeffs[n] + &rhs.coeffs[n])
                .collect(),
            order,
        )
    }
}

impl Sub<&PowerSeries> for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        PowerSeries::new(
            (0..=order)
                .map(|n| &self.coeffs[n] - &rhs.coeffs[n])
                .collect(),
            order,
        )
    }
}

impl Mul<&PowerSeries> for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|n| (0..=n).map(|k| &self.coeffs[k] * &rhs.coeffs[n - k]).sum())
            .collect();
        PowerSeries::new(coeffs, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn ints(cs: &[i64], order: usize) -> PowerSeries {
        PowerSeries::new(cs.iter().map(|&c| MultiPoly::from_int(c)).collect(), order)
    }

    #[test]
    fn geometric_series() {
        let s = ints(&[1, -1], 6);
        assert_eq!(s.invert().unwrap(), ints(&[1, 1, 1, 1, 1, 1, 1], 6));
        assert_eq!(PowerSeries::one(4).invert().unwrap(), PowerSeries::one(4));
    }

    #[test]
    fn non_invertible_constant_term() {
        assert_eq!(ints(&[0, 1], 3).invert(), Err(Error::NotInvertible));
        let symbolic = PowerSeries::new(vec![MultiPoly::p()], 3);
        assert_eq!(symbolic.invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn binomial_half_series() {
        // sqrt(1 - 2z) = 1 - z - z^2/2 - z^3/2 - 5z^4/8 - ...
        let s = ints(&[1, -2], 4).sqrt().unwrap();
        let want: Vec<MultiPoly> = [int(1), int(-1), rat(-1, 2), rat(-1, 2), rat(-5, 8)]
            .into_iter()
            .map(MultiPoly::constant)
            .collect();
        assert_eq!(s.coeffs(), &want[..]);
        assert_eq!(ints(&[2, 1], 3).sqrt(), Err(Error::SqrtConstantTerm));
    }

    #[test]
    fn sqrt_squares_back() {
        let s = ints(&[1, -4], 8);
        let r = s.sqrt().unwrap();
        assert_eq!(&r * &r, s);
    }

    #[test]
    fn orders_propagate() {
        let a = ints(&[1, 2, 3], 5);
        let b = ints(&[1, 1], 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!(a.derivative().order(), 4);
        assert_eq!(a.derivative().coeff(1), &MultiPoly::from_int(6));
        assert_eq!(a.shift().coeff(3), &MultiPoly::from_int(3));
    }

    fn arb_series() -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec((-4i64..5, 0u32..2), 1..6).prop_map(|cs| {
            let mut coeffs: Vec<MultiPoly> = cs
                .into_iter()
                .map(|(c, e)| MultiPoly::from_int(c) * MultiPoly::p().pow(e))
                .collect();
            coeffs[0] = MultiPoly::one();
            PowerSeries::new(coeffs, 6)
        })
    }

    proptest! {
        #[test]
        fn double_inverse_is_identity(s in arb_series()) {
            let back = s.invert().unwrap().invert().unwrap();
            prop_assert_eq!(back, s.clone());
            prop_assert_eq!(&s * &s.invert().unwrap(), PowerSeries::one(6));
        }

        #[test]
        fn sqrt_squared(s in arb_series()) {
            let r = s.sqrt().unwrap();
            prop_assert_eq!(&r * &r, s);
        }
    }
}
