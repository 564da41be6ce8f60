//! Sparse polynomials over the rationals in the formal variables `p`, `q` and `T`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{format_rational, rational_to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    P,
    Q,
    T,
}

/// Exponent triple `(deg_p, deg_q, deg_T)`.
///
/// The ordering is the canonical rendering order: total degree ascending, then
/// lexicographically descending in `(p, q, T)`, so `p^2` precedes `pq` precedes `q^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub p: u32,
    pub q: u32,
    pub t: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { p: 0, q: 0, t: 0 };

    pub fn new(p: u32, q: u32, t: u32) -> Self {
        Monomial { p, q, t }
    }

    pub fn degree(&self) -> u32 {
        self.p + self.q + self.t
    }

    pub fn get(&self, var: Var) -> u32 {
        match var {
            Var::P => self.p,
            Var::Q => self.q,
            Var::T => self.t,
        }
    }

    fn with(mut self, var: Var, e: u32) -> Self {
        match var {
            Var::P => self.p = e,
            Var::Q => self.q = e,
            Var::T => self.t = e,
        }
        self
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.p + other.p, self.q + other.q, self.t + other.t)
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.p <= other.p && self.q <= other.q && self.t <= other.t
    }

    fn div(self, other: Monomial) -> Monomial {
        Monomial::new(self.p - other.p, self.q - other.q, self.t - other.t)
    }

    /// Graded-lex key used as the monomial order for exact division.
    fn grlex(&self) -> (u32, u32, u32, u32) {
        (self.degree(), self.p, self.q, self.t)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| (other.p, other.q, other.t).cmp(&(self.p, self.q, self.t)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in [("p", self.p), ("q", self.q), ("T", self.t)] {
            match e {
                0 => {}
                1 => f.write_str(name)?,
                _ => write!(f, "{name}^{e}")?,
            }
        }
        Ok(())
    }
}

/// Exact polynomial in `p`, `q`, `T` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::term(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> Self {
        MultiPoly::constant(Rational::from_integer(c.into()))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(Rational::one(), Monomial::ONE.with(v, 1))
    }

    pub fn p() -> Self {
        MultiPoly::var(Var::P)
    }

    pub fn q() -> Self {
        MultiPoly::var(Var::Q)
    }

    pub fn t() -> Self {
        MultiPoly::var(Var::T)
    }

    /// `p^e q^e'`, the weight monomial of an ordered partition.
    pub fn pq_monomial(e: u32, e_prime: u32) -> Self {
        MultiPoly::term(Rational::one(), Monomial::new(e, e_prime, 0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::ONE)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.get(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: Var, k: u32) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.get(v) == k)
            .map(|(m, c)| (m.with(v, 0), c.clone()))
            .collect();
        MultiPoly { terms }
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let terms = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        MultiPoly { terms }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates every variable at an exact rational point.
    pub fn eval(&self, p: &Rational, q: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                c * num_traits::pow(p.clone(), m.p as usize)
                    * num_traits::pow(q.clone(), m.q as usize)
                    * num_traits::pow(t.clone(), m.t as usize)
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Substitutes rational values for `p` and `q`, leaving `T` symbolic.
    pub fn eval_pq(&self, p: &Rational, q: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let v = c
                * num_traits::pow(p.clone(), m.p as usize)
                * num_traits::pow(q.clone(), m.q as usize);
            out.add_term(Monomial::new(0, 0, m.t), v);
        }
        out
    }

    pub fn eval_f64(&self, p: f64, q: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                rational_to_f64(c) * p.powi(m.p as i32) * q.powi(m.q as i32) * t.powi(m.t as i32)
            })
            .sum()
    }

    /// Replaces every occurrence of `v` by the polynomial `value`.
    pub fn substitute(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let rest = MultiPoly::term(c.clone(), m.with(v, 0));
            out += &(&rest * &value.pow(m.get(v)));
        }
        out
    }

    /// Exchanges `p` and `q`.
    pub fn swap_pq(&self) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial::new(m.q, m.p, m.t), c.clone()))
            .collect();
        MultiPoly { terms }
    }

    fn leading(&self) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by_key(|(m, _)| m.grlex())
            .map(|(m, c)| (*m, c.clone()))
    }

    /// Exact quotient `self / divisor`; fails unless the remainder is zero.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        let (lead_m, lead_c) = divisor
            .leading()
            .ok_or_else(|| Error::InexactDivision("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quotient = MultiPoly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lead_m.divides(&m) {
                return Err(Error::InexactDivision(format!("{self} by {divisor}")));
            }
            let t = MultiPoly::term(c / &lead_c, m.div(lead_m));
            rem -= &(&t * divisor);
            quotient += &t;
        }
        Ok(quotient)
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if *m == Monomial::ONE {
                f.write_str(&format_rational(&magnitude))?;
            } else {
                if !magnitude.is_one() {
                    f.write_str(&format_rational(&magnitude))?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    /// Parses the canonical rendering (and any sum of terms in the same notation).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = MultiPoly::zero();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^')
            {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (c, m) = parse_term(piece)?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

fn parse_term(piece: &str) -> Result<(Rational, Monomial)> {
    let bad = || Error::Parse(format!("bad polynomial term {piece:?}"));
    let (sign, body) = match piece.as_bytes().first() {
        Some(b'-') => (-Rational::one(), &piece[1..]),
        Some(b'+') => (Rational::one(), &piece[1..]),
        _ => (Rational::one(), piece),
    };
    let split = body
        .find(|c: char| c.is_ascii_alphabetic())
        .unwrap_or(body.len());
    let (coef_text, vars) = body.split_at(split);
    let coef = if coef_text.is_empty() {
        if vars.is_empty() {
            return Err(bad());
        }
        Rational::one()
    } else {
        super::parse_rational(coef_text).map_err(|_| bad())?
    };
    let mut m = Monomial::ONE;
    let chars: Vec<char> = vars.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let var = match chars[i] {
            'p' => Var::P,
            'q' => Var::Q,
            'T' | 't' => Var::T,
            _ => return Err(bad()),
        };
        i += 1;
        let mut e = 1u32;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            e = chars[begin..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| bad())?;
        }
        m = m.with(var, m.get(var) + e);
    }
    Ok((sign * coef, m))
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect();
        MultiPoly { terms }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly { (&self).$method(&rhs) }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly { (&self).$method(rhs) }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly { self.$method(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}
