//! Interval signatures: which of the functions `f_1, …, f_n` share a support.
//!
//! Supports are intervals that are pairwise identical or disjoint (touching at an
//! endpoint counts as disjoint). Anything else is rejected when the family is built.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo.is_negative() || hi <= lo {
            return Err(Error::Signature(format!(
                "interval [{}, {}] must satisfy 0 <= lo < hi",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn disjoint(&self, other: &Interval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }

    /// Parses `[a,b]` with rational or decimal endpoints.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {text:?}")))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {text:?}")))?;
        Interval::new(parse_rational(lo)?, parse_rational(hi)?)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// Distinct, pairwise disjoint intervals sorted increasingly (`I_1 < … < I_r`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalFamily {
    intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn new(intervals: impl IntoIterator<Item = Interval>) -> Result<Self> {
        let mut distinct: Vec<Interval> = Vec::new();
        for iv in intervals {
            if distinct.contains(&iv) {
                continue;
            }
            if let Some(clash) = distinct.iter().find(|other| !other.disjoint(&iv)) {
                return Err(Error::OverlappingIntervals(
                    clash.to_string(),
                    iv.to_string(),
                ));
            }
            distinct.push(iv);
        }
        distinct.sort_by(|a, b| a.lo.cmp(&b.lo));
        Ok(IntervalFamily {
            intervals: distinct,
        })
    }

    /// `r` consecutive unit intervals `[0,1] < [1,2] < …`.
    pub fn unit(r: usize) -> Self {
        let intervals = (0..r)
            .map(|i| {
                let lo = Rational::from_integer(i.into());
                Interval {
                    hi: &lo + Rational::one(),
                    lo,
                }
            })
            .collect();
        IntervalFamily { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn rank_of(&self, interval: &Interval) -> Option<usize> {
        self.intervals.iter().position(|iv| iv == interval)
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.intervals.iter().map(Interval::length).collect()
    }
}

/// For each position `j`, the rank of the interval carrying `f_j`, plus the lengths
/// `λ(I_1), …, λ(I_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSignature {
    assignment: Vec<usize>,
    lengths: Vec<Rational>,
}

impl IntervalSignature {
    pub fn from_ranks(assignment: Vec<usize>, lengths: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = lengths.iter().find(|l| !l.is_positive()) {
            return Err(Error::Signature(format!(
                "non-positive length {}",
                format_rational(bad)
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&r| r >= lengths.len()) {
            return Err(Error::Signature(format!(
                "interval rank {bad} has no length"
            )));
        }
        Ok(IntervalSignature {
            assignment,
            lengths,
        })
    }

    /// All `n` functions on one unit interval.
    pub fn uniform(n: usize) -> Self {
        IntervalSignature {
            assignment: vec![0; n],
            lengths: vec![Rational::one()],
        }
    }

    pub fn from_family(family: &IntervalFamily, assignment: Vec<usize>) -> Result<Self> {
        IntervalSignature::from_ranks(assignment, family.lengths())
    }

    /// Parses a whitespace-separated name list such as `"f f g g f f"` against
    /// definitions `"g=[0,1],f=[1,2]"`.
    pub fn parse(signature: &str, intervals: &str) -> Result<(IntervalFamily, Self)> {
        let mut named: BTreeMap<String, Interval> = BTreeMap::new();
        let mut rest = intervals.trim();
        while !rest.is_empty() {
            let (name, tail) = rest
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected name=[lo,hi] in {intervals:?}")))?;
            let tail = tail.trim_start();
            let close = tail
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated interval in {intervals:?}")))?;
            let interval = Interval::parse(&tail[..=close])?;
            named.insert(name.trim().to_string(), interval);
            rest = tail[close + 1..]
                .trim_start()
                .trim_start_matches(',')
                .trim_start();
        }
        let family = IntervalFamily::new(named.values().cloned())?;
        let assignment = signature
            .split_whitespace()
            .map(|name| {
                named
                    .get(name)
                    .and_then(|iv| family.rank_of(iv))
                    .ok_or_else(|| Error::Signature(format!("undefined interval name {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if assignment.is_empty() {
            return Err(Error::Signature("empty signature".into()));
        }
        let sig = IntervalSignature::from_family(&family, assignment)?;
        Ok((family, sig))
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    /// `b_i`: half the number of positions on interval `i`; `None` if some count is odd.
    pub fn multiplicities(&self) -> Option<Vec<usize>> {
        let mut counts = vec![0usize; self.lengths.len()];
        for &r in &self.assignment {
            counts[r] += 1;
        }
        if counts.iter().any(|c| c % 2 == 1) {
            return None;
        }
        Some(counts.into_iter().map(|c| c / 2).collect())
    }

    /// `Π λ(I_i)^{b_i} / b_i!`, or zero when some interval is used an odd number of times.
    pub fn measure_factor(&self) -> Rational {
        let Some(b) = self.multiplicities() else {
            return Rational::zero();
        };
        b.iter()
            .zip(&self.lengths)
            .fold(Rational::one(), |acc, (&bi, len)| {
                acc * num_traits::pow(len.clone(), bi)
                    / Rational::from_integer(crate::arith::factorial(bi))
            })
    }
}
