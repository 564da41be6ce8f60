//! Symbolic Fock engine over functions `g(x)·χ_I` on a fixed family of disjoint intervals.
//!
//! A vector is a finite combination of words of cells `x^k χ_I`; the vacuum is the empty
//! word. Operators act on the first cell only, so every coefficient stays an exact
//! polynomial in `p`, `q` and, for the single interval `[0, T]`, the symbol `T`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Bound, MultiPoly, UniPoly};
use crate::error::{Error, Result};
use crate::partition::IntervalFamily;

/// The monomial cell `x^power · χ_{I_interval}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub interval: usize,
    pub power: usize,
}

/// `poly(x) · χ_I`, with `I` given by its index in the engine's family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellFunction {
    pub interval: usize,
    pub poly: UniPoly,
}

impl CellFunction {
    pub fn new(interval: usize, poly: UniPoly) -> Self {
        CellFunction { interval, poly }
    }

    pub fn indicator(interval: usize) -> Self {
        CellFunction {
            interval,
            poly: UniPoly::constant(MultiPoly::one()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<Vec<Cell>, MultiPoly>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    /// `Ω`.
    pub fn vacuum() -> Self {
        FockVector::from_term(Vec::new(), MultiPoly::one())
    }

    pub fn from_term(word: Vec<Cell>, coefficient: MultiPoly) -> Self {
        let mut v = FockVector::zero();
        v.add_term(word, coefficient);
        v
    }

    /// Adds `coefficient · word`, dropping the word if its coefficient cancels.
    pub fn add_term(&mut self, word: Vec<Cell>, coefficient: MultiPoly) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &coefficient;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &FockVector) {
        for (word, c) in &other.terms {
            self.add_term(word.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> FockVector {
        let mut out = FockVector::zero();
        for (word, a) in &self.terms {
            out.add_term(word.clone(), a * c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Cell], &MultiPoly)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `Ω`.
    pub fn vacuum_amplitude(&self) -> MultiPoly {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn max_particles(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Keeps only words with at most `n` cells.
    pub fn truncate_particles(&mut self, n: usize) {
        self.terms.retain(|w, _| w.len() <= n);
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (word, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if word.is_empty() {
                f.write_str("Ω")?;
            }
            for (j, cell) in word.iter().enumerate() {
                f.write_str(if j == 0 { "·" } else { "⊛" })?;
                match cell.power {
                    0 => write!(f, "χ{}", cell.interval)?,
                    1 => write!(f, "xχ{}", cell.interval)?,
                    k => write!(f, "x^{k}χ{}", cell.interval)?,
                }
            }
        }
        Ok(())
    }
}

/// Adds `coefficient · (factor·χ_interval) ⊛ tail`, expanded into monomial cells.
fn push_product(
    out: &mut FockVector,
    factor: &UniPoly,
    interval: usize,
    tail: &[Cell],
    coefficient: &MultiPoly,
) {
    for (k, c) in factor.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut word = Vec::with_capacity(tail.len() + 1);
        word.push(Cell { interval, power: k });
        word.extend_from_slice(tail);
        out.add_term(word, coefficient * c);
    }
}

fn x_power(k: usize) -> UniPoly {
    UniPoly::monomial(k, MultiPoly::one())
}

/// Operator engine over a registered family of pairwise disjoint, increasingly ordered intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockEngine {
    bounds: Vec<(MultiPoly, MultiPoly)>,
}

impl FockEngine {
    pub fn new(family: &IntervalFamily) -> Self {
        let bounds = family
            .intervals()
            .iter()
            .map(|iv| {
                (
                    MultiPoly::constant(iv.lo.clone()),
                    MultiPoly::constant(iv.hi.clone()),
                )
            })
            .collect();
        FockEngine { bounds }
    }

    /// Consecutive intervals `[0, λ_1], [λ_1, λ_1 + λ_2], …`.
    pub fn from_lengths(lengths: &[crate::arith::Rational]) -> Self {
        let mut lo = MultiPoly::zero();
        let mut bounds = Vec::new();
        for len in lengths {
            let hi = &lo + &MultiPoly::constant(len.clone());
            bounds.push((lo, hi.clone()));
            lo = hi;
        }
        FockEngine { bounds }
    }

    /// The single interval `[0, T]` with symbolic `T`.
    pub fn poisson() -> Self {
        FockEngine {
            bounds: vec![(MultiPoly::zero(), MultiPoly::t())],
        }
    }

    pub fn interval_count(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self, interval: usize) -> Result<&(MultiPoly, MultiPoly)> {
        self.bounds
            .get(interval)
            .ok_or(Error::UnknownInterval(interval))
    }

    pub fn length(&self, interval: usize) -> Result<MultiPoly> {
        let (lo, hi) = self.bounds(interval)?;
        Ok(hi - lo)
    }

    /// `u ↦ ∫ g(s) w(s, u) ds` for `u` in the cell `next`, with `g` supported on `interval`.
    fn kernel(&self, g: &UniPoly, interval: usize, next: usize) -> Result<UniPoly> {
        let (lo, hi) = self.bounds(interval)?;
        Ok(match next.cmp(&interval) {
            std::cmp::Ordering::Equal => {
                let below = g.integrate(&Bound::Value(lo.clone()), &Bound::X);
                let above = g.integrate(&Bound::X, &Bound::Value(hi.clone()));
                &below.scale(&MultiPoly::p()) + &above.scale(&MultiPoly::q())
            }
            std::cmp::Ordering::Greater => UniPoly::constant(&g.definite(lo, hi) * &MultiPoly::p()),
            std::cmp::Ordering::Less => UniPoly::constant(&g.definite(lo, hi) * &MultiPoly::q()),
        })
    }

    /// Creation `a(f)`: prepends `f` to every word.
    pub fn create(&self, f: &CellFunction, v: &FockVector) -> Result<FockVector> {
        self.bounds(f.interval)?;
        let mut out = FockVector::zero();
        for (word, c) in v.terms() {
            push_product(&mut out, &f.poly, f.interval, word, c);
        }
        Ok(out)
    }

    /// Annihilation `a*(f)`: pairs the first cell with `f` and feeds the weighted
    /// integral into the next cell, or into `Ω` when the word has one cell.
    pub fn annihilate(&self, f: &CellFunction, v: &FockVector) -> Result<FockVector> {
        let (lo, hi) = self.bounds(f.interval)?;
        let mut out = FockVector::zero();
        for (word, c) in v.terms() {
            let Some((first, rest)) = word.split_first() else {
                continue;
            };
            if first.interval != f.interval {
                continue;
            }
            let integrand = &x_power(first.power) * &f.poly;
            match rest.first() {
                None => out.add_term(Vec::new(), c * &integrand.definite(lo, hi)),
                Some(next) => {
                    let h = self.kernel(&integrand, f.interval, next.interval)?;
                    push_product(
                        &mut out,
                        &(&h * &x_power(next.power)),
                        next.interval,
                        &rest[1..],
                        c,
                    );
                }
            }
        }
        Ok(out)
    }

    /// `M(f, g)`: the operator `a*(g) a(f)` written without the intermediate word.
    pub fn pair_gauge(
        &self,
        f: &CellFunction,
        g: &CellFunction,
        v: &FockVector,
    ) -> Result<FockVector> {
        self.bounds(f.interval)?;
        self.bounds(g.interval)?;
        if f.interval != g.interval {
            return Ok(FockVector::zero());
        }
        let fg = &f.poly * &g.poly;
        let mut out = FockVector::zero();
        for (word, c) in v.terms() {
            match word.first() {
                None => {
                    let (lo, hi) = self.bounds(f.interval)?;
                    out.add_term(Vec::new(), c * &fg.definite(lo, hi));
                }
                Some(first) => {
                    let h = self.kernel(&fg, f.interval, first.interval)?;
                    push_product(
                        &mut out,
                        &(&h * &x_power(first.power)),
                        first.interval,
                        &word[1..],
                        c,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Gauge `M(h)`: multiplies the first cell by `h`; `Ω` is scaled by `vacuum_value`.
    pub fn gauge_m(
        &self,
        h: &CellFunction,
        vacuum_value: &MultiPoly,
        v: &FockVector,
    ) -> Result<FockVector> {
        self.bounds(h.interval)?;
        let mut out = FockVector::zero();
        for (word, c) in v.terms() {
            match word.split_first() {
                None => out.add_term(Vec::new(), c * vacuum_value),
                Some((first, rest)) if first.interval == h.interval => {
                    push_product(
                        &mut out,
                        &(&h.poly * &x_power(first.power)),
                        first.interval,
                        rest,
                        c,
                    );
                }
                Some(_) => {}
            }
        }
        Ok(out)
    }

    /// `n_J = a*(χ_J) a(χ_J)`: `Ω ↦ λ(J) Ω`, first cell multiplied by `∫_J w(s, u) ds`.
    pub fn gauge_n(&self, interval: usize, v: &FockVector) -> Result<FockVector> {
        let chi = CellFunction::indicator(interval);
        self.pair_gauge(&chi, &chi, v)
    }

    /// `ω(f) = a*(f) + a(f)`.
    pub fn position(&self, f: &CellFunction, v: &FockVector) -> Result<FockVector> {
        let mut out = self.annihilate(f, v)?;
        out.add(&self.create(f, v)?);
        Ok(out)
    }
}
