//! Discrete Fock space over `ℂ^N`: exact word moments and the finite-`N` central limit moments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, factorial, MultiPoly, Rational};
use crate::error::{Error, Result};

/// Longest index word accepted by [`discrete_word_moment`].
pub const MAX_WORD: usize = 12;

/// `w_{ij}`: `p` if `i < j`, `q` if `i > j`, `1` if equal.
pub fn discrete_weight(i: usize, j: usize) -> MultiPoly {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => MultiPoly::p(),
        std::cmp::Ordering::Greater => MultiPoly::q(),
        std::cmp::Ordering::Equal => MultiPoly::one(),
    }
}

/// Amplitudes on basis words `e_{i_1} ⊗ ⋯ ⊗ e_{i_k}`; the empty word is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiscreteState {
    terms: BTreeMap<Vec<usize>, MultiPoly>,
}

impl DiscreteState {
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), MultiPoly::one());
        DiscreteState { terms }
    }

    fn add_term(&mut self, word: Vec<usize>, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(word).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vacuum_amplitude(&self) -> MultiPoly {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `A_i`: prepends `e_i`.
    pub fn create(&self, i: usize) -> DiscreteState {
        let mut out = DiscreteState::default();
        for (word, c) in &self.terms {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(i);
            w.extend_from_slice(word);
            out.add_term(w, c.clone());
        }
        out
    }

    /// `A_i*`: removes a leading `e_i`, weighted by `w_{i, i_2}` when a second factor exists.
    pub fn annihilate(&self, i: usize) -> DiscreteState {
        let mut out = DiscreteState::default();
        for (word, c) in &self.terms {
            match word.as_slice() {
                [first, rest @ ..] if *first == i => {
                    let w = rest
                        .first()
                        .map_or_else(MultiPoly::one, |&next| discrete_weight(i, next));
                    out.add_term(rest.to_vec(), c * &w);
                }
                _ => {}
            }
        }
        out
    }

    /// `ω_i = A_i + A_i*`.
    pub fn position(&self, i: usize) -> DiscreteState {
        let mut out = self.create(i);
        for (word, c) in self.annihilate(i).terms {
            out.add_term(word, c);
        }
        out
    }

    fn truncate(&mut self, n: usize) {
        self.terms.retain(|w, _| w.len() <= n);
    }
}

/// `φ(ω_{i_1} ⋯ ω_{i_k})` by direct evolution from the vacuum; indices are `1..=N`.
pub fn discrete_word_moment(indices: &[usize], n_sites: usize) -> Result<MultiPoly> {
    if indices.len() > MAX_WORD {
        return Err(Error::LimitExceeded {
            what: "discrete word length",
            value: indices.len(),
            limit: MAX_WORD,
        });
    }
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n_sites) {
        return Err(Error::Parameters(format!(
            "index {bad} outside 1..={n_sites}"
        )));
    }
    Ok(word_moment(indices))
}

fn word_moment(indices: &[usize]) -> MultiPoly {
    let mut state = DiscreteState::vacuum();
    for (step, &i) in indices.iter().enumerate().rev() {
        state = state.position(i);
        state.truncate(step);
        if state.is_empty() {
            return MultiPoly::zero();
        }
    }
    state.vacuum_amplitude()
}

/// Surjective words `[n] → [r]`, i.e. ordered set partitions of `n` positions into `r` blocks.
pub fn order_patterns(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    fn rec(pos: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == word.len() {
            let max = word.iter().copied().max().unwrap_or(0);
            let mut seen = vec![false; max + 1];
            for &v in word.iter() {
                seen[v] = true;
            }
            if seen[1..].iter().all(|&s| s) {
                out.push(word.clone());
            }
            return;
        }
        for v in 1..=word.len() {
            word[pos] = v;
            rec(pos + 1, word, out);
        }
    }
    if n > 0 {
        rec(0, &mut word, &mut out);
    }
    out
}

/// `M_r`: the sum of word moments over order patterns with `r` distinct values, for `r = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CltExpansion {
    pub n: usize,
    pub pattern_count: usize,
    pub pattern_moments: Vec<MultiPoly>,
}

impl CltExpansion {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_WORD {
            return Err(Error::LimitExceeded {
                what: "central limit moment",
                value: n,
                limit: MAX_WORD,
            });
        }
        let mut pattern_moments = vec![MultiPoly::zero(); n + 1];
        let patterns = order_patterns(n);
        for pattern in &patterns {
            let r = pattern.iter().copied().max().unwrap_or(0);
            pattern_moments[r] += &word_moment(pattern);
        }
        Ok(CltExpansion {
            n,
            pattern_count: patterns.len(),
            pattern_moments,
        })
    }

    /// `φ(S_N^n) = N^{-n/2} Σ_r C(N, r) M_r`; zero for odd `n`.
    pub fn at(&self, n_sites: usize) -> MultiPoly {
        if self.n % 2 == 1 {
            return MultiPoly::zero();
        }
        let scale = Rational::new(
            BigInt::one(),
            BigInt::from(n_sites).pow((self.n / 2) as u32),
        );
        let total: MultiPoly = self
            .pattern_moments
            .iter()
            .enumerate()
            .map(|(r, m)| m.scale(&Rational::from_integer(binomial(n_sites as i64, r as i64))))
            .sum();
        total.scale(&scale)
    }

    /// Coefficients of `φ(S_N^n)` as a Laurent polynomial in `N`, keyed by exponent.
    pub fn laurent(&self) -> BTreeMap<i64, MultiPoly> {
        let mut out: BTreeMap<i64, MultiPoly> = BTreeMap::new();
        if self.n % 2 == 1 {
            return out;
        }
        let half = (self.n / 2) as i64;
        let stirling = signed_stirling_first(self.n);
        for (r, m) in self.pattern_moments.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let inv = Rational::new(BigInt::one(), factorial(r));
            for (j, s) in stirling[r].iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let c = m.scale(&(Rational::from_integer(s.clone()) * &inv));
                *out.entry(j as i64 - half).or_default() += &c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// The `N → ∞` value read from [`laurent`](Self::laurent); errors if a positive power survives.
    pub fn limit(&self) -> Result<MultiPoly> {
        let laurent = self.laurent();
        if let Some((k, c)) = laurent.iter().find(|(k, _)| **k > 0) {
            return Err(Error::Mismatch {
                check: format!("central limit n={}", self.n),
                detail: format!("coefficient of N^{k} is {c}"),
            });
        }
        Ok(laurent.get(&0).cloned().unwrap_or_default())
    }
}

/// `s(r, j)` with `x(x-1)⋯(x-r+1) = Σ_j s(r, j) x^j`.
fn signed_stirling_first(n: usize) -> Vec<Vec<BigInt>> {
    let mut table = vec![vec![BigInt::zero(); n + 1]; n + 1];
    table[0][0] = BigInt::one();
    for r in 0..n {
        for j in 0..=r {
            let cur = table[r][j].clone();
            if cur.is_zero() {
                continue;
            }
            table[r + 1][j + 1] += &cur;
            table[r + 1][j] -= cur * BigInt::from(r);
        }
    }
    table
}

/// Exact `φ(S_N^n)` for `S_N = N^{-1/2} Σ_i ω_i`.
pub fn clt_moment(n_sites: usize, n: usize) -> Result<MultiPoly> {
    Ok(CltExpansion::new(n)?.at(n_sites))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::r_by_closed_form;

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn word_moments() {
        assert_eq!(
            discrete_word_moment(&[1, 2, 2, 1], 2).unwrap(),
            MultiPoly::q()
        );
        assert_eq!(
            discrete_word_moment(&[2, 1, 1, 2], 2).unwrap(),
            MultiPoly::p()
        );
        assert!(discrete_word_moment(&[1, 2, 1, 2], 2).unwrap().is_zero());
        assert_eq!(
            discrete_word_moment(&[1, 1, 1, 1], 1).unwrap(),
            MultiPoly::from_int(2)
        );
        assert!(discrete_word_moment(&[1, 1, 2], 2).unwrap().is_zero());
        assert!(discrete_word_moment(&[3], 2).is_err());
    }

    /// Direct sum over all `N^n` index words, feasible for tiny `N`.
    fn brute_clt(n_sites: usize, n: usize) -> MultiPoly {
        let mut total = MultiPoly::zero();
        let mut word = vec![1usize; n];
        loop {
            total += &word_moment(&word);
            let Some(pos) = word.iter().rposition(|&i| i < n_sites) else {
                break;
            };
            word[pos] += 1;
            for w in &mut word[pos + 1..] {
                *w = 1;
            }
        }
        total.scale(&Rational::new(
            BigInt::one(),
            BigInt::from(n_sites).pow((n / 2) as u32),
        ))
    }

    #[test]
    fn patterns_match_brute_force() {
        assert_eq!(order_patterns(6).len(), 4683);
        for n_sites in 1..=4 {
            for n in [2, 4, 6] {
                assert_eq!(
                    clt_moment(n_sites, n).unwrap(),
                    brute_clt(n_sites, n),
                    "N={n_sites} n={n}"
                );
            }
        }
    }

    #[test]
    fn low_moments() {
        for n_sites in [1, 5, 100] {
            assert_eq!(clt_moment(n_sites, 2).unwrap(), MultiPoly::one());
            assert!(clt_moment(n_sites, 3).unwrap().is_zero());
            let inv = Rational::new(BigInt::one(), BigInt::from(n_sites));
            let want = &poly("1 + 1/2p + 1/2q").scale(&(Rational::one() - &inv))
                + &MultiPoly::from_int(2).scale(&inv);
            assert_eq!(clt_moment(n_sites, 4).unwrap(), want);
        }
    }

    fn power_of(base: i64, e: i64) -> Rational {
        let b = Rational::from_integer(base.into());
        if e >= 0 {
            num_traits::pow(b, e as usize)
        } else {
            Rational::one() / num_traits::pow(b, (-e) as usize)
        }
    }

    #[test]
    fn symbolic_limits() {
        let r = r_by_closed_form(3).unwrap();
        for (k, r_k) in r.iter().enumerate().skip(1) {
            let expansion = CltExpansion::new(2 * k).unwrap();
            assert_eq!(&expansion.limit().unwrap(), r_k);
            let summed: MultiPoly = expansion
                .laurent()
                .iter()
                .map(|(e, c)| c.scale(&power_of(7, *e)))
                .sum();
            assert_eq!(expansion.at(7), summed);
        }
    }
}
