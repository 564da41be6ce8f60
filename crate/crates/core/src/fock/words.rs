//! Operator words on the continuous engine: position and Poisson moments, the words
//! `c_π` attached to non-crossing partitions, and exhaustive vanishing scans.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::continuous::{CellFunction, FockEngine, FockVector};
use crate::arith::MultiPoly;
use crate::error::{Error, Result};
use crate::moments::{coloring_weight_sum, poisson_partition_term};
use crate::partition::{
    enumerate_nc, is_adapted, IntervalSignature, Limits, OrderedPartition, SetPartition,
};

/// One operator of a word, acting on the indicator of the given interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    /// `a(χ_I)`.
    Create(usize),
    /// `a*(χ_I)`.
    Annihilate(usize),
    /// `M(χ_I)` with `M(χ_I)Ω = 0`.
    GaugeM(usize),
    /// `a*(χ_I) a(χ_I)`.
    GaugeN(usize),
}

impl Op {
    pub const TAGS: [&'static str; 4] = ["a", "a*", "m", "n"];

    pub fn interval(self) -> usize {
        match self {
            Op::Create(i) | Op::Annihilate(i) | Op::GaugeM(i) | Op::GaugeN(i) => i,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Op::Create(_) => "a",
            Op::Annihilate(_) => "a*",
            Op::GaugeM(_) => "m",
            Op::GaugeN(_) => "n",
        }
    }

    pub fn from_tag(tag: &str, interval: usize) -> Result<Op> {
        Ok(match tag {
            "a" => Op::Create(interval),
            "a*" => Op::Annihilate(interval),
            "m" => Op::GaugeM(interval),
            "n" => Op::GaugeN(interval),
            other => return Err(Error::Parse(format!("unknown operator tag {other:?}"))),
        })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A word of operators, written left to right and applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpWord(pub Vec<Op>);

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.0 {
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Parses tags such as `"a*aa*a"` or `"a* a m n"` on interval 0.
impl FromStr for OpWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        let mut chars = text.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let tag = match c {
                'a' if chars.peek() == Some(&'*') => {
                    chars.next();
                    "a*"
                }
                'a' => "a",
                'm' => "m",
                'n' => "n",
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected {other:?} in operator word"
                    )))
                }
            };
            ops.push(Op::from_tag(tag, 0)?);
        }
        Ok(OpWord(ops))
    }
}

impl FockEngine {
    pub fn apply(&self, op: Op, v: &FockVector) -> Result<FockVector> {
        match op {
            Op::Create(i) => self.create(&CellFunction::indicator(i), v),
            Op::Annihilate(i) => self.annihilate(&CellFunction::indicator(i), v),
            Op::GaugeM(i) => self.gauge_m(&CellFunction::indicator(i), &MultiPoly::zero(), v),
            Op::GaugeN(i) => self.gauge_n(i, v),
        }
    }
}

/// `⟨X_1 ⋯ X_n Ω, Ω⟩`, dropping words that the remaining annihilators cannot empty.
pub fn word_vacuum_moment(engine: &FockEngine, word: &[Op]) -> Result<MultiPoly> {
    let mut remaining = word
        .iter()
        .filter(|op| matches!(op, Op::Annihilate(_)))
        .count();
    let mut state = FockVector::vacuum();
    for &op in word.iter().rev() {
        state = engine.apply(op, &state)?;
        if matches!(op, Op::Annihilate(_)) {
            remaining -= 1;
        }
        state.truncate_particles(remaining);
        if state.is_empty() {
            return Ok(MultiPoly::zero());
        }
    }
    Ok(state.vacuum_amplitude())
}

/// `φ(ω(f_1) ⋯ ω(f_n))` with `f_j` the indicator of the interval the signature assigns to `j`.
pub fn position_moment(
    engine: &FockEngine,
    sig: &IntervalSignature,
    limits: &Limits,
) -> Result<MultiPoly> {
    let n = sig.n();
    limits.check(n, true)?;
    let mut state = FockVector::vacuum();
    for (step, &interval) in sig.assignment().iter().enumerate().rev() {
        let f = CellFunction::indicator(interval);
        state = engine.position(&f, &state)?;
        state.truncate_particles(step);
    }
    Ok(state.vacuum_amplitude())
}

/// [`position_moment`] on consecutive intervals with the signature's lengths.
pub fn position_moment_for(sig: &IntervalSignature, limits: &Limits) -> Result<MultiPoly> {
    position_moment(&FockEngine::from_lengths(sig.lengths()), sig, limits)
}

/// `⟨γ_T^n Ω, Ω⟩` for `γ = a + a* + a*a + m` on `[0, T]`.
pub fn poisson_moment_operator(n: usize, limits: &Limits) -> Result<MultiPoly> {
    limits.check(n, false)?;
    let engine = FockEngine::poisson();
    let ops = [
        Op::Create(0),
        Op::Annihilate(0),
        Op::GaugeN(0),
        Op::GaugeM(0),
    ];
    let mut state = FockVector::vacuum();
    for step in (0..n).rev() {
        let mut next = FockVector::zero();
        for op in ops {
            next.add(&engine.apply(op, &state)?);
        }
        next.truncate_particles(step);
        state = next;
    }
    Ok(state.vacuum_amplitude())
}

/// `c_π` on interval 0: `a*` at the first element of each block of size ≥ 2,
/// `a` at its last, `m` in between, and `n` for singletons.
pub fn c_pi(partition: &SetPartition) -> OpWord {
    let mut ops = vec![Op::GaugeN(0); partition.n()];
    for block in partition.blocks() {
        if block.len() == 1 {
            continue;
        }
        for (j, &x) in block.iter().enumerate() {
            ops[x - 1] = if j == 0 {
                Op::Annihilate(0)
            } else if j + 1 == block.len() {
                Op::Create(0)
            } else {
                Op::GaugeM(0)
            };
        }
    }
    OpWord(ops)
}

/// `π″`: middle elements dropped, each singleton `{i}` widened to a pair `{i, i+1}`, and the
/// result renumbered. Blocks keep their order, so colorings of `π` act on `π″` unchanged.
pub fn pair_substitution(partition: &SetPartition) -> SetPartition {
    let mut labels = Vec::with_capacity(2 * partition.block_count());
    for (x, label) in partition.labels().into_iter().enumerate() {
        let block = &partition.blocks()[label];
        if block.len() == 1 {
            labels.extend([label, label]);
        } else if x + 1 == block[0] || x + 1 == block[block.len() - 1] {
            labels.push(label);
        }
    }
    let mut blocks = vec![Vec::new(); partition.block_count()];
    for (x, label) in labels.into_iter().enumerate() {
        blocks[label].push(x + 1);
    }
    SetPartition::new(2 * partition.block_count(), blocks).expect("a pairing of [2b]")
}

/// The unique non-crossing `π` with `c_π = word`, if any.
pub fn partition_of_word(word: &[Op]) -> Option<SetPartition> {
    let mut labels = vec![0usize; word.len()];
    let mut open: Vec<usize> = Vec::new();
    let mut blocks = 0;
    for (i, op) in word.iter().enumerate() {
        match op {
            Op::Annihilate(_) => {
                open.push(blocks);
                labels[i] = blocks;
                blocks += 1;
            }
            Op::GaugeM(_) => labels[i] = *open.last()?,
            Op::Create(_) => labels[i] = open.pop()?,
            Op::GaugeN(_) => {
                labels[i] = blocks;
                blocks += 1;
            }
        }
    }
    open.is_empty().then(|| SetPartition::from_labels(&labels))
}

/// Operator word `a_π(f_1, …, f_n)` for a pair partition and a signature.
pub fn pairing_word(partition: &SetPartition, sig: &IntervalSignature) -> Result<OpWord> {
    if !partition.is_pair() || partition.n() != sig.n() {
        return Err(Error::InvalidPartition(format!(
            "{partition} is not a pairing of [{}]",
            sig.n()
        )));
    }
    let assignment = sig.assignment();
    let mut ops = vec![Op::Create(0); sig.n()];
    for block in partition.blocks() {
        ops[block[0] - 1] = Op::Annihilate(assignment[block[0] - 1]);
        ops[block[1] - 1] = Op::Create(assignment[block[1] - 1]);
    }
    Ok(OpWord(ops))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VanishingScan {
    pub words_checked: usize,
    pub vanishing_expected: usize,
    /// Words expected to vanish that did not, rendered as tags.
    pub violations: Vec<String>,
    /// Partition words whose moment differs from the coloring sum.
    pub mismatches: Vec<String>,
}

impl VanishingScan {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.mismatches.is_empty()
    }
}

/// Every word of length `1..=max_len` over `{a, a*, m, n}` on `[0, T]`: words that are
/// no `c_π` must vanish, and `c_π` must give `(T^b/b!) Σ_σ w(π, σ)`.
pub fn scan_operator_words(max_len: usize) -> Result<VanishingScan> {
    let engine = FockEngine::poisson();
    let mut scan = VanishingScan::default();
    for len in 1..=max_len {
        for code in 0..4usize.pow(len as u32) {
            let word: Vec<Op> = (0..len)
                .map(|i| Op::from_tag(Op::TAGS[(code >> (2 * i)) & 3], 0))
                .collect::<Result<_>>()?;
            let value = word_vacuum_moment(&engine, &word)?;
            scan.words_checked += 1;
            match partition_of_word(&word) {
                None => {
                    scan.vanishing_expected += 1;
                    if !value.is_zero() {
                        scan.violations.push(OpWord(word).to_string());
                    }
                }
                Some(pi) => {
                    if value != poisson_partition_term(&pi)? {
                        scan.mismatches.push(OpWord(word).to_string());
                    }
                }
            }
        }
    }
    Ok(scan)
}

/// For each non-crossing pairing of `[n]`: if no coloring is adapted to `sig` the word
/// `a_π` must vanish, otherwise it must equal the measure factor times the adapted weight sum.
pub fn scan_pairings(sig: &IntervalSignature, limits: &Limits) -> Result<VanishingScan> {
    let engine = FockEngine::from_lengths(sig.lengths());
    let factor = MultiPoly::constant(sig.measure_factor());
    let mut scan = VanishingScan::default();
    for base in enumerate_nc(sig.n(), true, limits)? {
        let word = pairing_word(&base, sig)?;
        let value = word_vacuum_moment(&engine, &word.0)?;
        let base = std::sync::Arc::new(base);
        let adapted: MultiPoly = all_colorings(&base)
            .filter(|p| is_adapted(p, sig))
            .map(|p| crate::partition::weight(&p))
            .sum::<Result<MultiPoly>>()?;
        scan.words_checked += 1;
        if adapted.is_zero() {
            scan.vanishing_expected += 1;
            if !value.is_zero() {
                scan.violations.push(base.to_string());
            }
        } else if value != &factor * &adapted {
            scan.mismatches.push(base.to_string());
        }
    }
    Ok(scan)
}

fn all_colorings(
    base: &std::sync::Arc<SetPartition>,
) -> impl Iterator<Item = OrderedPartition> + '_ {
    permutations(base.block_count())
        .into_iter()
        .map(move |order| {
            OrderedPartition::new(std::sync::Arc::clone(base), order).expect("valid permutation")
        })
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for smaller in permutations(k - 1) {
        for pos in 0..=smaller.len() {
            let mut p = smaller.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// `Σ_σ w(π, σ) · λ^b / b!` for the pairing read off a single-interval word of `a`/`a*`.
pub fn word_combinatorial_moment(
    word: &[Op],
    length: &crate::arith::Rational,
) -> Result<MultiPoly> {
    if word
        .iter()
        .any(|op| !matches!(op, Op::Create(_) | Op::Annihilate(_)))
    {
        return Err(Error::Parse("only a and a* are allowed".into()));
    }
    let Some(pi) = partition_of_word(word) else {
        return Ok(MultiPoly::zero());
    };
    let b = pi.block_count();
    let scale = num_traits::pow(length.clone(), b)
        / crate::arith::Rational::from_integer(crate::arith::factorial(b));
    Ok(coloring_weight_sum(&pi)?.scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::moments::{mixed_moment_brownian, poisson_moment};
    use rand::{Rng, SeedableRng};

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn word(s: &str) -> Vec<Op> {
        s.parse::<OpWord>().unwrap().0
    }

    #[test]
    fn parse_and_display() {
        let w: OpWord = "a*a a* m n".parse().unwrap();
        assert_eq!(
            w.0,
            [
                Op::Annihilate(0),
                Op::Create(0),
                Op::Annihilate(0),
                Op::GaugeM(0),
                Op::GaugeN(0)
            ]
        );
        assert_eq!(w.to_string(), "a*aa*mn");
        assert!("ab".parse::<OpWord>().is_err());
    }

    #[test]
    fn single_interval_words() {
        let e = FockEngine::from_lengths(&[int(1)]);
        let table = [
            ("a*aa*aa*a", "1"),
            ("a*a*aaa*a", "1/2p + 1/2q"),
            ("a*aa*a*aa", "1/2p + 1/2q"),
            ("a*a*aa*aa", "1/3p^2 + 1/3pq + 1/3q^2"),
            ("a*a*a*aaa", "1/6p^2 + 2/3pq + 1/6q^2"),
        ];
        let mut total = MultiPoly::zero();
        for (w, want) in table {
            let value = word_vacuum_moment(&e, &word(w)).unwrap();
            assert_eq!(value, poly(want), "{w}");
            assert_eq!(word_combinatorial_moment(&word(w), &int(1)).unwrap(), value);
            total += &value;
        }
        assert_eq!(
            total,
            position_moment_for(&IntervalSignature::uniform(6), &Limits::default()).unwrap()
        );
    }

    #[test]
    fn poisson_operator_values() {
        let lim = Limits::default();
        assert_eq!(poisson_moment_operator(1, &lim).unwrap(), MultiPoly::t());
        assert_eq!(poisson_moment_operator(2, &lim).unwrap(), poly("T + T^2"));
        assert_eq!(
            poisson_moment_operator(3, &lim).unwrap(),
            poly("T + 2T^2 + 1/2pT^2 + 1/2qT^2 + T^3")
        );
        let five = poisson_moment_operator(5, &lim).unwrap();
        assert_eq!(
            five.coefficient_of(crate::arith::Var::T, 5),
            MultiPoly::one()
        );
        for n in 1..=6 {
            assert_eq!(
                poisson_moment_operator(n, &lim).unwrap(),
                poisson_moment(n, &lim).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn non_partition_words_vanish() {
        let e = FockEngine::poisson();
        assert!(word_vacuum_moment(&e, &word("mmm")).unwrap().is_zero());
        assert!(word_vacuum_moment(&e, &word("a*aa")).unwrap().is_zero());
        assert!(partition_of_word(&word("mmm")).is_none());
        assert!(partition_of_word(&word("a*aa")).is_none());
        let scan = scan_operator_words(5).unwrap();
        assert!(scan.passed(), "{scan:?}");
        assert_eq!(
            scan.words_checked,
            (1..=5).map(|k| 4usize.pow(k)).sum::<usize>()
        );
    }

    #[test]
    fn c_pi_round_trip() {
        for n in 1..=7 {
            for pi in enumerate_nc(n, false, &Limits::default()).unwrap() {
                assert_eq!(partition_of_word(&c_pi(&pi).0), Some(pi));
            }
        }
    }

    #[test]
    fn nested_c_pi_matches_coloring_sum() {
        let pi = SetPartition::new(
            10,
            vec![
                vec![1, 10],
                vec![2, 3],
                vec![4, 7],
                vec![5],
                vec![6],
                vec![8, 9],
            ],
        )
        .unwrap();
        let w = c_pi(&pi);
        assert_eq!(w.to_string(), "a*a*aa*nnaa*aa");
        let value = word_vacuum_moment(&FockEngine::poisson(), &w.0).unwrap();
        assert_eq!(value, poisson_partition_term(&pi).unwrap());
    }

    #[test]
    fn pair_substitution_preserves_statistics() {
        use crate::partition::disorder_order_counts;
        use std::sync::Arc;
        let engine = FockEngine::poisson();
        let pi = SetPartition::new(6, vec![vec![1, 4, 6], vec![2], vec![3], vec![5]]).unwrap();
        assert_eq!(
            pair_substitution(&pi).to_string(),
            "[{1,8},{2,3},{4,5},{6,7}]"
        );
        for n in 1..=8 {
            for pi in enumerate_nc(n, false, &Limits::default()).unwrap() {
                let b = pi.block_count();
                if b > 4 {
                    continue;
                }
                let paired = pair_substitution(&pi);
                assert!(
                    paired.is_pair() && crate::partition::is_noncrossing(&paired),
                    "{pi}"
                );
                let (pi, paired) = (Arc::new(pi), Arc::new(paired));
                for order in permutations(b) {
                    let a = OrderedPartition::new(Arc::clone(&pi), order.clone()).unwrap();
                    let c = OrderedPartition::new(Arc::clone(&paired), order).unwrap();
                    assert_eq!(
                        disorder_order_counts(&a).unwrap(),
                        disorder_order_counts(&c).unwrap(),
                        "{a} vs {c}"
                    );
                }
                let lhs = word_vacuum_moment(&engine, &c_pi(&pi).0).unwrap();
                let rhs = word_vacuum_moment(&engine, &c_pi(&paired).0).unwrap();
                assert_eq!(lhs, rhs, "{pi}");
            }
        }
    }

    #[test]
    fn example_signature_both_routes() {
        let lim = Limits::default();
        let (family, sig) = IntervalSignature::parse("f f g g f f", "g=[0,1],f=[1,2]").unwrap();
        let engine = FockEngine::new(&family);
        let want = poly("1 + 1/2p^2 + 1/2pq");
        assert_eq!(position_moment(&engine, &sig, &lim).unwrap(), want);
        assert_eq!(mixed_moment_brownian(&sig, &lim).unwrap(), want);
    }

    #[test]
    fn random_signatures_agree_with_enumeration() {
        let lim = Limits::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let r = rng.gen_range(1..=3);
            let n = 2 * rng.gen_range(1..=4);
            let lengths: Vec<_> = (0..r)
                .map(|_| crate::arith::rat(rng.gen_range(1..=5), rng.gen_range(1..=3)))
                .collect();
            let assignment: Vec<_> = (0..n).map(|_| rng.gen_range(0..r)).collect();
            let sig = IntervalSignature::from_ranks(assignment, lengths).unwrap();
            let op = position_moment_for(&sig, &lim).unwrap();
            assert_eq!(op, mixed_moment_brownian(&sig, &lim).unwrap(), "{:?}", sig);
            let scan = scan_pairings(&sig, &lim).unwrap();
            assert!(scan.passed(), "{scan:?}");
        }
    }
}
