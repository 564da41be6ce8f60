//! Combinatorial mixed moments: Brownian-type position moments over interval
//! signatures and the Poisson-type moments in the time symbol `T`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{factorial, MultiPoly, Rational};
use crate::error::Result;
use crate::partition::{
    coloring_histogram, enumerate_nc, enumerate_ordered, is_adapted, nesting_forest, weight,
    IntervalSignature, Limits, OrderFilter, SetPartition,
};

/// `Π λ(I_i)^{b_i}/b_i! · Σ_{P adapted} w(P)` over ordered pair partitions of `[n]`.
pub fn mixed_moment_brownian(sig: &IntervalSignature, limits: &Limits) -> Result<MultiPoly> {
    let n = sig.n();
    limits.check(n, true)?;
    let factor = sig.measure_factor();
    if factor.is_zero() {
        return Ok(MultiPoly::zero());
    }
    let mut total = MultiPoly::zero();
    for partition in enumerate_ordered(n, OrderFilter::pairs(), limits)? {
        if is_adapted(&partition, sig) {
            total += &weight(&partition)?;
        }
    }
    Ok(total.scale(&factor))
}

/// `Σ_σ w(π, σ)` over all colorings `σ` of one non-crossing partition.
pub fn coloring_weight_sum(base: &SetPartition) -> Result<MultiPoly> {
    let forest = nesting_forest(base)?;
    Ok(coloring_histogram(&forest)
        .into_iter()
        .map(|((e, e_prime), c)| {
            MultiPoly::pq_monomial(e, e_prime).scale(&Rational::from_integer(c.into()))
        })
        .sum())
}

/// `(T^b / b!) Σ_σ w(π, σ)` with `b` the block count of `π`.
pub fn poisson_partition_term(base: &SetPartition) -> Result<MultiPoly> {
    let b = base.block_count();
    let inv = Rational::new(BigInt::from(1), factorial(b));
    Ok(coloring_weight_sum(base)?.scale(&inv) * MultiPoly::t().pow(b as u32))
}

/// `Σ_{P ∈ ONC_n} T^{b(P)} w(P) / b(P)!`.
pub fn poisson_moment(n: usize, limits: &Limits) -> Result<MultiPoly> {
    let mut total = MultiPoly::zero();
    for base in enumerate_nc(n, false, limits)? {
        total += &poisson_partition_term(&base)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationCheck {
    pub m: usize,
    pub direction: Direction,
    pub value: MultiPoly,
    pub expected: MultiPoly,
    pub passed: bool,
}

/// Pyramidal words `f_1 … f_m f_m … f_1` on disjoint intervals with the given lengths.
/// Increasing supports give `q^{m-1} Π λ_i`, decreasing supports `p^{m-1} Π λ_i`.
pub fn factorization_checks(
    lengths: &[Rational],
    limits: &Limits,
) -> Result<Vec<FactorizationCheck>> {
    let m = lengths.len();
    let product: Rational = lengths.iter().product();
    let mut out = Vec::new();
    for direction in [Direction::Increasing, Direction::Decreasing] {
        let rank = |i: usize| match direction {
            Direction::Increasing => i,
            Direction::Decreasing => m - 1 - i,
        };
        let assignment: Vec<usize> = (0..m).chain((0..m).rev()).map(rank).collect();
        let sig = IntervalSignature::from_ranks(assignment, lengths.to_vec())?;
        let value = mixed_moment_brownian(&sig, limits)?;
        let base = match direction {
            Direction::Increasing => MultiPoly::q(),
            Direction::Decreasing => MultiPoly::p(),
        };
        let expected = base.pow(m.saturating_sub(1) as u32).scale(&product);
        out.push(FactorizationCheck {
            m,
            direction,
            passed: value == expected,
            value,
            expected,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn poly(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn single_interval_sixth_moment() {
        let value =
            mixed_moment_brownian(&IntervalSignature::uniform(6), &Limits::default()).unwrap();
        assert_eq!(value, poly("1 + p + q + 1/2p^2 + pq + 1/2q^2"));
    }

    #[test]
    fn two_interval_signature() {
        let (_, sig) = IntervalSignature::parse("f f g g f f", "g=[0,1],f=[1,2]").unwrap();
        let value = mixed_moment_brownian(&sig, &Limits::default()).unwrap();
        assert_eq!(value, poly("1 + 1/2p^2 + 1/2pq"));
    }

    #[test]
    fn odd_signatures_vanish() {
        let lim = Limits::default();
        assert!(mixed_moment_brownian(&IntervalSignature::uniform(5), &lim)
            .unwrap()
            .is_zero());
        let sig = IntervalSignature::from_ranks(vec![0, 1, 0, 1], vec![int(1), int(1)]).unwrap();
        assert!(mixed_moment_brownian(&sig, &lim).unwrap().is_zero());
    }

    #[test]
    fn lengths_scale_moments() {
        let sig = IntervalSignature::from_ranks(vec![0; 4], vec![rat(3, 2)]).unwrap();
        let value = mixed_moment_brownian(&sig, &Limits::default()).unwrap();
        assert_eq!(value, poly("2 + p + q").scale(&rat(9, 8)));
    }

    #[test]
    fn factorizations() {
        let lim = Limits::default();
        let checks = factorization_checks(&[int(1), int(1)], &lim).unwrap();
        assert_eq!(checks[0].value, MultiPoly::q());
        assert_eq!(checks[1].value, MultiPoly::p());
        assert_eq!(
            factorization_checks(&[int(1)], &lim).unwrap()[0].value,
            MultiPoly::one()
        );
        for m in 1..=4 {
            let lengths: Vec<_> = (1..=m as i64).map(|i| rat(i, 2)).collect();
            assert!(factorization_checks(&lengths, &lim)
                .unwrap()
                .iter()
                .all(|c| c.passed));
        }
    }

    #[test]
    fn poisson_small() {
        let lim = Limits::default();
        assert_eq!(poisson_moment(1, &lim).unwrap(), MultiPoly::t());
        assert_eq!(poisson_moment(2, &lim).unwrap(), poly("T + T^2"));
        assert_eq!(
            poisson_moment(3, &lim).unwrap(),
            poly("T + 2T^2 + 1/2pT^2 + 1/2qT^2 + T^3")
        );
        let four = poisson_moment(4, &lim).unwrap();
        let t3 = four.coefficient_of(crate::arith::Var::T, 3);
        assert_eq!(t3, poly("3 + p + q + 1/3p^2 + 1/3pq + 1/3q^2"));
        assert_eq!(
            four.coefficient_of(crate::arith::Var::T, 2),
            poly("3 + 3/2p + 3/2q")
        );
    }

    /// Brute-force NC partitions of `[n]` by restricted growth strings.
    fn nc_partitions(n: usize) -> Vec<SetPartition> {
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<SetPartition>) {
            if prefix.len() == n {
                let p = SetPartition::from_labels(prefix);
                if crate::partition::is_noncrossing(&p) {
                    out.push(p);
                }
                return;
            }
            let next = prefix.iter().max().map_or(0, |m| m + 1);
            for l in 0..=next {
                prefix.push(l);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, &mut out);
        out
    }

    #[test]
    fn poisson_free_specialization() {
        let lim = Limits::default();
        for n in 1..=7 {
            let got = poisson_moment(n, &lim).unwrap().eval_pq(&int(1), &int(1));
            let want: MultiPoly = nc_partitions(n)
                .iter()
                .map(|p| MultiPoly::t().pow(p.block_count() as u32))
                .sum();
            assert_eq!(got, want, "n={n}");
        }
    }

    #[test]
    fn poisson_monotone_specialization() {
        // Colorings with every outer block first: b!/Π(subtree sizes) by the hook length formula.
        let lim = Limits::default();
        for n in 1..=7 {
            let got = poisson_moment(n, &lim).unwrap().eval_pq(&int(0), &int(1));
            let want: MultiPoly = nc_partitions(n)
                .iter()
                .map(|p| {
                    let forest = nesting_forest(p).unwrap();
                    let k = p.block_count();
                    let mut size = vec![1i64; k];
                    // Blocks sorted by min: children come after parents, so sweep backwards.
                    for i in (0..k).rev() {
                        if let Some(parent) = forest.parent(i) {
                            size[parent] += size[i];
                        }
                    }
                    let hooks: i64 = size.iter().product();
                    MultiPoly::t().pow(k as u32).scale(&rat(1, hooks))
                })
                .sum();
            assert_eq!(got, want, "n={n}");
        }
    }
}
