use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use proptest::prelude::*;

use onc_kesten::arith::{catalan, factorial, MultiPoly};
use onc_kesten::partition::{
    disorder_order_counts, enumerate_nc, enumerate_ordered, nesting_forest, weight, Limits,
    OrderFilter, OrderedPartition, SetPartition,
};

fn nth_ordered(n: usize, pair_only: bool, index: usize) -> OrderedPartition {
    let filter = OrderFilter {
        pair_only,
        ..Default::default()
    };
    let all: Vec<_> = enumerate_ordered(n, filter, &Limits::default())
        .unwrap()
        .collect();
    all[index % all.len()].clone()
}

proptest! {
    #[test]
    fn disorders_plus_orders_count_inner_blocks(half in 1usize..=5, pair in any::<bool>(), index in any::<usize>()) {
        let n = if pair { 2 * half } else { half + 1 };
        let p = nth_ordered(n, pair, index);
        let (e, e_prime) = disorder_order_counts(&p).unwrap();
        let inner = nesting_forest(p.base()).unwrap().inner_count();
        prop_assert_eq!((e + e_prime) as usize, inner);
    }

    #[test]
    fn reversal_swaps_disorders_and_orders(half in 1usize..=5, pair in any::<bool>(), index in any::<usize>()) {
        let n = if pair { 2 * half } else { half + 1 };
        let p = nth_ordered(n, pair, index);
        let (e, e_prime) = disorder_order_counts(&p).unwrap();
        prop_assert_eq!(disorder_order_counts(&p.reversed()).unwrap(), (e_prime, e));
        prop_assert_eq!(weight(&p.reversed()).unwrap(), weight(&p).unwrap().swap_pq());
    }
}

#[test]
fn ordered_pair_counts() {
    for n in 1..=6 {
        let count = enumerate_ordered(2 * n, OrderFilter::pairs(), &Limits::default())
            .unwrap()
            .count();
        assert_eq!(BigInt::from(count), factorial(n) * catalan(n));
    }
}

/// Every enclosing block, at any depth, colored before the blocks it encloses.
fn is_monotone(p: &OrderedPartition) -> bool {
    let blocks: Vec<&[usize]> = p.sequence().collect();
    blocks.iter().enumerate().all(|(i, inner)| {
        blocks[i + 1..]
            .iter()
            .all(|outer| !(outer[0] < inner[0] && inner[inner.len() - 1] < outer[outer.len() - 1]))
    })
}

#[test]
fn monotone_subfamily() {
    for n in 1..=5 {
        let mut zero_disorder = 0usize;
        let mut direct = 0usize;
        for p in enumerate_ordered(2 * n, OrderFilter::pairs(), &Limits::default()).unwrap() {
            zero_disorder += usize::from(disorder_order_counts(&p).unwrap().0 == 0);
            direct += usize::from(is_monotone(&p));
        }
        let double_factorial: usize = (1..2 * n).step_by(2).product();
        assert_eq!(zero_disorder, direct, "n={n}");
        assert_eq!(zero_disorder, double_factorial, "n={n}");
    }
}

/// Words with `sizes[i]` copies of letter `i`, in lexicographic order.
fn interleavings(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..sizes.len() {
        if sizes[i] > 0 {
            let mut rest = sizes.to_vec();
            rest[i] -= 1;
            for mut tail in interleavings(&rest) {
                tail.insert(0, i);
                out.push(tail);
            }
        }
    }
    out
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=n)
        .flat_map(|k| {
            compositions(n - k).into_iter().map(move |mut c| {
                c.insert(0, k);
                c
            })
        })
        .collect()
}

fn covered(k: usize) -> Vec<OrderedPartition> {
    let filter = OrderFilter {
        pair_only: true,
        covered_only: true,
        outer_blocks: None,
    };
    enumerate_ordered(2 * k, filter, &Limits::default())
        .unwrap()
        .collect()
}

/// Concatenates covered components side by side, coloring them along an interleaving.
fn glue(parts: &[&OrderedPartition], word: &[usize]) -> OrderedPartition {
    let mut offsets = vec![0];
    for p in parts {
        offsets.push(offsets.last().unwrap() + p.base().n());
    }
    let sequences: Vec<Vec<Vec<usize>>> = parts
        .iter()
        .zip(&offsets)
        .map(|(p, off)| {
            p.sequence()
                .map(|b| b.iter().map(|x| x + off).collect())
                .collect()
        })
        .collect();
    let mut next = vec![0; parts.len()];
    let blocks = word
        .iter()
        .map(|&i| {
            next[i] += 1;
            sequences[i][next[i] - 1].clone()
        })
        .collect();
    OrderedPartition::from_sequence(*offsets.last().unwrap(), blocks).unwrap()
}

#[test]
fn covered_decomposition_regenerates_everything() {
    for n in 1..=5 {
        let mut built = BTreeSet::new();
        let mut built_weights: BTreeMap<String, usize> = BTreeMap::new();
        let mut multinomial_total = 0usize;
        for sizes in compositions(n) {
            let words = interleavings(&sizes);
            let fact = |k: usize| (1..=k).product::<usize>();
            assert_eq!(
                words.len(),
                fact(n) / sizes.iter().map(|&k| fact(k)).product::<usize>()
            );
            let pools: Vec<Vec<OrderedPartition>> = sizes.iter().map(|&k| covered(k)).collect();
            let mut tuples: Vec<Vec<&OrderedPartition>> = vec![Vec::new()];
            for pool in &pools {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| pool.iter().map(move |p| [t.clone(), vec![p]].concat()))
                    .collect();
            }
            for tuple in &tuples {
                let product: MultiPoly = tuple
                    .iter()
                    .map(|p| weight(p).unwrap())
                    .fold(MultiPoly::one(), |a, w| &a * &w);
                for word in &words {
                    let p = glue(tuple, word);
                    assert_eq!(weight(&p).unwrap(), product, "{p}");
                    assert!(built.insert(p.to_string()), "duplicate {p}");
                    *built_weights.entry(product.to_string()).or_default() += 1;
                    multinomial_total += 1;
                }
            }
        }
        let mut enumerated = BTreeSet::new();
        let mut enumerated_weights: BTreeMap<String, usize> = BTreeMap::new();
        for p in enumerate_ordered(2 * n, OrderFilter::pairs(), &Limits::default()).unwrap() {
            *enumerated_weights
                .entry(weight(&p).unwrap().to_string())
                .or_default() += 1;
            enumerated.insert(p.to_string());
        }
        assert_eq!(built, enumerated, "n={n}");
        assert_eq!(built_weights, enumerated_weights, "n={n}");
        assert_eq!(multinomial_total, enumerated.len());
    }
}

#[test]
fn noncrossing_counts_are_catalan() {
    for n in 1..=8 {
        let count = enumerate_nc(n, false, &Limits::default()).unwrap().count();
        assert_eq!(BigInt::from(count), catalan(n));
    }
    let crossing = SetPartition::new(4, vec![vec![1, 3], vec![2, 4]]).unwrap();
    assert!(nesting_forest(&crossing).is_err());
}
