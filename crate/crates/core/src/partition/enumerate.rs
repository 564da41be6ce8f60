//! Streaming enumeration of non-crossing partitions and their colorings.
//!
//! Base partitions come out in lexicographic order of their restricted growth
//! strings; colorings of each base in lexicographic permutation order.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{nesting_forest, NestingForest, OrderedPartition, SetPartition};
use crate::error::{Error, Result};

/// Size guards for the enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for pair-partition enumeration (`2n = 14` by default).
    pub pair_max: usize,
    /// Largest `n` for general ordered non-crossing partitions.
    pub general_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            pair_max: 14,
            general_max: 8,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            pair_max: usize::MAX,
            general_max: usize::MAX,
        }
    }

    pub fn check(&self, n: usize, pair_only: bool) -> Result<()> {
        let (limit, what) = if pair_only {
            (self.pair_max, "pair partition size")
        } else {
            (self.general_max, "partition size")
        };
        if n > limit {
            return Err(Error::LimitExceeded {
                what,
                value: n,
                limit,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Node {
    labels: Vec<usize>,
    /// Blocks that may still receive elements, oldest at the bottom.
    open: Vec<usize>,
    blocks: usize,
}

/// Depth-first stream of the non-crossing (pair) partitions of `[n]`.
#[derive(Debug)]
pub struct NcPartitions {
    n: usize,
    pair_only: bool,
    frames: Vec<std::vec::IntoIter<Node>>,
}

impl NcPartitions {
    fn new(n: usize, pair_only: bool) -> Self {
        let frames = if n == 0 || (pair_only && n % 2 == 1) {
            Vec::new()
        } else {
            vec![vec![Node {
                labels: Vec::new(),
                open: Vec::new(),
                blocks: 0,
            }]
            .into_iter()]
        };
        NcPartitions {
            n,
            pair_only,
            frames,
        }
    }

    fn children(&self, node: &Node) -> Vec<Node> {
        let placed = node.labels.len();
        let remaining_after = self.n - placed - 1;
        let mut out = Vec::new();
        // Joining an open block closes every block opened after it.
        for (pos, &block) in node.open.iter().enumerate() {
            if self.pair_only && pos + 1 != node.open.len() {
                continue;
            }
            let mut labels = node.labels.clone();
            labels.push(block);
            let keep = if self.pair_only { pos } else { pos + 1 };
            out.push(Node {
                labels,
                open: node.open[..keep].to_vec(),
                blocks: node.blocks,
            });
        }
        if !self.pair_only || node.open.len() < remaining_after {
            let mut labels = node.labels.clone();
            labels.push(node.blocks);
            let mut open = node.open.clone();
            open.push(node.blocks);
            out.push(Node {
                labels,
                open,
                blocks: node.blocks + 1,
            });
        }
        out
    }
}

impl Iterator for NcPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        while let Some(frame) = self.frames.last_mut() {
            let Some(node) = frame.next() else {
                self.frames.pop();
                continue;
            };
            if node.labels.len() == self.n {
                return Some(SetPartition::from_labels(&node.labels));
            }
            let children = self.children(&node);
            self.frames.push(children.into_iter());
        }
        None
    }
}

/// Every non-crossing partition of `[n]` (pair partitions only if `pair_only`), once each.
pub fn enumerate_nc(n: usize, pair_only: bool, limits: &Limits) -> Result<NcPartitions> {
    limits.check(n, pair_only)?;
    Ok(NcPartitions::new(n, pair_only))
}

/// Filters for [`enumerate_ordered`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OrderFilter {
    pub pair_only: bool,
    /// Keep only partitions where `1` and `n` share a block.
    pub covered_only: bool,
    /// Keep only partitions with exactly this many outer blocks.
    pub outer_blocks: Option<usize>,
}

impl OrderFilter {
    pub fn pairs() -> Self {
        OrderFilter {
            pair_only: true,
            ..Default::default()
        }
    }

    fn contradictory(&self) -> bool {
        self.covered_only && self.outer_blocks.is_some_and(|r| r != 1)
    }

    fn accepts(&self, base: &SetPartition, forest: &NestingForest) -> bool {
        (!self.covered_only || base.is_covered())
            && self.outer_blocks.is_none_or(|r| forest.outer_count() == r)
    }
}

/// Stream of ordered non-crossing partitions matching a filter.
#[derive(Debug)]
pub struct OrderedPartitions {
    bases: NcPartitions,
    filter: OrderFilter,
    current: Option<(Arc<SetPartition>, Vec<usize>)>,
}

impl OrderedPartitions {
    fn advance_base(&mut self) -> bool {
        for base in self.bases.by_ref() {
            let forest = nesting_forest(&base).expect("enumerated partitions are non-crossing");
            if self.filter.accepts(&base, &forest) {
                let order = (0..base.block_count()).collect();
                self.current = Some((Arc::new(base), order));
                return true;
            }
        }
        self.current = None;
        false
    }
}

impl Iterator for OrderedPartitions {
    type Item = OrderedPartition;

    fn next(&mut self) -> Option<OrderedPartition> {
        if self.current.is_none() && !self.advance_base() {
            return None;
        }
        let (base, order) = self.current.as_mut()?;
        let item = OrderedPartition {
            base: Arc::clone(base),
            order: order.clone(),
        };
        if !next_permutation(order) {
            self.current = None;
        }
        Some(item)
    }
}

pub fn enumerate_ordered(
    n: usize,
    filter: OrderFilter,
    limits: &Limits,
) -> Result<OrderedPartitions> {
    limits.check(n, filter.pair_only)?;
    let bases = if filter.contradictory() {
        NcPartitions::new(0, filter.pair_only)
    } else {
        NcPartitions::new(n, filter.pair_only)
    };
    Ok(OrderedPartitions {
        bases,
        filter,
        current: None,
    })
}

/// Counts of ordered partitions by `(e, e')`, computing each nesting forest once per base.
pub fn weight_histogram(
    n: usize,
    filter: OrderFilter,
    limits: &Limits,
) -> Result<BTreeMap<(u32, u32), u64>> {
    limits.check(n, filter.pair_only)?;
    let mut histogram = BTreeMap::new();
    if filter.contradictory() {
        return Ok(histogram);
    }
    for base in NcPartitions::new(n, filter.pair_only) {
        let forest = nesting_forest(&base)?;
        if !filter.accepts(&base, &forest) {
            continue;
        }
        for (key, count) in coloring_histogram(&forest) {
            *histogram.entry(key).or_insert(0) += count;
        }
    }
    Ok(histogram)
}

/// Counts of the colorings of one base partition by `(e, e')`.
pub fn coloring_histogram(forest: &NestingForest) -> BTreeMap<(u32, u32), u64> {
    let k = forest.parents().len();
    let mut histogram = BTreeMap::new();
    let mut order: Vec<usize> = (0..k).collect();
    let mut rank = vec![0; k];
    loop {
        for (pos, &b) in order.iter().enumerate() {
            rank[b] = pos;
        }
        *histogram.entry(forest.counts(&rank)).or_insert(0) += 1;
        if !next_permutation(&mut order) {
            return histogram;
        }
    }
}

/// Advances to the next permutation in lexicographic order; false after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v
        .iter()
        .rposition(|&x| x > v[i])
        .expect("pivot has a larger successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}
