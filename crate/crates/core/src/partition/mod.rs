//! Set partitions of `[n]`, their ordered (block-colored) refinements, and the
//! statistics used by the weights `p^e q^e'`.

mod enumerate;
mod signature;
mod stats;

pub use enumerate::{
    coloring_histogram, enumerate_nc, enumerate_ordered, weight_histogram, Limits, NcPartitions,
    OrderFilter, OrderedPartitions,
};
pub use signature::{Interval, IntervalFamily, IntervalSignature};
pub use stats::{disorder_order_counts, is_adapted, nesting_forest, weight, NestingForest};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Partition of `{1, …, n}` stored canonically: each block sorted, blocks sorted by minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside [1, {n}]"
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
            }
        }
        if let Some(missing) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// Builds a partition from a label per element (`labels[i]` is the block of `i + 1`).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (i, &label) in labels.iter().enumerate() {
            let slot = *index.entry(label).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[slot].push(i + 1);
        }
        SetPartition {
            n: labels.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_pair(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// `1` and `n` share a block.
    pub fn is_covered(&self) -> bool {
        self.blocks
            .first()
            .is_some_and(|b| b.last() == Some(&self.n))
    }

    /// Block index (into [`blocks`](Self::blocks)) for each element, 0-based positions.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (i, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x - 1] = i;
            }
        }
        labels
    }
}

/// True iff no two blocks interleave as `k < m < k' < m'`.
pub fn is_noncrossing(partition: &SetPartition) -> bool {
    // Every other block must sit entirely inside or entirely outside each gap
    // between consecutive elements of a block.
    let blocks = partition.blocks();
    blocks.iter().enumerate().all(|(i, block)| {
        block.windows(2).all(|gap| {
            blocks
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .all(|(_, other)| {
                    let inside = other.iter().filter(|&&x| gap[0] < x && x < gap[1]).count();
                    inside == 0 || inside == other.len()
                })
        })
    })
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, self.blocks.iter().map(Vec::as_slice))
    }
}

fn write_blocks<'a>(
    f: &mut fmt::Formatter<'_>,
    blocks: impl Iterator<Item = &'a [usize]>,
) -> fmt::Result {
    f.write_str("[")?;
    for (i, block) in blocks.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str("{")?;
        for (j, x) in block.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")?;
    }
    f.write_str("]")
}

/// A set partition together with a linear order (coloring) of its blocks.
///
/// `order[i]` is the index of the block colored `i + 1`, i.e. `P_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    base: Arc<SetPartition>,
    order: Vec<usize>,
}

impl OrderedPartition {
    pub fn new(base: Arc<SetPartition>, order: Vec<usize>) -> Result<Self> {
        let k = base.block_count();
        let mut seen = vec![false; k];
        if order.len() != k {
            return Err(Error::InvalidPartition(
                "coloring length differs from block count".into(),
            ));
        }
        for &i in &order {
            if i >= k || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(
                    "coloring is not a bijection".into(),
                ));
            }
        }
        Ok(OrderedPartition { base, order })
    }

    /// Builds `(P_1, …, P_k)` directly from blocks listed in coloring order.
    pub fn from_sequence(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut keyed: Vec<usize> = blocks
            .iter()
            .map(|b| *b.iter().min().unwrap_or(&0))
            .collect();
        let base = SetPartition::new(n, blocks)?;
        let order = keyed
            .drain(..)
            .map(|min| {
                base.blocks()
                    .iter()
                    .position(|b| b[0] == min)
                    .unwrap_or(usize::MAX)
            })
            .collect();
        OrderedPartition::new(Arc::new(base), order)
    }

    pub fn base(&self) -> &SetPartition {
        &self.base
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Blocks in coloring order.
    pub fn sequence(&self) -> impl Iterator<Item = &[usize]> {
        self.order.iter().map(|&i| self.base.blocks[i].as_slice())
    }

    /// `rank[block] = color position` (0-based).
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.order.len()];
        for (pos, &b) in self.order.iter().enumerate() {
            rank[b] = pos;
        }
        rank
    }

    /// The same blocks colored in the opposite order.
    pub fn reversed(&self) -> OrderedPartition {
        let order = self.order.iter().rev().copied().collect();
        OrderedPartition {
            base: Arc::clone(&self.base),
            order,
        }
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, self.sequence())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(n: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    /// Independent crossing test straight from the definition: any quadruple.
    fn crosses_brute(p: &SetPartition) -> bool {
        let l = p.labels();
        let n = p.n();
        for k in 0..n {
            for m in k + 1..n {
                for k2 in m + 1..n {
                    for m2 in k2 + 1..n {
                        if l[k] == l[k2] && l[m] == l[m2] && l[k] != l[m] {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn crossing_examples() {
        assert!(is_noncrossing(&part(4, &[&[1, 4], &[2, 3]])));
        assert!(!is_noncrossing(&part(4, &[&[1, 3], &[2, 4]])));
        let chain = part(6, &[&[1, 6], &[2, 5], &[3, 4]]);
        assert!(is_noncrossing(&chain));
        assert!(!crosses_brute(&chain));
        assert!(!is_noncrossing(&part(5, &[&[1, 3, 5], &[2, 4]])));
    }

    #[test]
    fn agrees_with_quadruple_definition_on_all_partitions_of_6() {
        // Restricted growth strings of length 6.
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<SetPartition>) {
            if prefix.len() == n {
                out.push(SetPartition::from_labels(prefix));
                return;
            }
            let next = prefix.iter().max().map_or(0, |m| m + 1);
            for l in 0..=next {
                prefix.push(l);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
        let mut all = Vec::new();
        rec(&mut Vec::new(), 6, &mut all);
        assert_eq!(all.len(), 203);
        for p in &all {
            assert_eq!(is_noncrossing(p), !crosses_brute(p), "{p}");
        }
        assert_eq!(all.iter().filter(|p| is_noncrossing(p)).count(), 132);
    }

    #[test]
    fn validation() {
        assert!(SetPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(SetPartition::new(2, vec![vec![1, 3], vec![2]]).is_err());
        let p = part(4, &[&[2, 3], &[4, 1]]);
        assert_eq!(p.to_string(), "[{1,4},{2,3}]");
        assert!(p.is_covered());
    }

    #[test]
    fn ordered_display_uses_coloring() {
        let p = OrderedPartition::from_sequence(4, vec![vec![2, 3], vec![1, 4]]).unwrap();
        assert_eq!(p.to_string(), "[{2,3},{1,4}]");
        assert_eq!(p.reversed().to_string(), "[{1,4},{2,3}]");
        assert!(OrderedPartition::new(Arc::new(p.base().clone()), vec![0, 0]).is_err());
    }
}
