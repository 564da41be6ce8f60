use super::{is_noncrossing, IntervalSignature, OrderedPartition, SetPartition};
use crate::arith::MultiPoly;
use crate::error::{Error, Result};

/// The neighboring-outer-block relation of a non-crossing partition.
///
/// `parent[i]` is the innermost block strictly enclosing block `i`, or `None`
/// when block `i` is outer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingForest {
    parent: Vec<Option<usize>>,
}

impl NestingForest {
    pub fn parent(&self, block: usize) -> Option<usize> {
        self.parent[block]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// `in(π)`: number of blocks with an outer block.
    pub fn inner_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    pub fn outer_count(&self) -> usize {
        self.parent.len() - self.inner_count()
    }

    /// Disorders and orders for a coloring given as `rank[block] = position`.
    pub fn counts(&self, rank: &[usize]) -> (u32, u32) {
        let mut e = 0;
        let mut e_prime = 0;
        for (block, parent) in self.parent.iter().enumerate() {
            if let Some(outer) = *parent {
                if rank[block] < rank[outer] {
                    e += 1;
                } else {
                    e_prime += 1;
                }
            }
        }
        (e, e_prime)
    }
}

pub fn nesting_forest(partition: &SetPartition) -> Result<NestingForest> {
    if !is_noncrossing(partition) {
        return Err(Error::Crossing);
    }
    let blocks = partition.blocks();
    // In a non-crossing partition, block j encloses block i iff min_j < min_i < max_j;
    // the enclosing blocks form a chain and the innermost one has the largest minimum.
    let parent = blocks
        .iter()
        .enumerate()
        .map(|(i, inner)| {
            let lo = inner[0];
            blocks
                .iter()
                .enumerate()
                .filter(|&(j, outer)| j != i && outer[0] < lo && lo < *outer.last().unwrap())
                .max_by_key(|(_, outer)| outer[0])
                .map(|(j, _)| j)
        })
        .collect();
    Ok(NestingForest { parent })
}

/// `(e(P), e'(P))`: neighboring pairs whose inner block is colored earlier / later.
pub fn disorder_order_counts(partition: &OrderedPartition) -> Result<(u32, u32)> {
    let forest = nesting_forest(partition.base())?;
    Ok(forest.counts(&partition.ranks()))
}

/// `w(P) = p^e(P) q^e'(P)`.
pub fn weight(partition: &OrderedPartition) -> Result<MultiPoly> {
    let (e, e_prime) = disorder_order_counts(partition)?;
    Ok(MultiPoly::pq_monomial(e, e_prime))
}

/// Adaptedness of an ordered partition to a sequence of interval-supported functions:
/// each block lives on one interval, and intervals never decrease along the coloring.
pub fn is_adapted(partition: &OrderedPartition, signature: &IntervalSignature) -> bool {
    let assignment = signature.assignment();
    if assignment.len() != partition.base().n() {
        return false;
    }
    let mut previous = 0;
    for block in partition.sequence() {
        let support = assignment[block[0] - 1];
        if block.iter().any(|&x| assignment[x - 1] != support) {
            return false;
        }
        if support < previous {
            return false;
        }
        previous = support;
    }
    true
}
