use crate::error::{Error, Result};
use crate::graph::{bits, SimpleGraph};

use super::{checked_sum, factorial, PatternKind, SubgraphCounter};

/// `K_k`, counted by bitset-intersection backtracking over increasing
/// vertex sequences. Witness order: lexicographic over sorted vertex sets.
#[derive(Clone, Debug)]
pub struct CliqueCounter {
    order: usize,
}

impl CliqueCounter {
    pub fn new(order: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::Pattern(format!(
                "clique order must be at least 3, got {order}"
            )));
        }
        Ok(Self { order })
    }
}

#[inline]
fn above(v: usize) -> u64 {
    u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0)
}

fn count_from(host: &SimpleGraph, candidates: u64, remaining: usize) -> Result<u64> {
    if remaining == 0 {
        return Ok(1);
    }
    if (candidates.count_ones() as usize) < remaining {
        return Ok(0);
    }
    if remaining == 1 {
        return Ok(u64::from(candidates.count_ones()));
    }
    bits(candidates).try_fold(0u64, |acc, v| {
        let sub = count_from(
            host,
            candidates & host.neighbors(v) & above(v),
            remaining - 1,
        )?;
        checked_sum(acc, sub)
    })
}

fn first_from(
    host: &SimpleGraph,
    candidates: u64,
    remaining: usize,
    stack: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        return true;
    }
    if (candidates.count_ones() as usize) < remaining {
        return false;
    }
    for v in bits(candidates) {
        stack.push(v);
        if first_from(
            host,
            candidates & host.neighbors(v) & above(v),
            remaining - 1,
            stack,
        ) {
            return true;
        }
        stack.pop();
    }
    false
}

impl SubgraphCounter for CliqueCounter {
    fn spec(&self) -> String {
        format!("K{}", self.order)
    }

    fn kind(&self) -> PatternKind {
        PatternKind::Clique { order: self.order }
    }

    fn vertex_count(&self) -> usize {
        self.order
    }

    fn edge_count(&self) -> usize {
        self.order * (self.order - 1) / 2
    }

    fn automorphisms(&self) -> u64 {
        factorial(self.order)
    }

    fn graph(&self) -> SimpleGraph {
        SimpleGraph::complete(self.order).expect("clique fits in a bitset")
    }

    fn count(&self, host: &SimpleGraph) -> Result<u64> {
        count_from(host, crate::graph::vertex_mask(host.n()), self.order)
    }

    fn find_copy(&self, host: &SimpleGraph) -> Option<Vec<usize>> {
        let mut stack = Vec::with_capacity(self.order);
        first_from(
            host,
            crate::graph::vertex_mask(host.n()),
            self.order,
            &mut stack,
        )
        .then_some(stack)
    }
}
