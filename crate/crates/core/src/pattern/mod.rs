//! Exact counting of non-induced copies of forbidden patterns, and the
//! reward of a complete coloring.
//!
//! Every pattern family is a [`SubgraphCounter`] strategy. A copy is a
//! distinct subgraph (vertex set plus edge set) of the host isomorphic to the
//! pattern; extra host edges among its vertices are allowed. Families are
//! looked up by their spec string through [`PatternRegistry`].

mod bipartite;
mod book;
mod clique;
mod generic;
mod registry;
mod wheel;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeColoring, SimpleGraph};

pub use bipartite::CompleteBipartiteCounter;
pub use book::BookCounter;
pub use clique::CliqueCounter;
pub use generic::{GenericCounter, MAX_PATTERN_VERTICES};
pub use registry::{PatternParser, PatternRegistry};
pub use wheel::WheelCounter;

/// A counting strategy for one forbidden pattern.
pub trait SubgraphCounter: Send + Sync + fmt::Debug {
    /// Spec-language form, e.g. `B3`, `W7`, `K2,5`.
    fn spec(&self) -> String;

    fn kind(&self) -> PatternKind;

    fn vertex_count(&self) -> usize;

    fn edge_count(&self) -> usize;

    /// Order of the pattern's automorphism group.
    fn automorphisms(&self) -> u64;

    /// The pattern itself as a graph on `0..vertex_count()`.
    fn graph(&self) -> SimpleGraph;

    /// Exact number of non-induced copies in `host`.
    fn count(&self, host: &SimpleGraph) -> Result<u64>;

    /// Vertex set (sorted) of the first copy in this counter's enumeration
    /// order, stopping at the first hit.
    fn find_copy(&self, host: &SimpleGraph) -> Option<Vec<usize>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Book { pages: usize },
    Wheel { order: usize },
    CompleteBipartite { small: usize, large: usize },
    Clique { order: usize },
    Explicit,
}

/// Shared handle to a pattern strategy.
#[derive(Clone)]
pub struct PatternGraph(Arc<dyn SubgraphCounter>);

impl PatternGraph {
    pub fn new(counter: impl SubgraphCounter + 'static) -> Self {
        PatternGraph(Arc::new(counter))
    }

    /// Book `B_p`: `p` triangles sharing a base edge.
    pub fn book(pages: usize) -> Result<Self> {
        Ok(Self::new(BookCounter::new(pages)?))
    }

    /// Wheel `W_w`: a hub joined to a cycle on `w - 1` vertices.
    pub fn wheel(order: usize) -> Result<Self> {
        Ok(Self::new(WheelCounter::new(order)?))
    }

    pub fn complete_bipartite(s: usize, t: usize) -> Result<Self> {
        Ok(Self::new(CompleteBipartiteCounter::new(s, t)?))
    }

    pub fn clique(order: usize) -> Result<Self> {
        Ok(Self::new(CliqueCounter::new(order)?))
    }

    /// Arbitrary small connected pattern, counted by exhaustive embedding.
    pub fn explicit(graph: SimpleGraph, label: impl Into<String>) -> Result<Self> {
        Ok(Self::new(GenericCounter::new(graph, label)?))
    }

    /// Parses a spec string with the built-in registry.
    pub fn parse(spec: &str) -> Result<Self> {
        PatternRegistry::builtin().parse(spec)
    }

    pub fn counter(&self) -> &dyn SubgraphCounter {
        self.0.as_ref()
    }

    /// True if `host` contains at least one copy (detect-only path).
    pub fn is_contained_in(&self, host: &SimpleGraph) -> bool {
        self.0.find_copy(host).is_some()
    }

    /// True if the host edges among `vertices` contain this pattern as a
    /// spanning subgraph.
    pub fn is_copy_on(&self, host: &SimpleGraph, vertices: &[usize]) -> Result<bool> {
        if vertices.len() != self.vertex_count() || vertices.iter().any(|&v| v >= host.n()) {
            return Ok(false);
        }
        let sub = host.induced(vertices)?;
        let oracle = GenericCounter::new(self.graph(), self.spec())?;
        Ok(oracle.find_copy(&sub).is_some())
    }
}

impl std::ops::Deref for PatternGraph {
    type Target = dyn SubgraphCounter;

    fn deref(&self) -> &Self::Target {
        self.0.as_ref()
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternGraph({})", self.0.spec())
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.spec())
    }
}

impl PartialEq for PatternGraph {
    fn eq(&self, other: &Self) -> bool {
        self.spec() == other.spec() && self.graph() == other.graph()
    }
}

/// Per-color copy counts of a complete coloring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RewardReport {
    pub per_color: Vec<u64>,
    pub total: u64,
}

impl RewardReport {
    pub fn is_critical(&self) -> bool {
        self.total == 0
    }
}

/// Sum over colors `i` of the number of copies of `patterns[i]` in color `i`.
/// Lower is better; zero means the coloring is critical.
pub fn reward(c: &EdgeColoring, patterns: &[PatternGraph]) -> Result<RewardReport> {
    if patterns.len() != c.m() {
        return Err(Error::Pattern(format!(
            "{} patterns given for {} colors",
            patterns.len(),
            c.m()
        )));
    }
    let per_color = patterns
        .iter()
        .enumerate()
        .map(|(color, p)| p.count(&c.monochrome_graph(color as u8)?))
        .collect::<Result<Vec<_>>>()?;
    let total = per_color
        .iter()
        .try_fold(0u64, |acc, &x| acc.checked_add(x))
        .ok_or_else(|| Error::Range("reward total exceeds u64".into()))?;
    Ok(RewardReport { per_color, total })
}

/// `C(n, k)` in 64 bits; overflow is an error rather than wrapping.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Range(format!("C({n},{k}) exceeds u64")));
        }
    }
    Ok(acc as u64)
}

pub(crate) fn checked_sum(acc: u64, x: u64) -> Result<u64> {
    acc.checked_add(x)
        .ok_or_else(|| Error::Range("copy count exceeds u64".into()))
}

pub(crate) fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// The `p` lowest set bits of `set`, in increasing order.
pub(crate) fn lowest_bits(set: u64, p: usize) -> Vec<usize> {
    crate::graph::bits(set).take(p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values_and_overflow() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(5, 0).unwrap(), 1);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(64, 32).unwrap(), 1_832_624_140_942_590_534);
        assert!(matches!(binomial(100, 50), Err(Error::Range(_))));
    }

    #[test]
    fn reward_of_all_one_k6_with_triangles() {
        let c = EdgeColoring::constant(6, 2, 1).unwrap();
        let k3 = PatternGraph::clique(3).unwrap();
        let r = reward(&c, &[k3.clone(), k3]).unwrap();
        assert_eq!(r.per_color, vec![0, 20]);
        assert_eq!(r.total, 20);
        assert!(!r.is_critical());
    }

    #[test]
    fn reward_host_smaller_than_patterns() {
        let c = EdgeColoring::constant(4, 2, 0).unwrap();
        let pats = [
            PatternGraph::complete_bipartite(2, 5).unwrap(),
            PatternGraph::complete_bipartite(3, 5).unwrap(),
        ];
        assert_eq!(reward(&c, &pats).unwrap().total, 0);
    }

    #[test]
    fn reward_rejects_arity_mismatch() {
        let c = EdgeColoring::constant(4, 2, 0).unwrap();
        let k3 = PatternGraph::clique(3).unwrap();
        assert!(matches!(reward(&c, &[k3]), Err(Error::Pattern(_))));
    }

    #[test]
    fn is_copy_on_checks_spanning_subgraph() {
        let host = SimpleGraph::complete(5).unwrap();
        let w5 = PatternGraph::wheel(5).unwrap();
        assert!(w5.is_copy_on(&host, &[0, 1, 2, 3, 4]).unwrap());
        let c5 = SimpleGraph::cycle(5).unwrap();
        assert!(!w5.is_copy_on(&c5, &[0, 1, 2, 3, 4]).unwrap());
        assert!(!w5.is_copy_on(&host, &[0, 1, 2, 3]).unwrap());
    }
}
