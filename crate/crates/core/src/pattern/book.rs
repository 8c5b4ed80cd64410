use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

use super::{binomial, checked_sum, factorial, lowest_bits, PatternKind, SubgraphCounter};

/// `B_p = K_2 + empty(p)`: a base edge `uv` plus `p` common neighbors.
///
/// For `p >= 2` the base edge is the only edge whose endpoints have `p`
/// common neighbors inside the copy, so each copy is counted once by
/// `sum over edges uv of C(|N(u) & N(v)|, p)`.
///
/// Witness order: base edges in lexicographic order, pages are the lowest
/// common neighbors.
#[derive(Clone, Debug)]
pub struct BookCounter {
    pages: usize,
}

impl BookCounter {
    pub fn new(pages: usize) -> Result<Self> {
        if pages < 2 {
            return Err(Error::Pattern(format!(
                "book needs at least 2 pages, got {pages}"
            )));
        }
        Ok(Self { pages })
    }

    pub fn pages(&self) -> usize {
        self.pages
    }
}

impl SubgraphCounter for BookCounter {
    fn spec(&self) -> String {
        format!("B{}", self.pages)
    }

    fn kind(&self) -> PatternKind {
        PatternKind::Book { pages: self.pages }
    }

    fn vertex_count(&self) -> usize {
        self.pages + 2
    }

    fn edge_count(&self) -> usize {
        2 * self.pages + 1
    }

    fn automorphisms(&self) -> u64 {
        2 * factorial(self.pages)
    }

    fn graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.pages + 2).expect("book fits in a bitset");
        g.add_edge(0, 1);
        for page in 2..self.pages + 2 {
            g.add_edge(0, page);
            g.add_edge(1, page);
        }
        g
    }

    fn count(&self, host: &SimpleGraph) -> Result<u64> {
        let p = self.pages as u64;
        host.edges().try_fold(0u64, |acc, (u, v)| {
            let common = (host.neighbors(u) & host.neighbors(v)).count_ones();
            checked_sum(acc, binomial(u64::from(common), p)?)
        })
    }

    fn find_copy(&self, host: &SimpleGraph) -> Option<Vec<usize>> {
        host.edges().find_map(|(u, v)| {
            let common = host.neighbors(u) & host.neighbors(v);
            (common.count_ones() as usize >= self.pages).then(|| {
                let mut vs = lowest_bits(common, self.pages);
                vs.extend([u, v]);
                vs.sort_unstable();
                vs
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let b = BookCounter::new(3).unwrap();
        assert_eq!(b.vertex_count(), 5);
        assert_eq!(b.edge_count(), 7);
        assert_eq!(b.graph().edge_count(), 7);
        assert!(BookCounter::new(1).is_err());
    }

    #[test]
    fn counts_itself_once() {
        let b = BookCounter::new(3).unwrap();
        assert_eq!(b.count(&b.graph()).unwrap(), 1);
        assert_eq!(b.find_copy(&b.graph()), Some(vec![0, 1, 2, 3, 4]));
    }

    #[test]
    fn k4_holds_six_b2() {
        // C(4,2) base edges, each with C(2,2) page pairs
        let b = BookCounter::new(2).unwrap();
        assert_eq!(b.count(&SimpleGraph::complete(4).unwrap()).unwrap(), 6);
    }

    #[test]
    fn no_copy_in_sparse_host() {
        let b = BookCounter::new(2).unwrap();
        let c6 = SimpleGraph::cycle(6).unwrap();
        assert_eq!(b.count(&c6).unwrap(), 0);
        assert_eq!(b.find_copy(&c6), None);
    }
}
