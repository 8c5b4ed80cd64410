use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

use super::{binomial, checked_sum, factorial, lowest_bits, PatternKind, SubgraphCounter};

/// `K_{s,t}` with `s < t`: the sum over `s`-subsets `S` of
/// `C(|common neighborhood of S|, t)`. With unequal parts every copy has a
/// unique small side, so this counts each copy once. Vertices inside a part
/// may be adjacent in the host.
///
/// Witness order: small sides as lexicographic `s`-subsets, large side the
/// lowest common neighbors.
#[derive(Clone, Debug)]
pub struct CompleteBipartiteCounter {
    small: usize,
    large: usize,
}

impl CompleteBipartiteCounter {
    /// Arguments are normalized so the first part is the smaller one.
    pub fn new(s: usize, t: usize) -> Result<Self> {
        let (small, large) = (s.min(t), s.max(t));
        if small == 0 {
            return Err(Error::Pattern(
                "complete bipartite parts must be nonempty".into(),
            ));
        }
        if small == large {
            return Err(Error::Pattern(format!(
                "K{s},{t} has equal parts, which is not supported"
            )));
        }
        Ok(Self { small, large })
    }

    pub fn parts(&self) -> (usize, usize) {
        (self.small, self.large)
    }
}

/// Calls `visit` with each `k`-subset of `0..n` (ascending, lexicographic) and
/// the intersection of its neighborhoods. Stops when `visit` returns `true`.
fn for_each_subset(
    host: &SimpleGraph,
    k: usize,
    visit: &mut dyn FnMut(&[usize], u64) -> Result<bool>,
) -> Result<()> {
    fn rec(
        host: &SimpleGraph,
        from: usize,
        k: usize,
        common: u64,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], u64) -> Result<bool>,
    ) -> Result<bool> {
        if chosen.len() == k {
            return visit(chosen, common);
        }
        for v in from..host.n() {
            if host.n() - v < k - chosen.len() {
                break;
            }
            chosen.push(v);
            let stop = rec(host, v + 1, k, common & host.neighbors(v), chosen, visit)?;
            chosen.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut chosen = Vec::with_capacity(k);
    rec(host, 0, k, u64::MAX, &mut chosen, visit).map(|_| ())
}

impl SubgraphCounter for CompleteBipartiteCounter {
    fn spec(&self) -> String {
        format!("K{},{}", self.small, self.large)
    }

    fn kind(&self) -> PatternKind {
        PatternKind::CompleteBipartite {
            small: self.small,
            large: self.large,
        }
    }

    fn vertex_count(&self) -> usize {
        self.small + self.large
    }

    fn edge_count(&self) -> usize {
        self.small * self.large
    }

    fn automorphisms(&self) -> u64 {
        factorial(self.small) * factorial(self.large)
    }

    fn graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.small + self.large).expect("pattern fits in a bitset");
        for a in 0..self.small {
            for b in self.small..self.small + self.large {
                g.add_edge(a, b);
            }
        }
        g
    }

    fn count(&self, host: &SimpleGraph) -> Result<u64> {
        let t = self.large as u64;
        let mut total = 0u64;
        for_each_subset(host, self.small, &mut |_, common| {
            total = checked_sum(total, binomial(u64::from(common.count_ones()), t)?)?;
            Ok(false)
        })?;
        Ok(total)
    }

    fn find_copy(&self, host: &SimpleGraph) -> Option<Vec<usize>> {
        let mut found = None;
        for_each_subset(host, self.small, &mut |side, common| {
            if common.count_ones() as usize >= self.large {
                let mut vs = side.to_vec();
                vs.extend(lowest_bits(common, self.large));
                vs.sort_unstable();
                found = Some(vs);
                return Ok(true);
            }
            Ok(false)
        })
        .ok()?;
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_rejects_equal_parts() {
        let k = CompleteBipartiteCounter::new(5, 2).unwrap();
        assert_eq!(k.parts(), (2, 5));
        assert_eq!(k.spec(), "K2,5");
        assert!(CompleteBipartiteCounter::new(3, 3).is_err());
        assert!(CompleteBipartiteCounter::new(0, 3).is_err());
    }

    #[test]
    fn counts_itself_once() {
        let k = CompleteBipartiteCounter::new(2, 5).unwrap();
        assert_eq!(k.count(&k.graph()).unwrap(), 1);
    }

    #[test]
    fn k7_contains_21_copies_of_k25() {
        let k = CompleteBipartiteCounter::new(2, 5).unwrap();
        let k7 = SimpleGraph::complete(7).unwrap();
        assert_eq!(k.count(&k7).unwrap(), 21);
        assert_eq!(k.find_copy(&k7), Some((0..7).collect()));
    }

    #[test]
    fn stars() {
        // K_{1,3} in K_{1,4}: C(4,3)
        let star = CompleteBipartiteCounter::new(1, 3).unwrap();
        let host = SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(star.count(&host).unwrap(), 4);
    }
}
