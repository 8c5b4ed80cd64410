use crate::error::{Error, Result};
use crate::graph::{bits, vertex_mask, SimpleGraph};

use super::{checked_sum, PatternKind, SubgraphCounter};

/// Largest pattern accepted by [`GenericCounter`].
pub const MAX_PATTERN_VERTICES: usize = 10;

/// Counts copies of an arbitrary small connected pattern as
/// `(injective edge-preserving maps pattern -> host) / |Aut(pattern)|`.
///
/// This is the reference oracle for the specialized counters. Pattern
/// vertices are placed in breadth-first order so that every vertex after the
/// first has an already-placed neighbor; host candidates are ascending.
#[derive(Clone, Debug)]
pub struct GenericCounter {
    pattern: SimpleGraph,
    label: String,
    order: Vec<usize>,
    /// For each position in `order`, the earlier positions adjacent to it.
    back_edges: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    automorphisms: u64,
}

impl GenericCounter {
    pub fn new(pattern: SimpleGraph, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if pattern.n() > MAX_PATTERN_VERTICES {
            return Err(Error::Pattern(format!(
                "pattern `{label}` has {} vertices, at most {MAX_PATTERN_VERTICES} supported",
                pattern.n()
            )));
        }
        if pattern.edge_count() == 0 || !pattern.is_connected() {
            return Err(Error::Pattern(format!(
                "pattern `{label}` must be connected with at least one edge"
            )));
        }
        let order = bfs_order(&pattern);
        let position: Vec<usize> = {
            let mut pos = vec![0; pattern.n()];
            for (k, &v) in order.iter().enumerate() {
                pos[v] = k;
            }
            pos
        };
        let back_edges = order
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                bits(pattern.neighbors(v))
                    .map(|u| position[u])
                    .filter(|&p| p < k)
                    .collect()
            })
            .collect();
        let degrees = order.iter().map(|&v| pattern.degree(v)).collect();
        let mut counter = Self {
            pattern,
            label,
            order,
            back_edges,
            degrees,
            automorphisms: 0,
        };
        // every injective edge-preserving self-map is a bijection on the edge set
        counter.automorphisms = counter.embeddings(&counter.pattern.clone())?;
        Ok(counter)
    }

    /// Number of injective maps from pattern vertices into `host` that send
    /// every pattern edge to a host edge.
    pub fn embeddings(&self, host: &SimpleGraph) -> Result<u64> {
        let mut total = 0u64;
        let mut image = vec![0usize; self.order.len()];
        self.search(host, 0, 0, &mut image, &mut |_| {
            total = checked_sum(total, 1)?;
            Ok(false)
        })?;
        Ok(total)
    }

    fn search(
        &self,
        host: &SimpleGraph,
        depth: usize,
        used: u64,
        image: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        if depth == self.order.len() {
            return visit(image);
        }
        let mut candidates = vertex_mask(host.n()) & !used;
        for &p in &self.back_edges[depth] {
            candidates &= host.neighbors(image[p]);
        }
        for h in bits(candidates) {
            if host.degree(h) < self.degrees[depth] {
                continue;
            }
            image[depth] = h;
            if self.search(host, depth + 1, used | 1 << h, image, visit)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn bfs_order(g: &SimpleGraph) -> Vec<usize> {
    let mut order = vec![0];
    let mut seen = 1u64;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for u in bits(g.neighbors(v) & !seen) {
            seen |= 1 << u;
            order.push(u);
        }
    }
    order
}

impl SubgraphCounter for GenericCounter {
    fn spec(&self) -> String {
        self.label.clone()
    }

    fn kind(&self) -> PatternKind {
        PatternKind::Explicit
    }

    fn vertex_count(&self) -> usize {
        self.pattern.n()
    }

    fn edge_count(&self) -> usize {
        self.pattern.edge_count()
    }

    fn automorphisms(&self) -> u64 {
        self.automorphisms
    }

    fn graph(&self) -> SimpleGraph {
        self.pattern.clone()
    }

    fn count(&self, host: &SimpleGraph) -> Result<u64> {
        let maps = self.embeddings(host)?;
        debug_assert_eq!(maps % self.automorphisms, 0);
        Ok(maps / self.automorphisms)
    }

    fn find_copy(&self, host: &SimpleGraph) -> Option<Vec<usize>> {
        let mut found = None;
        let mut image = vec![0usize; self.order.len()];
        self.search(host, 0, 0, &mut image, &mut |img| {
            let mut vs = img.to_vec();
            vs.sort_unstable();
            found = Some(vs);
            Ok(true)
        })
        .ok()?;
        found
    }
}
