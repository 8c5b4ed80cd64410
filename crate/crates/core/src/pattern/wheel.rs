use crate::error::{Error, Result};
use crate::graph::{bits, SimpleGraph};

use super::{checked_sum, PatternKind, SubgraphCounter};

/// `W_w = K_1 + C_{w-1}`, counted as: for every hub `h`, the number of
/// `(w-1)`-cycles inside `N(h)`. For `w >= 5` the hub is the unique vertex of
/// degree `w - 1`, so copies are not double counted.
///
/// Cycles are enumerated from their smallest vertex, through larger vertices
/// only, and kept when the second vertex is smaller than the last one, which
/// fixes the direction. Witness order: hubs ascending, then cycles in that
/// enumeration order.
#[derive(Clone, Debug)]
pub struct WheelCounter {
    order: usize,
}

impl WheelCounter {
    pub fn new(order: usize) -> Result<Self> {
        if order == 4 {
            return Err(Error::Pattern(
                "W4 is K4 and has no unique hub; use the clique pattern K4".into(),
            ));
        }
        if order < 5 {
            return Err(Error::Pattern(format!(
                "wheel order must be at least 5, got {order}"
            )));
        }
        Ok(Self { order })
    }

    fn rim(&self) -> usize {
        self.order - 1
    }
}

/// Walks simple paths `start, ...` inside `allowed`, all vertices after
/// `start` larger than it. `visit` gets every closed, direction-normalized
/// cycle of `len` vertices and returns `true` to stop.
fn walk_cycles(
    host: &SimpleGraph,
    allowed: u64,
    len: usize,
    path: &mut Vec<usize>,
    used: u64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let start = path[0];
    let last = *path.last().expect("path starts non-empty");
    if path.len() == len {
        if host.has_edge(last, start) && path[1] < path[len - 1] {
            return visit(path);
        }
        return false;
    }
    let next = host.neighbors(last) & allowed & !used;
    for v in bits(next) {
        path.push(v);
        let stop = walk_cycles(host, allowed, len, path, used | 1 << v, visit);
        path.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Visits each cycle on `len` vertices whose vertices all lie in `within`.
fn for_each_cycle(
    host: &SimpleGraph,
    within: u64,
    len: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let mut path = Vec::with_capacity(len);
    for start in bits(within) {
        let allowed = within & u64::MAX.checked_shl(start as u32 + 1).unwrap_or(0);
        if (allowed.count_ones() as usize) + 1 < len {
            break;
        }
        path.clear();
        path.push(start);
        if walk_cycles(host, allowed, len, &mut path, 1 << start, visit) {
            return true;
        }
    }
    false
}

impl SubgraphCounter for WheelCounter {
    fn spec(&self) -> String {
        format!("W{}", self.order)
    }

    fn kind(&self) -> PatternKind {
        PatternKind::Wheel { order: self.order }
    }

    fn vertex_count(&self) -> usize {
        self.order
    }

    fn edge_count(&self) -> usize {
        2 * self.rim()
    }

    fn automorphisms(&self) -> u64 {
        // dihedral group of the rim
        2 * self.rim() as u64
    }

    fn graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.order).expect("wheel fits in a bitset");
        let rim = self.rim();
        for k in 0..rim {
            g.add_edge(0, k + 1);
            g.add_edge(k + 1, (k + 1) % rim + 1);
        }
        g
    }

    fn count(&self, host: &SimpleGraph) -> Result<u64> {
        let rim = self.rim();
        let mut total = 0u64;
        let mut overflow = false;
        for hub in 0..host.n() {
            let nbhd = host.neighbors(hub);
            if (nbhd.count_ones() as usize) < rim {
                continue;
            }
            for_each_cycle(host, nbhd, rim, &mut |_| match total.checked_add(1) {
                Some(t) => {
                    total = t;
                    false
                }
                None => {
                    overflow = true;
                    true
                }
            });
            if overflow {
                return checked_sum(u64::MAX, 1);
            }
        }
        Ok(total)
    }

    fn find_copy(&self, host: &SimpleGraph) -> Option<Vec<usize>> {
        let rim = self.rim();
        let mut found = None;
        for hub in 0..host.n() {
            let nbhd = host.neighbors(hub);
            if (nbhd.count_ones() as usize) < rim {
                continue;
            }
            for_each_cycle(host, nbhd, rim, &mut |cycle| {
                let mut vs = cycle.to_vec();
                vs.push(hub);
                vs.sort_unstable();
                found = Some(vs);
                true
            });
            if found.is_some() {
                break;
            }
        }
        found
    }
}
