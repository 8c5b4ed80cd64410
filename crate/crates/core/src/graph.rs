//! Edge-colorings of complete graphs and the simple graphs their color classes induce.
//!
//! Edges of `K_n` are indexed lexicographically over pairs `(i, j)` with `i < j`:
//! `(0,1), (0,2), ..., (0,n-1), (1,2), ...`. Colorings are built strictly in that
//! order, so a partial coloring is always a colored prefix followed by
//! [`UNCOLORED`] entries.

use std::fmt;

use crate::error::{Error, Result};

/// Sentinel for an edge that has not been assigned a color yet.
pub const UNCOLORED: u8 = u8::MAX;

/// Largest supported vertex count; adjacency rows are single `u64` bitsets.
pub const MAX_VERTICES: usize = 64;

/// Number of edges of `K_n`.
pub const fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of edge `(i, j)` in lexicographic order over pairs of `K_n`.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= j || j >= n {
        return Err(Error::Parameter(format!(
            "edge ({i},{j}) is not a pair i < j < {n}"
        )));
    }
    Ok(edge_index_unchecked(i, j, n))
}

#[inline]
pub(crate) fn edge_index_unchecked(i: usize, j: usize, n: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)`, `i < j < n`, in edge-index order.
pub fn edge_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Assignment of one of `m` colors to (a prefix of) the edges of `K_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    m: usize,
    colors: Vec<u8>,
    colored: usize,
}

impl EdgeColoring {
    /// Fully uncolored `K_n` with `m` available colors.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        check_dimensions(n, m)?;
        Ok(Self {
            n,
            m,
            colors: vec![UNCOLORED; edge_count(n)],
            colored: 0,
        })
    }

    /// Every edge of `K_n` gets `color`.
    pub fn constant(n: usize, m: usize, color: u8) -> Result<Self> {
        let mut c = Self::new(n, m)?;
        c.check_color(color)?;
        c.colors.fill(color);
        c.colored = c.colors.len();
        Ok(c)
    }

    /// Builds a coloring from raw entries, enforcing the prefix shape.
    pub fn from_colors(n: usize, m: usize, colors: Vec<u8>) -> Result<Self> {
        check_dimensions(n, m)?;
        if colors.len() != edge_count(n) {
            return Err(Error::Parameter(format!(
                "expected {} edge colors for K_{n}, got {}",
                edge_count(n),
                colors.len()
            )));
        }
        let colored = colors.iter().take_while(|&&c| c != UNCOLORED).count();
        if let Some(pos) = colors[colored..].iter().position(|&c| c != UNCOLORED) {
            return Err(Error::Parameter(format!(
                "edge {} is colored after uncolored edge {colored}",
                colored + pos
            )));
        }
        if let Some(&bad) = colors[..colored].iter().find(|&&c| usize::from(c) >= m) {
            return Err(Error::Parameter(format!(
                "color {bad} out of range for m = {m}"
            )));
        }
        Ok(Self {
            n,
            m,
            colors,
            colored,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_edges(&self) -> usize {
        self.colors.len()
    }

    /// Raw entries in edge-index order; uncolored edges hold [`UNCOLORED`].
    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Number of edges colored so far (the length of the colored prefix).
    pub fn colored_len(&self) -> usize {
        self.colored
    }

    pub fn is_complete(&self) -> bool {
        self.colored == self.colors.len()
    }

    /// Color of edge `(i, j)` in either orientation; `None` while uncolored.
    pub fn color_of(&self, i: usize, j: usize) -> Option<u8> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b || b >= self.n {
            return None;
        }
        match self.colors[edge_index_unchecked(a, b, self.n)] {
            UNCOLORED => None,
            c => Some(c),
        }
    }

    /// Colors the next edge in construction order.
    pub fn push(&mut self, color: u8) -> Result<()> {
        self.check_color(color)?;
        if self.is_complete() {
            return Err(Error::Parameter("coloring is already complete".into()));
        }
        self.colors[self.colored] = color;
        self.colored += 1;
        Ok(())
    }

    fn check_color(&self, color: u8) -> Result<()> {
        if usize::from(color) >= self.m {
            return Err(Error::Parameter(format!(
                "color {color} out of range for m = {}",
                self.m
            )));
        }
        Ok(())
    }

    fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Incomplete {
                colored: self.colored,
                edges: self.colors.len(),
            })
        }
    }

    /// The graph on `n` vertices formed by the edges of one color.
    pub fn monochrome_graph(&self, color: u8) -> Result<SimpleGraph> {
        self.require_complete()?;
        self.check_color(color)?;
        let mut g = SimpleGraph::empty(self.n)?;
        for ((i, j), &c) in edge_pairs(self.n).zip(&self.colors) {
            if c == color {
                g.add_edge(i, j);
            }
        }
        Ok(g)
    }

    /// Per-color edge counts of a complete coloring.
    pub fn color_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.m];
        for &c in &self.colors[..self.colored] {
            hist[usize::from(c)] += 1;
        }
        hist
    }

    /// Coloring of `K_{n-1}` left after removing vertex `v`; the remaining
    /// vertices keep their relative order.
    pub fn delete_vertex(&self, v: usize) -> Result<EdgeColoring> {
        self.require_complete()?;
        if v >= self.n {
            return Err(Error::Parameter(format!(
                "vertex {v} out of range for K_{}",
                self.n
            )));
        }
        if self.n < 2 {
            return Err(Error::Parameter("cannot delete a vertex of K_1".into()));
        }
        let colors = edge_pairs(self.n)
            .zip(&self.colors)
            .filter(|((i, j), _)| *i != v && *j != v)
            .map(|(_, &c)| c)
            .collect();
        EdgeColoring::from_colors(self.n - 1, self.m, colors)
    }

    /// Moves vertex `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<EdgeColoring> {
        self.require_complete()?;
        check_permutation(perm, self.n)?;
        let mut colors = vec![UNCOLORED; self.colors.len()];
        for ((i, j), &c) in edge_pairs(self.n).zip(&self.colors) {
            let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
            colors[edge_index_unchecked(a, b, self.n)] = c;
        }
        EdgeColoring::from_colors(self.n, self.m, colors)
    }

    /// One-line form `"n m <digits>"`; uncolored edges print as `.`.
    pub fn to_compact(&self) -> String {
        let digits: String = self.colors.iter().map(|&c| color_symbol(c)).collect();
        format!("{} {} {}", self.n, self.m, digits)
            .trim_end()
            .to_string()
    }

    pub fn from_compact(text: &str) -> Result<Self> {
        let mut parts = text.split_whitespace();
        let mut number = |what: &str| -> Result<usize> {
            parts
                .next()
                .ok_or_else(|| Error::Parse(format!("compact coloring is missing {what}")))?
                .parse()
                .map_err(|_| Error::Parse(format!("compact coloring has a malformed {what}")))
        };
        let n = number("vertex count")?;
        let m = number("color count")?;
        let digits = parts.next().unwrap_or("");
        if parts.next().is_some() {
            return Err(Error::Parse("trailing data after compact coloring".into()));
        }
        if m > 10 {
            return Err(Error::Parse(format!(
                "compact form supports at most 10 colors, got {m}"
            )));
        }
        let colors = digits
            .chars()
            .map(|ch| match ch {
                '.' => Ok(UNCOLORED),
                d => d
                    .to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad color symbol `{d}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        EdgeColoring::from_colors(n, m, colors)
    }
}

impl fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeColoring({})", self.to_compact())
    }
}

impl fmt::Display for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

fn color_symbol(c: u8) -> char {
    if c == UNCOLORED {
        '.'
    } else {
        char::from_digit(u32::from(c), 36).unwrap_or('?')
    }
}

fn check_dimensions(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("vertex count must be at least 1".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::Parameter(format!(
            "vertex count {n} exceeds the supported maximum {MAX_VERTICES}"
        )));
    }
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 colors, got {m}")));
    }
    if m >= usize::from(UNCOLORED) {
        return Err(Error::Parameter(format!("too many colors: {m}")));
    }
    Ok(())
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::Parameter(format!(
            "permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Parameter("not a permutation".into()));
        }
    }
    Ok(())
}

/// Parses a 0/1 matrix into a complete 2-coloring.
pub fn parse_matrix(text: &str) -> Result<EdgeColoring> {
    parse_matrix_with_colors(text, 2)
}

/// Parses a symmetric matrix of color digits `0..m`.
///
/// Rows may separate entries with whitespace, commas or `&` (a trailing `\\`
/// is ignored), or run digits together. The diagonal may be `-`, empty,
/// `0`, or left out entirely.
pub fn parse_matrix_with_colors(text: &str, m: usize) -> Result<EdgeColoring> {
    let rows: Vec<Vec<Cell>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(row, line)| split_row(row, line))
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("matrix is empty".into()));
    }
    check_dimensions(n, m)?;

    let mut grid = vec![vec![0u8; n]; n];
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<Cell> = if row.len() == n {
            match row[i] {
                Cell::Diagonal | Cell::Value(0) => row.clone(),
                Cell::Value(_) => {
                    return Err(Error::Matrix {
                        row: i,
                        col: i,
                        msg: "nonzero diagonal entry".into(),
                    })
                }
            }
        } else if row.len() + 1 == n {
            let mut cells = row.clone();
            cells.insert(i, Cell::Diagonal);
            cells
        } else {
            return Err(Error::Matrix {
                row: i,
                col: row.len(),
                msg: format!(
                    "row has {} entries, matrix is not square ({n} rows)",
                    row.len()
                ),
            });
        };
        for (j, cell) in cells.iter().enumerate() {
            match *cell {
                Cell::Diagonal if j != i => {
                    return Err(Error::Matrix {
                        row: i,
                        col: j,
                        msg: "missing entry off the diagonal".into(),
                    })
                }
                Cell::Diagonal => {}
                Cell::Value(v) => {
                    if j != i && usize::from(v) >= m {
                        return Err(Error::Matrix {
                            row: i,
                            col: j,
                            msg: format!("entry {v} is not a color in 0..{m}"),
                        });
                    }
                    grid[i][j] = v;
                }
            }
        }
    }

    let mut colors = Vec::with_capacity(edge_count(n));
    for (i, j) in edge_pairs(n) {
        if grid[i][j] != grid[j][i] {
            return Err(Error::Matrix {
                row: j,
                col: i,
                msg: format!(
                    "matrix is not symmetric: ({i},{j}) = {} but ({j},{i}) = {}",
                    grid[i][j], grid[j][i]
                ),
            });
        }
        colors.push(grid[i][j]);
    }
    EdgeColoring::from_colors(n, m, colors)
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Diagonal,
    Value(u8),
}

fn split_row(row: usize, line: &str) -> Result<Vec<Cell>> {
    let line = line.strip_suffix("\\\\").unwrap_or(line);
    let separator = if line.contains('&') {
        Some('&')
    } else if line.contains(',') {
        Some(',')
    } else {
        None
    };
    let bad = |col: usize, token: &str| Error::Matrix {
        row,
        col,
        msg: format!("unrecognized entry `{token}`"),
    };
    match separator {
        Some(sep) => line
            .split(sep)
            .enumerate()
            .map(|(col, tok)| match tok.trim() {
                "" | "-" => Ok(Cell::Diagonal),
                t => t.parse::<u8>().map(Cell::Value).map_err(|_| bad(col, t)),
            })
            .collect(),
        None => line
            .chars()
            .filter(|c| !c.is_whitespace())
            .enumerate()
            .map(|(col, ch)| match ch {
                '-' => Ok(Cell::Diagonal),
                d => d
                    .to_digit(10)
                    .map(|v| Cell::Value(v as u8))
                    .ok_or_else(|| bad(col, &d.to_string())),
            })
            .collect(),
    }
}

/// Renders a complete coloring as `n` rows of `n` digits with `-` on the diagonal.
pub fn emit_matrix(c: &EdgeColoring) -> Result<String> {
    c.require_complete()?;
    if c.m > 10 {
        return Err(Error::Parameter(format!(
            "matrix form supports at most 10 colors, got {}",
            c.m
        )));
    }
    let mut out = String::with_capacity(c.n * (c.n + 1));
    for i in 0..c.n {
        for j in 0..c.n {
            out.push(match c.color_of(i, j) {
                Some(col) => color_symbol(col),
                None => '-',
            });
        }
        out.push('\n');
    }
    Ok(out)
}

/// Simple undirected graph on at most [`MAX_VERTICES`] vertices, one
/// neighbor bitset per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Parameter(format!(
                "vertex count {n} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        Ok(Self { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for (i, j) in edge_pairs(n) {
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::Parameter(format!(
                    "invalid edge ({i},{j}) for {n} vertices"
                )));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!(
                "a cycle needs 3 vertices, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Neighbor bitset of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    /// Adds edge `{i, j}`; self-loops are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adj[i] |= 1 << j;
            self.adj[j] |= 1 << i;
        }
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adj[i] &= !(1 << j);
        self.adj[j] &= !(1 << i);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        edge_pairs(self.n).filter(|&(i, j)| self.has_edge(i, j))
    }

    pub fn complement(&self) -> SimpleGraph {
        let all = vertex_mask(self.n);
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, &a)| !a & all & !(1 << v))
            .collect();
        SimpleGraph { n: self.n, adj }
    }

    /// Moves vertex `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimpleGraph> {
        check_permutation(perm, self.n)?;
        let mut g = SimpleGraph::empty(self.n)?;
        for (i, j) in self.edges() {
            g.add_edge(perm[i], perm[j]);
        }
        Ok(g)
    }

    pub fn delete_vertex(&self, v: usize) -> Result<SimpleGraph> {
        if v >= self.n {
            return Err(Error::Parameter(format!("vertex {v} out of range")));
        }
        let mut g = SimpleGraph::empty(self.n - 1)?;
        let shift = |x: usize| if x > v { x - 1 } else { x };
        for (i, j) in self.edges().filter(|&(i, j)| i != v && j != v) {
            g.add_edge(shift(i), shift(j));
        }
        Ok(g)
    }

    /// Induced subgraph on `vertices`, relabeled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<SimpleGraph> {
        let mut g = SimpleGraph::empty(vertices.len())?;
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == vertex_mask(self.n)
    }

    /// Reads a 0/1 adjacency matrix in the same text layouts as [`parse_matrix`].
    pub fn from_matrix(text: &str) -> Result<SimpleGraph> {
        let c = parse_matrix(text)?;
        c.monochrome_graph(1)
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges=[", self.n)?;
        for (k, (i, j)) in self.edges().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}-{j}")?;
        }
        f.write_str("])")
    }
}

/// Bitset with the lowest `n` bits set.
#[inline]
pub fn vertex_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of `set` in increasing order.
#[inline]
pub fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}
