//! Bipartite-graph encoding of the vertices of a product of two simplices.
//!
//! The vertex `e_i x f_j` of the product is the edge `(i, j)` of the complete
//! bipartite graph on `m` row nodes and `n` column nodes. A simplex is a
//! forest in that graph, stored as a bitset over the `m * n` edge positions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported `m * n`.
pub const MAX_EDGES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid dimensions m={m}, n={n} (need m, n >= 1 and m*n <= {MAX_EDGES})")]
    InvalidDims { m: usize, n: usize },
    #[error("edge e{row}f{col} out of range for m={m}, n={n}")]
    OutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },
    #[error("edges do not form a single simple cycle")]
    NotACycle,
}

/// Numbers of rows (`m`) and columns (`n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dims {
    m: usize,
    n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Result<Self, GraphError> {
        if m == 0 || n == 0 || m * n > MAX_EDGES {
            return Err(GraphError::InvalidDims { m, n });
        }
        Ok(Dims { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges of a spanning tree, `m + n - 1`.
    pub fn tree_size(&self) -> usize {
        self.m + self.n - 1
    }

    /// Number of maximal simplices of any triangulation, `C(m+n-2, m-1)`.
    pub fn triangulation_size(&self) -> u64 {
        binomial((self.m + self.n - 2) as u64, (self.m - 1) as u64)
    }

    pub fn pos(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.m && col < self.n);
        row * self.n + col
    }

    pub fn vertex_at(&self, pos: usize) -> PVertex {
        PVertex {
            row: pos / self.n,
            col: pos % self.n,
        }
    }

    /// The singleton simplex `{e_row f_col}`.
    pub fn edge(&self, row: usize, col: usize) -> Simplex {
        Simplex::from_bits(1u128 << self.pos(row, col))
    }

    /// Checked construction of an edge from 0-based indices.
    pub fn checked_vertex(&self, row: usize, col: usize) -> Result<PVertex, GraphError> {
        if row >= self.m || col >= self.n {
            return Err(GraphError::OutOfRange {
                row: row + 1,
                col: col + 1,
                m: self.m,
                n: self.n,
            });
        }
        Ok(PVertex { row, col })
    }

    pub fn simplex<I: IntoIterator<Item = (usize, usize)>>(&self, edges: I) -> Simplex {
        let mut s = Simplex::empty();
        for (r, c) in edges {
            s = s.with(self.pos(r, c));
        }
        s
    }

    pub fn row_mask(&self, row: usize) -> Simplex {
        let ones = if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        };
        Simplex::from_bits(ones << (row * self.n))
    }

    pub fn col_mask(&self, col: usize) -> Simplex {
        let mut bits = 0u128;
        for r in 0..self.m {
            bits |= 1u128 << self.pos(r, col);
        }
        Simplex::from_bits(bits)
    }

    pub fn full(&self) -> Simplex {
        let total = self.m * self.n;
        Simplex::from_bits(if total == 128 {
            u128::MAX
        } else {
            (1u128 << total) - 1
        })
    }

    pub fn edges(&self, s: Simplex) -> impl Iterator<Item = PVertex> + '_ {
        s.positions().map(move |p| self.vertex_at(p))
    }

    pub fn node_count(&self) -> usize {
        self.m + self.n
    }

    pub fn node_index(&self, v: Node) -> usize {
        match v {
            Node::Row(i) => i,
            Node::Col(j) => self.m + j,
        }
    }

    pub fn node_at(&self, idx: usize) -> Node {
        if idx < self.m {
            Node::Row(idx)
        } else {
            Node::Col(idx - self.m)
        }
    }

    /// Format a simplex with 1-based labels, e.g. `{e1f1,e2f1}`.
    pub fn fmt_simplex(&self, s: Simplex) -> String {
        let parts: Vec<String> = self.edges(s).map(|v| v.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A vertex `e_row x f_col` of the product; an edge of the bipartite graph.
/// Indices are 0-based; `Display` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PVertex {
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for PVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}f{}", self.row + 1, self.col + 1)
    }
}

/// A node of the bipartite graph: a vertex `e_i` of the first simplex or `f_j`
/// of the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Row(i) => write!(f, "e{}", i + 1),
            Node::Col(j) => write!(f, "f{}", j + 1),
        }
    }
}

/// Edge set over the `m * n` positions. Ordering is by bitset value, which is
/// the canonical container order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Simplex(u128);

impl Simplex {
    pub const fn empty() -> Self {
        Simplex(0)
    }

    pub const fn from_bits(bits: u128) -> Self {
        Simplex(bits)
    }

    pub const fn bits(&self) -> u128 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn has(&self, pos: usize) -> bool {
        self.0 >> pos & 1 == 1
    }

    #[must_use]
    pub fn with(&self, pos: usize) -> Self {
        Simplex(self.0 | 1u128 << pos)
    }

    #[must_use]
    pub fn without(&self, pos: usize) -> Self {
        Simplex(self.0 & !(1u128 << pos))
    }

    pub fn is_subset(&self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(&self, other: Simplex) -> bool {
        self.0 & other.0 != 0
    }

    #[must_use]
    pub fn union(&self, other: Simplex) -> Self {
        Simplex(self.0 | other.0)
    }

    #[must_use]
    pub fn inter(&self, other: Simplex) -> Self {
        Simplex(self.0 & other.0)
    }

    #[must_use]
    pub fn minus(&self, other: Simplex) -> Self {
        Simplex(self.0 & !other.0)
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }
}

/// Union-find labelling of the connected components of `T(s)`.
#[derive(Debug, Clone)]
pub struct Components {
    m: usize,
    label: Vec<usize>,
    count: usize,
}

impl Components {
    pub fn of(dims: Dims, s: Simplex) -> Self {
        let total = dims.node_count();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for pos in s.positions() {
            let v = dims.vertex_at(pos);
            let a = find(&mut parent, v.row);
            let b = find(&mut parent, dims.m() + v.col);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; total];
        let mut count = 0;
        let mut root_label = vec![usize::MAX; total];
        for x in 0..total {
            let r = find(&mut parent, x);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            label[x] = root_label[r];
        }
        Components {
            m: dims.m(),
            label,
            count,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn of_row(&self, i: usize) -> usize {
        self.label[i]
    }

    pub fn of_col(&self, j: usize) -> usize {
        self.label[self.m + j]
    }

    pub fn of_node(&self, v: Node) -> usize {
        match v {
            Node::Row(i) => self.of_row(i),
            Node::Col(j) => self.of_col(j),
        }
    }

    pub fn rows_of(&self, c: usize) -> Vec<usize> {
        (0..self.m).filter(|&i| self.label[i] == c).collect()
    }

    pub fn cols_of(&self, c: usize) -> Vec<usize> {
        (self.m..self.label.len())
            .filter(|&x| self.label[x] == c)
            .map(|x| x - self.m)
            .collect()
    }

    /// Vertex sets of all components, ordered by smallest node (rows first).
    pub fn sets(&self) -> Vec<Vec<Node>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &c) in self.label.iter().enumerate() {
            let v = if x < self.m {
                Node::Row(x)
            } else {
                Node::Col(x - self.m)
            };
            out[c].push(v);
        }
        out
    }
}

pub fn components(dims: Dims, s: Simplex) -> Vec<Vec<Node>> {
    Components::of(dims, s).sets()
}

pub fn is_forest(dims: Dims, s: Simplex) -> bool {
    s.len() + Components::of(dims, s).count() == dims.node_count()
}

pub fn is_spanning_tree(dims: Dims, s: Simplex) -> bool {
    s.len() == dims.tree_size() && is_forest(dims, s)
}

/// Rows adjacent to column `j` in `T(s)`, as a sorted list.
pub fn col_neighbors(dims: Dims, s: Simplex, j: usize) -> Vec<usize> {
    (0..dims.m()).filter(|&i| s.has(dims.pos(i, j))).collect()
}

/// Columns adjacent to row `i` in `T(s)`.
pub fn row_neighbors(dims: Dims, s: Simplex, i: usize) -> Vec<usize> {
    (0..dims.n()).filter(|&j| s.has(dims.pos(i, j))).collect()
}

/// Bitmask of the rows adjacent to column `j` (bit `i` set for row `i`).
pub fn col_neighbor_mask(dims: Dims, s: Simplex, j: usize) -> u128 {
    let mut mask = 0u128;
    for i in 0..dims.m() {
        if s.has(dims.pos(i, j)) {
            mask |= 1 << i;
        }
    }
    mask
}

pub fn neighborhood(dims: Dims, s: Simplex, v: Node) -> Vec<Node> {
    match v {
        Node::Row(i) => row_neighbors(dims, s, i)
            .into_iter()
            .map(Node::Col)
            .collect(),
        Node::Col(j) => col_neighbors(dims, s, j)
            .into_iter()
            .map(Node::Row)
            .collect(),
    }
}

/// The set of column neighbourhoods with more than one row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape {
    pub blocks: Vec<Vec<usize>>,
}

impl Shape {
    pub fn is_unmixed(&self, m: usize) -> bool {
        self.blocks.len() == 1 && self.blocks[0].len() == m
    }

    pub fn contains_block(&self, rows: &[usize]) -> bool {
        self.blocks.iter().any(|b| b.as_slice() == rows)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let rows: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", rows.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn shape(dims: Dims, s: Simplex) -> Shape {
    let mut blocks: Vec<Vec<usize>> = (0..dims.n())
        .map(|j| col_neighbors(dims, s, j))
        .filter(|b| b.len() > 1)
        .collect();
    blocks.sort();
    Shape { blocks }
}

fn adjacency(dims: Dims, s: Simplex) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); dims.node_count()];
    for pos in s.positions() {
        let v = dims.vertex_at(pos);
        adj[v.row].push(dims.m() + v.col);
        adj[dims.m() + v.col].push(v.row);
    }
    adj
}

/// The unique path between two nodes in the forest `T(s)`, as a node list.
pub fn tree_path(dims: Dims, s: Simplex, u: Node, v: Node) -> Option<Vec<Node>> {
    let adj = adjacency(dims, s);
    let (src, dst) = (dims.node_index(u), dims.node_index(v));
    let mut prev = vec![usize::MAX; dims.node_count()];
    prev[src] = src;
    let mut stack = vec![src];
    while let Some(x) = stack.pop() {
        if x == dst {
            break;
        }
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                stack.push(y);
            }
        }
    }
    if prev[dst] == usize::MAX {
        return None;
    }
    let mut path = vec![dst];
    let mut x = dst;
    while x != src {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    Some(path.into_iter().map(|x| dims.node_at(x)).collect())
}

/// Edges traversed along a node path.
pub fn path_edges(dims: Dims, path: &[Node]) -> Vec<PVertex> {
    path.windows(2)
        .map(|w| match (w[0], w[1]) {
            (Node::Row(i), Node::Col(j)) | (Node::Col(j), Node::Row(i)) => {
                PVertex { row: i, col: j }
            }
            _ => unreachable!("path in a bipartite graph alternates sides"),
        })
        .inspect(|v| debug_assert!(v.row < dims.m()))
        .collect()
}

pub fn path_simplex(dims: Dims, path: &[Node]) -> Simplex {
    dims.simplex(path_edges(dims, path).into_iter().map(|v| (v.row, v.col)))
}

/// Returns the `u`-`v` tree path if it is `b`-alternating with respect to
/// `xi`: edges `b, b+2, ...` (1-based) lie in `xi` and the others do not.
pub fn alternating_path(
    dims: Dims,
    s: Simplex,
    xi: Simplex,
    u: Node,
    v: Node,
    b: u8,
) -> Option<Vec<Node>> {
    assert!(b == 1 || b == 2, "alternation parity must be 1 or 2");
    let path = tree_path(dims, s, u, v)?;
    let ok = path_edges(dims, &path).iter().enumerate().all(|(k, e)| {
        let in_xi = xi.has(dims.pos(e.row, e.col));
        let should = (k + 1) % 2 == (b as usize) % 2;
        in_xi == should
    });
    ok.then_some(path)
}

/// Union of the tree paths joining the given nodes: the smallest subforest
/// of `s` in which they are all connected.
pub fn steiner_subforest(dims: Dims, s: Simplex, nodes: &[Node]) -> Option<Simplex> {
    let mut acc = Simplex::empty();
    let (&first, rest) = nodes.split_first()?;
    for &v in rest {
        let p = tree_path(dims, s, first, v)?;
        acc = acc.union(path_simplex(dims, &p));
    }
    Some(acc)
}

/// Two-line drawing test: rows on one line in `row_order`, columns on the
/// other line in `col_order` drawn in the opposite direction. Edges `(i,j)`
/// and `(i',j')` cross when `i` precedes `i'` and `j` precedes `j'`.
pub fn noncrossing(dims: Dims, s: Simplex, row_order: &[usize], col_order: &[usize]) -> bool {
    let mut rpos = vec![usize::MAX; dims.m()];
    for (k, &i) in row_order.iter().enumerate() {
        rpos[i] = k;
    }
    let mut cpos = vec![usize::MAX; dims.n()];
    for (k, &j) in col_order.iter().enumerate() {
        cpos[j] = k;
    }
    let edges: Vec<PVertex> = dims.edges(s).collect();
    for (a, e) in edges.iter().enumerate() {
        for f in &edges[a + 1..] {
            let (ri, rj) = (rpos[e.row], rpos[f.row]);
            let (ci, cj) = (cpos[e.col], cpos[f.col]);
            if (ri < rj && ci < cj) || (rj < ri && cj < ci) {
                return false;
            }
        }
    }
    true
}

/// All spanning trees of `G_{m,n}` in increasing bitset order.
pub fn spanning_trees(dims: Dims) -> Vec<Simplex> {
    let total = dims.m() * dims.n();
    let need = dims.tree_size();
    let mut out = Vec::new();
    let mut parent: Vec<usize> = (0..dims.node_count()).collect();
    fn find(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    fn rec(
        dims: Dims,
        pos: usize,
        total: usize,
        need: usize,
        cur: Simplex,
        parent: &mut Vec<usize>,
        out: &mut Vec<Simplex>,
    ) {
        if cur.len() == need {
            out.push(cur);
            return;
        }
        if total - pos < need - cur.len() {
            return;
        }
        let v = dims.vertex_at(pos);
        let a = find(parent, v.row);
        let b = find(parent, dims.m() + v.col);
        if a != b {
            parent[b] = a;
            rec(dims, pos + 1, total, need, cur.with(pos), parent, out);
            parent[b] = b;
        }
        rec(dims, pos + 1, total, need, cur, parent, out);
    }
    rec(
        dims,
        0,
        total,
        need,
        Simplex::empty(),
        &mut parent,
        &mut out,
    );
    out.sort();
    out
}
