//! Column orders read off two-row restrictions, and the precedence orders on
//! maximal simplices generated by facet-crossing moves.

use std::cmp::Ordering;
use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{self, Components, Dims, Node, PVertex, Simplex};
use crate::triangulation::{LocalTriangulation, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("malformed local triangulation: {0}")]
    MalformedLocal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty input set")]
    EmptyInput,
    #[error("no simplex satisfies the minimality criterion")]
    NoMinimal,
    #[error("{0} simplices satisfy the minimality criterion")]
    MultipleMinimal(usize),
}

/// Maximal simplices of a two-row (local) triangulation in segment order,
/// with the column adjacent to both rows in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentDecomposition {
    pub ordered: Vec<Simplex>,
    pub labels: Vec<usize>,
}

fn label_of(dims: Dims, t: Simplex) -> Option<usize> {
    (0..dims.n()).find(|&j| t.has(dims.pos(0, j)) && t.has(dims.pos(1, j)))
}

/// Orders the maximal simplices of a two-row local triangulation so that
/// each step removes a first-row edge and adds a second-row edge.
fn segment_walk(dims: Dims, maximal: &[Simplex]) -> Result<SegmentDecomposition, OrderError> {
    if dims.m() != 2 {
        return Err(OrderError::Precondition(
            "segment order needs exactly two rows".into(),
        ));
    }
    let count = maximal.len();
    if count == 0 {
        return Err(OrderError::MalformedLocal("no maximal simplices".into()));
    }
    let shared = dims.tree_size() - 1;
    let mut adj = vec![Vec::new(); count];
    for a in 0..count {
        for b in a + 1..count {
            if maximal[a].inter(maximal[b]).len() == shared {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut labels_all = Vec::with_capacity(count);
    for &t in maximal {
        match label_of(dims, t) {
            Some(j) => labels_all.push(j),
            None => {
                return Err(OrderError::MalformedLocal(
                    "simplex joins no column to both rows".into(),
                ))
            }
        }
    }
    if adj.iter().any(|a| a.len() > 2) {
        return Err(OrderError::MalformedLocal(
            "adjacency graph is not a path".into(),
        ));
    }
    let row0 = dims.row_mask(0);
    let start = if count == 1 {
        0
    } else {
        let ends: Vec<usize> = (0..count).filter(|&a| adj[a].len() == 1).collect();
        if ends.len() != 2 {
            return Err(OrderError::MalformedLocal(
                "adjacency graph is not a path".into(),
            ));
        }
        // the first step must remove a first-row edge
        let pick = ends.iter().copied().find(|&a| {
            let b = adj[a][0];
            maximal[a].minus(maximal[b]).is_subset(row0)
        });
        pick.ok_or_else(|| {
            OrderError::MalformedLocal("no end of the path starts the order".into())
        })?
    };
    let mut ordered = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while ordered.len() < count {
        let next = adj[cur].iter().copied().find(|&b| b != prev);
        match next {
            Some(b) => {
                prev = cur;
                cur = b;
                ordered.push(b);
            }
            None => {
                return Err(OrderError::MalformedLocal(
                    "adjacency graph is disconnected".into(),
                ))
            }
        }
    }
    let seg = SegmentDecomposition {
        ordered: ordered.iter().map(|&k| maximal[k]).collect(),
        labels: ordered.iter().map(|&k| labels_all[k]).collect(),
    };
    for r in 0..count.saturating_sub(1) {
        let expect = seg.ordered[r]
            .without(dims.pos(0, seg.labels[r]))
            .with(dims.pos(1, seg.labels[r + 1]));
        if expect != seg.ordered[r + 1] {
            return Err(OrderError::MalformedLocal(format!(
                "step {} is not a segment move",
                r + 1
            )));
        }
    }
    Ok(seg)
}

/// The unique segment order of a local triangulation of a two-row product at
/// a base with at most one edge in each row, checked clause by clause.
pub fn segment_decompose(l: &LocalTriangulation) -> Result<SegmentDecomposition, OrderError> {
    let dims = l.dims();
    if dims.m() != 2 {
        return Err(OrderError::Precondition(
            "segment_decompose needs m = 2".into(),
        ));
    }
    let base = l.base();
    let top: Vec<usize> = graph::row_neighbors(dims, base, 0);
    let bottom: Vec<usize> = graph::row_neighbors(dims, base, 1);
    if top.len() > 1 || bottom.len() > 1 || (top.len() == 1 && bottom.len() == 1 && top == bottom) {
        return Err(OrderError::Precondition(
            "base must be contained in {e1 f_a, e2 f_b} with a != b".into(),
        ));
    }
    let seg = segment_walk(dims, l.maximal())?;
    check_segment_clauses(dims, base, &seg)?;
    Ok(seg)
}

/// Endpoint clauses of the two-row segment structure.
pub fn check_segment_clauses(
    dims: Dims,
    base: Simplex,
    seg: &SegmentDecomposition,
) -> Result<(), OrderError> {
    let n_all: Vec<usize> = (0..dims.n()).collect();
    let first = seg.ordered[0];
    let last = *seg.ordered.last().unwrap();
    let single = seg.ordered.len() == 1;
    for (r, &t) in seg.ordered.iter().enumerate() {
        if graph::col_neighbors(dims, t, seg.labels[r]) != vec![0, 1] {
            return Err(OrderError::MalformedLocal(format!(
                "label of simplex {r} is not shared"
            )));
        }
    }
    let top = graph::row_neighbors(dims, base, 0);
    let bottom = graph::row_neighbors(dims, base, 1);
    if single && !base.is_empty() {
        // endpoint labels are vacuous for a single simplex
        return Ok(());
    }
    match top.first() {
        Some(&a) => {
            if *seg.labels.last().unwrap() != a {
                return Err(OrderError::MalformedLocal(
                    "last label differs from the base column".into(),
                ));
            }
        }
        None => {
            if graph::row_neighbors(dims, last, 1) != n_all {
                return Err(OrderError::MalformedLocal(
                    "last simplex does not fill row 2".into(),
                ));
            }
        }
    }
    match bottom.first() {
        Some(&b) => {
            if seg.labels[0] != b {
                return Err(OrderError::MalformedLocal(
                    "first label differs from the base column".into(),
                ));
            }
        }
        None => {
            if graph::row_neighbors(dims, first, 0) != n_all {
                return Err(OrderError::MalformedLocal(
                    "first simplex does not fill row 1".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Quasiorder on columns as a sequence of strata, lowest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnQuasiorder {
    pub strata: Vec<Vec<usize>>,
}

impl ColumnQuasiorder {
    pub fn from_segments(dims: Dims, seg: &SegmentDecomposition) -> Result<Self, OrderError> {
        let mut strata: Vec<Vec<usize>> = Vec::new();
        let first = seg.ordered[0];
        let last = *seg.ordered.last().unwrap();
        let j_first = seg.labels[0];
        let j_last = *seg.labels.last().unwrap();
        let low: Vec<usize> = graph::row_neighbors(dims, first, 1)
            .into_iter()
            .filter(|&j| j != j_first)
            .collect();
        if !low.is_empty() {
            strata.push(low);
        }
        for &j in &seg.labels {
            strata.push(vec![j]);
        }
        let high: Vec<usize> = graph::row_neighbors(dims, last, 0)
            .into_iter()
            .filter(|&j| j != j_last)
            .collect();
        if !high.is_empty() {
            strata.push(high);
        }
        let mut seen = vec![false; dims.n()];
        for s in &strata {
            for &j in s {
                if seen[j] {
                    return Err(OrderError::MalformedLocal(format!(
                        "column f{} repeats",
                        j + 1
                    )));
                }
                seen[j] = true;
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(OrderError::MalformedLocal(
                "strata do not cover all columns".into(),
            ));
        }
        Ok(ColumnQuasiorder { strata })
    }

    pub fn stratum_of(&self, j: usize) -> usize {
        self.strata
            .iter()
            .position(|s| s.contains(&j))
            .expect("column in some stratum")
    }

    pub fn compare(&self, j: usize, j2: usize) -> Ordering {
        self.stratum_of(j).cmp(&self.stratum_of(j2))
    }

    pub fn is_total(&self) -> bool {
        self.strata.iter().all(|s| s.len() == 1)
    }

    /// Columns lowest first, when the order is total.
    pub fn as_sequence(&self) -> Option<Vec<usize>> {
        self.is_total()
            .then(|| self.strata.iter().map(|s| s[0]).collect())
    }

    pub fn reversed(&self) -> Self {
        ColumnQuasiorder {
            strata: self.strata.iter().rev().cloned().collect(),
        }
    }
}

impl std::fmt::Display for ColumnQuasiorder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .strata
            .iter()
            .map(|s| {
                let names: Vec<String> = s.iter().map(|j| format!("f{}", j + 1)).collect();
                if names.len() == 1 {
                    names[0].clone()
                } else {
                    format!("{{{}}}", names.join(","))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" < "))
    }
}

/// The order on columns read off the restriction to rows `(i1, i2)`.
pub fn restriction_order(
    t: &Triangulation,
    i1: usize,
    i2: usize,
) -> Result<ColumnQuasiorder, OrderError> {
    if i1 == i2 {
        return Err(OrderError::Precondition("rows must differ".into()));
    }
    let cols: Vec<usize> = (0..t.dims().n()).collect();
    let face = t.restrict(&[i1, i2], &cols);
    let seg = segment_walk(face.dims(), face.maximal())?;
    check_segment_clauses(face.dims(), Simplex::empty(), &seg)?;
    ColumnQuasiorder::from_segments(face.dims(), &seg)
}

pub fn restriction_order_local(
    l: &LocalTriangulation,
    i1: usize,
    i2: usize,
) -> Result<ColumnQuasiorder, OrderError> {
    if i1 == i2 {
        return Err(OrderError::Precondition("rows must differ".into()));
    }
    let dims = l.dims();
    let rows_mask = dims.row_mask(i1).union(dims.row_mask(i2));
    if !l.base().is_subset(rows_mask) {
        return Err(OrderError::Precondition(
            "base must lie in the two rows".into(),
        ));
    }
    let cols: Vec<usize> = (0..dims.n()).collect();
    let face = l.restrict(&[i1, i2], &cols);
    let seg = segment_walk(face.dims(), face.maximal())?;
    ColumnQuasiorder::from_segments(face.dims(), &seg)
}

/// Two-row restriction decomposition of a full triangulation.
pub fn restriction_segments(
    t: &Triangulation,
    i1: usize,
    i2: usize,
) -> Result<(Dims, SegmentDecomposition), OrderError> {
    let cols: Vec<usize> = (0..t.dims().n()).collect();
    let face = t.restrict(&[i1, i2], &cols);
    let seg = segment_walk(face.dims(), face.maximal())?;
    Ok((face.dims(), seg))
}

/// Comparison of two columns in the order on rows `(i1, i2)` by membership.
pub fn compare_columns(
    t: &Triangulation,
    i1: usize,
    i2: usize,
    j: usize,
    j2: usize,
) -> Result<Ordering, OrderError> {
    if j == j2 {
        return Err(OrderError::Precondition("columns must differ".into()));
    }
    let dims = t.dims();
    if t.contains(dims.edge(i2, j).union(dims.edge(i1, j2))) {
        Ok(Ordering::Less)
    } else if t.contains(dims.edge(i2, j2).union(dims.edge(i1, j))) {
        Ok(Ordering::Greater)
    } else {
        Ok(Ordering::Equal)
    }
}

/// A facet-crossing move `tau -> tau'` with the row and column parts of
/// the two components of the shared facet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub leaving: PVertex,
    pub entering: PVertex,
    /// Rows of the component holding the leaving edge's row.
    pub i1: Vec<usize>,
    /// Rows of the component holding the entering edge's row.
    pub i2: Vec<usize>,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
}

pub fn classify_adjacency(dims: Dims, tau: Simplex, tau2: Simplex) -> Option<Adjacency> {
    let common = tau.inter(tau2);
    if common.len() + 1 != dims.tree_size()
        || tau.len() != dims.tree_size()
        || tau2.len() != dims.tree_size()
    {
        return None;
    }
    let leaving = dims.vertex_at(tau.minus(tau2).positions().next()?);
    let entering = dims.vertex_at(tau2.minus(tau).positions().next()?);
    let comps = Components::of(dims, common);
    if comps.count() != 2 {
        return None;
    }
    let c1 = comps.of_row(leaving.row);
    let c2 = comps.of_col(leaving.col);
    if c1 == c2 || comps.of_row(entering.row) != c2 || comps.of_col(entering.col) != c1 {
        return None;
    }
    Some(Adjacency {
        leaving,
        entering,
        i1: comps.rows_of(c1),
        i2: comps.rows_of(c2),
        j1: comps.cols_of(c1),
        j2: comps.cols_of(c2),
    })
}

/// Which moves a precedence digraph keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveFilter {
    /// Moves with the given row on the entering side.
    Toward(usize),
    /// Moves with `toward` on the entering side, or moves that split off
    /// the single row `free` from all the others.
    TowardWithFree {
        free: usize,
        toward: usize,
    },
    All,
    Nothing,
}

impl MoveFilter {
    /// Filter of the quasiorder on rows `(i1, i2)`.
    pub fn pair(i1: usize, i2: usize) -> Self {
        MoveFilter::TowardWithFree {
            free: i1,
            toward: i2,
        }
    }

    pub fn accepts(&self, m: usize, adj: &Adjacency) -> bool {
        match *self {
            MoveFilter::Toward(i) => adj.i2.contains(&i),
            MoveFilter::TowardWithFree { free, toward } => {
                if adj.i2.contains(&toward) {
                    return true;
                }
                let split = |a: &[usize], b: &[usize]| a == [free] && b.len() == m - 1;
                split(&adj.i1, &adj.i2) || split(&adj.i2, &adj.i1)
            }
            MoveFilter::All => true,
            MoveFilter::Nothing => false,
        }
    }
}

/// Directed graph of accepted moves among the maximal simplices of a (local)
/// triangulation, with its reachability relation.
#[derive(Debug, Clone)]
pub struct PrecedenceDigraph {
    pub nodes: Vec<Simplex>,
    pub arcs: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
    scc: Vec<usize>,
}

impl PrecedenceDigraph {
    pub fn build(dims: Dims, nodes: &[Simplex], filter: MoveFilter) -> Self {
        let k = nodes.len();
        let mut succ = vec![Vec::new(); k];
        let mut arcs = Vec::new();
        if filter != MoveFilter::Nothing {
            for a in 0..k {
                for b in 0..k {
                    if a == b {
                        continue;
                    }
                    if let Some(adj) = classify_adjacency(dims, nodes[a], nodes[b]) {
                        if filter.accepts(dims.m(), &adj) {
                            succ[a].push(b);
                            arcs.push((a, b));
                        }
                    }
                }
            }
        }
        let mut reach = vec![vec![false; k]; k];
        for s in 0..k {
            let mut queue = VecDeque::from([s]);
            reach[s][s] = true;
            while let Some(x) = queue.pop_front() {
                for &y in &succ[x] {
                    if !reach[s][y] {
                        reach[s][y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut scc = vec![usize::MAX; k];
        let mut next = 0;
        for a in 0..k {
            if scc[a] != usize::MAX {
                continue;
            }
            for b in a..k {
                if reach[a][b] && reach[b][a] {
                    scc[b] = next;
                }
            }
            next += 1;
        }
        PrecedenceDigraph {
            nodes: nodes.to_vec(),
            arcs,
            succ,
            reach,
            scc,
        }
    }

    pub fn index_of(&self, s: Simplex) -> Option<usize> {
        self.nodes.iter().position(|&t| t == s)
    }

    pub fn successors(&self, a: usize) -> &[usize] {
        &self.succ[a]
    }

    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    /// Strongly connected component label of each node.
    pub fn components(&self) -> &[usize] {
        &self.scc
    }

    pub fn is_acyclic(&self) -> bool {
        let mut sizes = vec![0usize; self.nodes.len()];
        for &c in &self.scc {
            sizes[c] += 1;
        }
        sizes.iter().all(|&s| s <= 1)
    }
}

pub fn build_precedence(dims: Dims, nodes: &[Simplex], filter: MoveFilter) -> PrecedenceDigraph {
    PrecedenceDigraph::build(dims, nodes, filter)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

/// An element of `subset` with nothing in `subset` strictly above (Max) or
/// below (Min) it; ties go to the smallest bitset.
pub fn select_extremal(
    subset: &[Simplex],
    g: &PrecedenceDigraph,
    dir: Extremum,
) -> Result<Simplex, OrderError> {
    if subset.is_empty() {
        return Err(OrderError::EmptyInput);
    }
    let idx: Vec<usize> = subset
        .iter()
        .map(|&s| {
            g.index_of(s)
                .ok_or_else(|| OrderError::Precondition("subset element is not a node".into()))
        })
        .collect::<Result<_, _>>()?;
    let strictly = |a: usize, b: usize| g.reaches(a, b) && !g.reaches(b, a);
    let mut best: Option<Simplex> = None;
    for &c in &idx {
        let dominated = idx.iter().any(|&u| match dir {
            Extremum::Max => strictly(c, u),
            Extremum::Min => strictly(u, c),
        });
        if !dominated {
            let s = g.nodes[c];
            if best.is_none_or(|b| s < b) {
                best = Some(s);
            }
        }
    }
    best.ok_or(OrderError::EmptyInput)
}

/// All simplices of `l` whose tree path from row `i0` to every row is
/// 1-alternating with respect to the base.
pub fn minimal_candidates(l: &LocalTriangulation, i0: usize) -> Vec<Simplex> {
    let dims = l.dims();
    let xi = l.base();
    l.maximal()
        .iter()
        .copied()
        .filter(|&t| {
            (0..dims.m()).all(|i| {
                i == i0
                    || graph::alternating_path(dims, t, xi, Node::Row(i0), Node::Row(i), 1)
                        .is_some()
            })
        })
        .collect()
}

/// The unique minimal maximal simplex of `l` towards row `i0`.
pub fn unique_minimal(l: &LocalTriangulation, i0: usize) -> Result<Simplex, OrderError> {
    let dims = l.dims();
    if !l.base().intersects(dims.row_mask(i0)) {
        return Err(OrderError::Precondition(format!(
            "base has no edge at row e{}",
            i0 + 1
        )));
    }
    let c = minimal_candidates(l, i0);
    match c.len() {
        0 => Err(OrderError::NoMinimal),
        1 => Ok(c[0]),
        k => Err(OrderError::MultipleMinimal(k)),
    }
}

/// The unique minimal element of `nodes` under moves towards row `i0`,
/// read off the precedence digraph. Works for any base, not only matchings.
pub fn unique_minimal_by_moves(
    dims: Dims,
    nodes: &[Simplex],
    i0: usize,
) -> Result<Simplex, OrderError> {
    let g = PrecedenceDigraph::build(dims, nodes, MoveFilter::Toward(i0));
    let k = nodes.len();
    let minimal: Vec<Simplex> = (0..k)
        .filter(|&c| (0..k).all(|u| !(g.reaches(u, c) && !g.reaches(c, u))))
        .map(|c| nodes[c])
        .collect();
    match minimal.len() {
        0 => Err(OrderError::NoMinimal),
        1 => Ok(minimal[0]),
        k => Err(OrderError::MultipleMinimal(k)),
    }
}

/// Equivalence under the quasiorder on rows `(i1, *)`: the common part of the
/// two trees has a component holding every row except `i1`.
pub fn equivalent_12(dims: Dims, tau: Simplex, tau2: Simplex, i1: usize) -> bool {
    let comps = Components::of(dims, tau.inter(tau2));
    let others: Vec<usize> = (0..dims.m()).filter(|&i| i != i1).collect();
    match others.first() {
        None => true,
        Some(&r) => {
            let c = comps.of_row(r);
            others.iter().all(|&i| comps.of_row(i) == c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> (Dims, Triangulation) {
        let dims = Dims::new(2, 2).unwrap();
        let a = dims.simplex([(0, 0), (1, 0), (1, 1)]);
        let b = dims.simplex([(0, 0), (0, 1), (1, 1)]);
        (dims, Triangulation::new(dims, vec![a, b]).unwrap())
    }

    #[test]
    fn segment_of_two_by_three_staircase() {
        let dims = Dims::new(2, 3).unwrap();
        let t1 = dims.simplex([(0, 0), (0, 1), (0, 2), (1, 0)]);
        let t2 = dims.simplex([(0, 1), (0, 2), (1, 0), (1, 1)]);
        let t3 = dims.simplex([(0, 2), (1, 0), (1, 1), (1, 2)]);
        let t = Triangulation::new(dims, vec![t3, t1, t2]).unwrap();
        let seg = segment_decompose(&t.as_local()).unwrap();
        assert_eq!(seg.ordered, vec![t1, t2, t3]);
        assert_eq!(seg.labels, vec![0, 1, 2]);
        let o = restriction_order(&t, 0, 1).unwrap();
        assert_eq!(o.as_sequence(), Some(vec![0, 1, 2]));
        assert_eq!(restriction_order(&t, 1, 0).unwrap(), o.reversed());
    }

    #[test]
    fn segment_at_both_diagonal_vertices() {
        let (dims, t) = square();
        let xi = dims.simplex([(0, 0), (1, 1)]);
        let seg = segment_decompose(&t.star(xi).unwrap()).unwrap();
        assert_eq!(seg.labels, vec![1, 0]);
    }

    #[test]
    fn compare_on_square() {
        let dims = Dims::new(2, 2).unwrap();
        let a = dims.simplex([(0, 0), (0, 1), (1, 0)]);
        let b = dims.simplex([(0, 1), (1, 0), (1, 1)]);
        let t = Triangulation::new(dims, vec![a, b]).unwrap();
        assert_eq!(compare_columns(&t, 0, 1, 0, 1), Ok(Ordering::Less));
        assert_eq!(compare_columns(&t, 1, 0, 0, 1), Ok(Ordering::Greater));
        assert!(compare_columns(&t, 0, 1, 0, 0).is_err());
    }

    #[test]
    fn square_adjacency() {
        let (dims, t) = square();
        let (a, b) = (t.maximal()[0], t.maximal()[1]);
        let adj = classify_adjacency(dims, a, b).unwrap();
        let back = classify_adjacency(dims, b, a).unwrap();
        assert_eq!(adj.i1, back.i2);
        assert_eq!(adj.i2, back.i1);
        assert!(classify_adjacency(dims, a, a).is_none());
        let g = build_precedence(dims, t.maximal(), MoveFilter::Toward(1));
        assert_eq!(g.arcs.len(), 1);
        let g = build_precedence(dims, t.maximal(), MoveFilter::Nothing);
        assert!(g.arcs.is_empty());
        assert!(g.is_acyclic());
    }

    #[test]
    fn unique_minimal_on_square_star() {
        let (dims, t) = square();
        let xi = dims.simplex([(0, 0), (1, 1)]);
        let l = t.star(xi).unwrap();
        assert_eq!(
            unique_minimal(&l, 0),
            Ok(dims.simplex([(0, 0), (1, 1), (1, 0)]))
        );
    }

    #[test]
    fn select_on_chain() {
        let dims = Dims::new(2, 3).unwrap();
        let t1 = dims.simplex([(0, 0), (0, 1), (0, 2), (1, 0)]);
        let t2 = dims.simplex([(0, 1), (0, 2), (1, 0), (1, 1)]);
        let t3 = dims.simplex([(0, 2), (1, 0), (1, 1), (1, 2)]);
        let g = build_precedence(dims, &[t1, t2, t3], MoveFilter::Toward(1));
        assert_eq!(select_extremal(&[t1, t2, t3], &g, Extremum::Max), Ok(t3));
        assert_eq!(select_extremal(&[t1, t2, t3], &g, Extremum::Min), Ok(t1));
        assert_eq!(select_extremal(&[t2], &g, Extremum::Max), Ok(t2));
        let none = build_precedence(dims, &[t1, t2, t3], MoveFilter::Nothing);
        assert_eq!(
            select_extremal(&[t3, t2, t1], &none, Extremum::Max),
            Ok(t1.min(t2).min(t3))
        );
        assert_eq!(
            select_extremal(&[], &g, Extremum::Max),
            Err(OrderError::EmptyInput)
        );
    }
}
