//! Signed cycles of the bipartite graph (circuits of the product).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::graph::{Dims, GraphError, PVertex, Simplex};

/// A circuit `X = X+ ∪ X-`, stored with its cycle sequence.
///
/// With rows `i_1..i_k` and columns `j_1..j_k`,
/// `X- = {e_{i_r} f_{j_r}}` and `X+ = {e_{i_{r+1}} f_{j_r}}` (indices mod `k`).
/// The sequence is rotated so that `(i_1, j_1)` is the smallest minus edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circuit {
    minus: Simplex,
    plus: Simplex,
    rows: Vec<usize>,
    cols: Vec<usize>,
    dims: Dims,
}

impl Circuit {
    /// Builds the circuit `X- = {(rows[r], cols[r])}`, `X+ = {(rows[r+1], cols[r])}`.
    pub fn from_sequence(dims: Dims, rows: &[usize], cols: &[usize]) -> Result<Self, GraphError> {
        let k = rows.len();
        if k < 2 || cols.len() != k {
            return Err(GraphError::NotACycle);
        }
        let mut seen_r = rows.to_vec();
        seen_r.sort_unstable();
        seen_r.dedup();
        let mut seen_c = cols.to_vec();
        seen_c.sort_unstable();
        seen_c.dedup();
        if seen_r.len() != k || seen_c.len() != k {
            return Err(GraphError::NotACycle);
        }
        for (&r, &c) in rows.iter().zip(cols) {
            dims.checked_vertex(r, c)?;
        }
        let minus = dims.simplex((0..k).map(|r| (rows[r], cols[r])));
        let plus = dims.simplex((0..k).map(|r| (rows[(r + 1) % k], cols[r])));
        // rotate so the smallest minus edge comes first
        let start = (0..k).min_by_key(|&r| (rows[r], cols[r])).unwrap();
        let rows: Vec<usize> = (0..k).map(|r| rows[(start + r) % k]).collect();
        let cols: Vec<usize> = (0..k).map(|r| cols[(start + r) % k]).collect();
        Ok(Circuit {
            minus,
            plus,
            rows,
            cols,
            dims,
        })
    }

    /// Builds a circuit from its signed parts.
    pub fn from_parts(dims: Dims, minus: Simplex, plus: Simplex) -> Result<Self, GraphError> {
        if minus.intersects(plus) || minus.len() != plus.len() || minus.len() < 2 {
            return Err(GraphError::NotACycle);
        }
        let k = minus.len();
        let minus_edges: Vec<PVertex> = dims.edges(minus).collect();
        let plus_edges: Vec<PVertex> = dims.edges(plus).collect();
        let mut rows = Vec::with_capacity(k);
        let mut cols = Vec::with_capacity(k);
        let mut cur = minus_edges[0];
        for _ in 0..k {
            rows.push(cur.row);
            cols.push(cur.col);
            // plus edge in the same column on another row
            let next_row = plus_edges
                .iter()
                .find(|e| e.col == cur.col && e.row != cur.row)
                .ok_or(GraphError::NotACycle)?
                .row;
            cur = *minus_edges
                .iter()
                .find(|e| e.row == next_row)
                .ok_or(GraphError::NotACycle)?;
        }
        let c = Circuit::from_sequence(dims, &rows, &cols)?;
        if c.minus != minus || c.plus != plus {
            return Err(GraphError::NotACycle);
        }
        Ok(c)
    }

    pub fn minus(&self) -> Simplex {
        self.minus
    }

    pub fn plus(&self) -> Simplex {
        self.plus
    }

    pub fn support(&self) -> Simplex {
        self.minus.union(self.plus)
    }

    /// Half-length `k = |X-| = |X+|`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// `-X`: the same cycle with the signs swapped.
    pub fn reversed(&self) -> Circuit {
        let k = self.len();
        let rows: Vec<usize> = (0..k).map(|r| self.rows[(k - r) % k]).collect();
        let cols: Vec<usize> = (0..k).map(|r| self.cols[k - 1 - r]).collect();
        let c = Circuit::from_sequence(self.dims, &rows, &cols)
            .expect("reversal of a valid cycle is a cycle");
        debug_assert_eq!(c.minus, self.plus);
        debug_assert_eq!(c.plus, self.minus);
        c
    }

    /// The canonical orientation: the smallest edge of the cycle is in `X-`.
    pub fn normalized(&self) -> Circuit {
        let smallest_minus = self.minus.bits().trailing_zeros();
        let smallest_plus = self.plus.bits().trailing_zeros();
        if smallest_minus < smallest_plus {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.minus.bits().trailing_zeros() < self.plus.bits().trailing_zeros()
    }

    /// `X \ {e_{i_{r}} f_{j_{r-1}}}` for 0-based `r`: the maximal simplex of
    /// the plus-side triangulation omitting that plus edge.
    pub fn plus_facet(&self, r: usize) -> Simplex {
        let k = self.len();
        let e = self.dims.edge(self.rows[r], self.cols[(r + k - 1) % k]);
        self.support().minus(e)
    }

    /// Maps rows through `perm` (new row = `perm[old row]`).
    pub fn relabel_rows(&self, perm: &[usize]) -> Circuit {
        let rows: Vec<usize> = self.rows.iter().map(|&r| perm[r]).collect();
        Circuit::from_sequence(self.dims, &rows, &self.cols).expect("relabelled cycle")
    }

    pub fn minus_edges(&self) -> Vec<PVertex> {
        let k = self.len();
        (0..k)
            .map(|r| PVertex {
                row: self.rows[r],
                col: self.cols[r],
            })
            .collect()
    }

    pub fn plus_edges(&self) -> Vec<PVertex> {
        let k = self.len();
        (0..k)
            .map(|r| PVertex {
                row: self.rows[(r + 1) % k],
                col: self.cols[r],
            })
            .collect()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut minus = self.minus_edges();
        minus.sort();
        let mut plus = self.plus_edges();
        plus.sort();
        let m: Vec<String> = minus.iter().map(|e| e.to_string()).collect();
        let p: Vec<String> = plus.iter().map(|e| e.to_string()).collect();
        write!(f, "{}|{}", m.join(","), p.join(","))
    }
}

/// Signs the edges of a simple cycle alternately, normalized so that the
/// smallest edge lies in `X-`.
pub fn circuit_of_cycle(dims: Dims, edges: &[PVertex]) -> Result<Circuit, GraphError> {
    let mut s = Simplex::empty();
    for e in edges {
        dims.checked_vertex(e.row, e.col)?;
        s = s.with(dims.pos(e.row, e.col));
    }
    if s.len() != edges.len() || s.len() < 4 {
        return Err(GraphError::NotACycle);
    }
    let list: Vec<PVertex> = dims.edges(s).collect();
    // each node on the cycle must have degree exactly 2
    let mut deg = vec![0usize; dims.node_count()];
    for e in &list {
        deg[e.row] += 1;
        deg[dims.m() + e.col] += 1;
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return Err(GraphError::NotACycle);
    }
    // walk from the smallest edge
    let start = list[0];
    let mut rows = vec![start.row];
    let mut cols = vec![start.col];
    let mut cur_row = start.row;
    let mut cur_col = start.col;
    loop {
        let next_row = list
            .iter()
            .find(|e| e.col == cur_col && e.row != cur_row)
            .ok_or(GraphError::NotACycle)?
            .row;
        if next_row == start.row {
            break;
        }
        let next_col = list
            .iter()
            .find(|e| e.row == next_row && e.col != cur_col)
            .ok_or(GraphError::NotACycle)?
            .col;
        rows.push(next_row);
        cols.push(next_col);
        cur_row = next_row;
        cur_col = next_col;
        if rows.len() > list.len() {
            return Err(GraphError::NotACycle);
        }
    }
    if 2 * rows.len() != list.len() {
        return Err(GraphError::NotACycle);
    }
    Circuit::from_sequence(dims, &rows, &cols)
}

/// All simple cycles of `G_{m,n}` as edge sets, sorted.
pub fn all_cycles(dims: Dims) -> std::sync::Arc<Vec<Simplex>> {
    static CACHE: OnceLock<Mutex<HashMap<Dims, std::sync::Arc<Vec<Simplex>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&dims) {
        return v.clone();
    }
    let v = std::sync::Arc::new(compute_cycles(dims));
    cache.lock().unwrap().insert(dims, v.clone());
    v
}

fn compute_cycles(dims: Dims) -> Vec<Simplex> {
    let mut out = std::collections::BTreeSet::new();
    let kmax = dims.m().min(dims.n());
    for k in 2..=kmax {
        for rows in subsets(dims.m(), k) {
            for cols in subsets(dims.n(), k) {
                // fix rows[0] first; permute the remaining rows and all columns
                let mut rest: Vec<usize> = rows[1..].to_vec();
                permutations(&mut rest, 0, &mut |rp| {
                    let mut seq_r = vec![rows[0]];
                    seq_r.extend_from_slice(rp);
                    let mut cp = cols.clone();
                    permutations(&mut cp, 0, &mut |cseq| {
                        let mut s = Simplex::empty();
                        for r in 0..k {
                            s = s.with(dims.pos(seq_r[r], cseq[r]));
                            s = s.with(dims.pos(seq_r[(r + 1) % k], cseq[r]));
                        }
                        out.insert(s);
                    });
                });
            }
        }
    }
    out.into_iter().collect()
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Circuit for an edge-set cycle, in canonical orientation.
pub fn circuit_of_support(dims: Dims, s: Simplex) -> Result<Circuit, GraphError> {
    let edges: Vec<PVertex> = dims.edges(s).collect();
    circuit_of_cycle(dims, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(r: usize, c: usize) -> PVertex {
        PVertex {
            row: r - 1,
            col: c - 1,
        }
    }

    #[test]
    fn square_normalizes() {
        let dims = Dims::new(2, 2).unwrap();
        let c = circuit_of_cycle(dims, &[pv(1, 1), pv(1, 2), pv(2, 1), pv(2, 2)]).unwrap();
        assert_eq!(c.minus(), dims.simplex([(0, 0), (1, 1)]));
        assert_eq!(c.plus(), dims.simplex([(1, 0), (0, 1)]));
    }

    #[test]
    fn hexagon_matches_sequence_notation() {
        let dims = Dims::new(3, 3).unwrap();
        let c = circuit_of_cycle(
            dims,
            &[pv(1, 1), pv(2, 1), pv(2, 2), pv(3, 2), pv(3, 3), pv(1, 3)],
        )
        .unwrap();
        assert_eq!(c.minus(), dims.simplex([(0, 0), (1, 1), (2, 2)]));
        assert_eq!(c.plus(), dims.simplex([(1, 0), (2, 1), (0, 2)]));
        assert_eq!(c.rows(), &[0, 1, 2]);
        assert_eq!(c.cols(), &[0, 1, 2]);
    }

    #[test]
    fn star_is_not_a_cycle() {
        let dims = Dims::new(3, 3).unwrap();
        assert_eq!(
            circuit_of_cycle(dims, &[pv(1, 1), pv(2, 1), pv(3, 1)]),
            Err(GraphError::NotACycle)
        );
        // two disjoint squares
        let dims = Dims::new(4, 4).unwrap();
        let two = [
            pv(1, 1),
            pv(1, 2),
            pv(2, 1),
            pv(2, 2),
            pv(3, 3),
            pv(3, 4),
            pv(4, 3),
            pv(4, 4),
        ];
        assert_eq!(circuit_of_cycle(dims, &two), Err(GraphError::NotACycle));
    }

    #[test]
    fn reversal_and_parts_round_trip() {
        let dims = Dims::new(4, 4).unwrap();
        for s in all_cycles(dims).iter() {
            let c = circuit_of_support(dims, *s).unwrap();
            assert!(c.is_normalized());
            let r = c.reversed();
            assert_eq!(r.minus(), c.plus());
            assert_eq!(r.reversed(), c);
            assert_eq!(r.normalized(), c);
            assert_eq!(Circuit::from_parts(dims, c.minus(), c.plus()).unwrap(), c);
            assert_eq!(Circuit::from_parts(dims, r.minus(), r.plus()).unwrap(), r);
        }
    }

    #[test]
    fn cycle_counts() {
        // sum_k C(m,k) C(n,k) k! (k-1)! / 2
        let dims = Dims::new(4, 3).unwrap();
        let expect = 6 * 3 * 1 + 4 * 1 * 6;
        assert_eq!(all_cycles(dims).len(), expect);
        let dims = Dims::new(4, 4).unwrap();
        let expect = 6 * 6 + 4 * 4 * 6 + 72;
        assert_eq!(all_cycles(dims).len(), expect);
    }
}
