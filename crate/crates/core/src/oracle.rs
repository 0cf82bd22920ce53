//! Brute-force ground truth for small dimensions: exhaustive enumeration of
//! triangulations, exact geometric validation, and flip graphs.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::flip;
use crate::graph::{self, Dims, Simplex};
use crate::triangulation::{self, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("dimensions m={m}, n={n} exceed the oracle budget")]
    BudgetExceeded { m: usize, n: usize },
}

/// Size limits for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_simplices: u64,
    pub max_edges: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_simplices: 10,
            max_edges: 12,
        }
    }
}

/// Every triangulation of one product, in canonical order.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub dims: Dims,
    pub triangulations: Vec<Triangulation>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.triangulations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangulations.is_empty()
    }

    pub fn index_map(&self) -> HashMap<Vec<Simplex>, usize> {
        self.triangulations
            .iter()
            .enumerate()
            .map(|(k, t)| (t.maximal().to_vec(), k))
            .collect()
    }
}

pub fn enumerate_triangulations(dims: Dims) -> Result<Corpus, OracleError> {
    enumerate_with_budget(dims, Budget::default())
}

/// Depth-first extension from the tree in which row 1 meets every column.
///
/// Each triangulation contains exactly one such tree, so the roots split the
/// search. At each node the first interior facet with a single neighbour is
/// closed by branching over every proper tree on its other side.
pub fn enumerate_with_budget(dims: Dims, budget: Budget) -> Result<Corpus, OracleError> {
    if dims.triangulation_size() > budget.max_simplices || dims.m() * dims.n() > budget.max_edges {
        return Err(OracleError::BudgetExceeded {
            m: dims.m(),
            n: dims.n(),
        });
    }
    let row0 = dims.row_mask(0);
    let roots: Vec<Simplex> = graph::spanning_trees(dims)
        .into_iter()
        .filter(|t| row0.is_subset(*t))
        .collect();
    let mut found: Vec<Vec<Simplex>> = roots
        .par_iter()
        .flat_map_iter(|&root| {
            let mut out = Vec::new();
            let mut cur = vec![root];
            extend(dims, &mut cur, &mut out);
            out
        })
        .collect();
    for f in &mut found {
        f.sort_unstable();
    }
    found.sort();
    found.dedup();
    let triangulations = found
        .into_iter()
        .map(|v| Triangulation::from_trees_unchecked(dims, v))
        .collect();
    Ok(Corpus {
        dims,
        triangulations,
    })
}

fn extend(dims: Dims, cur: &mut Vec<Simplex>, out: &mut Vec<Vec<Simplex>>) {
    let target = dims.triangulation_size() as usize;
    if cur.len() == target {
        out.push(cur.clone());
        return;
    }
    let Some((facet, owner)) = open_facet(dims, cur) else {
        return;
    };
    let used = cur[owner];
    for p in 0..dims.m() * dims.n() {
        if used.has(p) {
            continue;
        }
        let cand = facet.with(p);
        if !graph::is_forest(dims, cand) || cur.contains(&cand) {
            continue;
        }
        if cur.iter().all(|&t| triangulation::proper(dims, t, cand)) {
            cur.push(cand);
            extend(dims, cur, out);
            cur.pop();
        }
    }
}

fn open_facet(dims: Dims, cur: &[Simplex]) -> Option<(Simplex, usize)> {
    for (k, &t) in cur.iter().enumerate() {
        for p in t.positions() {
            let f = t.without(p);
            if !triangulation::is_interior_facet(dims, f) {
                continue;
            }
            if cur.iter().filter(|&&u| f.is_subset(u)).count() == 1 {
                return Some((f, k));
            }
        }
    }
    None
}

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Homogenised coordinates of `e_i + f_j` with the last row and last column
/// coordinates dropped.
fn point(dims: Dims, pos: usize) -> Vec<Q> {
    let v = dims.vertex_at(pos);
    let d = dims.m() + dims.n() - 2;
    let mut x = vec![q(0); d + 1];
    if v.row + 1 < dims.m() {
        x[v.row] = q(1);
    }
    if v.col + 1 < dims.n() {
        x[dims.m() - 1 + v.col] = q(1);
    }
    x[d] = q(1);
    x
}

/// Determinant by Gaussian elimination over the rationals.
fn determinant(mut a: Vec<Vec<Q>>) -> Q {
    let k = a.len();
    let mut det = q(1);
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return q(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..k {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for cc in c..k {
                let delta = &f * &a[c][cc];
                a[r][cc] -= delta;
            }
        }
    }
    det
}

/// Solves `B x = y` where the columns of `B` are the given points.
fn solve(basis: &[Vec<Q>], y: &[Q]) -> Option<Vec<Q>> {
    let k = basis.len();
    let mut a: Vec<Vec<Q>> = (0..k)
        .map(|r| {
            let mut row: Vec<Q> = basis.iter().map(|col| col[r].clone()).collect();
            row.push(y[r].clone());
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for cc in c..=k {
            let v = &a[c][cc] / &piv;
            a[c][cc] = v;
        }
        for r in 0..k {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for cc in c..=k {
                let delta = &f * &a[c][cc];
                a[r][cc] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[k].clone()).collect())
}

/// Normalised volume (absolute determinant) of a full-dimensional simplex.
pub fn normalized_volume(dims: Dims, s: Simplex) -> Q {
    let pts: Vec<Vec<Q>> = s.positions().map(|p| point(dims, p)).collect();
    if pts.len() != dims.m() + dims.n() - 1 {
        return q(0);
    }
    determinant(pts).abs()
}

/// Is `{nu >= 0, sum nu = 1, rows . nu >= 0}` feasible? Fourier-Motzkin.
fn cone_feasible(rows: &[Vec<Q>], k: usize) -> bool {
    if k == 0 {
        return false;
    }
    // substitute nu_{k-1} = 1 - sum of the others; constraint: coeffs.x + c >= 0
    let mut ineqs: Vec<(Vec<Q>, Q)> = Vec::new();
    let free = k - 1;
    for i in 0..free {
        let mut c = vec![q(0); free];
        c[i] = q(1);
        ineqs.push((c, q(0)));
    }
    ineqs.push((vec![q(-1); free], q(1)));
    for r in rows {
        let last = r[k - 1].clone();
        let c: Vec<Q> = (0..free).map(|i| &r[i] - &last).collect();
        ineqs.push((c, last));
    }
    for var in (0..free).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for (c, b) in ineqs.into_iter() {
            if c[var].is_positive() {
                pos.push((c, b));
            } else if c[var].is_negative() {
                neg.push((c, b));
            } else {
                rest.push((c, b));
            }
        }
        for (pc, pb) in &pos {
            for (nc, nb) in &neg {
                let a = pc[var].clone();
                let bneg = -nc[var].clone();
                let c: Vec<Q> = (0..free).map(|i| &pc[i] * &bneg + &nc[i] * &a).collect();
                let b = pb * &bneg + nb * &a;
                rest.push((c, b));
            }
        }
        rest = normalize_ineqs(rest);
        ineqs = rest;
    }
    ineqs.iter().all(|(_, b)| !b.is_negative())
}

fn normalize_ineqs(v: Vec<(Vec<Q>, Q)>) -> Vec<(Vec<Q>, Q)> {
    let mut out: Vec<(Vec<Q>, Q)> = Vec::with_capacity(v.len());
    for (c, b) in v {
        let scale = c
            .iter()
            .chain(std::iter::once(&b))
            .map(|x| x.abs())
            .filter(|x| !x.is_zero())
            .fold(q(0), |acc, x| if x > acc { x } else { acc });
        let (c, b) = if scale.is_zero() {
            (c, b)
        } else {
            (c.iter().map(|x| x / &scale).collect(), &b / &scale)
        };
        if !out.iter().any(|(oc, ob)| *oc == c && *ob == b) {
            out.push((c, b));
        }
    }
    out
}

/// Relative interiors disjoint and intersection a common face, decided by
/// searching for an affine dependence with its positive part in `s1` and its
/// negative part in `s2`.
pub fn geometric_proper(dims: Dims, s1: Simplex, s2: Simplex) -> bool {
    let only2: Vec<usize> = s2.minus(s1).positions().collect();
    let only1: Vec<usize> = s1.minus(s2).positions().collect();
    if only1.is_empty() || only2.is_empty() {
        return true;
    }
    let basis_pos: Vec<usize> = s1.positions().collect();
    let basis: Vec<Vec<Q>> = basis_pos.iter().map(|&p| point(dims, p)).collect();
    let coeffs: Vec<Vec<Q>> = only2
        .iter()
        .map(|&p| solve(&basis, &point(dims, p)).expect("full-dimensional simplex"))
        .collect();
    // one row per x in s1 \ s2: sum_y nu_y c_{y,x} >= 0
    let rows: Vec<Vec<Q>> = only1
        .iter()
        .map(|&x| {
            let ix = basis_pos.iter().position(|&p| p == x).unwrap();
            coeffs.iter().map(|c| c[ix].clone()).collect()
        })
        .collect();
    !cone_feasible(&rows, only2.len())
}

/// Exact geometric check: each simplex full-dimensional, volumes summing to
/// the volume of the product, and pairwise proper intersection.
pub fn geometric_validate(dims: Dims, trees: &[Simplex]) -> Result<bool, OracleError> {
    if dims.m() * dims.n() > 20 {
        return Err(OracleError::BudgetExceeded {
            m: dims.m(),
            n: dims.n(),
        });
    }
    let mut total = q(0);
    for &t in trees {
        let v = normalized_volume(dims, t);
        if v.is_zero() {
            return Ok(false);
        }
        total += v;
    }
    if total != q(dims.triangulation_size() as i64) {
        return Ok(false);
    }
    for a in 0..trees.len() {
        for b in a + 1..trees.len() {
            if trees[a] == trees[b] || !geometric_proper(dims, trees[a], trees[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Undirected flip graph over a corpus.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub degree: Vec<usize>,
}

pub fn build_flip_graph(corpus: &Corpus) -> FlipGraph {
    let idx = corpus.index_map();
    let per_node: Vec<Vec<usize>> = corpus
        .triangulations
        .par_iter()
        .map(|t| {
            flip::enumerate_flips(t)
                .iter()
                .map(|cert| {
                    let t2 = flip::apply_flip(t, cert).expect("fresh certificate");
                    *idx.get(t2.maximal()).expect("flip leaves the corpus")
                })
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    let mut degree = vec![0; corpus.len()];
    for (a, nbrs) in per_node.iter().enumerate() {
        degree[a] = nbrs.len();
        for &b in nbrs {
            if a < b {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    FlipGraph {
        nodes: corpus.len(),
        edges,
        degree,
    }
}

impl FlipGraph {
    /// Number of nodes not reached from node 0.
    pub fn unreachable(&self) -> usize {
        if self.nodes == 0 {
            return 0;
        }
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.nodes];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        self.nodes - count
    }

    pub fn is_connected(&self) -> bool {
        self.unreachable() == 0
    }
}

pub fn is_connected(g: &FlipGraph) -> bool {
    g.is_connected()
}
