//! Triangulations and local triangulations as sets of spanning trees.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{self, Components, Dims, Simplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("simplex {0} is not in the complex")]
    NotInComplex(String),
    #[error("invalid triangulation: {0}")]
    Invalid(ValidityReport),
    #[error("malformed local triangulation: {0}")]
    MalformedLocal(String),
}

/// One reason a collection of trees fails to be a triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Maximal simplex at this index is not a spanning tree.
    NotSpanningTree { index: usize, cyclic: bool },
    /// The same tree appears twice.
    Duplicate { index: usize },
    /// The two simplices do not intersect properly.
    Improper { a: usize, b: usize },
    /// Wrong number of maximal simplices.
    Cardinality { expected: u64, found: usize },
    /// A simplex misses the required base of a local triangulation.
    MissingBase { index: usize },
    /// An interior facet through the base lies in only one maximal simplex.
    OpenFacet { index: usize, facet: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| format!("{v:?}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Two simplices intersect properly iff no circuit has its plus part in one
/// and its minus part in the other.
///
/// Contract the components of `T(s1 ∩ s2)`; orient edges of `s1 \ s2` from
/// row to column and edges of `s2 \ s1` from column to row. An offending
/// circuit is exactly a directed cycle of the contracted graph.
pub fn proper(dims: Dims, s1: Simplex, s2: Simplex) -> bool {
    let common = s1.inter(s2);
    let only1 = s1.minus(s2);
    let only2 = s2.minus(s1);
    if only1.is_empty() || only2.is_empty() {
        return true;
    }
    let comps = Components::of(dims, common);
    let k = comps.count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in dims.edges(only1) {
        adj[comps.of_row(v.row)].push(comps.of_col(v.col));
    }
    for v in dims.edges(only2) {
        adj[comps.of_col(v.col)].push(comps.of_row(v.row));
    }
    !has_directed_cycle(&adj)
}

pub(crate) fn has_directed_cycle(adj: &[Vec<usize>]) -> bool {
    // Kahn's algorithm
    let k = adj.len();
    let mut indeg = vec![0usize; k];
    for out in adj {
        for &y in out {
            indeg[y] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..k).filter(|&x| indeg[x] == 0).collect();
    let mut seen = 0;
    while let Some(x) = queue.pop() {
        seen += 1;
        for &y in &adj[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push(y);
            }
        }
    }
    seen < k
}

/// Combinatorial validity of a candidate set of maximal simplices.
pub fn validate_collection(dims: Dims, trees: &[Simplex]) -> ValidityReport {
    let mut violations = Vec::new();
    for (i, &t) in trees.iter().enumerate() {
        if !graph::is_spanning_tree(dims, t) {
            violations.push(Violation::NotSpanningTree {
                index: i,
                cyclic: !graph::is_forest(dims, t),
            });
        }
        if trees[..i].contains(&t) {
            violations.push(Violation::Duplicate { index: i });
        }
    }
    for a in 0..trees.len() {
        for b in a + 1..trees.len() {
            if trees[a] != trees[b] && !proper(dims, trees[a], trees[b]) {
                violations.push(Violation::Improper { a, b });
            }
        }
    }
    let expected = dims.triangulation_size();
    if trees.len() as u64 != expected {
        violations.push(Violation::Cardinality {
            expected,
            found: trees.len(),
        });
    }
    ValidityReport { violations }
}

/// A triangulation: a canonically sorted set of spanning trees with an
/// edge-to-simplex incidence index.
#[derive(Clone)]
pub struct Triangulation {
    dims: Dims,
    maximal: Vec<Simplex>,
    index: Vec<Vec<u32>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.maximal == other.maximal
    }
}

impl Eq for Triangulation {}

impl std::hash::Hash for Triangulation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dims.hash(state);
        self.maximal.hash(state);
    }
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trees: Vec<String> = self
            .maximal
            .iter()
            .map(|&s| self.dims.fmt_simplex(s))
            .collect();
        f.debug_struct("Triangulation")
            .field("m", &self.dims.m())
            .field("n", &self.dims.n())
            .field("maximal", &trees)
            .finish()
    }
}

impl Triangulation {
    /// Validated construction.
    pub fn new(dims: Dims, trees: Vec<Simplex>) -> Result<Self, TriangulationError> {
        let report = validate_collection(dims, &trees);
        if !report.is_valid() {
            return Err(TriangulationError::Invalid(report));
        }
        Ok(Self::from_trees_unchecked(dims, trees))
    }

    /// Construction without the validity check; the caller guarantees it.
    pub fn from_trees_unchecked(dims: Dims, mut trees: Vec<Simplex>) -> Self {
        trees.sort_unstable();
        trees.dedup();
        let mut index = vec![Vec::new(); dims.m() * dims.n()];
        for (k, t) in trees.iter().enumerate() {
            for p in t.positions() {
                index[p].push(k as u32);
            }
        }
        Triangulation {
            dims,
            maximal: trees,
            index,
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn len(&self) -> usize {
        self.maximal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn validate(&self) -> ValidityReport {
        validate_collection(self.dims, &self.maximal)
    }

    pub fn contains_maximal(&self, t: Simplex) -> bool {
        self.maximal.binary_search(&t).is_ok()
    }

    /// Indices of maximal simplices containing `s`.
    pub fn containing(&self, s: Simplex) -> Vec<usize> {
        if s.is_empty() {
            return (0..self.maximal.len()).collect();
        }
        let rarest = s
            .positions()
            .min_by_key(|&p| self.index.get(p).map_or(0, |v| v.len()))
            .unwrap();
        match self.index.get(rarest) {
            None => Vec::new(),
            Some(list) => list
                .iter()
                .map(|&k| k as usize)
                .filter(|&k| s.is_subset(self.maximal[k]))
                .collect(),
        }
    }

    /// Maximal simplices containing `s` (the set `T(s)*`).
    pub fn star_maximal(&self, s: Simplex) -> Vec<Simplex> {
        self.containing(s)
            .into_iter()
            .map(|k| self.maximal[k])
            .collect()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        if s.is_empty() {
            return true;
        }
        let rarest = s
            .positions()
            .min_by_key(|&p| self.index.get(p).map_or(0, |v| v.len()))
            .unwrap();
        match self.index.get(rarest) {
            None => false,
            Some(list) => list.iter().any(|&k| s.is_subset(self.maximal[k as usize])),
        }
    }

    /// Maximal simplices of the link of `s`: `{t \ s : s ⊆ t}`.
    pub fn link_maximal(&self, s: Simplex) -> Result<Vec<Simplex>, TriangulationError> {
        let mut out: Vec<Simplex> = self
            .star_maximal(s)
            .into_iter()
            .map(|t| t.minus(s))
            .collect();
        if out.is_empty() {
            return Err(TriangulationError::NotInComplex(self.dims.fmt_simplex(s)));
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn star(&self, xi: Simplex) -> Result<LocalTriangulation, TriangulationError> {
        let maximal = self.star_maximal(xi);
        if maximal.is_empty() {
            return Err(TriangulationError::NotInComplex(self.dims.fmt_simplex(xi)));
        }
        Ok(LocalTriangulation::from_parts_unchecked(
            self.dims, xi, maximal,
        ))
    }

    pub fn as_local(&self) -> LocalTriangulation {
        LocalTriangulation::from_parts_unchecked(self.dims, Simplex::empty(), self.maximal.clone())
    }

    /// Restriction to the face `rows x cols`, relabelled order-preservingly.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Triangulation {
        let (dims, trees) = restrict_trees(self.dims, &self.maximal, rows, cols);
        Triangulation::from_trees_unchecked(dims, trees)
    }

    /// Canonical digest: SHA-256 over the dimensions and sorted bitsets.
    pub fn digest(&self) -> String {
        digest_of(self.dims, &self.maximal)
    }
}

pub fn digest_of(dims: Dims, sorted: &[Simplex]) -> String {
    let mut h = Sha256::new();
    h.update((dims.m() as u64).to_le_bytes());
    h.update((dims.n() as u64).to_le_bytes());
    for s in sorted {
        h.update(s.bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Maximal elements of `{t ∩ (rows x cols)}` that span the face, relabelled.
fn restrict_trees(
    dims: Dims,
    trees: &[Simplex],
    rows: &[usize],
    cols: &[usize],
) -> (Dims, Vec<Simplex>) {
    let face = Dims::new(rows.len(), cols.len()).expect("nonempty face");
    let mut out = Vec::new();
    for &t in trees {
        let mut s = Simplex::empty();
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if t.has(dims.pos(i, j)) {
                    s = s.with(face.pos(a, b));
                }
            }
        }
        if s.len() == face.tree_size() {
            out.push(s);
        }
    }
    out.sort_unstable();
    out.dedup();
    (face, out)
}

fn relabel_simplex(dims: Dims, face: Dims, s: Simplex, rows: &[usize], cols: &[usize]) -> Simplex {
    let mut out = Simplex::empty();
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            if s.has(dims.pos(i, j)) {
                out = out.with(face.pos(a, b));
            }
        }
    }
    out
}

/// Maximal simplices all containing a common base simplex.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalTriangulation {
    dims: Dims,
    base: Simplex,
    maximal: Vec<Simplex>,
}

impl fmt::Debug for LocalTriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trees: Vec<String> = self
            .maximal
            .iter()
            .map(|&s| self.dims.fmt_simplex(s))
            .collect();
        f.debug_struct("LocalTriangulation")
            .field("base", &self.dims.fmt_simplex(self.base))
            .field("maximal", &trees)
            .finish()
    }
}

impl LocalTriangulation {
    pub fn new(
        dims: Dims,
        base: Simplex,
        maximal: Vec<Simplex>,
    ) -> Result<Self, TriangulationError> {
        let l = Self::from_parts_unchecked(dims, base, maximal);
        let report = l.validate();
        if !report.is_valid() {
            return Err(TriangulationError::Invalid(report));
        }
        Ok(l)
    }

    pub fn from_parts_unchecked(dims: Dims, base: Simplex, mut maximal: Vec<Simplex>) -> Self {
        maximal.sort_unstable();
        maximal.dedup();
        LocalTriangulation {
            dims,
            base,
            maximal,
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn base(&self) -> Simplex {
        self.base
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    pub fn len(&self) -> usize {
        self.maximal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.base.is_subset(s) && self.maximal.iter().any(|&t| s.is_subset(t))
    }

    /// Sub-local triangulation at `xi ∪ base`.
    pub fn star(&self, xi: Simplex) -> Result<LocalTriangulation, TriangulationError> {
        let b = self.base.union(xi);
        let maximal: Vec<Simplex> = self
            .maximal
            .iter()
            .copied()
            .filter(|t| b.is_subset(*t))
            .collect();
        if maximal.is_empty() {
            return Err(TriangulationError::NotInComplex(self.dims.fmt_simplex(xi)));
        }
        Ok(LocalTriangulation::from_parts_unchecked(
            self.dims, b, maximal,
        ))
    }

    /// Restriction to `rows x cols`; base becomes `base ∩ face`.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> LocalTriangulation {
        let (face, trees) = restrict_trees(self.dims, &self.maximal, rows, cols);
        let base = relabel_simplex(self.dims, face, self.base, rows, cols);
        LocalTriangulation::from_parts_unchecked(face, base, trees)
    }

    /// Spanning trees, common base, pairwise proper, and every interior
    /// facet through the base shared by exactly two maximal simplices.
    ///
    /// With an empty base the cardinality check of a full triangulation is
    /// used instead of the facet check.
    pub fn validate(&self) -> ValidityReport {
        let dims = self.dims;
        if self.base.is_empty() {
            return validate_collection(dims, &self.maximal);
        }
        let mut violations = Vec::new();
        for (i, &t) in self.maximal.iter().enumerate() {
            if !graph::is_spanning_tree(dims, t) {
                violations.push(Violation::NotSpanningTree {
                    index: i,
                    cyclic: !graph::is_forest(dims, t),
                });
            }
            if !self.base.is_subset(t) {
                violations.push(Violation::MissingBase { index: i });
            }
        }
        for a in 0..self.maximal.len() {
            for b in a + 1..self.maximal.len() {
                if !proper(dims, self.maximal[a], self.maximal[b]) {
                    violations.push(Violation::Improper { a, b });
                }
            }
        }
        if violations.is_empty() {
            for (i, &t) in self.maximal.iter().enumerate() {
                for p in t.minus(self.base).positions() {
                    let facet = t.without(p);
                    if !is_interior_facet(dims, facet) {
                        continue;
                    }
                    let count = self.maximal.iter().filter(|&&u| facet.is_subset(u)).count();
                    if count != 2 {
                        violations.push(Violation::OpenFacet {
                            index: i,
                            facet: facet.bits(),
                        });
                    }
                }
            }
        }
        ValidityReport { violations }
    }
}

/// A codimension-one face of a spanning tree is interior to the product iff
/// it leaves no row or column isolated.
pub fn is_interior_facet(dims: Dims, facet: Simplex) -> bool {
    (0..dims.m()).all(|i| facet.intersects(dims.row_mask(i)))
        && (0..dims.n()).all(|j| facet.intersects(dims.col_mask(j)))
}

/// Partitions associated to a simplex and the induced relabelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    /// Row blocks `I_1..I_s`, ordered by smallest member.
    pub row_blocks: Vec<Vec<usize>>,
    /// Column blocks `J_1..J_t`, ordered by smallest member.
    pub col_blocks: Vec<Vec<usize>>,
    /// `(p, q)` block pairs of the components of `T(xi)` that carry an edge.
    pub anchors: Vec<(usize, usize)>,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    source: Dims,
    target: Dims,
}

impl ContractionMap {
    pub fn new(dims: Dims, xi: Simplex) -> Self {
        let comps = Components::of(dims, xi);
        let mut row_blocks: Vec<Vec<usize>> = Vec::new();
        let mut row_of = vec![0; dims.m()];
        let mut comp_row_block = vec![usize::MAX; comps.count()];
        for i in 0..dims.m() {
            let c = comps.of_row(i);
            if comp_row_block[c] == usize::MAX {
                comp_row_block[c] = row_blocks.len();
                row_blocks.push(Vec::new());
            }
            row_blocks[comp_row_block[c]].push(i);
            row_of[i] = comp_row_block[c];
        }
        let mut col_blocks: Vec<Vec<usize>> = Vec::new();
        let mut col_of = vec![0; dims.n()];
        let mut comp_col_block = vec![usize::MAX; comps.count()];
        for j in 0..dims.n() {
            let c = comps.of_col(j);
            if comp_col_block[c] == usize::MAX {
                comp_col_block[c] = col_blocks.len();
                col_blocks.push(Vec::new());
            }
            col_blocks[comp_col_block[c]].push(j);
            col_of[j] = comp_col_block[c];
        }
        let mut anchors = Vec::new();
        for c in 0..comps.count() {
            if comp_row_block[c] != usize::MAX && comp_col_block[c] != usize::MAX {
                anchors.push((comp_row_block[c], comp_col_block[c]));
            }
        }
        anchors.sort_unstable();
        let target = Dims::new(row_blocks.len(), col_blocks.len()).expect("contracted dims");
        ContractionMap {
            row_blocks,
            col_blocks,
            anchors,
            row_of,
            col_of,
            source: dims,
            target,
        }
    }

    pub fn target(&self) -> Dims {
        self.target
    }

    pub fn map_row(&self, i: usize) -> usize {
        self.row_of[i]
    }

    pub fn map_col(&self, j: usize) -> usize {
        self.col_of[j]
    }

    pub fn anchor_simplex(&self) -> Simplex {
        self.target.simplex(self.anchors.iter().copied())
    }

    /// Image of a simplex under the product map of the block maps.
    pub fn apply(&self, s: Simplex) -> Simplex {
        let mut out = Simplex::empty();
        for v in self.source.edges(s) {
            out = out.with(self.target.pos(self.row_of[v.row], self.col_of[v.col]));
        }
        out
    }
}

/// A contracted star with the explicit bijection back to the source.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub map: ContractionMap,
    pub image: LocalTriangulation,
    /// `(source maximal simplex, image maximal simplex)` pairs.
    pub pairs: Vec<(Simplex, Simplex)>,
}

impl Contraction {
    pub fn lift(&self, image: Simplex) -> Option<Simplex> {
        self.pairs.iter().find(|p| p.1 == image).map(|p| p.0)
    }
}

pub fn contract(l: &LocalTriangulation, xi: Simplex) -> Result<Contraction, TriangulationError> {
    let star = l.star(xi)?;
    let map = ContractionMap::new(l.dims(), xi);
    let target = map.target();
    let mut pairs: Vec<(Simplex, Simplex)> = Vec::new();
    for &t in star.maximal() {
        let img = map.apply(t);
        if img.len() != target.tree_size() {
            return Err(TriangulationError::MalformedLocal(format!(
                "{} does not map to a spanning tree",
                l.dims().fmt_simplex(t)
            )));
        }
        pairs.push((t, img));
    }
    let base = map.anchor_simplex().union(map.apply(l.base()));
    let image =
        LocalTriangulation::from_parts_unchecked(target, base, pairs.iter().map(|p| p.1).collect());
    if image.len() != pairs.len() {
        return Err(TriangulationError::MalformedLocal(
            "contraction is not injective".into(),
        ));
    }
    Ok(Contraction { map, image, pairs })
}

pub fn contract_triangulation(
    t: &Triangulation,
    xi: Simplex,
) -> Result<Contraction, TriangulationError> {
    contract(&t.as_local(), xi)
}
