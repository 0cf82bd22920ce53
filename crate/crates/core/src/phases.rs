//! The three-phase flip path from any triangulation of `Δ^3 x Δ^{n-1}` to
//! the staircase triangulation.
//!
//! Rows are addressed through a [`Frame`] that maps the labels `1..=4` used
//! by the case analysis to physical rows, so that symmetric cases run the
//! same code with rows swapped. Columns are always physical. Every claim the
//! case analysis relies on is checked at runtime; a failed check stops the
//! driver with [`PhaseError::ProofGap`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::flip::{self, FlipCertificate, FlipSupport, OrderDelta};
use crate::graph::{self, Dims, Node, Simplex};
use crate::orders::{self, Extremum, MoveFilter, OrderError, PrecedenceDigraph};
use crate::triangulation::{Triangulation, ValidityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "I")]
    One,
    #[serde(rename = "II")]
    Two,
    #[serde(rename = "III")]
    Three,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::One => "I",
            Phase::Two => "II",
            Phase::Three => "III",
        })
    }
}

/// Role of a flip within its phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// The flip that shrinks the phase's defect set.
    Decrease,
    /// A flip clearing the star of the target circuit.
    Prepare,
    /// A flip clearing the star of an auxiliary circuit (Case 3 only).
    PrepareInner,
    /// Adjacent swap in the order on rows 3 and 4.
    SwapLower,
    /// Step `k` (1..=5) of the swap macro for the order on rows 1 and 2.
    Macro(u8),
}

/// Counters recorded after each flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PhaseMeasure {
    pub t_one: usize,
    pub t_two: usize,
    /// Maximal simplices through the target circuit's minus part.
    pub star_x: Option<usize>,
    /// Case 3: the second of the two one-sided subsets of that star.
    pub second: Option<usize>,
    /// Maximal simplices through the auxiliary circuit's minus part.
    pub star_y: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipStep {
    pub circuit: Circuit,
    pub phase: Phase,
    pub kind: StepKind,
    pub measure: Option<PhaseMeasure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSequence {
    pub dims: Dims,
    pub start: String,
    pub end: String,
    pub steps: Vec<FlipStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: circuit {circuit} does not support a flip")]
    Unsupported { step: usize, circuit: String },
    #[error("step {step}: result is not a triangulation: {report}")]
    Invalid { step: usize, report: ValidityReport },
    #[error("start digest {expected} does not match the input {found}")]
    StartMismatch { expected: String, found: String },
    #[error("end digest {expected} does not match the replay result {found}")]
    EndMismatch { expected: String, found: String },
}

impl FlipSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn circuits(&self) -> impl Iterator<Item = &Circuit> {
        self.steps.iter().map(|s| &s.circuit)
    }

    pub fn count(&self, phase: Phase) -> usize {
        self.steps.iter().filter(|s| s.phase == phase).count()
    }

    /// Replays the sequence from `start`, optionally validating each
    /// intermediate triangulation, and checks both digests.
    pub fn replay(
        &self,
        start: &Triangulation,
        validate: bool,
    ) -> Result<Triangulation, ReplayError> {
        let found = start.digest();
        if found != self.start {
            return Err(ReplayError::StartMismatch {
                expected: self.start.clone(),
                found,
            });
        }
        let out = replay_circuits(start, self.circuits(), validate)?;
        let found = out.digest();
        if found != self.end {
            return Err(ReplayError::EndMismatch {
                expected: self.end.clone(),
                found,
            });
        }
        Ok(out)
    }

    /// The same path walked backwards.
    pub fn inverse(&self) -> FlipSequence {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| FlipStep {
                circuit: s.circuit.reversed(),
                phase: s.phase,
                kind: s.kind,
                measure: None,
            })
            .collect();
        FlipSequence {
            dims: self.dims,
            start: self.end.clone(),
            end: self.start.clone(),
            steps,
        }
    }

    /// `self` followed by `next`; `next` must start where `self` ends.
    pub fn concat(&self, next: &FlipSequence) -> Option<FlipSequence> {
        if self.end != next.start || self.dims != next.dims {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Some(FlipSequence {
            dims: self.dims,
            start: self.start.clone(),
            end: next.end.clone(),
            steps,
        })
    }
}

/// Applies each circuit's flip in turn.
pub fn replay_circuits<'a>(
    start: &Triangulation,
    circuits: impl IntoIterator<Item = &'a Circuit>,
    validate: bool,
) -> Result<Triangulation, ReplayError> {
    let mut t = start.clone();
    for (step, x) in circuits.into_iter().enumerate() {
        let cert =
            flip::supports_flip(&t, x)
                .certificate()
                .ok_or_else(|| ReplayError::Unsupported {
                    step,
                    circuit: x.to_string(),
                })?;
        t = flip::apply_flip(&t, &cert).expect("fresh certificate");
        if validate {
            let report = t.validate();
            if !report.is_valid() {
                return Err(ReplayError::Invalid { step, report });
            }
        }
    }
    Ok(t)
}

/// A claim of the case analysis that failed on a concrete triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofGap {
    pub phase: Phase,
    pub location: String,
    pub message: String,
    pub digest: String,
    pub trees: Vec<String>,
    pub context: Vec<(String, String)>,
}

impl fmt::Display for ProofGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "phase {} at {}: {} [triangulation {}]",
            self.phase, self.location, self.message, self.digest
        )?;
        for (k, v) in &self.context {
            write!(f, "; {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhaseError {
    #[error("the phase algorithm needs m = 4, got m = {0}")]
    WrongDims(usize),
    #[error("input is not a triangulation: {0}")]
    InvalidInput(ValidityReport),
    #[error("phase precondition failed: {0}")]
    Precondition(String),
    #[error("proof gap: {0}")]
    ProofGap(Box<ProofGap>),
}

/// Row labels `1..=4` mapped to physical rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frame([usize; 4]);

impl Frame {
    pub fn identity() -> Self {
        Frame([0, 1, 2, 3])
    }

    /// Exchanges the rows carried by labels `a` and `b`.
    pub fn swap(self, a: usize, b: usize) -> Self {
        let mut r = self.0;
        r.swap(a - 1, b - 1);
        Frame(r)
    }

    pub fn row(&self, label: usize) -> usize {
        self.0[label - 1]
    }

    pub fn label(&self, row: usize) -> usize {
        self.0
            .iter()
            .position(|&r| r == row)
            .expect("row of a four-row frame")
            + 1
    }

    pub fn edge(&self, dims: Dims, label: usize, col: usize) -> Simplex {
        dims.edge(self.row(label), col)
    }

    pub fn simplex(&self, dims: Dims, edges: &[(usize, usize)]) -> Simplex {
        dims.simplex(edges.iter().map(|&(l, c)| (self.row(l), c)))
    }

    /// `X- = {labels[r] x cols[r]}`, `X+ = {labels[r+1] x cols[r]}`.
    pub fn circuit(&self, dims: Dims, labels: &[usize], cols: &[usize]) -> Option<Circuit> {
        let rows: Vec<usize> = labels.iter().map(|&l| self.row(l)).collect();
        Circuit::from_sequence(dims, &rows, cols).ok()
    }

    pub fn neighbors(&self, dims: Dims, s: Simplex, col: usize) -> Vec<usize> {
        let mut v: Vec<usize> = graph::col_neighbors(dims, s, col)
            .into_iter()
            .map(|r| self.label(r))
            .collect();
        v.sort_unstable();
        v
    }
}

fn four(dims: Dims) -> Result<(), PhaseError> {
    if dims.m() == 4 {
        Ok(())
    } else {
        Err(PhaseError::WrongDims(dims.m()))
    }
}

fn has_pair(dims: Dims, tau: Simplex, j: usize, a: usize, b: usize) -> bool {
    tau.has(dims.pos(a, j)) && tau.has(dims.pos(b, j))
}

/// Some column meets rows 1 and 2 but not row 4.
pub fn in_t_one(dims: Dims, tau: Simplex) -> bool {
    (0..dims.n()).any(|j| has_pair(dims, tau, j, 0, 1) && !tau.has(dims.pos(3, j)))
}

/// Some column meets rows 1 and 2 but not both of rows 3 and 4.
pub fn in_t_two(dims: Dims, tau: Simplex) -> bool {
    (0..dims.n()).any(|j| has_pair(dims, tau, j, 0, 1) && !has_pair(dims, tau, j, 2, 3))
}

pub fn compute_ti(t: &Triangulation) -> Result<Vec<Simplex>, PhaseError> {
    four(t.dims())?;
    Ok(t.maximal()
        .iter()
        .copied()
        .filter(|&s| in_t_one(t.dims(), s))
        .collect())
}

pub fn compute_tii(t: &Triangulation) -> Result<Vec<Simplex>, PhaseError> {
    four(t.dims())?;
    Ok(t.maximal()
        .iter()
        .copied()
        .filter(|&s| in_t_two(t.dims(), s))
        .collect())
}

/// All spanning trees that follow a monotone lattice path through the grid
/// with rows in `row_order` and columns in reverse `col_order`: the
/// non-crossing trees of the two-line drawing.
pub fn staircase_with(dims: Dims, row_order: &[usize], col_order: &[usize]) -> Triangulation {
    let (m, n) = (dims.m(), dims.n());
    let cols: Vec<usize> = col_order.iter().rev().copied().collect();
    let mut trees = Vec::new();
    // choose which of the m+n-2 steps advance the row
    let steps = m + n - 2;
    let mut stack = vec![(
        0usize,
        0usize,
        Simplex::empty().with(dims.pos(row_order[0], cols[0])),
    )];
    while let Some((a, b, s)) = stack.pop() {
        if a + b == steps {
            trees.push(s);
            continue;
        }
        if a + 1 < m {
            stack.push((a + 1, b, s.with(dims.pos(row_order[a + 1], cols[b]))));
        }
        if b + 1 < n {
            stack.push((a, b + 1, s.with(dims.pos(row_order[a], cols[b + 1]))));
        }
    }
    Triangulation::from_trees_unchecked(dims, trees)
}

/// The staircase triangulation of `Δ^3 x Δ^{n-1}`: rows drawn in the order
/// 1, 3, 4, 2 and columns `f_n, ..., f_1`.
pub fn staircase(n: usize) -> Triangulation {
    let dims = Dims::new(4, n).expect("n must be between 1 and 32");
    let cols: Vec<usize> = (0..n).collect();
    staircase_with(dims, &[0, 2, 3, 1], &cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoodnessKind {
    /// No other defect-one simplex through the base misses the distinguished
    /// simplex, and no column outside the two special ones meets rows 1, 2.
    TauOne,
    /// No simplex through the base lies in the first one-sided subset while
    /// missing the distinguished simplex.
    TauZero,
    /// The anchor is the only defect-two simplex through the base, and no
    /// column outside the two special ones meets rows 1, 2.
    TauTwo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessContext {
    pub kind: GoodnessKind,
    pub frame: Frame,
    pub anchor: Simplex,
    pub distinguished: Simplex,
    /// Minus part of the circuit whose star is examined.
    pub base: Simplex,
    /// The target circuit (its plus part and first column define the
    /// one-sided subsets used by `TauZero`).
    pub target: Circuit,
    pub cols: (usize, usize),
}

/// The one-sided subset of the star of `x-`: simplices containing
/// `1 x c1` but not `2 x c1`, and disjoint from `x+`.
fn one_sided(t: &Triangulation, fr: Frame, x: &Circuit, c1: usize) -> Vec<Simplex> {
    let dims = t.dims();
    let a = fr.edge(dims, 1, c1);
    let b = fr.edge(dims, 2, c1);
    t.star_maximal(x.minus())
        .into_iter()
        .filter(|&u| a.is_subset(u) && !b.is_subset(u) && !u.intersects(x.plus()))
        .collect()
}

pub fn goodness(t: &Triangulation, ctx: &GoodnessContext) -> bool {
    let dims = t.dims();
    let star = t.star_maximal(ctx.base);
    let fr = ctx.frame;
    let (c1, c2) = ctx.cols;
    let clause_b = || {
        star.iter().all(|&u| {
            (0..dims.n())
                .filter(|&j| j != c1 && j != c2)
                .all(|j| !has_pair(dims, u, j, fr.row(1), fr.row(2)))
        })
    };
    match ctx.kind {
        GoodnessKind::TauOne => {
            star.iter()
                .all(|&u| !(in_t_one(dims, u) && !ctx.distinguished.is_subset(u)))
                && clause_b()
        }
        GoodnessKind::TauTwo => {
            star.iter()
                .all(|&u| !(in_t_two(dims, u) && u != ctx.anchor))
                && clause_b()
        }
        GoodnessKind::TauZero => {
            let first = one_sided(t, fr.swap(1, 2), &ctx.target, c1);
            star.iter()
                .all(|u| !(first.contains(u) && !ctx.distinguished.is_subset(*u)))
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Watch {
    x: Option<Simplex>,
    second: Option<(Frame, Circuit, usize)>,
    y: Option<Simplex>,
}

struct Driver {
    t: Triangulation,
    steps: Vec<FlipStep>,
    phase: Phase,
    watch: Watch,
}

type Res<T> = Result<T, PhaseError>;

/// The two-point target of the first case, and of the second phase with
/// rows 3 and 4 exchanged in the frame.
#[derive(Debug, Clone, Copy)]
enum Anchor {
    One { tau: Simplex, sigma: Simplex },
    Two { tau: Simplex },
}

impl Anchor {
    fn tau(&self) -> Simplex {
        match *self {
            Anchor::One { tau, .. } | Anchor::Two { tau } => tau,
        }
    }
}

impl Driver {
    fn new(t: &Triangulation) -> Self {
        Driver {
            t: t.clone(),
            steps: Vec::new(),
            phase: Phase::One,
            watch: Watch::default(),
        }
    }

    fn dims(&self) -> Dims {
        self.t.dims()
    }

    fn gap(&self, location: &str, message: impl Into<String>) -> PhaseError {
        self.gap_with(location, message, Vec::new())
    }

    fn gap_with(
        &self,
        location: &str,
        message: impl Into<String>,
        context: Vec<(String, String)>,
    ) -> PhaseError {
        let dims = self.dims();
        PhaseError::ProofGap(Box::new(ProofGap {
            phase: self.phase,
            location: location.to_string(),
            message: message.into(),
            digest: self.t.digest(),
            trees: self
                .t
                .maximal()
                .iter()
                .map(|&s| dims.fmt_simplex(s))
                .collect(),
            context,
        }))
    }

    fn ensure(&self, cond: bool, location: &str, message: &str) -> Res<()> {
        if cond {
            Ok(())
        } else {
            Err(self.gap(location, message))
        }
    }

    fn order_gap(&self, location: &str, e: OrderError) -> PhaseError {
        self.gap(location, format!("order computation failed: {e}"))
    }

    fn t_one(&self) -> usize {
        let dims = self.dims();
        self.t
            .maximal()
            .iter()
            .filter(|&&s| in_t_one(dims, s))
            .count()
    }

    fn t_two(&self) -> usize {
        let dims = self.dims();
        self.t
            .maximal()
            .iter()
            .filter(|&&s| in_t_two(dims, s))
            .count()
    }

    fn star_count(&self, base: Simplex) -> usize {
        self.t.containing(base).len()
    }

    fn measure(&self) -> PhaseMeasure {
        PhaseMeasure {
            t_one: self.t_one(),
            t_two: self.t_two(),
            star_x: self.watch.x.map(|x| self.star_count(x)),
            second: self
                .watch
                .second
                .as_ref()
                .map(|(fr, x, c1)| one_sided(&self.t, *fr, x, *c1).len()),
            star_y: self.watch.y.map(|y| self.star_count(y)),
        }
    }

    fn circuit(&self, fr: Frame, labels: &[usize], cols: &[usize], location: &str) -> Res<Circuit> {
        fr.circuit(self.dims(), labels, cols).ok_or_else(|| {
            self.gap_with(
                location,
                "circuit indices do not form a cycle",
                vec![
                    ("labels".into(), format!("{labels:?}")),
                    ("cols".into(), format!("{cols:?}")),
                ],
            )
        })
    }

    fn try_certificate(&self, x: &Circuit) -> Option<FlipCertificate> {
        match flip::supports_flip(&self.t, x) {
            FlipSupport::Flip(c) => Some(c),
            _ => None,
        }
    }

    fn apply(&mut self, cert: &FlipCertificate, kind: StepKind) {
        self.t = flip::apply_flip(&self.t, cert).expect("fresh certificate");
        let measure = Some(self.measure());
        self.steps.push(FlipStep {
            circuit: cert.circuit.clone(),
            phase: self.phase,
            kind,
            measure,
        });
    }

    fn flip(&mut self, x: &Circuit, kind: StepKind, location: &str) -> Res<FlipCertificate> {
        match self.try_certificate(x) {
            Some(cert) => {
                self.apply(&cert, kind);
                Ok(cert)
            }
            None => Err(self.gap_with(
                location,
                "expected flip is not supported",
                vec![("circuit".into(), x.to_string())],
            )),
        }
    }

    fn precedence(&self, filter: MoveFilter) -> PrecedenceDigraph {
        PrecedenceDigraph::build(self.dims(), self.t.maximal(), filter)
    }

    fn extremal(&self, subset: &[Simplex], g: &PrecedenceDigraph, location: &str) -> Res<Simplex> {
        orders::select_extremal(subset, g, Extremum::Max).map_err(|e| self.order_gap(location, e))
    }

    fn minimal_through(&self, base: Simplex, label_row: usize, location: &str) -> Res<Simplex> {
        let star = self
            .t
            .star(base)
            .map_err(|e| self.gap(location, format!("star is not a local triangulation: {e}")))?;
        let dims = self.dims();
        let matching = (0..dims.m()).all(|i| base.inter(dims.row_mask(i)).len() <= 1)
            && (0..dims.n()).all(|j| base.inter(dims.col_mask(j)).len() <= 1);
        let found = if matching {
            orders::unique_minimal(&star, label_row)
        } else {
            orders::unique_minimal_by_moves(dims, star.maximal(), label_row)
        };
        found.map_err(|e| self.order_gap(location, e))
    }

    /// Row labels and columns along the tree path between two labelled rows.
    fn path(&self, fr: Frame, tau: Simplex, from: usize, to: usize) -> (Vec<usize>, Vec<usize>) {
        let dims = self.dims();
        let nodes = graph::tree_path(dims, tau, Node::Row(fr.row(from)), Node::Row(fr.row(to)))
            .expect("spanning tree");
        let mut labels = Vec::new();
        let mut cols = Vec::new();
        for v in nodes {
            match v {
                Node::Row(i) => labels.push(fr.label(i)),
                Node::Col(j) => cols.push(j),
            }
        }
        (labels, cols)
    }

    fn snapshot_ctx(&self, pairs: &[(&str, String)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    // ---- Phase I -------------------------------------------------------

    fn phase_one(&mut self) -> Res<()> {
        self.phase = Phase::One;
        loop {
            let dims = self.dims();
            let ti: Vec<Simplex> = self
                .t
                .maximal()
                .iter()
                .copied()
                .filter(|&s| in_t_one(dims, s))
                .collect();
            if ti.is_empty() {
                self.watch = Watch::default();
                return Ok(());
            }
            let before = ti.len();
            let g34 = self.precedence(MoveFilter::pair(2, 3));
            let tau = self.extremal(&ti, &g34, "I/select")?;
            self.dispatch(tau, &g34)?;
            let after = self.t_one();
            if after >= before {
                return Err(self.gap_with(
                    "I/outer",
                    "defect set did not shrink",
                    self.snapshot_ctx(&[
                        ("before", before.to_string()),
                        ("after", after.to_string()),
                    ]),
                ));
            }
        }
    }

    fn dispatch(&mut self, tau: Simplex, g34: &PrecedenceDigraph) -> Res<()> {
        let dims = self.dims();
        let id = Frame::identity();
        let nb: Vec<Vec<usize>> = (0..dims.n()).map(|j| id.neighbors(dims, tau, j)).collect();
        let c1 = (0..dims.n())
            .find(|&j| nb[j].contains(&1) && nb[j].contains(&2) && !nb[j].contains(&4))
            .ok_or_else(|| self.gap("I/dispatch", "selected simplex is not in the defect set"))?;
        if let Some(c2) = (0..dims.n())
            .find(|&j| j != c1 && nb[j].contains(&4) && (nb[j].contains(&1) || nb[j].contains(&2)))
        {
            let fr = if nb[c2].contains(&1) {
                id
            } else {
                id.swap(1, 2)
            };
            return self.case_one(fr, tau, c1, c2, g34);
        }
        let find = |set: &[usize]| (0..dims.n()).find(|&j| nb[j] == set);
        if nb[c1] == [1, 2] {
            if let Some(c2) = find(&[3, 4]) {
                if let Some(c3) = find(&[1, 3]) {
                    return self.case_two(id, tau, c1, c2, c3);
                }
                if let Some(c3) = find(&[2, 3]) {
                    return self.case_two(id.swap(1, 2), tau, c1, c2, c3);
                }
            }
        }
        if nb[c1] == [1, 2, 3] {
            if let Some(c2) = find(&[3, 4]) {
                return self.case_three(id, tau, c1, c2);
            }
        }
        Err(self.gap_with(
            "I/dispatch",
            "shape matches none of the three cases",
            self.snapshot_ctx(&[
                ("tau", dims.fmt_simplex(tau)),
                ("shape", graph::shape(dims, tau).to_string()),
            ]),
        ))
    }

    fn case_one(
        &mut self,
        fr: Frame,
        tau: Simplex,
        c1: usize,
        c2: usize,
        g34: &PrecedenceDigraph,
    ) -> Res<()> {
        let dims = self.dims();
        let x = self.circuit(fr, &[1, 4], &[c1, c2], "I/1/X")?;
        let sigma = x.support().minus(fr.edge(dims, 4, c1));
        let sigma_i = sigma.union(fr.edge(dims, 2, c1));
        self.ensure(
            sigma_i.is_subset(tau),
            "I/1/setup",
            "target facet not inside the selected simplex",
        )?;
        // replace the selected simplex by the minimal one through X-
        let tau_star = self.minimal_through(x.minus(), fr.row(4), "I/1/redefine")?;
        self.ensure(
            sigma_i.is_subset(tau_star),
            "I/1/redefine",
            "minimal simplex misses the target facet",
        )?;
        self.ensure(
            in_t_one(dims, tau_star),
            "I/1/redefine",
            "minimal simplex left the defect set",
        )?;
        self.ensure(
            orders::equivalent_12(dims, tau, tau_star, fr.row(3)),
            "I/1/redefine",
            "minimal simplex not equivalent to the selected one",
        )?;
        let ti: Vec<Simplex> = self
            .t
            .maximal()
            .iter()
            .copied()
            .filter(|&s| in_t_one(dims, s))
            .collect();
        let top = g34.index_of(tau_star).expect("node of the triangulation");
        let still_max = ti.iter().all(|&u| {
            let k = g34.index_of(u).expect("node");
            !(g34.reaches(top, k) && !g34.reaches(k, top))
        });
        self.ensure(
            still_max,
            "I/1/redefine",
            "minimal simplex is not maximal in the defect set",
        )?;
        self.reduce_two_point(
            fr,
            &x,
            c1,
            c2,
            Anchor::One {
                tau: tau_star,
                sigma: sigma_i,
            },
            "I/1",
        )
    }

    /// Drives the star of `x-` empty of obstructions, then flips `x`.
    /// Row 4 of the frame is the far end of the target circuit.
    fn reduce_two_point(
        &mut self,
        fr: Frame,
        x: &Circuit,
        c1: usize,
        c2: usize,
        anchor: Anchor,
        loc: &str,
    ) -> Res<()> {
        let dims = self.dims();
        let defect = |d: &Driver| match anchor {
            Anchor::One { .. } => d.t_one(),
            Anchor::Two { .. } => d.t_two(),
        };
        let ctx = match anchor {
            Anchor::One { tau, sigma } => GoodnessContext {
                kind: GoodnessKind::TauOne,
                frame: fr,
                anchor: tau,
                distinguished: sigma,
                base: x.minus(),
                target: x.clone(),
                cols: (c1, c2),
            },
            Anchor::Two { tau } => GoodnessContext {
                kind: GoodnessKind::TauTwo,
                frame: fr,
                anchor: tau,
                distinguished: tau,
                base: x.minus(),
                target: x.clone(),
                cols: (c1, c2),
            },
        };
        self.watch = Watch {
            x: Some(x.minus()),
            ..Watch::default()
        };
        self.ensure(
            goodness(&self.t, &ctx),
            loc,
            "star of the target is not good",
        )?;
        let sigma = x.support().minus(fr.edge(dims, 4, c1));
        loop {
            let star_before = self.star_count(x.minus());
            let defect_before = defect(self);
            if let Some(cert) = self.try_certificate(x) {
                self.apply(&cert, StepKind::Decrease);
                return Ok(());
            }
            self.ensure(
                self.t.contains(sigma),
                loc,
                "plus-side facet of the target disappeared",
            )?;
            let s: Vec<Simplex> = self
                .t
                .star_maximal(x.minus())
                .into_iter()
                .filter(|u| !u.intersects(x.plus()))
                .collect();
            self.ensure(
                !s.is_empty(),
                loc,
                "no flip although no simplex obstructs it",
            )?;
            for &u in &s {
                let bad = [(1, c2), (4, c1), (2, c1), (2, c2)]
                    .iter()
                    .any(|&(l, c)| u.has(dims.pos(fr.row(l), c)));
                self.ensure(!bad, loc, "obstructing simplex has a forbidden edge")?;
            }
            let g21 = self.precedence(MoveFilter::pair(fr.row(2), fr.row(1)));
            let tau = self.extremal(&s, &g21, loc)?;
            let (labels, cols) = self.path(fr, tau, 1, 4);
            let y = match (labels.as_slice(), cols.as_slice()) {
                ([1, 3, 4], &[j1, j2]) if j2 != c2 => {
                    self.circuit(fr, &[1, 3, 4], &[j1, j2, c2], loc)?
                }
                ([1, 3, 2, 4], &[j1, j2, j3]) if j3 != c2 => {
                    self.circuit(fr, &[1, 3, 2, 4], &[j1, j2, j3, c2], loc)?
                }
                _ => {
                    return Err(self.gap_with(
                        loc,
                        "path from row 1 to row 4 has neither expected form",
                        self.snapshot_ctx(&[
                            ("tau", dims.fmt_simplex(tau)),
                            ("rows", format!("{labels:?}")),
                            ("cols", format!("{cols:?}")),
                        ]),
                    ))
                }
            };
            let rho = y.support().minus(fr.edge(dims, 1, c2));
            self.ensure(
                rho.is_subset(tau),
                loc,
                "auxiliary facet not inside the chosen simplex",
            )?;
            self.flip(&y, StepKind::Prepare, loc)?;
            self.ensure(
                self.star_count(x.minus()) < star_before,
                loc,
                "star of the target did not shrink",
            )?;
            self.ensure(defect(self) <= defect_before, loc, "defect set grew")?;
            self.ensure(
                self.t.contains_maximal(anchor.tau()),
                loc,
                "anchor simplex flipped away",
            )?;
            self.ensure(goodness(&self.t, &ctx), loc, "goodness lost")?;
        }
    }

    fn case_two(&mut self, fr: Frame, tau_i: Simplex, c1: usize, c2: usize, c3: usize) -> Res<()> {
        let dims = self.dims();
        let loc = "I/2";
        let x = self.circuit(fr, &[1, 4, 3], &[c1, c2, c3], loc)?;
        let sigma = x.support().minus(fr.edge(dims, 4, c1));
        let sigma_i = sigma.union(fr.edge(dims, 2, c1));
        self.ensure(
            sigma_i.is_subset(tau_i),
            loc,
            "target facet not inside the selected simplex",
        )?;
        let min = self.minimal_through(x.minus(), fr.row(4), loc)?;
        self.ensure(
            min == tau_i,
            loc,
            "selected simplex is not minimal through X-",
        )?;
        let ctx = GoodnessContext {
            kind: GoodnessKind::TauOne,
            frame: fr,
            anchor: tau_i,
            distinguished: sigma_i,
            base: x.minus(),
            target: x.clone(),
            cols: (c1, c2),
        };
        self.watch = Watch {
            x: Some(x.minus()),
            ..Watch::default()
        };
        self.ensure(
            goodness(&self.t, &ctx),
            loc,
            "star of the target is not good",
        )?;
        loop {
            let star_before = self.star_count(x.minus());
            let defect_before = self.t_one();
            if let Some(cert) = self.try_certificate(&x) {
                self.apply(&cert, StepKind::Decrease);
                return Ok(());
            }
            self.ensure(
                self.t.contains(sigma),
                loc,
                "plus-side facet of the target disappeared",
            )?;
            let s: Vec<Simplex> = self
                .t
                .star_maximal(x.minus())
                .into_iter()
                .filter(|u| u.inter(x.plus()).len() <= 1 && !u.has(dims.pos(fr.row(4), c1)))
                .collect();
            self.ensure(
                !s.is_empty(),
                loc,
                "no flip although no simplex obstructs it",
            )?;
            for &u in &s {
                let bad = [(1, c2), (2, c1), (2, c2), (2, c3)]
                    .iter()
                    .any(|&(l, c)| u.has(dims.pos(fr.row(l), c)));
                self.ensure(!bad, loc, "obstructing simplex has a forbidden edge")?;
            }
            let g24 = self.precedence(MoveFilter::pair(fr.row(2), fr.row(4)));
            let tau = self.extremal(&s, &g24, loc)?;
            let (labels, cols) = self.path(fr, tau, 1, 4);
            let y = match (labels.as_slice(), cols.as_slice()) {
                ([1, 3, 4], &[a, j2]) if a == c3 && j2 != c2 => {
                    self.circuit(fr, &[1, 4, 3], &[c1, j2, c3], loc)?
                }
                ([1, 3, 2, 4], &[a, j2, j3]) if a == c3 && j3 != c2 => {
                    self.circuit(fr, &[1, 4, 2, 3], &[c1, j3, j2, c3], loc)?
                }
                _ => {
                    return Err(self.gap_with(
                        loc,
                        "path from row 1 to row 4 has neither expected form",
                        self.snapshot_ctx(&[
                            ("tau", dims.fmt_simplex(tau)),
                            ("rows", format!("{labels:?}")),
                            ("cols", format!("{cols:?}")),
                        ]),
                    ))
                }
            };
            let rho = y.support().minus(fr.edge(dims, 4, c1));
            self.ensure(
                rho.is_subset(tau),
                loc,
                "auxiliary facet not inside the chosen simplex",
            )?;
            self.flip(&y, StepKind::Prepare, loc)?;
            self.ensure(
                self.star_count(x.minus()) < star_before,
                loc,
                "star of the target did not shrink",
            )?;
            self.ensure(self.t_one() <= defect_before, loc, "defect set grew")?;
            self.ensure(
                self.t.contains_maximal(tau_i),
                loc,
                "anchor simplex flipped away",
            )?;
            self.ensure(goodness(&self.t, &ctx), loc, "goodness lost")?;
        }
    }

    fn case_three(&mut self, fr: Frame, tau_i: Simplex, c1: usize, c2: usize) -> Res<()> {
        let dims = self.dims();
        let loc = "I/3";
        let x = self.circuit(fr, &[3, 4], &[c1, c2], loc)?;
        let sigma = x.support().minus(fr.edge(dims, 4, c1));
        let sigma_i = sigma
            .union(fr.edge(dims, 1, c1))
            .union(fr.edge(dims, 2, c1));
        self.ensure(
            sigma_i.is_subset(tau_i),
            loc,
            "target facet not inside the selected simplex",
        )?;
        let min = self.minimal_through(x.minus(), fr.row(4), loc)?;
        self.ensure(
            min == tau_i,
            loc,
            "selected simplex is not minimal through X-",
        )?;
        let ctx = GoodnessContext {
            kind: GoodnessKind::TauOne,
            frame: fr,
            anchor: tau_i,
            distinguished: sigma_i,
            base: x.minus(),
            target: x.clone(),
            cols: (c1, c2),
        };
        self.ensure(
            goodness(&self.t, &ctx),
            loc,
            "star of the target is not good",
        )?;
        loop {
            self.watch = Watch {
                x: Some(x.minus()),
                ..Watch::default()
            };
            if let Some(cert) = self.try_certificate(&x) {
                self.apply(&cert, StepKind::Decrease);
                return Ok(());
            }
            for u in self.t.star_maximal(x.minus()) {
                if u.intersects(x.plus()) {
                    continue;
                }
                let e = |l: usize, c: usize| u.has(dims.pos(fr.row(l), c));
                let bad = e(1, c2) || e(2, c2) || (e(1, c1) && e(2, c1));
                self.ensure(!bad, loc, "simplex disjoint from X+ has a forbidden edge")?;
            }
            let sub = if !one_sided(&self.t, fr.swap(1, 2), &x, c1).is_empty() {
                fr
            } else if !one_sided(&self.t, fr, &x, c1).is_empty() {
                fr.swap(1, 2)
            } else {
                return Err(self.gap(loc, "no flip on X but both one-sided subsets are empty"));
            };
            self.case_three_claim(sub, &x, c1, c2, &ctx)?;
        }
    }

    /// Empties part of the first one-sided subset (taken in frame `g`) by
    /// clearing the star of an auxiliary circuit `Y` and flipping it.
    fn case_three_claim(
        &mut self,
        g: Frame,
        x: &Circuit,
        c1: usize,
        c2: usize,
        good_i: &GoodnessContext,
    ) -> Res<()> {
        let dims = self.dims();
        let loc = "I/3/claim";
        let star_x0 = self.star_count(x.minus());
        let second0 = one_sided(&self.t, g, x, c1).len();
        let defect0 = self.t_one();
        let tau_i = good_i.anchor;
        self.watch = Watch {
            x: Some(x.minus()),
            second: Some((g, x.clone(), c1)),
            y: None,
        };
        let first = one_sided(&self.t, g.swap(1, 2), x, c1);
        let g14 = self.precedence(MoveFilter::pair(g.row(1), g.row(4)));
        let mut tau0 = self.extremal(&first, &g14, loc)?;
        let (labels, cols) = self.path(g, tau0, 3, 4);
        // direct: 3 - j1 - 4; via: 3 - j2 - 1 - j1 - 4
        let (j1, j2) = match (labels.as_slice(), cols.as_slice()) {
            ([3, 4], &[j1]) if j1 != c1 && j1 != c2 => (j1, None),
            ([3, 1, 4], &[j2, j1]) if j2 != c1 && j1 != c2 => (j1, Some(j2)),
            _ => {
                return Err(self.gap_with(
                    loc,
                    "path from row 3 to row 4 has neither expected form",
                    self.snapshot_ctx(&[
                        ("tau0", dims.fmt_simplex(tau0)),
                        ("rows", format!("{labels:?}")),
                        ("cols", format!("{cols:?}")),
                    ]),
                ))
            }
        };
        let y = match j2 {
            None => self.circuit(g, &[3, 4], &[c1, j1], loc)?,
            Some(j2) => self.circuit(g, &[3, 4, 1], &[c1, j1, j2], loc)?,
        };
        let rho = y.support().minus(g.edge(dims, 4, c1));
        let sigma0 = rho.union(g.edge(dims, 2, c1));
        let steiner = graph::steiner_subforest(
            dims,
            tau0,
            &[
                Node::Row(g.row(2)),
                Node::Row(g.row(3)),
                Node::Row(g.row(4)),
            ],
        );
        self.ensure(
            steiner == Some(sigma0),
            loc,
            "Steiner tree of rows 2, 3, 4 differs from the expected one",
        )?;
        self.ensure(
            sigma0.union(g.edge(dims, 4, c2)).is_subset(tau0),
            loc,
            "chosen simplex misses the expected edges",
        )?;
        if j2.is_none() {
            let tau_star =
                self.minimal_through(sigma0.union(g.edge(dims, 4, c2)), g.row(4), loc)?;
            self.ensure(
                tau_star.has(dims.pos(g.row(1), j1)),
                loc,
                "redefined simplex misses 1 x j1",
            )?;
            self.ensure(
                first.contains(&tau_star),
                loc,
                "redefined simplex left the one-sided subset",
            )?;
            self.ensure(
                orders::equivalent_12(dims, tau0, tau_star, g.row(1)),
                loc,
                "redefined simplex is not equivalent",
            )?;
            tau0 = tau_star;
        }
        let min = self.minimal_through(y.minus(), g.row(4), loc)?;
        self.ensure(min == tau0, loc, "chosen simplex is not minimal through Y-")?;
        let good0 = GoodnessContext {
            kind: GoodnessKind::TauZero,
            frame: g,
            anchor: tau0,
            distinguished: sigma0,
            base: y.minus(),
            target: x.clone(),
            cols: (c1, c2),
        };
        self.ensure(goodness(&self.t, &good0), loc, "star of Y is not good")?;
        self.watch.y = Some(y.minus());
        let jr: Vec<usize> = std::iter::once(j1).chain(j2).collect();
        loop {
            let sx = self.star_count(x.minus());
            let s2 = one_sided(&self.t, g, x, c1).len();
            let sy = self.star_count(y.minus());
            let d0 = self.t_one();
            if let Some(cert) = self.try_certificate(&y) {
                self.apply(&cert, StepKind::Prepare);
                self.ensure(
                    self.star_count(x.minus()) < star_x0,
                    loc,
                    "star of X did not shrink",
                )?;
                self.ensure(
                    one_sided(&self.t, g, x, c1).len() <= second0,
                    loc,
                    "second subset grew",
                )?;
                self.ensure(self.t_one() <= defect0, loc, "defect set grew")?;
                self.ensure(
                    self.t.contains_maximal(tau_i),
                    loc,
                    "anchor simplex flipped away",
                )?;
                self.ensure(goodness(&self.t, good_i), loc, "goodness of X lost")?;
                self.watch.y = None;
                self.watch.second = None;
                return Ok(());
            }
            let sub = "I/3/subclaim";
            self.ensure(
                self.t.contains(rho),
                sub,
                "plus-side facet of Y disappeared",
            )?;
            let limit = y.plus().len() - 2;
            let s: Vec<Simplex> = self
                .t
                .star_maximal(y.minus())
                .into_iter()
                .filter(|u| u.inter(y.plus()).len() <= limit && !u.has(dims.pos(g.row(4), c1)))
                .collect();
            self.ensure(
                !s.is_empty(),
                sub,
                "no flip on Y although no simplex obstructs it",
            )?;
            for &u in &s {
                let e = |l: usize, c: usize| u.has(dims.pos(g.row(l), c));
                let bad = u.intersects(x.plus())
                    || jr.iter().any(|&j| e(2, j))
                    || [(1, c1), (1, c2), (2, c1), (2, c2)]
                        .iter()
                        .any(|&(l, c)| e(l, c));
                self.ensure(!bad, sub, "obstructing simplex has a forbidden edge")?;
            }
            let s1: Vec<Simplex> = s
                .iter()
                .copied()
                .filter(|u| u.has(dims.pos(g.row(1), j1)))
                .collect();
            self.ensure(
                !s1.is_empty(),
                sub,
                "no obstructing simplex contains 1 x j1",
            )?;
            let g23 = self.precedence(MoveFilter::pair(g.row(2), g.row(3)));
            let tau = self.extremal(&s1, &g23, sub)?;
            let (labels, cols) = self.path(g, tau, 3, 4);
            let z = match (labels.as_slice(), cols.as_slice(), j2) {
                ([3, 4], &[a], None) if !jr.contains(&a) => {
                    self.circuit(g, &[3, 4], &[a, j1], sub)?
                }
                ([3, 4], &[a], Some(j2)) if !jr.contains(&a) => {
                    self.circuit(g, &[3, 4, 1], &[a, j1, j2], sub)?
                }
                ([3, 2, 4], &[a, b], None) => self.circuit(g, &[3, 2, 4], &[a, b, j1], sub)?,
                ([3, 2, 4], &[a, b], Some(j2)) => {
                    self.circuit(g, &[3, 2, 4, 1], &[a, b, j1, j2], sub)?
                }
                _ => {
                    return Err(self.gap_with(
                        sub,
                        "path from row 3 to row 4 has neither expected form",
                        self.snapshot_ctx(&[
                            ("tau", dims.fmt_simplex(tau)),
                            ("rows", format!("{labels:?}")),
                            ("cols", format!("{cols:?}")),
                        ]),
                    ))
                }
            };
            self.flip(&z, StepKind::PrepareInner, sub)?;
            self.ensure(
                self.t.contains_maximal(tau_i) && self.t.contains_maximal(tau0),
                sub,
                "anchor simplices flipped away",
            )?;
            self.ensure(goodness(&self.t, good_i), sub, "goodness of X lost")?;
            self.ensure(goodness(&self.t, &good0), sub, "goodness of Y lost")?;
            self.ensure(self.t_one() <= d0, sub, "defect set grew")?;
            self.ensure(
                one_sided(&self.t, g, x, c1).len() <= s2,
                sub,
                "second subset grew",
            )?;
            self.ensure(self.star_count(x.minus()) <= sx, sub, "star of X grew")?;
            self.ensure(
                self.star_count(y.minus()) < sy,
                sub,
                "star of Y did not shrink",
            )?;
        }
    }

    // ---- Phase II ------------------------------------------------------

    fn phase_two(&mut self) -> Res<()> {
        self.phase = Phase::Two;
        let loc = "II";
        loop {
            self.ensure(self.t_one() == 0, loc, "first defect set is not empty")?;
            let dims = self.dims();
            let tii: Vec<Simplex> = self
                .t
                .maximal()
                .iter()
                .copied()
                .filter(|&s| in_t_two(dims, s))
                .collect();
            if tii.is_empty() {
                self.watch = Watch::default();
                return Ok(());
            }
            let before = tii.len();
            let g3 = self.precedence(MoveFilter::Toward(2));
            let tau = self.extremal(&tii, &g3, loc)?;
            let id = Frame::identity();
            let big: Vec<(usize, Vec<usize>)> = (0..dims.n())
                .map(|j| (j, id.neighbors(dims, tau, j)))
                .filter(|(_, nb)| nb.len() > 1)
                .collect();
            let c1 = big.iter().find(|(_, nb)| *nb == [1, 2, 4]).map(|p| p.0);
            let c2 = big.iter().find(|(_, nb)| *nb == [1, 3] || *nb == [2, 3]);
            let (c1, (c2, nb2)) = match (c1, c2) {
                (Some(c1), Some(c2)) if big.len() == 2 => (c1, c2.clone()),
                _ => {
                    return Err(self.gap_with(
                        loc,
                        "selected simplex has an unexpected shape",
                        self.snapshot_ctx(&[("shape", graph::shape(dims, tau).to_string())]),
                    ))
                }
            };
            let fr = if nb2 == [1, 3] { id } else { id.swap(1, 2) };
            let x = self.circuit(fr, &[1, 3], &[c1, c2], loc)?;
            let min = self.minimal_through(x.minus(), fr.row(3), loc)?;
            self.ensure(
                min == tau,
                loc,
                "selected simplex is not minimal through X-",
            )?;
            // the first case with rows 3 and 4 exchanged
            self.reduce_two_point(fr.swap(3, 4), &x, c1, c2, Anchor::Two { tau }, "II/reduce")?;
            let after = self.t_two();
            if after >= before {
                return Err(self.gap_with(
                    loc,
                    "defect set did not shrink",
                    self.snapshot_ctx(&[
                        ("before", before.to_string()),
                        ("after", after.to_string()),
                    ]),
                ));
            }
        }
    }

    // ---- Phase III -----------------------------------------------------

    fn order(&self, i1: usize, i2: usize, loc: &str) -> Res<Vec<usize>> {
        let q = orders::restriction_order(&self.t, i1, i2).map_err(|e| self.order_gap(loc, e))?;
        q.as_sequence()
            .ok_or_else(|| self.gap(loc, "restriction order is not total"))
    }

    fn swap_lower(&mut self, a: usize, b: usize) -> Res<()> {
        let loc = "III/a";
        let upper = self.order(0, 1, loc)?;
        let x = self.circuit(Frame::identity(), &[4, 3], &[a, b], loc)?;
        let cert = self.flip(&x, StepKind::SwapLower, loc)?;
        self.ensure(
            flip::order_effect(&cert, 2, 3) == OrderDelta::Swap(a.min(b), a.max(b))
                && flip::order_effect(&cert, 0, 1) == OrderDelta::Same,
            loc,
            "predicted order change is wrong",
        )?;
        self.ensure(
            self.order(0, 1, loc)? == upper,
            loc,
            "order on rows 1, 2 changed",
        )?;
        self.ensure(self.t_two() == 0, loc, "second defect set is not empty")?;
        Ok(())
    }

    /// Bubble-sorts the order on rows 3, 4 into `target` by adjacent swaps.
    fn sync_lower(&mut self, target: &[usize]) -> Res<()> {
        let loc = "III/a";
        let mut rank = vec![0; target.len()];
        for (k, &j) in target.iter().enumerate() {
            rank[j] = k;
        }
        loop {
            let lower = self.order(2, 3, loc)?;
            let Some(k) =
                (0..lower.len().saturating_sub(1)).find(|&k| rank[lower[k]] > rank[lower[k + 1]])
            else {
                return Ok(());
            };
            let (a, b) = (lower[k], lower[k + 1]);
            self.swap_lower(a, b)?;
            let mut expect = lower.clone();
            expect.swap(k, k + 1);
            self.ensure(
                self.order(2, 3, loc)? == expect,
                loc,
                "order on rows 3, 4 is not the expected swap",
            )?;
        }
    }

    /// Swaps consecutive `j < j'` in the order on rows 1, 2, which must agree
    /// with the order on rows 3, 4.
    fn swap_upper(&mut self, j: usize, jp: usize) -> Res<()> {
        let loc = "III/b";
        let upper = self.order(0, 1, loc)?;
        let lower = self.order(2, 3, loc)?;
        let id = Frame::identity();
        let macro_rows: [[usize; 2]; 5] = [[3, 1], [2, 4], [2, 1], [2, 3], [4, 1]];
        for (k, rows) in macro_rows.iter().enumerate() {
            let x = self.circuit(id, rows, &[j, jp], loc)?;
            self.flip(&x, StepKind::Macro(k as u8 + 1), loc)?;
        }
        let mut expect = upper.clone();
        let p = expect.iter().position(|&c| c == j).unwrap();
        expect.swap(p, p + 1);
        self.ensure(
            self.order(0, 1, loc)? == expect,
            loc,
            "order on rows 1, 2 is not the expected swap",
        )?;
        self.ensure(
            self.order(2, 3, loc)? == lower,
            loc,
            "order on rows 3, 4 changed",
        )?;
        self.ensure(self.t_two() == 0, loc, "second defect set is not empty")?;
        Ok(())
    }

    fn phase_three(&mut self) -> Res<()> {
        self.phase = Phase::Three;
        self.watch = Watch::default();
        let loc = "III";
        self.ensure(self.t_two() == 0, loc, "second defect set is not empty")?;
        let upper = self.order(0, 1, loc)?;
        self.sync_lower(&upper)?;
        loop {
            let upper = self.order(0, 1, loc)?;
            let Some(k) = (0..upper.len().saturating_sub(1)).find(|&k| upper[k] > upper[k + 1])
            else {
                break;
            };
            self.swap_upper(upper[k], upper[k + 1])?;
            let upper = self.order(0, 1, loc)?;
            self.sync_lower(&upper)?;
        }
        let id: Vec<usize> = (0..self.dims().n()).collect();
        self.ensure(
            self.order(0, 1, loc)? == id && self.order(2, 3, loc)? == id,
            loc,
            "orders are not sorted",
        )?;
        self.ensure(
            self.t == staircase(self.dims().n()),
            loc,
            "result differs from the staircase",
        )?;
        Ok(())
    }

    fn finish(self, start: &Triangulation) -> (FlipSequence, Triangulation) {
        let seq = FlipSequence {
            dims: start.dims(),
            start: start.digest(),
            end: self.t.digest(),
            steps: self.steps,
        };
        (seq, self.t)
    }
}

fn check_input(t: &Triangulation) -> Res<()> {
    four(t.dims())?;
    let report = t.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(PhaseError::InvalidInput(report))
    }
}

/// Flips until no maximal simplex has a column meeting rows 1, 2 but not 4.
pub fn phase_one(t: &Triangulation) -> Res<(FlipSequence, Triangulation)> {
    check_input(t)?;
    let mut d = Driver::new(t);
    d.phase_one()?;
    Ok(d.finish(t))
}

/// Flips until no maximal simplex has a column meeting rows 1, 2 but not
/// both of 3, 4. Needs the first defect set to be empty.
pub fn phase_two(t: &Triangulation) -> Res<(FlipSequence, Triangulation)> {
    check_input(t)?;
    if !compute_ti(t)?.is_empty() {
        return Err(PhaseError::Precondition(
            "the first defect set must be empty".into(),
        ));
    }
    let mut d = Driver::new(t);
    d.phase_two()?;
    Ok(d.finish(t))
}

/// Sorts both restriction orders, ending at the staircase. Needs the second
/// defect set to be empty.
pub fn phase_three(t: &Triangulation) -> Res<(FlipSequence, Triangulation)> {
    check_input(t)?;
    if !compute_tii(t)?.is_empty() {
        return Err(PhaseError::Precondition(
            "the second defect set must be empty".into(),
        ));
    }
    let mut d = Driver::new(t);
    d.phase_three()?;
    Ok(d.finish(t))
}

/// A flip sequence from `t` to `staircase(n)`.
pub fn connect(t: &Triangulation) -> Res<FlipSequence> {
    check_input(t)?;
    let mut d = Driver::new(t);
    d.phase_one()?;
    d.phase_two()?;
    d.phase_three()?;
    Ok(d.finish(t).0)
}

/// A flip sequence from `a` to `b` through the staircase.
pub fn connect_pair(a: &Triangulation, b: &Triangulation) -> Res<FlipSequence> {
    let sa = connect(a)?;
    let sb = connect(b)?;
    Ok(sa
        .concat(&sb.inverse())
        .expect("both sequences end at the staircase"))
}
