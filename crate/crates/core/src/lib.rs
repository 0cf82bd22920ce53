//! Triangulations of a product of two simplices `Δ^{m-1} x Δ^{n-1}`, encoded
//! as sets of spanning trees of the complete bipartite graph `K_{m,n}`.
//!
//! The crate provides a flip engine, the column and precedence orders used to
//! steer flips, a constructive flip path from any triangulation of
//! `Δ^3 x Δ^{n-1}` to the staircase triangulation, and a brute-force oracle
//! for small dimensions.

pub mod circuit;
pub mod flip;
pub mod graph;
pub mod io;
pub mod mixed;
pub mod oracle;
pub mod orders;
pub mod phases;
pub mod triangulation;

pub use circuit::{circuit_of_cycle, Circuit};
pub use flip::{
    apply_flip, enumerate_flips, order_effect, psi, supports_flip, FlipCertificate, FlipError,
    FlipSupport, Obstruction, OrderDelta,
};
pub use graph::{Dims, GraphError, Node, PVertex, Shape, Simplex};
pub use io::IoError;
pub use mixed::{export_mixed, render_svg, MixedCell, MixedSubdivision};
pub use oracle::{
    build_flip_graph, enumerate_triangulations, geometric_validate, Budget, Corpus, FlipGraph,
    OracleError,
};
pub use orders::{ColumnQuasiorder, MoveFilter, OrderError, PrecedenceDigraph};
pub use phases::{
    compute_ti, compute_tii, connect, connect_pair, phase_one, phase_three, phase_two, staircase,
    FlipSequence, FlipStep, Phase, PhaseError, PhaseMeasure, ProofGap, StepKind,
};
pub use triangulation::{
    LocalTriangulation, Triangulation, TriangulationError, ValidityReport, Violation,
};
