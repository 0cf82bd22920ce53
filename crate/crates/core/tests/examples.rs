use prodtri::flip::{self, FlipSupport};
use prodtri::graph::{binomial, Dims, Simplex};
use prodtri::phases::{self, StepKind};
use prodtri::triangulation::{validate_collection, Violation};
use prodtri::{io, oracle, orders, Circuit, Triangulation};

fn tri(m: usize, n: usize, trees: &[&[(usize, usize)]]) -> Triangulation {
    let dims = Dims::new(m, n).unwrap();
    let trees = trees
        .iter()
        .map(|t| dims.simplex(t.iter().map(|&(i, j)| (i - 1, j - 1))))
        .collect();
    Triangulation::new(dims, trees).unwrap()
}

/// Δ^1 x Δ^2 with every tree a lattice path; row 1 holds all columns in the first.
fn segment_path() -> Triangulation {
    tri(
        2,
        3,
        &[
            &[(1, 1), (1, 2), (1, 3), (2, 3)],
            &[(1, 1), (1, 2), (2, 2), (2, 3)],
            &[(1, 1), (2, 1), (2, 2), (2, 3)],
        ],
    )
}

#[test]
fn corpus_sizes() {
    for ((m, n), count) in [
        ((2, 2), 2),
        ((2, 3), 6),
        ((2, 4), 24),
        ((3, 2), 6),
        ((3, 3), 108),
        ((4, 2), 24),
        ((4, 3), 4488),
    ] {
        let c = oracle::enumerate_triangulations(Dims::new(m, n).unwrap()).unwrap();
        assert_eq!(c.len(), count, "({m},{n})");
    }
}

#[test]
fn transposed_corpus_has_the_same_size() {
    let c = oracle::enumerate_triangulations(Dims::new(3, 4).unwrap()).unwrap();
    assert_eq!(c.len(), 4488);
}

#[test]
fn flip_graph_edge_counts() {
    // two-row products: the flip graph is the permutohedron
    for (n, nodes, edges) in [(2, 2, 1), (3, 6, 6), (4, 24, 36)] {
        let g = oracle::build_flip_graph(
            &oracle::enumerate_triangulations(Dims::new(2, n).unwrap()).unwrap(),
        );
        assert_eq!((g.nodes, g.edges.len()), (nodes, edges), "n={n}");
        assert!(g.is_connected());
    }
}

#[test]
fn small_staircase() {
    let t = phases::staircase(2);
    assert_eq!(t.len(), 4);
    let expected = tri(
        4,
        2,
        &[
            &[(1, 1), (1, 2), (2, 1), (3, 1), (4, 1)],
            &[(1, 2), (2, 1), (3, 1), (3, 2), (4, 1)],
            &[(1, 2), (2, 1), (3, 2), (4, 1), (4, 2)],
            &[(1, 2), (2, 1), (2, 2), (3, 2), (4, 2)],
        ],
    );
    assert_eq!(t, expected);
    assert_eq!(flip::enumerate_flips(&t).len(), 3);
}

#[test]
fn staircase_sizes() {
    for n in 1..=8 {
        assert_eq!(phases::staircase(n).len() as u64, binomial(n as u64 + 2, 3));
    }
}

#[test]
fn segment_flip_swaps_two_columns() {
    let t = segment_path();
    let order = orders::restriction_order(&t, 0, 1).unwrap();
    assert_eq!(order.as_sequence(), Some(vec![2, 1, 0]));
    let dims = t.dims();
    let x = Circuit::from_sequence(dims, &[0, 1], &[0, 1]).unwrap();
    assert_eq!(x.to_string(), "e1f1,e2f2|e1f2,e2f1");
    let cert = flip::supports_flip(&t, &x).certificate().unwrap();
    let t2 = flip::apply_flip(&t, &cert).unwrap();
    let expected = tri(
        2,
        3,
        &[
            &[(1, 1), (1, 2), (1, 3), (2, 3)],
            &[(1, 1), (1, 2), (2, 1), (2, 3)],
            &[(1, 2), (2, 1), (2, 2), (2, 3)],
        ],
    );
    assert_eq!(t2, expected);
    assert_eq!(
        orders::restriction_order(&t2, 0, 1).unwrap().to_string(),
        "f3 < f1 < f2"
    );
}

#[test]
fn two_row_staircase_has_one_flip_per_adjacent_pair() {
    for n in 2..=5 {
        let dims = Dims::new(2, n).unwrap();
        let cols: Vec<usize> = (0..n).collect();
        let t = phases::staircase_with(dims, &[0, 1], &cols);
        assert_eq!(t.len(), n);
        assert_eq!(flip::enumerate_flips(&t).len(), n - 1, "n={n}");
    }
}

#[test]
fn non_adjacent_columns_are_obstructed() {
    let t = phases::staircase(3);
    let dims = t.dims();
    assert_eq!(
        orders::restriction_order(&t, 2, 3).unwrap().to_string(),
        "f1 < f2 < f3"
    );
    let mut obstructed = 0;
    for rows in [[2, 3], [3, 2]] {
        let x = Circuit::from_sequence(dims, &rows, &[0, 2]).unwrap();
        match flip::supports_flip(&t, &x) {
            FlipSupport::Obstructed(o) => {
                assert!(t.contains_maximal(o.witness));
                assert!(o.deficiency >= 2);
                obstructed += 1;
            }
            FlipSupport::NotApplicable => {}
            FlipSupport::Flip(_) => panic!("{x} flips"),
        }
    }
    assert_eq!(obstructed, 1);
}

#[test]
fn one_macro_for_reversed_columns() {
    let dims = Dims::new(4, 2).unwrap();
    let t = phases::staircase_with(dims, &[0, 2, 3, 1], &[1, 0]);
    assert_eq!(
        orders::restriction_order(&t, 0, 1).unwrap().to_string(),
        "f2 < f1"
    );
    assert_eq!(
        orders::restriction_order(&t, 2, 3).unwrap().to_string(),
        "f2 < f1"
    );
    assert!(phases::compute_ti(&t).unwrap().is_empty());
    assert!(phases::compute_tii(&t).unwrap().is_empty());
    let (seq, end) = phases::phase_three(&t).unwrap();
    assert_eq!(end, phases::staircase(2));
    // the macro keeps the rows-3,4 order, which then needs one adjacent swap
    let kinds: Vec<StepKind> = seq.steps.iter().map(|s| s.kind).collect();
    assert_eq!(
        kinds,
        [
            StepKind::Macro(1),
            StepKind::Macro(2),
            StepKind::Macro(3),
            StepKind::Macro(4),
            StepKind::Macro(5),
            StepKind::SwapLower
        ]
    );
}

#[test]
fn missing_tree_is_a_cardinality_violation() {
    let t = phases::staircase(3);
    let trees = t.maximal()[1..].to_vec();
    let report = validate_collection(t.dims(), &trees);
    assert!(report.violations.contains(&Violation::Cardinality {
        expected: 10,
        found: 9
    }));
}

#[test]
fn cyclic_simplex_is_not_a_tree() {
    let t = phases::staircase(3);
    let dims = t.dims();
    let mut trees = t.maximal().to_vec();
    let cyclic: Simplex = dims.simplex([(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (3, 2)]);
    trees[0] = cyclic;
    let report = validate_collection(dims, &trees);
    assert!(report.violations.contains(&Violation::NotSpanningTree {
        index: 0,
        cyclic: true
    }));
    assert!(!oracle::geometric_validate(dims, &trees).unwrap());
}

#[test]
fn staircase_connects_in_zero_flips() {
    for n in 1..=6 {
        assert!(phases::connect(&phases::staircase(n)).unwrap().is_empty());
    }
}

#[test]
fn parse_error_reports_position() {
    match io::triangulation_from_json("{\"m\": 2,\n \"n\": }") {
        Err(io::IoError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}
