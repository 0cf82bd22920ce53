//! Fine mixed subdivisions of `n Δ^{m-1}` via the Cayley trick.
//!
//! A maximal simplex `σ` gives the cell `Σ_j conv(N_σ(f_j))`. Coordinates
//! live in `Z^m` with coordinate sum `n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Dims, Simplex};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedCell {
    /// `N_σ(f_j)` for each column, 1-based rows.
    pub summands: Vec<Vec<usize>>,
    /// Summands with more than one row.
    pub shape: Vec<Vec<usize>>,
    /// Set for an unmixed cell: the column whose summand is every row.
    pub unmixed_label: Option<usize>,
    pub vertices: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSubdivision {
    pub m: usize,
    pub n: usize,
    pub cells: Vec<MixedCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MixedError {
    #[error("drawing needs m <= 3, got m = {0}")]
    TooManyRows(usize),
}

pub fn mixed_cell(dims: Dims, s: Simplex) -> MixedCell {
    let (m, n) = (dims.m(), dims.n());
    let summands: Vec<Vec<usize>> = (0..n).map(|j| graph::col_neighbors(dims, s, j)).collect();
    let mut vertices: Vec<Vec<u32>> = vec![vec![0; m]];
    for rows in &summands {
        let mut next = Vec::with_capacity(vertices.len() * rows.len());
        for v in &vertices {
            for &i in rows {
                let mut w = v.clone();
                w[i] += 1;
                next.push(w);
            }
        }
        vertices = next;
    }
    vertices.sort_unstable();
    vertices.dedup();
    let one_based = |b: &Vec<usize>| b.iter().map(|i| i + 1).collect::<Vec<_>>();
    let shape = graph::shape(dims, s).blocks.iter().map(one_based).collect();
    let unmixed_label = (0..n)
        .find(|&j| m > 1 && summands[j].len() == m)
        .map(|j| j + 1);
    MixedCell {
        summands: summands.iter().map(one_based).collect(),
        shape,
        unmixed_label,
        vertices,
    }
}

pub fn export_mixed(t: &Triangulation) -> MixedSubdivision {
    let dims = t.dims();
    MixedSubdivision {
        m: dims.m(),
        n: dims.n(),
        cells: t.maximal().iter().map(|&s| mixed_cell(dims, s)).collect(),
    }
}

fn planar(m: usize, v: &[u32]) -> (f64, f64) {
    match m {
        1 => (0.0, 0.0),
        2 => (v[1] as f64, 0.0),
        _ => (
            v[1] as f64 + 0.5 * v[2] as f64,
            v[2] as f64 * 3f64.sqrt() / 2.0,
        ),
    }
}

/// Convex hull in counter-clockwise order (monotone chain).
fn hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-12
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-12
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// SVG drawing of the subdivision of `n Δ^{m-1}` for `m <= 3`. Unmixed
/// cells are shaded and labelled with their column.
pub fn render_svg(t: &Triangulation) -> Result<String, MixedError> {
    let dims = t.dims();
    let (m, n) = (dims.m(), dims.n());
    if m > 3 {
        return Err(MixedError::TooManyRows(m));
    }
    let doc = export_mixed(t);
    let scale = 60.0;
    let pad = 20.0;
    let width = n as f64 * scale + 2.0 * pad;
    let height = if m == 3 {
        n as f64 * scale * 3f64.sqrt() / 2.0 + 2.0 * pad
    } else {
        2.0 * pad + 20.0
    };
    let to_screen = |(x, y): (f64, f64)| {
        (
            pad + x * scale,
            height - pad - y * scale - if m == 3 { 0.0 } else { 10.0 },
        )
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    );
    for cell in &doc.cells {
        let pts: Vec<(f64, f64)> = cell
            .vertices
            .iter()
            .map(|v| to_screen(planar(m, v)))
            .collect();
        let fill = if cell.unmixed_label.is_some() {
            "#cfe0f3"
        } else {
            "#ffffff"
        };
        if m == 3 {
            let poly: Vec<String> = hull(pts.clone())
                .iter()
                .map(|(x, y)| format!("{x:.2},{y:.2}"))
                .collect();
            out += &format!(
                "  <polygon points=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"1\"/>\n",
                poly.join(" ")
            );
        } else {
            let (a, b) = pts.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| {
                (lo.min(p.0), hi.max(p.0))
            });
            let y = pts[0].1;
            out += &format!(
                "  <line x1=\"{a:.2}\" y1=\"{y:.2}\" x2=\"{b:.2}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"3\"/>\n  <circle cx=\"{a:.2}\" cy=\"{y:.2}\" r=\"3\"/>\n  <circle cx=\"{b:.2}\" cy=\"{y:.2}\" r=\"3\"/>\n"
            );
        }
        if let Some(j) = cell.unmixed_label {
            let k = pts.len() as f64;
            let (cx, cy) = pts
                .iter()
                .fold((0.0, 0.0), |(x, y), p| (x + p.0 / k, y + p.1 / k));
            let dy = if m == 3 { 4.0 } else { -8.0 };
            out += &format!(
                "  <text x=\"{cx:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">f{j}</text>\n",
                cy + dy
            );
        }
    }
    out += "</svg>\n";
    Ok(out)
}
