//! Detection, certification and application of flips.

use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{self, Circuit};
use crate::graph::{Dims, Simplex};
use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("certificate does not match the triangulation (removed simplices missing)")]
    StaleCertificate,
    #[error("simplex is not a maximal simplex of the triangulation")]
    NotMaximal,
}

/// Evidence that `T` has a flip supported on `circuit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipCertificate {
    pub circuit: Circuit,
    /// Maximal simplices of the common link.
    pub link: Vec<Simplex>,
    pub removed: Vec<Simplex>,
    pub added: Vec<Simplex>,
}

/// A maximal simplex through `X-` meeting `X` in at most `|X| - 2` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub witness: Simplex,
    pub deficiency: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlipSupport {
    Flip(FlipCertificate),
    Obstructed(Obstruction),
    NotApplicable,
}

impl FlipSupport {
    pub fn certificate(self) -> Option<FlipCertificate> {
        match self {
            FlipSupport::Flip(c) => Some(c),
            _ => None,
        }
    }
}

/// Effect of a flip on a restriction order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderDelta {
    Same,
    Swap(usize, usize),
}

/// Maximal simplices of the two triangulations of a circuit:
/// `{X \ {x} : x ∈ X+}` and `{X \ {x} : x ∈ X-}`.
pub fn circuit_triangulations(x: &Circuit) -> (Vec<Simplex>, Vec<Simplex>) {
    let support = x.support();
    let plus_side = x.plus().positions().map(|p| support.without(p)).collect();
    let minus_side = x.minus().positions().map(|p| support.without(p)).collect();
    (plus_side, minus_side)
}

pub fn supports_flip(t: &Triangulation, x: &Circuit) -> FlipSupport {
    let (plus_side, minus_side) = circuit_triangulations(x);
    let support = x.support();
    let mut link: Option<Vec<Simplex>> = None;
    let mut all_present = true;
    let mut same_link = true;
    for &s in &plus_side {
        let mut l: Vec<Simplex> = t.star_maximal(s).into_iter().map(|u| u.minus(s)).collect();
        if l.is_empty() {
            all_present = false;
            break;
        }
        l.sort_unstable();
        match &link {
            None => link = Some(l),
            Some(prev) => {
                if *prev != l {
                    same_link = false;
                }
            }
        }
    }
    if all_present && same_link {
        let link = link.expect("circuit has at least two plus elements");
        let mut removed = Vec::with_capacity(link.len() * plus_side.len());
        let mut added = Vec::with_capacity(link.len() * minus_side.len());
        for &rho in &link {
            for &s in &plus_side {
                removed.push(rho.union(s));
            }
            for &s in &minus_side {
                added.push(rho.union(s));
            }
        }
        removed.sort_unstable();
        added.sort_unstable();
        return FlipSupport::Flip(FlipCertificate {
            circuit: x.clone(),
            link,
            removed,
            added,
        });
    }
    if !t.contains(x.minus()) {
        return FlipSupport::NotApplicable;
    }
    // X- is present but there is no flip: find a deficient simplex, preferring
    // one that meets X in X minus one plus element of a present facet.
    let k2 = support.len();
    let star = t.star_maximal(x.minus());
    let deficient: Vec<Simplex> = star
        .into_iter()
        .filter(|u| u.inter(support).len() + 2 <= k2)
        .collect();
    let present: Vec<Simplex> = plus_side
        .iter()
        .copied()
        .filter(|&s| t.contains(s))
        .collect();
    let preferred = deficient.iter().copied().find(|u| {
        let meet = u.inter(support);
        meet.len() + 2 == k2 && present.iter().any(|s| meet.is_subset(*s))
    });
    match preferred.or_else(|| deficient.first().copied()) {
        Some(w) => FlipSupport::Obstructed(Obstruction {
            witness: w,
            deficiency: k2 - w.inter(support).len(),
        }),
        None => panic!(
            "no flip and no deficient simplex for circuit {x}: input is not a valid triangulation"
        ),
    }
}

pub fn apply_flip(t: &Triangulation, cert: &FlipCertificate) -> Result<Triangulation, FlipError> {
    if !cert.removed.iter().all(|&s| t.contains_maximal(s)) {
        return Err(FlipError::StaleCertificate);
    }
    let mut trees: Vec<Simplex> = t
        .maximal()
        .iter()
        .copied()
        .filter(|s| cert.removed.binary_search(s).is_err())
        .collect();
    trees.extend_from_slice(&cert.added);
    Ok(Triangulation::from_trees_unchecked(t.dims(), trees))
}

/// All flips of `t`, one per cycle, sorted by normalized circuit.
pub fn enumerate_flips(t: &Triangulation) -> Vec<FlipCertificate> {
    let dims = t.dims();
    let cycles = circuit::all_cycles(dims);
    let mut out: Vec<(Circuit, FlipCertificate)> = cycles
        .par_iter()
        .filter_map(|&s| {
            let c = circuit::circuit_of_support(dims, s).expect("enumerated cycle");
            for x in [c.clone(), c.reversed()] {
                if !t.contains(x.minus()) {
                    continue;
                }
                if let FlipSupport::Flip(cert) = supports_flip(t, &x) {
                    return Some((c, cert));
                }
            }
            None
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.minus()
            .cmp(&b.0.minus())
            .then(a.0.plus().cmp(&b.0.plus()))
    });
    out.into_iter().map(|p| p.1).collect()
}

/// The bijection from the maximal simplices of `t` to those of the flipped
/// triangulation.
pub fn psi(t: &Triangulation, cert: &FlipCertificate, tau: Simplex) -> Result<Simplex, FlipError> {
    if !t.contains_maximal(tau) {
        return Err(FlipError::NotMaximal);
    }
    let x = &cert.circuit;
    if !x.minus().is_subset(tau) {
        return Ok(tau);
    }
    let dims = x.dims();
    let k = x.len();
    let rows = x.rows();
    let cols = x.cols();
    for r in 0..k {
        // sigma_{r+1} omits the plus edge (i_{r+1}, j_r)
        let sigma = x.plus_facet((r + 1) % k);
        if sigma.is_subset(tau) {
            let out = tau
                .without(dims.pos(rows[r], cols[r]))
                .with(dims.pos(rows[(r + 1) % k], cols[r]));
            return Ok(out);
        }
    }
    Ok(tau)
}

/// Predicted change of the order on rows `(i, i2)` caused by the flip.
pub fn order_effect(cert: &FlipCertificate, i: usize, i2: usize) -> OrderDelta {
    let x = &cert.circuit;
    if x.len() != 2 {
        return OrderDelta::Same;
    }
    let rows = x.rows();
    if (rows[0] == i && rows[1] == i2) || (rows[0] == i2 && rows[1] == i) {
        let (a, b) = (x.cols()[0], x.cols()[1]);
        OrderDelta::Swap(a.min(b), a.max(b))
    } else {
        OrderDelta::Same
    }
}

/// Candidate circuits for the maximal simplices of a dims, both orientations.
pub fn oriented_circuits(dims: Dims) -> Vec<Circuit> {
    circuit::all_cycles(dims)
        .iter()
        .flat_map(|&s| {
            let c = circuit::circuit_of_support(dims, s).expect("enumerated cycle");
            let r = c.reversed();
            [c, r]
        })
        .collect()
}
