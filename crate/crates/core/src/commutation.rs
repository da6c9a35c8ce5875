//! Commutation and double commutation of structured isometries.

use std::collections::BTreeSet;

use crate::certificate::{Certificate, Witness};
use crate::error::{Error, Result};
use crate::isometry::StructuredIsometry;
use crate::tolerance::epsilon;
use crate::vector::{BasisIndex, HVector, LaneDomain};
use crate::window::window_indices;

fn require_same_lanes(v: &StructuredIsometry, w: &StructuredIsometry) -> Result<()> {
    if v.same_lanes(w) {
        Ok(())
    } else {
        Err(Error::MalformedInput(format!("{} and {} act on different lane sets", v.name(), w.name())))
    }
}

/// Rank of a position in canonical order `0, 1, -1, 2, -2, ...`.
fn rank(position: i64) -> u64 {
    if position > 0 {
        2 * position as u64 - 1
    } else {
        2 * position.unsigned_abs()
    }
}

/// Every index with `|position| <= reach` plus the window, in canonical
/// (round-robin) order.
fn core_indices(v: &StructuredIsometry, reach: i64, window: usize) -> Vec<BasisIndex> {
    let mut set: BTreeSet<(u64, BasisIndex)> = BTreeSet::new();
    for lane in v.lanes() {
        let mut r = 0u64;
        while let Some(p) = lane.domain.position_of_rank(r) {
            if p.abs() > reach {
                break;
            }
            set.insert((r, BasisIndex { lane: lane.id, position: p }));
            r += 1;
        }
    }
    for idx in window_indices(v.lanes(), window) {
        set.insert((rank(idx.position), idx));
    }
    set.into_iter().map(|(_, idx)| idx).collect()
}

/// Beyond this position every tail, every preimage and every image involved
/// in `V`, `W` and their adjoints is a phased basis move.
fn far_reach(v: &StructuredIsometry, w: &StructuredIsometry) -> i64 {
    let thresholds = v.tail_rules().chain(w.tail_rules()).map(|r| r.threshold);
    let offsets = v.tail_rules().chain(w.tail_rules()).map(|r| r.offset.abs());
    thresholds.max().unwrap_or(0) + 2 * offsets.max().unwrap_or(0) + 1
}

/// `VW = WV`, decided by comparing the composed structured forms exactly.
/// When a composition cannot be put in structured form the check falls back
/// to the first `window` basis vectors and is not exact.
pub fn commutes(v: &StructuredIsometry, w: &StructuredIsometry, window: usize) -> Result<Certificate> {
    require_same_lanes(v, w)?;
    match (v.compose(w), w.compose(v)) {
        (Ok(vw), Ok(wv)) => Ok(match vw.first_difference(&wv) {
            None => Certificate::holds(window, true),
            Some(index) => Certificate::fails(Witness::Index { index }, window, true),
        }),
        _ => {
            let eps = epsilon();
            for index in window_indices(v.lanes(), window) {
                let e = HVector::basis(index);
                let lhs = v.apply_unchecked(&w.apply_unchecked(&e));
                let rhs = w.apply_unchecked(&v.apply_unchecked(&e));
                if lhs.distance(&rhs) > eps {
                    return Ok(Certificate::fails(Witness::Index { index }, window, true));
                }
            }
            Ok(Certificate::holds(window, false))
        }
    }
}

/// `V*W = WV*`. Past [`far_reach`] both sides are phased basis moves that
/// translate uniformly, so checking every position up to the reach (and
/// one representative beyond it on each side) decides the identity on the
/// whole space. The witness is the first failing basis vector.
pub fn doubly_commutes(v: &StructuredIsometry, w: &StructuredIsometry, window: usize) -> Result<Certificate> {
    let c = commutes(v, w, window)?;
    if !c.is_true() {
        return Ok(c);
    }
    let eps = epsilon();
    let reach = far_reach(v, w);
    for index in core_indices(v, reach, window) {
        let e = HVector::basis(index);
        let lhs = v.apply_adjoint_unchecked(&w.apply_unchecked(&e));
        let rhs = w.apply_unchecked(&v.apply_adjoint_unchecked(&e));
        if lhs.distance(&rhs) > eps {
            return Ok(Certificate::fails(Witness::Index { index }, window, true));
        }
    }
    Ok(Certificate::holds(window, c.exact))
}

/// Whether every lane is finite, so that a window covering the space makes
/// window checks exhaustive.
pub fn is_finite_dimensional(v: &StructuredIsometry) -> bool {
    v.lanes().iter().all(|l| matches!(l.domain, LaneDomain::Finite(_)))
}
