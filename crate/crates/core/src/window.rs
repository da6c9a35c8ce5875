//! Finite windows of basis indices.

use std::collections::BTreeMap;

use crate::vector::{BasisIndex, LaneId, LaneSpec};

/// The first `dim` basis indices of a space in canonical order: lanes are
/// visited round-robin, each lane contributing its positions by rank.
pub fn window_indices(lanes: &[LaneSpec], dim: usize) -> Vec<BasisIndex> {
    let mut out = Vec::with_capacity(dim);
    let mut rank = 0u64;
    while out.len() < dim {
        let mut progressed = false;
        for lane in lanes {
            if out.len() == dim {
                break;
            }
            if let Some(position) = lane.domain.position_of_rank(rank) {
                out.push(BasisIndex { lane: lane.id, position });
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
        rank += 1;
    }
    out
}

/// Per-lane `(min, max)` position of a finite index set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaneBounds(BTreeMap<LaneId, (i64, i64)>);

impl LaneBounds {
    pub fn of<'a>(indices: impl IntoIterator<Item = &'a BasisIndex>) -> Self {
        let mut map: BTreeMap<LaneId, (i64, i64)> = BTreeMap::new();
        for idx in indices {
            map.entry(idx.lane)
                .and_modify(|(lo, hi)| {
                    *lo = (*lo).min(idx.position);
                    *hi = (*hi).max(idx.position);
                })
                .or_insert((idx.position, idx.position));
        }
        LaneBounds(map)
    }

    pub fn get(&self, lane: LaneId) -> Option<(i64, i64)> {
        self.0.get(&lane).copied()
    }

    pub fn extend(&mut self, other: &LaneBounds) {
        for (lane, (lo, hi)) in &other.0 {
            self.0
                .entry(*lane)
                .and_modify(|(a, b)| {
                    *a = (*a).min(*lo);
                    *b = (*b).max(*hi);
                })
                .or_insert((*lo, *hi));
        }
    }
}
