//! Support-drift analysis: deciding when an orbit has left a finite region
//! for good.
//!
//! Under the tail rules a basis vector travels around its lane cycle, moving
//! by the cycle's total offset on every lap. Once it sits in the tail region
//! of every lane it will visit, past a given set of positions in the drift
//! direction, it can never again meet that set, and every further step is a
//! phased basis move.

use crate::isometry::StructuredIsometry;
use crate::vector::{BasisIndex, HVector, LaneDomain};
use crate::window::LaneBounds;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Repeated application of `V`.
    Forward,
    /// Repeated application of `V*`.
    Backward,
}

fn beyond(bounds: &LaneBounds, idx: BasisIndex, upward: bool) -> bool {
    match bounds.get(idx.lane) {
        None => true,
        Some((lo, hi)) => {
            if upward {
                idx.position > hi
            } else {
                idx.position < lo
            }
        }
    }
}

fn in_tail(domain: LaneDomain, threshold: i64, position: i64, upward: bool) -> bool {
    match domain {
        LaneDomain::Finite(_) => false,
        LaneDomain::Naturals => upward && position >= threshold,
        LaneDomain::Integers => {
            if upward {
                position >= threshold
            } else {
                position <= -threshold
            }
        }
    }
}

/// Whether the orbit of `idx` (forward or backward) stays in tail regions
/// forever and never again meets a position inside `bounds`.
pub fn escapes(op: &StructuredIsometry, idx: BasisIndex, dir: Direction, bounds: &LaneBounds) -> bool {
    let Some(cycle) = op.lane_cycle(idx.lane) else { return false };
    if cycle.drift == 0 {
        return false;
    }
    let n = cycle.steps.len();
    match dir {
        Direction::Forward => {
            let upward = cycle.drift > 0;
            let mut pos = idx.position;
            for step in &cycle.steps {
                let here = BasisIndex { lane: step.lane, position: pos };
                if !in_tail(step.domain, step.threshold, pos, upward) || !beyond(bounds, here, upward) {
                    return false;
                }
                pos += step.offset;
            }
            true
        }
        Direction::Backward => {
            let upward = cycle.drift < 0;
            let mut pos = idx.position;
            let mut lane = idx.lane;
            for k in 0..n {
                if !beyond(bounds, BasisIndex { lane, position: pos }, upward) {
                    return false;
                }
                let prev = cycle.steps[(n - 1 - k) % n];
                let source_pos = pos - prev.offset;
                if !in_tail(prev.domain, prev.threshold, source_pos, upward) {
                    return false;
                }
                pos = source_pos;
                lane = prev.lane;
            }
            true
        }
    }
}

/// Drop the entries of `x` whose orbit escapes `bounds`.
pub fn strip_escaped(op: &StructuredIsometry, x: &HVector, dir: Direction, bounds: &LaneBounds) -> HVector {
    x.filter(|idx| !escapes(op, *idx, dir, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::TailRule;
    use crate::vector::LaneSpec;
    use std::collections::BTreeMap;

    fn shift() -> StructuredIsometry {
        StructuredIsometry::new(
            vec![LaneSpec::new(0, LaneDomain::Naturals)],
            BTreeMap::new(),
            vec![TailRule::new(0, 0, 0, 1)],
        )
        .unwrap()
    }

    fn bilateral() -> StructuredIsometry {
        StructuredIsometry::new(
            vec![LaneSpec::new(0, LaneDomain::Integers)],
            BTreeMap::new(),
            vec![TailRule::new(0, 0, 0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn shift_escapes_forward_only() {
        let s = shift();
        let bounds = LaneBounds::of(&[BasisIndex::new(0, 0), BasisIndex::new(0, 3)]);
        assert!(escapes(&s, BasisIndex::new(0, 4), Direction::Forward, &bounds));
        assert!(!escapes(&s, BasisIndex::new(0, 3), Direction::Forward, &bounds));
        assert!(!escapes(&s, BasisIndex::new(0, 10), Direction::Backward, &bounds));
    }

    #[test]
    fn bilateral_escapes_both_ways() {
        let b = bilateral();
        let bounds = LaneBounds::of(&[BasisIndex::new(0, -2), BasisIndex::new(0, 2)]);
        assert!(escapes(&b, BasisIndex::new(0, 3), Direction::Forward, &bounds));
        assert!(escapes(&b, BasisIndex::new(0, -3), Direction::Backward, &bounds));
        assert!(!escapes(&b, BasisIndex::new(0, -3), Direction::Forward, &bounds));
    }

    #[test]
    fn two_lane_cycle_checks_every_lane() {
        // lane 0 -> lane 1 offset 0, lane 1 -> lane 0 offset 1
        let lanes = vec![LaneSpec::new(0, LaneDomain::Naturals), LaneSpec::new(1, LaneDomain::Naturals)];
        let mut cols = BTreeMap::new();
        cols.insert(BasisIndex::new(0, 0), HVector::basis(BasisIndex::new(1, 0)));
        let op =
            StructuredIsometry::new(lanes, cols, vec![TailRule::new(0, 1, 1, 0), TailRule::new(1, 0, 0, 1)]).unwrap();
        let bounds = LaneBounds::of(&[BasisIndex::new(1, 5)]);
        assert!(!escapes(&op, BasisIndex::new(0, 5), Direction::Forward, &bounds));
        assert!(escapes(&op, BasisIndex::new(0, 6), Direction::Forward, &bounds));
    }
}
