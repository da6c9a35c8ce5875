//! Isometries given by a finite explicit core plus single-vector tail rules.
//!
//! Every basis index of the space has exactly one image: either an explicit
//! column (a finitely supported unit vector) or a tail rule that sends it to
//! a single phased basis vector. Construction validates the isometry
//! conditions, so every value of [`StructuredIsometry`] satisfies `V*V = I`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::epsilon;
use crate::vector::{validate_lanes, BasisIndex, HVector, LaneDomain, LaneId, LaneSpec};

/// Unimodular scalar stored as an angle in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Phase(f64);

impl Phase {
    pub const ONE: Phase = Phase(0.0);

    /// Angle in turns, normalized into `[0, 1)`.
    pub fn from_turns(turns: f64) -> Self {
        let t = turns.rem_euclid(1.0);
        Phase(if t >= 1.0 { 0.0 } else { t })
    }

    pub fn turns(self) -> f64 {
        self.0
    }

    /// Complex value; quarter turns are returned exactly.
    pub fn value(self) -> Complex64 {
        match self.0 {
            0.0 => Complex64::new(1.0, 0.0),
            0.25 => Complex64::new(0.0, 1.0),
            0.5 => Complex64::new(-1.0, 0.0),
            0.75 => Complex64::new(0.0, -1.0),
            t => Complex64::from_polar(1.0, std::f64::consts::TAU * t),
        }
    }

    pub fn compose(self, other: Phase) -> Phase {
        Phase::from_turns(self.0 + other.0)
    }

    pub fn inverse(self) -> Phase {
        Phase::from_turns(-self.0)
    }

    pub fn approx_eq(self, other: Phase) -> bool {
        (self.value() - other.value()).norm() <= epsilon()
    }
}

/// Sends `e(source, p)` to `phase * e(target, p + offset)` for every `p` in
/// the tail region of the source lane: `p >= threshold` on a naturals lane,
/// `|p| >= threshold` on an integer lane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRule {
    pub source: LaneId,
    pub threshold: i64,
    pub target: LaneId,
    pub offset: i64,
    pub phase: Phase,
}

impl TailRule {
    pub fn new(source: u32, threshold: i64, target: u32, offset: i64) -> Self {
        TailRule { source: LaneId(source), threshold, target: LaneId(target), offset, phase: Phase::ONE }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Whether `position` of a lane with `domain` lies in this rule's region.
    pub fn covers(&self, domain: LaneDomain, position: i64) -> bool {
        match domain {
            LaneDomain::Naturals => position >= self.threshold,
            LaneDomain::Integers => position.abs() >= self.threshold,
            LaneDomain::Finite(_) => false,
        }
    }

    pub fn image(&self, position: i64) -> BasisIndex {
        BasisIndex { lane: self.target, position: position + self.offset }
    }

    /// Image positions as inclusive intervals (`None` = unbounded).
    fn image_intervals(&self, source_domain: LaneDomain) -> Vec<(Option<i64>, Option<i64>)> {
        let t = self.threshold;
        let o = self.offset;
        match source_domain {
            LaneDomain::Naturals => vec![(Some(t + o), None)],
            LaneDomain::Integers if t == 0 => vec![(None, None)],
            LaneDomain::Integers => vec![(None, Some(-t + o)), (Some(t + o), None)],
            LaneDomain::Finite(_) => vec![],
        }
    }
}

fn intervals_meet(a: (Option<i64>, Option<i64>), b: (Option<i64>, Option<i64>)) -> bool {
    let lo = match (a.0, b.0) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    };
    let hi = match (a.1, b.1) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    };
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

/// One step of a lane cycle: the lane, its tail threshold and the offset
/// applied when leaving it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleStep {
    pub lane: LaneId,
    pub domain: LaneDomain,
    pub threshold: i64,
    pub offset: i64,
}

/// Orbit of lanes under the tail rules, starting at a given lane.
#[derive(Debug, Clone, PartialEq)]
pub struct LaneCycle {
    pub steps: Vec<CycleStep>,
    /// Sum of offsets around the cycle.
    pub drift: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredIsometry {
    lanes: Vec<LaneSpec>,
    columns: BTreeMap<BasisIndex, HVector>,
    tails: BTreeMap<LaneId, TailRule>,
    /// target lane -> source lane of the unique rule hitting it
    inverse_tails: BTreeMap<LaneId, LaneId>,
    /// basis index -> explicit columns with a nonzero entry there
    reverse: BTreeMap<BasisIndex, Vec<(BasisIndex, Complex64)>>,
    name: String,
}

impl StructuredIsometry {
    /// Validate and build. Fails with [`Error::NotIsometry`] when the columns
    /// are not orthonormal and [`Error::MalformedInput`] when totality or the
    /// lane domains are violated.
    pub fn new(lanes: Vec<LaneSpec>, columns: BTreeMap<BasisIndex, HVector>, tails: Vec<TailRule>) -> Result<Self> {
        validate_lanes(&lanes)?;
        let domain_of: BTreeMap<LaneId, LaneDomain> = lanes.iter().map(|l| (l.id, l.domain)).collect();
        let lookup =
            |id: LaneId| domain_of.get(&id).copied().ok_or_else(|| Error::MalformedInput(format!("unknown lane {id}")));

        let mut tail_map = BTreeMap::new();
        for rule in &tails {
            let src = lookup(rule.source)?;
            let dst = lookup(rule.target)?;
            if !src.is_infinite() || !dst.is_infinite() {
                return Err(Error::MalformedInput(format!(
                    "tail rule {} -> {} touches a finite lane",
                    rule.source, rule.target
                )));
            }
            if rule.threshold < 0 {
                return Err(Error::MalformedInput(format!("tail rule on lane {} has negative threshold", rule.source)));
            }
            match (src, dst) {
                (LaneDomain::Integers, LaneDomain::Naturals) => {
                    return Err(Error::MalformedInput(format!(
                        "tail rule {} -> {} maps an integer lane into a naturals lane",
                        rule.source, rule.target
                    )))
                }
                (LaneDomain::Naturals, LaneDomain::Naturals) if rule.threshold + rule.offset < 0 => {
                    return Err(Error::MalformedInput(format!(
                        "tail rule on lane {} maps position {} outside lane {}",
                        rule.source, rule.threshold, rule.target
                    )))
                }
                _ => {}
            }
            if tail_map.insert(rule.source, *rule).is_some() {
                return Err(Error::MalformedInput(format!("lane {} has more than one tail rule", rule.source)));
            }
        }
        for lane in &lanes {
            if lane.domain.is_infinite() && !tail_map.contains_key(&lane.id) {
                return Err(Error::MalformedInput(format!(
                    "infinite lane {} has no tail rule, its images are not total",
                    lane.id
                )));
            }
        }

        // tail images must be pairwise disjoint
        let rules: Vec<&TailRule> = tail_map.values().collect();
        let mut inverse_tails = BTreeMap::new();
        for (k, a) in rules.iter().enumerate() {
            for b in &rules[k + 1..] {
                if a.target != b.target {
                    continue;
                }
                let ia = a.image_intervals(domain_of[&a.source]);
                let ib = b.image_intervals(domain_of[&b.source]);
                if ia.iter().any(|x| ib.iter().any(|y| intervals_meet(*x, *y))) {
                    return Err(Error::NotIsometry(format!(
                        "tail rules from lanes {} and {} have overlapping images in lane {}",
                        a.source, b.source, a.target
                    )));
                }
            }
            inverse_tails.insert(a.target, a.source);
        }

        // explicit columns cover exactly the non-tail indices
        let mut expected = BTreeSet::new();
        for lane in &lanes {
            match lane.domain {
                LaneDomain::Finite(n) => {
                    expected.extend((0..i64::from(n)).map(|p| BasisIndex { lane: lane.id, position: p }))
                }
                LaneDomain::Naturals => {
                    let t = tail_map[&lane.id].threshold;
                    expected.extend((0..t).map(|p| BasisIndex { lane: lane.id, position: p }));
                }
                LaneDomain::Integers => {
                    let t = tail_map[&lane.id].threshold;
                    expected.extend((1 - t..t).map(|p| BasisIndex { lane: lane.id, position: p }));
                }
            }
        }
        for idx in columns.keys() {
            if !expected.contains(idx) {
                return Err(Error::MalformedInput(format!(
                    "explicit column {idx} is outside the lanes or inside a tail region"
                )));
            }
        }
        if let Some(missing) = expected.iter().find(|idx| !columns.contains_key(idx)) {
            return Err(Error::MalformedInput(format!("no image for index {missing}")));
        }

        let eps = epsilon();
        let mut reverse: BTreeMap<BasisIndex, Vec<(BasisIndex, Complex64)>> = BTreeMap::new();
        for (src, col) in &columns {
            let norm = col.norm();
            if (norm - 1.0).abs() > eps {
                return Err(Error::NotIsometry(format!("column {src} has norm {norm}")));
            }
            for (idx, c) in col.iter() {
                let dom = lookup(idx.lane)?;
                if !dom.contains(idx.position) {
                    return Err(Error::MalformedInput(format!(
                        "column {src} has an entry at {idx}, outside lane {}",
                        idx.lane
                    )));
                }
                if let Some(source_lane) = inverse_tails.get(&idx.lane) {
                    let rule = tail_map[source_lane];
                    if rule.covers(domain_of[source_lane], idx.position - rule.offset) {
                        return Err(Error::NotIsometry(format!(
                            "column {src} is not orthogonal to the tail image {idx}: |<c,e>| = {}",
                            c.norm()
                        )));
                    }
                }
                reverse.entry(*idx).or_default().push((*src, *c));
            }
        }
        let cols: Vec<(&BasisIndex, &HVector)> = columns.iter().collect();
        for (k, (ia, ca)) in cols.iter().enumerate() {
            for (ib, cb) in &cols[k + 1..] {
                let overlap = ca.inner(cb).norm();
                if overlap > eps {
                    return Err(Error::NotIsometry(format!(
                        "columns {ia} and {ib} not orthogonal: |<c_{ia},c_{ib}>| = {overlap:.6}"
                    )));
                }
            }
        }

        Ok(StructuredIsometry { lanes, columns, tails: tail_map, inverse_tails, reverse, name: String::from("V") })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lanes(&self) -> &[LaneSpec] {
        &self.lanes
    }

    pub fn columns(&self) -> &BTreeMap<BasisIndex, HVector> {
        &self.columns
    }

    pub fn tail_rules(&self) -> impl Iterator<Item = &TailRule> {
        self.tails.values()
    }

    pub fn tail_of(&self, lane: LaneId) -> Option<&TailRule> {
        self.tails.get(&lane)
    }

    pub fn lane_domain(&self, lane: LaneId) -> Option<LaneDomain> {
        self.lanes.iter().find(|l| l.id == lane).map(|l| l.domain)
    }

    pub fn contains(&self, idx: &BasisIndex) -> bool {
        self.lane_domain(idx.lane).is_some_and(|d| d.contains(idx.position))
    }

    pub fn same_lanes(&self, other: &StructuredIsometry) -> bool {
        self.lanes.len() == other.lanes.len()
            && self.lanes.iter().zip(&other.lanes).all(|(a, b)| a.id == b.id && a.domain == b.domain)
    }

    fn check_support(&self, x: &HVector) -> Result<()> {
        match x.support().find(|idx| !self.contains(idx)) {
            Some(idx) => Err(Error::MalformedInput(format!("index {idx} is outside the declared lanes"))),
            None => Ok(()),
        }
    }

    /// Image of a single basis vector. The index must belong to the space.
    pub fn column(&self, idx: &BasisIndex) -> HVector {
        if let Some(col) = self.columns.get(idx) {
            return col.clone();
        }
        match self.tails.get(&idx.lane) {
            Some(rule) => HVector::from_entries([(rule.image(idx.position), rule.phase.value())]),
            None => HVector::zero(),
        }
    }

    pub fn apply(&self, x: &HVector) -> Result<HVector> {
        self.check_support(x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &HVector) -> HVector {
        let mut out = Vec::new();
        for (idx, c) in x.iter() {
            if let Some(col) = self.columns.get(idx) {
                out.extend(col.iter().map(|(j, a)| (*j, a * c)));
            } else if let Some(rule) = self.tails.get(&idx.lane) {
                out.push((rule.image(idx.position), rule.phase.value() * c));
            }
        }
        HVector::from_entries(out)
    }

    /// The tail rule (and source position) whose image is `idx`, if any.
    pub fn tail_preimage(&self, idx: &BasisIndex) -> Option<(&TailRule, i64)> {
        let source = self.inverse_tails.get(&idx.lane)?;
        let rule = &self.tails[source];
        let p = idx.position - rule.offset;
        let dom = self.lane_domain(*source)?;
        rule.covers(dom, p).then_some((rule, p))
    }

    /// `V*x`, using `<V*x, e_k> = <x, V e_k>`.
    pub fn apply_adjoint(&self, x: &HVector) -> Result<HVector> {
        self.check_support(x)?;
        Ok(self.apply_adjoint_unchecked(x))
    }

    pub(crate) fn apply_adjoint_unchecked(&self, x: &HVector) -> HVector {
        let mut out = Vec::new();
        for (idx, c) in x.iter() {
            if let Some((rule, p)) = self.tail_preimage(idx) {
                out.push((BasisIndex { lane: rule.source, position: p }, c * rule.phase.value().conj()));
            }
            if let Some(hits) = self.reverse.get(idx) {
                out.extend(hits.iter().map(|(src, a)| (*src, c * a.conj())));
            }
        }
        HVector::from_entries(out)
    }

    /// `V^n x` for `n >= 0` and `V*^{|n|} x` for `n < 0`.
    pub fn power(&self, x: &HVector, n: i64) -> Result<HVector> {
        self.check_support(x)?;
        let mut v = x.clone();
        for _ in 0..n.unsigned_abs() {
            v = if n >= 0 { self.apply_unchecked(&v) } else { self.apply_adjoint_unchecked(&v) };
        }
        Ok(v)
    }

    /// Indices outside the range of every tail rule. Always finite: the
    /// rules act as a bijection on the infinite lanes.
    pub fn untouched_by_tails(&self) -> Vec<BasisIndex> {
        let mut out = Vec::new();
        for lane in &self.lanes {
            match lane.domain {
                LaneDomain::Finite(n) => {
                    out.extend((0..i64::from(n)).map(|p| BasisIndex { lane: lane.id, position: p }))
                }
                _ => {
                    let Some(src) = self.inverse_tails.get(&lane.id) else { continue };
                    let rule = self.tails[src];
                    let range = match (self.lane_domain(*src), lane.domain) {
                        (Some(LaneDomain::Naturals), LaneDomain::Naturals) => 0..rule.threshold + rule.offset,
                        (Some(LaneDomain::Integers), _) if rule.threshold > 0 => {
                            rule.offset - rule.threshold + 1..rule.offset + rule.threshold
                        }
                        _ => 0..0,
                    };
                    out.extend(range.map(|p| BasisIndex { lane: lane.id, position: p }));
                }
            }
        }
        out
    }

    /// Lane orbit under the tail rules starting at `lane`.
    pub fn lane_cycle(&self, lane: LaneId) -> Option<LaneCycle> {
        let mut steps = Vec::new();
        let mut current = lane;
        loop {
            let rule = self.tails.get(&current)?;
            steps.push(CycleStep {
                lane: current,
                domain: self.lane_domain(current)?,
                threshold: rule.threshold,
                offset: rule.offset,
            });
            current = rule.target;
            if current == lane {
                break;
            }
            if steps.len() > self.lanes.len() {
                return None;
            }
        }
        let drift = steps.iter().map(|s| s.offset).sum();
        Some(LaneCycle { steps, drift })
    }

    /// Largest `|position|` any tail threshold or offset touches; positions
    /// beyond it behave uniformly on every lane.
    pub fn tail_reach(&self) -> i64 {
        self.tails.values().map(|r| r.threshold + r.offset.abs()).max().unwrap_or(0)
    }

    /// `self * other` in structured form.
    pub fn compose(&self, other: &StructuredIsometry) -> Result<StructuredIsometry> {
        if !self.same_lanes(other) {
            return Err(Error::MalformedComposition("operators act on different lane sets".into()));
        }
        let mut columns = BTreeMap::new();
        for (idx, col) in &other.columns {
            columns.insert(*idx, self.apply_unchecked(col));
        }
        let mut tails = Vec::new();
        for rule in other.tails.values() {
            let outer = self
                .tails
                .get(&rule.target)
                .ok_or_else(|| Error::MalformedComposition(format!("lane {} has no outer tail rule", rule.target)))?;
            let source_domain = other.lane_domain(rule.source).unwrap_or(LaneDomain::Naturals);
            let threshold = match source_domain {
                LaneDomain::Integers => rule.threshold.max(outer.threshold + rule.offset.abs()),
                _ => rule.threshold.max(outer.threshold - rule.offset),
            };
            let fill: Vec<i64> = match source_domain {
                LaneDomain::Integers => (1 - threshold..threshold).filter(|p| p.abs() >= rule.threshold).collect(),
                _ => (rule.threshold..threshold).collect(),
            };
            for p in fill {
                let idx = BasisIndex { lane: rule.source, position: p };
                columns.insert(idx, self.apply_unchecked(&other.column(&idx)));
            }
            tails.push(TailRule {
                source: rule.source,
                threshold,
                target: outer.target,
                offset: rule.offset + outer.offset,
                phase: rule.phase.compose(outer.phase),
            });
        }
        StructuredIsometry::new(self.lanes.clone(), columns, tails)
            .map(|v| v.with_name(&format!("{}{}", self.name, other.name)))
            .map_err(|e| Error::MalformedComposition(e.to_string()))
    }

    /// Exact structural comparison. Returns the first basis index (lane
    /// order, then canonical position order) where the operators differ.
    pub fn first_difference(&self, other: &StructuredIsometry) -> Option<BasisIndex> {
        let eps = epsilon();
        let mut candidates: Vec<BasisIndex> = Vec::new();
        for lane in &self.lanes {
            let reach = match lane.domain {
                LaneDomain::Finite(n) => i64::from(n),
                _ => {
                    let a = self.tails.get(&lane.id);
                    let b = other.tails.get(&lane.id);
                    match (a, b) {
                        (Some(a), Some(b))
                            if a.target == b.target && a.offset == b.offset && a.phase.approx_eq(b.phase) =>
                        {
                            a.threshold.max(b.threshold)
                        }
                        (Some(a), Some(b)) => a.threshold.max(b.threshold) + 1,
                        _ => 1,
                    }
                }
            };
            let mut rank = 0u64;
            while let Some(p) = lane.domain.position_of_rank(rank) {
                if p.abs() >= reach {
                    break;
                }
                candidates.push(BasisIndex { lane: lane.id, position: p });
                rank += 1;
            }
        }
        if !self.same_lanes(other) {
            return candidates.first().copied().or(Some(BasisIndex::new(0, 0)));
        }
        candidates.into_iter().find(|idx| self.column(idx).distance(&other.column(idx)) > eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_lane(domain: LaneDomain) -> Vec<LaneSpec> {
        vec![LaneSpec::new(0, domain)]
    }

    fn shift_power(k: i64) -> StructuredIsometry {
        StructuredIsometry::new(one_lane(LaneDomain::Naturals), BTreeMap::new(), vec![TailRule::new(0, 0, 0, k)])
            .unwrap()
    }

    fn e(p: i64) -> HVector {
        HVector::basis(BasisIndex::new(0, p))
    }

    #[test]
    fn shift_moves_basis_vectors() {
        let s = shift_power(1);
        assert_eq!(s.apply(&e(0)).unwrap(), e(1));
        assert!(s.apply_adjoint(&e(0)).unwrap().is_zero());
        assert_eq!(s.apply_adjoint(&e(3)).unwrap(), e(2));
    }

    #[test]
    fn square_shift_on_sum() {
        let s2 = shift_power(2);
        assert_eq!(s2.apply(&e(3).add(&e(5))).unwrap(), e(5).add(&e(7)));
    }

    #[test]
    fn compose_adds_offsets() {
        let s5 = shift_power(2).compose(&shift_power(3)).unwrap();
        let rule = s5.tail_of(LaneId(0)).unwrap();
        assert_eq!(rule.offset, 5);
        for p in 0..9 {
            assert_eq!(s5.apply(&e(p)).unwrap(), e(p + 5));
        }
        assert_eq!(shift_power(1).compose(&shift_power(1)).unwrap().first_difference(&shift_power(2)), None);
    }

    #[test]
    fn non_orthogonal_columns_are_rejected() {
        let mut cols = BTreeMap::new();
        cols.insert(BasisIndex::new(0, 0), e(0));
        cols.insert(
            BasisIndex::new(0, 1),
            HVector::from_real([(BasisIndex::new(0, 0), 0.6), (BasisIndex::new(0, 1), 0.8)]),
        );
        let err = StructuredIsometry::new(one_lane(LaneDomain::Finite(2)), cols, vec![]).unwrap_err();
        assert!(matches!(err, Error::NotIsometry(ref m) if m.contains("not orthogonal")), "{err}");
    }

    #[test]
    fn adjoint_of_shift_is_not_an_isometry() {
        // S* as "tail offset -1" would map position 0 outside the lane
        let err =
            StructuredIsometry::new(one_lane(LaneDomain::Naturals), BTreeMap::new(), vec![TailRule::new(0, 0, 0, -1)])
                .unwrap_err();
        assert!(matches!(err, Error::MalformedInput(_)));
    }

    #[test]
    fn totality_is_enforced() {
        let err =
            StructuredIsometry::new(one_lane(LaneDomain::Naturals), BTreeMap::new(), vec![TailRule::new(0, 2, 0, 1)])
                .unwrap_err();
        assert!(err.to_string().contains("no image for index 0:0"), "{err}");
        let err = StructuredIsometry::new(one_lane(LaneDomain::Naturals), BTreeMap::new(), vec![]).unwrap_err();
        assert!(err.to_string().contains("no tail rule"));
    }

    #[test]
    fn column_hitting_tail_image_is_rejected() {
        let mut cols = BTreeMap::new();
        cols.insert(BasisIndex::new(0, 0), e(1));
        let err =
            StructuredIsometry::new(one_lane(LaneDomain::Naturals), cols, vec![TailRule::new(0, 1, 0, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotIsometry(_)), "{err}");
    }

    #[test]
    fn overlapping_tail_images_are_rejected() {
        let lanes = vec![LaneSpec::new(0, LaneDomain::Naturals), LaneSpec::new(1, LaneDomain::Naturals)];
        let err =
            StructuredIsometry::new(lanes, BTreeMap::new(), vec![TailRule::new(0, 0, 1, 0), TailRule::new(1, 0, 1, 5)])
                .unwrap_err();
        assert!(err.to_string().contains("overlapping"), "{err}");
    }

    #[test]
    fn outside_support_is_malformed() {
        let s = shift_power(1);
        assert!(s.apply(&HVector::basis(BasisIndex::new(3, 0))).is_err());
        assert!(s.apply(&e(-1)).is_err());
    }

    #[test]
    fn bilateral_cycle_and_untouched_set() {
        let b =
            StructuredIsometry::new(one_lane(LaneDomain::Integers), BTreeMap::new(), vec![TailRule::new(0, 0, 0, 1)])
                .unwrap();
        assert!(b.untouched_by_tails().is_empty());
        assert_eq!(b.apply_adjoint(&e(0)).unwrap(), e(-1));
        let cycle = b.lane_cycle(LaneId(0)).unwrap();
        assert_eq!(cycle.drift, 1);
        assert_eq!(shift_power(2).untouched_by_tails(), vec![BasisIndex::new(0, 0), BasisIndex::new(0, 1)]);
    }

    #[test]
    fn quarter_phases_are_exact() {
        assert_eq!(Phase::from_turns(0.5).value(), Complex64::new(-1.0, 0.0));
        assert_eq!(Phase::from_turns(-0.25).value(), Complex64::new(0.0, -1.0));
        assert!(Phase::from_turns(0.25).compose(Phase::from_turns(0.75)).approx_eq(Phase::ONE));
    }
}
