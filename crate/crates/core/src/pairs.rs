//! Commuting pairs of isometries: the `H_0^+` construction, its iterated
//! exhaustion, weak bi-shift classification and the four-part decomposition.

use std::collections::{BTreeMap, BTreeSet};

use crate::certificate::{Certificate, Witness};
use crate::commutation::{commutes, doubly_commutes};
use crate::error::{Error, Result};
use crate::isometry::StructuredIsometry;
use crate::subspace::{kernel_of_map, Closure, Subspace};
use crate::tolerance::epsilon;
use crate::vector::{BasisIndex, HVector, LaneId};
use crate::window::window_indices;
use crate::wold::{wandering_span_decompose, wold_decompose, WoldResult};

fn require_commuting(v1: &StructuredIsometry, v2: &StructuredIsometry, depth: usize) -> Result<()> {
    let c = commutes(v1, v2, depth)?;
    if c.is_true() {
        Ok(())
    } else {
        Err(Error::Refused(format!("{} and {} do not commute: {:?}", v1.name(), v2.name(), c.witness)))
    }
}

/// Window basis vectors whose images and adjoint images under every listed
/// operator stay inside the window. Reducing defects are measured on these,
/// so that truncation at the window edge does not register as a defect.
pub fn interior_tests(ops: &[&StructuredIsometry], window: &[BasisIndex]) -> Vec<HVector> {
    let inside: BTreeSet<BasisIndex> = window.iter().copied().collect();
    window
        .iter()
        .map(|idx| HVector::basis(*idx))
        .filter(|e| {
            ops.iter().all(|op| {
                op.apply_unchecked(e).support().all(|i| inside.contains(i))
                    && op.apply_adjoint_unchecked(e).support().all(|i| inside.contains(i))
            })
        })
        .collect()
}

fn certified(defects: &[f64], exact: bool, depth: usize) -> Certificate {
    if exact && defects.iter().all(|d| *d <= epsilon()) {
        Certificate::holds(depth, true)
    } else {
        Certificate::undecided(depth)
    }
}

/// `H_0^+` together with its certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct H0Plus {
    pub subspace: Subspace,
    pub v1_reducing_defect: f64,
    pub v2_reducing_defect: f64,
    /// `max ||V1 V1* b - b||` over the basis.
    pub v1_unitary_defect: f64,
    pub certificate: Certificate,
}

/// Closed span of `V2^n H_0`, `n = 0..=depth`.
///
/// Exact when every generator's `V2`-orbit stops growing before `depth`,
/// so the truncated span is already the closed one.
pub fn h0_plus(v1: &StructuredIsometry, v2: &StructuredIsometry, h0: &Subspace, depth: usize) -> Result<H0Plus> {
    require_commuting(v1, v2, depth)?;
    let mut span = Subspace::zero();
    let mut stabilized = true;
    for g in h0.generators() {
        let mut orbit = vec![g.clone()];
        let mut x = g.clone();
        let mut closed = false;
        for _ in 0..depth {
            x = v2.apply_unchecked(&x);
            if Subspace::spanned_by(orbit.iter()).contains(&x) {
                closed = true;
                break;
            }
            orbit.push(x.clone());
        }
        if !closed {
            stabilized = false;
        }
        span = span.join(&span.complement_in(orbit.iter()));
    }
    let span = span.with_closure(Closure::ForwardOrbit(v2.name().to_string()));

    let window = window_indices(v1.lanes(), depth);
    let mut tests = interior_tests(&[v1, v2], &window);
    // a truncated orbit has a boundary by construction, so its generators
    // only serve as tests once every orbit closed
    if stabilized {
        tests.extend(span.generators().iter().cloned());
    }
    let v1_reducing_defect = span.reducing_defect(v1, &tests);
    let v2_reducing_defect = span.reducing_defect(v2, &tests);
    let v1_unitary_defect = span
        .generators()
        .iter()
        .map(|b| {
            let back = v1.apply_unchecked(&v1.apply_adjoint_unchecked(b));
            back.distance(b).max(v1.apply_adjoint_unchecked(&v1.apply_unchecked(b)).distance(b))
        })
        .fold(0.0, f64::max);
    let certificate = certified(&[v1_reducing_defect, v2_reducing_defect, v1_unitary_defect], stabilized, depth);
    Ok(H0Plus { subspace: span, v1_reducing_defect, v2_reducing_defect, v1_unitary_defect, certificate })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustion {
    /// Window basis of the residual `H_1`.
    pub h1: Subspace,
    /// Number of non-trivial `H_0n^+` peeled off.
    pub iterations: usize,
    pub peeled: Vec<H0Plus>,
    /// Largest residual of an `H_1` basis vector against the span of
    /// certified `V1`-wandering vectors and their orbits.
    pub wandering_coverage_residual: f64,
    pub certificate: Certificate,
}

/// Peel `H_0n^+` off the window until the `H_0` of `V1` restricted to the
/// residual is trivial.
///
/// On the residual `R` (a reducing subspace), `H_0` is the part of the
/// projected `H_0` of `V1` not spanned by certified wandering vectors that
/// lie in `R`; the latter are the projections onto `R` of the unitary-part
/// wandering generators, each certified again.
pub fn exhaust_h0(
    v1: &StructuredIsometry,
    v2: &StructuredIsometry,
    max_iter: usize,
    depth: usize,
) -> Result<Exhaustion> {
    require_commuting(v1, v2, depth)?;
    let split = wandering_span_decompose(v1, depth);
    let window: Vec<HVector> = split.wold.window_vectors();
    let mut residual = Subspace::spanned_by(window.iter());
    let mut peeled = Vec::new();
    let mut converged = false;
    let mut exact = split.certificate.exact;

    for _ in 0..max_iter {
        let wandering_in_r: Vec<HVector> = split
            .unitary_generators
            .iter()
            .map(|g| residual.project(g))
            .filter(|g| !g.is_zero() && crate::wold::is_wandering(v1, g, depth).is_ok_and(|c| c.is_true() && c.exact))
            .collect();
        let covered = Subspace::spanned_by(wandering_in_r.iter());
        let projected: Vec<HVector> = split.h0.generators().iter().map(|g| residual.project(g)).collect();
        let h0_n = covered.complement_in(projected.iter());
        if h0_n.is_zero() {
            converged = true;
            break;
        }
        let plus = h0_plus(v1, v2, &h0_n, depth)?;
        exact &= plus.certificate.exact;
        residual = plus.subspace.complement_in(residual.generators().iter());
        peeled.push(plus);
    }

    let wandering_span = split.wold.shift_span().join(&split.hw_unitary);
    let wandering_coverage_residual =
        residual.generators().iter().map(|b| wandering_span.residual(b).norm()).fold(0.0, f64::max);
    let certificate = if converged && exact { Certificate::holds(depth, true) } else { Certificate::undecided(depth) };
    Ok(Exhaustion { h1: residual, iterations: peeled.len(), peeled, wandering_coverage_residual, certificate })
}

/// `V^n x` for `n = 0..=depth`.
fn forward_orbit(v: &StructuredIsometry, x: &HVector, depth: usize) -> Vec<HVector> {
    let mut out = Vec::with_capacity(depth + 1);
    let mut y = x.clone();
    for n in 0..=depth {
        if n > 0 {
            y = v.apply_unchecked(&y);
        }
        out.push(y.clone());
    }
    out
}

/// Window basis of `ker(W* V^i)` for all `i <= depth`.
fn joint_kernel(v: &StructuredIsometry, w: &StructuredIsometry, window: &[HVector], depth: usize) -> Vec<HVector> {
    let images: Vec<Vec<HVector>> = window
        .iter()
        .map(|x| forward_orbit(v, x, depth).iter().map(|y| w.apply_adjoint_unchecked(y)).collect())
        .collect();
    kernel_of_map(window, &images)
}

/// Whether `V` restricted to the invariant subspace spanned by `basis` is
/// a shift: `Some(true)` when the subspace lies in `H_s(V)`, `Some(false)`
/// when it contains a periodic vector (which the restriction keeps in its
/// unitary part), `None` otherwise.
fn restriction_is_shift(v: &StructuredIsometry, wold: &WoldResult, basis: &[HVector], depth: usize) -> Option<bool> {
    let eps = epsilon();
    if basis.is_empty() {
        return Some(true);
    }
    if wold.exact && basis.iter().all(|b| wold.unitary_component(b).norm() <= eps) {
        return Some(true);
    }
    let unitary_part = kernel_of_map(basis, &basis.iter().map(|b| vec![wold.shift_component(b)]).collect::<Vec<_>>());
    let periodic = unitary_part.iter().any(|u| {
        let mut y = u.clone();
        (0..depth).any(|_| {
            y = v.apply_unchecked(&y);
            y.distance(u) <= eps
        })
    });
    if wold.exact && periodic {
        Some(false)
    } else {
        None
    }
}

/// Weak bi-shift test: `V1` on `ker(V2* V1^i)`, `V2` on `ker(V1* V2^i)`
/// (`i <= depth`) and the product `V1 V2` must all be shifts.
pub fn weak_bishift_classify(v1: &StructuredIsometry, v2: &StructuredIsometry, depth: usize) -> Result<Certificate> {
    require_commuting(v1, v2, depth)?;
    let w1 = wold_decompose(v1, depth);
    let w2 = wold_decompose(v2, depth);
    let window = w1.window_vectors();
    let l1 = joint_kernel(v1, v2, &window, depth);
    let l2 = joint_kernel(v2, v1, &window, depth);
    let product = v1.compose(v2)?;
    let wp = wold_decompose(&product, depth);
    let product_shift = wp.exact.then_some(wp.unitary_window_basis.is_empty());

    let parts = [
        ("V1 on the joint kernel of V2* V1^i", restriction_is_shift(v1, &w1, &l1, depth)),
        ("V2 on the joint kernel of V1* V2^i", restriction_is_shift(v2, &w2, &l2, depth)),
        ("product V1 V2", product_shift),
    ];
    if let Some((name, _)) = parts.iter().find(|(_, s)| *s == Some(false)) {
        return Ok(Certificate::fails(Witness::Note { text: format!("{name} is not a shift") }, depth, true));
    }
    if parts.iter().all(|(_, s)| *s == Some(true)) {
        Ok(Certificate::holds(depth, true))
    } else {
        Ok(Certificate::undecided(depth))
    }
}

/// One part of the four-part decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPart {
    pub subspace: Subspace,
    pub v1_reducing_defect: f64,
    pub v2_reducing_defect: f64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    /// Both unitary.
    pub uu: PairPart,
    /// `V1` unitary, `V2` a shift.
    pub us: PairPart,
    /// `V1` a shift, `V2` unitary.
    pub su: PairPart,
    /// The remainder, spanned by wandering vectors of either operator.
    pub ws: PairPart,
    pub depth: usize,
    /// Wandering generators for `V1`: `ker V1*` and certified wandering
    /// vectors of the unitary part.
    pub wandering_v1: Vec<HVector>,
    pub wandering_v2: Vec<HVector>,
    /// Largest residual of a `ws` basis vector against the orbits of the
    /// `V1` (resp. `V2`) generators.
    pub ws_coverage_v1: f64,
    pub ws_coverage_v2: f64,
}

impl PairReport {
    pub fn parts(&self) -> [(&'static str, &PairPart); 4] {
        [("uu", &self.uu), ("us", &self.us), ("su", &self.su), ("ws", &self.ws)]
    }

    /// Largest overlap between two distinct parts.
    pub fn max_overlap(&self) -> f64 {
        let parts = self.parts();
        let mut worst: f64 = 0.0;
        for (i, (_, a)) in parts.iter().enumerate() {
            for (_, b) in &parts[i + 1..] {
                worst = worst.max(a.subspace.overlap(&b.subspace));
            }
        }
        worst
    }

    pub fn total_dim(&self) -> usize {
        self.parts().iter().map(|(_, p)| p.subspace.dim()).sum()
    }
}

/// `H = H_uu (+) H_us (+) H_su (+) H_ws` on the window.
pub fn pair_decompose(v1: &StructuredIsometry, v2: &StructuredIsometry, depth: usize) -> Result<PairReport> {
    require_commuting(v1, v2, depth)?;
    let w1 = wold_decompose(v1, depth);
    let w2 = wold_decompose(v2, depth);
    let window = w1.window_vectors();
    let s1: Vec<HVector> = window.iter().map(|x| w1.shift_component(x)).collect();
    let s2: Vec<HVector> = window.iter().map(|x| w2.shift_component(x)).collect();
    let u1: Vec<HVector> = window.iter().zip(&s1).map(|(x, s)| x.sub(s)).collect();
    let u2: Vec<HVector> = window.iter().zip(&s2).map(|(x, s)| x.sub(s)).collect();
    let pairs = |a: &[HVector], b: &[HVector]| -> Vec<Vec<HVector>> {
        a.iter().zip(b).map(|(x, y)| vec![x.clone(), y.clone()]).collect()
    };
    let uu = kernel_of_map(&window, &pairs(&s1, &s2));
    let us = kernel_of_map(&window, &pairs(&s1, &u2));
    let su = kernel_of_map(&window, &pairs(&u1, &s2));
    let known = Subspace::spanned_by(uu.iter().chain(&us).chain(&su));
    let ws = known.complement_in(window.iter());

    let tests = interior_tests(&[v1, v2], &w1.window);
    let exact = w1.exact && w2.exact;
    let part = |basis: Vec<HVector>| {
        let subspace = Subspace::from_nearly_orthonormal(basis);
        let d1 = subspace.reducing_defect(v1, &tests);
        let d2 = subspace.reducing_defect(v2, &tests);
        PairPart {
            certificate: certified(&[d1, d2], exact, depth),
            subspace,
            v1_reducing_defect: d1,
            v2_reducing_defect: d2,
        }
    };

    let split1 = wandering_span_decompose(v1, depth);
    let split2 = wandering_span_decompose(v2, depth);
    let mut wandering_v1 = w1.shift_wandering_basis.clone();
    wandering_v1.extend(split1.unitary_generators.iter().cloned());
    let mut wandering_v2 = w2.shift_wandering_basis.clone();
    wandering_v2.extend(split2.unitary_generators.iter().cloned());
    let reach1 = w1.shift_span().join(&split1.hw_unitary);
    let reach2 = w2.shift_span().join(&split2.hw_unitary);
    let coverage = |reach: &Subspace| ws.generators().iter().map(|b| reach.residual(b).norm()).fold(0.0, f64::max);
    let ws_coverage_v1 = coverage(&reach1);
    let ws_coverage_v2 = coverage(&reach2);

    Ok(PairReport {
        uu: part(uu),
        us: part(us),
        su: part(su),
        ws: part(ws.generators().to_vec()),
        depth,
        wandering_v1,
        wandering_v2,
        ws_coverage_v1,
        ws_coverage_v2,
    })
}

/// Restriction of `v` to the span of `lanes`, if that span reduces `v`.
pub fn restrict_to_lanes(v: &StructuredIsometry, lanes: &BTreeSet<LaneId>) -> Option<StructuredIsometry> {
    let inside = |i: &BasisIndex| lanes.contains(&i.lane);
    let mut columns = BTreeMap::new();
    for (idx, col) in v.columns() {
        if col.support().any(|i| inside(i) != inside(idx)) {
            return None;
        }
        if inside(idx) {
            columns.insert(*idx, col.clone());
        }
    }
    let mut tails = Vec::new();
    for rule in v.tail_rules() {
        if lanes.contains(&rule.source) != lanes.contains(&rule.target) {
            return None;
        }
        if lanes.contains(&rule.source) {
            tails.push(*rule);
        }
    }
    let specs = v.lanes().iter().filter(|l| lanes.contains(&l.id)).cloned().collect();
    StructuredIsometry::new(specs, columns, tails).ok().map(|r| r.with_name(&format!("{}|lanes", v.name())))
}

/// Searches for a non-zero subspace reducing both operators to a doubly
/// commuting pair: the whole space, spans of lane subsets reducing both
/// operators, and the `uu`, `us`, `su` parts (on which one operator is
/// unitary, so the restrictions doubly commute).
///
/// A `true` verdict is relative to that family and is never exact.
pub fn is_completely_non_doubly_commuting(
    v1: &StructuredIsometry,
    v2: &StructuredIsometry,
    window: usize,
) -> Result<Certificate> {
    require_commuting(v1, v2, window)?;
    let whole = doubly_commutes(v1, v2, window)?;
    if whole.is_true() {
        return Ok(Certificate::fails(
            Witness::Subspace { name: "whole space".into(), dim: window },
            window,
            whole.exact,
        ));
    }
    let ids: Vec<LaneId> = v1.lanes().iter().map(|l| l.id).collect();
    if ids.len() <= 12 {
        for mask in 1u32..(1 << ids.len()) - 1 {
            let subset: BTreeSet<LaneId> =
                ids.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, id)| *id).collect();
            let (Some(r1), Some(r2)) = (restrict_to_lanes(v1, &subset), restrict_to_lanes(v2, &subset)) else {
                continue;
            };
            if doubly_commutes(&r1, &r2, window).is_ok_and(|c| c.is_true()) {
                return Ok(Certificate::fails(Witness::Lanes { lanes: subset.into_iter().collect() }, window, true));
            }
        }
    }
    let report = pair_decompose(v1, v2, window)?;
    for (name, part) in [("uu", &report.uu), ("us", &report.us), ("su", &report.su)] {
        if !part.subspace.is_zero() && part.certificate.is_true() {
            return Ok(Certificate::fails(
                Witness::Subspace { name: name.into(), dim: part.subspace.dim() },
                window,
                part.certificate.exact,
            ));
        }
    }
    // the search family is not exhaustive, so absence of a witness is no proof
    let mut cert = Certificate::undecided(window);
    cert.witness = Some(Witness::Note {
        text: "no doubly commuting reducing subspace among lane subsets and computed parts".into(),
    });
    Ok(cert)
}
