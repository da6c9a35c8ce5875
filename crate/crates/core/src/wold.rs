//! Single-isometry theory: Wold decomposition, wandering and strongly
//! wandering vectors, the `H_0 (+) H_w` splitting, minimal unitary
//! extensions and bilateral orbits.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::certificate::{Certificate, Witness};
use crate::drift::{strip_escaped, Direction};
use crate::error::{Error, Result};
use crate::isometry::{StructuredIsometry, TailRule};
use crate::subspace::{project_onto, Closure, OrthoBasis, Subspace};
use crate::tolerance::epsilon;
use crate::vector::{BasisIndex, HVector, LaneDomain, LaneId, LaneSpec};
use crate::window::{window_indices, LaneBounds};

/// Default depth/horizon for every depth-bounded analysis.
pub const DEFAULT_DEPTH: usize = 64;

/// Orthonormal basis of `ker V*`.
///
/// The kernel is the orthogonal complement of the explicit columns inside
/// the span of the indices no tail rule reaches. That index set is finite
/// for every structured isometry, so the basis is always complete.
pub fn kernel_of_adjoint(v: &StructuredIsometry) -> Subspace {
    let columns = Subspace::spanned_by(v.columns().values());
    let missed: Vec<HVector> = v.untouched_by_tails().into_iter().map(HVector::basis).collect();
    columns.complement_in(missed.iter())
}

/// `V` is unitary iff `ker V*` is trivial.
pub fn is_unitary(v: &StructuredIsometry) -> bool {
    kernel_of_adjoint(v).is_zero()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WoldResult {
    /// Orthonormal basis of `ker V*`.
    pub shift_wandering_basis: Vec<HVector>,
    /// Orthonormal basis of the projections of the window onto `H_u`.
    pub unitary_window_basis: Vec<HVector>,
    /// `V^n k` for every kernel vector `k` and `0 <= n <= depth`; an
    /// orthonormal family inside `H_s`.
    pub shift_orbit: Vec<HVector>,
    pub window: Vec<BasisIndex>,
    pub depth: usize,
    /// Every kernel orbit has drifted out of the window by `depth`, so the
    /// window projections onto `H_s` and `H_u` are exact.
    pub exact: bool,
}

impl WoldResult {
    /// `H_s` on the window: the span of the kernel orbit.
    pub fn shift_span(&self) -> Subspace {
        Subspace::from_nearly_orthonormal(self.shift_orbit.clone())
    }

    pub fn shift_component(&self, x: &HVector) -> HVector {
        project_onto(&self.shift_orbit, x)
    }

    pub fn unitary_component(&self, x: &HVector) -> HVector {
        x.sub(&self.shift_component(x))
    }

    pub fn certificate(&self) -> Certificate {
        if self.exact {
            Certificate::holds(self.depth, true)
        } else {
            Certificate::undecided(self.depth)
        }
    }

    pub fn window_vectors(&self) -> Vec<HVector> {
        self.window.iter().copied().map(HVector::basis).collect()
    }
}

/// Wold decomposition on the `depth`-dimensional canonical window.
pub fn wold_decompose(v: &StructuredIsometry, depth: usize) -> WoldResult {
    let window = window_indices(v.lanes(), depth);
    wold_decompose_on(v, &window, depth)
}

/// Wold decomposition on an explicit window of basis indices.
pub fn wold_decompose_on(v: &StructuredIsometry, window: &[BasisIndex], depth: usize) -> WoldResult {
    let kernel = kernel_of_adjoint(v);
    let bounds = LaneBounds::of(window);
    let mut shift_orbit = Vec::new();
    let mut exact = true;
    for k in kernel.generators() {
        let mut full = k.clone();
        let mut rest = strip_escaped(v, k, Direction::Forward, &bounds);
        for n in 0..=depth {
            shift_orbit.push(full.clone());
            if n == depth {
                break;
            }
            full = v.apply_unchecked(&full);
            rest = strip_escaped(v, &v.apply_unchecked(&rest), Direction::Forward, &bounds);
        }
        if !rest.is_zero() {
            exact = false;
        }
    }
    // Gram-Schmidt seeded with the orbit keeps the unitary basis orthogonal
    // to it even when a window residual is small.
    let mut basis = OrthoBasis::from_orthonormal(shift_orbit.clone());
    for idx in window {
        basis.absorb(&HVector::basis(*idx));
    }
    let unitary = basis.into_vectors().split_off(shift_orbit.len());
    WoldResult {
        shift_wandering_basis: kernel.generators().to_vec(),
        unitary_window_basis: unitary,
        shift_orbit,
        window: window.to_vec(),
        depth,
        exact,
    }
}

fn require_nonzero(x: &HVector) -> Result<()> {
    if x.is_zero() {
        Err(Error::MalformedInput("the zero vector has no wandering certificate".into()))
    } else {
        Ok(())
    }
}

/// Checks `<V^n x, x> = 0` for `n = 1..=horizon`.
///
/// Parts of `V^n x` that have drifted past the support of `x` for good are
/// discarded as the scan proceeds; if nothing is left, or the remainder
/// repeats, the answer is certified for every `n`.
pub fn is_wandering(v: &StructuredIsometry, x: &HVector, horizon: usize) -> Result<Certificate> {
    require_nonzero(x)?;
    v.apply(x)?;
    Ok(forward_scan(v, x, horizon))
}

fn forward_scan(v: &StructuredIsometry, x: &HVector, horizon: usize) -> Certificate {
    let eps = epsilon();
    let bounds = LaneBounds::of(x.support());
    let mut rest = x.clone();
    let mut history: Vec<HVector> = vec![strip_escaped(v, x, Direction::Forward, &bounds)];
    for n in 1..=horizon {
        let image = v.apply_unchecked(&rest);
        if image.inner(x).norm() > eps {
            return Certificate::fails(Witness::Exponent { n: n as i64 }, horizon, true);
        }
        rest = strip_escaped(v, &image, Direction::Forward, &bounds);
        if rest.is_zero() {
            return Certificate::holds(horizon, true);
        }
        if history.iter().any(|h| h.distance(&rest) <= eps) {
            return Certificate::holds(horizon, true);
        }
        history.push(rest.clone());
    }
    Certificate::holds(horizon, false)
}

/// Whether `V*^k x` is orthogonal to `V*^j x` for all `j < k` beyond the
/// horizon, decided by drift of the backward orbit.
fn backward_orbit_settles(v: &StructuredIsometry, backward: &[HVector]) -> bool {
    let empty = LaneBounds::default();
    let Some(k0) = backward.iter().position(|q| strip_escaped(v, q, Direction::Backward, &empty).is_zero()) else {
        return false;
    };
    let bounds = LaneBounds::of(backward[..=k0].iter().flat_map(|q| q.support()));
    backward[k0..].iter().any(|q| strip_escaped(v, q, Direction::Backward, &bounds).is_zero())
}

/// Checks `<V^n x, V^m x> = 0` for `-horizon <= m < n <= horizon`, negative
/// powers meaning powers of `V*`.
pub fn is_strongly_wandering(v: &StructuredIsometry, x: &HVector, horizon: usize) -> Result<Certificate> {
    require_nonzero(x)?;
    v.apply(x)?;
    let eps = epsilon();
    let h = horizon as i64;
    let mut forward = vec![x.clone()];
    let mut backward = vec![x.clone()];
    for _ in 0..horizon {
        forward.push(v.apply_unchecked(forward.last().unwrap()));
        backward.push(v.apply_adjoint_unchecked(backward.last().unwrap()));
    }
    let power = |n: i64| if n >= 0 { &forward[n as usize] } else { &backward[(-n) as usize] };
    for d in 1..=2 * h {
        // m in the order 0, 1, -1, 2, -2, ...
        for r in 0..=(2 * h) {
            let m = if r % 2 == 0 { -(r / 2) } else { r / 2 + 1 };
            let n = m + d;
            if m < -h || n > h {
                continue;
            }
            if power(n).inner(power(m)).norm() > eps {
                return Ok(Certificate::fails(Witness::ExponentPair { n, m }, horizon, true));
            }
        }
    }
    let forward_exact = forward_scan(v, x, horizon).exact;
    Ok(Certificate::holds(horizon, forward_exact && backward_orbit_settles(v, &backward)))
}

/// Result of splitting `H = H_0 (+) H_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct WanderingSplit {
    pub h0: Subspace,
    pub hw: Subspace,
    /// `H_w` inside `H_u`: the span of certified wandering vectors of the
    /// unitary part and their two-sided orbits.
    pub hw_unitary: Subspace,
    /// Certified wandering generators found in `H_u`.
    pub unitary_generators: Vec<HVector>,
    pub wold: WoldResult,
    pub h0_reducing_defect: f64,
    pub hw_reducing_defect: f64,
    pub certificate: Certificate,
}

fn periodic(v: &StructuredIsometry, u: &HVector, depth: usize) -> bool {
    let eps = epsilon();
    let mut w = u.clone();
    for _ in 0..depth {
        w = v.apply_unchecked(&w);
        if w.distance(u) <= eps {
            return true;
        }
    }
    false
}

/// `H = H_0 (+) H_w`, with `H_w` the span of wandering vectors.
pub fn wandering_span_decompose(v: &StructuredIsometry, depth: usize) -> WanderingSplit {
    wandering_span_decompose_with(v, depth, &[])
}

/// As [`wandering_span_decompose`], also trying user-supplied candidate
/// wandering vectors. The unitary component of every certified candidate
/// lies in `H_w`.
///
/// Unitary-part window vectors not reached by wandering orbits are certified
/// to lie in `H_0` when they are periodic under `V`: such vectors carry only
/// point spectrum, while wandering vectors have Lebesgue spectral measure.
/// Anything else leaves the split undecided.
pub fn wandering_span_decompose_with(v: &StructuredIsometry, depth: usize, candidates: &[HVector]) -> WanderingSplit {
    let eps = epsilon();
    let wold = wold_decompose(v, depth);
    let window_vectors = wold.window_vectors();

    let mut pool: Vec<HVector> =
        window_vectors.iter().filter(|e| wold.shift_component(e).norm() <= eps).cloned().collect();
    pool.extend(wold.unitary_window_basis.iter().cloned());

    let mut unitary_generators = Vec::new();
    for c in &pool {
        let cert = forward_scan(v, c, depth);
        if cert.is_true() && cert.exact {
            unitary_generators.push(c.clone());
        }
    }
    for c in candidates {
        if c.is_zero() || v.apply(c).is_err() {
            continue;
        }
        let cert = forward_scan(v, c, depth);
        if cert.is_true() && cert.exact {
            let cu = wold.unitary_component(c);
            if !cu.is_zero() {
                unitary_generators.push(cu);
            }
        }
    }

    let mut hw_unitary = Subspace::zero();
    for g in &unitary_generators {
        if hw_unitary.contains(g) {
            continue;
        }
        let mut orbit = vec![g.clone()];
        let (mut fwd, mut bwd) = (g.clone(), g.clone());
        for _ in 0..depth {
            fwd = v.apply_unchecked(&fwd);
            bwd = v.apply_adjoint_unchecked(&bwd);
            orbit.push(fwd.clone());
            orbit.push(bwd.clone());
        }
        let added = hw_unitary.complement_in(orbit.iter());
        hw_unitary = hw_unitary.join(&added);
    }

    let h0 = hw_unitary.complement_in(wold.unitary_window_basis.iter());
    let periodic_span = Subspace::spanned_by(wold.unitary_window_basis.iter().filter(|u| periodic(v, u, depth)));
    let h0_certified = h0.generators().iter().all(|g| periodic_span.contains(g));
    let exact = wold.exact && h0_certified;

    let hw = wold.shift_span().join(&hw_unitary);
    let mut h0_tests = window_vectors.clone();
    h0_tests.extend(h0.generators().iter().cloned());
    let h0_reducing_defect = h0.reducing_defect(v, &h0_tests);
    let hw_reducing_defect = hw.reducing_defect(v, &window_vectors);

    let certificate = if exact { Certificate::holds(depth, true) } else { Certificate::undecided(depth) };
    WanderingSplit { h0, hw, hw_unitary, unitary_generators, wold, h0_reducing_defect, hw_reducing_defect, certificate }
}

/// Span of strongly wandering vectors, `W = H_s (+) W_u`, on the window.
/// In `H_u` wandering and strongly wandering coincide, so `W_u` is the
/// unitary part of `H_w`.
pub fn strongly_wandering_span(split: &WanderingSplit) -> Subspace {
    split.wold.shift_span().join(&split.hw_unitary)
}

/// Minimal unitary extension together with how it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryExtension {
    pub unitary: StructuredIsometry,
    /// Naturals lanes whose domain was widened to the integers.
    pub widened_lanes: Vec<LaneId>,
    /// Lanes added for kernel vectors that no widened lane absorbed.
    pub new_lanes: Vec<LaneId>,
}

impl UnitaryExtension {
    /// Original basis vectors keep their lane and position.
    pub fn embed(&self, idx: BasisIndex) -> BasisIndex {
        idx
    }

    /// Whether `idx` of the extended space is not an original basis vector.
    pub fn is_new(&self, original: &StructuredIsometry, idx: &BasisIndex) -> bool {
        !original.contains(idx)
    }
}

/// Minimal unitary extension of `V`.
///
/// Each naturals lane that shifts into itself by `o >= 1` and carries at
/// least `o` kernel vectors of `V*` is widened to the integers, the new
/// negative positions feeding those kernel vectors. Remaining kernel vectors
/// get a fresh lane each, running backwards into the kernel vector. Every new
/// basis vector is `U*^n` of an original one.
pub fn minimal_unitary_extension(v: &StructuredIsometry, depth: usize) -> Result<UnitaryExtension> {
    let wold = wold_decompose(v, depth);
    if !wold.exact {
        return Err(Error::Refused(format!("Wold decomposition did not stabilize within depth {depth}")));
    }
    let mut kernel: Vec<Option<HVector>> = wold.shift_wandering_basis.iter().cloned().map(Some).collect();
    let mut lanes: Vec<LaneSpec> = v.lanes().to_vec();
    let mut columns: BTreeMap<BasisIndex, HVector> = v.columns().clone();
    let mut tails: BTreeMap<LaneId, TailRule> = v.tail_rules().map(|r| (r.source, *r)).collect();
    let mut widened_lanes = Vec::new();

    for lane in lanes.iter_mut() {
        let Some(rule) = tails.get(&lane.id).copied() else { continue };
        if lane.domain != LaneDomain::Naturals || rule.target != lane.id || rule.offset < 1 {
            continue;
        }
        let o = rule.offset;
        let own: Vec<usize> = kernel
            .iter()
            .enumerate()
            .filter_map(|(j, k)| k.as_ref().filter(|k| k.support().all(|i| i.lane == lane.id)).map(|_| j))
            .take(o as usize)
            .collect();
        if own.len() < o as usize {
            continue;
        }
        let t = rule.threshold;
        let wide = t.max(o + 1);
        let id = lane.id;
        let at = |p: i64| BasisIndex { lane: id, position: p };
        let phase = rule.phase.value();
        for p in t..wide {
            columns.insert(at(p), HVector::from_entries([(at(p + o), phase)]));
        }
        for p in (1 - wide)..=(-o - 1) {
            columns.insert(at(p), HVector::from_entries([(at(p + o), phase)]));
        }
        for (j, slot) in own.iter().enumerate() {
            let k = kernel[*slot].take().expect("kernel slot used once");
            columns.insert(at(-o + j as i64), k);
        }
        lane.domain = LaneDomain::Integers;
        tails.insert(id, TailRule { threshold: wide, ..rule });
        widened_lanes.push(id);
    }

    let first_id = v.lanes().iter().map(|l| l.id.0).max().map_or(0, |m| m + 1);
    let mut new_lanes = Vec::new();
    for (k, id) in kernel.into_iter().flatten().zip((first_id..).map(LaneId)) {
        lanes.push(LaneSpec { id, domain: LaneDomain::Naturals, label: Some(format!("ext{}", new_lanes.len())) });
        columns.insert(BasisIndex { lane: id, position: 0 }, k);
        tails.insert(
            id,
            TailRule { source: id, threshold: 1, target: id, offset: -1, phase: crate::isometry::Phase::ONE },
        );
        new_lanes.push(id);
    }

    let unitary =
        StructuredIsometry::new(lanes, columns, tails.into_values().collect())?.with_name(&format!("{}_ext", v.name()));
    if !is_unitary(&unitary) {
        return Err(Error::Refused("extension is not unitary".into()));
    }
    Ok(UnitaryExtension { unitary, widened_lanes, new_lanes })
}

/// `{U^n w : |n| <= horizon}` for a strongly wandering `w` of a unitary `U`.
pub fn bilateral_orbit(u: &StructuredIsometry, w: &HVector, horizon: usize) -> Result<Subspace> {
    if !is_unitary(u) {
        return Err(Error::Refused(format!("{} is not unitary", u.name())));
    }
    let cert = is_strongly_wandering(u, w, horizon)?;
    if !cert.is_true() {
        return Err(Error::Refused(format!("vector is not strongly wandering: witness {:?}", cert.witness)));
    }
    let unit = w.scale(Complex64::new(1.0 / w.norm(), 0.0));
    let mut negatives = Vec::with_capacity(horizon);
    let mut positives = Vec::with_capacity(horizon);
    let (mut fwd, mut bwd) = (unit.clone(), unit.clone());
    for _ in 0..horizon {
        fwd = u.apply_unchecked(&fwd);
        bwd = u.apply_adjoint_unchecked(&bwd);
        positives.push(fwd.clone());
        negatives.push(bwd.clone());
    }
    let orbit: Vec<HVector> = negatives.into_iter().rev().chain(std::iter::once(unit)).chain(positives).collect();
    Subspace::from_orthonormal(orbit)
        .map(|s| s.with_closure(Closure::FullOrbit(u.name().to_string())))
        .ok_or_else(|| Error::Refused("orbit vectors are not orthonormal within tolerance".into()))
}
