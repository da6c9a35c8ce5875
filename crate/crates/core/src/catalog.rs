//! Named operators, pairs and spectral unitaries with their known
//! decompositions, plus a seeded generator of random structured isometries.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::commutation::{commutes, doubly_commutes};
use crate::error::{Error, Result};
use crate::isometry::{Phase, StructuredIsometry, TailRule};
use crate::pairs::{exhaust_h0, pair_decompose, weak_bishift_classify};
use crate::spectral::{
    bilateral_cover, extend_with_shift, has_wandering_vector, is_bilateral_shift, multiplicity_profile, Arc,
    MultiplicityProfile, ProfileJson, SpectralUnitary,
};
use crate::subspace::gram_schmidt;
use crate::vector::{BasisIndex, HVector, LaneDomain, LaneSpec};
use crate::wold::{is_unitary, wandering_span_decompose, wold_decompose, DEFAULT_DEPTH};

fn build(
    lanes: Vec<LaneSpec>,
    columns: Vec<(BasisIndex, HVector)>,
    tails: Vec<TailRule>,
    name: &str,
) -> StructuredIsometry {
    StructuredIsometry::new(lanes, columns.into_iter().collect(), tails)
        .expect("catalog operators are valid")
        .with_name(name)
}

fn e(lane: u32, position: i64) -> HVector {
    HVector::basis(BasisIndex::new(lane, position))
}

/// Unilateral shift of the given multiplicity: one naturals lane per copy.
pub fn shift(multiplicity: u32) -> StructuredIsometry {
    let lanes = (0..multiplicity).map(|l| LaneSpec::labelled(l, LaneDomain::Naturals, "e")).collect();
    let tails = (0..multiplicity).map(|l| TailRule::new(l, 0, l, 1)).collect();
    build(lanes, vec![], tails, if multiplicity == 1 { "S" } else { "S^(m)" })
}

/// `S^k` on a single naturals lane.
pub fn shift_power(k: i64) -> StructuredIsometry {
    build(
        vec![LaneSpec::labelled(0, LaneDomain::Naturals, "e")],
        vec![],
        vec![TailRule::new(0, 0, 0, k)],
        &format!("S{k}"),
    )
}

/// Bilateral shift on one integer lane.
pub fn bilateral() -> StructuredIsometry {
    build(vec![LaneSpec::labelled(0, LaneDomain::Integers, "e")], vec![], vec![TailRule::new(0, 0, 0, 1)], "B")
}

/// `Vf = f`, `Ve_i = e_{i+1}`.
pub fn example_fixed_plus_shift() -> StructuredIsometry {
    build(
        vec![LaneSpec::labelled(0, LaneDomain::Finite(1), "f"), LaneSpec::labelled(1, LaneDomain::Naturals, "e")],
        vec![(BasisIndex::new(0, 0), e(0, 0))],
        vec![TailRule::new(1, 0, 1, 1)],
        "V",
    )
}

/// Two-cycle on a finite lane plus a unilateral shift.
pub fn cycle_plus_shift() -> StructuredIsometry {
    build(
        vec![LaneSpec::labelled(0, LaneDomain::Finite(2), "c"), LaneSpec::labelled(1, LaneDomain::Naturals, "e")],
        vec![(BasisIndex::new(0, 0), e(0, 1)), (BasisIndex::new(0, 1), e(0, 0))],
        vec![TailRule::new(1, 0, 1, 1)],
        "C2+S",
    )
}

/// Bilateral shift plus a unilateral shift.
pub fn bilateral_plus_shift() -> StructuredIsometry {
    build(
        vec![LaneSpec::labelled(0, LaneDomain::Integers, "b"), LaneSpec::labelled(1, LaneDomain::Naturals, "e")],
        vec![],
        vec![TailRule::new(0, 0, 0, 1), TailRule::new(1, 0, 1, 1)],
        "B+S",
    )
}

/// `S^2` with the first column replaced by `(e_1 + e_2)/sqrt 2`, so one
/// vector of `ker V*` is spread over two positions.
pub fn rotated_shift() -> StructuredIsometry {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    build(
        vec![LaneSpec::labelled(0, LaneDomain::Naturals, "e")],
        vec![(BasisIndex::new(0, 0), HVector::from_real([(BasisIndex::new(0, 1), r), (BasisIndex::new(0, 2), r)]))],
        vec![TailRule::new(0, 1, 0, 2)],
        "R",
    )
}

/// Two commuting, doubly commuting non-unitary isometries on two naturals
/// lanes: `S (+) I` and `I (+) S`. Stand-in for the tensor pair, whose
/// adjoint kernels are infinite-dimensional and so have no structured form.
pub fn doubly_commuting_pair() -> (StructuredIsometry, StructuredIsometry) {
    let lanes =
        vec![LaneSpec::labelled(0, LaneDomain::Naturals, "x"), LaneSpec::labelled(1, LaneDomain::Naturals, "y")];
    let v1 = build(lanes.clone(), vec![], vec![TailRule::new(0, 0, 0, 1), TailRule::new(1, 0, 1, 0)], "S+I");
    let v2 = build(lanes, vec![], vec![TailRule::new(0, 0, 0, 0), TailRule::new(1, 0, 1, 1)], "I+S");
    (v1, v2)
}

/// Default arc for the three-piece spectral example: `[0, 0.6)` turns.
pub fn default_alpha() -> Arc {
    Arc::from_f64(0.0, 0.6).expect("valid arc")
}

/// `L^2(alpha) (+) L^2(2 alpha) (+) L^2(alpha)`; requires `alpha` and its
/// double to cover the circle.
pub fn example_kerchy(alpha: Arc) -> Result<SpectralUnitary> {
    let doubled = crate::spectral::arc_double(&alpha);
    let mut union = vec![alpha];
    union.extend(doubled.iter().copied());
    if multiplicity_profile(&SpectralUnitary::from_arcs(union)).min() == 0 {
        return Err(Error::MalformedInput(format!("{alpha} and its double do not cover the circle")));
    }
    let mut pieces = vec![alpha];
    pieces.extend(doubled);
    pieces.push(alpha);
    Ok(SpectralUnitary::from_arcs(pieces))
}

/// Multiplication by `z` on `L^2(alpha)` for a proper arc.
pub fn arc_restriction(alpha: Arc) -> SpectralUnitary {
    SpectralUnitary::from_arcs(vec![alpha])
}

/// An isometry with unitary part `L^2(alpha)` and a shift part with
/// `shift_generators` wandering generators, described spectrally.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalExample {
    pub alpha: Arc,
    pub shift_generators: usize,
    pub unitary_part: SpectralUnitary,
    /// The minimal unitary extension: each shift generator contributes a
    /// full circle.
    pub extension: SpectralUnitary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinalReport {
    pub unitary_has_wandering_vector: bool,
    pub uncovered: Vec<Arc>,
    /// `H_ws = H_s (+) W_u` and `W_u` is spanned by wandering vectors of
    /// the unitary part, so equality holds iff that part has none.
    pub h_ws_equals_h_s: bool,
    pub extension_profile: MultiplicityProfile,
    pub extension_cover_layers: Option<usize>,
}

pub fn example_final(alpha: Arc, shift_generators: usize) -> Result<FinalExample> {
    if alpha.is_full() {
        return Err(Error::MalformedInput("the unitary part needs a proper arc".into()));
    }
    if shift_generators == 0 {
        return Err(Error::MalformedInput("at least one shift generator is needed".into()));
    }
    let unitary_part = arc_restriction(alpha);
    let extension = extend_with_shift(&unitary_part, shift_generators);
    Ok(FinalExample { alpha, shift_generators, unitary_part, extension })
}

impl FinalExample {
    pub fn report(&self) -> FinalReport {
        let wandering = has_wandering_vector(&self.unitary_part);
        let has = wandering.is_ok();
        FinalReport {
            unitary_has_wandering_vector: has,
            uncovered: wandering.err().unwrap_or_default(),
            h_ws_equals_h_s: !has,
            extension_profile: multiplicity_profile(&self.extension),
            extension_cover_layers: bilateral_cover(&self.extension).ok().map(|c| c.layers.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    Operator(StructuredIsometry),
    Pair(StructuredIsometry, StructuredIsometry),
    Spectral(SpectralUnitary),
    Final(FinalExample),
}

impl Fixture {
    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::Operator(_) => "operator",
            Fixture::Pair(..) => "pair",
            Fixture::Spectral(_) => "spectral",
            Fixture::Final(_) => "final",
        }
    }

    /// Every structured isometry in the fixture.
    pub fn operators(&self) -> Vec<&StructuredIsometry> {
        match self {
            Fixture::Operator(v) => vec![v],
            Fixture::Pair(a, b) => vec![a, b],
            _ => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub fixture: Fixture,
    /// Operation name -> expected result at [`DEFAULT_DEPTH`].
    pub expected: BTreeMap<String, Value>,
}

fn expected(pairs: Value) -> BTreeMap<String, Value> {
    match pairs {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}

fn operator(name: &'static str, v: StructuredIsometry, exp: Value) -> CatalogEntry {
    CatalogEntry { name, fixture: Fixture::Operator(v), expected: expected(exp) }
}

fn pair(name: &'static str, (v1, v2): (StructuredIsometry, StructuredIsometry), exp: Value) -> CatalogEntry {
    CatalogEntry { name, fixture: Fixture::Pair(v1, v2), expected: expected(exp) }
}

/// All catalog entries.
pub fn fixtures() -> Vec<CatalogEntry> {
    let alpha = default_alpha();
    vec![
        operator(
            "shift",
            shift(1),
            json!({"kernel_dim": 1, "unitary_window_dim": 0, "wold_exact": true, "h0_dim": 0, "unitary": false}),
        ),
        operator(
            "shift_2",
            shift(2),
            json!({"kernel_dim": 2, "unitary_window_dim": 0, "wold_exact": true, "h0_dim": 0, "unitary": false}),
        ),
        operator(
            "shift_power_2",
            shift_power(2),
            json!({"kernel_dim": 2, "unitary_window_dim": 0, "wold_exact": true, "h0_dim": 0, "unitary": false}),
        ),
        operator(
            "shift_power_3",
            shift_power(3),
            json!({"kernel_dim": 3, "unitary_window_dim": 0, "wold_exact": true, "h0_dim": 0, "unitary": false}),
        ),
        operator(
            "bilateral",
            bilateral(),
            json!({"kernel_dim": 0, "unitary_window_dim": 64, "wold_exact": true, "h0_dim": 0, "unitary": true}),
        ),
        operator(
            "fixed_plus_shift",
            example_fixed_plus_shift(),
            json!({"kernel_dim": 1, "unitary_window_dim": 1, "wold_exact": true, "h0_dim": 1, "unitary": false}),
        ),
        operator(
            "cycle_plus_shift",
            cycle_plus_shift(),
            json!({"kernel_dim": 1, "unitary_window_dim": 2, "wold_exact": true, "h0_dim": 2, "unitary": false}),
        ),
        operator(
            "bilateral_plus_shift",
            bilateral_plus_shift(),
            json!({"kernel_dim": 1, "unitary_window_dim": 32, "wold_exact": true, "h0_dim": 0, "unitary": false}),
        ),
        operator(
            "rotated_shift",
            rotated_shift(),
            json!({"kernel_dim": 2, "unitary_window_dim": 0, "wold_exact": true, "h0_dim": 0, "unitary": false}),
        ),
        pair(
            "s2_s3",
            (shift_power(2), shift_power(3)),
            json!({
            "commutes": "true", "doubly_commutes": "false", "weak_bishift": "true",
            "uu_dim": 0, "us_dim": 0, "su_dim": 0, "ws_dim": 64, "exhaust_iterations": 0}),
        ),
        pair(
            "doubly_commuting",
            doubly_commuting_pair(),
            json!({
            "commutes": "true", "doubly_commutes": "true", "weak_bishift": "false",
            "uu_dim": 0, "us_dim": 32, "su_dim": 32, "ws_dim": 0, "exhaust_iterations": 1}),
        ),
        pair(
            "bilateral_pair",
            (bilateral(), bilateral()),
            json!({
            "commutes": "true", "doubly_commutes": "true", "weak_bishift": "false",
            "uu_dim": 64, "us_dim": 0, "su_dim": 0, "ws_dim": 0, "exhaust_iterations": 0}),
        ),
        pair(
            "shift_pair",
            (shift(1), shift(1)),
            json!({
            "commutes": "true", "doubly_commutes": "false", "weak_bishift": "true",
            "uu_dim": 0, "us_dim": 0, "su_dim": 0, "ws_dim": 64, "exhaust_iterations": 0}),
        ),
        pair(
            "fixed_pair",
            (example_fixed_plus_shift(), example_fixed_plus_shift()),
            json!({
            "commutes": "true", "doubly_commutes": "false", "weak_bishift": "false",
            "uu_dim": 1, "us_dim": 0, "su_dim": 0, "ws_dim": 63, "exhaust_iterations": 1}),
        ),
        pair(
            "cycle_pair",
            (cycle_plus_shift(), cycle_plus_shift()),
            json!({
            "commutes": "true", "doubly_commutes": "false", "weak_bishift": "false",
            "uu_dim": 2, "us_dim": 0, "su_dim": 0, "ws_dim": 62, "exhaust_iterations": 1}),
        ),
        CatalogEntry {
            name: "kerchy",
            fixture: Fixture::Spectral(example_kerchy(alpha).expect("default arc covers")),
            expected: expected(json!({
                "profile": {"breakpoints": [0.0, 0.6], "values": [3, 1], "atoms": []},
                "bilateral_shift": "non-constant multiplicity",
                "has_wandering_vector": true,
                "cover_layers": 3})),
        },
        CatalogEntry {
            name: "arc_restriction",
            fixture: Fixture::Spectral(arc_restriction(alpha)),
            expected: expected(json!({
                "profile": {"breakpoints": [0.0, 0.6], "values": [1, 0], "atoms": []},
                "bilateral_shift": "support not full circle",
                "has_wandering_vector": false,
                "cover_layers": null})),
        },
        CatalogEntry {
            name: "final_example",
            fixture: Fixture::Final(example_final(alpha, 1).expect("proper arc")),
            expected: expected(json!({
                "unitary_has_wandering_vector": false,
                "h_ws_equals_h_s": true,
                "extension_profile": {"breakpoints": [0.0, 0.6], "values": [2, 1], "atoms": []},
                "extension_cover_layers": 2})),
        },
    ]
}

pub fn names() -> Vec<&'static str> {
    fixtures().into_iter().map(|e| e.name).collect()
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    fixtures().into_iter().find(|e| e.name == name)
}

fn profile_value(p: &MultiplicityProfile) -> Value {
    serde_json::to_value(ProfileJson::from(p)).expect("profile serializes")
}

/// Recompute every quantity an entry's `expected` map can name.
pub fn evaluate(fixture: &Fixture, depth: usize) -> Result<BTreeMap<String, Value>> {
    let mut out = BTreeMap::new();
    let mut put = |k: &str, v: Value| {
        out.insert(k.to_string(), v);
    };
    match fixture {
        Fixture::Operator(v) => {
            let wold = wold_decompose(v, depth);
            let split = wandering_span_decompose(v, depth);
            put("kernel_dim", json!(wold.shift_wandering_basis.len()));
            put("unitary_window_dim", json!(wold.unitary_window_basis.len()));
            put("wold_exact", json!(wold.exact));
            put("h0_dim", json!(split.h0.dim()));
            put("unitary", json!(is_unitary(v)));
        }
        Fixture::Pair(v1, v2) => {
            put("commutes", json!(commutes(v1, v2, depth)?.verdict.as_str()));
            put("doubly_commutes", json!(doubly_commutes(v1, v2, depth)?.verdict.as_str()));
            put("weak_bishift", json!(weak_bishift_classify(v1, v2, depth)?.verdict.as_str()));
            let report = pair_decompose(v1, v2, depth)?;
            for (name, part) in report.parts() {
                put(&format!("{name}_dim"), json!(part.subspace.dim()));
            }
            put("exhaust_iterations", json!(exhaust_h0(v1, v2, 8, depth)?.iterations));
        }
        Fixture::Spectral(u) => {
            put("profile", profile_value(&multiplicity_profile(u)));
            put(
                "bilateral_shift",
                match is_bilateral_shift(u) {
                    Ok(_) => json!(true),
                    Err(reason) => json!(reason.to_string()),
                },
            );
            put("has_wandering_vector", json!(has_wandering_vector(u).is_ok()));
            put("cover_layers", json!(bilateral_cover(u).ok().map(|c| c.layers.len())));
        }
        Fixture::Final(f) => {
            let r = f.report();
            put("unitary_has_wandering_vector", json!(r.unitary_has_wandering_vector));
            put("h_ws_equals_h_s", json!(r.h_ws_equals_h_s));
            put("extension_profile", profile_value(&r.extension_profile));
            put("extension_cover_layers", json!(r.extension_cover_layers));
        }
    }
    Ok(out)
}

/// Expected keys whose recomputed value differs, as `(key, expected, actual)`.
pub fn check(entry: &CatalogEntry) -> Result<Vec<(String, Value, Value)>> {
    let actual = evaluate(&entry.fixture, DEFAULT_DEPTH)?;
    Ok(entry
        .expected
        .iter()
        .filter(|(k, v)| actual.get(*k) != Some(v))
        .map(|(k, v)| (k.clone(), v.clone(), actual.get(k).cloned().unwrap_or(Value::Null)))
        .collect())
}

// Synthetic fixtures

const UNIT_COEFFICIENTS: [(f64, f64); 6] = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (0.5, 0.5), (-0.5, 0.5)];

fn random_coefficient<R: Rng>(rng: &mut R) -> Complex64 {
    let (re, im) = UNIT_COEFFICIENTS[rng.gen_range(0..UNIT_COEFFICIENTS.len())];
    Complex64::new(re, im)
}

/// A random structured isometry: up to four lanes of mixed domains, tail
/// rules permuting the naturals lanes among themselves and the integer
/// lanes among themselves, and random sparse orthonormal columns on the
/// indices the tails leave out.
pub fn random_isometry<R: Rng>(rng: &mut R) -> StructuredIsometry {
    let lane_count = rng.gen_range(1..=4u32);
    let lanes: Vec<LaneSpec> = (0..lane_count)
        .map(|id| {
            let domain = match rng.gen_range(0..4) {
                0 => LaneDomain::Finite(rng.gen_range(1..=3)),
                1 => LaneDomain::Integers,
                _ => LaneDomain::Naturals,
            };
            LaneSpec::new(id, domain)
        })
        .collect();

    let mut tails = Vec::new();
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for domain in [LaneDomain::Naturals, LaneDomain::Integers] {
        let ids: Vec<u32> = lanes.iter().filter(|l| l.domain == domain).map(|l| l.id.0).collect();
        let mut perm = ids.clone();
        perm.shuffle(rng);
        for (src, dst) in ids.into_iter().zip(perm) {
            let t = rng.gen_range(0..=3i64);
            let (threshold, offset) = match domain {
                LaneDomain::Naturals => (t, rng.gen_range(0..=2i64)),
                _ => (t.max(1), rng.gen_range(-2..=2i64)),
            };
            let phase = Phase::from_turns(f64::from(rng.gen_range(0..4u8)) / 4.0);
            tails.push(TailRule::new(src, threshold, dst, offset).with_phase(phase));
            // indices below the threshold need explicit columns
            match domain {
                LaneDomain::Naturals => {
                    sources.extend((0..threshold).map(|p| BasisIndex::new(src, p)));
                    targets.extend((0..threshold + offset).map(|p| BasisIndex::new(dst, p)));
                }
                _ => {
                    sources.extend((1 - threshold..threshold).map(|p| BasisIndex::new(src, p)));
                    targets.extend((offset - threshold + 1..offset + threshold).map(|p| BasisIndex::new(dst, p)));
                }
            }
        }
    }
    for lane in &lanes {
        if let LaneDomain::Finite(n) = lane.domain {
            sources.extend((0..i64::from(n)).map(|p| BasisIndex::new(lane.id.0, p)));
            targets.extend((0..i64::from(n)).map(|p| BasisIndex::new(lane.id.0, p)));
        }
    }

    let mut candidates: Vec<HVector> = (0..sources.len())
        .map(|_| {
            let k = rng.gen_range(1..=3usize.min(targets.len().max(1)));
            HVector::from_entries(
                targets.choose_multiple(rng, k).map(|idx| (*idx, random_coefficient(rng))).collect::<Vec<_>>(),
            )
        })
        .collect();
    candidates.extend(targets.iter().copied().map(HVector::basis));
    let basis = gram_schmidt(candidates.iter());
    let columns = sources.into_iter().zip(basis).collect();
    StructuredIsometry::new(lanes, columns, tails).expect("generated isometries are valid").with_name("random")
}

/// A random vector with up to `max_support` entries, positions within
/// `spread` of the origin.
pub fn random_vector<R: Rng>(rng: &mut R, v: &StructuredIsometry, max_support: usize, spread: i64) -> HVector {
    let lanes = v.lanes();
    loop {
        let n = rng.gen_range(1..=max_support);
        let x = HVector::from_entries(
            (0..n)
                .map(|_| {
                    let lane = &lanes[rng.gen_range(0..lanes.len())];
                    let position = match lane.domain {
                        LaneDomain::Finite(k) => rng.gen_range(0..i64::from(k)),
                        LaneDomain::Naturals => rng.gen_range(0..=spread),
                        LaneDomain::Integers => rng.gen_range(-spread..=spread),
                    };
                    (BasisIndex { lane: lane.id, position }, random_coefficient(rng))
                })
                .collect::<Vec<_>>(),
        );
        if !x.is_zero() {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_entry_reproduces_its_expected_values() {
        for entry in fixtures() {
            let mismatches = check(&entry).unwrap();
            assert!(mismatches.is_empty(), "{}: {:?}", entry.name, mismatches);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut n = names();
        let len = n.len();
        n.sort();
        n.dedup();
        assert_eq!(n.len(), len);
    }

    #[test]
    fn kerchy_rejects_short_arc() {
        assert!(example_kerchy(Arc::from_f64(0.0, 0.3).unwrap()).is_err());
        assert!(example_kerchy(Arc::from_f64(0.5, 0.5).unwrap()).is_ok());
    }

    #[test]
    fn random_isometries_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let v = random_isometry(&mut rng);
            let x = random_vector(&mut rng, &v, 4, 6);
            let vx = v.apply(&x).unwrap();
            assert!((vx.norm() - x.norm()).abs() < 1e-9);
        }
    }
}
