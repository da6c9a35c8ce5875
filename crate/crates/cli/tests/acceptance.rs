//! Acceptance suite: one pass/fail line per criterion, tolerance 1e-9.
//! Runs without the libtest harness so the lines always reach stdout.

#[path = "../../core/tests/support/dense.rs"]
mod dense;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use woldlab_core::catalog::{self, Fixture};
use woldlab_core::spectral::{bilateral_cover, has_wandering_vector, is_bilateral_shift, multiplicity_profile};
use woldlab_core::wold::strongly_wandering_span;
use woldlab_core::{
    commutes, doubly_commutes, h0_plus, is_strongly_wandering, is_wandering, pair_decompose, wandering_span_decompose,
    weak_bishift_classify, wold_decompose, BasisIndex, Certificate, HVector, MultiplicityProfile, StructuredIsometry,
    Verdict, Witness,
};

const TOL: f64 = 1e-9;
const DEPTH: usize = 64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn certified_true(c: &Certificate) -> bool {
    c.verdict == Verdict::True && c.exact
}

fn operators() -> Vec<(&'static str, StructuredIsometry)> {
    catalog::fixtures()
        .into_iter()
        .filter_map(|e| match e.fixture {
            Fixture::Operator(v) => Some((e.name, v)),
            _ => None,
        })
        .collect()
}

fn commuting_pairs() -> Vec<(&'static str, StructuredIsometry, StructuredIsometry)> {
    catalog::fixtures()
        .into_iter()
        .filter_map(|e| match e.fixture {
            Fixture::Pair(a, b) => Some((e.name, a, b)),
            _ => None,
        })
        .filter(|(_, a, b)| commutes(a, b, DEPTH).is_ok_and(|c| certified_true(&c)))
        .collect()
}

fn coefficient(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if c.norm() > 0.1 {
            return c;
        }
    }
}

fn criterion_1() -> Outcome {
    let v = catalog::example_fixed_plus_shift();
    let f = HVector::basis(BasisIndex::new(0, 0));
    let e0 = HVector::basis(BasisIndex::new(1, 0));
    let w = wold_decompose(&v, DEPTH);
    ensure(w.exact, "wold not exact")?;
    ensure(
        w.unitary_window_basis.len() == 1 && w.unitary_window_basis[0].inner(&f).norm() >= 1.0 - TOL,
        "H_u is not span{f}",
    )?;
    ensure(
        w.shift_wandering_basis.len() == 1 && w.shift_wandering_basis[0].inner(&e0).norm() >= 1.0 - TOL,
        "shift wandering basis is not {e0}",
    )?;
    let split = wandering_span_decompose(&v, DEPTH);
    ensure(split.h0.dim() == 1 && split.h0.contains(&f), "H_0 is not span{f}")?;
    ensure(certified_true(&split.certificate), "H_0 split not certified")?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_n = 0;
    for k in 0..100 {
        let count = rng.gen_range(0..=5);
        let positions: Vec<i64> = (0..count).map(|_| rng.gen_range(0..=12)).collect();
        let mut entries: Vec<(BasisIndex, Complex64)> =
            positions.iter().map(|p| (BasisIndex::new(1, *p), coefficient(&mut rng))).collect();
        entries.push((BasisIndex::new(0, 0), coefficient(&mut rng)));
        let x = HVector::from_entries(entries);
        let diameter = match (positions.iter().min(), positions.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        };
        let c = is_wandering(&v, &x, DEPTH).map_err(|e| e.to_string())?;
        let Some(Witness::Exponent { n }) = c.witness else {
            return Err(format!("candidate {k} ({x}): no exponent witness, verdict {:?}", c.verdict));
        };
        ensure(c.verdict == Verdict::False && c.exact, format!("candidate {k}: not an exact false"))?;
        ensure(n <= diameter + 1, format!("candidate {k}: witness {n} beyond diameter {diameter} + 1"))?;
        worst_n = worst_n.max(n);
    }
    Ok(format!(
        "H_u = span{{f}}, ker V* = span{{e0}}, H_0 = span{{f}}; 100 candidates refuted, largest witness n = {worst_n}"
    ))
}

fn criterion_2() -> Outcome {
    let u = catalog::example_kerchy(catalog::default_alpha()).map_err(|e| e.to_string())?;
    let profile = multiplicity_profile(&u);
    let turn = |x: f64| woldlab_core::spectral::turn_from_f64(x);
    ensure(
        profile.breakpoints == vec![turn(0.0), turn(0.6)] && profile.values == vec![3, 1] && profile.atoms.is_empty(),
        format!("profile {:?} on {:?}", profile.values, profile.breakpoints),
    )?;
    match is_bilateral_shift(&u) {
        Ok(m) => return Err(format!("reported a bilateral shift of multiplicity {m}")),
        Err(reason) => ensure(reason.to_string() == "non-constant multiplicity", format!("reason {reason}"))?,
    }
    let cover = bilateral_cover(&u).map_err(|e| format!("cover refused: {e}"))?;
    ensure(cover.layers.len() == 3, format!("{} layers", cover.layers.len()))?;
    let mut sum = MultiplicityProfile::constant(0);
    for (k, layer) in cover.layers.iter().enumerate() {
        ensure(is_bilateral_shift(&layer.as_unitary()).is_ok(), format!("layer {k} is not a bilateral shift"))?;
        sum = sum.plus(&layer.fresh_profile());
    }
    ensure(sum == profile, "fresh layer profiles do not sum to the input profile")?;
    Ok("profile 3 on [0, 0.6), 1 on [0.6, 1); not a bilateral shift (non-constant multiplicity); 3 shift layers summing to the profile".into())
}

fn criterion_3() -> Outcome {
    let alpha = catalog::default_alpha();
    let uncovered =
        has_wandering_vector(&catalog::arc_restriction(alpha)).err().ok_or("proper arc reported a wandering vector")?;
    let example = catalog::example_final(alpha, 1).map_err(|e| e.to_string())?;
    let report = example.report();
    ensure(!report.unitary_has_wandering_vector, "unitary part has a wandering vector")?;
    ensure(report.h_ws_equals_h_s, "H_ws differs from H_s")?;
    Ok(format!("no wandering vector on the arc ({} uncovered arc); H_ws = H_s", uncovered.len()))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut norm_dev, mut inverse_dev, mut orth_dev) = (0.0f64, 0.0f64, 0.0f64);
    let count = 500;
    for _ in 0..count {
        let v = catalog::random_isometry(&mut rng);
        for _ in 0..4 {
            let x = catalog::random_vector(&mut rng, &v, 6, 10);
            let vx = v.apply(&x).map_err(|e| e.to_string())?;
            norm_dev = norm_dev.max((vx.norm() - x.norm()).abs());
            inverse_dev = inverse_dev.max(v.apply_adjoint(&vx).map_err(|e| e.to_string())?.distance(&x));
        }
        let w = wold_decompose(&v, DEPTH);
        // shift_orbit holds V^n k for every kernel vector k and n <= DEPTH
        for u in &w.unitary_window_basis {
            for k in &w.shift_orbit {
                orth_dev = orth_dev.max(u.inner(k).norm());
            }
        }
    }
    ensure(norm_dev <= TOL, format!("norm deviation {norm_dev:e}"))?;
    ensure(inverse_dev <= TOL, format!("V*V deviation {inverse_dev:e}"))?;
    ensure(orth_dev <= TOL, format!("unitary basis overlap {orth_dev:e}"))?;
    Ok(format!(
        "{count} random isometries: max | ||Vx|| - ||x|| | = {norm_dev:.1e}, max ||V*Vx - x|| = {inverse_dev:.1e}, max overlap = {orth_dev:.1e}"
    ))
}

/// Certified strongly wandering; the zero vector counts as such.
fn strongly(v: &StructuredIsometry, x: &HVector) -> Result<Option<bool>, String> {
    if x.is_zero() {
        return Ok(Some(true));
    }
    let c = is_strongly_wandering(v, x, DEPTH).map_err(|e| e.to_string())?;
    Ok(match c.verdict {
        Verdict::False => Some(false),
        Verdict::True if c.exact => Some(true),
        _ => None,
    })
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for (name, v) in operators() {
        let split = wandering_span_decompose(&v, DEPTH);
        let wold = &split.wold;
        ensure(wold.exact, format!("{name}: wold not exact"))?;
        let mut candidates: Vec<HVector> = wold.shift_wandering_basis.clone();
        candidates.extend(split.unitary_generators.iter().cloned());
        let gens = candidates.clone();
        for _ in 0..20 {
            candidates.push(catalog::random_vector(&mut rng, &v, 4, 6));
        }
        for _ in 0..10 {
            if gens.is_empty() {
                break;
            }
            let a = &gens[rng.gen_range(0..gens.len())];
            let b = &gens[rng.gen_range(0..gens.len())];
            candidates.push(a.axpy(coefficient(&mut rng), b));
        }
        for x in candidates.iter().filter(|x| !x.is_zero()) {
            let s = wold.shift_component(x);
            let u = wold.unitary_component(x);
            let whole = strongly(&v, x)?;
            let parts = match (strongly(&v, &s)?, strongly(&v, &u)?) {
                (Some(a), Some(b)) => Some(a && b),
                (Some(false), None) | (None, Some(false)) => Some(false),
                _ => None,
            };
            let (Some(whole), Some(parts)) = (whole, parts) else {
                return Err(format!("{name}: {x} left undecided"));
            };
            ensure(whole == parts, format!("{name}: {x} whole {whole}, components {parts}"))?;
            checked += 1;
        }
        let hs = wold.shift_span();
        let w = strongly_wandering_span(&split);
        ensure(hs.overlap(&split.hw_unitary) <= TOL, format!("{name}: H_s and W_u overlap"))?;
        ensure(w.dim() == hs.dim() + split.hw_unitary.dim(), format!("{name}: dim W != dim H_s + dim W_u"))?;
        for g in hs.generators().iter().chain(split.hw_unitary.generators()) {
            ensure(w.residual(g).norm() <= TOL, format!("{name}: W misses a generator"))?;
        }
    }
    Ok(format!("{checked} vectors over the catalog operators agree with their Wold components; W = H_s (+) W_u"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut lines = Vec::new();
    for (name, v1, v2) in commuting_pairs() {
        let wold = wold_decompose(&v1, DEPTH);
        let split = wandering_span_decompose(&v1, DEPTH);
        let mut generators = wold.shift_wandering_basis.clone();
        generators.extend(split.unitary_generators.iter().cloned());
        let mut certified = 0;
        for k in 0..100 {
            // even samples come from wandering generators, odd ones are random
            let x = if k % 2 == 0 && !wold.shift_wandering_basis.is_empty() {
                let basis = &wold.shift_wandering_basis;
                let mut x = HVector::zero();
                for b in basis {
                    x = x.axpy(coefficient(&mut rng), b);
                }
                x
            } else if k % 2 == 0 && !generators.is_empty() {
                generators[rng.gen_range(0..generators.len())].scale(coefficient(&mut rng))
            } else {
                catalog::random_vector(&mut rng, &v1, 4, 6)
            };
            if x.is_zero() || !certified_true(&is_wandering(&v1, &x, DEPTH).map_err(|e| e.to_string())?) {
                continue;
            }
            let image = v2.apply(&x).map_err(|e| e.to_string())?;
            let c = is_wandering(&v1, &image, DEPTH).map_err(|e| e.to_string())?;
            ensure(certified_true(&c), format!("{name}: image of {x} is {:?}", c.verdict))?;
            certified += 1;
        }
        ensure(certified > 0, format!("{name}: no certified wandering samples"))?;
        lines.push(format!("{name} {certified}"));
    }
    Ok(format!("images stay wandering (pair, certified samples of 100): {}", lines.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (name, v1, v2) in commuting_pairs() {
        let split = wandering_span_decompose(&v1, DEPTH);
        let h = h0_plus(&v1, &v2, &split.h0, DEPTH).map_err(|e| format!("{name}: {e}"))?;
        for (what, d) in [
            ("V1 reducing", h.v1_reducing_defect),
            ("V2 reducing", h.v2_reducing_defect),
            ("V1 unitary", h.v1_unitary_defect),
        ] {
            ensure(d <= TOL, format!("{name}: {what} defect {d:e}"))?;
            worst = worst.max(d);
        }
        count += 1;
    }
    let v = catalog::example_fixed_plus_shift();
    let split = wandering_span_decompose(&v, DEPTH);
    let h = h0_plus(&v, &v, &split.h0, DEPTH).map_err(|e| e.to_string())?;
    let f = HVector::basis(BasisIndex::new(0, 0));
    ensure(h.subspace.dim() == 1 && h.subspace.contains(&f), format!("H_0+ has dim {}", h.subspace.dim()))?;
    ensure(certified_true(&h.certificate), "H_0+ for the example is not exact")?;
    Ok(format!("{count} commuting pairs, largest defect {worst:.1e}; example pair gives H_0+ = span{{f}} exactly"))
}

fn criterion_8() -> Outcome {
    let s2 = catalog::shift_power(2);
    let s3 = catalog::shift_power(3);
    ensure(certified_true(&commutes(&s2, &s3, DEPTH).map_err(|e| e.to_string())?), "S2, S3 do not commute")?;
    let dc = doubly_commutes(&s2, &s3, DEPTH).map_err(|e| e.to_string())?;
    ensure(
        dc.verdict == Verdict::False && dc.witness == Some(Witness::Index { index: BasisIndex::new(0, 0) }),
        format!("doubly_commutes {:?} witness {:?}", dc.verdict, dc.witness),
    )?;
    let wb = weak_bishift_classify(&s2, &s3, DEPTH).map_err(|e| e.to_string())?;
    ensure(certified_true(&wb), format!("weak bi-shift {:?}", wb.verdict))?;
    let r = pair_decompose(&s2, &s3, DEPTH).map_err(|e| e.to_string())?;
    ensure(
        r.uu.subspace.is_zero() && r.us.subspace.is_zero() && r.su.subspace.is_zero(),
        format!("uu/us/su dims {}/{}/{}", r.uu.subspace.dim(), r.us.subspace.dim(), r.su.subspace.dim()),
    )?;
    let (a, b) = catalog::doubly_commuting_pair();
    let grid = doubly_commutes(&a, &b, DEPTH).map_err(|e| e.to_string())?;
    ensure(certified_true(&grid), format!("grid stand-in {:?}", grid.verdict))?;
    let bl = catalog::bilateral();
    let bb = weak_bishift_classify(&bl, &bl, DEPTH).map_err(|e| e.to_string())?;
    ensure(bb.verdict == Verdict::False, format!("(B, B) weak bi-shift {:?}", bb.verdict))?;
    Ok("(S2, S3): commute, not doubly (witness e0), weak bi-shift, uu = us = su = 0; grid stand-in doubly commutes; (B, B) not a weak bi-shift".into())
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (name, v) in operators() {
        let window = woldlab_core::window::window_indices(v.lanes(), 64);
        let dev = dense::gram_deviation(&v, &window, 16);
        ensure(dev <= TOL, format!("{name}: deviation {dev:e}"))?;
        worst = worst.max(dev);
        count += 1;
    }
    Ok(format!("{count} catalog operators, n, m <= 16 on a 64-dim window, largest deviation {worst:.1e}"))
}

fn run_cli(args: &[&str]) -> Result<(Vec<u8>, Option<i32>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_woldlab"))
        .args(args)
        .env_remove("WOLDLAB_TOLERANCE")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code()))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let kerchy = dir.path().join("kerchy.json");
    let (text, _) = run_cli(&["catalog", "--input", "catalog:kerchy"])?;
    std::fs::write(&kerchy, text).map_err(|e| e.to_string())?;
    let op = dir.path().join("cycle.op");
    let (text, _) = run_cli(&["catalog", "--input", "catalog:cycle_plus_shift"])?;
    std::fs::write(&op, text).map_err(|e| e.to_string())?;
    let kerchy = kerchy.to_str().ok_or("temp path")?;
    let op = op.to_str().ok_or("temp path")?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["wold", "--input", "catalog:fixed_plus_shift", "--depth", "64", "--format", "json"],
        vec!["wold", "--input", "catalog:rotated_shift"],
        vec!["wold", "--input", op],
        vec!["wander", "--input", "catalog:bilateral", "--vector", "0:0=1", "--strong"],
        vec!["wander", "--input", op, "--vector", "0:0=1,1:2=0.5-0.5i"],
        vec!["pair", "--input", "catalog:s2_s3"],
        vec!["pair", "--input", "catalog:fixed_pair"],
        vec!["spectral", "--input", kerchy],
        vec!["spectral", "--input", "catalog:final_example"],
        vec!["catalog"],
    ];
    for args in &commands {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        ensure(first.1.is_some_and(|c| c == 0 || c == 2), format!("{args:?} exited with {:?}", first.1))?;
        ensure(serde_json::from_slice::<serde_json::Value>(&first.0).is_ok(), format!("{args:?} did not print JSON"))?;
        ensure(first == second, format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} commands, each run twice: identical bytes and exit codes", commands.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fixed-plus-shift example", criterion_1),
        ("Kerchy example", criterion_2),
        ("final example", criterion_3),
        ("Wold invariants on random isometries", criterion_4),
        ("strongly wandering splitting", criterion_5),
        ("commuting images of wandering vectors", criterion_6),
        ("H_0+ certificates", criterion_7),
        ("pair suite", criterion_8),
        ("dense oracle", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
