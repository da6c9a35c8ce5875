//! Serializable reports. Field order is fixed and maps are ordered, so the
//! same analysis always serializes to the same bytes.

use serde::Serialize;

use crate::catalog::FinalReport;
use crate::certificate::{Certificate, Verdict, Witness};
use crate::pairs::{Exhaustion, PairPart, PairReport};
use crate::spectral::{
    bilateral_cover, has_wandering_vector, is_bilateral_shift, multiplicity_profile, turn_to_f64, Arc, ProfileJson,
    SpectralJson, SpectralUnitary,
};
use crate::subspace::Subspace;
use crate::vector::HVector;
use crate::wold::{WanderingSplit, WoldResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryJson {
    pub lane: u32,
    pub position: i64,
    pub re: f64,
    pub im: f64,
}

pub fn vector_json(x: &HVector) -> Vec<EntryJson> {
    x.iter().map(|(i, c)| EntryJson { lane: i.lane.0, position: i.position, re: c.re, im: c.im }).collect()
}

pub fn basis_json(vectors: &[HVector]) -> Vec<Vec<EntryJson>> {
    vectors.iter().map(vector_json).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateJson {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub horizon: usize,
    pub exact: bool,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        CertificateJson { verdict: c.verdict, witness: c.witness.clone(), horizon: c.horizon, exact: c.exact }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WoldBases {
    pub shift_wandering: Vec<Vec<EntryJson>>,
    pub unitary_window: Vec<Vec<EntryJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WoldReport {
    pub operator: String,
    pub depth: usize,
    pub window_dim: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub horizon: usize,
    pub exact: bool,
    pub kernel_dim: usize,
    pub unitary_window_dim: usize,
    pub h0_dim: usize,
    pub hw_dim: usize,
    pub h0_reducing_defect: f64,
    pub hw_reducing_defect: f64,
    pub bases: WoldBases,
    pub h0_basis: Vec<Vec<EntryJson>>,
}

impl WoldReport {
    pub fn new(operator: &str, wold: &WoldResult, split: &WanderingSplit) -> Self {
        let c =
            if wold.exact && split.certificate.exact { wold.certificate() } else { Certificate::undecided(wold.depth) };
        WoldReport {
            operator: operator.to_string(),
            depth: wold.depth,
            window_dim: wold.window.len(),
            verdict: c.verdict,
            witness: c.witness,
            horizon: c.horizon,
            exact: c.exact,
            kernel_dim: wold.shift_wandering_basis.len(),
            unitary_window_dim: wold.unitary_window_basis.len(),
            h0_dim: split.h0.dim(),
            hw_dim: split.hw.dim(),
            h0_reducing_defect: split.h0_reducing_defect,
            hw_reducing_defect: split.hw_reducing_defect,
            bases: WoldBases {
                shift_wandering: basis_json(&wold.shift_wandering_basis),
                unitary_window: basis_json(&wold.unitary_window_basis),
            },
            h0_basis: basis_json(split.h0.generators()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WanderReport {
    pub operator: String,
    pub vector: Vec<EntryJson>,
    pub strong: bool,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub horizon: usize,
    pub exact: bool,
}

impl WanderReport {
    pub fn new(operator: &str, x: &HVector, strong: bool, c: &Certificate) -> Self {
        WanderReport {
            operator: operator.to_string(),
            vector: vector_json(x),
            strong,
            verdict: c.verdict,
            witness: c.witness.clone(),
            horizon: c.horizon,
            exact: c.exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartJson {
    pub dim: usize,
    pub basis: Vec<Vec<EntryJson>>,
    pub certificate: CertificateJson,
    pub v1_reducing_defect: f64,
    pub v2_reducing_defect: f64,
}

impl From<&PairPart> for PartJson {
    fn from(p: &PairPart) -> Self {
        PartJson {
            dim: p.subspace.dim(),
            basis: basis_json(p.subspace.generators()),
            certificate: (&p.certificate).into(),
            v1_reducing_defect: p.v1_reducing_defect,
            v2_reducing_defect: p.v2_reducing_defect,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorsJson {
    pub v1: Vec<Vec<EntryJson>>,
    pub v2: Vec<Vec<EntryJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustionJson {
    pub iterations: usize,
    pub h1_dim: usize,
    pub wandering_coverage_residual: f64,
    pub certificate: CertificateJson,
}

impl From<&Exhaustion> for ExhaustionJson {
    fn from(e: &Exhaustion) -> Self {
        ExhaustionJson {
            iterations: e.iterations,
            h1_dim: e.h1.dim(),
            wandering_coverage_residual: e.wandering_coverage_residual,
            certificate: (&e.certificate).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReportJson {
    pub v1: String,
    pub v2: String,
    pub depth: usize,
    pub commutes: CertificateJson,
    pub doubly_commutes: CertificateJson,
    pub weak_bishift: CertificateJson,
    pub completely_non_doubly_commuting: CertificateJson,
    pub uu: PartJson,
    pub us: PartJson,
    pub su: PartJson,
    pub ws: PartJson,
    pub ws_coverage: [f64; 2],
    pub wandering_generators: GeneratorsJson,
    pub exhaustion: ExhaustionJson,
}

/// Certificates gathered for a pair analysis.
pub struct PairVerdicts<'a> {
    pub commutes: &'a Certificate,
    pub doubly_commutes: &'a Certificate,
    pub weak_bishift: &'a Certificate,
    pub completely_non_doubly_commuting: &'a Certificate,
}

impl PairReportJson {
    pub fn new(names: (&str, &str), verdicts: PairVerdicts<'_>, report: &PairReport, exhaustion: &Exhaustion) -> Self {
        PairReportJson {
            v1: names.0.to_string(),
            v2: names.1.to_string(),
            depth: report.depth,
            commutes: verdicts.commutes.into(),
            doubly_commutes: verdicts.doubly_commutes.into(),
            weak_bishift: verdicts.weak_bishift.into(),
            completely_non_doubly_commuting: verdicts.completely_non_doubly_commuting.into(),
            uu: (&report.uu).into(),
            us: (&report.us).into(),
            su: (&report.su).into(),
            ws: (&report.ws).into(),
            ws_coverage: [report.ws_coverage_v1, report.ws_coverage_v2],
            wandering_generators: GeneratorsJson {
                v1: basis_json(&report.wandering_v1),
                v2: basis_json(&report.wandering_v2),
            },
            exhaustion: exhaustion.into(),
        }
    }

    /// Every certificate in the report.
    pub fn certificates(&self) -> Vec<&CertificateJson> {
        vec![
            &self.commutes,
            &self.doubly_commutes,
            &self.weak_bishift,
            &self.completely_non_doubly_commuting,
            &self.uu.certificate,
            &self.us.certificate,
            &self.su.certificate,
            &self.ws.certificate,
            &self.exhaustion.certificate,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcJsonOut {
    pub start: f64,
    pub end: f64,
}

fn arcs_json(arcs: &[Arc]) -> Vec<ArcJsonOut> {
    arcs.iter()
        .map(|a| ArcJsonOut { start: turn_to_f64(a.start()), end: turn_to_f64(a.start() + a.length()) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerJson {
    pub profile: ProfileJson,
    pub fresh_profile: ProfileJson,
    pub bilateral_shift: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverJson {
    pub layers: Option<Vec<LayerJson>>,
    pub refused: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub input: SpectralJson,
    pub profile: ProfileJson,
    pub bilateral_shift: bool,
    pub multiplicity: Option<u32>,
    pub reason: Option<String>,
    pub has_wandering_vector: bool,
    pub uncovered: Vec<ArcJsonOut>,
    pub cover: CoverJson,
}

impl SpectralReport {
    pub fn new(u: &SpectralUnitary) -> Self {
        let shift = is_bilateral_shift(u);
        let wandering = has_wandering_vector(u);
        let cover = match bilateral_cover(u) {
            Ok(c) => CoverJson {
                layers: Some(
                    c.layers
                        .iter()
                        .map(|l| LayerJson {
                            profile: (&multiplicity_profile(&l.as_unitary())).into(),
                            fresh_profile: (&l.fresh_profile()).into(),
                            bilateral_shift: is_bilateral_shift(&l.as_unitary()).is_ok(),
                        })
                        .collect(),
                ),
                refused: None,
            },
            Err(e) => CoverJson { layers: None, refused: Some(e.to_string()) },
        };
        SpectralReport {
            input: u.into(),
            profile: (&multiplicity_profile(u)).into(),
            bilateral_shift: shift.is_ok(),
            multiplicity: shift.ok(),
            reason: shift.err().map(|r| r.to_string()),
            has_wandering_vector: wandering.is_ok(),
            uncovered: arcs_json(&wandering.err().unwrap_or_default()),
            cover,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinalReportJson {
    pub unitary_part: SpectralJson,
    pub shift_generators: usize,
    pub unitary_has_wandering_vector: bool,
    pub uncovered: Vec<ArcJsonOut>,
    pub h_ws_equals_h_s: bool,
    pub extension: SpectralReport,
}

impl FinalReportJson {
    pub fn new(example: &crate::catalog::FinalExample, report: &FinalReport) -> Self {
        FinalReportJson {
            unitary_part: (&example.unitary_part).into(),
            shift_generators: example.shift_generators,
            unitary_has_wandering_vector: report.unitary_has_wandering_vector,
            uncovered: arcs_json(&report.uncovered),
            h_ws_equals_h_s: report.h_ws_equals_h_s,
            extension: SpectralReport::new(&example.extension),
        }
    }
}

/// Compact listing of a subspace for text output.
pub fn subspace_text(s: &Subspace, limit: usize) -> String {
    let mut parts: Vec<String> = s.generators().iter().take(limit).map(|g| format!("[{g}]")).collect();
    if s.dim() > limit {
        parts.push(format!("... ({} more)", s.dim() - limit));
    }
    parts.join(" ")
}
