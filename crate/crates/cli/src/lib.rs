//! Front end for the `woldlab` binary: argument types, input loading and
//! report rendering. Kept as a library so tests can drive it in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use woldlab_core::catalog::{self, Fixture};
use woldlab_core::certificate::{Certificate, Verdict};
use woldlab_core::format::{parse_operator, write_operator};
use woldlab_core::report::{
    CertificateJson, FinalReportJson, PairReportJson, PairVerdicts, SpectralReport, WanderReport, WoldReport,
};
use woldlab_core::spectral::{parse_spectral_json, SpectralJson, SpectralUnitary};
use woldlab_core::{
    commutes, doubly_commutes, exhaust_h0, is_completely_non_doubly_commuting, is_strongly_wandering, is_wandering,
    pair_decompose, wandering_span_decompose, weak_bishift_classify, wold_decompose, HVector, StructuredIsometry,
};

/// Iteration cap for the `H_0` exhaustion in `pair`.
const EXHAUST_ITERATIONS: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "woldlab", version, about = "Wold decompositions and wandering vectors of structured isometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Operator file, spectral JSON file or `catalog:<name>`.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Window dimension used by every truncated computation.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Largest power examined by wandering checks.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub horizon: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wold decomposition and the `H_0 (+) H_w` split.
    Wold,
    /// Is a vector wandering (or strongly wandering)?
    Wander {
        /// Vector as `lane:position=re[+imi]`, comma-separated.
        #[arg(long)]
        vector: String,
        #[arg(long)]
        strong: bool,
    },
    /// Commuting-pair analyses. The pair comes from a pair catalog entry or
    /// from `--input` and `--with`.
    Pair {
        /// Second operator: file or `catalog:<name>`.
        #[arg(long = "with")]
        with: Option<String>,
    },
    /// Multiplicity profile, bilateral-shift test and cover of a unitary
    /// given by spectral data.
    Spectral,
    /// List the catalog, or export one entry with `--input catalog:<name>`.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A rendered report and whether every verdict in it was decided.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub rendered: String,
    pub decided: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.decided {
            0
        } else {
            2
        }
    }
}

/// What an `--input` value resolved to.
pub enum Loaded {
    Operator(StructuredIsometry),
    Pair(StructuredIsometry, StructuredIsometry),
    Spectral(SpectralUnitary),
    Final(catalog::FinalExample),
}

pub fn load(input: &str) -> anyhow::Result<Loaded> {
    if let Some(name) = input.strip_prefix("catalog:") {
        let entry = catalog::find(name)
            .ok_or_else(|| anyhow!("unknown catalog entry {name:?} (known: {})", catalog::names().join(", ")))?;
        return Ok(match entry.fixture {
            Fixture::Operator(v) => Loaded::Operator(v),
            Fixture::Pair(a, b) => Loaded::Pair(a, b),
            Fixture::Spectral(u) => Loaded::Spectral(u),
            Fixture::Final(f) => Loaded::Final(f),
        });
    }
    let path = Path::new(input);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
    if path.extension().is_some_and(|e| e == "json") {
        let u = parse_spectral_json(&text).with_context(|| input.to_string())?;
        Ok(Loaded::Spectral(u))
    } else {
        let v = parse_operator(&text).with_context(|| input.to_string())?;
        Ok(Loaded::Operator(v))
    }
}

fn operator(input: &str) -> anyhow::Result<StructuredIsometry> {
    match load(input)? {
        Loaded::Operator(v) => Ok(v),
        _ => bail!("{input} is not a single operator"),
    }
}

fn require_input(cli: &Cli) -> anyhow::Result<&str> {
    cli.input.as_deref().ok_or_else(|| anyhow!("--input is required"))
}

/// A verdict counts as decided when it is `false` (which always carries a
/// witness) or an exact `true`. A `true` that only holds up to the horizon
/// is reported as such but exits like an undecided one.
pub fn settled(verdict: Verdict, exact: bool) -> bool {
    match verdict {
        Verdict::False => true,
        Verdict::True => exact,
        Verdict::Undecided => false,
    }
}

fn render<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn cert_text(c: &CertificateJson) -> String {
    let mut s =
        format!("{} (horizon {}, {})", c.verdict.as_str(), c.horizon, if c.exact { "exact" } else { "bounded" });
    if let Some(w) = &c.witness {
        let _ = write!(s, " witness {}", serde_json::to_string(w).expect("witness serializes"));
    }
    s
}

fn vectors_text(vectors: &[Vec<woldlab_core::report::EntryJson>], limit: usize) -> String {
    let mut parts: Vec<String> = vectors
        .iter()
        .take(limit)
        .map(|v| {
            let terms: Vec<String> = v
                .iter()
                .map(|e| {
                    if e.im == 0.0 {
                        format!("{}:{}={}", e.lane, e.position, e.re)
                    } else {
                        format!("{}:{}={}{:+}i", e.lane, e.position, e.re, e.im)
                    }
                })
                .collect();
            format!("[{}]", terms.join(","))
        })
        .collect();
    if vectors.len() > limit {
        parts.push(format!("... ({} more)", vectors.len() - limit));
    }
    parts.join(" ")
}

/// Run one command and render its report.
pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let depth = cli.depth as usize;
    let horizon = cli.horizon as usize;
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Wold => {
            let input = require_input(cli)?;
            let v = operator(input)?;
            let wold = wold_decompose(&v, depth);
            let split = wandering_span_decompose(&v, depth);
            let report = WoldReport::new(v.name(), &wold, &split);
            let decided = settled(report.verdict, report.exact);
            let rendered = if json {
                render(&report)
            } else {
                let cert = CertificateJson {
                    verdict: report.verdict,
                    witness: report.witness.clone(),
                    horizon: report.horizon,
                    exact: report.exact,
                };
                let mut s = String::new();
                let _ = writeln!(s, "operator: {}", report.operator);
                let _ = writeln!(s, "window: {} (depth {})", report.window_dim, report.depth);
                let _ = writeln!(s, "verdict: {}", cert_text(&cert));
                let _ =
                    writeln!(s, "ker V*: dim {} {}", report.kernel_dim, vectors_text(&report.bases.shift_wandering, 8));
                let _ = writeln!(
                    s,
                    "unitary window: dim {} {}",
                    report.unitary_window_dim,
                    vectors_text(&report.bases.unitary_window, 8)
                );
                let _ = writeln!(s, "H_0: dim {} {}", report.h0_dim, vectors_text(&report.h0_basis, 8));
                let _ = writeln!(s, "H_w: dim {}", report.hw_dim);
                let _ = writeln!(
                    s,
                    "reducing defects: H_0 {:e}, H_w {:e}",
                    report.h0_reducing_defect, report.hw_reducing_defect
                );
                s
            };
            Ok(Outcome { rendered, decided })
        }
        Command::Wander { vector, strong } => {
            let input = require_input(cli)?;
            let v = operator(input)?;
            let x: HVector = vector.parse().context("parsing --vector")?;
            if let Some(idx) = x.support().find(|i| !v.contains(i)) {
                bail!("--vector: index {idx} is not in the space of {input}");
            }
            let c = if *strong { is_strongly_wandering(&v, &x, horizon)? } else { is_wandering(&v, &x, horizon)? };
            let report = WanderReport::new(v.name(), &x, *strong, &c);
            let rendered = if json {
                render(&report)
            } else {
                let kind = if *strong { "strongly wandering" } else { "wandering" };
                format!("operator: {}\nvector: {x}\n{kind}: {}\n", report.operator, cert_text(&(&c).into()))
            };
            Ok(Outcome { rendered, decided: settled(c.verdict, c.exact) })
        }
        Command::Pair { with } => {
            let input = require_input(cli)?;
            let (v1, v2) = match (load(input)?, with) {
                (Loaded::Pair(a, b), None) => (a, b),
                (Loaded::Operator(a), Some(w)) => (a, operator(w)?),
                (Loaded::Pair(..), Some(_)) => bail!("{input} is already a pair; drop --with"),
                (Loaded::Operator(_), None) => bail!("pair needs a pair entry or --with <second operator>"),
                _ => bail!("{input} is not an operator"),
            };
            pair(&v1, &v2, depth, json)
        }
        Command::Spectral => {
            let input = require_input(cli)?;
            let rendered = match load(input)? {
                Loaded::Spectral(u) => {
                    let report = SpectralReport::new(&u);
                    if json {
                        render(&report)
                    } else {
                        spectral_text(&report)
                    }
                }
                Loaded::Final(f) => {
                    let report = FinalReportJson::new(&f, &f.report());
                    if json {
                        render(&report)
                    } else {
                        let mut s = String::new();
                        let _ = writeln!(s, "shift generators: {}", report.shift_generators);
                        let _ =
                            writeln!(s, "unitary part has a wandering vector: {}", report.unitary_has_wandering_vector);
                        for a in &report.uncovered {
                            let _ = writeln!(s, "uncovered arc: [{}, {})", a.start, a.end);
                        }
                        let _ = writeln!(s, "H_ws = H_s: {}", report.h_ws_equals_h_s);
                        s.push_str("minimal unitary extension:\n");
                        s.push_str(&spectral_text(&report.extension));
                        s
                    }
                }
                _ => bail!("{input} carries no spectral data"),
            };
            Ok(Outcome { rendered, decided: true })
        }
        Command::Catalog => {
            let rendered = match &cli.input {
                None => catalog_listing(json),
                Some(input) => {
                    let name = input.strip_prefix("catalog:").unwrap_or(input);
                    let entry = catalog::find(name).ok_or_else(|| anyhow!("unknown catalog entry {name:?}"))?;
                    export(&entry.fixture)
                }
            };
            Ok(Outcome { rendered, decided: true })
        }
    }
}

#[derive(Serialize)]
struct NonCommutingJson<'a> {
    v1: &'a str,
    v2: &'a str,
    depth: usize,
    commutes: CertificateJson,
}

fn pair(v1: &StructuredIsometry, v2: &StructuredIsometry, depth: usize, json: bool) -> anyhow::Result<Outcome> {
    let c = commutes(v1, v2, depth)?;
    if !c.is_true() {
        // every further analysis presupposes commutation
        let report = NonCommutingJson { v1: v1.name(), v2: v2.name(), depth, commutes: (&c).into() };
        let rendered = if json {
            render(&report)
        } else {
            format!("pair: {} {}\ncommutes: {}\n", v1.name(), v2.name(), cert_text(&report.commutes))
        };
        return Ok(Outcome { rendered, decided: settled(c.verdict, c.exact) });
    }
    let dc = doubly_commutes(v1, v2, depth)?;
    let wb = weak_bishift_classify(v1, v2, depth)?;
    let cnd = is_completely_non_doubly_commuting(v1, v2, depth)?;
    let decomposition = pair_decompose(v1, v2, depth)?;
    let exhaustion = exhaust_h0(v1, v2, EXHAUST_ITERATIONS, depth)?;
    let report = PairReportJson::new(
        (v1.name(), v2.name()),
        PairVerdicts { commutes: &c, doubly_commutes: &dc, weak_bishift: &wb, completely_non_doubly_commuting: &cnd },
        &decomposition,
        &exhaustion,
    );
    let decided = [&c, &dc, &wb, &cnd].iter().all(|c: &&Certificate| settled(c.verdict, c.exact));
    let rendered = if json {
        render(&report)
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "pair: {} {} (depth {})", report.v1, report.v2, report.depth);
        let _ = writeln!(s, "commutes: {}", cert_text(&report.commutes));
        let _ = writeln!(s, "doubly commutes: {}", cert_text(&report.doubly_commutes));
        let _ = writeln!(s, "weak bi-shift: {}", cert_text(&report.weak_bishift));
        let _ = writeln!(s, "completely non doubly commuting: {}", cert_text(&report.completely_non_doubly_commuting));
        for (name, part) in [("uu", &report.uu), ("us", &report.us), ("su", &report.su), ("ws", &report.ws)] {
            let _ = writeln!(
                s,
                "{name}: dim {} {} defects ({:e}, {:e})",
                part.dim,
                cert_text(&part.certificate),
                part.v1_reducing_defect,
                part.v2_reducing_defect
            );
        }
        let _ = writeln!(
            s,
            "exhaustion: {} iterations, H_1 dim {}, {}",
            report.exhaustion.iterations,
            report.exhaustion.h1_dim,
            cert_text(&report.exhaustion.certificate)
        );
        s
    };
    Ok(Outcome { rendered, decided })
}

fn spectral_text(r: &SpectralReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "profile: breakpoints {:?} values {:?}", r.profile.breakpoints, r.profile.values);
    match (&r.multiplicity, &r.reason) {
        (Some(m), _) => {
            let _ = writeln!(s, "bilateral shift: true (multiplicity {m})");
        }
        (None, reason) => {
            let _ = writeln!(s, "bilateral shift: false ({})", reason.as_deref().unwrap_or("unknown"));
        }
    }
    let _ = writeln!(s, "has wandering vector: {}", r.has_wandering_vector);
    for a in &r.uncovered {
        let _ = writeln!(s, "uncovered arc: [{}, {})", a.start, a.end);
    }
    match (&r.cover.layers, &r.cover.refused) {
        (Some(layers), _) => {
            let _ = writeln!(s, "cover: {} layers", layers.len());
            for (k, l) in layers.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  layer {k}: fresh {:?} on {:?}, bilateral shift {}",
                    l.fresh_profile.values, l.fresh_profile.breakpoints, l.bilateral_shift
                );
            }
        }
        (None, refused) => {
            let _ = writeln!(s, "cover: refused ({})", refused.as_deref().unwrap_or("unknown"));
        }
    }
    s
}

#[derive(Serialize)]
struct ListingJson {
    name: &'static str,
    kind: &'static str,
    expected: std::collections::BTreeMap<String, serde_json::Value>,
}

fn catalog_listing(json: bool) -> String {
    let entries = catalog::fixtures();
    if json {
        let listing: Vec<ListingJson> = entries
            .into_iter()
            .map(|e| ListingJson { name: e.name, kind: e.fixture.kind(), expected: e.expected })
            .collect();
        render(&listing)
    } else {
        entries.iter().map(|e| format!("{:<22} {}\n", e.name, e.fixture.kind())).collect()
    }
}

/// Export an entry in its interchange format: operator text (pairs as two
/// documents separated by `---`) or spectral JSON.
fn export(fixture: &Fixture) -> String {
    match fixture {
        Fixture::Operator(v) => write_operator(v),
        Fixture::Pair(a, b) => format!("{}---\n{}", write_operator(a), write_operator(b)),
        Fixture::Spectral(u) => render(&SpectralJson::from(u)),
        Fixture::Final(f) => render(&SpectralJson::from(&f.unitary_part)),
    }
}

/// Write to `--output` or standard output.
pub fn emit(cli: &Cli, outcome: &Outcome) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, &outcome.rendered).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.rendered.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
