//! Unitaries in spectral form: Lebesgue measure on arcs of the circle plus
//! finitely many atoms, each with a multiplicity.
//!
//! Angles are measured in turns and stored as exact rationals so that
//! breakpoint comparisons never depend on rounding.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wold::WoldResult;

pub type Turn = Rational64;

const ANGLE_SCALE: i64 = 1_000_000_000_000;

/// Nearest multiple of `1e-12` turns, reduced.
pub fn turn_from_f64(x: f64) -> Turn {
    Rational64::new((x * ANGLE_SCALE as f64).round() as i64, ANGLE_SCALE)
}

pub fn turn_to_f64(t: Turn) -> f64 {
    t.to_f64().unwrap_or(f64::NAN)
}

fn wrap(t: Turn) -> Turn {
    let f = t - t.floor();
    if f >= Turn::one() {
        f - Turn::one()
    } else {
        f
    }
}

/// Arc `[start, start + length)` of the circle, wrapping past 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    start: Turn,
    length: Turn,
}

impl Arc {
    pub fn new(start: Turn, length: Turn) -> Result<Self> {
        if length <= Turn::zero() || length > Turn::one() {
            return Err(Error::MalformedInput(format!("arc length {length} outside (0, 1]")));
        }
        let start = if length == Turn::one() { Turn::zero() } else { wrap(start) };
        Ok(Arc { start, length })
    }

    pub fn from_f64(start: f64, length: f64) -> Result<Self> {
        if !(start.is_finite() && length.is_finite()) {
            return Err(Error::MalformedInput("arc with non-finite angle".into()));
        }
        Arc::new(turn_from_f64(start), turn_from_f64(length))
    }

    pub fn full() -> Self {
        Arc { start: Turn::zero(), length: Turn::one() }
    }

    pub fn start(&self) -> Turn {
        self.start
    }

    pub fn length(&self) -> Turn {
        self.length
    }

    pub fn end(&self) -> Turn {
        wrap(self.start + self.length)
    }

    pub fn is_full(&self) -> bool {
        self.length == Turn::one()
    }

    pub fn contains(&self, angle: Turn) -> bool {
        self.is_full() || wrap(angle - self.start) < self.length
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            write!(f, "full circle")
        } else {
            write!(f, "[{}, {})", turn_to_f64(self.start), turn_to_f64(self.end()))
        }
    }
}

/// Image of an arc under `z -> z^2`: start and length both double, the
/// length saturating at the full circle.
pub fn arc_double(a: &Arc) -> Vec<Arc> {
    let length = a.length * 2;
    if length >= Turn::one() {
        vec![Arc::full()]
    } else {
        vec![Arc { start: wrap(a.start * 2), length }]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Atom {
    pub angle: Turn,
    pub multiplicity: u32,
}

/// Multiplication by `z` on `L^2(arc_1) (+) ... (+) L^2(arc_k)` plus point
/// masses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpectralUnitary {
    pub pieces: Vec<Arc>,
    pub atoms: Vec<Atom>,
}

impl SpectralUnitary {
    pub fn new(pieces: Vec<Arc>, atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if a.multiplicity == 0 {
                return Err(Error::MalformedInput("atom with multiplicity 0".into()));
            }
            if atoms[..i].iter().any(|b| b.angle == a.angle) {
                return Err(Error::MalformedInput(format!("duplicate atom at {}", a.angle)));
            }
        }
        let atoms = atoms.into_iter().map(|a| Atom { angle: wrap(a.angle), ..a }).collect();
        Ok(SpectralUnitary { pieces, atoms })
    }

    pub fn from_arcs(pieces: Vec<Arc>) -> Self {
        SpectralUnitary { pieces, atoms: Vec::new() }
    }

    /// Direct sum: concatenation of pieces and merged atoms.
    pub fn direct_sum(&self, other: &SpectralUnitary) -> SpectralUnitary {
        let mut atoms = self.atoms.clone();
        for a in &other.atoms {
            match atoms.iter_mut().find(|b| b.angle == a.angle) {
                Some(b) => b.multiplicity += a.multiplicity,
                None => atoms.push(*a),
            }
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().copied());
        SpectralUnitary { pieces, atoms }
    }
}

/// Piecewise-constant multiplicity of the continuous part: `values[i]` holds
/// on `[breakpoints[i], breakpoints[i + 1])`, the last interval ending at 1.
/// The first breakpoint is always 0; adjacent intervals carry different
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    pub breakpoints: Vec<Turn>,
    pub values: Vec<u32>,
    pub atoms: Vec<Atom>,
}

impl MultiplicityProfile {
    fn from_cuts(mut cuts: Vec<Turn>, value_at: impl Fn(Turn) -> u32, atoms: Vec<Atom>) -> Self {
        cuts.push(Turn::zero());
        cuts.sort();
        cuts.dedup();
        let mut breakpoints = Vec::new();
        let mut values: Vec<u32> = Vec::new();
        for (i, b) in cuts.iter().enumerate() {
            let next = cuts.get(i + 1).copied().unwrap_or(Turn::one());
            let v = value_at((*b + next) / 2);
            if values.last() != Some(&v) {
                breakpoints.push(*b);
                values.push(v);
            }
        }
        let mut atoms = atoms;
        atoms.sort_by_key(|a| a.angle);
        MultiplicityProfile { breakpoints, values, atoms }
    }

    /// Constant profile over the whole circle.
    pub fn constant(value: u32) -> Self {
        MultiplicityProfile { breakpoints: vec![Turn::zero()], values: vec![value], atoms: Vec::new() }
    }

    /// Intervals as `(start, end, value)`.
    pub fn intervals(&self) -> Vec<(Turn, Turn, u32)> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let end = self.breakpoints.get(i + 1).copied().unwrap_or(Turn::one());
                (*b, end, self.values[i])
            })
            .collect()
    }

    pub fn value_at(&self, angle: Turn) -> u32 {
        let a = wrap(angle);
        let i = self.breakpoints.iter().rposition(|b| *b <= a).unwrap_or(0);
        self.values[i]
    }

    pub fn min(&self) -> u32 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &MultiplicityProfile) -> MultiplicityProfile {
        let cuts: Vec<Turn> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        let atoms = SpectralUnitary { pieces: vec![], atoms: self.atoms.clone() }
            .direct_sum(&SpectralUnitary { pieces: vec![], atoms: other.atoms.clone() })
            .atoms;
        Self::from_cuts(cuts, |t| self.value_at(t) + other.value_at(t), atoms)
    }

    /// Maximal arcs where the continuous multiplicity is zero, merged across
    /// the point 0.
    pub fn zero_arcs(&self) -> Vec<Arc> {
        let mut runs: Vec<(Turn, Turn)> =
            self.intervals().into_iter().filter(|(_, _, v)| *v == 0).map(|(a, b, _)| (a, b)).collect();
        if runs.len() >= 2 && runs[0].0 == Turn::zero() && runs.last().unwrap().1 == Turn::one() {
            let first = runs.remove(0);
            let last = runs.last_mut().unwrap();
            last.1 = Turn::one() + first.1;
        }
        runs.into_iter().map(|(a, b)| Arc { start: a, length: (b - a).min(Turn::one()) }).collect()
    }
}

/// Sum of the arc indicators, atoms reported separately.
pub fn multiplicity_profile(u: &SpectralUnitary) -> MultiplicityProfile {
    let cuts: Vec<Turn> = u.pieces.iter().flat_map(|a| [a.start(), a.end()]).collect();
    MultiplicityProfile::from_cuts(cuts, |t| u.pieces.iter().filter(|a| a.contains(t)).count() as u32, u.atoms.clone())
}

/// Why a spectral unitary fails to be a bilateral shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftObstruction {
    AtomsPresent,
    SupportNotFullCircle,
    NonConstantMultiplicity,
}

impl fmt::Display for ShiftObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftObstruction::AtomsPresent => "atoms present",
            ShiftObstruction::SupportNotFullCircle => "support not full circle",
            ShiftObstruction::NonConstantMultiplicity => "non-constant multiplicity",
        })
    }
}

/// `Ok(multiplicity)` when `u` is a bilateral shift of that multiplicity.
/// A bilateral shift has no atoms and constant multiplicity on the whole
/// circle.
pub fn is_bilateral_shift(u: &SpectralUnitary) -> std::result::Result<u32, ShiftObstruction> {
    if !u.atoms.is_empty() {
        return Err(ShiftObstruction::AtomsPresent);
    }
    let profile = multiplicity_profile(u);
    if profile.min() == 0 {
        return Err(ShiftObstruction::SupportNotFullCircle);
    }
    if !profile.is_constant() {
        return Err(ShiftObstruction::NonConstantMultiplicity);
    }
    Ok(profile.values[0])
}

/// `Ok(())` when `u` has a wandering vector, otherwise the arcs the
/// continuous part misses. A wandering vector of a unitary generates a
/// bilateral-shift reducing subspace, which needs Lebesgue measure on the
/// whole circle.
pub fn has_wandering_vector(u: &SpectralUnitary) -> std::result::Result<(), Vec<Arc>> {
    let profile = multiplicity_profile(u);
    if profile.min() >= 1 {
        Ok(())
    } else {
        Err(profile.zero_arcs())
    }
}

/// One interval of a cover layer, using copy `copy` (1-based) of the
/// continuous spectrum there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSlice {
    pub start: Turn,
    pub end: Turn,
    pub copy: u32,
    /// First layer to use this copy.
    pub fresh: bool,
}

/// A multiplicity-one slice through the profile over the whole circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverLayer {
    pub slices: Vec<LayerSlice>,
}

impl CoverLayer {
    /// The layer as a spectral unitary in its own right.
    pub fn as_unitary(&self) -> SpectralUnitary {
        SpectralUnitary::from_arcs(
            self.slices.iter().map(|s| Arc { start: s.start, length: s.end - s.start }).collect(),
        )
    }

    /// Multiplicity contributed by copies first used in this layer.
    pub fn fresh_profile(&self) -> MultiplicityProfile {
        let fresh = SpectralUnitary::from_arcs(
            self.slices.iter().filter(|s| s.fresh).map(|s| Arc { start: s.start, length: s.end - s.start }).collect(),
        );
        multiplicity_profile(&fresh)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilateralCover {
    pub layers: Vec<CoverLayer>,
}

/// Why no span-of-bilateral-shifts cover was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverObstruction {
    Uncovered(Vec<Arc>),
    Atoms(Vec<Atom>),
}

impl fmt::Display for CoverObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverObstruction::Uncovered(arcs) => {
                write!(f, "uncovered arcs:")?;
                for a in arcs {
                    write!(f, " {a}")?;
                }
                Ok(())
            }
            CoverObstruction::Atoms(atoms) => write!(f, "{} atom(s) present", atoms.len()),
        }
    }
}

/// Greedy layer peeling. Layer `k` takes copy `min(k, m)` of every interval
/// with multiplicity `m`, so it is a full-circle multiplicity-one slice and
/// hence a bilateral shift; copies first used by layer `k` add up to the
/// input profile over all layers.
pub fn bilateral_cover(u: &SpectralUnitary) -> std::result::Result<BilateralCover, CoverObstruction> {
    if !u.atoms.is_empty() {
        return Err(CoverObstruction::Atoms(u.atoms.clone()));
    }
    let profile = multiplicity_profile(u);
    if profile.min() == 0 {
        return Err(CoverObstruction::Uncovered(profile.zero_arcs()));
    }
    let layers = (1..=profile.max())
        .map(|k| CoverLayer {
            slices: profile
                .intervals()
                .into_iter()
                .map(|(start, end, m)| LayerSlice { start, end, copy: k.min(m), fresh: k <= m })
                .collect(),
        })
        .collect();
    Ok(BilateralCover { layers })
}

/// Spectral data of the minimal unitary extension: the unitary part plus one
/// full-circle piece per wandering generator of the shift part.
pub fn spectral_of_extension(wold: &WoldResult, unitary_part: &SpectralUnitary) -> Result<SpectralUnitary> {
    if !wold.exact {
        return Err(Error::Refused("Wold decomposition is not exact".into()));
    }
    Ok(extend_with_shift(unitary_part, wold.shift_wandering_basis.len()))
}

/// `unitary_part` plus `generators` copies of the full circle.
pub fn extend_with_shift(unitary_part: &SpectralUnitary, generators: usize) -> SpectralUnitary {
    let mut out = unitary_part.clone();
    out.pieces.extend(std::iter::repeat_n(Arc::full(), generators));
    out
}

// JSON interchange

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcJson {
    pub start: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub angle: f64,
    pub mult: u32,
}

/// `{arcs: [{start, length}], atoms: [{angle, mult}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralJson {
    pub arcs: Vec<ArcJson>,
    #[serde(default)]
    pub atoms: Vec<AtomJson>,
}

/// `{breakpoints: [...], values: [...], atoms: [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub breakpoints: Vec<f64>,
    pub values: Vec<u32>,
    pub atoms: Vec<AtomJson>,
}

impl From<&SpectralUnitary> for SpectralJson {
    fn from(u: &SpectralUnitary) -> Self {
        SpectralJson {
            arcs: u
                .pieces
                .iter()
                .map(|a| ArcJson { start: turn_to_f64(a.start), length: turn_to_f64(a.length) })
                .collect(),
            atoms: u.atoms.iter().map(atom_json).collect(),
        }
    }
}

fn atom_json(a: &Atom) -> AtomJson {
    AtomJson { angle: turn_to_f64(a.angle), mult: a.multiplicity }
}

impl TryFrom<&SpectralJson> for SpectralUnitary {
    type Error = Error;

    fn try_from(j: &SpectralJson) -> Result<Self> {
        let pieces = j.arcs.iter().map(|a| Arc::from_f64(a.start, a.length)).collect::<Result<Vec<_>>>()?;
        let atoms = j.atoms.iter().map(|a| Atom { angle: turn_from_f64(a.angle), multiplicity: a.mult }).collect();
        SpectralUnitary::new(pieces, atoms)
    }
}

impl From<&MultiplicityProfile> for ProfileJson {
    fn from(p: &MultiplicityProfile) -> Self {
        ProfileJson {
            breakpoints: p.breakpoints.iter().map(|b| turn_to_f64(*b)).collect(),
            values: p.values.clone(),
            atoms: p.atoms.iter().map(atom_json).collect(),
        }
    }
}

/// Parse the spectral description JSON.
pub fn parse_spectral_json(text: &str) -> Result<SpectralUnitary> {
    let j: SpectralJson =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    SpectralUnitary::try_from(&j)
}
