//! Lanes, basis indices and finitely supported vectors.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{epsilon, ENTRY_DROP};

/// Identifier of a basis lane inside a space description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaneId(pub u32);

impl fmt::Display for LaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position set of a lane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaneDomain {
    /// Positions `0..n`.
    Finite(u32),
    /// Positions `0, 1, 2, ...`.
    Naturals,
    /// All integer positions.
    Integers,
}

impl LaneDomain {
    pub fn contains(self, position: i64) -> bool {
        match self {
            LaneDomain::Finite(n) => position >= 0 && position < i64::from(n),
            LaneDomain::Naturals => position >= 0,
            LaneDomain::Integers => true,
        }
    }

    pub fn is_infinite(self) -> bool {
        !matches!(self, LaneDomain::Finite(_))
    }

    /// Position holding the given rank in canonical enumeration order:
    /// `0, 1, 2, ...` for one-sided lanes and `0, 1, -1, 2, -2, ...` for
    /// integer lanes.
    pub fn position_of_rank(self, rank: u64) -> Option<i64> {
        match self {
            LaneDomain::Finite(n) => (rank < u64::from(n)).then_some(rank as i64),
            LaneDomain::Naturals => Some(rank as i64),
            LaneDomain::Integers => {
                let half = (rank as i64 + 1) / 2;
                Some(if rank % 2 == 1 { half } else { -half })
            }
        }
    }
}

/// One lane of the ambient space: an orthonormal family indexed by a
/// position set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaneSpec {
    pub id: LaneId,
    pub domain: LaneDomain,
    pub label: Option<String>,
}

impl LaneSpec {
    pub fn new(id: u32, domain: LaneDomain) -> Self {
        LaneSpec { id: LaneId(id), domain, label: None }
    }

    pub fn labelled(id: u32, domain: LaneDomain, label: &str) -> Self {
        LaneSpec { id: LaneId(id), domain, label: Some(label.to_string()) }
    }
}

/// Check the lane-list invariants: unique ids and nonempty finite lanes.
pub fn validate_lanes(lanes: &[LaneSpec]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for lane in lanes {
        if let LaneDomain::Finite(0) = lane.domain {
            return Err(Error::MalformedInput(format!("lane {} is finite(0)", lane.id)));
        }
        if !seen.insert(lane.id) {
            return Err(Error::MalformedInput(format!("duplicate lane id {}", lane.id)));
        }
    }
    Ok(())
}

/// A basis vector label: a lane and a position inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub lane: LaneId,
    pub position: i64,
}

impl BasisIndex {
    pub const fn new(lane: u32, position: i64) -> Self {
        BasisIndex { lane: LaneId(lane), position }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lane, self.position)
    }
}

impl FromStr for BasisIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lane, position) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::MalformedInput(format!("expected lane:position, got {s:?}")))?;
        let lane = lane.trim().parse::<u32>().map_err(|_| Error::MalformedInput(format!("bad lane id in {s:?}")))?;
        let position =
            position.trim().parse::<i64>().map_err(|_| Error::MalformedInput(format!("bad position in {s:?}")))?;
        Ok(BasisIndex::new(lane, position))
    }
}

/// Finitely supported vector over basis indices, stored as a list sorted by
/// index so that sums and inner products are linear merges.
///
/// Coefficients with modulus at most [`ENTRY_DROP`] are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HVector {
    entries: Vec<(BasisIndex, Complex64)>,
}

/// Merge two sorted entry lists, combining coefficients on shared indices.
fn merge(
    a: &[(BasisIndex, Complex64)],
    b: &[(BasisIndex, Complex64)],
    mut f: impl FnMut(Complex64, Complex64) -> Complex64,
) -> Vec<(BasisIndex, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (idx, c) = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, f(x.1, y.1))
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, f(x.1, zero))
            }
            (Some(x), None) => {
                i += 1;
                (x.0, f(x.1, zero))
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, f(zero, y.1))
            }
            (None, None) => unreachable!(),
        };
        if c.norm() > ENTRY_DROP {
            out.push((idx, c));
        }
    }
    out
}

impl HVector {
    pub fn zero() -> Self {
        HVector::default()
    }

    pub fn basis(index: BasisIndex) -> Self {
        HVector { entries: vec![(index, Complex64::new(1.0, 0.0))] }
    }

    /// Build from (index, coefficient) pairs; repeated indices are summed.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (BasisIndex, Complex64)>,
    {
        let mut raw: Vec<(BasisIndex, Complex64)> = entries.into_iter().collect();
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(BasisIndex, Complex64)> = Vec::with_capacity(raw.len());
        for (idx, c) in raw {
            match out.last_mut() {
                Some((last, acc)) if *last == idx => *acc += c,
                _ => out.push((idx, c)),
            }
        }
        out.retain(|(_, c)| c.norm() > ENTRY_DROP);
        HVector { entries: out }
    }

    pub fn from_real<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (BasisIndex, f64)>,
    {
        Self::from_entries(entries.into_iter().map(|(i, r)| (i, Complex64::new(r, 0.0))))
    }

    pub fn get(&self, index: &BasisIndex) -> Complex64 {
        match self.entries.binary_search_by_key(index, |(i, _)| *i) {
            Ok(k) => self.entries[k].1,
            Err(_) => Complex64::default(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Complex64)> {
        self.entries.iter().map(|(i, c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisIndex> {
        self.entries.iter().map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Zero up to the global tolerance.
    pub fn is_zero(&self) -> bool {
        self.norm() <= epsilon()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Hermitian inner product, linear in the first argument.
    pub fn inner(&self, other: &HVector) -> Complex64 {
        let (a, b) = (&self.entries, &other.entries);
        let mut acc = Complex64::new(0.0, 0.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1 * b[j].1.conj();
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        // a folded sum starts at +0.0, so the zero vector has norm +0.0
        self.entries.iter().fold(0.0, |acc, (_, c)| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> HVector {
        let mut entries: Vec<(BasisIndex, Complex64)> = self.entries.iter().map(|(i, c)| (*i, c * factor)).collect();
        entries.retain(|(_, c)| c.norm() > ENTRY_DROP);
        HVector { entries }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: Complex64, other: &HVector) -> HVector {
        HVector { entries: merge(&self.entries, &other.entries, |a, b| a + b * factor) }
    }

    /// `self += factor * other`, in place.
    pub fn axpy_assign(&mut self, factor: Complex64, other: &HVector) {
        self.entries = merge(&self.entries, &other.entries, |a, b| a + b * factor);
    }

    pub fn add(&self, other: &HVector) -> HVector {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &HVector) -> HVector {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn distance(&self, other: &HVector) -> f64 {
        self.sub(other).norm()
    }

    pub fn normalized(&self) -> Option<HVector> {
        let n = self.norm();
        (n > epsilon()).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Keep only the entries whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&BasisIndex) -> bool) -> HVector {
        HVector { entries: self.entries.iter().filter(|(i, _)| keep(i)).copied().collect() }
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{idx}={}", c.re)?;
            } else if c.im > 0.0 {
                write!(f, "{idx}={}+{}i", c.re, c.im)?;
            } else {
                write!(f, "{idx}={}{}i", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// Inline syntax: `lane:position=re[+imi]`, comma separated, e.g.
/// `0:0=1,1:3=0.5-0.5i`.
impl FromStr for HVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (idx, coeff) = term
                .split_once('=')
                .ok_or_else(|| Error::MalformedInput(format!("expected index=value, got {term:?}")))?;
            entries.push((idx.parse::<BasisIndex>()?, parse_complex(coeff)?));
        }
        Ok(HVector::from_entries(entries))
    }
}

/// Parse `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(raw: &str) -> Result<Complex64> {
    let s = raw.trim();
    let bad = || Error::MalformedInput(format!("bad complex number {raw:?}"));
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent or leading
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re = body[..k].trim().parse::<f64>().map_err(|_| bad())?;
                let im_raw = body[k..].trim();
                let im = match im_raw {
                    "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse::<f64>().map_err(|_| bad())?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im = match body.trim() {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse::<f64>().map_err(|_| bad())?,
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: i64) -> HVector {
        HVector::basis(BasisIndex::new(1, p))
    }

    fn f() -> HVector {
        HVector::basis(BasisIndex::new(0, 0))
    }

    #[test]
    fn inner_products_of_basis_vectors() {
        assert_eq!(e(0).inner(&e(0)), Complex64::new(1.0, 0.0));
        assert_eq!(e(0).inner(&e(1)), Complex64::new(0.0, 0.0));
        assert!(f().add(&e(0)).inner(&f().sub(&e(0))).norm() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_second_argument() {
        let i = Complex64::new(0.0, 1.0);
        let x = e(0).scale(i);
        assert_eq!(x.inner(&e(0)), i);
        assert_eq!(e(0).inner(&x), -i);
    }

    #[test]
    fn tiny_coefficients_are_pruned() {
        let v = HVector::from_real([(BasisIndex::new(0, 0), 1e-17), (BasisIndex::new(0, 1), 1.0)]);
        assert_eq!(v.len(), 1);
        assert!(e(3).sub(&e(3)).is_empty());
        // kept in storage, but zero up to the tolerance
        let small = HVector::from_real([(BasisIndex::new(0, 0), 1e-12)]);
        assert_eq!(small.len(), 1);
        assert!(small.is_zero());
    }

    #[test]
    fn integer_lane_rank_order() {
        let ranks: Vec<i64> = (0..5).map(|r| LaneDomain::Integers.position_of_rank(r).unwrap()).collect();
        assert_eq!(ranks, vec![0, 1, -1, 2, -2]);
        assert_eq!(LaneDomain::Finite(2).position_of_rank(2), None);
    }

    #[test]
    fn inline_vector_syntax() {
        let v: HVector = "0:0=1, 1:3=0.5-0.25i,1:-2=2i".parse().unwrap();
        assert_eq!(v.get(&BasisIndex::new(0, 0)), Complex64::new(1.0, 0.0));
        assert_eq!(v.get(&BasisIndex::new(1, 3)), Complex64::new(0.5, -0.25));
        assert_eq!(v.get(&BasisIndex::new(1, -2)), Complex64::new(0.0, 2.0));
        assert!("0:0".parse::<HVector>().is_err());
        assert!("x:0=1".parse::<HVector>().is_err());
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), Complex64::new(1e-3, 0.2));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn lane_validation() {
        assert!(validate_lanes(&[LaneSpec::new(0, LaneDomain::Finite(0))]).is_err());
        assert!(
            validate_lanes(&[LaneSpec::new(0, LaneDomain::Naturals), LaneSpec::new(0, LaneDomain::Integers)]).is_err()
        );
    }
}
