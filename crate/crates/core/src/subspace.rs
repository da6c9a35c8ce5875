//! Window-certified subspaces: orthonormal generator lists with a closure tag.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::isometry::StructuredIsometry;
use crate::tolerance::GRAM_SCHMIDT_DROP;
use crate::vector::{BasisIndex, HVector};

/// How the generator list is meant to be closed up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "operator", rename_all = "snake_case")]
pub enum Closure {
    None,
    ForwardOrbit(String),
    FullOrbit(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    generators: Vec<HVector>,
    pub closure: Closure,
}

/// Modified Gram-Schmidt in input order; vectors whose residual norm falls
/// below [`GRAM_SCHMIDT_DROP`] are dropped.
pub fn gram_schmidt<'a>(vectors: impl IntoIterator<Item = &'a HVector>) -> Vec<HVector> {
    let mut basis = OrthoBasis::default();
    for v in vectors {
        basis.absorb(v);
    }
    basis.into_vectors()
}

/// Orthonormal list indexed by support, so that a residual only visits the
/// vectors it overlaps. Vectors with disjoint support have inner product
/// exactly zero, so skipping them changes nothing.
#[derive(Debug, Clone, Default)]
pub struct OrthoBasis {
    vectors: Vec<HVector>,
    touching: HashMap<BasisIndex, Vec<usize>>,
}

impl OrthoBasis {
    /// Wrap a list that is already orthonormal.
    pub fn from_orthonormal(vectors: Vec<HVector>) -> Self {
        let mut basis = OrthoBasis::default();
        for v in vectors {
            basis.push(v);
        }
        basis
    }

    pub fn vectors(&self) -> &[HVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn into_vectors(self) -> Vec<HVector> {
        self.vectors
    }

    fn push(&mut self, v: HVector) {
        let id = self.vectors.len();
        for idx in v.support() {
            self.touching.entry(*idx).or_default().push(id);
        }
        self.vectors.push(v);
    }

    /// Ids of the vectors sharing support with `x`, in ascending order.
    fn overlapping(&self, x: &HVector) -> Vec<usize> {
        let mut hit = vec![false; self.vectors.len()];
        for ids in x.support().filter_map(|i| self.touching.get(i)) {
            for id in ids {
                hit[*id] = true;
            }
        }
        hit.iter().enumerate().filter(|(_, h)| **h).map(|(id, _)| id).collect()
    }

    /// `x` minus its projection onto the span. Two passes of modified
    /// Gram-Schmidt, each over the vectors overlapping the current residual.
    pub fn residual(&self, x: &HVector) -> HVector {
        let mut r = x.clone();
        for _ in 0..2 {
            for id in self.overlapping(&r) {
                let b = &self.vectors[id];
                let c = r.inner(b);
                if c.norm() > 0.0 {
                    r.axpy_assign(-c, b);
                }
            }
        }
        r
    }

    /// Unit vector along the residual of `x`, or `None` below
    /// [`GRAM_SCHMIDT_DROP`]. The residual is orthogonalized once more after
    /// normalizing, so a small residual does not carry rounding and pruning
    /// error into the result at relative size.
    pub fn orthonormal_residual(&self, x: &HVector) -> Option<HVector> {
        let r = self.residual(x);
        if r.norm() < GRAM_SCHMIDT_DROP {
            return None;
        }
        self.residual(&r.normalized()?).normalized()
    }

    /// Append the orthonormal residual of `x`, if any; returns whether the
    /// span grew.
    pub fn absorb(&mut self, x: &HVector) -> bool {
        match self.orthonormal_residual(x) {
            Some(u) => {
                self.push(u);
                true
            }
            None => false,
        }
    }
}

/// `x` minus its projection onto the span of an orthonormal list. Runs two
/// passes of modified Gram-Schmidt.
pub fn residual_against(basis: &[HVector], x: &HVector) -> HVector {
    let mut r = x.clone();
    for _ in 0..2 {
        for b in basis {
            let c = r.inner(b);
            if c.norm() > 0.0 {
                r.axpy_assign(-c, b);
            }
        }
    }
    r
}

/// Projection of `x` onto the span of an orthonormal list.
pub fn project_onto(basis: &[HVector], x: &HVector) -> HVector {
    HVector::from_entries(basis.iter().flat_map(|b| {
        let c = x.inner(b);
        b.iter().map(move |(i, a)| (*i, a * c)).collect::<Vec<_>>()
    }))
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace { generators: Vec::new(), closure: Closure::None }
    }

    /// Orthonormalize `vectors` (see [`gram_schmidt`]).
    pub fn spanned_by<'a>(vectors: impl IntoIterator<Item = &'a HVector>) -> Self {
        Subspace { generators: gram_schmidt(vectors), closure: Closure::None }
    }

    /// Wrap an already orthonormal list; `None` when the orthonormality
    /// defect exceeds the tolerance.
    pub fn from_orthonormal(generators: Vec<HVector>) -> Option<Self> {
        let sub = Subspace { generators, closure: Closure::None };
        (sub.orthonormality_defect() <= crate::tolerance::epsilon()).then_some(sub)
    }

    /// Wrap a list that is orthonormal by construction, after checking it;
    /// falls back to Gram-Schmidt when rounding has spoiled it.
    pub fn from_nearly_orthonormal(generators: Vec<HVector>) -> Self {
        let sub = Subspace { generators, closure: Closure::None };
        if sub.orthonormality_defect() <= crate::tolerance::epsilon() {
            sub
        } else {
            Subspace::spanned_by(sub.generators.iter())
        }
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        self.closure = closure;
        self
    }

    pub fn generators(&self) -> &[HVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn project(&self, x: &HVector) -> HVector {
        project_onto(&self.generators, x)
    }

    pub fn residual(&self, x: &HVector) -> HVector {
        residual_against(&self.generators, x)
    }

    /// Whether `x` lies in the span, up to the Gram-Schmidt drop threshold.
    pub fn contains(&self, x: &HVector) -> bool {
        self.residual(x).norm() < GRAM_SCHMIDT_DROP
    }

    /// Largest `|<g_i, g_j> - delta_ij|` over the generators.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest `|<g, h>|` between generators of two subspaces.
    pub fn overlap(&self, other: &Subspace) -> f64 {
        self.generators.iter().flat_map(|a| other.generators.iter().map(move |b| a.inner(b).norm())).fold(0.0, f64::max)
    }

    /// Orthonormal basis of the part of `span(vectors)` orthogonal to `self`.
    pub fn complement_in<'a>(&self, vectors: impl IntoIterator<Item = &'a HVector>) -> Subspace {
        let mut basis = OrthoBasis::from_orthonormal(self.generators.clone());
        let start = basis.len();
        for v in vectors {
            basis.absorb(v);
        }
        Subspace { generators: basis.into_vectors().split_off(start), closure: Closure::None }
    }

    /// Orthogonal sum of two mutually orthogonal subspaces.
    /// `self + other`: the generators of `self`, then those of `other`
    /// orthogonalized against them.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut generators = self.generators.clone();
        generators.extend(self.complement_in(other.generators.iter()).generators);
        Subspace { generators, closure: Closure::None }
    }

    /// `max ||P V x - V P x||` over the test vectors, with `P` the projection
    /// onto this subspace. Zero (within tolerance) certifies that the span
    /// reduces `V` on the tested vectors.
    pub fn reducing_defect(&self, op: &StructuredIsometry, tests: &[HVector]) -> f64 {
        tests
            .iter()
            .map(|x| {
                let pvx = self.project(&op.apply_unchecked(x));
                let vpx = op.apply_unchecked(&self.project(x));
                pvx.distance(&vpx)
            })
            .fold(0.0, f64::max)
    }
}

/// Kernel of a linear map given on a list of domain vectors.
///
/// `images[j]` lists the components of the image of `domain[j]`; the map is
/// `sum_j c_j domain[j] -> sum_j c_j images[j]` (componentwise). Returns an
/// orthonormal basis of `{ sum_j c_j domain[j] : image = 0 }`, computed from
/// the reduced row echelon form of the coefficient matrix so that the basis
/// is deterministic.
pub fn kernel_of_map(domain: &[HVector], images: &[Vec<HVector>]) -> Vec<HVector> {
    let ncols = domain.len();
    if ncols == 0 {
        return Vec::new();
    }
    // rows indexed by (component, basis index)
    let mut rows: BTreeMap<(usize, BasisIndex), Vec<Complex64>> = BTreeMap::new();
    for (j, comps) in images.iter().enumerate() {
        for (k, comp) in comps.iter().enumerate() {
            for (idx, c) in comp.iter() {
                rows.entry((k, *idx)).or_insert_with(|| vec![Complex64::new(0.0, 0.0); ncols])[j] = *c;
            }
        }
    }
    let mut m: Vec<Vec<Complex64>> = rows.into_values().collect();
    let pivot_eps = 1e-10;
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let (best, best_norm) =
            (r..m.len()).map(|i| (i, m[i][col].norm())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= pivot_eps {
            continue;
        }
        m.swap(r, best);
        let inv = Complex64::new(1.0, 0.0) / m[r][col];
        for v in m[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r {
                let f = row[col];
                if f.norm() > 0.0 {
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut kernel_vectors = Vec::new();
    for f in free {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); ncols];
        coeffs[f] = Complex64::new(1.0, 0.0);
        for (row, pc) in pivot_cols.iter().enumerate() {
            coeffs[*pc] = -m[row][f];
        }
        let v = HVector::from_entries(
            coeffs.iter().zip(domain).flat_map(|(c, d)| d.iter().map(move |(i, a)| (*i, a * c)).collect::<Vec<_>>()),
        );
        kernel_vectors.push(v);
    }
    gram_schmidt(kernel_vectors.iter())
}
