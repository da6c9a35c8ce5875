//! Dense-matrix oracle: the matrix of a structured isometry on a finite
//! block of basis indices, assembled straight from its columns and tail
//! rules without going through `apply`.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use woldlab_core::{BasisIndex, HVector, LaneDomain, StructuredIsometry};

pub struct Dense {
    pub index: Vec<BasisIndex>,
    slot: HashMap<BasisIndex, usize>,
    pub matrix: DMatrix<Complex64>,
}

/// All indices with `|position| <= reach`.
pub fn block(v: &StructuredIsometry, reach: i64) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for lane in v.lanes() {
        let range = match lane.domain {
            LaneDomain::Finite(n) => 0..=i64::from(n) - 1,
            LaneDomain::Naturals => 0..=reach,
            LaneDomain::Integers => -reach..=reach,
        };
        out.extend(range.map(|p| BasisIndex { lane: lane.id, position: p }));
    }
    out
}

pub fn assemble(v: &StructuredIsometry, reach: i64) -> Dense {
    let index = block(v, reach);
    let slot: HashMap<BasisIndex, usize> = index.iter().enumerate().map(|(k, i)| (*i, k)).collect();
    let n = index.len();
    let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (j, idx) in index.iter().enumerate() {
        if let Some(col) = v.columns().get(idx) {
            for (i, c) in col.iter() {
                if let Some(&r) = slot.get(i) {
                    matrix[(r, j)] = *c;
                }
            }
        } else if let Some(rule) = v.tail_of(idx.lane) {
            let target = BasisIndex { lane: rule.target, position: idx.position + rule.offset };
            if let Some(&r) = slot.get(&target) {
                matrix[(r, j)] = rule.phase.value();
            }
        }
    }
    Dense { index, slot, matrix }
}

impl Dense {
    pub fn column_of(&self, x: &HVector) -> nalgebra::DVector<Complex64> {
        let mut d = nalgebra::DVector::from_element(self.index.len(), Complex64::new(0.0, 0.0));
        for (i, c) in x.iter() {
            d[self.slot[i]] = *c;
        }
        d
    }

    pub fn vector_of(&self, d: &nalgebra::DVectorView<Complex64>) -> HVector {
        HVector::from_entries(self.index.iter().zip(d.iter()).map(|(i, c)| (*i, *c)))
    }
}

/// Reach that keeps `V^n e_i` inside the block for every window index `i`
/// and `n <= powers`.
pub fn safe_reach(v: &StructuredIsometry, window: &[BasisIndex], powers: i64) -> i64 {
    let far = window.iter().map(|i| i.position.abs()).max().unwrap_or(0);
    let step = v.tail_rules().map(|r| r.offset.abs()).max().unwrap_or(0);
    let core =
        v.columns().values().flat_map(|c| c.support().map(|i| i.position.abs()).collect::<Vec<_>>()).max().unwrap_or(0);
    let threshold = v.tail_rules().map(|r| r.threshold).max().unwrap_or(0);
    far.max(core).max(threshold) + (powers + 1) * (step + 1) + 2
}

/// `M y` for a column-major `n x n` matrix.
fn mul(matrix: &DMatrix<Complex64>, y: &[Complex64]) -> Vec<Complex64> {
    let n = matrix.nrows();
    let data = matrix.as_slice();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, yj) in y.iter().enumerate() {
        if *yj == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (o, m) in out.iter_mut().zip(&data[j * n..(j + 1) * n]) {
            *o += m * yj;
        }
    }
    out
}

/// Largest deviation between `<V^n e_i, V^m e_j>` computed structurally
/// and from the dense matrix, over `0 <= n, m <= powers` and window
/// indices `i, j`.
pub fn gram_deviation(v: &StructuredIsometry, window: &[BasisIndex], powers: usize) -> f64 {
    let dense = assemble(v, safe_reach(v, window, powers as i64));
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(window.len() * (powers + 1));
    let mut structural: Vec<HVector> = Vec::with_capacity(window.len() * (powers + 1));
    for idx in window {
        let mut y = dense.column_of(&HVector::basis(*idx)).as_slice().to_vec();
        for n in 0..=powers {
            if n > 0 {
                y = mul(&dense.matrix, &y);
            }
            columns.push(y.clone());
            structural.push(v.power(&HVector::basis(*idx), n as i64).expect("window inside the space"));
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    let sparse: Vec<Vec<(usize, Complex64)>> = columns
        .iter()
        .map(|c| c.iter().enumerate().filter(|(_, z)| **z != zero).map(|(k, z)| (k, *z)).collect())
        .collect();
    let mut worst: f64 = 0.0;
    for (a, xa) in columns.iter().enumerate() {
        for (b, yb) in sparse.iter().enumerate() {
            // <x, y> = sum x_k conj(y_k)
            let d: Complex64 = yb.iter().map(|(k, q)| xa[*k] * q.conj()).sum();
            let s = structural[a].inner(&structural[b]);
            worst = worst.max((s - d).norm());
        }
    }
    worst
}
