//! Reduced simplicial cohomology over an exact field, computed from the
//! augmented cochain complex.
//!
//! Degree −1 has basis {∅}; the augmentation coboundary sends ∅ to the sum
//! of the used vertices, so ghost labels never contribute. Only H̃ of the
//! geometric realization is visible here.

use crate::complex::{Face, SimplicialComplex};
use crate::linalg::{ExactMatrix, FieldSpec};

/// Augmented cochain complex data: bases by degree and the coboundaries
/// between them, as exact matrices.
pub struct CochainComplexData {
    /// basis\[k\] lists the faces of order k (cochain degree k−1)
    pub bases: Vec<Vec<Face>>,
    /// coboundaries\[k\]: C^{k-1} -> C^k in those bases, k = 1..=n
    pub coboundaries: Vec<ExactMatrix>,
    pub field: FieldSpec,
}

/// dims\[k\] = dim H̃^{k-1}(K), for k = 0..=n (so index 0 is degree −1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohomologyDims(pub Vec<usize>);

impl CohomologyDims {
    /// Dimension of H̃^d; zero outside the stored range.
    pub fn dim(&self, d: i64) -> usize {
        let idx = d + 1;
        if idx < 0 || idx as usize >= self.0.len() {
            0
        } else {
            self.0[idx as usize]
        }
    }

    pub fn top_degree(&self) -> i64 {
        self.0.len() as i64 - 2
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }
}

/// Sign convention: for τ with vertices listed ascending, the coefficient
/// of τ∖(k-th vertex) in δ(τ-dual) is (−1)^k. δ∘δ = 0 is asserted.
pub fn coboundary_matrices(k: &SimplicialComplex, field: FieldSpec) -> CochainComplexData {
    let n = k.n();
    let bases: Vec<Vec<Face>> = (0..=n)
        .map(|ord| {
            k.faces()
                .iter()
                .filter(|f| f.order() == ord)
                .cloned()
                .collect()
        })
        .collect();
    let mut coboundaries = Vec::new();
    for ord in 1..=n {
        let lower = &bases[ord - 1];
        let upper = &bases[ord];
        // δ: C^{ord-2} -> C^{ord-1}; matrix rows = upper basis, cols = lower
        let mut mat = ExactMatrix::zeros(field, upper.len(), lower.len());
        for (row, tau) in upper.iter().enumerate() {
            for j in 0..tau.order() {
                let sub = tau.without_index(j);
                let col = lower.binary_search(&sub).expect("downward closure");
                let sign = if j % 2 == 0 { 1 } else { -1 };
                mat.set(row, col, field.from_i64(sign));
            }
        }
        coboundaries.push(mat);
    }
    for w in coboundaries.windows(2) {
        debug_assert!(w[1].mul(&w[0]).is_zero(), "δ∘δ ≠ 0");
    }
    CochainComplexData {
        bases,
        coboundaries,
        field,
    }
}

/// dim H̃^d = dim C^d − rank δ_d − rank δ_{d−1}.
pub fn reduced_cohomology_dims(k: &SimplicialComplex, field: FieldSpec) -> CohomologyDims {
    let data = coboundary_matrices(k, field);
    let ranks: Vec<usize> = data.coboundaries.iter().map(|m| m.rank()).collect();
    let n = k.n();
    let dims = (0..=n)
        .map(|idx| {
            let c = data.bases[idx].len();
            let out_rank = if idx < n { ranks[idx] } else { 0 };
            let in_rank = if idx > 0 { ranks[idx - 1] } else { 0 };
            c - out_rank - in_rank
        })
        .collect();
    CohomologyDims(dims)
}
