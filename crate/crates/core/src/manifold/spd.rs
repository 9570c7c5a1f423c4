use nalgebra::DMatrix;

use crate::linalg::{
    eigh, frobenius, from_eigen, matrix_from_row_major, pack_symmetric, row_major, stable_sum, sym_fn, symmetrize,
    unpack_symmetric,
};

/// `a^{1/2}` and `a^{-1/2}` of a base point.
pub(super) struct SpdRoots {
    n: usize,
    sqrt: DMatrix<f64>,
    inv_sqrt: DMatrix<f64>,
}

impl SpdRoots {
    pub(super) fn new(n: usize, packed: &[f64]) -> Self {
        let e = eigh(&unpack_symmetric(n, packed));
        SpdRoots {
            n,
            sqrt: from_eigen(&e, f64::sqrt),
            inv_sqrt: from_eigen(&e, |l| 1.0 / l.sqrt()),
        }
    }

    fn whiten(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        symmetrize(&(&self.inv_sqrt * m * &self.inv_sqrt))
    }

    fn color(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        symmetrize(&(&self.sqrt * m * &self.sqrt))
    }

    pub(super) fn log(&self, q_packed: &[f64]) -> Vec<f64> {
        let inner = self.whiten(&unpack_symmetric(self.n, q_packed));
        row_major(&self.color(&sym_fn(&inner, f64::ln)))
    }

    pub(super) fn exp(&self, v: &[f64]) -> Vec<f64> {
        let inner = self.whiten(&matrix_from_row_major(self.n, v));
        pack_symmetric(&self.color(&sym_fn(&inner, f64::exp)))
    }

    pub(super) fn norm(&self, v: &[f64]) -> f64 {
        frobenius(&self.whiten(&matrix_from_row_major(self.n, v)))
    }
}

/// `(sum log^2 λ)^{1/2}` over the eigenvalues of `a^{-1/2} b a^{-1/2}`.
pub(super) fn distance(n: usize, a: &[f64], b: &[f64]) -> f64 {
    let roots = SpdRoots::new(n, a);
    let inner = roots.whiten(&unpack_symmetric(n, b));
    let e = eigh(&inner);
    stable_sum(e.eigenvalues.iter().map(|l| l.ln().powi(2))).sqrt()
}

/// `E v E^T` with `E = a^{1/2} (a^{-1/2} b a^{-1/2})^{1/2} a^{-1/2}`.
pub(super) fn transport(n: usize, a: &[f64], b: &[f64], v: &[f64]) -> Vec<f64> {
    let roots = SpdRoots::new(n, a);
    let inner = roots.whiten(&unpack_symmetric(n, b));
    let e = &roots.sqrt * sym_fn(&inner, f64::sqrt) * &roots.inv_sqrt;
    let moved = &e * matrix_from_row_major(n, v) * e.transpose();
    row_major(&symmetrize(&moved))
}
