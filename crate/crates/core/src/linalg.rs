//! Small dense helpers shared by the other modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

/// Half of an even dimension, or a domain error.
pub fn half_order(m: &Matrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::domain(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    even_half(m.nrows())
}

pub(crate) fn even_half(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::domain(format!("expected a positive even order, got {dim}")));
    }
    Ok(dim / 2)
}

pub(crate) fn frobenius(m: &Matrix) -> f64 {
    m.norm()
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub(crate) fn sym_eigen_sorted(m: &Matrix) -> (DVector<f64>, Matrix) {
    let sym = symmetrize(m);
    let eig = SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub(crate) fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

pub(crate) fn skew_part(m: &Matrix) -> Matrix {
    (m - m.transpose()) * 0.5
}

/// `V f(Λ) Vᵀ` for a symmetric matrix given its eigenpairs.
pub(crate) fn spectral_apply(values: &DVector<f64>, vectors: &Matrix, f: impl Fn(f64) -> f64) -> Matrix {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = f(v);
        scaled.column_mut(j).scale_mut(fv);
    }
    symmetrize(&(scaled * vectors.transpose()))
}
