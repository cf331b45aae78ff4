//! Seeded generators for test matrices.
//!
//! Every generator takes an explicit seed and draws from a ChaCha8 stream,
//! so the same `(seed, arguments)` always yields bit-identical output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, Matrix};
use crate::symplectic::{expanding_sum, j_times};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic sub-seed for the `index`-th task derived from `seed`
/// (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    // fill in row-major order so the stream layout is obvious
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

fn symmetric_gaussian(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    symmetrize(&gaussian_matrix(dim, dim, rng))
}

fn check_spread(spread: f64) -> Result<()> {
    if !(spread > 0.0 && spread.is_finite()) {
        return Err(Error::domain(format!("spread must be positive and finite, got {spread}")));
    }
    Ok(())
}

/// A random symplectic matrix of order `2n`:
/// `exp(J·S) · [[I, 0], [Z, I]]` with `S`, `Z` symmetric Gaussian matrices
/// scaled by `spread`.
pub fn random_symplectic(n: usize, seed: u64, spread: f64) -> Result<Matrix> {
    let mut rng = rng_from_seed(seed);
    random_symplectic_with(n, spread, &mut rng)
}

pub(crate) fn random_symplectic_with(n: usize, spread: f64, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::domain("random_symplectic needs n >= 1"));
    }
    check_spread(spread)?;
    let dim = 2 * n;
    let s = symmetric_gaussian(dim, rng) * (spread / (dim as f64).sqrt());
    let hamiltonian = j_times(&s);
    let compact = hamiltonian.exp();
    let z = symmetric_gaussian(n, rng) * (spread / (n as f64).sqrt());
    let mut shear = Matrix::identity(dim, dim);
    shear.view_mut((n, 0), (n, n)).copy_from(&z);
    Ok(compact * shear)
}

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix.
pub(crate) fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// A random positive definite matrix of order `2n`, `Q·diag(e^{spread·g})·Qᵀ`
/// with `Q` Haar-orthogonal and `g` standard normal. Larger `spread` widens
/// the spectrum.
pub fn random_pd(n: usize, seed: u64, spread: f64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::domain("random_pd needs n >= 1"));
    }
    check_spread(spread)?;
    let mut rng = rng_from_seed(seed);
    let dim = 2 * n;
    let q = random_orthogonal(dim, &mut rng);
    let mut scaled = q.clone();
    for j in 0..dim {
        let lambda = (spread * gaussian(&mut rng)).exp();
        scaled.column_mut(j).scale_mut(lambda);
    }
    Ok(symmetrize(&(scaled * q.transpose())))
}

/// `W (D ⊕ D) Wᵀ` for a random symplectic `W`, so the symplectic spectrum is
/// `delta` by construction.
pub fn random_pd_with_spectrum(delta: &[f64], seed: u64, spread: f64) -> Result<Matrix> {
    if delta.is_empty() || delta.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::domain("symplectic spectrum must be non-empty and positive"));
    }
    let n = delta.len();
    let w = random_symplectic(n, seed, spread)?;
    let blocks: Vec<Matrix> = delta.iter().map(|&d| Matrix::identity(2, 2) * d).collect();
    let dd = expanding_sum(&blocks)?;
    Ok(symmetrize(&(&w * dd * w.transpose())))
}
