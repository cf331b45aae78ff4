//! The symplectic form and the structural operations built on it.
//!
//! Matrices of order `2n` are split into `n x n` quadrants
//! `[[P, Q], [R, S]]`. `J_{2n} = [[0, I], [-I, 0]]`, and `W` is symplectic
//! when `WᵀJW = J`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{even_half, frobenius, half_order, Matrix};

/// Default relative tolerance for symplecticity predicates.
pub const TOL_SYMP: f64 = 1e-8;

/// `J_{2n}`.
pub fn standard_j(n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::domain("standard_j needs n >= 1"));
    }
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    Ok(j)
}

// J·M without forming J: rows are permuted and half of them negated.
pub(crate) fn j_times(m: &Matrix) -> Matrix {
    let n = m.nrows() / 2;
    Matrix::from_fn(m.nrows(), m.ncols(), |i, c| {
        if i < n {
            m[(n + i, c)]
        } else {
            -m[(i - n, c)]
        }
    })
}

/// `XᵀJX` for any `2n x m` matrix.
pub(crate) fn symplectic_gram(x: &Matrix) -> Matrix {
    x.transpose() * j_times(x)
}

pub(crate) fn scale_for(m: &Matrix) -> f64 {
    let f = frobenius(m);
    (f * f).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticCheck {
    pub holds: bool,
    /// `‖WᵀJW − J‖_F`.
    pub residual: f64,
}

/// `‖WᵀJW − J‖_F <= tol · max(1, ‖W‖_F²)`.
pub fn is_symplectic(w: &Matrix, tol: f64) -> Result<SymplecticCheck> {
    let n = half_order(w)?;
    let residual = frobenius(&(symplectic_gram(w) - standard_j(n)?));
    Ok(SymplecticCheck {
        holds: residual <= tol * scale_for(w),
        residual,
    })
}

/// Residuals of the quadrant-wise characterization of symplecticity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockCriterion {
    /// `‖PᵀS − RᵀQ − I‖_F`.
    pub cross_residual: f64,
    /// `‖PᵀR − (PᵀR)ᵀ‖_F`.
    pub pr_asymmetry: f64,
    /// `‖QᵀS − (QᵀS)ᵀ‖_F`.
    pub qs_asymmetry: f64,
    pub holds: bool,
}

pub(crate) struct Quadrants {
    pub p: Matrix,
    pub q: Matrix,
    pub r: Matrix,
    pub s: Matrix,
}

pub(crate) fn quadrants(w: &Matrix) -> Result<Quadrants> {
    let n = half_order(w)?;
    Ok(Quadrants {
        p: w.view((0, 0), (n, n)).into_owned(),
        q: w.view((0, n), (n, n)).into_owned(),
        r: w.view((n, 0), (n, n)).into_owned(),
        s: w.view((n, n), (n, n)).into_owned(),
    })
}

pub fn block_criterion(w: &Matrix, tol: f64) -> Result<BlockCriterion> {
    let n = half_order(w)?;
    let Quadrants { p, q, r, s } = quadrants(w)?;
    let cross = p.transpose() * &s - r.transpose() * &q - Matrix::identity(n, n);
    let pr = p.transpose() * &r;
    let qs = q.transpose() * &s;
    let cross_residual = frobenius(&cross);
    let pr_asymmetry = frobenius(&(&pr - pr.transpose()));
    let qs_asymmetry = frobenius(&(&qs - qs.transpose()));
    let thr = tol * scale_for(w);
    Ok(BlockCriterion {
        cross_residual,
        pr_asymmetry,
        qs_asymmetry,
        holds: cross_residual <= thr && pr_asymmetry <= thr && qs_asymmetry <= thr,
    })
}

/// The expanding sum `A_1 ⊞ ... ⊞ A_s`: each quadrant of the result is the
/// direct sum of the corresponding quadrants of the blocks.
pub fn expanding_sum(blocks: &[Matrix]) -> Result<Matrix> {
    if blocks.is_empty() {
        return Err(Error::domain("expanding_sum needs at least one block"));
    }
    let halves = blocks.iter().map(half_order).collect::<Result<Vec<_>>>()?;
    let n: usize = halves.iter().sum();
    let mut out = Matrix::zeros(2 * n, 2 * n);
    let mut offset = 0;
    for (block, &m) in blocks.iter().zip(&halves) {
        for a in 0..m {
            for b in 0..m {
                out[(offset + a, offset + b)] = block[(a, b)];
                out[(offset + a, n + offset + b)] = block[(a, m + b)];
                out[(n + offset + a, offset + b)] = block[(m + a, b)];
                out[(n + offset + a, n + offset + b)] = block[(m + a, m + b)];
            }
        }
        offset += m;
    }
    Ok(out)
}

/// Block sizes `m_1, ..., m_q` summing to the half-order `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    sizes: Vec<usize>,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::domain("partition sizes must be positive and non-empty"));
        }
        Ok(BlockPartition { sizes })
    }

    /// The finest partition `(1, ..., 1)`.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Block index of each half-coordinate.
    fn labels(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &m)| std::iter::repeat_n(b, m))
            .collect()
    }
}

impl std::str::FromStr for BlockPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

/// The s-pinching relative to `partition`: zeroes every entry coupling
/// half-coordinates from different blocks, in all four quadrants.
pub fn s_pinching(a: &Matrix, partition: &BlockPartition) -> Result<Matrix> {
    let n = half_order(a)?;
    if partition.total() != n {
        return Err(Error::domain(format!(
            "partition sums to {} but the half-order is {n}",
            partition.total()
        )));
    }
    let labels = partition.labels();
    Ok(Matrix::from_fn(2 * n, 2 * n, |i, j| {
        if labels[i % n] == labels[j % n] {
            a[(i, j)]
        } else {
            0.0
        }
    }))
}

/// A `2n x 2k` matrix `X = [X₁ X₂]` with `XᵀJ_{2n}X = J_{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticFrame {
    x: Matrix,
    n: usize,
    k: usize,
    residual: f64,
}

impl SymplecticFrame {
    pub fn new(x: Matrix, tol: f64) -> Result<Self> {
        let n = even_half(x.nrows())?;
        let k = even_half(x.ncols())?;
        if k > n {
            return Err(Error::domain(format!(
                "frame has 2k = {} columns but only 2n = {} rows",
                2 * k,
                2 * n
            )));
        }
        let residual = frobenius(&(symplectic_gram(&x) - standard_j(k)?));
        if residual > tol * scale_for(&x) {
            return Err(Error::precondition(format!(
                "XᵀJX deviates from J_{} by {residual:e}",
                2 * k
            )));
        }
        Ok(SymplecticFrame { x, n, k, residual })
    }

    /// Columns `1..k` and `n+1..n+k` of a square matrix.
    pub fn from_square(w: &Matrix, k: usize, tol: f64) -> Result<Self> {
        Self::new(extract_frame_columns(w, k)?, tol)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.x
    }

    pub fn into_matrix(self) -> Matrix {
        self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `‖XᵀJX − J_{2k}‖_F` at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// `[W[:, 0..k], W[:, n..n+k]]` of a `2n x 2n` matrix.
pub fn extract_frame_columns(w: &Matrix, k: usize) -> Result<Matrix> {
    let n = half_order(w)?;
    if k == 0 || k > n {
        return Err(Error::domain(format!("k = {k} out of range 1..={n}")));
    }
    let mut x = Matrix::zeros(2 * n, 2 * k);
    for j in 0..k {
        x.set_column(j, &w.column(j));
        x.set_column(k + j, &w.column(n + j));
    }
    Ok(x)
}

// ω(a, b) = aᵀJb for a vector pair.
fn omega(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() / 2;
    (0..n).map(|i| a[i] * b[n + i] - a[n + i] * b[i]).sum()
}

struct ConjugatePair {
    u: Vec<f64>,
    v: Vec<f64>,
}

// Removes the components of c along accepted pairs (ω(u, v) = 1), so that
// ω(c, u) = ω(c, v) = 0 afterwards.
fn skew_project(c: &mut [f64], pairs: &[ConjugatePair]) {
    for p in pairs {
        let alpha = -omega(c, &p.v);
        let beta = omega(c, &p.u);
        for (ci, (ui, vi)) in c.iter_mut().zip(p.u.iter().zip(&p.v)) {
            *ci += alpha * ui + beta * vi;
        }
    }
}

/// Extends a frame `[X₁ X₂]` to a symplectic `W = [X₁ Y₁ X₂ Y₂]`.
///
/// New conjugate pairs are produced by symplectic Gram–Schmidt on the
/// standard basis: every candidate is skew-projected (twice) against the
/// accepted pairs, and the candidate pair with the largest `|ω|` is taken
/// next.
pub fn complete_to_symplectic(frame: &SymplecticFrame, tol: f64) -> Result<Matrix> {
    let (n, k) = (frame.n(), frame.k());
    let x = frame.matrix();
    let dim = 2 * n;
    let col = |j: usize| -> Vec<f64> { x.column(j).iter().copied().collect() };

    let mut pairs: Vec<ConjugatePair> = (0..k)
        .map(|j| ConjugatePair {
            u: col(j),
            v: col(k + j),
        })
        .collect();

    let scale = scale_for(x);
    for step in k..n {
        let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut c = vec![0.0; dim];
            c[i] = 1.0;
            skew_project(&mut c, &pairs);
            skew_project(&mut c, &pairs);
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-10 * scale {
                c.iter_mut().for_each(|v| *v /= norm);
                candidates.push(c);
            }
        }
        let mut best = (0usize, 0usize, 0.0f64);
        for a in 0..candidates.len() {
            for b in (a + 1)..candidates.len() {
                let w = omega(&candidates[a], &candidates[b]);
                if w.abs() > best.2.abs() {
                    best = (a, b, w);
                }
            }
        }
        let (a, b, w) = best;
        if w.abs() <= tol {
            return Err(Error::Degenerate(format!(
                "symplectic Gram-Schmidt broke down at pair {} of {n} (pivot {w:e})",
                step + 1
            )));
        }
        let s = w.abs().sqrt();
        let u: Vec<f64> = candidates[a].iter().map(|v| v / s).collect();
        let v: Vec<f64> = candidates[b].iter().map(|v| v * w.signum() / s).collect();
        pairs.push(ConjugatePair { u, v });
    }

    let mut out = Matrix::zeros(dim, dim);
    for j in 0..k {
        out.set_column(j, &x.column(j));
        out.set_column(n + j, &x.column(k + j));
    }
    for (idx, p) in pairs.iter().enumerate().skip(k) {
        for i in 0..dim {
            out[(i, idx)] = p.u[i];
            out[(i, n + idx)] = p.v[i];
        }
    }
    let check = is_symplectic(&out, tol)?;
    if !check.holds {
        return Err(Error::numerical(format!(
            "completed matrix has symplectic residual {:e}",
            check.residual
        )));
    }
    Ok(out)
}
