//! Symplectic eigenvalues and Williamson factorizations.
//!
//! For positive definite `A` of order `2n` the symplectic eigenvalues are
//! the moduli of the (purely imaginary, paired) eigenvalues of `J·A`. They
//! are computed here from `K = A^{1/2} J A^{1/2}`, which is exactly
//! skew-symmetric and has the same spectrum, by bringing `K` to its real
//! canonical form with an orthogonal `O`:
//!
//! ```text
//! Oᵀ K O = [[0, D], [-D, 0]],   D = diag(δ_1 <= ... <= δ_n)
//! ```
//!
//! `W = A^{1/2} O (D ⊕ D)^{-1/2}` is then symplectic and `A = W (D ⊕ D) Wᵀ`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, half_order, skew_part, spectral_apply, sym_eigen_sorted, Matrix};
use crate::means::MeanSpec;
use crate::symplectic::{is_symplectic, j_times, scale_for, standard_j};

/// Relative asymmetry above which an input is rejected rather than
/// symmetrized.
const SYMMETRY_REJECT: f64 = 1e-8;
/// Smallest admissible `λ_min / λ_max`.
const TOL_PD: f64 = 1e-14;
/// Eigenvalue moduli closer than this (relative to the largest) are treated
/// as one degenerate group.
const CLUSTER_TOL: f64 = 1e-8;

/// Default tolerance for the spectral routines.
pub const TOL_SPECTRAL: f64 = 1e-8;

/// A symmetric positive definite matrix of even order.
#[derive(Debug, Clone, PartialEq)]
pub struct PdMatrix {
    a: Matrix,
    n: usize,
    symmetry_residual: f64,
    eigenvalues: DVector<f64>,
    eigenvectors: Matrix,
}

impl PdMatrix {
    /// Validates and symmetrizes `m`. Inputs whose asymmetry exceeds `1e-8`
    /// relative, or whose smallest eigenvalue is not above
    /// `1e-14 · λ_max`, are rejected.
    pub fn new(m: Matrix) -> Result<Self> {
        let n = half_order(&m)?;
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::precondition("matrix has non-finite entries"));
        }
        let symmetry_residual = frobenius(&(&m - m.transpose()));
        if symmetry_residual > SYMMETRY_REJECT * frobenius(&m) {
            return Err(Error::precondition(format!(
                "matrix is not symmetric (‖A − Aᵀ‖_F = {symmetry_residual:e})"
            )));
        }
        let a = crate::linalg::symmetrize(&m);
        let (eigenvalues, eigenvectors) = sym_eigen_sorted(&a);
        let lo = eigenvalues[0];
        let hi = eigenvalues[eigenvalues.len() - 1];
        if !(lo > 0.0 && lo > TOL_PD * hi) {
            return Err(Error::precondition(format!(
                "matrix is not positive definite (eigenvalues in [{lo:e}, {hi:e}])"
            )));
        }
        Ok(PdMatrix {
            a,
            n,
            symmetry_residual,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn into_matrix(self) -> Matrix {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Asymmetry of the input before symmetrization.
    pub fn symmetry_residual(&self) -> f64 {
        self.symmetry_residual
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `A^{1/2}`.
    pub fn sqrt(&self) -> Matrix {
        spectral_apply(&self.eigenvalues, &self.eigenvectors, f64::sqrt)
    }

    /// `WᵀAW`, re-validated.
    pub fn congruence(&self, w: &Matrix) -> Result<PdMatrix> {
        PdMatrix::new(w.transpose() * &self.a * w)
    }
}

/// `δ(A)`: the symplectic eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymplecticSpectrum {
    pub delta: Vec<f64>,
}

impl SymplecticSpectrum {
    /// `Σ_{j<=k} δ_j`.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.delta[..k].iter().sum()
    }
}

/// `A = W (D ⊕ D) Wᵀ` with `W` symplectic and `delta` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonFactorization {
    pub w: Matrix,
    pub delta: Vec<f64>,
    /// `‖A − W(D⊕D)Wᵀ‖_F`.
    pub residual: f64,
    /// `‖WᵀJW − J‖_F`.
    pub symplectic_residual: f64,
}

impl WilliamsonFactorization {
    /// `D ⊕ D`.
    pub fn normal_form(&self) -> Matrix {
        let d = DVector::from_iterator(
            2 * self.delta.len(),
            self.delta.iter().chain(self.delta.iter()).copied(),
        );
        Matrix::from_diagonal(&d)
    }

    /// The symplectic `V = W^{-T} = JᵀWJ`, which diagonalizes by congruence:
    /// `VᵀAV = D ⊕ D`.
    pub fn diagonalizer(&self) -> Matrix {
        // JᵀWJ = -J(WJ); WJ = -(J Wᵀ)ᵀ
        let wj = -j_times(&self.w.transpose()).transpose();
        -j_times(&wj)
    }
}

/// `(q1, q2, δ)` with `q1ᵀ K q2 = δ > 0`.
type Pair = (DVector<f64>, DVector<f64>, f64);

struct CanonicalSkew {
    o: Matrix,
    delta: Vec<f64>,
    off: f64,
}

fn orthogonalize_against(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(v);
            v.axpy(-c, b, 1.0);
        }
    }
}

/// Pairs `(q1, q2, δ)` read off the real Schur form of `K`. For a skew
/// matrix the quasi-triangular factor is block diagonal with `2 × 2` skew
/// blocks. Stays backward stable when symplectic eigenvalues are close but
/// not equal, where pairing eigenvectors of `KᵀK` loses accuracy. `None` when the block structure is not as expected.
fn schur_pairs(k: &Matrix) -> Option<Vec<Pair>> {
    let dim = k.nrows();
    let (q, t) = k.clone().try_schur(f64::EPSILON, 10_000)?.unpack();
    let scale = frobenius(k);
    let mut pairs = Vec::with_capacity(dim / 2);
    let mut i = 0;
    while i < dim {
        if i + 1 == dim || t[(i + 1, i)].abs() <= 1e-12 * scale {
            return None;
        }
        if i + 2 < dim && t[(i + 2, i + 1)].abs() > 1e-10 * scale {
            return None;
        }
        let d = 0.5 * (t[(i, i + 1)] - t[(i + 1, i)]);
        let (a, b) = (q.column(i).into_owned(), q.column(i + 1).into_owned());
        pairs.push(if d > 0.0 { (a, b, d) } else { (b, a, -d) });
        i += 2;
    }
    Some(pairs)
}

/// Real canonical form of a skew-symmetric matrix of order `2n` with
/// nonsingular spectrum. See the module docs for the layout.
fn canonical_skew(k: &Matrix, pairing_tol: f64) -> Result<CanonicalSkew> {
    let scale = frobenius(k);
    // eigenvectors of KᵀK are exact on structured inputs; the Schur route
    // takes over when they pair poorly
    let first = eigen_pairs(k).map(|p| assemble_canonical(k, p));
    let form = match first {
        Ok(f) if f.off <= 1e-13 * scale => f,
        first => match (first, schur_pairs(k).map(|p| assemble_canonical(k, p))) {
            (Ok(a), Some(b)) => if b.off < a.off { b } else { a },
            (Ok(a), None) => a,
            (Err(_), Some(b)) => b,
            (Err(e), None) => return Err(e),
        },
    };
    if form.off > pairing_tol * scale {
        return Err(Error::numerical(format!(
            "canonical skew form did not pair (off-block residual {:e})",
            form.off
        )));
    }
    Ok(form)
}

/// Pairing from the eigenvectors of `KᵀK`.
fn eigen_pairs(k: &Matrix) -> Result<Vec<Pair>> {
    let dim = k.nrows();
    let n = dim / 2;
    // KᵀK = -K² carries each δ² twice
    let (mu, v) = sym_eigen_sorted(&(k.transpose() * k));
    let moduli: Vec<f64> = mu.iter().map(|m| m.max(0.0).sqrt()).collect();
    let top = moduli[dim - 1];
    if !(top > 0.0) {
        return Err(Error::numerical("skew matrix is zero"));
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0];
    for i in 1..dim {
        if moduli[i] - moduli[i - 1] <= CLUSTER_TOL * top || current.len() % 2 == 1 {
            current.push(i);
        } else {
            groups.push(std::mem::take(&mut current));
            current.push(i);
        }
    }
    if current.len() % 2 == 1 {
        return Err(Error::numerical(
            "eigenvalue moduli of A^{1/2}JA^{1/2} do not pair up",
        ));
    }
    groups.push(current);

    let mut pairs: Vec<Pair> = Vec::with_capacity(n);
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(dim);
    for group in &groups {
        let basis: Vec<DVector<f64>> = group.iter().map(|&i| v.column(i).into_owned()).collect();
        for _ in 0..group.len() / 2 {
            let mut best: Option<DVector<f64>> = None;
            let mut best_norm = 0.0;
            for b in &basis {
                let mut c = b.clone();
                orthogonalize_against(&mut c, &accepted);
                let nc = c.norm();
                if nc > best_norm {
                    best_norm = nc;
                    best = Some(c);
                }
            }
            let q1 = match best {
                Some(c) if best_norm > 0.5 => c / best_norm,
                _ => return Err(Error::numerical("degenerate group lost rank")),
            };
            // q2 = -K q1 / ‖K q1‖, kept inside the group's invariant subspace
            let kq = -(k * &q1);
            let mut q2 = DVector::zeros(dim);
            for b in &basis {
                q2.axpy(b.dot(&kq), b, 1.0);
            }
            accepted.push(q1.clone());
            orthogonalize_against(&mut q2, &accepted);
            let n2 = q2.norm();
            if !(n2 > 0.0) {
                return Err(Error::numerical("zero symplectic eigenvalue encountered"));
            }
            let q2 = q2 / n2;
            accepted.push(q2.clone());
            let d = q1.dot(&(k * &q2));
            if !(d > 0.0) {
                return Err(Error::numerical(format!("non-positive pair value {d:e}")));
            }
            pairs.push((q1, q2, d));
        }
    }
    Ok(pairs)
}

/// Rotating `(q1, q2)` inside their plane leaves the canonical block
/// unchanged. Pick the rotation that points `q1` at the coordinate (from the
/// first half, where possible) on which the plane is heaviest, so
/// already-normal inputs give coordinate vectors.
fn fix_pair_phase(q1: DVector<f64>, q2: DVector<f64>, n: usize) -> (DVector<f64>, DVector<f64>) {
    let weight = |i: usize| q1[i] * q1[i] + q2[i] * q2[i];
    let heaviest = |range: std::ops::Range<usize>| {
        range.fold((0, -1.0), |best, i| if weight(i) > best.1 { (i, weight(i)) } else { best })
    };
    let (mut m, w) = heaviest(0..n);
    if w <= 1e-24 {
        m = heaviest(0..2 * n).0;
    }
    let r = weight(m).sqrt();
    let (c, s) = (q1[m] / r, q2[m] / r);
    (&q1 * c + &q2 * s, &q2 * c - &q1 * s)
}

fn assemble_canonical(k: &Matrix, mut pairs: Vec<Pair>) -> CanonicalSkew {
    let dim = k.nrows();
    let n = dim / 2;
    pairs.sort_by(|x, y| x.2.total_cmp(&y.2));
    let mut o = Matrix::zeros(dim, dim);
    let mut delta = Vec::with_capacity(n);
    for (j, (q1, q2, d)) in pairs.into_iter().enumerate() {
        let (q1, q2) = fix_pair_phase(q1, q2, n);
        o.set_column(j, &q1);
        o.set_column(n + j, &q2);
        delta.push(d);
    }

    let mut target = Matrix::zeros(dim, dim);
    for (j, &d) in delta.iter().enumerate() {
        target[(j, n + j)] = d;
        target[(n + j, j)] = -d;
    }
    let off = frobenius(&(o.transpose() * k * &o - target));
    CanonicalSkew { o, delta, off }
}

fn sqrt_j_sqrt(a: &PdMatrix) -> (Matrix, Matrix) {
    let s = a.sqrt();
    let k = skew_part(&(&s * j_times(&s)));
    (s, k)
}

/// `δ(A)`. `tol` bounds the off-block residual of the canonical skew form
/// relative to `‖A^{1/2}JA^{1/2}‖_F`.
pub fn symplectic_eigenvalues(a: &PdMatrix, tol: f64) -> Result<SymplecticSpectrum> {
    if a.n() == 1 {
        // δ = √det A, which the square-root route only reproduces to rounding
        let m = a.matrix();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if det > 0.0 {
            return Ok(SymplecticSpectrum { delta: vec![det.sqrt()] });
        }
    }
    let (_, k) = sqrt_j_sqrt(a);
    let form = canonical_skew(&k, tol)?;
    Ok(SymplecticSpectrum { delta: form.delta })
}

/// Williamson factorization with residual verification against `tol`
/// (reconstruction relative to `‖A‖_F`, symplecticity relative to
/// `max(1, ‖W‖_F²)`).
pub fn williamson(a: &PdMatrix, tol: f64) -> Result<WilliamsonFactorization> {
    let (s, k) = sqrt_j_sqrt(a);
    let CanonicalSkew { o, delta, .. } = canonical_skew(&k, tol)?;
    let n = a.n();
    let mut w = s * o;
    for (j, &d) in delta.iter().enumerate() {
        let f = 1.0 / d.sqrt();
        w.column_mut(j).scale_mut(f);
        w.column_mut(n + j).scale_mut(f);
    }
    let mut fact = WilliamsonFactorization {
        w,
        delta,
        residual: 0.0,
        symplectic_residual: 0.0,
    };
    let rebuilt = &fact.w * fact.normal_form() * fact.w.transpose();
    fact.residual = frobenius(&(a.matrix() - rebuilt));
    let check = is_symplectic(&fact.w, tol)?;
    fact.symplectic_residual = check.residual;
    if fact.residual > tol * frobenius(a.matrix()) {
        return Err(Error::numerical(format!(
            "Williamson reconstruction residual {:e} too large",
            fact.residual
        )));
    }
    if !check.holds {
        return Err(Error::numerical(format!(
            "Williamson factor is not symplectic (residual {:e}, scale {:e})",
            check.residual,
            scale_for(&fact.w)
        )));
    }
    Ok(fact)
}

/// `diag_M(A) = [M(a_jj, a_{n+j,n+j})]_j` in the original coordinate order.
/// Only the diagonal is read; its entries must be positive.
pub fn symplectic_diag(a: &Matrix, mean: &MeanSpec) -> Result<Vec<f64>> {
    let n = half_order(a)?;
    (0..n)
        .map(|j| mean.evaluate(a[(j, j)], a[(n + j, n + j)]))
        .collect()
}

/// Sorted moduli of all `2n` eigenvalues of `J·A`, computed from the
/// (non-normal) product through a general real Schur decomposition. Used as
/// an independent route to `δ(A)`.
pub fn ja_spectrum_moduli(a: &Matrix) -> Result<Vec<f64>> {
    let n = half_order(a)?;
    let ja = standard_j(n)? * a;
    Ok(sorted_moduli(&ja))
}

/// Sorted moduli of all eigenvalues of `A^{1/2}JA^{1/2}` through the same
/// general eigenvalue route.
pub fn sqrt_form_spectrum_moduli(a: &PdMatrix) -> Vec<f64> {
    let (s, _) = sqrt_j_sqrt(a);
    sorted_moduli(&(&s * standard_j(a.n()).expect("n >= 1") * &s))
}

fn sorted_moduli(m: &Matrix) -> Vec<f64> {
    let mut moduli: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    moduli
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::expanding_sum;

    fn pd(rows: usize, data: &[f64]) -> PdMatrix {
        PdMatrix::new(Matrix::from_row_slice(rows, rows, data)).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        for n in 1..5 {
            let a = PdMatrix::new(Matrix::identity(2 * n, 2 * n)).unwrap();
            let d = symplectic_eigenvalues(&a, TOL_SPECTRAL).unwrap();
            assert_eq!(d.delta.len(), n);
            assert!(d.delta.iter().all(|x| (x - 1.0).abs() < 1e-14), "{:?}", d.delta);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let d = symplectic_eigenvalues(&pd(2, &[2.0, 1.0, 1.0, 1.0]), TOL_SPECTRAL).unwrap();
        assert!((d.delta[0] - 1.0).abs() < 1e-14);
        let d = symplectic_eigenvalues(&pd(2, &[2.0, 0.0, 0.0, 8.0]), TOL_SPECTRAL).unwrap();
        assert!((d.delta[0] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn expanding_sum_concatenates_spectra() {
        let a = Matrix::identity(2, 2);
        let b = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 9.0]);
        let ab = PdMatrix::new(expanding_sum(&[b, a]).unwrap()).unwrap();
        let d = symplectic_eigenvalues(&ab, TOL_SPECTRAL).unwrap();
        assert!((d.delta[0] - 1.0).abs() < 1e-14 && (d.delta[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn williamson_of_diag_2_8() {
        let a = pd(2, &[2.0, 0.0, 0.0, 8.0]);
        let f = williamson(&a, TOL_SPECTRAL).unwrap();
        assert!((f.delta[0] - 4.0).abs() < 1e-14);
        assert!(f.residual < 1e-14);
        // W = diag(1/√2, √2) is one valid factor; ours must agree up to an
        // orthogonal-symplectic rotation, i.e. W Wᵀ is the same
        let expect = Matrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0]);
        assert!((&f.w * f.w.transpose() - expect).norm() < 1e-14);
        assert!((f.w.determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn williamson_of_normal_form() {
        let a = pd(4, &[1., 0., 0., 0., 0., 3., 0., 0., 0., 0., 1., 0., 0., 0., 0., 3.]);
        let f = williamson(&a, TOL_SPECTRAL).unwrap();
        assert!((f.delta[0] - 1.0).abs() < 1e-14 && (f.delta[1] - 3.0).abs() < 1e-14);
        let rebuilt = &f.w * f.normal_form() * f.w.transpose();
        assert!((rebuilt - a.matrix()).norm() < 1e-13);
        let v = f.diagonalizer();
        assert!((v.transpose() * a.matrix() * &v - f.normal_form()).norm() < 1e-13);
    }

    #[test]
    fn degenerate_spectrum_is_handled() {
        // δ = (2, 2, 2) with a non-trivial symplectic frame
        let a = crate::random::random_pd_with_spectrum(&[2.0, 2.0, 2.0], 9, 1.0).unwrap();
        let a = PdMatrix::new(a).unwrap();
        let f = williamson(&a, TOL_SPECTRAL).unwrap();
        for d in &f.delta {
            assert!((d - 2.0).abs() < 1e-9);
        }
        assert!(f.symplectic_residual < 1e-8);
    }

    #[test]
    fn symplectic_diag_examples() {
        let a = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 8.0]);
        assert_eq!(symplectic_diag(&a, &MeanSpec::geometric()).unwrap(), vec![4.0]);
        assert_eq!(symplectic_diag(&a, &MeanSpec::arithmetic()).unwrap(), vec![5.0]);
        let c = Matrix::identity(6, 6) * 2.5;
        for m in MeanSpec::builtins() {
            assert_eq!(symplectic_diag(&c, &m).unwrap(), vec![2.5; 3]);
        }
    }

    #[test]
    fn rejects_non_pd_and_asymmetric() {
        let neg = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(PdMatrix::new(neg), Err(Error::Precondition(_))));
        let asym = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(PdMatrix::new(asym), Err(Error::Precondition(_))));
        assert!(matches!(PdMatrix::new(Matrix::identity(3, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn ja_route_agrees_on_small_example() {
        let a = pd(2, &[2.0, 1.0, 1.0, 1.0]);
        let m = ja_spectrum_moduli(a.matrix()).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-12 && (m[1] - 1.0).abs() < 1e-12);
    }
}
