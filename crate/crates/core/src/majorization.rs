//! Weak supermajorization and majorization of real vectors, plus the two
//! constructions that bridge them to prescribed-diagonal matrices: the
//! intermediate vector `z <= x, z ≺ y`, and the real symmetric Horn
//! realization `diag(U·diag(y)·Uᵀ) = z`.
//!
//! `x ≺^w y` means that for every `k` the sum of the `k` smallest entries of
//! `x` is at least the sum of the `k` smallest entries of `y`; `x ≺ y`
//! additionally requires equal totals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Default absolute tolerance on partial sums (before scaling).
pub const TOL_MAJORIZATION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    WeakSuper,
    Majorize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub kind: OrderKind,
    /// `Σ_{j<=k} x↑_j − Σ_{j<=k} y↑_j` for `k = 1..n`.
    #[serde(rename = "slacks")]
    pub k_slacks: Vec<f64>,
    /// `Σx − Σy`.
    pub total_gap: f64,
    /// Effective tolerance: the requested `tol` times `max(1, ‖x‖₁ + ‖y‖₁)`.
    pub tol: f64,
    pub verdict: bool,
}

fn ascending(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Indices of `v` in ascending order of value; ties keep index order.
pub(crate) fn ascending_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    idx
}

fn effective_tol(x: &[f64], y: &[f64], tol: f64) -> f64 {
    let l1: f64 = x.iter().chain(y).map(|v| v.abs()).sum();
    tol * l1.max(1.0)
}

fn compare(x: &[f64], y: &[f64], tol: f64, kind: OrderKind) -> Result<MajorizationReport> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::domain(format!(
            "vectors must be non-empty and of equal length (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::domain("vectors must be finite"));
    }
    let tol = effective_tol(x, y, tol);
    let (xs, ys) = (ascending(x), ascending(y));
    let mut slacks = Vec::with_capacity(x.len());
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        slacks.push(sx - sy);
    }
    let total_gap = x.iter().sum::<f64>() - y.iter().sum::<f64>();
    let dominated = slacks.iter().all(|&s| s >= -tol);
    let verdict = match kind {
        OrderKind::WeakSuper => dominated,
        OrderKind::Majorize => dominated && total_gap.abs() <= tol,
    };
    Ok(MajorizationReport {
        kind,
        k_slacks: slacks,
        total_gap,
        tol,
        verdict,
    })
}

/// `x ≺^w y`.
pub fn weak_supermajorize(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    compare(x, y, tol, OrderKind::WeakSuper)
}

/// `x ≺ y`.
pub fn majorize(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    compare(x, y, tol, OrderKind::Majorize)
}

/// Given `x ≺^w y` with positive entries, returns positive `z` with
/// `z <= x` componentwise and `z ≺ y`.
///
/// The construction caps `x` at a water level `L` chosen so that
/// `Σ min(x_j, L) = Σ y`: only the largest entries are lowered, and the
/// ascending partial sums of the capped vector stay above those of `y`.
pub fn intermediate_vector(x: &[f64], y: &[f64], tol: f64) -> Result<Vec<f64>> {
    let report = weak_supermajorize(x, y, tol)?;
    if x.iter().chain(y).any(|&v| v <= 0.0) {
        return Err(Error::precondition("intermediate_vector needs positive entries"));
    }
    if !report.verdict {
        return Err(Error::precondition("x is not weakly supermajorized by y"));
    }
    if report.total_gap <= report.tol {
        return Ok(x.to_vec());
    }

    let xs = ascending(x);
    let n = xs.len();
    let target: f64 = y.iter().sum();
    let mut below = 0.0;
    let mut level = None;
    for (m, &xm) in xs.iter().enumerate() {
        // entries m.. are capped: below + (n - m)·L = target
        let l = (target - below) / (n - m) as f64;
        if l <= xm {
            level = Some(l);
            break;
        }
        below += xm;
    }
    let level = level.ok_or_else(|| {
        Error::internal("intermediate_vector", "water level exceeds every entry of x")
    })?;
    let z: Vec<f64> = x.iter().map(|&v| v.min(level)).collect();

    if z.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::internal("intermediate_vector", "non-positive entry in z"));
    }
    if !majorize(&z, y, tol)?.verdict {
        return Err(Error::internal("intermediate_vector", "z ≺ y failed verification"));
    }
    Ok(z)
}

/// Orthogonal `U` with `diag(U·diag(y)·Uᵀ) = z`, for `z ≺ y`.
///
/// Targets are placed in ascending order. For the current smallest target
/// `t`, the two remaining diagonal values adjacent to `t` in sorted order
/// are rotated together so that one of them becomes exactly `t`; the
/// untouched part of the matrix stays diagonal throughout.
pub fn horn_realize(z: &[f64], y: &[f64], tol: f64) -> Result<Matrix> {
    let report = majorize(z, y, tol)?;
    if !report.verdict {
        return Err(Error::domain("z is not majorized by y"));
    }
    let n = z.len();
    let mut u = Matrix::identity(n, n);
    // (position, current diagonal value) of the not-yet-fixed part
    let mut active: Vec<(usize, f64)> = y.iter().copied().enumerate().collect();
    let mut position_of_target = vec![0usize; n];

    for &target_idx in &ascending_order(z) {
        let t = z[target_idx];
        active.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let last = active.len() - 1;
        let fixed = if let Some(j) = active.iter().position(|&(_, v)| v == t) {
            j
        } else {
            match active.iter().rposition(|&(_, v)| v <= t) {
                None => 0,
                Some(j) if j == last => last,
                Some(j) => {
                    let (p, lo) = active[j];
                    let (q, hi) = active[j + 1];
                    let s2 = ((t - lo) / (hi - lo)).clamp(0.0, 1.0);
                    let (s, c) = (s2.sqrt(), (1.0 - s2).sqrt());
                    for col in 0..n {
                        let (up, uq) = (u[(p, col)], u[(q, col)]);
                        u[(p, col)] = c * up + s * uq;
                        u[(q, col)] = -s * up + c * uq;
                    }
                    active[j + 1].1 = lo + hi - t;
                    j
                }
            }
        };
        position_of_target[target_idx] = active[fixed].0;
        active.remove(fixed);
    }

    let u = Matrix::from_fn(n, n, |k, col| u[(position_of_target[k], col)]);

    let orth = (u.transpose() * &u - Matrix::identity(n, n)).norm();
    if orth > 1e-12 * n as f64 {
        return Err(Error::internal("horn_realize", format!("U lost orthogonality ({orth:e})")));
    }
    let realized = diag_of_conjugation(&u, y);
    let worst = realized
        .iter()
        .zip(z)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if worst > report.tol.max(1e-12 * max_abs(y)) {
        return Err(Error::internal(
            "horn_realize",
            format!("diagonal misses its target by {worst:e}"),
        ));
    }
    Ok(u)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `diag(U·diag(y)·Uᵀ)`.
pub fn diag_of_conjugation(u: &Matrix, y: &[f64]) -> Vec<f64> {
    (0..u.nrows())
        .map(|i| (0..u.ncols()).map(|j| u[(i, j)] * u[(i, j)] * y[j]).sum())
        .collect()
}
