//! Symplectic Schur–Horn relations and the symplectic Ky Fan minimum
//! principle for generalized means.
//!
//! * [`schur_check`] compares `diag_M(A)` with `δ(A)` under `≺^w`; the
//!   relation is guaranteed whenever `sqrt(ab) <= M(a, b)`.
//! * [`horn_symplectic_realize`] builds a positive definite `A` with
//!   prescribed `diag_M(A) = x` and `δ(A) = y` for any `x ≺^w y` and any
//!   mean.
//! * [`kyfan_minimizer`], [`kyfan_objective`] and [`kyfan_search`] cover
//!   `Σ_{j<=k} δ↑_j = min { Σ_j M(b_jj, b_{k+j,k+j}) : B = XᵀAX, XᵀJX = J }`.
//! * [`equivalence_crosscheck`] tests, on sampled congruences of one
//!   matrix, that the `≺^w` verdict and the Ky Fan lower bound agree.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::matrix_to_json;
use crate::linalg::{symmetrize, Matrix};
use crate::majorization::{
    ascending_order, horn_realize, intermediate_vector, weak_supermajorize, MajorizationReport,
};
use crate::means::{dominates_geometric, MeanSpec};
use crate::random::{derive_seed, random_symplectic_with, rng_from_seed};
use crate::spectral::{symplectic_diag, symplectic_eigenvalues, williamson, PdMatrix};
use crate::symplectic::{expanding_sum, extract_frame_columns, SymplecticFrame};

/// Ratios this far below 1 are treated as rounding noise and clamped.
const RATIO_CLAMP: f64 = 1e-12;

/// Spreads of the symplectic sampling law, one per quarter of the budget.
pub const SEARCH_SPREADS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

fn mean_dominates(mean: &MeanSpec) -> bool {
    mean.dominates_geometric_claim().unwrap_or_else(|| {
        dominates_geometric(mean, 10_000, 0, 1e-12)
            .map(|r| r.holds)
            .unwrap_or(false)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurCheckReport {
    pub diag_m: Vec<f64>,
    pub delta: Vec<f64>,
    pub report: MajorizationReport,
    pub mean_dominates_geometric: bool,
}

impl SchurCheckReport {
    pub fn verdict(&self) -> bool {
        self.report.verdict
    }

    /// `{"verdict", "diag_m", "delta", "slacks", "total_gap", "mean_dominates_geometric"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.report.verdict,
            "diag_m": self.diag_m,
            "delta": self.delta,
            "slacks": self.report.k_slacks,
            "total_gap": self.report.total_gap,
            "mean_dominates_geometric": self.mean_dominates_geometric,
        })
    }
}

/// `diag_M(A) ≺^w δ(A)`? Informational when the mean does not dominate the
/// geometric mean.
pub fn schur_check(a: &PdMatrix, mean: &MeanSpec, tol: f64) -> Result<SchurCheckReport> {
    let diag_m = symplectic_diag(a.matrix(), mean)?;
    let delta = symplectic_eigenvalues(a, tol)?.delta;
    let report = weak_supermajorize(&diag_m, &delta, tol)?;
    Ok(SchurCheckReport {
        diag_m,
        delta,
        report,
        mean_dominates_geometric: mean_dominates(mean),
    })
}

/// An element `[[p, q], [r, s]]` of SL(2, ℝ) with `M(p² + q², r² + s²) = t`.
///
/// Uses `p = sqrt(t)`, `q = 0`, `r = sqrt(t − 1/t)`, `s = 1/sqrt(t)`: both
/// squared row norms equal `t`, so `M(t, t) = t` for every mean.
pub fn sl2_for_ratio(mean: &MeanSpec, t: f64) -> Result<[f64; 4]> {
    if !t.is_finite() || t < 1.0 - RATIO_CLAMP {
        return Err(Error::domain(format!("ratio must be >= 1, got {t}")));
    }
    let t = t.max(1.0);
    let p = t.sqrt();
    let s = 1.0 / p;
    let r = (t - 1.0 / t).max(0.0).sqrt();
    let got = mean.evaluate(p * p, r * r + s * s)?;
    if (got - t).abs() > 1e-10 * t {
        return Err(Error::internal(
            "sl2_for_ratio",
            format!("mean of row norms is {got}, wanted {t}"),
        ));
    }
    Ok([p, 0.0, r, s])
}

fn check_positive(v: &[f64], name: &str) -> Result<()> {
    if v.is_empty() || v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::domain(format!("{name} must be non-empty with positive entries")));
    }
    Ok(())
}

/// Positive definite `A` of order `2n` with `diag_M(A) = x` (original
/// coordinate order) and `δ(A) = sorted y`.
///
/// Pipeline: `z = intermediate_vector(x, y)`; orthogonal `U` with
/// `diag(U·diag(y↑)·Uᵀ) = z`; `B = Y' ⊕ Y'` for `Y' = U·diag(y↑)·Uᵀ`;
/// `A = W B Wᵀ` with `W` the expanding sum of SL(2) blocks scaling each
/// conjugate diagonal pair from `z_j` to `x_j`.
pub fn horn_symplectic_realize(x: &[f64], y: &[f64], mean: &MeanSpec, tol: f64) -> Result<PdMatrix> {
    check_positive(x, "x")?;
    check_positive(y, "y")?;
    let report = weak_supermajorize(x, y, tol)?;
    if !report.verdict {
        return Err(Error::domain("x is not weakly supermajorized by y"));
    }
    let n = x.len();
    let z = intermediate_vector(x, y, tol)?;
    let mut y_sorted = y.to_vec();
    y_sorted.sort_by(f64::total_cmp);
    let u = horn_realize(&z, &y_sorted, tol)?;

    let mut scaled = u.clone();
    for (j, &yj) in y_sorted.iter().enumerate() {
        scaled.column_mut(j).scale_mut(yj);
    }
    let y_rot = symmetrize(&(scaled * u.transpose()));
    let mut b = Matrix::zeros(2 * n, 2 * n);
    b.view_mut((0, 0), (n, n)).copy_from(&y_rot);
    b.view_mut((n, n), (n, n)).copy_from(&y_rot);

    let blocks = x
        .iter()
        .zip(&z)
        .map(|(&xj, &zj)| {
            let t = xj / zj;
            let t = if (1.0 - RATIO_CLAMP..1.0).contains(&t) { 1.0 } else { t };
            let [p, q, r, s] = sl2_for_ratio(mean, t)?;
            Ok(Matrix::from_row_slice(2, 2, &[p, q, r, s]))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = expanding_sum(&blocks)?;
    let a = PdMatrix::new(symmetrize(&(&w * b * w.transpose())))
        .map_err(|e| Error::internal("horn_symplectic_realize/assemble", e.to_string()))?;

    let diag = symplectic_diag(a.matrix(), mean)?;
    for (got, want) in diag.iter().zip(x) {
        if (got - want).abs() > tol * want.max(1.0) {
            return Err(Error::internal(
                "horn_symplectic_realize/diagonal",
                format!("diag_M entry {got} differs from {want}"),
            ));
        }
    }
    let delta = symplectic_eigenvalues(&a, tol)
        .map_err(|e| Error::internal("horn_symplectic_realize/spectrum", e.to_string()))?
        .delta;
    for (got, want) in delta.iter().zip(&y_sorted) {
        if (got - want).abs() > tol * want.max(1.0) {
            return Err(Error::internal(
                "horn_symplectic_realize/spectrum",
                format!("symplectic eigenvalue {got} differs from {want}"),
            ));
        }
    }
    Ok(a)
}

/// `Σ_{j<=k} M(b_jj, b_{k+j,k+j})` for `B = XᵀAX`.
pub fn kyfan_objective(a: &Matrix, frame: &SymplecticFrame, mean: &MeanSpec) -> Result<f64> {
    if a.nrows() != frame.matrix().nrows() || a.ncols() != a.nrows() {
        return Err(Error::domain(format!(
            "frame has {} rows but the matrix is {}x{}",
            frame.matrix().nrows(),
            a.nrows(),
            a.ncols()
        )));
    }
    objective_unchecked(a, frame.matrix(), mean)
}

// Only the 2k diagonal entries of XᵀAX are needed.
fn objective_unchecked(a: &Matrix, x: &Matrix, mean: &MeanSpec) -> Result<f64> {
    let k = x.ncols() / 2;
    let ax = a * x;
    let diag = |c: usize| x.column(c).dot(&ax.column(c));
    (0..k).map(|j| mean.evaluate(diag(j), diag(k + j))).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KyFanResult {
    pub k: usize,
    pub minimizer: SymplecticFrame,
    pub min_value: f64,
    pub delta_partial_sum: f64,
}

impl KyFanResult {
    /// `{"k", "min_value", "delta_partial", "frame"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "min_value": self.min_value,
            "delta_partial": self.delta_partial_sum,
            "frame": matrix_to_json(self.minimizer.matrix()),
        })
    }
}

fn check_k(a: &PdMatrix, k: usize) -> Result<()> {
    if k == 0 || k > a.n() {
        return Err(Error::domain(format!("k = {k} out of range 1..={}", a.n())));
    }
    Ok(())
}

/// The frame attaining the Ky Fan minimum: the first `k` columns of each
/// half of the symplectic `V` with `VᵀAV = D ⊕ D`, `D` ascending.
pub fn kyfan_minimizer(a: &PdMatrix, k: usize, mean: &MeanSpec, tol: f64) -> Result<KyFanResult> {
    check_k(a, k)?;
    let fact = williamson(a, tol)?;
    let v = fact.diagonalizer();
    let frame = SymplecticFrame::new(extract_frame_columns(&v, k)?, tol)?;
    let min_value = kyfan_objective(a.matrix(), &frame, mean)?;
    let delta_partial_sum: f64 = fact.delta[..k].iter().sum();
    if (min_value - delta_partial_sum).abs() > tol * delta_partial_sum.max(1.0) {
        return Err(Error::internal(
            "kyfan_minimizer",
            format!("objective {min_value} at the Williamson frame differs from {delta_partial_sum}"),
        ));
    }
    Ok(KyFanResult {
        k,
        minimizer: frame,
        min_value,
        delta_partial_sum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KyFanSearchReport {
    pub k: usize,
    pub budget: usize,
    pub best_value: f64,
    pub best_frame: Matrix,
    pub delta_partial_sum: f64,
    /// Samples whose objective fell below `Σ_{j<=k} δ↑_j − tol`.
    pub violations: usize,
}

impl KyFanSearchReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "budget": self.budget,
            "best_value": self.best_value,
            "delta_partial": self.delta_partial_sum,
            "violations": self.violations,
            "frame": matrix_to_json(&self.best_frame),
        })
    }
}

fn spread_for(index: usize, budget: usize) -> f64 {
    SEARCH_SPREADS[(index * SEARCH_SPREADS.len() / budget).min(SEARCH_SPREADS.len() - 1)]
}

// i-th sampled frame: columns (1..k, n+1..n+k) of a random symplectic matrix
// of order 2n, right-multiplied by a random symplectic matrix of order 2k.
fn sample_frame(n: usize, k: usize, seed: u64, index: usize, budget: usize) -> Result<Matrix> {
    let spread = spread_for(index, budget);
    let mut rng = rng_from_seed(derive_seed(seed, index as u64));
    let big = random_symplectic_with(n, spread, &mut rng)?;
    let small = random_symplectic_with(k, spread, &mut rng)?;
    Ok(extract_frame_columns(&big, k)? * small)
}

/// Randomized check of the Ky Fan lower bound. Samples are evaluated in
/// parallel; each derives its randomness from `(seed, index)`, so the report
/// does not depend on scheduling.
pub fn kyfan_search(
    a: &PdMatrix,
    k: usize,
    mean: &MeanSpec,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<KyFanSearchReport> {
    check_k(a, k)?;
    if budget == 0 {
        return Err(Error::domain("budget must be at least 1"));
    }
    let n = a.n();
    let delta_partial_sum = symplectic_eigenvalues(a, tol)?.partial_sum(k);
    let threshold = delta_partial_sum - tol;

    let values = (0..budget)
        .into_par_iter()
        .map(|i| {
            let x = sample_frame(n, k, seed, i, budget)?;
            objective_unchecked(a.matrix(), &x, mean)
        })
        .collect::<Result<Vec<f64>>>()?;

    let violations = values.iter().filter(|&&v| v < threshold).count();
    let (best_index, best_value) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best });
    let best_frame = sample_frame(n, k, seed, best_index, budget)?;

    Ok(KyFanSearchReport {
        k,
        budget,
        best_value,
        best_frame,
        delta_partial_sum,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceWitness {
    pub sample: usize,
    pub k: usize,
    pub objective: f64,
    pub delta_partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub samples: usize,
    /// Congruences `WᵀAW` with `diag_M(WᵀAW) ≺^w δ(A)`.
    pub schur_holds: usize,
    /// Congruences where some coordinate-frame Ky Fan objective fell below
    /// `Σ_{j<=k} δ↑_j`.
    pub kyfan_violations: usize,
    /// Samples where the two verdicts disagree.
    pub inconsistent: usize,
    /// Samples where `≺^w` held but a frame taken from `W` beat the bound.
    pub forward_violations: usize,
    pub first_kyfan_witness: Option<EquivalenceWitness>,
    pub consistent: bool,
}

/// Checks the two equivalent statements against each other on sampled
/// symplectic congruences `C = WᵀAW` (sample 0 is `W = I`).
///
/// For each `C`, with `z = diag_M(C)`:
/// * statement (i): `z ≺^w δ(A)`;
/// * statement (ii), backward direction: for every `k`, the frame `P ⊕ P`
///   picking the `k` coordinates with smallest `z` has objective
///   `Σ_{j<=k} z↑_j >= Σ_{j<=k} δ↑_j`;
/// * forward direction: when (i) holds, the frame `[W_{:,1..k}, W_{:,n+1..n+k}]`
///   on `A` respects the same bound.
pub fn equivalence_crosscheck(
    a: &PdMatrix,
    mean: &MeanSpec,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<EquivalenceReport> {
    let n = a.n();
    let delta = symplectic_eigenvalues(a, tol)?.delta;
    let partials: Vec<f64> = delta
        .iter()
        .scan(0.0, |acc, d| {
            *acc += d;
            Some(*acc)
        })
        .collect();

    struct Outcome {
        schur: bool,
        backward: bool,
        forward_violation: bool,
        witness: Option<EquivalenceWitness>,
    }

    let samples = budget.max(1);
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let w = if i == 0 {
                Matrix::identity(2 * n, 2 * n)
            } else {
                let mut rng = rng_from_seed(derive_seed(seed, i as u64));
                random_symplectic_with(n, spread_for(i, samples), &mut rng)?
            };
            let c = symmetrize(&(w.transpose() * a.matrix() * &w));
            let z = symplectic_diag(&c, mean)?;
            let schur = weak_supermajorize(&z, &delta, tol)?;
            let order = ascending_order(&z);

            let mut backward = true;
            let mut forward_violation = false;
            let mut witness = None;
            for k in 1..=n {
                let mut x = Matrix::zeros(2 * n, 2 * k);
                for (col, &idx) in order[..k].iter().enumerate() {
                    x[(idx, col)] = 1.0;
                    x[(n + idx, k + col)] = 1.0;
                }
                let frame = SymplecticFrame::new(x, tol)?;
                let value = kyfan_objective(&c, &frame, mean)?;
                if value < partials[k - 1] - schur.tol {
                    backward = false;
                    witness.get_or_insert(EquivalenceWitness {
                        sample: i,
                        k,
                        objective: value,
                        delta_partial: partials[k - 1],
                    });
                }
                if schur.verdict {
                    let fx = extract_frame_columns(&w, k)?;
                    let fwd = objective_unchecked(a.matrix(), &fx, mean)?;
                    if fwd < partials[k - 1] - schur.tol {
                        forward_violation = true;
                    }
                }
            }
            Ok(Outcome {
                schur: schur.verdict,
                backward,
                forward_violation,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let schur_holds = outcomes.iter().filter(|o| o.schur).count();
    let kyfan_violations = outcomes.iter().filter(|o| !o.backward).count();
    let inconsistent = outcomes.iter().filter(|o| o.schur != o.backward).count();
    let forward_violations = outcomes.iter().filter(|o| o.forward_violation).count();
    let first_kyfan_witness = outcomes.into_iter().find_map(|o| o.witness);
    Ok(EquivalenceReport {
        samples,
        schur_holds,
        kyfan_violations,
        inconsistent,
        forward_violations,
        first_kyfan_witness,
        consistent: inconsistent == 0 && forward_violations == 0,
    })
}
