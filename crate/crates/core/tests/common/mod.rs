#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympectra::random::{random_pd, random_pd_with_spectrum};
use sympectra::{Matrix, PdMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Half-orders cycled through by the sweeps.
pub const ORDERS: [usize; 5] = [1, 2, 3, 4, 6];

/// Random positive definite test matrix; alternates between the two
/// generators so that both generic and structured inputs are covered.
pub fn random_pd_matrix(n: usize, seed: u64) -> PdMatrix {
    let m = if seed.is_multiple_of(2) {
        random_pd(n, seed, 1.0).unwrap()
    } else {
        let mut r = rng(seed ^ 0xA5A5);
        let delta: Vec<f64> = (0..n).map(|_| r.random_range(0.2..5.0)).collect();
        random_pd_with_spectrum(&delta, seed, 0.8).unwrap()
    };
    PdMatrix::new(m).unwrap()
}

/// `(x, y)` with positive entries and `x ≺^w y`: `z = T y` for a product of
/// random T-transforms (so `z ≺ y`), then `x >= z` entrywise, shuffled.
pub fn admissible_pair(n: usize, r: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let y: Vec<f64> = (0..n).map(|_| r.random_range(0.5..5.0)).collect();
    let mut z = y.clone();
    if n > 1 {
        for _ in 0..2 * n {
            let i = r.random_range(0..n);
            let j = r.random_range(0..n);
            let lam: f64 = r.random_range(0.0..1.0);
            let (zi, zj) = (z[i], z[j]);
            z[i] = lam * zi + (1.0 - lam) * zj;
            z[j] = (1.0 - lam) * zi + lam * zj;
        }
    }
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let equal_totals = r.random_bool(0.2);
    let mut x: Vec<f64> = z
        .iter()
        .map(|&v| {
            if equal_totals || r.random_bool(0.3) {
                v
            } else {
                v + r.random_range(0.0..1.5) * mean_y
            }
        })
        .collect();
    x.shuffle(r);
    let mut y = y;
    y.shuffle(r);
    (x, y)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Sorted moduli of the eigenvalues of a general square matrix.
pub fn eigen_moduli(m: &Matrix) -> Vec<f64> {
    sorted(&m.complex_eigenvalues().iter().map(|z| z.norm()).collect::<Vec<_>>())
}
