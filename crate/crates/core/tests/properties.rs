mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use sympectra::majorization::diag_of_conjugation;
use sympectra::random::{random_pd, random_symplectic};
use sympectra::spectral::{ja_spectrum_moduli, sqrt_form_spectrum_moduli};
use sympectra::symplectic::extract_frame_columns;
use sympectra::*;

const TOL: f64 = 1e-8;

fn symplectic_residual(w: &Matrix) -> f64 {
    let n = w.nrows() / 2;
    let j = standard_j(n).unwrap();
    (w.transpose() * &j * w - j).norm() / w.norm_squared().max(1.0)
}

fn delta(a: &PdMatrix) -> Vec<f64> {
    symplectic_eigenvalues(a, TOL).unwrap().delta
}

fn doubled(v: &[f64]) -> Vec<f64> {
    sorted(&v.iter().flat_map(|&x| [x, x]).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symplectic_group_closure(n in 1usize..5, s1 in any::<u64>(), s2 in any::<u64>(), m in 1usize..4) {
        let u = random_symplectic(n, s1, 0.8).unwrap();
        let v = random_symplectic(n, s2, 0.8).unwrap();
        prop_assert!(symplectic_residual(&u.transpose()) < 1e-11);
        prop_assert!(symplectic_residual(&u.clone().try_inverse().unwrap()) < 1e-10);
        prop_assert!(symplectic_residual(&(&v * &u)) < 1e-11);
        let other = random_symplectic(m, s2 ^ 1, 0.8).unwrap();
        prop_assert!(symplectic_residual(&expanding_sum(&[u, other]).unwrap()) < 1e-11);
    }

    #[test]
    fn block_criterion_matches_definition(n in 1usize..5, seed in any::<u64>(), perturb in any::<bool>()) {
        let mut w = random_symplectic(n, seed, 0.6).unwrap();
        if perturb {
            let mut r = rng(seed);
            let (i, j) = (r.random_range(0..2 * n), r.random_range(0..2 * n));
            w[(i, j)] += r.random_range(1e-4..1e-1);
        }
        let direct = is_symplectic(&w, TOL).unwrap().holds;
        prop_assert_eq!(direct, !perturb);
        prop_assert_eq!(block_criterion(&w, TOL).unwrap().holds, direct);
    }

    #[test]
    fn expanding_sum_is_permutation_similar_to_direct_sum(m in 1usize..3, n in 1usize..3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_pd(m, s1, 1.0).unwrap();
        let b = random_pd(n, s2, 1.0).unwrap();
        let ab = expanding_sum(&[a.clone(), b.clone()]).unwrap();
        let mut union = a.symmetric_eigenvalues().as_slice().to_vec();
        union.extend_from_slice(b.symmetric_eigenvalues().as_slice());
        let got = sorted(ab.symmetric_eigenvalues().as_slice());
        prop_assert!(max_abs_diff(&got, &sorted(&union)) < 1e-9);
    }

    #[test]
    fn frame_completion(n in 1usize..6, kk in 1usize..6, seed in any::<u64>()) {
        let k = 1 + (kk - 1) % n;
        let w = random_symplectic(n, seed, 0.7).unwrap();
        let frame = SymplecticFrame::from_square(&w, k, TOL).unwrap();
        let full = complete_to_symplectic(&frame, TOL).unwrap();
        prop_assert!(symplectic_residual(&full) < 1e-9);
        let back = extract_frame_columns(&full, k).unwrap();
        prop_assert!((back - frame.matrix()).norm() < 1e-9 * frame.matrix().norm());
    }

    #[test]
    fn three_spectrum_routes_agree(n in 1usize..5, seed in any::<u64>()) {
        let a = random_pd_matrix(n, seed);
        let d = doubled(&delta(&a));
        let ja = ja_spectrum_moduli(a.matrix()).unwrap();
        let sq = sqrt_form_spectrum_moduli(&a);
        let scale = d[d.len() - 1];
        prop_assert!(max_abs_diff(&d, &ja) < 1e-9 * scale);
        prop_assert!(max_abs_diff(&d, &sq) < 1e-9 * scale);
        prop_assert!(max_abs_diff(&d, &eigen_moduli(&(standard_j(n).unwrap() * a.matrix()))) < 1e-9 * scale);
    }

    #[test]
    fn williamson_agrees_with_eigenvalues(n in 1usize..5, seed in any::<u64>()) {
        let a = random_pd_matrix(n, seed);
        let f = williamson(&a, TOL).unwrap();
        prop_assert!(max_abs_diff(&f.delta, &delta(&a)) < 1e-12 * f.delta[n - 1]);
        let v = f.diagonalizer();
        let normal = v.transpose() * a.matrix() * &v;
        prop_assert!((normal - f.normal_form()).norm() < 1e-9 * a.matrix().norm());
    }

    #[test]
    fn spectrum_is_homogeneous(n in 1usize..5, seed in any::<u64>(), c in 1e-3f64..1e3) {
        let a = random_pd_matrix(n, seed);
        let scaled = PdMatrix::new(a.matrix() * c).unwrap();
        let expect: Vec<f64> = delta(&a).iter().map(|d| c * d).collect();
        let got = delta(&scaled);
        for (g, e) in got.iter().zip(&expect) {
            prop_assert!((g - e).abs() <= 1e-10 * e);
        }
    }

    #[test]
    fn pinching_preserves_definiteness(n in 1usize..6, seed in any::<u64>(), cut in 0usize..6) {
        let a = random_pd_matrix(n, seed);
        let sizes = if cut % n == 0 { vec![n] } else { vec![cut % n, n - cut % n] };
        let p = s_pinching(a.matrix(), &BlockPartition::new(sizes).unwrap()).unwrap();
        prop_assert!(PdMatrix::new(p).is_ok());
    }

    #[test]
    fn objective_bounded_below_on_transformed_frames(n in 1usize..4, seed in any::<u64>(), k0 in 0usize..3) {
        // X·V is again a frame for V ∈ Sp(2k)
        let k = 1 + k0 % n;
        let a = random_pd_matrix(n, seed);
        let x = SymplecticFrame::from_square(&random_symplectic(n, seed ^ 7, 0.5).unwrap(), k, TOL).unwrap();
        let v = random_symplectic(k, seed ^ 9, 0.5).unwrap();
        let xv = SymplecticFrame::new(x.matrix() * v, 1e-9).unwrap();
        let bound = symplectic_eigenvalues(&a, TOL).unwrap().partial_sum(k);
        for f in [&x, &xv] {
            prop_assert!(kyfan_objective(a.matrix(), f, &MeanSpec::geometric()).unwrap() >= bound - 1e-9);
        }
    }
}

#[test]
fn objective_congruence_invariance() {
    // f(WᵀAW, X) = f(A, WX)
    for i in 0..200u64 {
        let n = 1 + i as usize % 4;
        let k = 1 + (i as usize / 4) % n;
        let a = random_pd_matrix(n, i);
        let w = random_symplectic(n, i + 500, 0.6).unwrap();
        let x = SymplecticFrame::from_square(&random_symplectic(n, i + 900, 0.6).unwrap(), k, TOL).unwrap();
        let wx = SymplecticFrame::new(&w * x.matrix(), 1e-9).unwrap();
        let c = w.transpose() * a.matrix() * &w;
        for m in MeanSpec::builtins() {
            let lhs = kyfan_objective(&c, &x, &m).unwrap();
            let rhs = kyfan_objective(a.matrix(), &wx, &m).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0), "{m}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn block_criterion_sweep() {
    let mut agree = 0;
    for seed in 0..1000u64 {
        let n = 1 + seed as usize % 4;
        let mut w = random_symplectic(n, seed, 0.7).unwrap();
        if seed % 2 == 1 {
            let mut r = rng(seed);
            let mut e = Matrix::zeros(2 * n, 2 * n);
            e.iter_mut().for_each(|v| *v = r.random_range(-1.0..1.0));
            w += e * 1e-3;
        }
        let direct = is_symplectic(&w, TOL).unwrap().holds;
        assert_eq!(direct, seed % 2 == 0, "seed {seed}");
        assert_eq!(block_criterion(&w, TOL).unwrap().holds, direct, "seed {seed}");
        agree += 1;
    }
    assert_eq!(agree, 1000);
}

#[test]
fn two_by_two_spectrum_closed_form() {
    for seed in 0..300 {
        let a = random_pd(1, seed, 1.5).unwrap();
        let oracle = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).sqrt();
        let a = PdMatrix::new(a).unwrap();
        assert!((delta(&a)[0] - oracle).abs() <= 1e-12 * oracle);
        assert!((williamson(&a, TOL).unwrap().delta[0] - oracle).abs() <= 1e-12 * oracle);
    }
}

fn positive() -> impl Strategy<Value = f64> {
    (-6.0f64..6.0).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn builtin_means_satisfy_axioms(a in positive(), b in positive(), t in positive(), bump in 0.0f64..2.0) {
        for m in MeanSpec::builtins() {
            let v = m.evaluate(a, b).unwrap();
            prop_assert!(v > 0.0);
            prop_assert!((v - m.evaluate(b, a).unwrap()).abs() <= 1e-12 * v);
            prop_assert!((m.evaluate(t * a, t * b).unwrap() - t * v).abs() <= 1e-12 * t * v);
            prop_assert!(m.evaluate(a + bump, b).unwrap() >= v * (1.0 - 1e-12));
            prop_assert!(a.min(b) * (1.0 - 1e-12) <= v && v <= a.max(b) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn power_means_order(a in positive(), b in positive(), p in -4.0f64..4.0, dp in 0.0f64..3.0) {
        let lo = MeanSpec::power(p).unwrap().evaluate(a, b).unwrap();
        let hi = MeanSpec::power(p + dp).unwrap().evaluate(a, b).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }
}

#[test]
fn geometric_dominance_by_family() {
    for p in [0.0, 0.5, 1.0, 2.0, 3.5] {
        let m = MeanSpec::power(p).unwrap();
        let d = dominates_geometric(&m, 2000, 1, 1e-12).unwrap();
        assert!(d.holds && d.witness.is_none(), "power {p}");
    }
    assert!(dominates_geometric(&MeanSpec::max(), 2000, 1, 1e-12).unwrap().holds);
    for m in [MeanSpec::harmonic(), MeanSpec::min(), MeanSpec::power(-1.5).unwrap()] {
        let d = dominates_geometric(&m, 2000, 1, 1e-12).unwrap();
        let w = d.witness.expect("witness");
        assert!(!d.holds && w.mean_value < w.geometric_value);
        assert!((m.evaluate(w.a, w.b).unwrap() - w.mean_value).abs() < 1e-15 * w.mean_value.max(1.0));
    }
}

fn positive_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..10.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn weak_supermajorization_is_transitive(n in 1usize..7, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (y, z) = admissible_pair(n, &mut r);
        let x: Vec<f64> = y.iter().map(|v| v + r.random_range(0.0..1.0)).collect();
        prop_assert!(weak_supermajorize(&x, &y, 1e-10).unwrap().verdict);
        prop_assert!(weak_supermajorize(&y, &z, 1e-10).unwrap().verdict);
        prop_assert!(weak_supermajorize(&x, &z, 1e-10).unwrap().verdict);
    }

    #[test]
    fn majorization_ignores_order(v in positive_vec(6), w in positive_vec(6), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut r = rng(seed);
        let (mut pv, mut pw) = (v.clone(), w.clone());
        pv.shuffle(&mut r);
        pw.shuffle(&mut r);
        prop_assert_eq!(
            weak_supermajorize(&v, &w, 1e-10).unwrap().verdict,
            weak_supermajorize(&pv, &pw, 1e-10).unwrap().verdict
        );
        prop_assert_eq!(majorize(&v, &w, 1e-10).unwrap().verdict, majorize(&pv, &pw, 1e-10).unwrap().verdict);
    }

    #[test]
    fn entrywise_dominance_implies_weak_order(y in positive_vec(5), bumps in prop::collection::vec(0.0f64..3.0, 5)) {
        let x: Vec<f64> = y.iter().zip(&bumps).map(|(a, b)| a + b).collect();
        prop_assert!(weak_supermajorize(&x, &y, 1e-10).unwrap().verdict);
    }

    #[test]
    fn horn_rotation_round_trip(n in 1usize..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = admissible_pair(n, &mut r);
        let z = intermediate_vector(&x, &y, 1e-10).unwrap();
        let u = horn_realize(&z, &y, 1e-10).unwrap();
        prop_assert!((u.transpose() * &u - Matrix::identity(n, n)).norm() < 1e-12 * n as f64);
        prop_assert!(max_abs_diff(&diag_of_conjugation(&u, &y), &z) < 1e-9);
    }
}

#[test]
fn intermediate_vector_sweep() {
    let mut r = rng(77);
    for i in 0..1000 {
        let n = 1 + i % 10;
        let (x, y) = admissible_pair(n, &mut r);
        let z = intermediate_vector(&x, &y, 1e-10).unwrap();
        assert!(z.iter().zip(&x).all(|(a, b)| *a <= b + 1e-12), "z <= x fails: {x:?} {y:?}");
        assert!(majorize(&z, &y, 1e-10).unwrap().verdict, "z ≺ y fails: {x:?} {y:?}");
    }
}

#[test]
fn schur_holds_for_dominating_means() {
    for seed in 0..300u64 {
        let a = random_pd_matrix(1 + seed as usize % 4, seed);
        for m in [MeanSpec::geometric(), MeanSpec::arithmetic(), MeanSpec::max(), MeanSpec::power(0.5).unwrap()] {
            assert!(schur_check(&a, &m, TOL).unwrap().verdict(), "{m} seed {seed}");
        }
    }
}

#[test]
fn interchange_formats_round_trip_exactly() {
    use sympectra::io::{matrix_to_json, matrix_to_text, parse_matrix, parse_vector};
    for seed in 0..200u64 {
        let n = 1 + seed as usize % 5;
        let m = random_symplectic(n, seed, 1.3).unwrap();
        assert_eq!(parse_matrix(&matrix_to_json(&m).to_string()).unwrap(), m);
        assert_eq!(parse_matrix(&matrix_to_text(&m)).unwrap(), m);
        let v: Vec<f64> = m.iter().copied().collect();
        assert_eq!(parse_vector(&serde_json::to_string(&v).unwrap()).unwrap(), v);
    }
}
