mod common;

use common::*;
use opapprox_core::linalg::{null_basis, pinv, psd_sqrt, spectral_norm, PsdWeight};
use opapprox_core::oracles::quadratic_min_over_affine;
use opapprox_core::scalar::{CMatrix, CVector};
use opapprox_core::schatten::{schatten_norm, SchattenIndex};
use opapprox_core::shorted::shorted;
use opapprox_core::spline::{
    is_abstract_spline, operator_spline_min, spline_equivalence_report, spline_solve,
};
use rand_chacha::ChaCha8Rng;

fn pair(rng: &mut ChaCha8Rng) -> (CMatrix<f64>, CMatrix<f64>) {
    let n = dim(rng, MAX_DIM);
    let (k, m) = (dim(rng, MAX_DIM), dim(rng, MAX_DIM));
    (matrix(rng, k, n), matrix(rng, m, n))
}

#[test]
fn interpolation_and_nullspace_dominance() {
    let t = tol();
    let mut rng = rng(51);
    for _ in 0..INSTANCES {
        let (tm, v) = pair(&mut rng);
        let n = v.ncols();
        let f0 = &v * vector(&mut rng, n);
        let sol = spline_solve(&tm, &v, &f0, &t).unwrap();
        assert!((&v * &sol.h - &f0).norm() <= 1e-8 * f0.norm().max(1e-300));
        let best = (&tm * &sol.h).norm_squared();
        let nb = null_basis(&v, &t);
        let tn = spectral_norm(&tm).powi(2);
        for _ in 0..100 {
            let z: CVector<f64> = nb.basis() * vector(&mut rng, nb.dim());
            let cand = (&tm * (&sol.h + &z)).norm_squared();
            assert!(best <= cand + 1e-10 * tn * (sol.h.norm_squared() + z.norm_squared()));
        }
        let k = tm.nrows();
        let (oracle, _) = quadratic_min_over_affine(
            &PsdWeight::identity(k),
            &tm,
            &CVector::zeros(k),
            &sol.h,
            &nb,
            &t,
        )
        .unwrap();
        assert!((best - oracle).abs() <= 1e-8 * tn * sol.h.norm_squared().max(1e-300));
    }
}

#[test]
fn operator_value_identity() {
    let t = tol();
    let mut rng = rng(52);
    for _ in 0..INSTANCES {
        let (tm, v) = pair(&mut rng);
        let n = v.ncols();
        let b0 = &v * full_rank(&mut rng, n, n);
        let nb = null_basis(&v, &t);
        let sigma = shorted(&PsdWeight::gram(&tm), &nb, &t).unwrap();
        let root = psd_sqrt(&sigma, &t).unwrap();
        let d = pinv(&v, &t) * &b0;
        for p in [1.0, 2.0, 3.0] {
            let p = SchattenIndex::new(p).unwrap();
            let sol = operator_spline_min(&tm, &v, &b0, p, &t).unwrap();
            let expected = schatten_norm(&(&root * &d), p);
            let attained = schatten_norm(&(&tm * &sol.x0), p);
            let scale = schatten_norm(&(&tm * &d), p).max(1e-300);
            assert!((sol.value - expected).abs() <= 1e-8 * scale);
            assert!((attained - expected).abs() <= 1e-8 * scale);
            assert!((&v * &sol.x0 - &b0).norm() <= 1e-8 * b0.norm().max(1e-300));
        }
    }
}

#[test]
fn operator_columns_are_vector_splines() {
    let t = tol();
    let mut rng = rng(53);
    for _ in 0..INSTANCES {
        let (tm, v) = pair(&mut rng);
        let n = v.ncols();
        let cols = dim(&mut rng, 6);
        let b0 = &v * full_rank(&mut rng, n, cols);
        let sol = operator_spline_min(&tm, &v, &b0, SchattenIndex::frobenius(), &t).unwrap();
        let vp = pinv(&v, &t);
        for j in 0..b0.ncols() {
            let col: CVector<f64> = sol.x0.column(j).into_owned();
            let f0: CVector<f64> = b0.column(j).into_owned();
            let h0 = &vp * &f0;
            assert!(is_abstract_spline(&tm, &v, &h0, &col, &t).unwrap());
            let vec = spline_solve(&tm, &v, &f0, &t).unwrap();
            let a = (&tm * &col).norm();
            assert!((a - vec.min_value).abs() <= 1e-8 * (&tm * &h0).norm().max(1e-300));
        }
    }
}

#[test]
fn existence_chain_agrees() {
    let t = tol();
    let mut rng = rng(54);
    for _ in 0..INSTANCES {
        let (tm, v) = pair(&mut rng);
        let report = spline_equivalence_report(&tm, &v, &t)
            .unwrap_or_else(|e| panic!("chain violated: {e}"));
        assert!(report.conditions.agree() && report.exists);
    }
}

#[test]
fn rejects_data_outside_the_range() {
    let t = tol();
    let mut rng = rng(55);
    for _ in 0..20 {
        let n = dim(&mut rng, 10);
        let v = full_rank(&mut rng, n + 3, n);
        let f0 = vector(&mut rng, n + 3);
        assert!(spline_solve(&full_rank(&mut rng, 2, n), &v, &f0, &t).is_err());
    }
}
