mod common;

use common::*;
use opapprox_core::linalg::{
    hstack, null_basis, numerical_rank, pinv, psd_sqrt, range_basis, range_included, PsdWeight,
    Subspace, Tolerances,
};
use opapprox_core::oracles::sample;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn penrose_identities() {
    let t = tol();
    let mut rng = rng(11);
    for _ in 0..INSTANCES {
        let (m, n) = (dim(&mut rng, MAX_DIM), dim(&mut rng, MAX_DIM));
        let a = matrix(&mut rng, m, n);
        let g = pinv(&a, &t);
        let (na, ng) = (a.norm(), g.norm());
        assert!((&a * &g * &a - &a).norm() <= 1e-10 * na);
        assert!((&g * &a * &g - &g).norm() <= 1e-10 * ng.max(f64::MIN_POSITIVE));
        let ag = &a * &g;
        let ga = &g * &a;
        assert!((&ag - ag.adjoint()).norm() <= 1e-10 * ag.norm().max(1.0));
        assert!((&ga - ga.adjoint()).norm() <= 1e-10 * ga.norm().max(1.0));
    }
}

#[test]
fn rank_additivity() {
    let t = tol();
    let mut rng = rng(12);
    for _ in 0..INSTANCES {
        let (m, n) = (dim(&mut rng, MAX_DIM), dim(&mut rng, MAX_DIM));
        let a = matrix(&mut rng, m, n);
        let r = range_basis(&a, &t);
        let k = null_basis(&a, &t);
        assert_eq!(r.dim() + k.dim(), n);
        assert_eq!(r.dim(), numerical_rank(&a, &t));
        assert!((&a * k.basis()).norm() <= 1e-10 * a.norm().max(1.0));
    }
}

#[test]
fn inclusion_matches_rank_test() {
    let t = tol();
    let mut rng = rng(13);
    let mut seen = [0usize; 2];
    for _ in 0..INSTANCES {
        let m = dim(&mut rng, MAX_DIM);
        let (n, k) = (dim(&mut rng, MAX_DIM), dim(&mut rng, 6));
        let a = matrix(&mut rng, m, n);
        let b = if rng.random_bool(0.5) {
            &a * full_rank(&mut rng, n, k)
        } else {
            matrix(&mut rng, m, k)
        };
        let inc = range_included(&b, &a, &t).unwrap();
        let by_rank = numerical_rank(&hstack(&a, &b), &t) == numerical_rank(&a, &t);
        assert_eq!(inc.included, by_rank);
        seen[inc.included as usize] += 1;
        if let Some(cf) = inc.factor {
            assert!((&a * cf - &b).norm() <= 1e-8 * b.norm().max(1.0));
        }
    }
    assert!(
        seen[0] > 10 && seen[1] > 10,
        "both outcomes exercised: {seen:?}"
    );
}

#[test]
fn psd_sqrt_clamp_is_idempotent() {
    let t = tol();
    let mut rng = rng(14);
    for _ in 0..INSTANCES {
        let n = dim(&mut rng, MAX_DIM);
        let w = weight(&mut rng, n);
        let r = psd_sqrt(&w, &t).unwrap();
        let sq = PsdWeight::new(&r * &r, &t).unwrap();
        assert!((&sq.matrix().clone() - w.matrix()).norm() <= 1e-8 * w.matrix().norm().max(1.0));
        let rr = psd_sqrt(&sq, &t).unwrap();
        assert!((rr - &r).norm() <= 1e-8 * r.norm().max(1.0));
    }
}

#[test]
fn subspace_algebra() {
    let t = tol();
    let mut rng = rng(15);
    for _ in 0..50 {
        let n = dim(&mut rng, 12);
        let (k1, k2) = (dim(&mut rng, n), dim(&mut rng, n));
        let s = Subspace::span(&matrix(&mut rng, n, k1), &t);
        let m = Subspace::span(&matrix(&mut rng, n, k2), &t);
        assert_eq!(s.dim() + s.complement().dim(), n);
        assert_eq!(
            s.sum_dim(&m, &t) + s.intersection(&m, &t).dim(),
            s.dim() + m.dim()
        );
        let p = s.projector();
        assert!((&p * &p - &p).norm() < 1e-12 * n as f64);
    }
}

#[test]
fn psd_weight_rejects_indefinite() {
    let t = tol();
    let mut rng = rng(16);
    for _ in 0..20 {
        let n = dim(&mut rng, 8) + 1;
        let u = sample::unitary::<f64, _>(&mut rng, n);
        let mut d = opapprox_core::linalg::identity::<f64>(n);
        d[(0, 0)] = c(-1.0);
        assert!(PsdWeight::new(&u * d * u.adjoint(), &t).is_err());
    }
}

proptest! {
    #[test]
    fn tolerances_must_lie_in_open_unit_interval(r in -1.0f64..2.0, s in -1.0f64..2.0) {
        let ok = r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0;
        prop_assert_eq!(Tolerances::new(r, s).is_ok(), ok);
    }

    #[test]
    fn rank_of_scaled_matrix_is_stable(seed in any::<u64>(), scale in -12i32..12) {
        let t = tol();
        let mut rng = rng(seed);
        let (m, n) = (dim(&mut rng, 10), dim(&mut rng, 10));
        let a = matrix(&mut rng, m, n);
        let k = 10f64.powi(scale);
        prop_assert_eq!(numerical_rank(&(&a * c(k)), &t), numerical_rank(&a, &t));
    }
}
