mod common;

use common::*;
use opapprox_core::linalg::{identity, spectral_norm, Subspace};
use opapprox_core::oracles::{quadratic_min_over_affine, sampled_dominance, shorted_variational};
use opapprox_core::scalar::CVector;
use rand::Rng;

#[test]
fn variational_oracle_is_the_affine_minimizer() {
    let t = tol();
    let mut rng = rng(71);
    for _ in 0..INSTANCES {
        let n = dim(&mut rng, MAX_DIM);
        let w = weight(&mut rng, n);
        let k = rng.random_range(0..=n);
        let s = Subspace::span(&full_rank(&mut rng, n, k), &t);
        let x = vector(&mut rng, n);
        let direct =
            quadratic_min_over_affine(&w, &identity(n), &CVector::zeros(n), &x, &s, &t).unwrap();
        assert_eq!(shorted_variational(&w, &s, &x, &t).unwrap(), direct.0);
    }
}

#[test]
fn affine_minimizer_is_stationary_and_dominant() {
    let t = tol();
    let mut rng = rng(72);
    for _ in 0..INSTANCES {
        let (m, n) = (dim(&mut rng, MAX_DIM), dim(&mut rng, MAX_DIM));
        let a = matrix(&mut rng, m, n);
        let w = weight(&mut rng, m);
        let x = vector(&mut rng, m);
        let anchor = vector(&mut rng, n);
        let k = rng.random_range(0..=n);
        let s = Subspace::span(&full_rank(&mut rng, n, k), &t);
        let (value, h) = quadratic_min_over_affine(&w, &a, &x, &anchor, &s, &t).unwrap();
        let r = &a * &h - &x;
        let grad = s.basis().adjoint() * a.adjoint() * w.matrix() * &r;
        let scale = spectral_norm(&a).powi(2) * spectral_norm(w.matrix()) * (h.norm() + x.norm());
        assert!(grad.norm() <= 1e-8 * scale.max(1e-300));
        let proj = s.projector();
        let dom = sampled_dominance(
            |rng: &mut rand_chacha::ChaCha8Rng| {
                let z = &h + &proj * vector(rng, n);
                w.quadratic_form(&(&a * z - &x))
            },
            value,
            &mut rng,
            50,
            scale * (h.norm() + x.norm()) + 1.0,
        );
        assert!(dom);
    }
}
