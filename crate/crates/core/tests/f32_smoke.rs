use nalgebra::{dmatrix, dvector};
use opapprox_core::linalg::Subspace;
use opapprox_core::linalg::{from_real, pinv, PsdWeight, Tolerances};
use opapprox_core::scalar::cplx;
use opapprox_core::schatten::{schatten_norm, SchattenIndex};
use opapprox_core::shorted::shorted;
use opapprox_core::smoothing::smoothing_solve;
use opapprox_core::wls::wlss_solve;

fn tol() -> Tolerances<f32> {
    Tolerances::new(1e-5, 1e-4).unwrap()
}

#[test]
fn single_precision_examples() {
    let t = tol();
    let w = PsdWeight::new(from_real(&dmatrix![2.0f32, 0.0; 0.0, 1.0]), &t).unwrap();
    let a = from_real(&dmatrix![1.0f32; 1.0]);
    let u = wlss_solve(&a, &w, &dvector![1.0f32, 0.0].map(cplx), &t).unwrap();
    assert!((u[0].re - 2.0 / 3.0).abs() < 1e-6);

    let w = PsdWeight::new(from_real(&dmatrix![2.0f32, 1.0; 1.0, 1.0]), &t).unwrap();
    let s = Subspace::span(&from_real(&dmatrix![1.0f32; 0.0]), &t);
    let sig = shorted(&w, &s, &t).unwrap();
    assert!((sig.matrix()[(1, 1)].re - 0.5).abs() < 1e-6);
    assert!(sig.matrix()[(0, 0)].norm() < 1e-6);

    let one = from_real(&dmatrix![1.0f32]);
    let two = from_real(&dmatrix![2.0f32]);
    let sol = smoothing_solve(&one, &two, &dvector![1.0f32].map(cplx), &t).unwrap();
    assert!((sol.h[0].re - 0.4).abs() < 1e-6 && (sol.objective - 0.2).abs() < 1e-6);

    let m = from_real(&dmatrix![1.0f32, 2.0; 2.0, 4.0]);
    let g = pinv(&m, &t);
    assert!((&m * &g * &m - &m).norm() < 1e-5);
    assert!((schatten_norm(&m, SchattenIndex::nuclear()) - 5.0).abs() < 1e-5);
}
