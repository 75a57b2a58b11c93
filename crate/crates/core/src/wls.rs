//! Weighted least squares: W-LSS of `Az = x`, W-inverses, the operator
//! problem `min_X ‖AX − I‖_{p,W}` and the equivalence of the four existence
//! conditions for a bounded global solution.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    check_rows, identity, null_basis, pinv_floor, psd_sqrt, range_basis, range_basis_floor,
    range_included_floor, spectral_norm, PsdWeight, Tolerances,
};
use crate::scalar::{CMatrix, CVector, Real};
use crate::schatten::{schatten_norm, weighted_schatten_norm, SchattenIndex};
use crate::shorted::{is_compatible, shorted, CompatCertificate};

/// `‖A‖²‖W‖`, the scale of `A*WA` used as its rank floor.
pub(crate) fn gram_scale<T: Real>(a: &CMatrix<T>, w: &PsdWeight<T>) -> T {
    spectral_norm(a).powi(2) * spectral_norm(w.matrix())
}

fn check_problem<T: Real>(a: &CMatrix<T>, w: &PsdWeight<T>) -> Result<()> {
    check_rows(a, w.dim(), "A (rows must match the weight)")
}

/// Minimal-norm W-LSS `u = (A*WA)† A*Wx`, i.e. the minimal-norm solution of
/// `A*W(Au − x) = 0`.
pub fn wlss_solve<T: Real>(
    a: &CMatrix<T>,
    w: &PsdWeight<T>,
    x: &CVector<T>,
    tol: &Tolerances<T>,
) -> Result<CVector<T>> {
    check_problem(a, w)?;
    if x.len() != w.dim() {
        return Err(Error::InconsistentDims(format!(
            "x has {} entries, weight has dimension {}",
            x.len(),
            w.dim()
        )));
    }
    let aw = a.adjoint() * w.matrix();
    Ok(pinv_floor(&(&aw * a), gram_scale(a, w), tol) * (aw * x))
}

/// `‖A*W(AX − B)‖`: residual of the weighted normal equation.
pub fn normal_residual<T: Real>(
    a: &CMatrix<T>,
    w: &PsdWeight<T>,
    x: &CMatrix<T>,
    b: &CMatrix<T>,
) -> T {
    (a.adjoint() * w.matrix() * (a * x - b)).norm()
}

/// Minimal-Frobenius-norm W-inverse `G = (A*WA)† A*W`, or `None` when the
/// normal equation `A*WAX = A*W` is not solvable.
pub fn w_inverse<T: Real>(
    a: &CMatrix<T>,
    w: &PsdWeight<T>,
    tol: &Tolerances<T>,
) -> Result<Option<CMatrix<T>>> {
    check_problem(a, w)?;
    let aw = a.adjoint() * w.matrix();
    let gram = &aw * a;
    Ok(range_included_floor(&aw, &gram, gram_scale(a, w), tol)?.factor)
}

/// Solution of `min_X ‖AX − I‖_{p,W}`.
#[derive(Debug, Clone)]
pub struct OwlsMin<T: Real> {
    /// `‖(W_{/R(A)})^{1/2}‖_p`.
    pub value: T,
    /// A W-inverse attaining the minimum.
    pub x0: CMatrix<T>,
    /// `W_{/R(A)}`, also the operator-order minimum of `(AX−I)*W(AX−I)`.
    pub shorted_w: PsdWeight<T>,
    /// `‖AX₀ − I‖_{p,W}`, recomputed from the witness.
    pub attained: T,
}

pub fn owls_min<T: Real>(
    a: &CMatrix<T>,
    w: &PsdWeight<T>,
    p: SchattenIndex<T>,
    tol: &Tolerances<T>,
) -> Result<OwlsMin<T>> {
    let x0 = w_inverse(a, w, tol)?
        .ok_or_else(|| Error::NoMinimum("A*W(AX − I) = 0 has no solution".into()))?;
    let shorted_w = shorted(w, &range_basis(a, tol), tol)?;
    let value = schatten_norm(&psd_sqrt(&shorted_w, tol)?, p);
    let n = w.dim();
    let attained = weighted_schatten_norm(&(a * &x0 - identity::<T>(n)), w, p, tol)?;
    let scale = value.max(schatten_norm(&psd_sqrt(w, tol)?, p));
    if (attained - value).abs() > tol.residual_rtol * scale {
        return Err(Error::EquivalenceViolation(format!(
            "‖AX₀ − I‖_(p,W) = {attained:e} differs from ‖W_(/R(A))^(1/2)‖_p = {value:e}"
        )));
    }
    Ok(OwlsMin {
        value,
        x0,
        shorted_w,
        attained,
    })
}

/// The four equivalent statements about bounded global solutions of the
/// weighted least squares problem, each evaluated on its own route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WlsConditions {
    /// `Az = x` has a W-LSS for every `x` (checked on the standard basis).
    pub wlss_for_all_x: bool,
    /// `R(A) + W(R(A))^⊥ = F`.
    pub range_sum_full: bool,
    /// `A*W(AX − I) = 0` is solvable (range inclusion).
    pub normal_eq_solvable: bool,
    /// A W-inverse exists and satisfies the normal equation.
    pub w_inverse_exists: bool,
}

impl WlsConditions {
    pub fn to_map(self) -> BTreeMap<String, bool> {
        [
            ("wlss_for_all_x", self.wlss_for_all_x),
            ("range_sum_full", self.range_sum_full),
            ("normal_eq_solvable", self.normal_eq_solvable),
            ("w_inverse_exists", self.w_inverse_exists),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn agree(self) -> bool {
        let f = [
            self.wlss_for_all_x,
            self.range_sum_full,
            self.normal_eq_solvable,
            self.w_inverse_exists,
        ];
        f.iter().all(|&b| b == f[0])
    }
}

#[derive(Debug, Clone)]
pub struct WlsReport<T: Real> {
    pub exists: bool,
    pub conditions: WlsConditions,
    pub w_inverse: Option<CMatrix<T>>,
    /// Residual `‖A*W(AG − I)‖` of the returned W-inverse.
    pub normal_residual: Option<T>,
    pub min_value_p: Option<T>,
    pub shorted_w: Option<PsdWeight<T>>,
    /// Compatibility of `(W, R(A))`, implied by the existence of a W-inverse.
    pub compatibility: CompatCertificate<T>,
    /// Informational notes (closedness statements are automatic here).
    pub notes: Vec<String>,
}

pub fn wls_existence_report<T: Real>(
    a: &CMatrix<T>,
    w: &PsdWeight<T>,
    p: Option<SchattenIndex<T>>,
    tol: &Tolerances<T>,
) -> Result<WlsReport<T>> {
    check_problem(a, w)?;
    let n = w.dim();
    let scale = a.norm() * w.matrix().norm();
    let ra = range_basis(a, tol);

    let wlss_for_all_x = (0..n).all(|j| {
        let e = crate::linalg::basis_vector::<T>(n, j);
        wlss_solve(a, w, &e, tol)
            .map(|u| {
                let r = a.adjoint() * w.matrix() * (a * u - e);
                r.norm() <= tol.residual_rtol * scale
            })
            .unwrap_or(false)
    });

    // W(R(A))^⊥ as the orthogonal complement of span(W · basis(R(A)))
    let w_ra_perp =
        range_basis_floor(&(w.matrix() * ra.basis()), spectral_norm(w.matrix()), tol).complement();
    let range_sum_full = ra.sum_dim(&w_ra_perp, tol) == n;

    let aw = a.adjoint() * w.matrix();
    let normal_eq_solvable = range_included_floor(&aw, &(&aw * a), gram_scale(a, w), tol)?.included;

    let g = w_inverse(a, w, tol)?;
    let normal_residual = g.as_ref().map(|g| normal_residual(a, w, g, &identity(n)));
    let w_inverse_exists = normal_residual.is_some_and(|r| r <= tol.residual_rtol * scale);

    let conditions = WlsConditions {
        wlss_for_all_x,
        range_sum_full,
        normal_eq_solvable,
        w_inverse_exists,
    };
    if !conditions.agree() {
        return Err(Error::EquivalenceViolation(format!(
            "weighted least squares conditions disagree: {:?}",
            conditions.to_map()
        )));
    }

    let compatibility = is_compatible(w, &ra, tol)?;
    let (min_value_p, shorted_w) = match (conditions.w_inverse_exists, p) {
        (true, Some(p)) => {
            let m = owls_min(a, w, p, tol)?;
            (Some(m.value), Some(m.shorted_w))
        }
        (true, None) => (None, Some(shorted(w, &ra, tol)?)),
        _ => (None, None),
    };

    let nw = null_basis(w.matrix(), tol);
    let notes = vec![
        format!("dim R(A) = {} (closed: finite dimension)", ra.dim()),
        format!(
            "dim (R(A) + N(W)) = {} (closed: finite dimension)",
            ra.sum_dim(&nw, tol)
        ),
        format!(
            "dim (R(A) ∩ N(W)) = {} (closed: finite dimension)",
            ra.intersection(&nw, tol).dim()
        ),
        format!(
            "(W, R(A)) compatible: {} (dim R(A) + R(A)^(⊥W) = {} of {n})",
            compatibility.compatible, compatibility.sum_rank
        ),
    ];

    Ok(WlsReport {
        exists: conditions.w_inverse_exists,
        conditions,
        w_inverse: g,
        normal_residual,
        min_value_p,
        shorted_w,
        compatibility,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_real;
    use crate::scalar::cplx;
    use approx::assert_abs_diff_eq;
    use nalgebra::{dmatrix, dvector};

    fn real(m: nalgebra::DMatrix<f64>) -> CMatrix<f64> {
        from_real(&m)
    }

    fn weight(m: nalgebra::DMatrix<f64>) -> PsdWeight<f64> {
        PsdWeight::new(real(m), &Tolerances::default()).unwrap()
    }

    fn max_abs(m: &CMatrix<f64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn wlss_scalar_parabola() {
        let t = Tolerances::default();
        let u = wlss_solve(
            &real(dmatrix![1.0; 1.0]),
            &weight(dmatrix![2.0, 0.0; 0.0, 1.0]),
            &dvector![1.0, 0.0].map(cplx),
            &t,
        )
        .unwrap();
        assert_abs_diff_eq!(u[0].re, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u[0].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn wlss_identity_weight_is_ordinary_least_squares() {
        let t = Tolerances::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = real(dmatrix![s, 0.0; s, 0.0; 0.0, 1.0]);
        let x = dvector![1.0, 2.0, 3.0].map(cplx);
        let u = wlss_solve(&a, &PsdWeight::identity(3), &x, &t).unwrap();
        assert!((u - a.adjoint() * &x).norm() < 1e-14);
    }

    #[test]
    fn wlss_zero_weight_gives_zero() {
        let t = Tolerances::default();
        let a = real(dmatrix![1.0, 2.0; 3.0, 4.0]);
        let u = wlss_solve(&a, &PsdWeight::zeros(2), &dvector![1.0, 1.0].map(cplx), &t).unwrap();
        assert_eq!(u.norm(), 0.0);
        assert!(matches!(
            wlss_solve(&a, &PsdWeight::zeros(2), &dvector![1.0].map(cplx), &t),
            Err(Error::InconsistentDims(_))
        ));
    }

    #[test]
    fn w_inverse_examples() {
        let t = Tolerances::default();
        let g = w_inverse(
            &real(dmatrix![1.0; 0.0]),
            &weight(dmatrix![1.0, 0.0; 0.0, 4.0]),
            &t,
        )
        .unwrap()
        .unwrap();
        assert!(max_abs(&(g - real(dmatrix![1.0, 0.0]))) < 1e-15);

        let w = weight(dmatrix![3.0, 1.0; 1.0, 2.0]);
        let g = w_inverse(&identity(2), &w, &t).unwrap().unwrap();
        assert!(max_abs(&(g - identity::<f64>(2))) < 1e-14);

        let g = w_inverse(
            &real(dmatrix![0.0; 1.0]),
            &weight(dmatrix![1.0, 0.0; 0.0, 0.0]),
            &t,
        )
        .unwrap()
        .unwrap();
        assert_eq!(max_abs(&g), 0.0);
    }

    #[test]
    fn owls_examples() {
        let t = Tolerances::default();
        let p2 = SchattenIndex::new(2.0).unwrap();
        let m = owls_min(
            &real(dmatrix![1.0; 0.0]),
            &weight(dmatrix![1.0, 0.0; 0.0, 4.0]),
            p2,
            &t,
        )
        .unwrap();
        assert_abs_diff_eq!(m.value, 2.0, epsilon = 1e-14);
        assert!(max_abs(&(m.shorted_w.matrix() - real(dmatrix![0.0, 0.0; 0.0, 4.0]))) < 1e-14);

        let a = real(dmatrix![2.0, 1.0; 0.0, 1.0]);
        let m = owls_min(&a, &weight(dmatrix![3.0, 1.0; 1.0, 2.0]), p2, &t).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(m.attained < 1e-14);

        let m = owls_min(&real(dmatrix![1.0; 0.0]), &PsdWeight::zeros(2), p2, &t).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn report_examples() {
        let t = Tolerances::default();
        let r = wls_existence_report(
            &real(dmatrix![1.0; 0.0]),
            &weight(dmatrix![1.0, 0.0; 0.0, 4.0]),
            Some(SchattenIndex::new(2.0).unwrap()),
            &t,
        )
        .unwrap();
        assert!(r.exists && r.conditions.agree() && r.conditions.wlss_for_all_x);
        assert!(r.compatibility.compatible);
        assert_abs_diff_eq!(r.min_value_p.unwrap(), 2.0, epsilon = 1e-14);

        let r =
            wls_existence_report(&CMatrix::zeros(2, 2), &PsdWeight::identity(2), None, &t).unwrap();
        assert!(r.exists);
        assert_eq!(max_abs(r.w_inverse.as_ref().unwrap()), 0.0);
    }
}
