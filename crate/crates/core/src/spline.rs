//! Abstract spline interpolation: minimize `‖Th‖` subject to `Vh = f0`, its
//! operator form `min_{VX = B0} ‖TX‖_p`, bounded global solutions, and the
//! four-way equivalence for their existence.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, identity, null_basis, pinv, psd_sqrt, range_basis_floor, range_included,
    range_included_floor, spectral_norm, PsdWeight, Subspace, Tolerances,
};
use crate::scalar::{CMatrix, CVector, Real};
use crate::schatten::{schatten_norm, SchattenIndex};
use crate::shorted::{is_compatible, shorted, CompatCertificate};

fn check_pair<T: Real>(t: &CMatrix<T>, v: &CMatrix<T>) -> Result<()> {
    if t.ncols() == v.ncols() {
        Ok(())
    } else {
        Err(Error::InconsistentDims(format!(
            "T acts on C^{} but V acts on C^{}",
            t.ncols(),
            v.ncols()
        )))
    }
}

/// A member of `sp(T, N(V), h0)`.
#[derive(Debug, Clone)]
pub struct SplineSolution<T: Real> {
    pub h: CVector<T>,
    /// `‖Th‖`.
    pub min_value: T,
    /// `‖P_{N(V)} T*T h‖`, zero at an abstract spline.
    pub normal_residual: T,
    /// `‖Vh − f0‖`.
    pub interpolation_residual: T,
}

/// Minimize `‖Th‖` over `h ∈ V†f0 + N(V)`.
///
/// The affine set is parametrized by an orthonormal basis `N` of `N(V)`; the
/// coefficient vector is the minimal-norm least-squares solution of
/// `(TN)c ≈ −T V†f0`.
pub fn spline_solve<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    f0: &CVector<T>,
    tol: &Tolerances<T>,
) -> Result<SplineSolution<T>> {
    check_pair(t, v)?;
    if f0.len() != v.nrows() {
        return Err(Error::InconsistentDims(format!(
            "f0 has {} entries, V maps into C^{}",
            f0.len(),
            v.nrows()
        )));
    }
    Constraint::new(t, v, tol).solve(t, v, f0, tol)
}

/// Factorizations shared by every spline solve for a fixed pair `(T, V)`.
struct Constraint<T: Real> {
    v_pinv: CMatrix<T>,
    kernel: Subspace<T>,
    tn_pinv: CMatrix<T>,
}

impl<T: Real> Constraint<T> {
    fn new(t: &CMatrix<T>, v: &CMatrix<T>, tol: &Tolerances<T>) -> Self {
        let kernel = null_basis(v, tol);
        Self {
            v_pinv: pinv(v, tol),
            tn_pinv: pinv(&(t * kernel.basis()), tol),
            kernel,
        }
    }

    fn solve(
        &self,
        t: &CMatrix<T>,
        v: &CMatrix<T>,
        f0: &CVector<T>,
        tol: &Tolerances<T>,
    ) -> Result<SplineSolution<T>> {
        let h0 = &self.v_pinv * f0;
        let miss = (v * &h0 - f0).norm();
        if miss > tol.residual_rtol * f0.norm() {
            return Err(Error::NotInRange {
                residual: miss.as_f64(),
            });
        }
        let n = self.kernel.basis();
        let c = -(&self.tn_pinv * (t * &h0));
        let h = h0 + n * c;
        Ok(SplineSolution {
            min_value: (t * &h).norm(),
            normal_residual: (n.adjoint() * t.adjoint() * (t * &h)).norm(),
            interpolation_residual: (v * &h - f0).norm(),
            h,
        })
    }

    fn contains(
        &self,
        t: &CMatrix<T>,
        h0: &CVector<T>,
        h: &CVector<T>,
        tol: &Tolerances<T>,
    ) -> bool {
        let nb = &self.kernel;
        let d = h - h0;
        let off_affine = (&d - nb.basis() * (nb.basis().adjoint() * &d)).norm();
        let size = h.norm().max(h0.norm());
        let in_affine = off_affine <= tol.residual_rtol * size;
        let grad = (nb.basis().adjoint() * t.adjoint() * (t * h)).norm();
        let optimal = grad <= tol.residual_rtol * t.norm_squared() * h.norm();
        in_affine && optimal
    }
}

/// Membership test for `sp(T, N(V), h0)`: `h − h0 ∈ N(V)` and the
/// first-order condition `P_{N(V)} T*T h = 0`.
pub fn is_abstract_spline<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    h0: &CVector<T>,
    h: &CVector<T>,
    tol: &Tolerances<T>,
) -> Result<bool> {
    check_pair(t, v)?;
    if h0.len() != v.ncols() || h.len() != v.ncols() {
        return Err(Error::InconsistentDims(format!(
            "spline candidates must live in C^{}",
            v.ncols()
        )));
    }
    Ok(Constraint::new(t, v, tol).contains(t, h0, h, tol))
}

/// Solution of `min_{VX = B0} ‖TX‖_p`.
#[derive(Debug, Clone)]
pub struct OperatorSpline<T: Real> {
    /// `‖[(T*T)_{/N(V)}]^{1/2} V†B0‖_p`.
    pub value: T,
    /// Minimizer with `VX₀ = B0`.
    pub x0: CMatrix<T>,
    /// `‖TX₀‖_p`.
    pub attained: T,
    /// `‖P_{N(V)} T*T X₀‖`.
    pub normal_residual: T,
}

pub fn operator_spline_min<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    b0: &CMatrix<T>,
    p: SchattenIndex<T>,
    tol: &Tolerances<T>,
) -> Result<OperatorSpline<T>> {
    check_pair(t, v)?;
    if b0.nrows() != v.nrows() {
        return Err(Error::InconsistentDims(format!(
            "B0 maps into C^{}, V maps into C^{}",
            b0.nrows(),
            v.nrows()
        )));
    }
    let inc = range_included(b0, v, tol)?;
    if !inc.included {
        return Err(Error::NotInRange {
            residual: inc.residual.as_f64(),
        });
    }
    let d = pinv(v, tol) * b0;
    let nb = null_basis(v, tol);
    let pn = nb.projector();
    let gram = t.adjoint() * t;
    // P T*T (P X + D) = 0
    let lhs = &pn * &gram * &pn;
    let rhs = -(&pn * &gram * &d);
    let x = range_included_floor(&rhs, &lhs, spectral_norm(t).powi(2), tol)?
        .factor
        .ok_or_else(|| Error::NoMinimum("spline normal equation is not solvable".into()))?;
    let x0 = &pn * x + &d;

    let sigma = shorted(&PsdWeight::gram(t), &nb, tol)?;
    let value = schatten_norm(&(psd_sqrt(&sigma, tol)? * &d), p);
    let attained = schatten_norm(&(t * &x0), p);
    let scale = value.max(schatten_norm(&(t * &d), p));
    if (attained - value).abs() > tol.residual_rtol * scale {
        return Err(Error::EquivalenceViolation(format!(
            "‖TX₀‖_p = {attained:e} differs from the shorted value {value:e}"
        )));
    }
    Ok(OperatorSpline {
        value,
        normal_residual: (&pn * &gram * &x0).norm(),
        x0,
        attained,
    })
}

/// Bounded global solution `G` of the spline problem: `Gh ∈ sp(T, N(V), h)`.
#[derive(Debug, Clone)]
pub struct GlobalSpline<T: Real> {
    pub g: CMatrix<T>,
    /// Compatibility of `(T*T, N(V))`.
    pub compatibility: CompatCertificate<T>,
}

/// `G = X₀ P_{N(V)^⊥}` where `X₀` solves the operator problem with `B0 = V`.
pub fn global_spline_solution<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<GlobalSpline<T>> {
    let op = operator_spline_min(t, v, v, SchattenIndex::frobenius(), tol)?;
    let nb = null_basis(v, tol);
    let g = op.x0 * (identity::<T>(v.ncols()) - nb.projector());
    let compatibility = is_compatible(&PsdWeight::gram(t), &nb, tol)?;
    Ok(GlobalSpline { g, compatibility })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplineConditions {
    /// The operator problem has a minimum for every admissible `B0`.
    pub operator_min_for_all_b0: bool,
    /// A bounded global solution exists (columns checked as splines).
    pub global_solution_exists: bool,
    /// `(T*T, N(V))` is compatible.
    pub compatible: bool,
    /// `sp(T, N(V), h0)` is nonempty for every `h0` (basis vectors).
    pub nonempty_for_all_h0: bool,
}

impl SplineConditions {
    pub fn to_map(self) -> BTreeMap<String, bool> {
        [
            ("operator_min_for_all_b0", self.operator_min_for_all_b0),
            ("global_solution_exists", self.global_solution_exists),
            ("compatible", self.compatible),
            ("nonempty_for_all_h0", self.nonempty_for_all_h0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn agree(self) -> bool {
        let f = [
            self.operator_min_for_all_b0,
            self.global_solution_exists,
            self.compatible,
            self.nonempty_for_all_h0,
        ];
        f.iter().all(|&b| b == f[0])
    }
}

#[derive(Debug, Clone)]
pub struct SplineReport<T: Real> {
    pub exists: bool,
    pub conditions: SplineConditions,
    pub global: Option<GlobalSpline<T>>,
}

pub fn spline_equivalence_report<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<SplineReport<T>> {
    check_pair(t, v)?;
    let n = v.ncols();
    let nb = null_basis(v, tol);

    // N(V) + [T*T N(V)]^⊥ = H, and the normal equation for B0 = V solves
    let image_perp = range_basis_floor(
        &(t.adjoint() * t * nb.basis()),
        spectral_norm(t).powi(2),
        tol,
    )
    .complement();
    let sum_full = nb.sum_dim(&image_perp, tol) == n;
    let op_ok = operator_spline_min(t, v, v, SchattenIndex::frobenius(), tol).is_ok();
    let operator_min_for_all_b0 = sum_full && op_ok;

    let global = global_spline_solution(t, v, tol).ok();
    let global_solution_exists = match &global {
        Some(gs) => columns_are_splines(t, v, &gs.g, tol)?,
        None => false,
    };

    let compatible = is_compatible(&PsdWeight::gram(t), &nb, tol)?.compatible;

    let constraint = Constraint::new(t, v, tol);
    let nonempty_for_all_h0 = (0..n).all(|i| {
        let e = basis_vector::<T>(n, i);
        match constraint.solve(t, v, &(v * &e), tol) {
            Ok(sol) => constraint.contains(t, &e, &sol.h, tol),
            Err(_) => false,
        }
    });

    let conditions = SplineConditions {
        operator_min_for_all_b0,
        global_solution_exists,
        compatible,
        nonempty_for_all_h0,
    };
    if !conditions.agree() {
        return Err(Error::EquivalenceViolation(format!(
            "spline conditions disagree: {:?}",
            conditions.to_map()
        )));
    }
    Ok(SplineReport {
        exists: conditions.global_solution_exists,
        conditions,
        global,
    })
}

/// Every column `G e_i` lies in `sp(T, N(V), e_i)`.
pub fn columns_are_splines<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    g: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<bool> {
    check_pair(t, v)?;
    let n = v.ncols();
    if g.shape() != (n, n) {
        return Err(Error::InconsistentDims(format!(
            "G is {:?}, expected {:?}",
            g.shape(),
            (n, n)
        )));
    }
    let constraint = Constraint::new(t, v, tol);
    Ok((0..n).all(|i| {
        let e = basis_vector::<T>(n, i);
        let col: CVector<T> = g.column(i).into_owned();
        constraint.contains(t, &e, &col, tol)
    }))
}

/// The subspace `N(V)` used by every spline computation.
pub fn constraint_kernel<T: Real>(v: &CMatrix<T>, tol: &Tolerances<T>) -> Subspace<T> {
    null_basis(v, tol)
}
