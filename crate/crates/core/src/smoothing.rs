//! Smoothing problems `min_h ‖Th‖² + ‖Vh − f0‖²` and their operator form,
//! W-optimal inverses for block weights on `F ⊕ H`, the hat lift
//! `Âh = (Ah, h)`, and the equivalence chains tying them together.
//!
//! The direct sum `F ⊕ H` is represented by stacking (first `F`, then `H`)
//! with the plain Euclidean inner product of the stack.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, check_cols, ensure_finite, hermitian_part, hstack, identity, null_basis,
    numerical_rank_floor, pinv, psd_sqrt, range_included, range_included_floor, spectral_norm,
    vstack, zeros, PsdWeight, Tolerances,
};
use crate::oracles::{sample, sampled_dominance};
use crate::scalar::{cplx, CMatrix, CVector, Real};
use crate::schatten::{frechet_gp, SchattenIndex};
use crate::shorted::is_compatible;
use crate::wls::w_inverse;

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

/// `K h = (Th, Vh)`.
pub fn stacked_operator<T: Real>(t: &CMatrix<T>, v: &CMatrix<T>) -> Result<CMatrix<T>> {
    check_pair(t, v)?;
    Ok(vstack(t, v))
}

/// `‖TX‖₂² + ‖VX − B0‖₂²` (vectors are one-column matrices).
pub fn smoothing_objective<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    b0: &CMatrix<T>,
    x: &CMatrix<T>,
) -> T {
    (t * x).norm_squared() + (v * x - b0).norm_squared()
}

#[derive(Debug, Clone)]
pub struct SmoothingSolution<T: Real> {
    pub h: CVector<T>,
    /// `‖Th‖² + ‖Vh − f0‖²`.
    pub objective: T,
    /// `‖(T*T + V*V)h − V*f0‖`.
    pub normal_residual: T,
}

/// Minimal-norm smoothing spline `h = (T*T + V*V)† V*f0`.
pub fn smoothing_solve<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    f0: &CVector<T>,
    tol: &Tolerances<T>,
) -> Result<SmoothingSolution<T>> {
    check_pair(t, v)?;
    if f0.len() != v.nrows() {
        return Err(Error::InconsistentDims(format!(
            "f0 has {} entries, V maps into C^{}",
            f0.len(),
            v.nrows()
        )));
    }
    let m = t.adjoint() * t + v.adjoint() * v;
    let rhs = v.adjoint() * f0;
    let h = pinv(&m, tol) * &rhs;
    let objective = (t * &h).norm_squared() + (v * &h - f0).norm_squared();
    Ok(SmoothingSolution {
        normal_residual: (m * &h - rhs).norm(),
        objective,
        h,
    })
}

#[derive(Debug, Clone)]
pub struct OperatorSmoothing<T: Real> {
    /// `‖TX₀‖₂² + ‖VX₀ − B0‖₂²`.
    pub value: T,
    pub x0: CMatrix<T>,
    /// `‖(T*T + V*V)X₀ − V*B0‖`.
    pub normal_residual: T,
}

/// Minimize `‖TX‖₂² + ‖VX − B0‖₂²` over `X` via the normal equation
/// `(T*T + V*V)X = V*B0`.
pub fn operator_smoothing_min<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    b0: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<OperatorSmoothing<T>> {
    check_pair(t, v)?;
    if b0.nrows() != v.nrows() {
        return Err(Error::InconsistentDims(format!(
            "B0 maps into C^{}, V maps into C^{}",
            b0.nrows(),
            v.nrows()
        )));
    }
    let m = t.adjoint() * t + v.adjoint() * v;
    let rhs = v.adjoint() * b0;
    let x0 = range_included(&rhs, &m, tol)?
        .factor
        .ok_or_else(|| Error::NoMinimum("(T*T + V*V)X = V*B0 has no solution".into()))?;
    Ok(OperatorSmoothing {
        value: smoothing_objective(t, v, b0, &x0),
        normal_residual: (m * &x0 - rhs).norm(),
        x0,
    })
}

/// `DF₂(X)(Y)` for `F₂(X) = ‖TX‖₂² + ‖VX − B0‖₂²`, assembled from the
/// derivative of `‖·‖₂²` at `|T|X` and `|V|X`.
pub fn smoothing_derivative<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    b0: &CMatrix<T>,
    x: &CMatrix<T>,
    y: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    let p2 = SchattenIndex::frobenius();
    let abs_t = psd_sqrt(&PsdWeight::gram(t), tol)?;
    let abs_v = psd_sqrt(&PsdWeight::gram(v), tol)?;
    let dt = frechet_gp(&(&abs_t * x), &(&abs_t * y), p2, tol)?;
    let dv = frechet_gp(&(&abs_v * x), &(&abs_v * y), p2, tol)?;
    let cross = (b0.adjoint() * v * y).trace().re;
    Ok(dt + dv - T::lit(2.0) * cross)
}

/// Positive weight on `F ⊕ H` in block form `[[W11, W12], [W12*, W22]]`.
#[derive(Debug, Clone)]
pub struct BlockWeight<T: Real> {
    w11: PsdWeight<T>,
    w12: CMatrix<T>,
    w22: PsdWeight<T>,
    assembled: PsdWeight<T>,
}

impl<T: Real> BlockWeight<T> {
    pub fn new(
        w11: PsdWeight<T>,
        w12: CMatrix<T>,
        w22: PsdWeight<T>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        ensure_finite(&w12, "W12")?;
        if w12.shape() != (w11.dim(), w22.dim()) {
            return Err(Error::InconsistentDims(format!(
                "W12 is {:?}, expected {:?}",
                w12.shape(),
                (w11.dim(), w22.dim())
            )));
        }
        let top = hstack(w11.matrix(), &w12);
        let bottom = hstack(&w12.adjoint(), w22.matrix());
        let assembled = PsdWeight::new(vstack(&top, &bottom), tol)?;
        Ok(Self {
            w11,
            w12,
            w22,
            assembled,
        })
    }

    /// `diag(W11, W22)`.
    pub fn diagonal(w11: PsdWeight<T>, w22: PsdWeight<T>) -> Self {
        let w12 = zeros(w11.dim(), w22.dim());
        let top = hstack(w11.matrix(), &w12);
        let bottom = hstack(&w12.adjoint(), w22.matrix());
        let assembled = PsdWeight::from_hermitian_unchecked(vstack(&top, &bottom));
        Self {
            w11,
            w12,
            w22,
            assembled,
        }
    }

    pub fn w11(&self) -> &PsdWeight<T> {
        &self.w11
    }

    pub fn w12(&self) -> &CMatrix<T> {
        &self.w12
    }

    pub fn w22(&self) -> &PsdWeight<T> {
        &self.w22
    }

    /// The full weight on `F ⊕ H`.
    pub fn assembled(&self) -> &PsdWeight<T> {
        &self.assembled
    }

    pub fn f_dim(&self) -> usize {
        self.w11.dim()
    }

    pub fn h_dim(&self) -> usize {
        self.w22.dim()
    }

    fn check_operator(&self, a: &CMatrix<T>) -> Result<()> {
        if a.shape() == (self.f_dim(), self.h_dim()) {
            Ok(())
        } else {
            Err(Error::InconsistentDims(format!(
                "A is {:?}, the block weight expects {:?}",
                a.shape(),
                (self.f_dim(), self.h_dim())
            )))
        }
    }
}

/// Left side `L = A*W11A + A*W12 + W12*A + W22` and the two right sides
/// `A*W11 + W12*` (optimal inverse) and `A*W12 + W22` (second component).
#[derive(Debug, Clone)]
pub struct OptimalSystem<T: Real> {
    pub lhs: CMatrix<T>,
    /// `‖Â‖²‖W‖`, the rank floor for `lhs`.
    pub scale: T,
    pub rhs_f: CMatrix<T>,
    pub rhs_h: CMatrix<T>,
}

pub fn optimal_system<T: Real>(a: &CMatrix<T>, w: &BlockWeight<T>) -> Result<OptimalSystem<T>> {
    w.check_operator(a)?;
    let ah = a.adjoint();
    let w11 = w.w11.matrix();
    let w22 = w.w22.matrix();
    let lhs = hermitian_part(&(&ah * w11 * a + &ah * &w.w12 + w.w12.adjoint() * a + w22));
    let rhs_f = &ah * w11 + w.w12.adjoint();
    let rhs_h = &ah * &w.w12 + w22;
    let scale = spectral_norm(&hat_lift(a)).powi(2) * spectral_norm(w.assembled.matrix());
    Ok(OptimalSystem {
        lhs,
        scale,
        rhs_f,
        rhs_h,
    })
}

/// `‖(Ah − f, h)‖²_W`.
pub fn block_objective<T: Real>(
    a: &CMatrix<T>,
    w: &BlockWeight<T>,
    f: &CVector<T>,
    h: &CVector<T>,
) -> T {
    let r = a * h - f;
    let mut stacked = CVector::zeros(r.len() + h.len());
    stacked.rows_mut(0, r.len()).copy_from(&r);
    stacked.rows_mut(r.len(), h.len()).copy_from(h);
    w.assembled.quadratic_form(&stacked)
}

/// Minimal-norm W-optimal inverse of `A`, or `None` when
/// `(A*W11A + A*W12 + W12*A + W22)X = A*W11 + W12*` has no solution.
pub fn optimal_inverse<T: Real>(
    a: &CMatrix<T>,
    w: &BlockWeight<T>,
    tol: &Tolerances<T>,
) -> Result<Option<CMatrix<T>>> {
    let sys = optimal_system(a, w)?;
    Ok(range_included_floor(&sys.rhs_f, &sys.lhs, sys.scale, tol)?.factor)
}

/// `Âh = (Ah, h)`.
pub fn hat_lift<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    vstack(a, &identity(a.ncols()))
}

#[derive(Debug, Clone)]
pub struct HatReport<T: Real> {
    /// `Â` admits a W-inverse.
    pub hat_w_inverse: bool,
    /// `A` admits a W-optimal inverse.
    pub optimal_inverse: bool,
    /// `L X = A*W12 + W22` is solvable.
    pub second_equation: bool,
    /// `Z(f, h) = Z₁f + Z₂h`, present when both components exist.
    pub z: Option<CMatrix<T>>,
    /// `‖Â*WÂZ − Â*W‖`.
    pub z_residual: Option<T>,
}

impl<T: Real> HatReport<T> {
    pub fn to_map(&self) -> BTreeMap<String, bool> {
        [
            ("hat_w_inverse", self.hat_w_inverse),
            ("optimal_inverse", self.optimal_inverse),
            ("second_equation", self.second_equation),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// `Â` has a W-inverse iff `A` has a W-optimal inverse and
/// `LX = A*W12 + W22` is solvable; when both hold, `Z = [Z₁ | Z₂]` is
/// verified to be a W-inverse of `Â`.
pub fn hat_equivalence_check<T: Real>(
    a: &CMatrix<T>,
    w: &BlockWeight<T>,
    tol: &Tolerances<T>,
) -> Result<HatReport<T>> {
    let sys = optimal_system(a, w)?;
    let hat = hat_lift(a);
    let hat_w_inverse = w_inverse(&hat, w.assembled(), tol)?.is_some();
    let z1 = range_included_floor(&sys.rhs_f, &sys.lhs, sys.scale, tol)?.factor;
    let z2 = range_included_floor(&sys.rhs_h, &sys.lhs, sys.scale, tol)?.factor;
    let optimal_inverse = z1.is_some();
    let second_equation = z2.is_some();
    if hat_w_inverse != (optimal_inverse && second_equation) {
        return Err(Error::EquivalenceViolation(format!(
            "hat lift: Â W-inverse {hat_w_inverse}, optimal inverse {optimal_inverse}, \
             second equation {second_equation}"
        )));
    }
    let (z, z_residual) = match (z1, z2) {
        (Some(z1), Some(z2)) => {
            let z = hstack(&z1, &z2);
            let wm = w.assembled().matrix();
            let target = hat.adjoint() * wm;
            let residual = (&target * &hat * &z - &target).norm();
            let scale = hat.norm_squared() * wm.norm() * z.norm().max(T::one());
            if residual > tol.residual_rtol * scale {
                return Err(Error::EquivalenceViolation(format!(
                    "assembled Z is not a W-inverse of Â (residual {residual:e})"
                )));
            }
            (Some(z), Some(residual))
        }
        _ => (None, None),
    };
    Ok(HatReport {
        hat_w_inverse,
        optimal_inverse,
        second_equation,
        z,
        z_residual,
    })
}

/// Checks for the diagonal weight `diag(I, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalWeightReport {
    pub hat_w_inverse: bool,
    pub optimal_inverse: bool,
    /// `dim(R(A*A) + R(w)) = rank(A*A + w)`.
    pub range_chain: bool,
    /// `(A*A + w)X = w` is solvable.
    pub weight_equation: bool,
}

pub fn diagonal_weight_check<T: Real>(
    a: &CMatrix<T>,
    w: &PsdWeight<T>,
    tol: &Tolerances<T>,
) -> Result<DiagonalWeightReport> {
    check_cols(a, w.dim(), "A")?;
    let bw = BlockWeight::diagonal(PsdWeight::identity(a.nrows()), w.clone());
    let hat = hat_equivalence_check(a, &bw, tol)?;
    let gram = a.adjoint() * a;
    let total = &gram + w.matrix();
    let floor = spectral_norm(&gram) + spectral_norm(w.matrix());
    let range_chain = numerical_rank_floor(&hstack(&gram, w.matrix()), floor, tol)
        == numerical_rank_floor(&total, floor, tol);
    let weight_equation = range_included_floor(w.matrix(), &total, floor, tol)?.included;
    let report = DiagonalWeightReport {
        hat_w_inverse: hat.hat_w_inverse,
        optimal_inverse: hat.optimal_inverse,
        range_chain,
        weight_equation,
    };
    if report.hat_w_inverse != report.optimal_inverse {
        return Err(Error::EquivalenceViolation(format!(
            "diagonal weight: Â W-inverse {} but optimal inverse {}",
            report.hat_w_inverse, report.optimal_inverse
        )));
    }
    Ok(report)
}

/// The equivalent statements about global solvability of the smoothing
/// problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothingConditions {
    pub operator_min_for_all_b0: bool,
    /// `R(V*) ⊆ R(T*T + V*V)`.
    pub range_inclusion: bool,
    pub pointwise_min_for_all_f0: bool,
    /// `V` has a `diag(I, T*T)`-optimal inverse.
    pub optimal_inverse_exists: bool,
    pub global_solution_exists: bool,
    /// `(T*T, N(V))` is compatible (`R(V)` is always closed here).
    pub compatible: bool,
}

impl SmoothingConditions {
    pub fn to_map(self) -> BTreeMap<String, bool> {
        [
            ("operator_min_for_all_b0", self.operator_min_for_all_b0),
            ("range_inclusion", self.range_inclusion),
            ("pointwise_min_for_all_f0", self.pointwise_min_for_all_f0),
            ("optimal_inverse_exists", self.optimal_inverse_exists),
            ("global_solution_exists", self.global_solution_exists),
            ("compatible", self.compatible),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn agree(self) -> bool {
        let f = [
            self.operator_min_for_all_b0,
            self.range_inclusion,
            self.pointwise_min_for_all_f0,
            self.optimal_inverse_exists,
            self.global_solution_exists,
            self.compatible,
        ];
        f.iter().all(|&b| b == f[0])
    }
}

#[derive(Debug, Clone)]
pub struct SmoothingReport<T: Real> {
    pub exists: bool,
    pub conditions: SmoothingConditions,
    /// Bounded global solution `G = (T*T + V*V)† V*`.
    pub g: Option<CMatrix<T>>,
}

/// Number of random competitors per data point in the dominance check.
const DOMINANCE_SAMPLES: usize = 20;

pub fn smoothing_equivalence_report<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<SmoothingReport<T>> {
    check_pair(t, v)?;
    let (fdim, hdim) = v.shape();
    let m = t.adjoint() * t + v.adjoint() * v;
    let scale = m.norm();

    let mut operator_min_for_all_b0 = true;
    for j in 0..fdim {
        let mut b0 = zeros::<T>(fdim, hdim.max(1));
        b0[(j, 0)] = cplx(T::one());
        if hdim == 0 {
            break;
        }
        operator_min_for_all_b0 &= operator_smoothing_min(t, v, &b0, tol).is_ok();
    }

    let range_inclusion = range_included(&v.adjoint(), &m, tol)?.included;

    let mut pointwise_min_for_all_f0 = true;
    for j in 0..fdim {
        let f0 = basis_vector::<T>(fdim, j);
        let sol = smoothing_solve(t, v, &f0, tol)?;
        pointwise_min_for_all_f0 &= sol.normal_residual <= tol.residual_rtol * scale.max(T::one());
    }

    let weight = BlockWeight::diagonal(PsdWeight::identity(fdim), PsdWeight::gram(t));
    let g = optimal_inverse(v, &weight, tol)?;
    let optimal_inverse_exists = g.is_some();

    let global_solution_exists = match &g {
        Some(g) => global_minimum_holds(t, v, g, seed, tol),
        None => false,
    };

    let compatible = is_compatible(&PsdWeight::gram(t), &null_basis(v, tol), tol)?.compatible;

    let conditions = SmoothingConditions {
        operator_min_for_all_b0,
        range_inclusion,
        pointwise_min_for_all_f0,
        optimal_inverse_exists,
        global_solution_exists,
        compatible,
    };
    if !conditions.agree() {
        return Err(Error::EquivalenceViolation(format!(
            "smoothing conditions disagree: {:?}",
            conditions.to_map()
        )));
    }
    Ok(SmoothingReport {
        exists: conditions.global_solution_exists,
        conditions,
        g,
    })
}

/// Each `Ge_j` satisfies the smoothing normal equation, and `Gf` beats
/// seeded random competitors for seeded random data `f`.
fn global_minimum_holds<T: Real>(
    t: &CMatrix<T>,
    v: &CMatrix<T>,
    g: &CMatrix<T>,
    seed: u64,
    tol: &Tolerances<T>,
) -> bool {
    let (fdim, hdim) = v.shape();
    let m = t.adjoint() * t + v.adjoint() * v;
    let stationary = (&m * g - v.adjoint()).norm() <= tol.residual_rtol * m.norm().max(T::one());
    if !stationary {
        return false;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..fdim.max(1)).all(|_| {
        let f = sample::gaussian::<T, _>(&mut rng, fdim, 1);
        let hf = g * &f;
        let best = smoothing_objective(t, v, &f, &hf);
        let scale = f.norm_squared();
        sampled_dominance(
            |r: &mut rand_chacha::ChaCha8Rng| {
                let step: T = T::lit(r.random_range(0.01..1.0));
                let h = &hf + sample::gaussian::<T, _>(r, hdim, 1) * cplx(step);
                smoothing_objective(t, v, &f, &h)
            },
            best,
            &mut rng,
            DOMINANCE_SAMPLES,
            scale,
        )
    })
}
