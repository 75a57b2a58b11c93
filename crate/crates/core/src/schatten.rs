//! Schatten p-norms, weighted p-seminorms, polar decomposition and the
//! Fréchet derivative of `X ↦ ‖X‖_p^p`.

use crate::error::{Error, Result};
use crate::linalg::{check_rows, psd_power, psd_sqrt, singular_values, svd, PsdWeight, Tolerances};
use crate::scalar::{cplx, CMatrix, Real};

/// Schatten index `p ∈ [1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SchattenIndex<T>(T);

impl<T: Real> SchattenIndex<T> {
    pub fn new(p: T) -> Result<Self> {
        if p.is_finite() && p >= T::one() {
            Ok(Self(p))
        } else {
            Err(Error::InvalidIndex(p.as_f64()))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Trace norm.
    pub fn nuclear() -> Self {
        Self(T::one())
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn frobenius() -> Self {
        Self(T::lit(2.0))
    }
}

/// `Σ_k σ_k(X)^p`.
pub fn schatten_power<T: Real>(x: &CMatrix<T>, p: SchattenIndex<T>) -> T {
    singular_values(x)
        .into_iter()
        .fold(T::zero(), |acc, s| acc + s.powf(p.0))
}

/// `(Σ_k σ_k(X)^p)^{1/p}`, scaled by `σ_max` to avoid overflow.
pub fn schatten_norm<T: Real>(x: &CMatrix<T>, p: SchattenIndex<T>) -> T {
    let s = singular_values(x);
    let smax = s.first().copied().unwrap_or_else(T::zero);
    if smax <= T::zero() {
        return T::zero();
    }
    if p.0 == T::one() {
        return s.into_iter().fold(T::zero(), |a, b| a + b);
    }
    let sum = s
        .into_iter()
        .fold(T::zero(), |acc, v| acc + (v / smax).powf(p.0));
    smax * sum.powf(T::one() / p.0)
}

/// `‖Y‖_{p,W} = ‖W^{1/2} Y‖_p`.
pub fn weighted_schatten_norm<T: Real>(
    y: &CMatrix<T>,
    w: &PsdWeight<T>,
    p: SchattenIndex<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    check_rows(y, w.dim(), "weighted norm operand")?;
    let root = psd_sqrt(w, tol)?;
    Ok(schatten_norm(&(root * y), p))
}

/// Polar decomposition `X = U |X|`.
#[derive(Debug, Clone)]
pub struct PolarPair<T: Real> {
    /// Partial isometry with `N(U) = N(X)`.
    pub u: CMatrix<T>,
    /// `|X| = (X*X)^{1/2}`.
    pub abs_x: PsdWeight<T>,
}

pub fn polar<T: Real>(x: &CMatrix<T>, tol: &Tolerances<T>) -> PolarPair<T> {
    let d = svd(x, tol);
    let r = d.rank;
    let ur = d.u.columns(0, r);
    let vr = d.v.columns(0, r);
    let u = ur * vr.adjoint();
    let mut vs = vr.into_owned();
    for (j, s) in d.s.iter().take(r).enumerate() {
        let w = cplx(*s);
        vs.column_mut(j).iter_mut().for_each(|z| *z *= w);
    }
    let abs_x = PsdWeight::from_hermitian_unchecked(vs * vr.adjoint());
    PolarPair { u, abs_x }
}

/// `DG_p(X)(Y) = p · Re tr(|X|^{p−1} U* Y)` for `G_p(X) = ‖X‖_p^p`, `p > 1`.
pub fn frechet_gp<T: Real>(
    x: &CMatrix<T>,
    y: &CMatrix<T>,
    p: SchattenIndex<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    if p.0 <= T::one() {
        return Err(Error::UnsupportedIndex(p.0.as_f64()));
    }
    if x.shape() != y.shape() {
        return Err(Error::InconsistentDims(format!(
            "derivative direction is {:?}, point is {:?}",
            y.shape(),
            x.shape()
        )));
    }
    let pol = polar(x, tol);
    let power = psd_power(&pol.abs_x, p.0 - T::one(), tol)?;
    let tr = (power * pol.u.adjoint() * y).trace();
    Ok(p.0 * tr.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real, identity};
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    fn real(m: nalgebra::DMatrix<f64>) -> CMatrix<f64> {
        from_real(&m)
    }

    fn p(v: f64) -> SchattenIndex<f64> {
        SchattenIndex::new(v).unwrap()
    }

    fn max_abs(m: &CMatrix<f64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn index_validation() {
        assert!(SchattenIndex::new(0.5).is_err());
        assert!(SchattenIndex::new(f64::INFINITY).is_err());
        assert!(SchattenIndex::new(f64::NAN).is_err());
        assert!(SchattenIndex::new(1.0).is_ok());
    }

    #[test]
    fn norm_examples() {
        let x = real(dmatrix![3.0, 0.0; 0.0, 4.0]);
        assert_abs_diff_eq!(schatten_norm(&x, p(2.0)), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            schatten_norm(&identity::<f64>(4), p(1.0)),
            4.0,
            epsilon = 1e-14
        );
        assert_eq!(schatten_norm(&CMatrix::<f64>::zeros(2, 3), p(3.0)), 0.0);
    }

    #[test]
    fn norm_of_upper_triangular_p3() {
        // X*X = [[1,1],[1,2]], eigenvalues (3 ± √5)/2, σ_k = sqrt of those
        let l1: f64 = (3.0 + 5f64.sqrt()) / 2.0;
        let l2: f64 = (3.0 - 5f64.sqrt()) / 2.0;
        let expected = (l1.powf(1.5) + l2.powf(1.5)).powf(1.0 / 3.0);
        let x = real(dmatrix![1.0, 1.0; 0.0, 1.0]);
        assert_abs_diff_eq!(schatten_norm(&x, p(3.0)), expected, epsilon = 1e-13);
    }

    #[test]
    fn weighted_norm_examples() {
        let t = Tolerances::default();
        let y = real(dmatrix![1.0, 2.0; 3.0, 4.0]);
        let w = PsdWeight::identity(2);
        assert_abs_diff_eq!(
            weighted_schatten_norm(&y, &w, p(3.0), &t).unwrap(),
            schatten_norm(&y, p(3.0)),
            epsilon = 1e-13
        );
        let w = PsdWeight::new(real(dmatrix![1.0, 0.0; 0.0, 4.0]), &t).unwrap();
        assert_abs_diff_eq!(
            weighted_schatten_norm(&identity(2), &w, p(2.0), &t).unwrap(),
            5f64.sqrt(),
            epsilon = 1e-14
        );
        let w = PsdWeight::new(real(dmatrix![1.0, 0.0; 0.0, 0.0]), &t).unwrap();
        let y = real(dmatrix![0.0, 0.0; 1.0, 1.0]);
        for q in [1.0, 2.0, 3.5] {
            assert_eq!(weighted_schatten_norm(&y, &w, p(q), &t).unwrap(), 0.0);
        }
        assert!(weighted_schatten_norm(&identity(3), &w, p(2.0), &t).is_err());
    }

    #[test]
    fn polar_examples() {
        let t = Tolerances::default();
        let x = real(dmatrix![2.0, 0.0; 0.0, 0.0]);
        let pol = polar(&x, &t);
        assert!(max_abs(&(pol.u - real(dmatrix![1.0, 0.0; 0.0, 0.0]))) < 1e-15);
        assert!(max_abs(&(pol.abs_x.matrix() - &x)) < 1e-15);

        let pol = polar(&real(dmatrix![-2.0]), &t);
        assert_abs_diff_eq!(pol.u[(0, 0)].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pol.abs_x.matrix()[(0, 0)].re, 2.0, epsilon = 1e-15);

        let shift = real(dmatrix![0.0, 1.0; 0.0, 0.0]);
        let pol = polar(&shift, &t);
        assert!(max_abs(&(pol.abs_x.matrix() - real(dmatrix![0.0, 0.0; 0.0, 1.0]))) < 1e-15);
        assert!(max_abs(&(&pol.u - &shift)) < 1e-15);
    }

    #[test]
    fn frechet_examples() {
        let t = Tolerances::default();
        let x = real(dmatrix![1.0, 0.0; 0.0, 2.0]);
        let y = identity::<f64>(2);
        assert_abs_diff_eq!(
            frechet_gp(&x, &y, p(2.0), &t).unwrap(),
            6.0,
            epsilon = 1e-14
        );
        assert_eq!(
            frechet_gp(&x, &CMatrix::zeros(2, 2), p(3.0), &t).unwrap(),
            0.0
        );
        assert!(matches!(
            frechet_gp(&x, &y, p(1.0), &t),
            Err(Error::UnsupportedIndex(_))
        ));
        assert!(frechet_gp(&x, &CMatrix::zeros(2, 3), p(2.0), &t).is_err());
    }
}
