//! Independent verifiers.
//!
//! Exact minimizers of quadratics over affine sets, computed by spectral
//! decomposition of the reduced Hessian. Nothing here calls the solver
//! modules or the pseudoinverse; only the Hermitian eigensolver is shared.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, identity, PsdWeight, Subspace, Tolerances};
use crate::scalar::{cplx, CMatrix, CVector, Real};
use num_complex::Complex;

/// `f(c) = ⟨Qc, c⟩ + 2 Re⟨l, c⟩ + constant` with `Q ⪰ 0`.
#[derive(Debug, Clone)]
pub struct QuadraticForm<T: Real> {
    pub q: PsdWeight<T>,
    pub l: CVector<T>,
    pub c: T,
}

impl<T: Real> QuadraticForm<T> {
    pub fn eval(&self, v: &CVector<T>) -> T {
        self.q.quadratic_form(v) + T::lit(2.0) * self.l.dotc(v).re + self.c
    }

    /// Minimal-norm minimizer `−Q⁺ l`, with `Q⁺` assembled from the
    /// eigenpairs above the rank cutoff.
    pub fn minimizer(&self, tol: &Tolerances<T>) -> CVector<T> {
        let eig = hermitian_eigen(self.q.matrix());
        let cut = tol.rank_rtol * eig.max();
        let mut c = CVector::zeros(self.l.len());
        for (j, &lam) in eig.values.iter().enumerate() {
            if lam > cut && lam > T::zero() {
                let v = eig.vectors.column(j);
                let coef = v.dotc(&self.l) * cplx(-T::one() / lam);
                c += v * coef;
            }
        }
        c
    }
}

/// Minimize `‖A(h0 + Bc) − x‖²_W` over `c`, where `B` spans `basis`.
///
/// Returns the minimum value and the minimizing point `h = h0 + Bc`.
pub fn quadratic_min_over_affine<T: Real>(
    w: &PsdWeight<T>,
    a: &CMatrix<T>,
    x: &CVector<T>,
    anchor: &CVector<T>,
    basis: &Subspace<T>,
    tol: &Tolerances<T>,
) -> Result<(T, CVector<T>)> {
    if a.nrows() != w.dim()
        || x.len() != w.dim()
        || anchor.len() != a.ncols()
        || basis.ambient_dim() != a.ncols()
    {
        return Err(Error::InconsistentDims(format!(
            "oracle: A is {:?}, W has dim {}, x has {}, anchor has {}, basis in C^{}",
            a.shape(),
            w.dim(),
            x.len(),
            anchor.len(),
            basis.ambient_dim()
        )));
    }
    let wm = w.matrix();
    let r0 = a * anchor - x;
    let ab = a * basis.basis();
    let form = QuadraticForm {
        q: PsdWeight::from_hermitian_unchecked(ab.adjoint() * wm * &ab),
        l: ab.adjoint() * wm * &r0,
        c: w.quadratic_form(&r0),
    };
    let c = form.minimizer(tol);
    let h = anchor + basis.basis() * c;
    let r = a * &h - x;
    Ok((w.quadratic_form(&r), h))
}

/// `inf_{s ∈ S} ⟨W(x + s), x + s⟩`.
pub fn shorted_variational<T: Real>(
    w: &PsdWeight<T>,
    s: &Subspace<T>,
    x: &CVector<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    let n = w.dim();
    quadratic_min_over_affine(w, &identity(n), &CVector::zeros(n), x, s, tol).map(|(v, _)| v)
}

/// True iff `candidate ≤ objective(sample) + 1e-10·scale` for `n` samples
/// drawn by `objective` from `rng`.
pub fn sampled_dominance<T: Real, R: Rng + ?Sized>(
    mut objective: impl FnMut(&mut R) -> T,
    candidate: T,
    rng: &mut R,
    n: usize,
    scale: T,
) -> bool {
    assert!(n >= 1, "sampled_dominance needs at least one sample");
    let slack = T::lit(1e-10) * scale;
    (0..n).all(|_| candidate <= objective(rng) + slack)
}

/// Seeded random instance generators.
pub mod sample {
    use super::*;

    fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
        T::lit(rng.sample::<f64, _>(StandardNormal))
    }

    /// Entries with independent standard normal real and imaginary parts.
    pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
        CMatrix::from_fn(rows, cols, |_, _| Complex::new(normal(rng), normal(rng)))
    }

    pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector<T> {
        CVector::from_fn(n, |_, _| Complex::new(normal(rng), normal(rng)))
    }

    /// Product of `rows×rank` and `rank×cols` Gaussian factors.
    pub fn low_rank<T: Real, R: Rng + ?Sized>(
        rng: &mut R,
        rows: usize,
        cols: usize,
        rank: usize,
    ) -> CMatrix<T> {
        gaussian::<T, _>(rng, rows, rank) * gaussian::<T, _>(rng, rank, cols)
    }

    /// `G G*` with `G` of size `n×rank`.
    pub fn psd<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> PsdWeight<T> {
        let g = gaussian::<T, _>(rng, n, rank);
        PsdWeight::from_hermitian_unchecked(&g * g.adjoint())
    }

    pub fn unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
        gaussian::<T, _>(rng, n, n).qr().q()
    }

    /// A matrix with spectral norm at most one.
    pub fn contraction<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
        let g = gaussian::<T, _>(rng, n, n);
        let s = crate::linalg::spectral_norm(&g);
        let scale = T::lit(rng.random_range(0.1..1.0)) / s;
        g * cplx(scale)
    }
}
