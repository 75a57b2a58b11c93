//! Shorted operators (Schur complements of positive weights to subspaces),
//! W-orthogonal complements and compatibility of a pair `(W, S)`.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hstack, null_basis_floor, pinv_floor, spectral_norm, PsdWeight, Subspace,
    Tolerances,
};
use crate::scalar::{CMatrix, Real};

fn check_dims<T: Real>(w: &PsdWeight<T>, s: &Subspace<T>) -> Result<()> {
    if w.dim() == s.ambient_dim() {
        Ok(())
    } else {
        Err(Error::InconsistentDims(format!(
            "weight acts on C^{} but the subspace lives in C^{}",
            w.dim(),
            s.ambient_dim()
        )))
    }
}

/// `S^{⊥_W} = {x : ⟨Wx, s⟩ = 0 for all s ∈ S} = N(P_S W)`.
pub fn w_orthogonal_complement<T: Real>(
    w: &PsdWeight<T>,
    s: &Subspace<T>,
    tol: &Tolerances<T>,
) -> Result<Subspace<T>> {
    check_dims(w, s)?;
    if s.dim() == 0 {
        return Ok(Subspace::whole(w.dim()));
    }
    let scale = spectral_norm(w.matrix());
    Ok(null_basis_floor(
        &(s.basis().adjoint() * w.matrix()),
        scale,
        tol,
    ))
}

/// The shorted operator `W_{/S}`: the largest `X` with `0 ≤ X ≤ W` and
/// `R(X) ⊆ S^⊥`.
///
/// In the orthonormal splitting `F = S ⊕ S^⊥` with `W = [[a, b], [b*, c]]`
/// this is `c − b* a† b` placed in the `S^⊥` block.
pub fn shorted<T: Real>(
    w: &PsdWeight<T>,
    s: &Subspace<T>,
    tol: &Tolerances<T>,
) -> Result<PsdWeight<T>> {
    check_dims(w, s)?;
    let qs = s.basis();
    let qp = s.complement();
    let qp = qp.basis();
    let wm = w.matrix();
    let a = qs.adjoint() * wm * qs;
    let b = qs.adjoint() * wm * qp;
    let c = qp.adjoint() * wm * qp;
    let wn = spectral_norm(wm);
    let schur = &c - b.adjoint() * pinv_floor(&a, wn, tol) * &b;
    // eigenvalues within the rank cutoff of ‖W‖ are round-off
    let cut = tol.rank_rtol * wn;
    let schur = hermitian_eigen(&schur).apply(|l| if l > cut { l } else { T::zero() });
    Ok(PsdWeight::from_hermitian_unchecked(
        qp * schur * qp.adjoint(),
    ))
}

/// Witness for the compatibility of `(W, S)`.
#[derive(Debug, Clone)]
pub struct CompatCertificate<T: Real> {
    pub compatible: bool,
    pub s_basis: Subspace<T>,
    pub s_perp_w_basis: Subspace<T>,
    /// `dim(S + S^{⊥_W})`.
    pub sum_rank: usize,
    /// Projection `Q` with `R(Q) = S` and `WQ = Q*W`, present iff compatible.
    pub projection: Option<CMatrix<T>>,
}

/// `(W, S)` is compatible iff `S + S^{⊥_W}` is the whole space.
///
/// The projection returned has range `S` and nullspace
/// `S^{⊥_W} ⊖ (S ∩ S^{⊥_W})`; any projection onto `S` whose nullspace lies
/// inside `S^{⊥_W}` satisfies `WQ = Q*W`.
pub fn is_compatible<T: Real>(
    w: &PsdWeight<T>,
    s: &Subspace<T>,
    tol: &Tolerances<T>,
) -> Result<CompatCertificate<T>> {
    let sw = w_orthogonal_complement(w, s, tol)?;
    let n = w.dim();
    let sum_rank = s.sum_dim(&sw, tol);
    let compatible = sum_rank == n;
    let projection = if compatible {
        compatible_projection(s, &sw, tol)
    } else {
        None
    };
    Ok(CompatCertificate {
        compatible,
        s_basis: s.clone(),
        s_perp_w_basis: sw,
        sum_rank,
        projection,
    })
}

fn compatible_projection<T: Real>(
    s: &Subspace<T>,
    sw: &Subspace<T>,
    tol: &Tolerances<T>,
) -> Option<CMatrix<T>> {
    let n = s.ambient_dim();
    let k = s.dim();
    let overlap = s.intersection(sw, tol);
    let kernel = if overlap.dim() == 0 {
        sw.clone()
    } else {
        sw.intersection(&overlap.complement(), tol)
    };
    if k + kernel.dim() != n {
        log::debug!(
            "compatible projection: dim S = {k}, dim kernel = {}, ambient {n}",
            kernel.dim()
        );
        return None;
    }
    let frame = hstack(s.basis(), kernel.basis());
    let inv = frame.try_inverse()?;
    Some(s.basis() * inv.rows(0, k))
}
