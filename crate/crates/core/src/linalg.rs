//! Dense complex linear algebra: rank decisions, pseudoinverses, subspaces,
//! range inclusion (Douglas factorization) and positive square roots.
//!
//! Every range/nullspace statement is a rank decision: a singular value
//! `σ` counts toward the rank iff `σ > rank_rtol · σ_max`. The zero matrix
//! has rank 0.

use nalgebra::SymmetricEigen;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cplx, CMatrix, CVector, Real};

/// A bounded map between finite-dimensional spaces (rows = codomain).
pub type Operator<T> = CMatrix<T>;

/// Rank and residual tolerances shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative singular-value cutoff.
    pub rank_rtol: T,
    /// Relative residual acceptance.
    pub residual_rtol: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            rank_rtol: T::lit(1e-10),
            residual_rtol: T::lit(1e-8),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn new(rank_rtol: T, residual_rtol: T) -> Result<Self> {
        for (name, v) in [("rank_rtol", rank_rtol), ("residual_rtol", residual_rtol)] {
            if !(v > T::zero() && v < T::one()) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in (0, 1)"
                )));
            }
        }
        Ok(Self {
            rank_rtol,
            residual_rtol,
        })
    }
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

pub fn zeros<T: Real>(rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::zeros(rows, cols)
}

/// Standard basis vector `e_i` of `C^n`.
pub fn basis_vector<T: Real>(n: usize, i: usize) -> CVector<T> {
    let mut e = CVector::zeros(n);
    e[i] = Complex::new(T::one(), T::zero());
    e
}

/// Embed a real matrix.
pub fn from_real<T: Real>(m: &nalgebra::DMatrix<T>) -> CMatrix<T> {
    m.map(cplx)
}

pub fn hstack<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    assert_eq!(a.nrows(), b.nrows(), "hstack row mismatch");
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

pub fn vstack<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    assert_eq!(a.ncols(), b.ncols(), "vstack column mismatch");
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

/// `(M + M*) / 2`.
pub fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()).map(|z| z * cplx(T::lit(0.5)))
}

pub fn ensure_finite<T: Real>(m: &CMatrix<T>, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub(crate) fn check_rows<T: Real>(m: &CMatrix<T>, rows: usize, what: &str) -> Result<()> {
    if m.nrows() == rows {
        Ok(())
    } else {
        Err(Error::InconsistentDims(format!(
            "{what}: expected {rows} rows, found {}",
            m.nrows()
        )))
    }
}

pub(crate) fn check_cols<T: Real>(m: &CMatrix<T>, cols: usize, what: &str) -> Result<()> {
    if m.ncols() == cols {
        Ok(())
    } else {
        Err(Error::InconsistentDims(format!(
            "{what}: expected {cols} columns, found {}",
            m.ncols()
        )))
    }
}

/// Truncated SVD `M ≈ U_r diag(s_r) V_r*`: all `min(rows, cols)` singular
/// values in descending order, and singular vectors for the `rank` values
/// above the cutoff.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: CMatrix<T>,
    pub s: Vec<T>,
    pub v: CMatrix<T>,
    pub rank: usize,
}

/// Singular triplets are read off the Hermitian dilation `[[0, M], [M*, 0]]`,
/// whose eigenpairs are `±σ` with eigenvectors `(u, ±v)/√2`.
pub fn svd<T: Real>(m: &CMatrix<T>, tol: &Tolerances<T>) -> Svd<T> {
    svd_floor(m, T::zero(), tol)
}

/// As [`svd`], with the rank cutoff taken relative to `max(σ_max, floor)`.
///
/// Products such as `Q*W` can cancel to round-off; passing the scale of the
/// factors as `floor` keeps that round-off out of the rank.
pub fn svd_floor<T: Real>(m: &CMatrix<T>, floor: T, tol: &Tolerances<T>) -> Svd<T> {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Svd {
            u: zeros(rows, 0),
            s: Vec::new(),
            v: zeros(cols, 0),
            rank: 0,
        };
    }
    let eig = hermitian_eigen(&dilation(m));
    let total = rows + cols;
    let s: Vec<T> = (0..k)
        .map(|i| eig.values[total - 1 - i].max(T::zero()))
        .collect();
    let rank = rank_from_singular_values(&s, floor, tol.rank_rtol);
    let mut u = zeros(rows, rank);
    let mut v = zeros(cols, rank);
    for i in 0..rank {
        let x = eig.vectors.column(total - 1 - i);
        let a = x.rows(0, rows);
        let b = x.rows(rows, cols);
        u.set_column(i, &(a / cplx(a.norm())));
        v.set_column(i, &(b / cplx(b.norm())));
    }
    Svd { u, s, v, rank }
}

fn dilation<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let (rows, cols) = m.shape();
    let mut h = zeros(rows + cols, rows + cols);
    h.view_mut((0, rows), (rows, cols)).copy_from(m);
    h.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    h
}

fn rank_from_singular_values<T: Real>(s: &[T], floor: T, rank_rtol: T) -> usize {
    let smax = s.iter().copied().fold(floor, |a, b| a.max(b));
    if smax <= T::zero() {
        return 0;
    }
    let cut = rank_rtol * smax;
    s.iter().filter(|&&x| x > cut).count()
}

/// Singular values in descending order (`min(rows, cols)` of them).
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return Vec::new();
    }
    let eig = hermitian_eigen(&dilation(m));
    eig.values
        .iter()
        .rev()
        .take(k)
        .map(|&x| x.max(T::zero()))
        .collect()
}

pub fn numerical_rank<T: Real>(m: &CMatrix<T>, tol: &Tolerances<T>) -> usize {
    numerical_rank_floor(m, T::zero(), tol)
}

pub fn numerical_rank_floor<T: Real>(m: &CMatrix<T>, floor: T, tol: &Tolerances<T>) -> usize {
    rank_from_singular_values(&singular_values(m), floor, tol.rank_rtol)
}

/// Largest singular value, from the Gram matrix on the smaller side.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.nrows() == 0 || m.ncols() == 0 {
        return T::zero();
    }
    let gram = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    hermitian_eigen(&gram).max().max(T::zero()).sqrt()
}

/// Moore–Penrose inverse; singular values at or below the rank cutoff are
/// treated as zero.
pub fn pinv<T: Real>(m: &CMatrix<T>, tol: &Tolerances<T>) -> CMatrix<T> {
    pinv_floor(m, T::zero(), tol)
}

pub fn pinv_floor<T: Real>(m: &CMatrix<T>, floor: T, tol: &Tolerances<T>) -> CMatrix<T> {
    pinv_from(&svd_floor(m, floor, tol))
}

fn pinv_from<T: Real>(d: &Svd<T>) -> CMatrix<T> {
    let r = d.rank;
    let mut vs = d.v.columns(0, r).into_owned();
    for (j, sigma) in d.s.iter().take(r).enumerate() {
        let inv = cplx(T::one() / *sigma);
        vs.column_mut(j).iter_mut().for_each(|z| *z *= inv);
    }
    vs * d.u.columns(0, r).adjoint()
}

/// A subspace of `C^n` held as a matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Real> {
    basis: CMatrix<T>,
}

impl<T: Real> Subspace<T> {
    /// Validate orthonormality of `basis` within `residual_rtol`.
    pub fn new(basis: CMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        ensure_finite(&basis, "subspace basis")?;
        if basis.ncols() > basis.nrows() {
            return Err(Error::InconsistentDims(format!(
                "subspace basis has {} columns in a {}-dimensional space",
                basis.ncols(),
                basis.nrows()
            )));
        }
        let gram = basis.adjoint() * &basis - identity::<T>(basis.ncols());
        if gram.norm() > tol.residual_rtol {
            return Err(Error::InconsistentDims(format!(
                "subspace basis columns are not orthonormal (‖B*B − I‖ = {:e})",
                gram.norm()
            )));
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_orthonormal(basis: CMatrix<T>) -> Self {
        Self { basis }
    }

    /// The span of the columns of `m`.
    pub fn span(m: &CMatrix<T>, tol: &Tolerances<T>) -> Self {
        range_basis(m, tol)
    }

    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            basis: zeros(ambient_dim, 0),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self {
            basis: identity(ambient_dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &CMatrix<T> {
        &self.basis
    }

    /// Orthogonal projection onto the subspace.
    pub fn projector(&self) -> CMatrix<T> {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement; `dim + complement.dim == ambient_dim` exactly.
    pub fn complement(&self) -> Self {
        let n = self.ambient_dim();
        let k = self.dim();
        if k == 0 {
            return Self::whole(n);
        }
        if k == n {
            return Self::trivial(n);
        }
        let eig = hermitian_eigen(&(identity::<T>(n) - self.projector()));
        // eigenvalues ascending: the top n-k belong to the complement
        let basis = eig.vectors.columns(k, n - k).into_owned();
        Self { basis }
    }

    pub fn intersection(&self, other: &Self, tol: &Tolerances<T>) -> Self {
        let n = self.ambient_dim();
        let k = self.dim();
        if k == 0 || other.dim() == 0 {
            return Self::trivial(n);
        }
        // Q_S a = Q_M b  ⇔  (a, −b) ∈ N([Q_S | Q_M])
        let pairs = null_basis(&hstack(&self.basis, &other.basis), tol);
        let coeffs = pairs.basis.rows(0, k).into_owned();
        Subspace::span(&(&self.basis * coeffs), tol)
    }

    /// `dim(self + other)` under the rank decision.
    pub fn sum_dim(&self, other: &Self, tol: &Tolerances<T>) -> usize {
        numerical_rank(&hstack(&self.basis, &other.basis), tol)
    }
}

/// Orthonormal basis of `R(M)`.
pub fn range_basis<T: Real>(m: &CMatrix<T>, tol: &Tolerances<T>) -> Subspace<T> {
    range_basis_floor(m, T::zero(), tol)
}

pub fn range_basis_floor<T: Real>(m: &CMatrix<T>, floor: T, tol: &Tolerances<T>) -> Subspace<T> {
    let d = svd_floor(m, floor, tol);
    Subspace::from_orthonormal(d.u.columns(0, d.rank).into_owned())
}

/// Orthonormal basis of `N(M)`.
pub fn null_basis<T: Real>(m: &CMatrix<T>, tol: &Tolerances<T>) -> Subspace<T> {
    null_basis_floor(m, T::zero(), tol)
}

pub fn null_basis_floor<T: Real>(m: &CMatrix<T>, floor: T, tol: &Tolerances<T>) -> Subspace<T> {
    let d = svd_floor(m, floor, tol);
    Subspace::from_orthonormal(d.v).complement()
}

/// Outcome of a range-inclusion test `R(B) ⊆ R(A)`.
#[derive(Debug, Clone)]
pub struct Inclusion<T: Real> {
    pub included: bool,
    /// `‖(I − A A†) B‖`.
    pub residual: T,
    /// `C = A† B` with `A C = B`, present iff included.
    pub factor: Option<CMatrix<T>>,
}

/// Douglas test: is `R(B) ⊆ R(A)`? When it is, the minimal-norm factor
/// `C = A†B` solves `AC = B`.
pub fn range_included<T: Real>(
    b: &CMatrix<T>,
    a: &CMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<Inclusion<T>> {
    range_included_floor(b, a, T::zero(), tol)
}

/// As [`range_included`], with the rank of `A` decided by [`svd_floor`].
pub fn range_included_floor<T: Real>(
    b: &CMatrix<T>,
    a: &CMatrix<T>,
    floor: T,
    tol: &Tolerances<T>,
) -> Result<Inclusion<T>> {
    if a.nrows() != b.nrows() {
        return Err(Error::InconsistentDims(format!(
            "range inclusion: A has {} rows, B has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    let d = svd_floor(a, floor, tol);
    let ur = d.u.columns(0, d.rank);
    let residual = (b - ur * (ur.adjoint() * b)).norm();
    let included = residual <= tol.residual_rtol * b.norm().max(T::one());
    let factor = included.then(|| pinv_from(&d) * b);
    Ok(Inclusion {
        included,
        residual,
        factor,
    })
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V f(Λ) V*`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> CMatrix<T> {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let w = cplx(f(lam));
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        hermitian_part(&(scaled * self.vectors.adjoint()))
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> HermitianEigen<T> {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .expect("NaN eigenvalue")
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

/// Hermitian positive semidefinite weight `W`, defining `‖x‖_W = ⟨Wx, x⟩^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdWeight<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> PsdWeight<T> {
    /// Validates `‖W − W*‖ ≤ residual_rtol·‖W‖` and
    /// `λ_min ≥ −rank_rtol·λ_max`, storing the Hermitian part.
    pub fn new(m: CMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        ensure_finite(&m, "weight")?;
        if !m.is_square() {
            return Err(Error::InconsistentDims(format!(
                "weight must be square, found {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let asymmetry = (&m - m.adjoint()).norm();
        let bound = tol.residual_rtol * m.norm();
        if asymmetry > bound {
            return Err(Error::NotHermitian {
                asymmetry: asymmetry.as_f64(),
                bound: bound.as_f64(),
            });
        }
        let w = Self::from_hermitian_unchecked(m);
        check_psd(&hermitian_eigen(&w.m), tol)?;
        Ok(w)
    }

    /// Takes the Hermitian part of `m` without checking the spectrum.
    pub(crate) fn from_hermitian_unchecked(m: CMatrix<T>) -> Self {
        Self {
            m: hermitian_part(&m),
        }
    }

    /// `T*T`, positive by construction.
    pub fn gram(t: &CMatrix<T>) -> Self {
        Self::from_hermitian_unchecked(t.adjoint() * t)
    }

    pub fn identity(n: usize) -> Self {
        Self { m: identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        hermitian_eigen(&self.m)
    }

    /// `⟨Wx, x⟩` (real by Hermitian symmetry).
    pub fn quadratic_form(&self, x: &CVector<T>) -> T {
        x.dotc(&(&self.m * x)).re
    }
}

fn check_psd<T: Real>(eig: &HermitianEigen<T>, tol: &Tolerances<T>) -> Result<()> {
    let bound = -tol.rank_rtol * eig.max();
    let min = eig.min();
    if min < bound {
        return Err(Error::NotPsd {
            min_eigenvalue: min.as_f64(),
            bound: bound.as_f64(),
        });
    }
    Ok(())
}

/// Hermitian PSD square root; eigenvalues in `[−rank_rtol·λ_max, rank_rtol·λ_max]`
/// are clamped to zero.
pub fn psd_sqrt<T: Real>(w: &PsdWeight<T>, tol: &Tolerances<T>) -> Result<CMatrix<T>> {
    let eig = w.eigen();
    check_psd(&eig, tol)?;
    let cut = tol.rank_rtol * eig.max();
    Ok(eig.apply(|l| if l > cut { l.sqrt() } else { T::zero() }))
}

/// `W^e` for `e > 0`; eigenvalues at or below the rank cutoff contribute 0.
pub fn psd_power<T: Real>(
    w: &PsdWeight<T>,
    exponent: T,
    tol: &Tolerances<T>,
) -> Result<CMatrix<T>> {
    let eig = w.eigen();
    check_psd(&eig, tol)?;
    let cut = tol.rank_rtol * eig.max();
    Ok(eig.apply(|l| {
        if l > cut && l > T::zero() {
            l.powf(exponent)
        } else {
            T::zero()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    fn real(m: nalgebra::DMatrix<f64>) -> CMatrix<f64> {
        from_real(&m)
    }

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn max_abs(m: &CMatrix<f64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn tolerances_reject_out_of_range() {
        assert!(Tolerances::new(0.0, 1e-8).is_err());
        assert!(Tolerances::new(1e-10, 1.0).is_err());
        assert!(Tolerances::new(1e-10, 1e-8).is_ok());
    }

    #[test]
    fn pinv_of_diagonal() {
        let p = pinv(&real(dmatrix![2.0, 0.0; 0.0, 0.0]), &tol());
        assert!(max_abs(&(p - real(dmatrix![0.5, 0.0; 0.0, 0.0]))) < 1e-15);
    }

    #[test]
    fn pinv_of_column() {
        let p = pinv(&real(dmatrix![1.0; 1.0]), &tol());
        assert!(max_abs(&(p - real(dmatrix![0.5, 0.5]))) < 1e-15);
    }

    #[test]
    fn pinv_drops_tiny_singular_values() {
        let m = real(dmatrix![1.0, 0.0; 0.0, 1e-14]);
        let p = pinv(&m, &tol());
        assert!(max_abs(&(p - real(dmatrix![1.0, 0.0; 0.0, 0.0]))) < 1e-15);
        assert_eq!(numerical_rank(&m, &tol()), 1);
    }

    #[test]
    fn pinv_of_zero_is_zero() {
        let p = pinv(&zeros::<f64>(2, 3), &tol());
        assert_eq!(p.shape(), (3, 2));
        assert_eq!(max_abs(&p), 0.0);
    }

    #[test]
    fn range_and_null_of_diag() {
        let m = real(dmatrix![1.0, 0.0; 0.0, 0.0]);
        let r = range_basis(&m, &tol());
        let n = null_basis(&m, &tol());
        assert_eq!((r.dim(), n.dim()), (1, 1));
        assert_abs_diff_eq!(r.basis()[(0, 0)].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.basis()[(1, 0)].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn range_and_null_of_zero() {
        let m = zeros::<f64>(2, 2);
        assert_eq!(range_basis(&m, &tol()).dim(), 0);
        assert_eq!(null_basis(&m, &tol()).dim(), 2);
    }

    #[test]
    fn range_and_null_of_rank_one() {
        let m = real(dmatrix![1.0, 1.0; 1.0, 1.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = range_basis(&m, &tol());
        let n = null_basis(&m, &tol());
        let pr = r.projector() - real(dmatrix![0.5, 0.5; 0.5, 0.5]);
        let pn = n.projector() - real(dmatrix![0.5, -0.5; -0.5, 0.5]);
        assert!(max_abs(&pr) < 1e-14 && max_abs(&pn) < 1e-14);
        assert_abs_diff_eq!(r.basis()[(0, 0)].norm(), s, epsilon = 1e-14);
    }

    #[test]
    fn null_basis_of_wide_matrix() {
        let m = real(dmatrix![1.0, 0.0, 0.0]);
        let n = null_basis(&m, &tol());
        assert_eq!(n.dim(), 2);
        assert!(max_abs(&(&m * n.basis())) < 1e-14);
    }

    #[test]
    fn range_inclusion_examples() {
        let a = real(dmatrix![1.0, 0.0; 0.0, 0.0]);
        let e1 = real(dmatrix![1.0; 0.0]);
        let e2 = real(dmatrix![0.0; 1.0]);
        let inc = range_included(&e1, &a, &tol()).unwrap();
        assert!(inc.included);
        assert!(max_abs(&(inc.factor.unwrap() - &e1)) < 1e-15);
        let out = range_included(&e2, &a, &tol()).unwrap();
        assert!(!out.included && out.factor.is_none());
        assert!(range_included(&e1, &zeros(3, 1), &tol()).is_err());
    }

    #[test]
    fn psd_sqrt_examples() {
        let r = psd_sqrt(
            &PsdWeight::new(real(dmatrix![4.0, 0.0; 0.0, 9.0]), &tol()).unwrap(),
            &tol(),
        )
        .unwrap();
        assert!(max_abs(&(r - real(dmatrix![2.0, 0.0; 0.0, 3.0]))) < 1e-14);
        let z = psd_sqrt(&PsdWeight::<f64>::zeros(2), &tol()).unwrap();
        assert_eq!(max_abs(&z), 0.0);
        let w = real(dmatrix![2.0, 1.0; 1.0, 1.0]);
        let r = psd_sqrt(&PsdWeight::new(w.clone(), &tol()).unwrap(), &tol()).unwrap();
        assert!(max_abs(&(&r * &r - w)) < 1e-12);
        assert!(max_abs(&(&r - r.adjoint())) < 1e-15);
    }

    #[test]
    fn weight_validation() {
        let t = tol();
        assert!(matches!(
            PsdWeight::new(real(dmatrix![1.0, 0.0; 0.0, -1.0]), &t),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            PsdWeight::new(real(dmatrix![1.0, 1.0; 0.0, 1.0]), &t),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            PsdWeight::new(real(dmatrix![1.0, 0.0]), &t),
            Err(Error::InconsistentDims(_))
        ));
        // within the clamp
        assert!(PsdWeight::new(real(dmatrix![1.0, 0.0; 0.0, -1e-13]), &t).is_ok());
    }

    #[test]
    fn subspace_complement_and_intersection() {
        let t = tol();
        let s = Subspace::span(&real(dmatrix![1.0, 0.0; 0.0, 1.0; 0.0, 0.0]), &t);
        let c = s.complement();
        assert_eq!(c.dim(), 1);
        assert_abs_diff_eq!(c.basis()[(2, 0)].norm(), 1.0, epsilon = 1e-14);
        let m = Subspace::span(&real(dmatrix![0.0; 1.0; 1.0]), &t);
        assert_eq!(s.intersection(&m, &t).dim(), 0);
        assert_eq!(s.sum_dim(&m, &t), 3);
        let m2 = Subspace::span(&real(dmatrix![0.0, 0.0; 1.0, 0.0; 0.0, 1.0]), &t);
        let i = s.intersection(&m2, &t);
        assert_eq!(i.dim(), 1);
        assert_abs_diff_eq!(i.basis()[(1, 0)].norm(), 1.0, epsilon = 1e-12);
        assert!(Subspace::new(real(dmatrix![1.0; 1.0]), &t).is_err());
    }

    #[test]
    fn psd_power_cuts_small_eigenvalues() {
        let t = tol();
        let w = PsdWeight::new(real(dmatrix![4.0, 0.0; 0.0, 1e-13]), &t).unwrap();
        let p = psd_power(&w, 0.5, &t).unwrap();
        assert!(max_abs(&(p - real(dmatrix![2.0, 0.0; 0.0, 0.0]))) < 1e-14);
    }
}
