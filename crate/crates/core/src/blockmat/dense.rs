use std::ops::{Add, Mul, Sub};

use ndarray::{s, Array1, Array2, ArrayView2, Axis, ShapeBuilder};
use ndarray_linalg::{Eigh, JobSvd, SVDDC, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A vector in `C^n`.
pub type CVector = Array1<C64>;

/// Relative residual budget for factorizations.
pub const TOL_SVD: f64 = 1e-12;

/// Relative Hermitian-symmetry gate used by [`hermitian_eig`].
pub const TOL_HERM: f64 = 1e-10;

/// Dense complex matrix, the concrete stand-in for an operator on `C^n`.
///
/// Construction through [`ComplexMatrix::new`] rejects non-finite entries.
/// Arithmetic results are not re-validated; the numerical entry points
/// ([`spectral_norm`], [`pinv`], [`hermitian_eig`]) check finiteness again.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(Array2<C64>);

impl ComplexMatrix {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        Ok(Self(entries))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let a = Array2::from_shape_vec((rows, cols), entries)
            .map_err(|e| Error::Dimension(e.to_string()))?;
        Self::new(a)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut((usize, usize)) -> C64) -> Self {
        Self(Array2::from_shape_fn((rows, cols), f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(Array2::zeros((rows, cols)))
    }

    pub fn identity(n: usize) -> Self {
        Self(Array2::eye(n))
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut a = Array2::zeros((n, n));
        for (i, d) in diag.iter().enumerate() {
            a[[i, i]] = *d;
        }
        Self(a)
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Rank-one operator `h -> <h, v> u`, i.e. the matrix `u v^*`.
    pub fn rank_one(u: &CVector, v: &CVector) -> Self {
        Self::from_fn(u.len(), v.len(), |(i, j)| u[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |(i, j)| columns[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.dim()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.rows() == 0 || self.cols() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[[i, j]]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[[i, j]] = z;
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn view(&self) -> ArrayView2<'_, C64> {
        self.0.view()
    }

    pub fn into_array(self) -> Array2<C64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.t().mapv(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.t().to_owned())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(self.0.mapv(|z| z * c))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self(self.0.mapv(|z| z * c))
    }

    /// Matrix product with a shape check.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Self(self.0.dot(&other.0)))
    }

    /// Matrix-vector product with a shape check.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if self.cols() != v.len() {
            return Err(Error::Dimension(format!(
                "cannot apply {:?} to a vector of length {}",
                self.shape(),
                v.len()
            )));
        }
        Ok(self.0.dot(v))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn trace(&self) -> C64 {
        self.0.diag().sum()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> CVector {
        self.0.column(j).to_owned()
    }

    /// Copy of the sub-block starting at `(r0, c0)` with the given shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.slice(s![r0..r0 + rows, c0..c0 + cols]).to_owned())
    }

    pub(crate) fn write_block(&mut self, r0: usize, c0: usize, block: &Self) {
        self.0
            .slice_mut(s![r0..r0 + block.rows(), c0..c0 + block.cols()])
            .assign(&block.0);
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[Self]) -> Result<Self> {
        let cols = parts.first().map_or(0, |p| p.cols());
        if parts.iter().any(|p| p.cols() != cols) {
            return Err(Error::Dimension("vstack of unequal column counts".into()));
        }
        let views: Vec<_> = parts.iter().map(|p| p.0.view()).collect();
        ndarray::concatenate(Axis(0), &views)
            .map(Self)
            .map_err(|e| Error::Dimension(e.to_string()))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Panics on shape mismatch, like `ndarray`'s `dot`; use [`ComplexMatrix::matmul`]
/// at API boundaries.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0.dot(&rhs.0))
    }
}

/// Thin singular value decomposition `A = U diag(s) V^*`.
#[derive(Clone, Debug)]
pub struct SvdFactorization {
    /// `m x k` with orthonormal columns, `k = min(m, n)`.
    pub left_vectors: ComplexMatrix,
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `n x k` with orthonormal columns.
    pub right_vectors: ComplexMatrix,
}

impl SvdFactorization {
    /// Largest singular value, zero for empty factorizations.
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rtol * sigma_max`.
    pub fn numerical_rank(&self, rtol: f64) -> usize {
        let cutoff = rtol * self.max_singular_value();
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.left_vectors.0.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).mapv_inplace(|z| z * *s);
        }
        ComplexMatrix(us.dot(&self.right_vectors.adjoint().0))
    }
}

fn ensure_finite(a: &ComplexMatrix) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(Error::Input("matrix has non-finite entries".into()))
    }
}

fn backend(e: ndarray_linalg::error::LinalgError) -> Error {
    Error::Backend(e.to_string())
}

/// Thin SVD through LAPACK's divide-and-conquer driver.
pub fn svd(a: &ComplexMatrix) -> Result<SvdFactorization> {
    ensure_finite(a)?;
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(SvdFactorization {
            left_vectors: ComplexMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            right_vectors: ComplexMatrix::zeros(n, 0),
        });
    }
    let (u, s, vt) = a.0.svddc(JobSvd::Some).map_err(backend)?;
    let u = u.ok_or_else(|| Error::Backend("svd returned no left vectors".into()))?;
    let vt = vt.ok_or_else(|| Error::Backend("svd returned no right vectors".into()))?;
    Ok(SvdFactorization {
        left_vectors: ComplexMatrix(u),
        singular_values: s.to_vec(),
        right_vectors: ComplexMatrix(vt).adjoint(),
    })
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_finite(a)?;
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let (_, s, _) = a.0.svddc(JobSvd::None).map_err(backend)?;
    Ok(s.to_vec())
}

/// Operator norm on `C^n`, i.e. the largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    ensure_finite(a)?;
    match a.shape() {
        (0, _) | (_, 0) => Ok(0.0),
        (1, _) | (_, 1) => Ok(a.frobenius_norm()),
        _ => Ok(singular_values(a)?[0]),
    }
}

/// Default truncation threshold for pseudo-inverses: `max(m, n) * eps * 64`.
pub fn default_rtol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * 64.0
}

/// Moore-Penrose pseudo-inverse by SVD truncation.
///
/// Singular values `sigma_i > rtol * sigma_max` are inverted, the rest are
/// treated as zero. `rtol = None` selects [`default_rtol`].
pub fn pinv(a: &ComplexMatrix, rtol: Option<f64>) -> Result<ComplexMatrix> {
    Ok(pinv_with_norm(a, rtol)?.0)
}

/// [`pinv`] together with `||A^+|| = 1 / sigma_r`, read off the retained
/// singular values.
pub(crate) fn pinv_with_norm(a: &ComplexMatrix, rtol: Option<f64>) -> Result<(ComplexMatrix, f64)> {
    if a.is_empty() {
        return Err(Error::Input("pseudo-inverse of an empty matrix".into()));
    }
    let rtol = resolve_rtol(a, rtol)?;
    let f = svd(a)?;
    let rank = f.numerical_rank(rtol);
    let (m, n) = a.shape();
    if rank == 0 {
        return Ok((ComplexMatrix::zeros(n, m), 0.0));
    }
    // A^+ = V_r diag(1/s) U_r^*
    let mut v = f.right_vectors.0.slice(s![.., 0..rank]).to_owned();
    for (j, s) in f.singular_values[..rank].iter().enumerate() {
        v.column_mut(j).mapv_inplace(|z| z / *s);
    }
    let ut = f.left_vectors.0.slice(s![.., 0..rank]).t().mapv(|z| z.conj());
    Ok((ComplexMatrix(v.dot(&ut)), 1.0 / f.singular_values[rank - 1]))
}

fn resolve_rtol(a: &ComplexMatrix, rtol: Option<f64>) -> Result<f64> {
    let rtol = rtol.unwrap_or_else(|| default_rtol(a.rows(), a.cols()));
    if !(rtol >= 0.0 && rtol.is_finite()) {
        return Err(Error::Input(format!("rtol must be finite and >= 0, got {rtol}")));
    }
    Ok(rtol)
}

/// Pseudo-inverse through the identity `A^+ = A^* (A A^*)^+`.
///
/// The truncation threshold `rtol` is applied to the singular values of
/// `A A^*`, which carry rounding noise of order `eps * ||A||^2`.
pub fn pinv_via_formula(a: &ComplexMatrix, rtol: Option<f64>) -> Result<ComplexMatrix> {
    if a.is_empty() {
        return Err(Error::Input("pseudo-inverse of an empty matrix".into()));
    }
    let rtol = resolve_rtol(a, rtol)?;
    let adj = a.adjoint();
    let gram = a * &adj;
    let inner = pinv(&gram, Some(rtol))?;
    Ok(&adj * &inner)
}

/// Relative residuals of the Moore-Penrose conditions for a candidate `A^+`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoorePenroseResiduals {
    /// `||A A^+ A - A|| / ||A||`
    pub aga: f64,
    /// `||A^+ A A^+ - A^+|| / ||A^+||`
    pub gag: f64,
    /// `||(A A^+)^* - A A^+|| / ||A A^+||`
    pub ag_hermitian: f64,
    /// `||(A^+ A)^* - A^+ A|| / ||A^+ A||`
    pub ga_hermitian: f64,
    /// `||A^+ P_{R(A)^perp}|| / ||A^+||`: `A^+` annihilates the orthogonal complement of the range of `A`.
    pub kernel_of_pinv: f64,
    /// `||P_{N(A)} A^+|| / ||A^+||`: the range of `A^+` is orthogonal to the kernel of `A`.
    pub range_of_pinv: f64,
    pub rank: usize,
    pub pinv_rank: usize,
}

impl MoorePenroseResiduals {
    pub fn max_residual(&self) -> f64 {
        [
            self.aga,
            self.gag,
            self.ag_hermitian,
            self.ga_hermitian,
            self.kernel_of_pinv,
            self.range_of_pinv,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// All residuals within `tol` and the ranks of `A` and `A^+` agree, so
    /// `N(A^+) = R(A)^perp` and `R(A^+) = N(A)^perp` hold at that rank.
    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.rank == self.pinv_rank
    }
}

fn rel(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Evaluates the four Moore-Penrose identities together with the kernel and
/// range relations, using projectors built from a fresh SVD of `a`.
pub fn moore_penrose_residuals(
    a: &ComplexMatrix,
    a_pinv: &ComplexMatrix,
    rtol: Option<f64>,
) -> Result<MoorePenroseResiduals> {
    let (m, n) = a.shape();
    if a_pinv.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "pseudo-inverse of a {m}x{n} matrix must be {n}x{m}, got {:?}",
            a_pinv.shape()
        )));
    }
    let rtol = resolve_rtol(a, rtol)?;
    let ag = a * a_pinv;
    let ga = a_pinv * a;
    let norm_a = spectral_norm(a)?;
    let norm_g = spectral_norm(a_pinv)?;
    let aga = rel(spectral_norm(&(&(&ag * a) - a))?, norm_a);
    let gag = rel(spectral_norm(&(&(&ga * a_pinv) - a_pinv))?, norm_g);
    let ag_hermitian = rel(spectral_norm(&(&ag.adjoint() - &ag))?, spectral_norm(&ag)?);
    let ga_hermitian = rel(spectral_norm(&(&ga.adjoint() - &ga))?, spectral_norm(&ga)?);

    let full = full_svd(a)?;
    let rank = full.1.iter().filter(|&&s| s > rtol * full.1.first().copied().unwrap_or(0.0)).count();
    // Columns rank.. of U span R(A)^perp, columns rank.. of V span N(A).
    let u_perp = full.0.slice(s![.., rank..]).to_owned();
    let v_null = full.2.slice(s![.., rank..]).to_owned();
    let kernel_of_pinv = if u_perp.ncols() == 0 {
        0.0
    } else {
        rel(spectral_norm(&ComplexMatrix(a_pinv.0.dot(&u_perp)))?, norm_g)
    };
    let range_of_pinv = if v_null.ncols() == 0 {
        0.0
    } else {
        let vh = v_null.t().mapv(|z| z.conj());
        rel(spectral_norm(&ComplexMatrix(vh.dot(&a_pinv.0)))?, norm_g)
    };
    let pinv_rank = svd(a_pinv)?.numerical_rank(rtol);
    Ok(MoorePenroseResiduals {
        aga,
        gag,
        ag_hermitian,
        ga_hermitian,
        kernel_of_pinv,
        range_of_pinv,
        rank,
        pinv_rank,
    })
}

/// Full SVD: square `U` (m x m), singular values, square `V` (n x n).
fn full_svd(a: &ComplexMatrix) -> Result<(Array2<C64>, Vec<f64>, Array2<C64>)> {
    ensure_finite(a)?;
    let (u, s, vt) = a.0.svddc(JobSvd::All).map_err(backend)?;
    let u = u.ok_or_else(|| Error::Backend("svd returned no left vectors".into()))?;
    let vt = vt.ok_or_else(|| Error::Backend("svd returned no right vectors".into()))?;
    Ok((u, s.to_vec(), vt.t().mapv(|z| z.conj())))
}

/// Spectral decomposition `A = V diag(values) V^*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Nondecreasing.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(values)) V^*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut vf = self.vectors.0.clone();
        for (j, &l) in self.values.iter().enumerate() {
            let fl = f(l);
            vf.column_mut(j).mapv_inplace(|z| z * fl);
        }
        ComplexMatrix(vf.dot(&self.vectors.0.t().mapv(|z| z.conj())))
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Inputs with `||A - A^*||_F > TOL_HERM * ||A||_F` are rejected; within the
/// gate the Hermitian part `(A + A^*)/2` is decomposed.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    ensure_finite(a)?;
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigen-decomposition needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(HermitianEigen { values: Vec::new(), vectors: ComplexMatrix::zeros(0, 0) });
    }
    let adj = a.adjoint();
    let asym = (a - &adj).frobenius_norm();
    if asym > TOL_HERM * a.frobenius_norm() {
        return Err(Error::Input(format!(
            "matrix is not Hermitian: ||A - A*||_F = {asym:e}"
        )));
    }
    let herm = (a + &adj).scale_real(0.5);
    // Column-major copy: LAPACK would otherwise see the transpose, i.e. the
    // complex conjugate, and return conjugated eigenvectors.
    let mut fortran = Array2::zeros((n, n).f());
    fortran.assign(&herm.0);
    let (values, vectors) = fortran.eigh(UPLO::Lower).map_err(backend)?;
    Ok(HermitianEigen { values: values.to_vec(), vectors: ComplexMatrix(vectors) })
}
