//! Dense complex linear algebra and `B(H)`-valued block matrices.
//!
//! [`ComplexMatrix`] stands in for an operator on `H = C^n`. [`BlockMatrix`]
//! stores one `n x n` block per ordered pair of points of an [`IndexSet`] and
//! realizes operators on `l^2(X; H)` through matrix multiplication; [`flatten`]
//! identifies `l^2(X; H)` with `C^{|X| n}`.
//!
//! [`flatten`]: BlockMatrix::flatten

pub(crate) mod block;
mod dense;
mod index;

pub use block::{BlockMatrix, BlockVector};
pub use dense::{
    default_rtol, hermitian_eig, moore_penrose_residuals, pinv, pinv_via_formula,
    singular_values, spectral_norm, svd, ComplexMatrix, CVector, HermitianEigen,
    MoorePenroseResiduals, SvdFactorization, C64, TOL_HERM, TOL_SVD,
};
pub use index::{IndexSet, Metric};
