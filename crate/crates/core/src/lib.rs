//! Operator-valued frames (g-frames) on finite-dimensional truncations.
//!
//! The Hilbert space `H` is modelled as `C^n` and every operator in `B(H)` as a
//! dense [`ComplexMatrix`]. A g-frame is a finite family `(T_k)_{k in X}` of such
//! operators indexed by a geometric [`IndexSet`]. On top of that the crate
//! provides
//!
//! * [`blockmat`]: dense complex linear algebra, SVD-based pseudo-inverses and
//!   the calculus of `B(H)`-valued block matrices,
//! * [`gframe`]: analysis, synthesis, frame and Gram operators, frame bounds,
//!   canonical duals and reconstruction,
//! * [`localization`]: Jaffard, Schur and Baskakov-Gohberg-Sjöstrand norms,
//!   decay fits and weighted operator norms on `l^p_w(X; H)`,
//! * [`coorbit`]: weighted Bochner sequence norms and co-orbit norms,
//! * [`gabor`]: the periodic time-frequency model on `C^L` and Gabor g-systems.

extern crate blas_src;

pub mod blockmat;
pub mod coorbit;
mod error;
pub mod gabor;
pub mod gframe;
pub mod localization;
pub mod sampling;
pub mod weight;

pub use blockmat::{
    BlockMatrix, BlockVector, ComplexMatrix, CVector, HermitianEigen, IndexSet, Metric,
    SvdFactorization, C64,
};
pub use error::{Error, Result};
pub use gframe::{FrameBounds, GFrame};
pub use weight::Weight;
