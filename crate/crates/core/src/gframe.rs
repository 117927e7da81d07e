//! Operator-valued frames on `H = C^n`.
//!
//! A [`GFrame`] is a family `(T_k)_{k in X}` of `n x n` operators. Its analysis
//! operator `C_T f = (T_k f)_k` maps into `l^2(X; H)`, the synthesis operator
//! `D_T (g_k) = sum_k T_k^* g_k` is its adjoint, `S_T = D_T C_T` is the frame
//! operator and `G_T = C_T D_T = [T_k T_l^*]` the Gram matrix.

use std::sync::Arc;

use crate::blockmat::block::{check_index_sets, inner, vector_norm};
use crate::blockmat::{
    hermitian_eig, spectral_norm, BlockMatrix, BlockVector, CVector, ComplexMatrix, HermitianEigen,
    IndexSet, C64,
};
use crate::error::{Error, Result};

/// Relative threshold on `||S_T||` below which the lower frame bound counts as zero.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GFrame {
    index_set: Arc<IndexSet>,
    n: usize,
    operators: Vec<ComplexMatrix>,
}

impl GFrame {
    pub fn new(index_set: Arc<IndexSet>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.len() != index_set.len() {
            return Err(Error::Dimension(format!(
                "{} operators for {} index points",
                operators.len(),
                index_set.len()
            )));
        }
        let n = operators[0].rows();
        for (k, t) in operators.iter().enumerate() {
            if t.shape() != (n, n) {
                return Err(Error::Dimension(format!(
                    "operator {k} has shape {:?}, expected {n}x{n}",
                    t.shape()
                )));
            }
            if !t.is_finite() {
                return Err(Error::Input(format!("operator {k} has non-finite entries")));
            }
        }
        Ok(Self { index_set, n, operators })
    }

    /// `T_k = e_k (x) e_k` on `X = {0, ..., n-1}`: a Parseval g-frame whose
    /// operators are the coordinate projections.
    pub fn orthonormal_basis(n: usize) -> Result<Self> {
        let ops = (0..n)
            .map(|k| {
                let mut e = ComplexMatrix::zeros(n, n);
                e.set(k, k, C64::new(1.0, 0.0));
                e
            })
            .collect();
        Self::new(Arc::new(IndexSet::range(n)?), ops)
    }

    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.index_set
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Dimension `n` of the ambient space.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn operator(&self, k: usize) -> &ComplexMatrix {
        &self.operators[k]
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `(c T_k)_k`.
    pub fn scale(&self, c: C64) -> Self {
        Self {
            index_set: self.index_set.clone(),
            n: self.n,
            operators: self.operators.iter().map(|t| t.scale(c)).collect(),
        }
    }

    /// `(T_k M)_k` for an operator `M` on `H`.
    pub fn compose_right(&self, m: &ComplexMatrix) -> Result<Self> {
        if m.shape() != (self.n, self.n) {
            return Err(Error::Dimension(format!("cannot compose with a {:?} matrix", m.shape())));
        }
        Ok(Self {
            index_set: self.index_set.clone(),
            n: self.n,
            operators: self.operators.iter().map(|t| t * m).collect(),
        })
    }

    fn check_vector(&self, f: &CVector) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::Dimension(format!(
                "vector of length {} for a frame on C^{}",
                f.len(),
                self.n
            )));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        check_index_sets(&self.index_set, &other.index_set)?;
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "frames act on C^{} and C^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// `C_T f = (T_k f)_{k in X}`.
    pub fn analysis(&self, f: &CVector) -> Result<BlockVector> {
        self.check_vector(f)?;
        let comps = self.operators.iter().map(|t| t.as_array().dot(f)).collect();
        BlockVector::new(self.index_set.clone(), comps)
    }

    /// `D_T g = sum_k T_k^* g_k`, summed in index order.
    pub fn synthesis(&self, g: &BlockVector) -> Result<CVector> {
        check_index_sets(&self.index_set, g.index_set())?;
        if g.component_dim() != self.n {
            return Err(Error::Dimension(format!(
                "components of dimension {} for a frame on C^{}",
                g.component_dim(),
                self.n
            )));
        }
        let mut acc = CVector::zeros(self.n);
        for (t, gk) in self.operators.iter().zip(g.components()) {
            acc = acc + t.adjoint().as_array().dot(gk);
        }
        Ok(acc)
    }

    /// The analysis operator as the `|X| n x n` column of blocks `T_k`.
    pub fn analysis_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::vstack(&self.operators).expect("operators share a shape")
    }

    /// `S_T = sum_k T_k^* T_k`, summed in index order.
    pub fn frame_operator(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(self.n, self.n);
        for t in &self.operators {
            s = &s + &(&t.adjoint() * t);
        }
        s
    }

    /// Eigen-decomposition of `S_T`, reusable for its inverse powers.
    pub fn frame_operator_spectrum(&self) -> Result<FrameSpectrum> {
        let eig = hermitian_eig(&self.frame_operator())?;
        Ok(FrameSpectrum { eig })
    }

    /// `G_T = [T_k T_l^*]_{k,l}`.
    pub fn gram(&self) -> BlockMatrix {
        mixed_gram(self, self).expect("a frame is compatible with itself")
    }

    pub fn frame_bounds(&self) -> Result<FrameBounds> {
        Ok(self.frame_operator_spectrum()?.bounds())
    }

    /// `(T_k S_T^{-1})_k`.
    pub fn canonical_dual(&self) -> Result<GFrame> {
        let spectrum = self.frame_operator_spectrum()?;
        self.canonical_dual_with(&spectrum)
    }

    /// Canonical dual from a precomputed spectrum of `S_T`.
    pub fn canonical_dual_with(&self, spectrum: &FrameSpectrum) -> Result<GFrame> {
        let inv = spectrum.inverse_power(1)?;
        self.compose_right(&inv)
    }

    /// `||G_T||`, the spectral norm of the flattened Gram matrix. Equals the
    /// optimal upper frame bound on a finite index set.
    pub fn bessel_bound_from_gram(&self) -> Result<f64> {
        spectral_norm(&self.gram().flatten())
    }
}

/// Spectrum of a frame operator `S_T`.
#[derive(Clone, Debug)]
pub struct FrameSpectrum {
    eig: HermitianEigen,
}

impl FrameSpectrum {
    pub fn eigen(&self) -> &HermitianEigen {
        &self.eig
    }

    pub fn bounds(&self) -> FrameBounds {
        let upper = self.eig.max().max(0.0);
        let lower = self.eig.min().max(0.0);
        FrameBounds { lower, upper, is_frame: upper > 0.0 && lower > FRAME_TOL * upper }
    }

    /// `S_T^{-p}`; fails when `S_T` is not invertible at the frame tolerance.
    pub fn inverse_power(&self, p: i32) -> Result<ComplexMatrix> {
        let b = self.bounds();
        if !b.is_frame {
            return Err(Error::Precondition(format!(
                "not a frame: lower bound {:e} with upper bound {:e}",
                b.lower, b.upper
            )));
        }
        Ok(self.eig.map(|l| l.powi(-p)))
    }
}

/// Optimal frame bounds `A = min spec(S_T)`, `B = max spec(S_T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// `A > FRAME_TOL * B`.
    pub is_frame: bool,
}

/// `G_{U,T} = [U_k T_l^*]_{k,l}`.
pub fn mixed_gram(u: &GFrame, t: &GFrame) -> Result<BlockMatrix> {
    u.check_compatible(t)?;
    let t_adj: Vec<ComplexMatrix> = t.operators.iter().map(ComplexMatrix::adjoint).collect();
    BlockMatrix::from_fn(u.index_set.clone(), u.n, |k, l| &u.operators[k] * &t_adj[l])
}

/// Outcome of [`is_dual_pair`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualPairCheck {
    pub holds: bool,
    /// `max(||D_T C_{Td} - I||, ||D_{Td} C_T - I||)`.
    pub residual: f64,
}

/// Checks `sum_k T_k^* Td_k = I = sum_k Td_k^* T_k` up to `tol`.
pub fn is_dual_pair(t: &GFrame, td: &GFrame, tol: f64) -> Result<DualPairCheck> {
    t.check_compatible(td)?;
    let id = ComplexMatrix::identity(t.n);
    let mut forward = ComplexMatrix::zeros(t.n, t.n);
    let mut backward = ComplexMatrix::zeros(t.n, t.n);
    for (a, b) in t.operators.iter().zip(&td.operators) {
        forward = &forward + &(&a.adjoint() * b);
        backward = &backward + &(&b.adjoint() * a);
    }
    let residual = spectral_norm(&(&forward - &id))?.max(spectral_norm(&(&backward - &id))?);
    Ok(DualPairCheck { holds: residual <= tol, residual })
}

/// `sum_k T_k^* Td_k f`.
pub fn reconstruct(t: &GFrame, td: &GFrame, f: &CVector) -> Result<CVector> {
    let order: Vec<usize> = (0..t.len()).collect();
    Ok(partial_sums(t, td, f, &order)?.pop().unwrap_or_else(|| CVector::zeros(t.n)))
}

/// Partial sums `sum_{j <= i} T_{k_j}^* Td_{k_j} f` along `enumeration`.
pub fn partial_sums(t: &GFrame, td: &GFrame, f: &CVector, enumeration: &[usize]) -> Result<Vec<CVector>> {
    t.check_compatible(td)?;
    t.check_vector(f)?;
    let mut seen = vec![false; t.len()];
    for &k in enumeration {
        if k >= t.len() || std::mem::replace(&mut seen[k], true) {
            return Err(Error::Input(format!("enumeration entry {k} is out of range or repeated")));
        }
    }
    let mut acc = CVector::zeros(t.n);
    let mut sums = Vec::with_capacity(enumeration.len());
    for &k in enumeration {
        let coeff = td.operators[k].as_array().dot(f);
        acc = acc + t.operators[k].adjoint().as_array().dot(&coeff);
        sums.push(acc.clone());
    }
    Ok(sums)
}

/// Residuals of the Gram identities `G_{T~} = G_T^+` and `G_{T,T~} = G_T G_T^+`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramFactorizationReport {
    /// `||G_{T~} - G_T^+|| / ||G_T^+||`
    pub residual_dual_gram: f64,
    /// `||G_{T,T~} - G_T G_T^+|| / ||G_T G_T^+||`
    pub residual_mixed: f64,
    /// `max(||P^2 - P||, ||P - P^*||)` for `P = G_T G_T^+`.
    pub projection_defect: f64,
}

/// Computes the Gram matrix of the canonical dual directly and compares it to
/// the block pseudo-inverse of `G_T`.
pub fn verify_gram_factorization(t: &GFrame) -> Result<GramFactorizationReport> {
    let dual = t.canonical_dual()?;
    let dual_gram = dual.gram().flatten();
    let gram = t.gram();
    let (gram_pinv, gram_pinv_norm) = gram.pinv_with_norm(None)?;
    let gram_pinv = gram_pinv.flatten();
    let gram = gram.flatten();
    let mixed = mixed_gram(t, &dual)?.flatten();
    let p = &gram * &gram_pinv;
    let residual_dual_gram = spectral_norm(&(&dual_gram - &gram_pinv))? / gram_pinv_norm;
    let residual_mixed = spectral_norm(&(&mixed - &p))? / spectral_norm(&p)?;
    let idempotency = spectral_norm(&(&(&p * &p) - &p))?;
    let symmetry = spectral_norm(&(&p - &p.adjoint()))?;
    Ok(GramFactorizationReport {
        residual_dual_gram,
        residual_mixed,
        projection_defect: idempotency.max(symmetry),
    })
}

/// `<a, b>` on `C^n`, linear in the first argument.
pub fn inner_product(a: &CVector, b: &CVector) -> C64 {
    inner(a, b)
}

pub fn norm(v: &CVector) -> f64 {
    vector_norm(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmat::Metric;
    use crate::sampling::{complex_vector, gaussian_gframe, stream_rng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn max_diff(a: &CVector, b: &CVector) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn random_frame(seed: u64, n: usize, len: usize) -> GFrame {
        gaussian_gframe(&mut stream_rng(seed, 0), Arc::new(IndexSet::range(len).unwrap()), n).unwrap()
    }

    /// Duplicated ONB: every coordinate projection listed twice.
    fn duplicated_onb(n: usize) -> GFrame {
        let onb = GFrame::orthonormal_basis(n).unwrap();
        let mut ops = onb.operators().to_vec();
        ops.extend_from_slice(onb.operators());
        GFrame::new(Arc::new(IndexSet::range(2 * n).unwrap()), ops).unwrap()
    }

    #[test]
    fn analysis_examples() {
        let single = GFrame::new(Arc::new(IndexSet::range(1).unwrap()), vec![ComplexMatrix::identity(3)]).unwrap();
        let f: CVector = vec![c(1.0), C64::new(0.0, 2.0), c(-1.0)].into();
        assert_eq!(single.analysis(&f).unwrap().component(0), &f);
        let onb = GFrame::orthonormal_basis(3).unwrap();
        let coeffs = onb.analysis(&f).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                let expected = if i == k { f[k] } else { c(0.0) };
                assert_eq!(coeffs.component(k)[i], expected);
            }
        }
        assert!(onb.analysis(&CVector::zeros(2)).is_err());
    }

    #[test]
    fn analysis_matches_column_matrix() {
        let t = random_frame(3, 4, 5);
        let f = complex_vector(&mut stream_rng(3, 1), 4);
        let direct = t.analysis(&f).unwrap().flatten();
        let oracle = t.analysis_matrix().apply(&f).unwrap();
        assert!(max_diff(&direct, &oracle) < 1e-13);
    }

    #[test]
    fn synthesis_examples_and_adjointness() {
        let single = GFrame::new(Arc::new(IndexSet::range(1).unwrap()), vec![ComplexMatrix::identity(2)]).unwrap();
        let g = BlockVector::new(single.index_set().clone(), vec![vec![c(2.0), c(3.0)].into()]).unwrap();
        assert_eq!(single.synthesis(&g).unwrap(), *g.component(0));

        let onb = GFrame::orthonormal_basis(4).unwrap();
        let f = complex_vector(&mut stream_rng(9, 0), 4);
        assert!(max_diff(&onb.synthesis(&onb.analysis(&f).unwrap()).unwrap(), &f) < 1e-15);

        let t = random_frame(5, 3, 6);
        let f = complex_vector(&mut stream_rng(5, 1), 3);
        let g = t.analysis(&complex_vector(&mut stream_rng(5, 2), 3)).unwrap();
        let lhs = inner(&t.synthesis(&g).unwrap(), &f);
        let rhs = g.inner(&t.analysis(&f).unwrap()).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn frame_operator_examples() {
        let onb = GFrame::orthonormal_basis(3).unwrap();
        assert_eq!(onb.frame_operator(), ComplexMatrix::identity(3));
        let t1 = GFrame::new(
            Arc::new(IndexSet::range(1).unwrap()),
            vec![ComplexMatrix::identity(2).scale(C64::new(1.0, 2.0))],
        )
        .unwrap();
        assert!((&t1.frame_operator() - &ComplexMatrix::identity(2).scale_real(5.0)).max_abs() < 1e-14);

        let t = random_frame(7, 4, 5);
        let s = t.frame_operator();
        for j in 0..4 {
            let mut e = CVector::zeros(4);
            e[j] = c(1.0);
            let col = t.synthesis(&t.analysis(&e).unwrap()).unwrap();
            assert!(max_diff(&col, &s.column(j)) < 1e-12);
        }
        let analysis = t.analysis_matrix();
        let via_matrices = &analysis.adjoint() * &analysis;
        assert!((&via_matrices - &s).max_abs() <= 1e-12 * s.max_abs());
        let gram = t.gram().flatten();
        let gram_oracle = &analysis * &analysis.adjoint();
        assert!((&gram - &gram_oracle).max_abs() <= 1e-12 * gram.max_abs());
    }

    #[test]
    fn gram_examples() {
        let onb = GFrame::orthonormal_basis(3).unwrap();
        let g = onb.gram();
        for k in 0..3 {
            assert_eq!(g.block(k, k), onb.operator(k));
            for l in (0..3).filter(|&l| l != k) {
                assert_eq!(g.block(k, l).max_abs(), 0.0);
            }
        }
        // Projections onto orthogonal subspaces: span{e0, e1} and span{e2, e3}.
        let p1 = ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0, 0.0]);
        let p2 = ComplexMatrix::from_real_diag(&[0.0, 0.0, 1.0, 1.0]);
        let t = GFrame::new(Arc::new(IndexSet::range(2).unwrap()), vec![p1, p2]).unwrap();
        let g = t.gram();
        assert_eq!(spectral_norm(g.block(0, 1)).unwrap(), 0.0);
        assert_eq!(spectral_norm(g.block(1, 0)).unwrap(), 0.0);
        let random = random_frame(2, 3, 4).gram();
        assert!((&random.adjoint().flatten() - &random.flatten()).max_abs() < 1e-14);
    }

    #[test]
    fn mixed_gram_rejects_mismatch() {
        let a = random_frame(1, 3, 4);
        let b = random_frame(1, 2, 4);
        assert!(mixed_gram(&a, &b).is_err());
        let other = GFrame::new(
            Arc::new(IndexSet::new((0..4).map(|k| vec![k as f64 + 0.5]).collect(), Metric::Euclidean).unwrap()),
            a.operators().to_vec(),
        )
        .unwrap();
        assert!(mixed_gram(&a, &other).is_err());
    }

    #[test]
    fn frame_bounds_examples() {
        let b = GFrame::orthonormal_basis(4).unwrap().frame_bounds().unwrap();
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14 && b.is_frame);
        let b = duplicated_onb(3).frame_bounds().unwrap();
        assert!((b.lower - 2.0).abs() < 1e-14 && (b.upper - 2.0).abs() < 1e-14);
        let zero = GFrame::new(Arc::new(IndexSet::range(2).unwrap()), vec![ComplexMatrix::zeros(2, 2); 2]).unwrap();
        assert!(!zero.frame_bounds().unwrap().is_frame);
        assert!(matches!(zero.canonical_dual(), Err(Error::Precondition(_))));
    }

    #[test]
    fn frame_bounds_bracket_rayleigh_quotients() {
        let t = random_frame(11, 5, 3);
        let b = t.frame_bounds().unwrap();
        for i in 0..200 {
            let f = complex_vector(&mut stream_rng(11, i + 1), 5);
            let energy: f64 = t.analysis(&f).unwrap().component_norms().iter().map(|x| x * x).sum();
            let q = energy / norm(&f).powi(2);
            assert!(q >= b.lower * (1.0 - 1e-12) && q <= b.upper * (1.0 + 1e-12));
        }
        // ||T_k|| <= sqrt(B)
        for op in t.operators() {
            assert!(spectral_norm(op).unwrap() <= b.upper.sqrt() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn canonical_dual_examples() {
        let onb = GFrame::orthonormal_basis(3).unwrap();
        let dual = onb.canonical_dual().unwrap();
        for k in 0..3 {
            assert!((dual.operator(k) - onb.operator(k)).max_abs() < 1e-14);
        }
        let tight = duplicated_onb(3);
        let dual = tight.canonical_dual().unwrap();
        for k in 0..6 {
            assert!((dual.operator(k) - &tight.operator(k).scale_real(0.5)).max_abs() < 1e-14);
        }
        let t = random_frame(13, 4, 6);
        let dual = t.canonical_dual().unwrap();
        assert!(is_dual_pair(&t, &dual, 1e-9).unwrap().holds);
        let b = t.frame_bounds().unwrap();
        let bd = dual.frame_bounds().unwrap();
        assert!((bd.lower - 1.0 / b.upper).abs() <= 1e-8 * bd.lower);
        assert!((bd.upper - 1.0 / b.lower).abs() <= 1e-8 * bd.upper);
    }

    #[test]
    fn dual_pair_examples() {
        let onb = GFrame::orthonormal_basis(4).unwrap();
        let check = is_dual_pair(&onb, &onb, 1e-14).unwrap();
        assert!(check.holds && check.residual <= 1e-14);
        let t = random_frame(17, 3, 5);
        assert!(!is_dual_pair(&t, &t, 1e-6).unwrap().holds);
    }

    #[test]
    fn reconstruction_examples() {
        let onb = GFrame::orthonormal_basis(3).unwrap();
        let f = complex_vector(&mut stream_rng(19, 0), 3);
        assert_eq!(reconstruct(&onb, &onb, &f).unwrap(), f);
        let tight = duplicated_onb(3);
        let half = tight.scale(c(0.5));
        assert!(max_diff(&reconstruct(&tight, &half, &f).unwrap(), &f) < 1e-15);

        let t = random_frame(19, 4, 7);
        let spectrum = t.frame_operator_spectrum().unwrap();
        let dual = t.canonical_dual_with(&spectrum).unwrap();
        let s_inv = spectrum.inverse_power(1).unwrap();
        for i in 0..100 {
            let f = complex_vector(&mut stream_rng(19, i + 1), 4);
            let r1 = reconstruct(&t, &dual, &f).unwrap();
            let r2 = reconstruct(&dual, &t, &f).unwrap();
            assert!(max_diff(&r1, &f) <= 1e-10 * norm(&f));
            assert!(max_diff(&r2, &f) <= 1e-10 * norm(&f));
            // sum T_k^* T_k S^{-1} f against sum S^{-1} T_k^* T_k f
            let s_first = s_inv.apply(&reconstruct(&t, &t, &f).unwrap()).unwrap();
            assert!(max_diff(&s_first, &r1) <= 1e-10 * norm(&f));
        }
    }

    #[test]
    fn partial_sums_reach_the_full_sum() {
        let t = random_frame(23, 3, 5);
        let dual = t.canonical_dual().unwrap();
        let f = complex_vector(&mut stream_rng(23, 1), 3);
        let order = t.index_set().centroid_order();
        let sums = partial_sums(&t, &dual, &f, &order).unwrap();
        assert_eq!(sums.len(), 5);
        assert!(max_diff(sums.last().unwrap(), &f) < 1e-10);
        assert!(partial_sums(&t, &dual, &f, &[0, 0]).is_err());
        assert!(partial_sums(&t, &dual, &f, &[7]).is_err());
    }

    #[test]
    fn gram_factorization_examples() {
        let r = verify_gram_factorization(&GFrame::orthonormal_basis(4).unwrap()).unwrap();
        assert!(r.residual_dual_gram <= 1e-12 && r.residual_mixed <= 1e-12 && r.projection_defect <= 1e-12);
        // Tight frame with bound 2: G_{T~} = G_T / 4.
        let tight = duplicated_onb(3);
        let dual_gram = tight.canonical_dual().unwrap().gram();
        let scaled = tight.gram().scale(c(0.25));
        assert!((&dual_gram.flatten() - &scaled.flatten()).max_abs() < 1e-14);
        let r = verify_gram_factorization(&tight).unwrap();
        assert!(r.residual_dual_gram <= 1e-12);
        let r = verify_gram_factorization(&random_frame(29, 8, 12)).unwrap();
        assert!(r.residual_dual_gram <= 1e-8 && r.residual_mixed <= 1e-8 && r.projection_defect <= 1e-9);
        assert!(verify_gram_factorization(
            &GFrame::new(Arc::new(IndexSet::range(1).unwrap()), vec![ComplexMatrix::zeros(2, 2)]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn bessel_bound_examples() {
        assert!((GFrame::orthonormal_basis(3).unwrap().bessel_bound_from_gram().unwrap() - 1.0).abs() < 1e-14);
        let zero = GFrame::new(Arc::new(IndexSet::range(2).unwrap()), vec![ComplexMatrix::zeros(2, 2); 2]).unwrap();
        assert_eq!(zero.bessel_bound_from_gram().unwrap(), 0.0);
        let t = random_frame(31, 4, 3);
        let bound = t.bessel_bound_from_gram().unwrap();
        for i in 0..200 {
            let f = complex_vector(&mut stream_rng(31, i + 1), 4);
            let energy: f64 = t.analysis(&f).unwrap().component_norms().iter().map(|x| x * x).sum();
            assert!(energy / norm(&f).powi(2) <= bound * (1.0 + 1e-12));
        }
    }
}
