//! Weighted Bochner sequence norms and the co-orbit norms they induce on `H`.
//!
//! On a finite index set every `H^p_w(Td, T)` is all of `C^n`, so this module
//! only computes norms: `||f||_{H^p_w} = ||C_{Td} f||_{l^p_w(X; H)}`.

use crate::blockmat::{BlockVector, CVector, C64};
use crate::error::{Error, Result};
use crate::gframe::{inner_product, is_dual_pair, mixed_gram, norm, partial_sums, GFrame};
use crate::localization::{point_weights, weighted_opnorm};
use crate::sampling::{complex_vector, stream_rng};
use crate::weight::Weight;

/// Residual allowed by the dual-pair precondition.
pub const DUAL_PAIR_TOL: f64 = 1e-8;

/// `l^p(X)` norm of nonnegative values; `p = inf` is the sup and `p < 1` the
/// `p`-quasi-norm `(sum x^p)^{1/p}`.
pub fn lp_norm(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        values.iter().fold(0.0, |m, &v| m.max(v))
    } else if p == 1.0 {
        values.iter().sum()
    } else {
        let scale = values.iter().fold(0.0f64, |m, &v| m.max(v));
        if scale == 0.0 {
            return 0.0;
        }
        scale * values.iter().map(|v| (v / scale).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// The space `l^p_w(X; H)`. `p = 0` is accepted as an alias of `p = inf`:
/// both carry the weighted sup norm on a finite index set.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqSpaceSpec {
    p: f64,
    weight: Weight,
}

impl SeqSpaceSpec {
    pub fn new(p: f64, weight: Weight) -> Result<Self> {
        if p.is_nan() || p < 0.0 {
            return Err(Error::Input(format!("sequence space exponent must be in (0, inf], got {p}")));
        }
        let p = if p == 0.0 { f64::INFINITY } else { p };
        Ok(Self { p, weight })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// `l^q_{1/w}` with `1/p + 1/q = 1`, defined for `p >= 1`.
    pub fn conjugate(&self) -> Option<Self> {
        if self.p < 1.0 {
            return None;
        }
        let q = if self.p == 1.0 {
            f64::INFINITY
        } else if self.p.is_infinite() {
            1.0
        } else {
            self.p / (self.p - 1.0)
        };
        Some(Self { p: q, weight: self.weight.reciprocal() })
    }

    pub fn p_label(&self) -> String {
        if self.p.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", self.p)
        }
    }
}

/// `|| (||v_k|| w(x_k))_k ||_{l^p}`.
pub fn bochner_norm(v: &BlockVector, spec: &SeqSpaceSpec) -> Result<f64> {
    let w = point_weights(v.index_set(), &spec.weight)?;
    let weighted: Vec<f64> = v.component_norms().iter().zip(&w).map(|(a, b)| a * b).collect();
    Ok(lp_norm(&weighted, spec.p))
}

/// `||C_{Td} f||_{l^p_w(X; H)}`.
pub fn coorbit_norm(f: &CVector, td: &GFrame, spec: &SeqSpaceSpec) -> Result<f64> {
    bochner_norm(&td.analysis(f)?, spec)
}

/// Whether `coorbit_norm(f) <= budget`. Every vector belongs to `V^p_w` on a
/// finite index set; the budget emulates membership by thresholding.
pub fn membership_vpw(f: &CVector, td: &GFrame, spec: &SeqSpaceSpec, budget: f64) -> Result<bool> {
    Ok(coorbit_norm(f, td, spec)? <= budget)
}

fn require_dual_pair(t: &GFrame, td: &GFrame) -> Result<()> {
    let check = is_dual_pair(t, td, DUAL_PAIR_TOL)?;
    if check.holds {
        Ok(())
    } else {
        Err(Error::Precondition(format!("not a dual pair (residual {:.3e})", check.residual)))
    }
}

/// Co-orbit errors of the partial reconstruction sums along an enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct CoorbitProfile {
    pub enumeration: Vec<usize>,
    pub partial_norm_errors: Vec<f64>,
    pub final_error: f64,
}

pub fn reconstruction_profile(
    t: &GFrame,
    td: &GFrame,
    f: &CVector,
    spec: &SeqSpaceSpec,
    enumeration: &[usize],
) -> Result<CoorbitProfile> {
    require_dual_pair(t, td)?;
    let sums = partial_sums(t, td, f, enumeration)?;
    let errors = sums
        .iter()
        .map(|s| coorbit_norm(&(f - s), td, spec))
        .collect::<Result<Vec<f64>>>()?;
    let final_error = match errors.last() {
        Some(&e) => e,
        None => coorbit_norm(f, td, spec)?,
    };
    Ok(CoorbitProfile { enumeration: enumeration.to_vec(), partial_norm_errors: errors, final_error })
}

/// Sampled comparison of the co-orbit norms of two dual pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceCheck {
    /// `max_f ||C_{Ud} f|| / ||C_{Td} f||`.
    pub max_ratio_forward: f64,
    /// `max_f ||C_{Td} f|| / ||C_{Ud} f||`.
    pub max_ratio_backward: f64,
    /// Upper bound on `||G_{Ud,T}||` on `l^p_w`.
    pub bound_forward: f64,
    /// Upper bound on `||G_{Td,U}||` on `l^p_w`.
    pub bound_backward: f64,
}

impl EquivalenceCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_ratio_forward <= self.bound_forward + tol && self.max_ratio_backward <= self.bound_backward + tol
    }
}

/// Samples `samples` random vectors (stream `i` of `seed` for sample `i`) and
/// compares the co-orbit norms of the dual pairs `(Td, T)` and `(Ud, U)`
/// against the mixed Gram bounds `C_{Ud} = G_{Ud,T} C_{Td}` and
/// `C_{Td} = G_{Td,U} C_{Ud}`.
pub fn norm_equivalence_check(
    td: &GFrame,
    t: &GFrame,
    ud: &GFrame,
    u: &GFrame,
    spec: &SeqSpaceSpec,
    samples: u64,
    seed: u64,
) -> Result<EquivalenceCheck> {
    require_dual_pair(t, td)?;
    require_dual_pair(u, ud)?;
    let bound_forward = weighted_opnorm(&mixed_gram(ud, t)?, spec.p, &spec.weight)?.upper;
    let bound_backward = weighted_opnorm(&mixed_gram(td, u)?, spec.p, &spec.weight)?.upper;
    let mut forward = 0.0f64;
    let mut backward = 0.0f64;
    for i in 0..samples {
        let f = complex_vector(&mut stream_rng(seed, i), t.dim());
        let a = coorbit_norm(&f, td, spec)?;
        let b = coorbit_norm(&f, ud, spec)?;
        if a > 0.0 {
            forward = forward.max(b / a);
        }
        if b > 0.0 {
            backward = backward.max(a / b);
        }
    }
    Ok(EquivalenceCheck { max_ratio_forward: forward, max_ratio_backward: backward, bound_forward, bound_backward })
}

/// `beta(f, g) = sum_k <Td_k f, T_k g>`.
pub fn duality_pairing(f: &CVector, g: &CVector, t: &GFrame, td: &GFrame) -> Result<C64> {
    require_dual_pair(t, td)?;
    let a = td.analysis(f)?;
    let b = t.analysis(g)?;
    a.inner(&b)
}

/// Both sides of the Hölder estimate for the duality pairing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderCheck {
    pub pairing: C64,
    /// `<f, g>`.
    pub inner: C64,
    /// `||f||_{H^p_w(Td)} ||g||_{H^q_{1/w}(T)}`.
    pub bound: f64,
}

impl HolderCheck {
    pub fn identity_error(&self) -> f64 {
        (self.pairing - self.inner).norm()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.pairing.norm() <= self.bound * (1.0 + tol) + tol
    }
}

pub fn holder_check(f: &CVector, g: &CVector, t: &GFrame, td: &GFrame, spec: &SeqSpaceSpec) -> Result<HolderCheck> {
    let dual = spec
        .conjugate()
        .ok_or_else(|| Error::Input(format!("no Hölder check for p = {} < 1", spec.p)))?;
    let pairing = duality_pairing(f, g, t, td)?;
    let bound = coorbit_norm(f, td, spec)? * coorbit_norm(g, t, &dual)?;
    Ok(HolderCheck { pairing, inner: inner_product(f, g), bound })
}

/// `||D_T g||_{H^p_w(Td)}` against `||G_{Td,T}||_{l^p_w} ||g||_{l^p_w}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthesisBound {
    pub value: f64,
    pub bound: f64,
}

pub fn synthesis_bound(t: &GFrame, td: &GFrame, g: &BlockVector, spec: &SeqSpaceSpec) -> Result<SynthesisBound> {
    let value = coorbit_norm(&t.synthesis(g)?, td, spec)?;
    let op = weighted_opnorm(&mixed_gram(td, t)?, spec.p, &spec.weight)?.upper;
    Ok(SynthesisBound { value, bound: op * bochner_norm(g, spec)? })
}

/// Relative reconstruction error `||f - D_T C_{Td} f|| / ||f||` in `H^p_w(Td)`
/// and in `H`.
pub fn relative_reconstruction_errors(
    t: &GFrame,
    td: &GFrame,
    f: &CVector,
    spec: &SeqSpaceSpec,
) -> Result<(f64, f64)> {
    let r = crate::gframe::reconstruct(t, td, f)?;
    let diff = f - &r;
    Ok((coorbit_norm(&diff, td, spec)? / coorbit_norm(f, td, spec)?, norm(&diff) / norm(f)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::blockmat::{ComplexMatrix, IndexSet};
    use crate::sampling::{gaussian_gframe, localized_gframe};

    fn e(n: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[k] = C64::new(1.0, 0.0);
        v
    }

    fn random_pair(seed: u64, len: usize, n: usize) -> (GFrame, GFrame) {
        let t = gaussian_gframe(&mut stream_rng(seed, 0), Arc::new(IndexSet::range(len).unwrap()), n).unwrap();
        let d = t.canonical_dual().unwrap();
        (t, d)
    }

    #[test]
    fn lp_norm_examples() {
        assert_eq!(lp_norm(&[3.0, 4.0], 2.0), 5.0);
        assert_eq!(lp_norm(&[3.0, 4.0], 1.0), 7.0);
        assert_eq!(lp_norm(&[3.0, 4.0], f64::INFINITY), 4.0);
        assert!((lp_norm(&[1.0, 1.0], 0.5) - 4.0).abs() < 1e-14);
        assert_eq!(lp_norm(&[0.0, 0.0], 0.5), 0.0);
    }

    #[test]
    fn bochner_norm_examples() {
        let x = Arc::new(IndexSet::range(4).unwrap());
        let mut comps = vec![CVector::zeros(3); 4];
        comps[2] = vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0), C64::new(0.0, 0.0)].into();
        let v = BlockVector::new(x.clone(), comps).unwrap();
        for p in [0.5, 1.0, 2.0, 7.0, f64::INFINITY] {
            let spec = SeqSpaceSpec::new(p, Weight::unit()).unwrap();
            assert!((bochner_norm(&v, &spec).unwrap() - 5.0).abs() < 1e-14);
            let scaled = bochner_norm(&v.scale(C64::new(0.0, -2.0)), &spec).unwrap();
            assert!((scaled - 10.0).abs() < 1e-13);
        }
        let nu = SeqSpaceSpec::new(1.0, Weight::polynomial(2.0).unwrap()).unwrap();
        assert!((bochner_norm(&v, &nu).unwrap() - 45.0).abs() < 1e-12);
        let r = BlockVector::unflatten(&complex_vector(&mut stream_rng(1, 0), 12), x, 3).unwrap();
        let spec = SeqSpaceSpec::new(2.0, Weight::unit()).unwrap();
        assert!((bochner_norm(&r, &spec).unwrap() - norm(&r.flatten())).abs() < 1e-12);
    }

    #[test]
    fn zero_exponent_aliases_sup() {
        let s = SeqSpaceSpec::new(0.0, Weight::unit()).unwrap();
        assert!(s.p().is_infinite());
        assert!(SeqSpaceSpec::new(-1.0, Weight::unit()).is_err());
        assert_eq!(SeqSpaceSpec::new(1.0, Weight::unit()).unwrap().conjugate().unwrap().p(), f64::INFINITY);
        assert_eq!(SeqSpaceSpec::new(2.0, Weight::unit()).unwrap().conjugate().unwrap().p(), 2.0);
        assert!(SeqSpaceSpec::new(0.5, Weight::unit()).unwrap().conjugate().is_none());
    }

    #[test]
    fn p_subadditivity() {
        let x = Arc::new(IndexSet::range(5).unwrap());
        let spec = SeqSpaceSpec::new(0.6, Weight::polynomial(1.0).unwrap()).unwrap();
        for i in 0..20 {
            let u = BlockVector::unflatten(&complex_vector(&mut stream_rng(2, 2 * i), 10), x.clone(), 2).unwrap();
            let v = BlockVector::unflatten(&complex_vector(&mut stream_rng(2, 2 * i + 1), 10), x.clone(), 2).unwrap();
            let lhs = bochner_norm(&u.add(&v).unwrap(), &spec).unwrap().powf(0.6);
            let rhs = bochner_norm(&u, &spec).unwrap().powf(0.6) + bochner_norm(&v, &spec).unwrap().powf(0.6);
            assert!(lhs <= rhs * (1.0 + 1e-14));
        }
    }

    #[test]
    fn coorbit_norm_examples() {
        let onb = GFrame::orthonormal_basis(5).unwrap();
        let spec2 = SeqSpaceSpec::new(2.0, Weight::unit()).unwrap();
        assert_eq!(coorbit_norm(&CVector::zeros(5), &onb, &spec2).unwrap(), 0.0);
        let f = complex_vector(&mut stream_rng(3, 0), 5);
        assert!((coorbit_norm(&f, &onb, &spec2).unwrap() - norm(&f)).abs() < 1e-14);
        let (_, d) = random_pair(4, 6, 3);
        let f = complex_vector(&mut stream_rng(4, 1), 3);
        let spec1 = SeqSpaceSpec::new(1.0, Weight::unit()).unwrap();
        let oracle: f64 = d.operators().iter().map(|op| norm(&op.as_array().dot(&f))).sum();
        assert!((coorbit_norm(&f, &d, &spec1).unwrap() - oracle).abs() < 1e-12 * oracle);
    }

    #[test]
    fn membership_examples() {
        let (_, d) = random_pair(5, 6, 3);
        let spec = SeqSpaceSpec::new(1.0, Weight::polynomial(2.0).unwrap()).unwrap();
        assert!(membership_vpw(&CVector::zeros(3), &d, &spec, 0.0).unwrap());
        let f = complex_vector(&mut stream_rng(5, 1), 3);
        assert!(membership_vpw(&f, &d, &spec, f64::INFINITY).unwrap());
        let nf = coorbit_norm(&f, &d, &spec).unwrap();
        let budget = 10.0;
        let critical = budget / nf;
        assert!(membership_vpw(&f.mapv(|z| z * critical * 0.999), &d, &spec, budget).unwrap());
        assert!(!membership_vpw(&f.mapv(|z| z * critical * 1.001), &d, &spec, budget).unwrap());
    }

    #[test]
    fn reconstruction_profile_examples() {
        let onb = GFrame::orthonormal_basis(4).unwrap();
        let spec = SeqSpaceSpec::new(2.0, Weight::unit()).unwrap();
        let mut f = e(4, 1);
        f[3] = C64::new(0.0, 2.0);
        let prof = reconstruction_profile(&onb, &onb, &f, &spec, &[0, 1, 2, 3]).unwrap();
        assert_eq!(prof.partial_norm_errors[0], norm(&f));
        assert!(prof.partial_norm_errors[2] > 0.0);
        assert_eq!(prof.partial_norm_errors[3], 0.0);
        assert_eq!(prof.final_error, 0.0);

        let t = localized_gframe(&mut stream_rng(6, 0), Arc::new(IndexSet::range(8).unwrap()), 4, 2.0).unwrap();
        let d = t.canonical_dual().unwrap();
        let f = complex_vector(&mut stream_rng(6, 1), 4);
        let spec = SeqSpaceSpec::new(1.0, Weight::polynomial(2.0).unwrap()).unwrap();
        let a = reconstruction_profile(&t, &d, &f, &spec, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let b = reconstruction_profile(&t, &d, &f, &spec, &[7, 3, 5, 1, 0, 2, 6, 4]).unwrap();
        let nf = coorbit_norm(&f, &d, &spec).unwrap();
        assert!(a.final_error <= 1e-8 * nf && b.final_error <= 1e-8 * nf);
        assert!((a.final_error - b.final_error).abs() <= 1e-12 * nf);
        assert_eq!(a.final_error, *a.partial_norm_errors.last().unwrap());

        let bad = t.scale(C64::new(2.0, 0.0));
        assert!(matches!(
            reconstruction_profile(&t, &bad, &f, &spec, &[0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn equivalence_with_itself_is_exact() {
        let (t, d) = random_pair(7, 6, 3);
        let spec = SeqSpaceSpec::new(2.0, Weight::unit()).unwrap();
        let c = norm_equivalence_check(&d, &t, &d, &t, &spec, 20, 1).unwrap();
        assert!((c.max_ratio_forward - 1.0).abs() < 1e-14 && (c.max_ratio_backward - 1.0).abs() < 1e-14);
        assert!(c.bound_forward >= 1.0 - 1e-12 && c.holds(1e-9));
    }

    #[test]
    fn equivalence_under_coordinate_permutation() {
        let (t, d) = random_pair(8, 6, 4);
        let perm = ComplexMatrix::from_fn(4, 4, |(i, j)| C64::new(if j == (i + 1) % 4 { 1.0 } else { 0.0 }, 0.0));
        // U_k = T_k P is again a frame with dual Td_k P.
        let u = t.compose_right(&perm).unwrap();
        let ud = d.compose_right(&perm).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let spec = SeqSpaceSpec::new(p, Weight::unit()).unwrap();
            let c = norm_equivalence_check(&d, &t, &ud, &u, &spec, 50, 2).unwrap();
            assert!(c.holds(1e-9), "p={p}: {c:?}");
        }
    }

    #[test]
    fn onb_against_duplicated_onb() {
        let n = 3;
        let x = Arc::new(IndexSet::range(2 * n).unwrap());
        let proj = |k: usize| ComplexMatrix::rank_one(&e(n, k), &e(n, k));
        let onb = GFrame::new(
            x.clone(),
            (0..2 * n).map(|k| if k < n { proj(k) } else { ComplexMatrix::zeros(n, n) }).collect(),
        )
        .unwrap();
        let dup = GFrame::new(x, (0..2 * n).map(|k| proj(k % n)).collect()).unwrap();
        let dup_dual = dup.scale(C64::new(0.5, 0.0));
        let spec = SeqSpaceSpec::new(2.0, Weight::unit()).unwrap();
        let c = norm_equivalence_check(&onb, &onb, &dup, &dup_dual, &spec, 30, 3).unwrap();
        assert!((c.max_ratio_forward - 2f64.sqrt()).abs() < 1e-12);
        assert!((c.max_ratio_backward - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(c.holds(1e-9));
    }

    #[test]
    fn pairing_examples() {
        let onb = GFrame::orthonormal_basis(3).unwrap();
        let one = duality_pairing(&e(3, 0), &e(3, 0), &onb, &onb).unwrap();
        assert!((one - C64::new(1.0, 0.0)).norm() < 1e-15);
        let (t, d) = random_pair(9, 7, 3);
        let f = complex_vector(&mut stream_rng(9, 1), 3);
        let g0 = complex_vector(&mut stream_rng(9, 2), 3);
        let g = &g0 - &f.mapv(|z| z * inner_product(&g0, &f) / inner_product(&f, &f));
        assert!(duality_pairing(&f, &g, &t, &d).unwrap().norm() < 1e-12 * norm(&f) * norm(&g));
        for p in [1.0, 2.0] {
            let spec = SeqSpaceSpec::new(p, Weight::polynomial(2.0).unwrap()).unwrap();
            let h = holder_check(&f, &g0, &t, &d, &spec).unwrap();
            assert!(h.identity_error() < 1e-10 && h.holds(1e-12));
        }
        assert!(holder_check(&f, &g, &t, &d, &SeqSpaceSpec::new(0.5, Weight::unit()).unwrap()).is_err());
    }

    #[test]
    fn synthesis_is_bounded_by_mixed_gram() {
        let (t, d) = random_pair(10, 6, 3);
        for p in [1.0, 2.0, f64::INFINITY] {
            let spec = SeqSpaceSpec::new(p, Weight::polynomial(2.0).unwrap()).unwrap();
            for i in 0..10 {
                let g = BlockVector::unflatten(&complex_vector(&mut stream_rng(10, i), 18), t.index_set().clone(), 3).unwrap();
                let s = synthesis_bound(&t, &d, &g, &spec).unwrap();
                assert!(s.value <= s.bound * (1.0 + 1e-12));
            }
        }
    }
}
