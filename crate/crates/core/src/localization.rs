//! Off-diagonal decay of block matrices.
//!
//! The three solid algebra norms (Jaffard, weighted Schur and
//! Baskakov-Gohberg-Sjöstrand) only look at the block norms `||A_{k,l}||`, so
//! every norm here is evaluated on a [`NormMatrix`] produced by [`scalarize`].
//! [`weighted_opnorm`] bounds the operator norm of a block matrix acting on
//! `l^p_w(X; H)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::Array2;

use crate::blockmat::block::vector_norm;
use crate::blockmat::{pinv, spectral_norm, svd, BlockMatrix, CVector, ComplexMatrix, IndexSet};
use crate::coorbit::lp_norm;
use crate::error::{Error, Result};
use crate::gframe::{mixed_gram, GFrame};
use crate::sampling::{complex_vector, stream_rng};
use crate::weight::Weight;

/// Block norms below `FIT_FLOOR` times the largest block norm are ignored by decay fits.
pub const FIT_FLOOR: f64 = 1e-13;

/// Width of the distance bins of the decay envelope.
pub const FIT_BIN_WIDTH: f64 = 0.5;

/// Random test vectors used for lower bounds when `p` is not in `{1, 2, inf}`.
pub const OPNORM_SAMPLES: u64 = 500;

const OPNORM_SEED: u64 = 0x6f70_6e6f_726d;

/// Scalar matrix `[||A_{k,l}||]_{k,l}` on the index set of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormMatrix {
    index_set: Arc<IndexSet>,
    values: Array2<f64>,
}

impl NormMatrix {
    pub fn new(index_set: Arc<IndexSet>, values: Array2<f64>) -> Result<Self> {
        let len = index_set.len();
        if values.dim() != (len, len) {
            return Err(Error::Dimension(format!(
                "norm matrix of shape {:?} for {len} index points",
                values.dim()
            )));
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Input("block norms must be finite and nonnegative".into()));
        }
        Ok(Self { index_set, values })
    }

    pub fn index_set(&self) -> &Arc<IndexSet> {
        &self.index_set
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.values[[k, l]]
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// The scalar matrix as a block matrix with `1 x 1` blocks.
    pub fn to_scalar_blocks(&self) -> BlockMatrix {
        self.to_identity_blocks(1)
    }

    /// `[a_{kl} I_n]_{k,l}`.
    pub fn to_identity_blocks(&self, n: usize) -> BlockMatrix {
        BlockMatrix::from_fn(self.index_set.clone(), n, |k, l| {
            ComplexMatrix::identity(n).scale_real(self.values[[k, l]])
        })
        .expect("identity blocks have the requested shape")
    }
}

/// `M_{k,l} = ||A_{k,l}||` (spectral norms).
pub fn scalarize(a: &BlockMatrix) -> Result<NormMatrix> {
    let len = a.len();
    let mut values = Array2::zeros((len, len));
    for k in 0..len {
        for l in 0..len {
            values[[k, l]] = spectral_norm(a.block(k, l))?;
        }
    }
    NormMatrix::new(a.index_set().clone(), values)
}

/// `1/omega`.
pub fn dual_weight(omega: &Weight) -> Weight {
    omega.reciprocal()
}

/// One of the solid spectral algebras of block matrices.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraSpec {
    /// `sup_{k,l} ||A_{k,l}|| (1 + |k - l|)^s`.
    Jaffard { s: f64 },
    /// Weighted Schur norm, maximum of the weighted row and column sums.
    Schur { weight: Weight },
    /// `sum_l sup_k ||A_{k,k-l}|| nu(l)` on an integer lattice.
    Bgs { weight: Weight },
}

impl AlgebraSpec {
    pub fn norm(&self, a: &BlockMatrix) -> Result<f64> {
        self.norm_of_norms(&scalarize(a)?)
    }

    pub fn norm_of_norms(&self, m: &NormMatrix) -> Result<f64> {
        match self {
            AlgebraSpec::Jaffard { s } => Ok(jaffard_norm_of_norms(m, *s)?.0),
            AlgebraSpec::Schur { weight } => schur_norm_of_norms(m, weight),
            AlgebraSpec::Bgs { weight } => bgs_norm_of_norms(m, weight),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AlgebraSpec::Jaffard { s } => format!("jaffard(s={s})"),
            AlgebraSpec::Schur { weight } => format!("schur({})", weight.label()),
            AlgebraSpec::Bgs { weight } => format!("bgs({})", weight.label()),
        }
    }

    /// Structural warnings for this algebra on the given index set.
    pub fn warnings(&self, index_set: &IndexSet) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            AlgebraSpec::Jaffard { s } if *s <= index_set.dim() as f64 => out.push(format!(
                "Jaffard exponent s={s} does not exceed the index dimension {}; the class is not an algebra",
                index_set.dim()
            )),
            AlgebraSpec::Bgs { .. } if !index_set.is_integer_lattice() => {
                out.push("BGS norm needs an integer lattice index set".to_string())
            }
            _ => {}
        }
        if let AlgebraSpec::Schur { weight } | AlgebraSpec::Bgs { weight } = self {
            if weight.satisfies_grs().is_none() {
                out.push("GRS condition of a tabulated weight is not verified".to_string());
            }
        }
        out
    }

    /// Weight factor attached to the pair `(k, l)`: `(1 + d)^s` or `nu(k - l)`.
    fn pair_factor(&self, index_set: &IndexSet, k: usize, l: usize) -> Result<f64> {
        match self {
            AlgebraSpec::Jaffard { s } => Ok((1.0 + index_set.distance(k, l)).powf(*s)),
            AlgebraSpec::Schur { weight } | AlgebraSpec::Bgs { weight } => weight.eval(&index_set.difference(k, l)),
        }
    }
}

fn check_exponent(s: f64) -> Result<()> {
    if s >= 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("decay exponent must be finite and >= 0, got {s}")))
    }
}

/// Jaffard norm with the index-set metric (Euclidean or toroidal).
pub fn jaffard_norm(a: &BlockMatrix, s: f64) -> Result<f64> {
    Ok(jaffard_norm_of_norms(&scalarize(a)?, s)?.0)
}

/// Jaffard norm and the first pair (row-major) attaining the supremum.
pub fn jaffard_norm_of_norms(m: &NormMatrix, s: f64) -> Result<(f64, (usize, usize))> {
    check_exponent(s)?;
    let x = &m.index_set;
    let mut best = (0.0, (0, 0));
    for k in 0..m.len() {
        for l in 0..m.len() {
            let v = m.get(k, l) * (1.0 + x.distance(k, l)).powf(s);
            if v > best.0 {
                best = (v, (k, l));
            }
        }
    }
    Ok(best)
}

pub fn schur_norm(a: &BlockMatrix, weight: &Weight) -> Result<f64> {
    schur_norm_of_norms(&scalarize(a)?, weight)
}

/// `max(sup_k sum_l m_kl nu(k-l), sup_l sum_k m_kl nu(k-l))`.
pub fn schur_norm_of_norms(m: &NormMatrix, weight: &Weight) -> Result<f64> {
    let x = &m.index_set;
    let len = m.len();
    let mut rows = vec![0.0; len];
    let mut cols = vec![0.0; len];
    for k in 0..len {
        for l in 0..len {
            let v = m.get(k, l) * weight.eval(&x.difference(k, l))?;
            rows[k] += v;
            cols[l] += v;
        }
    }
    Ok(rows.into_iter().chain(cols).fold(0.0, f64::max))
}

pub fn bgs_norm(a: &BlockMatrix, weight: &Weight) -> Result<f64> {
    bgs_norm_of_norms(&scalarize(a)?, weight)
}

/// `sum_l sup_k m_{k,k-l} nu(l)` over the offsets `l` realized by pairs of the
/// index set (reduced modulo the period on a torus).
pub fn bgs_norm_of_norms(m: &NormMatrix, weight: &Weight) -> Result<f64> {
    let x = &m.index_set;
    if !x.is_integer_lattice() {
        return Err(Error::Input("BGS norm needs an integer lattice index set".into()));
    }
    let mut diagonals: BTreeMap<Vec<i64>, (f64, Vec<f64>)> = BTreeMap::new();
    for k in 0..m.len() {
        for j in 0..m.len() {
            let offset = x.difference(k, j);
            let key: Vec<i64> = offset.iter().map(|v| v.round() as i64).collect();
            let entry = diagonals.entry(key).or_insert((0.0, offset));
            entry.0 = entry.0.max(m.get(k, j));
        }
    }
    let mut total = 0.0;
    for (sup, offset) in diagonals.values() {
        total += sup * weight.eval(offset)?;
    }
    Ok(total)
}

/// Finite-truncation constant `K` with `|AB|_J <= K |A|_J |B|_J` for the
/// Jaffard norm of exponent `s` on `index_set`:
/// `K = max_{k,l} (1 + d_kl)^s sum_m (1 + d_km)^{-s} (1 + d_ml)^{-s}`.
pub fn jaffard_product_constant(index_set: &IndexSet, s: f64) -> Result<f64> {
    check_exponent(s)?;
    let len = index_set.len();
    let w = |k: usize, l: usize| (1.0 + index_set.distance(k, l)).powf(s);
    let mut k_max = 0.0f64;
    for k in 0..len {
        for l in 0..len {
            let sum: f64 = (0..len).map(|m| 1.0 / (w(k, m) * w(m, l))).sum();
            k_max = k_max.max(w(k, l) * sum);
        }
    }
    Ok(k_max)
}

/// Outcome of a solidity trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolidityCheck {
    /// `||B_{k,l}|| <= ||A_{k,l}||` for every pair.
    pub premise: bool,
    pub norm_a: f64,
    pub norm_b: f64,
}

impl SolidityCheck {
    /// Premise holds and `norm(B) <= norm(A)`.
    pub fn holds(&self) -> bool {
        self.premise && self.norm_b <= self.norm_a
    }
}

pub fn solidity_check(a: &BlockMatrix, b: &BlockMatrix, spec: &AlgebraSpec) -> Result<SolidityCheck> {
    crate::blockmat::block::check_index_sets(a.index_set(), b.index_set())?;
    let ma = scalarize(a)?;
    let mb = scalarize(b)?;
    let premise = ma.values.iter().zip(mb.values.iter()).all(|(x, y)| y <= x);
    Ok(SolidityCheck { premise, norm_a: spec.norm_of_norms(&ma)?, norm_b: spec.norm_of_norms(&mb)? })
}

/// Least-squares fit `||A_{k,l}|| ~ C (1 + d(k,l))^{-s}` on the per-distance envelope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub c: f64,
    pub s_fit: f64,
    /// Root-mean-square residual of the fit in log space.
    pub rms_log_residual: f64,
    /// Pairs with block norm above the floor.
    pub pairs_used: usize,
    /// Distance bins entering the regression.
    pub envelope_points: usize,
}

pub fn fit_polynomial_decay(a: &BlockMatrix) -> Result<DecayFit> {
    fit_decay_of_norms(&scalarize(a)?)
}

/// Fits `log m = log C - s log(1 + d)` to the maximum block norm of each
/// distance bin of width [`FIT_BIN_WIDTH`]. The bin representative is the
/// distance of the pair attaining the maximum.
pub fn fit_decay_of_norms(m: &NormMatrix) -> Result<DecayFit> {
    let x = &m.index_set;
    let floor = FIT_FLOOR * m.values.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut bins: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    let mut pairs_used = 0;
    for k in 0..m.len() {
        for l in 0..m.len() {
            let v = m.get(k, l);
            if v <= floor || v == 0.0 {
                continue;
            }
            pairs_used += 1;
            let d = x.distance(k, l);
            let bin = (d / FIT_BIN_WIDTH).floor() as u64;
            let e = bins.entry(bin).or_insert((v, d));
            if v > e.0 || (v == e.0 && d < e.1) {
                *e = (v, d);
            }
        }
    }
    if bins.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "decay fit needs at least 3 distance bins above the floor, found {}",
            bins.len()
        )));
    }
    let pts: Vec<(f64, f64)> = bins.values().map(|&(v, d)| ((1.0 + d).ln(), v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(DecayFit {
        c: intercept.exp(),
        s_fit: -slope,
        rms_log_residual: rms,
        pairs_used,
        envelope_points: pts.len(),
    })
}

/// Two-sided estimate of an operator norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
}

impl NormBracket {
    pub fn is_exact(&self, rtol: f64) -> bool {
        self.upper - self.lower <= rtol * self.upper.max(f64::MIN_POSITIVE)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::Input(format!("exponent p must be positive, got {p}")))
    }
}

/// Weight values `omega(x_k)` at the index points (reduced coordinates on a torus).
pub(crate) fn point_weights(index_set: &IndexSet, omega: &Weight) -> Result<Vec<f64>> {
    (0..index_set.len()).map(|k| omega.eval(&index_set.reduced_point(k))).collect()
}

/// Operator norm of `A` on `l^p_omega(X; H)`.
///
/// Works with the conjugated matrix `B_{k,l} = omega(k) A_{k,l} / omega(l)`,
/// which has the same norm on the unweighted space.
///
/// * `p = 2`: exact, the spectral norm of `flatten(B)`.
/// * `p = 1, inf`: upper bound from the block-norm column/row sums of `B`,
///   lower bound from a monotone ascent of `u -> sum_l ||B_{kl}^* u||` (rows) or
///   `u -> sum_k ||B_{kl} u||` (columns) over unit vectors. The two agree for
///   scalar, scalar-times-identity and block-diagonal matrices.
/// * other `p >= 1`: upper bound by interpolating the `p = 1` and `p = inf`
///   upper bounds, lower bound from [`OPNORM_SAMPLES`] random vectors.
/// * `p < 1`: upper bound from `p`-subadditivity, sampled lower bound.
pub fn weighted_opnorm(a: &BlockMatrix, p: f64, omega: &Weight) -> Result<NormBracket> {
    check_p(p)?;
    let x = a.index_set();
    let w = point_weights(x, omega)?;
    let b = a.map_blocks(|k, l, blk| blk.scale_real(w[k] / w[l]))?;
    let nb = scalarize(&b)?;
    let len = b.len();
    let row_sums = |q: f64| -> f64 {
        (0..len).map(|k| (0..len).map(|l| nb.get(k, l).powf(q)).sum::<f64>()).fold(0.0, f64::max)
    };
    let col_sums = |q: f64| -> f64 {
        (0..len).map(|l| (0..len).map(|k| nb.get(k, l).powf(q)).sum::<f64>()).fold(0.0, f64::max)
    };
    let bracket = if p == 2.0 {
        let v = spectral_norm(&b.flatten())?;
        NormBracket { lower: v, upper: v }
    } else if p.is_infinite() {
        let lower = (0..len)
            .map(|k| {
                let mats: Vec<ComplexMatrix> = (0..len).map(|l| b.block(k, l).adjoint()).collect();
                sum_of_norms_ascent(&mats)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        NormBracket { lower, upper: row_sums(1.0) }
    } else if p == 1.0 {
        let lower = (0..len)
            .map(|l| {
                let mats: Vec<ComplexMatrix> = (0..len).map(|k| b.block(k, l).clone()).collect();
                sum_of_norms_ascent(&mats)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        NormBracket { lower, upper: col_sums(1.0) }
    } else {
        let upper = if p > 1.0 {
            col_sums(1.0).powf(1.0 / p) * row_sums(1.0).powf(1.0 - 1.0 / p)
        } else {
            col_sums(p).powf(1.0 / p)
        };
        let single_block = nb.values.iter().fold(0.0f64, |m, &v| m.max(v));
        NormBracket { lower: single_block.max(sampled_lower_bound(&b, p)?), upper }
    };
    Ok(NormBracket { lower: bracket.lower.min(bracket.upper), upper: bracket.upper })
}

/// Maximizes the convex function `u -> sum_j ||M_j u||` over unit vectors by
/// the fixed-point ascent `u <- normalize(sum_j M_j^* M_j u / ||M_j u||)`,
/// started from the top right singular vectors of the three largest `M_j`.
fn sum_of_norms_ascent(mats: &[ComplexMatrix]) -> Result<f64> {
    let objective = |u: &CVector| mats.iter().map(|m| vector_norm(&m.as_array().dot(u))).sum::<f64>();
    let mut ranked: Vec<(f64, usize)> =
        mats.iter().enumerate().map(|(j, m)| Ok((spectral_norm(m)?, j))).collect::<Result<_>>()?;
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best = 0.0f64;
    for &(top, j) in ranked.iter().take(3) {
        if top == 0.0 {
            break;
        }
        let mut u = svd(&mats[j])?.right_vectors.column(0);
        let mut value = objective(&u);
        for _ in 0..200 {
            let n = u.len();
            let mut g = CVector::zeros(n);
            for m in mats {
                let mu = m.as_array().dot(&u);
                let norm = vector_norm(&mu);
                if norm > 0.0 {
                    g = g + m.adjoint().as_array().dot(&mu).mapv(|z| z / norm);
                }
            }
            let gn = vector_norm(&g);
            if gn == 0.0 {
                break;
            }
            let next = g.mapv(|z| z / gn);
            let next_value = objective(&next);
            if next_value <= value * (1.0 + 1e-15) {
                value = value.max(next_value);
                break;
            }
            u = next;
            value = next_value;
        }
        best = best.max(value);
    }
    Ok(best)
}

fn sampled_lower_bound(b: &BlockMatrix, p: f64) -> Result<f64> {
    let x = b.index_set().clone();
    let n = b.block_dim();
    let mut best = 0.0f64;
    for i in 0..OPNORM_SAMPLES {
        let mut rng = stream_rng(OPNORM_SEED, i);
        let v = crate::blockmat::BlockVector::unflatten(&complex_vector(&mut rng, x.len() * n), x.clone(), n)?;
        let den = lp_norm(&v.component_norms(), p);
        if den > 0.0 {
            best = best.max(lp_norm(&b.apply(&v)?.component_norms(), p) / den);
        }
    }
    Ok(best)
}

/// Theoretical and empirical status of a weight for an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility {
    /// Exponent `p0` such that the weight is `(A, p0)`-admissible, when known.
    pub p0: Option<f64>,
    pub status: AdmissibilityStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdmissibilityStatus {
    /// Covered by a known sufficient condition (Jaffard with `s > d + r` and a polynomial weight).
    Admissible,
    /// Every sampled matrix acted boundedly for `p in {1, 2, inf}`; nothing more is claimed.
    ConsistentWithAdmissibility,
    /// Some sampled matrix produced an unbounded (non-finite) norm bound.
    Inconsistent,
}

/// Classifies `omega` for `spec` on `index_set`, using `samples` as the
/// finite evidence. Polynomial weights `nu_r` are `nu_r`-moderate, so Jaffard
/// algebras with `s > d + r` admit them with `p0 = d / (s - r)`.
pub fn admissibility(
    spec: &AlgebraSpec,
    omega: &Weight,
    index_set: &IndexSet,
    samples: &[BlockMatrix],
) -> Result<Admissibility> {
    for a in samples {
        for p in [1.0, 2.0, f64::INFINITY] {
            if !weighted_opnorm(a, p, omega)?.upper.is_finite() {
                return Ok(Admissibility { p0: None, status: AdmissibilityStatus::Inconsistent });
            }
        }
    }
    let d = index_set.dim() as f64;
    let admissible = match (spec, omega) {
        (AlgebraSpec::Jaffard { s }, Weight::Polynomial { exponent: r }) if *r >= 0.0 && *s > d + r => {
            Some(d / (s - r))
        }
        _ => None,
    };
    Ok(match admissible {
        Some(p0) => Admissibility { p0: Some(p0), status: AdmissibilityStatus::Admissible },
        None => Admissibility {
            p0: matches!(spec, AlgebraSpec::Schur { .. } | AlgebraSpec::Bgs { .. }).then_some(1.0),
            status: AdmissibilityStatus::ConsistentWithAdmissibility,
        },
    })
}

/// Algebra norm of `flatten(A)^{-1}`, reported for invertible `A`. The value is
/// finite by construction on a finite index set and is never compared with a
/// universal bound.
pub fn inverse_norm(a: &BlockMatrix, spec: &AlgebraSpec) -> Result<f64> {
    let flat = a.flatten();
    let f = svd(&flat)?;
    if f.numerical_rank(crate::blockmat::default_rtol(flat.rows(), flat.cols())) < flat.rows() {
        return Err(Error::Precondition("block matrix is not invertible".into()));
    }
    let inv = BlockMatrix::unflatten(&pinv(&flat, None)?, a.index_set().clone(), a.block_dim())?;
    spec.norm(&inv)
}

/// Localization diagnostics of a Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationReport {
    pub algebra: AlgebraSpec,
    pub norm_value: f64,
    /// `None` when fewer than three distance bins carry nonzero blocks.
    pub decay_fit: Option<DecayFit>,
    /// Pair maximizing the weighted block norm.
    pub sup_attained_at: (usize, usize),
    pub warnings: Vec<String>,
}

/// Localization report for `G_T` (or the mixed Gram matrix `G_{U,T}` when `u` is given).
pub fn localization_report(t: &GFrame, u: Option<&GFrame>, spec: &AlgebraSpec) -> Result<LocalizationReport> {
    let gram = match u {
        Some(u) => mixed_gram(u, t)?,
        None => t.gram(),
    };
    report_from_norms(&scalarize(&gram)?, spec)
}

/// Localization report from precomputed block norms.
pub fn report_from_norms(m: &NormMatrix, spec: &AlgebraSpec) -> Result<LocalizationReport> {
    let x = m.index_set();
    let mut sup = (0.0, (0, 0));
    for k in 0..m.len() {
        for l in 0..m.len() {
            let v = m.get(k, l) * spec.pair_factor(x, k, l)?;
            if v > sup.0 {
                sup = (v, (k, l));
            }
        }
    }
    let decay_fit = match fit_decay_of_norms(m) {
        Ok(f) => Some(f),
        Err(Error::InsufficientData(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(LocalizationReport {
        algebra: spec.clone(),
        norm_value: spec.norm_of_norms(m)?,
        decay_fit,
        sup_attained_at: sup.1,
        warnings: spec.warnings(x),
    })
}
