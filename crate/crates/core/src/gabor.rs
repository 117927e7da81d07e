//! Periodic time-frequency analysis on `C^L` and Gabor g-systems.
//!
//! Time and frequency both live in `Z_L`. The translation `T_x`, modulation
//! `M_w` and time-frequency shift `pi(z) = M_w T_x` are unitary, and
//! `pi(z) pi(z') = e^{-2 pi i x w' / L} pi(z + z')`. A window operator
//! `T = sum_n phi_n (x) psi_n` is moved around the time-frequency torus by
//! `alpha_z(T) = pi(z) T pi(z)^*`.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use rustfft::FftPlanner;

use crate::blockmat::block::{inner, vector_norm};
use crate::blockmat::{hermitian_eig, CVector, ComplexMatrix, IndexSet, Metric, C64};
use crate::error::{Error, Result};
use crate::gframe::{FrameBounds, GFrame};
use crate::localization::{fit_decay_of_norms, jaffard_norm_of_norms, DecayFit, NormMatrix};

/// Default slack between the fitted decay exponents of the dual and primal Gram matrices.
pub const DECAY_SLACK: f64 = 0.5;

/// Point `z = (x, w)` of `Z_L x Z_L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TfPoint {
    pub x: usize,
    pub w: usize,
}

impl TfPoint {
    /// Reduces `(x, w)` modulo `l`.
    pub fn new(x: i64, w: i64, l: usize) -> Self {
        let m = l as i64;
        Self { x: x.rem_euclid(m) as usize, w: w.rem_euclid(m) as usize }
    }

    pub fn add(self, other: Self, l: usize) -> Self {
        Self::new((self.x + other.x) as i64, (self.w + other.w) as i64, l)
    }

    pub fn sub(self, other: Self, l: usize) -> Self {
        Self::new(self.x as i64 - other.x as i64, self.w as i64 - other.w as i64, l)
    }

    pub fn neg(self, l: usize) -> Self {
        Self::new(-(self.x as i64), -(self.w as i64), l)
    }
}

fn unit_phase(k: i64, l: usize) -> C64 {
    let r = k.rem_euclid(l as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / l as f64)
}

/// `(T_x f)(t) = f(t - x mod L)`.
pub fn translate(f: &CVector, x: i64) -> CVector {
    let l = f.len() as i64;
    if l == 0 {
        return f.clone();
    }
    CVector::from_shape_fn(f.len(), |t| f[(t as i64 - x).rem_euclid(l) as usize])
}

/// `(M_w f)(t) = e^{2 pi i w t / L} f(t)`.
pub fn modulate(f: &CVector, w: i64) -> CVector {
    let l = f.len();
    CVector::from_shape_fn(l, |t| f[t] * unit_phase(w * t as i64, l))
}

/// `pi(z) f = M_w T_x f`.
pub fn tf_shift(f: &CVector, z: TfPoint) -> CVector {
    modulate(&translate(f, z.x as i64), z.w as i64)
}

/// `pi(z)` as an `L x L` matrix.
pub fn tf_shift_matrix(z: TfPoint, l: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(l, l, |(t, j)| {
        if t == (j + z.x) % l {
            unit_phase((z.w * t) as i64, l)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `pi(z) A pi(z)^*`, entrywise: `e^{2 pi i w (a - b) / L} A[a - x, b - x]`.
pub fn conjugate_by_tf_shift(a: &ComplexMatrix, z: TfPoint) -> ComplexMatrix {
    let l = a.rows();
    ComplexMatrix::from_fn(l, l, |(r, c)| {
        let src = a.get((r + l - z.x) % l, (c + l - z.x) % l);
        src * unit_phase(z.w as i64 * (r as i64 - c as i64), l)
    })
}

/// `V_g f(x, w) = <f, pi(x, w) g>`, returned as an `L x L` array indexed `[x, w]`.
pub fn stft(f: &CVector, g: &CVector) -> Result<Array2<C64>> {
    let l = f.len();
    if g.len() != l {
        return Err(Error::Dimension(format!("signal of length {l} with window of length {}", g.len())));
    }
    let mut out = Array2::zeros((l, l));
    if l == 0 {
        return Ok(out);
    }
    let fft = FftPlanner::new().plan_fft_forward(l);
    let mut buf = vec![C64::new(0.0, 0.0); l];
    for x in 0..l {
        for (t, b) in buf.iter_mut().enumerate() {
            *b = f[t] * g[(t + l - x) % l].conj();
        }
        fft.process(&mut buf);
        out.row_mut(x).assign(&ndarray::ArrayView1::from(&buf));
    }
    Ok(out)
}

/// Periodized, sampled Gaussian `g(t) = sum_{j=-1}^{1} e^{-pi (t + jL)^2 / L}` with
/// `t` centred in `(-L/2, L/2]`, normalized to unit norm. The `1/L` in the
/// exponent samples the continuum Gaussian on the grid `t / sqrt(L)`, which
/// balances its time and frequency spread on `Z_L`.
pub fn discrete_gaussian(l: usize) -> Result<CVector> {
    if l < 4 {
        return Err(Error::Input(format!("Gaussian window needs L >= 4, got {l}")));
    }
    let lf = l as f64;
    let raw: Vec<f64> = (0..l)
        .map(|t| {
            let tc = if t as f64 > lf / 2.0 { t as f64 - lf } else { t as f64 };
            (-1..=1).map(|j| (-PI * (tc + j as f64 * lf).powi(2) / lf).exp()).sum()
        })
        .collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(raw.iter().map(|v| C64::new(v / norm, 0.0)).collect())
}

fn torus_norm(z: TfPoint, l: usize) -> f64 {
    let red = |v: usize| {
        let v = v as f64;
        if v > l as f64 / 2.0 {
            v - l as f64
        } else {
            v
        }
    };
    (red(z.x).powi(2) + red(z.w).powi(2)).sqrt()
}

/// Discrete proxy `sum_z |V_{g0} f(z)| (1 + |z|)^s` of the weighted `M^1` norm,
/// with the Gaussian window `g0` and toroidal `|z|`.
pub fn m1_norm_proxy(f: &CVector, s: f64) -> Result<f64> {
    let l = f.len();
    let v = stft(f, &discrete_gaussian(l)?)?;
    let mut total = 0.0;
    for ((x, w), val) in v.indexed_iter() {
        total += val.norm() * (1.0 + torus_norm(TfPoint { x, w }, l)).powf(s);
    }
    Ok(total)
}

/// `T = sum_n phi_n (x) psi_n`, i.e. `T f = sum_n <f, psi_n> phi_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowOperator {
    terms: Vec<(CVector, CVector)>,
}

impl WindowOperator {
    pub fn new(terms: Vec<(CVector, CVector)>) -> Result<Self> {
        let l = terms.first().map(|t| t.0.len()).ok_or_else(|| Error::Input("window needs at least one term".into()))?;
        if terms.iter().any(|(a, b)| a.len() != l || b.len() != l) {
            return Err(Error::Dimension("window vectors of unequal length".into()));
        }
        if terms.iter().any(|(a, b)| a.iter().chain(b.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::Input("window vectors must be finite".into()));
        }
        Ok(Self { terms })
    }

    pub fn rank_one(phi: CVector, psi: CVector) -> Result<Self> {
        Self::new(vec![(phi, psi)])
    }

    /// `g0 (x) g0` with the normalized discrete Gaussian.
    pub fn gaussian(l: usize) -> Result<Self> {
        let g = discrete_gaussian(l)?;
        Self::rank_one(g.clone(), g)
    }

    pub fn terms(&self) -> &[(CVector, CVector)] {
        &self.terms
    }

    pub fn signal_len(&self) -> usize {
        self.terms[0].0.len()
    }

    /// `sum_n ||phi_n|| ||psi_n||`.
    pub fn nuclear_bound(&self) -> f64 {
        self.terms.iter().map(|(a, b)| vector_norm(a) * vector_norm(b)).sum()
    }

    pub fn assemble(&self) -> ComplexMatrix {
        let l = self.signal_len();
        self.terms
            .iter()
            .fold(ComplexMatrix::zeros(l, l), |acc, (phi, psi)| &acc + &ComplexMatrix::rank_one(phi, psi))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { terms: self.terms.iter().map(|(a, b)| (a.mapv(|z| z * c), b.clone())).collect() }
    }
}

/// `alpha_z(T) = pi(z) T pi(z)^*`, applied termwise to `(pi(z) phi_n, pi(z) psi_n)`.
pub fn op_translate(t: &WindowOperator, z: TfPoint) -> WindowOperator {
    WindowOperator { terms: t.terms.iter().map(|(a, b)| (tf_shift(a, z), tf_shift(b, z))).collect() }
}

/// `(alpha_k(T))_{k in X}` for a window operator on `C^L`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaborGSystem {
    window: WindowOperator,
    points: Vec<TfPoint>,
}

impl GaborGSystem {
    pub fn new(window: WindowOperator, points: Vec<TfPoint>) -> Result<Self> {
        let l = window.signal_len();
        if points.is_empty() {
            return Err(Error::Input("Gabor system needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.x >= l || p.w >= l) {
            return Err(Error::Input(format!("point {p:?} outside Z_{l} x Z_{l}")));
        }
        let mut sorted = points.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("time-frequency points must be distinct".into()));
        }
        Ok(Self { window, points })
    }

    /// Points `(i a, j b)` ordered by time shift, then frequency shift.
    pub fn grid(window: WindowOperator, a: usize, b: usize) -> Result<Self> {
        let l = window.signal_len();
        if a == 0 || b == 0 || l % a != 0 || l % b != 0 {
            return Err(Error::Input(format!("grid steps ({a}, {b}) must divide L = {l}")));
        }
        let points = (0..l)
            .step_by(a)
            .flat_map(|x| (0..l).step_by(b).map(move |w| TfPoint { x, w }))
            .collect();
        Self::new(window, points)
    }

    pub fn window(&self) -> &WindowOperator {
        &self.window
    }

    pub fn points(&self) -> &[TfPoint] {
        &self.points
    }

    pub fn signal_len(&self) -> usize {
        self.window.signal_len()
    }

    pub fn with_window(&self, window: WindowOperator) -> Result<Self> {
        Self::new(window, self.points.clone())
    }

    /// The points as an index set on the torus of period `L`.
    pub fn index_set(&self) -> IndexSet {
        IndexSet::new(
            self.points.iter().map(|p| vec![p.x as f64, p.w as f64]).collect(),
            Metric::Toroidal { period: self.signal_len() as f64 },
        )
        .expect("validated Gabor points form an index set")
    }

    /// Largest number of points in a closed unit ball around a point.
    pub fn density(&self) -> usize {
        self.index_set().max_points_per_unit_ball()
    }
}

/// The g-frame `(alpha_k(T))_{k in X}` on the toroidal index set `X`.
pub fn build_gabor_gsystem(sys: &GaborGSystem) -> Result<GFrame> {
    let t = sys.window.assemble();
    let ops = sys.points.iter().map(|&z| conjugate_by_tf_shift(&t, z)).collect();
    GFrame::new(Arc::new(sys.index_set()), ops)
}

/// `||alpha_k(T) alpha_l(T)^*|| = ||phi||^2 |<pi(l) psi, pi(k) psi>|` for `T = phi (x) psi`.
pub fn rank_one_gram_block_closed_form(window: &WindowOperator, k: TfPoint, l: TfPoint) -> Result<f64> {
    let [(phi, psi)] = window.terms() else {
        return Err(Error::Input("closed form needs a single-term window; assemble the block instead".into()));
    };
    Ok(vector_norm(phi).powi(2) * inner(&tf_shift(psi, l), &tf_shift(psi, k)).norm())
}

/// `sum_{m,n} ||phi_m|| ||phi_n|| |<pi(l) psi_n, pi(k) psi_m>|`, an upper bound on
/// `||alpha_k(T) alpha_l(T)^*||` for any window.
pub fn gram_block_triangle_bound(window: &WindowOperator, k: TfPoint, l: TfPoint) -> f64 {
    let mut total = 0.0;
    for (phi_m, psi_m) in window.terms() {
        let pk = tf_shift(psi_m, k);
        for (phi_n, psi_n) in window.terms() {
            total += vector_norm(phi_m) * vector_norm(phi_n) * inner(&tf_shift(psi_n, l), &pk).norm();
        }
    }
    total
}

/// Block norms `||alpha_k(T) M alpha_l(T)^*||` for all pairs, without forming blocks.
///
/// With `T = Phi Psi^*` the block is `pi(k) Phi C_{kl} Phi^* pi(l)^*` where
/// `C_{kl} = Psi^* pi(k)^* M pi(l) Psi`. Writing `Phi^* Phi = R^* R`, its norm
/// is `||R C_{kl} R^*||`, a matrix of the size of the number of window terms.
pub fn gram_block_norms(sys: &GaborGSystem, middle: Option<&ComplexMatrix>) -> Result<NormMatrix> {
    let terms = sys.window.terms();
    let r = terms.len();
    let phi_gram = ComplexMatrix::from_fn(r, r, |(i, j)| inner(&terms[j].0, &terms[i].0));
    let eig = hermitian_eig(&phi_gram)?;
    let root = eig.map(|v| v.max(0.0).sqrt());
    let shifted: Vec<Vec<CVector>> =
        sys.points.iter().map(|&z| terms.iter().map(|(_, psi)| tf_shift(psi, z)).collect()).collect();
    let applied: Vec<Vec<CVector>> = match middle {
        Some(m) => shifted.iter().map(|col| col.iter().map(|v| m.as_array().dot(v)).collect()).collect(),
        None => shifted.clone(),
    };
    let len = sys.points.len();
    let mut values = Array2::zeros((len, len));
    for k in 0..len {
        for l in 0..len {
            let c = ComplexMatrix::from_fn(r, r, |(i, j)| inner(&applied[l][j], &shifted[k][i]));
            values[[k, l]] = crate::blockmat::spectral_norm(&(&(&root * &c) * &root))?;
        }
    }
    NormMatrix::new(Arc::new(sys.index_set()), values)
}

/// Jaffard constants and decay fits of the primal, mixed and dual Gram matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayTheoremReport {
    pub s: f64,
    pub frame_bounds: FrameBounds,
    /// Jaffard norm of `G_G`.
    pub c1: f64,
    /// Jaffard norm of `G_{G, G~}`.
    pub c2: f64,
    /// Jaffard norm of `G_{G~}`.
    pub c3: f64,
    pub fit_primal: Option<DecayFit>,
    pub fit_mixed: Option<DecayFit>,
    pub fit_dual: Option<DecayFit>,
    pub decay_slack: f64,
    /// `s_dual >= s_primal - decay_slack`, when both fits exist.
    pub dual_within_slack: Option<bool>,
    pub density: usize,
}

/// Computes the Jaffard norms of `[T_k T_l^*]`, `[T_k S^{-1} T_l^*]` and
/// `[T_k S^{-2} T_l^*]` for the Gabor g-frame `T_k = alpha_k(T)`.
pub fn verify_decay_theorem(sys: &GaborGSystem, s: f64) -> Result<DecayTheoremReport> {
    let frame = build_gabor_gsystem(sys)?;
    let spectrum = frame.frame_operator_spectrum()?;
    let s_inv = spectrum.inverse_power(1)?;
    let s_inv2 = spectrum.inverse_power(2)?;
    let primal = gram_block_norms(sys, None)?;
    let mixed = gram_block_norms(sys, Some(&s_inv))?;
    let dual = gram_block_norms(sys, Some(&s_inv2))?;
    let fit = |m: &NormMatrix| match fit_decay_of_norms(m) {
        Ok(f) => Ok(Some(f)),
        Err(Error::InsufficientData(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let fit_primal = fit(&primal)?;
    let fit_dual = fit(&dual)?;
    let dual_within_slack = match (&fit_primal, &fit_dual) {
        (Some(p), Some(d)) => Some(d.s_fit >= p.s_fit - DECAY_SLACK),
        _ => None,
    };
    Ok(DecayTheoremReport {
        s,
        frame_bounds: spectrum.bounds(),
        c1: jaffard_norm_of_norms(&primal, s)?.0,
        c2: jaffard_norm_of_norms(&mixed, s)?.0,
        c3: jaffard_norm_of_norms(&dual, s)?.0,
        fit_primal,
        fit_mixed: fit(&mixed)?,
        fit_dual,
        decay_slack: DECAY_SLACK,
        dual_within_slack,
        density: sys.density(),
    })
}
