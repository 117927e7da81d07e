//! The eight diagnostic tasks. Each produces one [`Table`].

use std::cell::OnceCell;
use std::sync::Arc;

use gframe_core::blockmat::BlockVector;
use gframe_core::coorbit::{
    bochner_norm, coorbit_norm, duality_pairing, norm_equivalence_check, relative_reconstruction_errors,
};
use gframe_core::gabor::{gram_block_norms, GaborGSystem, DECAY_SLACK};
use gframe_core::gframe::{inner_product, is_dual_pair, mixed_gram, norm, verify_gram_factorization};
use gframe_core::localization::{
    fit_decay_of_norms, jaffard_norm_of_norms, report_from_norms, scalarize, weighted_opnorm, AlgebraSpec, DecayFit,
    NormMatrix,
};
use gframe_core::sampling::{complex_vector, gaussian_gframe, localized_gframe, stream_rng};
use gframe_core::{Error, GFrame, IndexSet, Result};

use crate::report::{Cell, Table};
use crate::scenario::{Generator, Model, Scenario, Task};

/// Tolerance on the certified bounds of the equivalence and pairing tasks.
pub const CHECK_TOL: f64 = 1e-9;
/// Jaffard exponent of the decay task when the scenario algebra is not a Jaffard algebra.
pub const DEFAULT_DECAY_EXPONENT: f64 = 3.0;

/// The g-frame of a model, with the Gabor system it came from if any.
pub fn build_model(model: &Model) -> Result<(GFrame, Option<GaborGSystem>)> {
    match model {
        Model::Gabor(sys) => Ok((gframe_core::gabor::build_gabor_gsystem(sys)?, Some(sys.clone()))),
        Model::Explicit { frame, .. } => Ok((frame.clone(), None)),
        Model::Synthetic { generator, len, n, seed } => {
            let x = Arc::new(IndexSet::range(*len)?);
            let mut rng = stream_rng(*seed, 0);
            let frame = match generator {
                Generator::Gaussian => gaussian_gframe(&mut rng, x, *n)?,
                Generator::Localized { decay } => localized_gframe(&mut rng, x, *n, *decay)?,
            };
            Ok((frame, None))
        }
    }
}

/// Shared state of one scenario run: the frame and lazily computed derived objects.
pub struct Context<'a> {
    scenario: &'a Scenario,
    frame: GFrame,
    gabor: Option<GaborGSystem>,
    dual: OnceCell<GFrame>,
    gram_norms: OnceCell<[NormMatrix; 3]>,
}

impl<'a> Context<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self> {
        let (frame, gabor) = build_model(&scenario.model)?;
        Ok(Self { scenario, frame, gabor, dual: OnceCell::new(), gram_norms: OnceCell::new() })
    }

    pub fn frame(&self) -> &GFrame {
        &self.frame
    }

    fn dual(&self) -> Result<&GFrame> {
        if let Some(d) = self.dual.get() {
            return Ok(d);
        }
        let d = self.frame.canonical_dual()?;
        Ok(self.dual.get_or_init(|| d))
    }

    /// Block norms of `G_T`, `G_{T,T~}` and `G_{T~}`.
    fn gram_norms(&self) -> Result<&[NormMatrix; 3]> {
        if let Some(g) = self.gram_norms.get() {
            return Ok(g);
        }
        let norms = match &self.gabor {
            Some(sys) => {
                let spectrum = self.frame.frame_operator_spectrum()?;
                [
                    gram_block_norms(sys, None)?,
                    gram_block_norms(sys, Some(&spectrum.inverse_power(1)?))?,
                    gram_block_norms(sys, Some(&spectrum.inverse_power(2)?))?,
                ]
            }
            None => {
                let dual = self.dual()?;
                [
                    scalarize(&self.frame.gram())?,
                    scalarize(&mixed_gram(&self.frame, dual)?)?,
                    scalarize(&dual.gram())?,
                ]
            }
        };
        Ok(self.gram_norms.get_or_init(|| norms))
    }

    pub fn run(&self, task: Task) -> Result<Table> {
        match task {
            Task::Bounds => self.bounds(),
            Task::Dual => self.dual_task(),
            Task::GramFactorization => self.gram_factorization(),
            Task::Localization => self.localization(),
            Task::Decay => self.decay(),
            Task::Coorbit => self.coorbit(),
            Task::Equivalence => self.equivalence(),
            Task::Pairing => self.pairing(),
        }
    }

    fn bounds(&self) -> Result<Table> {
        let b = self.frame.frame_bounds()?;
        let mut t = Table::new(vec!["lower", "upper", "is_frame", "bessel_bound_from_gram"]);
        t.push(vec![b.lower.into(), b.upper.into(), b.is_frame.into(), self.frame.bessel_bound_from_gram()?.into()]);
        Ok(t)
    }

    fn dual_task(&self) -> Result<Table> {
        let b = self.frame.frame_bounds()?;
        let dual = self.dual()?;
        let bd = dual.frame_bounds()?;
        let pair = is_dual_pair(&self.frame, dual, gframe_core::coorbit::DUAL_PAIR_TOL)?;
        let mut t = Table::new(vec![
            "dual_lower",
            "dual_upper",
            "expected_dual_lower",
            "expected_dual_upper",
            "dual_pair_residual",
            "is_dual_pair",
        ]);
        t.push(vec![
            bd.lower.into(),
            bd.upper.into(),
            (1.0 / b.upper).into(),
            (1.0 / b.lower).into(),
            pair.residual.into(),
            pair.holds.into(),
        ]);
        Ok(t)
    }

    fn gram_factorization(&self) -> Result<Table> {
        let r = verify_gram_factorization(&self.frame)?;
        let mut t = Table::new(vec!["residual_dual_gram", "residual_mixed", "projection_defect"]);
        t.push(vec![r.residual_dual_gram.into(), r.residual_mixed.into(), r.projection_defect.into()]);
        Ok(t)
    }

    fn localization(&self) -> Result<Table> {
        let mut t = Table::new(vec![
            "gram", "algebra", "norm_value", "sup_k", "sup_l", "fit_c", "fit_s", "fit_rms", "fit_pairs",
        ]);
        for (label, m) in ["primal", "mixed", "dual"].into_iter().zip(self.gram_norms()?) {
            let r = report_from_norms(m, &self.scenario.algebra)?;
            let fit = r.decay_fit;
            t.push(vec![
                Cell::Text(label.into()),
                Cell::Text(r.algebra.label()),
                r.norm_value.into(),
                r.sup_attained_at.0.into(),
                r.sup_attained_at.1.into(),
                fit.map(|f| f.c).into(),
                fit.map(|f| f.s_fit).into(),
                fit.map(|f| f.rms_log_residual).into(),
                fit.map(|f| f.pairs_used).into(),
            ]);
        }
        Ok(t)
    }

    fn decay(&self) -> Result<Table> {
        let s = match self.scenario.algebra {
            AlgebraSpec::Jaffard { s } => s,
            _ => DEFAULT_DECAY_EXPONENT,
        };
        let [primal, mixed, dual] = self.gram_norms()?;
        let fit = |m: &NormMatrix| -> Result<Option<DecayFit>> {
            match fit_decay_of_norms(m) {
                Ok(f) => Ok(Some(f)),
                Err(Error::InsufficientData(_)) => Ok(None),
                Err(e) => Err(e),
            }
        };
        let (fp, fm, fd) = (fit(primal)?, fit(mixed)?, fit(dual)?);
        let within = match (fp, fd) {
            (Some(p), Some(d)) => Some(d.s_fit >= p.s_fit - DECAY_SLACK),
            _ => None,
        };
        let mut t = Table::new(vec![
            "s", "c1", "c2", "c3", "s_primal", "s_mixed", "s_dual", "decay_slack", "dual_within_slack",
        ]);
        t.push(vec![
            s.into(),
            jaffard_norm_of_norms(primal, s)?.0.into(),
            jaffard_norm_of_norms(mixed, s)?.0.into(),
            jaffard_norm_of_norms(dual, s)?.0.into(),
            fp.map(|f| f.s_fit).into(),
            fm.map(|f| f.s_fit).into(),
            fd.map(|f| f.s_fit).into(),
            DECAY_SLACK.into(),
            within.into(),
        ]);
        Ok(t)
    }

    fn sample_vector(&self, stream: u64) -> gframe_core::CVector {
        complex_vector(&mut stream_rng(self.scenario.seed, stream), self.frame.dim())
    }

    fn coorbit(&self) -> Result<Table> {
        let t = &self.frame;
        let d = self.dual()?;
        let n = t.dim();
        let mut table = Table::new(vec![
            "p",
            "weight",
            "samples",
            "max_rel_coorbit_error",
            "max_rel_hilbert_error",
            "max_synthesis_ratio",
            "synthesis_opnorm",
        ]);
        let gram = mixed_gram(d, t)?;
        for spec in &self.scenario.weights {
            let opnorm = weighted_opnorm(&gram, spec.p(), spec.weight())?.upper;
            let (mut coorbit_err, mut hilbert_err, mut synth) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..self.scenario.samples {
                let f = self.sample_vector(2 * i);
                let (c1, h1) = relative_reconstruction_errors(t, d, &f, spec)?;
                let (c2, h2) = relative_reconstruction_errors(d, t, &f, spec)?;
                coorbit_err = coorbit_err.max(c1).max(c2);
                hilbert_err = hilbert_err.max(h1).max(h2);
                let g = BlockVector::unflatten(
                    &complex_vector(&mut stream_rng(self.scenario.seed, 2 * i + 1), t.len() * n),
                    t.index_set().clone(),
                    n,
                )?;
                let gn = bochner_norm(&g, spec)?;
                if opnorm > 0.0 && gn > 0.0 {
                    synth = synth.max(coorbit_norm(&t.synthesis(&g)?, d, spec)? / (opnorm * gn));
                }
            }
            table.push(vec![
                Cell::Text(spec.p_label()),
                Cell::Text(spec.weight().label()),
                self.scenario.samples.into(),
                coorbit_err.into(),
                hilbert_err.into(),
                synth.into(),
                opnorm.into(),
            ]);
        }
        Ok(table)
    }

    /// Compares `H^p_w(Td, T)` with `H^p_w(T, Td)` for the canonical dual `Td`.
    fn equivalence(&self) -> Result<Table> {
        let t = &self.frame;
        let d = self.dual()?;
        let mut table = Table::new(vec![
            "p",
            "weight",
            "samples",
            "max_ratio_forward",
            "bound_forward",
            "max_ratio_backward",
            "bound_backward",
            "holds",
        ]);
        for spec in &self.scenario.weights {
            let c = norm_equivalence_check(d, t, t, d, spec, self.scenario.samples, self.scenario.seed)?;
            table.push(vec![
                Cell::Text(spec.p_label()),
                Cell::Text(spec.weight().label()),
                self.scenario.samples.into(),
                c.max_ratio_forward.into(),
                c.bound_forward.into(),
                c.max_ratio_backward.into(),
                c.bound_backward.into(),
                c.holds(CHECK_TOL).into(),
            ]);
        }
        Ok(table)
    }

    /// Duality pairing identity and Hölder bound; exponents `p < 1` are skipped.
    fn pairing(&self) -> Result<Table> {
        let t = &self.frame;
        let d = self.dual()?;
        let mut table = Table::new(vec![
            "p",
            "q",
            "weight",
            "samples",
            "max_identity_error",
            "max_holder_ratio",
            "holds",
        ]);
        for spec in &self.scenario.weights {
            let Some(conj) = spec.conjugate() else { continue };
            let (mut ident, mut ratio) = (0.0f64, 0.0f64);
            for i in 0..self.scenario.samples {
                let f = self.sample_vector(2 * i);
                let g = self.sample_vector(2 * i + 1);
                let beta = duality_pairing(&f, &g, t, d)?;
                ident = ident.max((beta - inner_product(&f, &g)).norm() / (norm(&f) * norm(&g)));
                let bound = coorbit_norm(&f, d, spec)? * coorbit_norm(&g, t, &conj)?;
                if bound > 0.0 {
                    ratio = ratio.max(beta.norm() / bound);
                }
            }
            table.push(vec![
                Cell::Text(spec.p_label()),
                Cell::Text(conj.p_label()),
                Cell::Text(spec.weight().label()),
                self.scenario.samples.into(),
                ident.into(),
                ratio.into(),
                (ident <= 1e-10 && ratio <= 1.0 + CHECK_TOL).into(),
            ]);
        }
        Ok(table)
    }
}

