//! Weight functions on `R^m`.

use crate::error::{Error, Result};

/// Positive weight function evaluated on index points or index differences.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    /// `(1 + |x|)^exponent` with the Euclidean norm. The standard polynomial
    /// weight `nu_s` has exponent `s >= 0`; negative exponents arise as
    /// reciprocals.
    Polynomial { exponent: f64 },
    /// Tabulated values; evaluation off the table is an error.
    Samples(Vec<(Vec<f64>, f64)>),
}

const SAMPLE_MATCH_TOL: f64 = 1e-9;

impl Weight {
    /// `omega == 1`.
    pub fn unit() -> Self {
        Weight::Polynomial { exponent: 0.0 }
    }

    /// The standard polynomial weight `nu_s(x) = (1 + |x|)^s`.
    pub fn polynomial(s: f64) -> Result<Self> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::Input(format!("polynomial weight needs s >= 0, got {s}")));
        }
        Ok(Weight::Polynomial { exponent: s })
    }

    pub fn samples(samples: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Input("sampled weight needs at least one sample".into()));
        }
        if samples.iter().any(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Input("sampled weight values must be positive and finite".into()));
        }
        Ok(Weight::Samples(samples))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Weight::Polynomial { exponent } => {
                let r = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                Ok((1.0 + r).powf(*exponent))
            }
            Weight::Samples(samples) => samples
                .iter()
                .find(|(p, _)| {
                    p.len() == x.len() && p.iter().zip(x).all(|(a, b)| (a - b).abs() <= SAMPLE_MATCH_TOL)
                })
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Input(format!("weight has no sample at {x:?}"))),
        }
    }

    /// Pointwise reciprocal `1/omega`.
    pub fn reciprocal(&self) -> Self {
        match self {
            Weight::Polynomial { exponent } => Weight::Polynomial { exponent: -exponent },
            Weight::Samples(s) => Weight::Samples(s.iter().map(|(p, v)| (p.clone(), 1.0 / v)).collect()),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Weight::Polynomial { exponent } if *exponent == 0.0)
    }

    /// GRS metadata: polynomial weights satisfy it, tabulated weights are unknown.
    pub fn satisfies_grs(&self) -> Option<bool> {
        match self {
            Weight::Polynomial { .. } => Some(true),
            Weight::Samples(_) => None,
        }
    }

    /// Short stable label used in reports.
    pub fn label(&self) -> String {
        match self {
            Weight::Polynomial { exponent } if *exponent == 0.0 => "1".to_string(),
            Weight::Polynomial { exponent } => format!("nu_{exponent}"),
            Weight::Samples(s) => format!("samples[{}]", s.len()),
        }
    }
}

/// Result of a sampled moderateness check `m(x + y) <= C m(x) nu(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeratenessReport {
    /// `max m(x + y) / (m(x) nu(y))` over the sampled pairs.
    pub constant: f64,
    pub pairs_checked: usize,
}

/// Estimates the moderateness constant of `m` with respect to `nu` over all
/// pairs `(x, y)` drawn from `xs` and `ys`.
pub fn moderateness(m: &Weight, nu: &Weight, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> Result<ModeratenessReport> {
    let mut constant = 0.0f64;
    let mut pairs_checked = 0;
    for x in xs {
        for y in ys {
            if x.len() != y.len() {
                return Err(Error::Dimension("sample points of unequal dimension".into()));
            }
            let sum: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            constant = constant.max(m.eval(&sum)? / (m.eval(x)? * nu.eval(y)?));
            pairs_checked += 1;
        }
    }
    Ok(ModeratenessReport { constant, pairs_checked })
}
