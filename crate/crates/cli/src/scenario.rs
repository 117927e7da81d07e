//! Scenario files: TOML documents describing a model and the tasks to run on it.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use gframe_core::coorbit::SeqSpaceSpec;
use gframe_core::gabor::{GaborGSystem, TfPoint, WindowOperator};
use gframe_core::localization::AlgebraSpec;
use gframe_core::{ComplexMatrix, GFrame, IndexSet, Metric, Weight, C64};

/// Largest signal length accepted for Gabor models.
pub const MAX_SIGNAL_LEN: usize = 256;
/// Largest `|X| * n` accepted for any model.
pub const MAX_TOTAL_DIM: usize = 4096;
/// Random draws per sampled task when the scenario does not say otherwise.
pub const DEFAULT_SAMPLES: u64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Bounds,
    Dual,
    GramFactorization,
    Localization,
    Decay,
    Coorbit,
    Equivalence,
    Pairing,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Bounds,
        Task::Dual,
        Task::GramFactorization,
        Task::Localization,
        Task::Decay,
        Task::Coorbit,
        Task::Equivalence,
        Task::Pairing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Bounds => "bounds",
            Task::Dual => "dual",
            Task::GramFactorization => "gram_factorization",
            Task::Localization => "localization",
            Task::Decay => "decay",
            Task::Coorbit => "coorbit",
            Task::Equivalence => "equivalence",
            Task::Pairing => "pairing",
        }
    }
}

impl FromStr for Task {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ConfigError(format!("unknown task {s:?}; expected one of {}", task_names().join(", "))))
    }
}

pub fn task_names() -> Vec<&'static str> {
    Task::ALL.iter().map(|t| t.name()).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    seed: Option<u64>,
    samples: Option<u64>,
    tasks: Vec<String>,
    output_dir: Option<PathBuf>,
    model: RawModel,
    algebra: RawAlgebra,
    #[serde(default)]
    weights: Vec<RawWeightEntry>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawModel {
    Gabor {
        #[serde(rename = "L")]
        l: usize,
        #[serde(default = "default_window")]
        window: String,
        grid: Option<[usize; 2]>,
        points: Option<Vec<[i64; 2]>>,
    },
    Explicit {
        file: PathBuf,
    },
    Synthetic {
        generator: String,
        len: usize,
        n: usize,
        seed: Option<u64>,
        decay: Option<f64>,
    },
}

fn default_window() -> String {
    "gaussian".to_string()
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawAlgebra {
    Jaffard { s: f64 },
    Schur { weight: RawWeight },
    Bgs { weight: RawWeight },
}

#[derive(Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawWeight {
    Unit,
    Polynomial { s: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightEntry {
    p: RawExponent,
    weight: RawWeight,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawExponent {
    Number(f64),
    Text(String),
}

/// Where the g-frame comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Gabor(GaborGSystem),
    Explicit { path: PathBuf, frame: GFrame },
    Synthetic { generator: Generator, len: usize, n: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Generator {
    Gaussian,
    Localized { decay: f64 },
}

impl Model {
    pub fn describe(&self) -> String {
        match self {
            Model::Gabor(sys) => format!("gabor(L={}, points={})", sys.signal_len(), sys.points().len()),
            Model::Explicit { path, .. } => format!("explicit({})", path.display()),
            Model::Synthetic { generator, len, n, seed } => {
                let g = match generator {
                    Generator::Gaussian => "gaussian".to_string(),
                    Generator::Localized { decay } => format!("localized(decay={decay})"),
                };
                format!("synthetic({g}, len={len}, n={n}, seed={seed})")
            }
        }
    }
}

/// A fully validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub model: Model,
    pub algebra: AlgebraSpec,
    pub weights: Vec<SeqSpaceSpec>,
    pub tasks: Vec<Task>,
    pub output_dir: Option<PathBuf>,
    /// Seed of all sampling in norm checks.
    pub seed: u64,
    pub samples: u64,
}

impl Scenario {
    /// Replaces the sampling seed and the seed of a synthetic model.
    pub fn override_seed(&mut self, seed: u64) {
        self.seed = seed;
        if let Model::Synthetic { seed: s, .. } = &mut self.model {
            *s = seed;
        }
    }

    /// Keeps only the listed tasks, in scenario order.
    pub fn restrict_tasks(&mut self, keep: &[Task]) {
        self.tasks.retain(|t| keep.contains(t));
    }
}

fn weight(raw: &RawWeight) -> Result<Weight, ConfigError> {
    match raw {
        RawWeight::Unit => Ok(Weight::unit()),
        RawWeight::Polynomial { s } => Weight::polynomial(*s).map_err(|e| ConfigError(format!("weight: {e}"))),
    }
}

fn exponent(raw: &RawExponent) -> Result<f64, ConfigError> {
    let p = match raw {
        RawExponent::Number(p) => *p,
        RawExponent::Text(s) if s == "inf" => f64::INFINITY,
        RawExponent::Text(s) => return err(format!("weights.p: expected a number or \"inf\", got {s:?}")),
    };
    if p.is_nan() || p < 0.0 {
        return err(format!("weights.p must lie in (0, inf] (0 is an alias of inf), got {p}"));
    }
    Ok(p)
}

/// Parses and validates a scenario. Relative paths (explicit frame files) are
/// resolved against `base_dir`.
pub fn parse_scenario(text: &str, base_dir: &Path) -> Result<Scenario, ConfigError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| ConfigError(format!("parse error: {e}")))?;
    if raw.name.trim().is_empty() {
        return err("name must not be empty");
    }
    let mut tasks = Vec::new();
    for t in &raw.tasks {
        let task: Task = t.parse()?;
        if tasks.contains(&task) {
            return err(format!("task {t:?} listed twice"));
        }
        tasks.push(task);
    }
    if tasks.is_empty() {
        return err("tasks must list at least one task");
    }
    let algebra = match &raw.algebra {
        RawAlgebra::Jaffard { s } if *s >= 0.0 && s.is_finite() => AlgebraSpec::Jaffard { s: *s },
        RawAlgebra::Jaffard { s } => return err(format!("algebra.s must be finite and >= 0, got {s}")),
        RawAlgebra::Schur { weight: w } => AlgebraSpec::Schur { weight: weight(w)? },
        RawAlgebra::Bgs { weight: w } => AlgebraSpec::Bgs { weight: weight(w)? },
    };
    let weights = raw
        .weights
        .iter()
        .map(|e| SeqSpaceSpec::new(exponent(&e.p)?, weight(&e.weight)?).map_err(|e| ConfigError(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let needs_weights = tasks.iter().any(|t| matches!(t, Task::Coorbit | Task::Equivalence | Task::Pairing));
    if needs_weights && weights.is_empty() {
        return err("coorbit, equivalence and pairing tasks need at least one [[weights]] entry");
    }
    let model = model(&raw.model, base_dir)?;
    let samples = raw.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return err("samples must be positive");
    }
    Ok(Scenario {
        name: raw.name,
        model,
        algebra,
        weights,
        tasks,
        output_dir: raw.output_dir,
        seed: raw.seed.unwrap_or(0),
        samples,
    })
}

pub fn parse_scenario_file(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut scenario = parse_scenario(&text, base)?;
    if let Some(dir) = &scenario.output_dir {
        if dir.is_relative() {
            scenario.output_dir = Some(base.join(dir));
        }
    }
    Ok(scenario)
}

fn guard(points: usize, n: usize) -> Result<(), ConfigError> {
    if points.saturating_mul(n) > MAX_TOTAL_DIM {
        return err(format!(
            "desk-scale guard: |X| * n = {points} * {n} exceeds {MAX_TOTAL_DIM}"
        ));
    }
    Ok(())
}

fn model(raw: &RawModel, base_dir: &Path) -> Result<Model, ConfigError> {
    match raw {
        RawModel::Gabor { l, window, grid, points } => {
            if *l > MAX_SIGNAL_LEN {
                return err(format!("desk-scale guard: L = {l} exceeds {MAX_SIGNAL_LEN}"));
            }
            let window = match window.as_str() {
                "gaussian" => WindowOperator::gaussian(*l).map_err(|e| ConfigError(format!("model.L: {e}")))?,
                other => return err(format!("model.window: unknown window {other:?}; expected \"gaussian\"")),
            };
            let sys = match (grid, points) {
                (Some([a, b]), None) => GaborGSystem::grid(window, *a, *b),
                (None, Some(pts)) => {
                    GaborGSystem::new(window, pts.iter().map(|&[x, w]| TfPoint::new(x, w, *l)).collect())
                }
                _ => return err("model: give exactly one of `grid` or `points` for a gabor model"),
            }
            .map_err(|e| ConfigError(format!("model: {e}")))?;
            guard(sys.points().len(), *l)?;
            Ok(Model::Gabor(sys))
        }
        RawModel::Explicit { file } => {
            let path = base_dir.join(file);
            let frame = load_frame(&path)?;
            guard(frame.len(), frame.dim())?;
            Ok(Model::Explicit { path: file.clone(), frame })
        }
        RawModel::Synthetic { generator, len, n, seed, decay } => {
            let seed = seed.ok_or_else(|| ConfigError("model: seed required for synthetic generators".into()))?;
            if *len == 0 || *n == 0 {
                return err("model: len and n must be positive");
            }
            guard(*len, *n)?;
            let generator = match (generator.as_str(), decay) {
                ("gaussian", None) => Generator::Gaussian,
                ("localized", Some(d)) if *d >= 0.0 => Generator::Localized { decay: *d },
                ("localized", _) => return err("model: the localized generator needs decay >= 0"),
                ("gaussian", Some(_)) => return err("model: decay only applies to the localized generator"),
                (other, _) => return err(format!("model.generator: unknown generator {other:?}")),
            };
            Ok(Model::Synthetic { generator, len: *len, n: *n, seed })
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrame {
    #[serde(default)]
    period: Option<f64>,
    points: Vec<Vec<f64>>,
    /// One `n x n` matrix per point, rows of `[re, im]` pairs.
    operators: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Reads a frame file (JSON, see the README for the layout).
pub fn load_frame(path: &Path) -> Result<GFrame, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let raw: RawFrame =
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("frame file {}: {e}", path.display())))?;
    let metric = match raw.period {
        Some(period) => Metric::Toroidal { period },
        None => Metric::Euclidean,
    };
    let index_set = IndexSet::new(raw.points, metric).map_err(|e| ConfigError(format!("frame file: {e}")))?;
    let mut ops = Vec::with_capacity(raw.operators.len());
    for (k, rows) in raw.operators.iter().enumerate() {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return err(format!("frame file: operator {k} is not square"));
        }
        ops.push(ComplexMatrix::from_fn(n, n, |(i, j)| C64::new(rows[i][j][0], rows[i][j][1])));
    }
    if ops.is_empty() {
        return err("frame file: no operators");
    }
    GFrame::new(Arc::new(index_set), ops).map_err(|e| ConfigError(format!("frame file: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "minimal"
tasks = ["bounds"]

[model]
kind = "gabor"
L = 32
grid = [8, 8]

[algebra]
kind = "jaffard"
s = 3.0
"#;

    fn parse(text: &str) -> Result<Scenario, ConfigError> {
        parse_scenario(text, Path::new("."))
    }

    #[test]
    fn minimal_gabor_scenario() {
        let s = parse(MINIMAL).unwrap();
        assert_eq!(s.tasks, vec![Task::Bounds]);
        match &s.model {
            Model::Gabor(sys) => assert_eq!(sys.points().len(), 16),
            m => panic!("unexpected model {m:?}"),
        }
        assert_eq!(s.samples, DEFAULT_SAMPLES);
    }

    #[test]
    fn synthetic_needs_seed() {
        let text = r#"
name = "syn"
tasks = ["bounds"]
[model]
kind = "synthetic"
generator = "gaussian"
len = 12
n = 8
[algebra]
kind = "jaffard"
s = 2.0
"#;
        let e = parse(text).unwrap_err();
        assert!(e.0.contains("seed required"), "{e}");
        let ok = text.replace("n = 8", "n = 8\nseed = 4");
        assert!(parse(&ok).is_ok());
    }

    #[test]
    fn desk_scale_guard() {
        let e = parse(&MINIMAL.replace("L = 32", "L = 1024")).unwrap_err();
        assert!(e.0.contains("desk-scale guard"), "{e}");
        let e = parse(&MINIMAL.replace("grid = [8, 8]", "grid = [2, 2]")).unwrap_err();
        assert!(e.0.contains("desk-scale guard"), "{e}");
    }

    #[test]
    fn unknown_keys_and_tasks_are_rejected() {
        let e = parse(&MINIMAL.replace("name = \"minimal\"", "name = \"minimal\"\ncolour = 3")).unwrap_err();
        assert!(e.0.contains("colour"), "{e}");
        let e = parse(&MINIMAL.replace("s = 3.0", "s = 3.0\nextra = 1")).unwrap_err();
        assert!(e.0.contains("extra"), "{e}");
        let e = parse(&MINIMAL.replace("[\"bounds\"]", "[\"bounds\", \"plot\"]")).unwrap_err();
        assert!(e.0.contains("plot"), "{e}");
        let e = parse(&MINIMAL.replace("[\"bounds\"]", "[\"coorbit\"]")).unwrap_err();
        assert!(e.0.contains("weights"), "{e}");
    }

    #[test]
    fn weights_and_exponents() {
        let text = format!(
            "{MINIMAL}\n[[weights]]\np = \"inf\"\nweight = {{ kind = \"unit\" }}\n\n[[weights]]\np = 0\nweight = {{ kind = \"polynomial\", s = 2.0 }}\n"
        );
        let s = parse(&text).unwrap();
        assert_eq!(s.weights.len(), 2);
        assert!(s.weights.iter().all(|w| w.p().is_infinite()));
        let bad = text.replace("p = 0", "p = -1");
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn parse_errors_carry_location() {
        let e = parse("name = \"x\"\ntasks = [\n").unwrap_err();
        assert!(e.0.starts_with("parse error"), "{e}");
        assert!(e.0.contains("line"), "{e}");
    }

    #[test]
    fn seed_override_reaches_synthetic_models() {
        let text = r#"
name = "syn"
tasks = ["bounds"]
seed = 1
[model]
kind = "synthetic"
generator = "localized"
decay = 2.0
len = 12
n = 8
seed = 4
[algebra]
kind = "schur"
weight = { kind = "polynomial", s = 1.0 }
"#;
        let mut s = parse(text).unwrap();
        s.override_seed(99);
        assert_eq!(s.seed, 99);
        assert!(matches!(s.model, Model::Synthetic { seed: 99, .. }));
    }
}
