//! Experiment configuration: JSON file, command-line overrides, hashing and
//! per-trial seeds.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sfmis_core::rng::derive_seed;
use sfmis_core::{Kernel, Strategy};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Generate,
    Degeneracy,
    Mis,
    Fit,
    Diameter,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Generate, Experiment::Degeneracy, Experiment::Mis, Experiment::Fit, Experiment::Diameter];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Generate => "generate",
            Experiment::Degeneracy => "degeneracy",
            Experiment::Mis => "mis",
            Experiment::Fit => "fit",
            Experiment::Diameter => "diameter",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

/// Which degree sequence the fit experiment feeds to the tail fitter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitDegrees {
    /// Degrees inside the subgraph induced by the high-degree vertices.
    #[default]
    Internal,
    /// Degrees in the whole graph of the same vertices.
    Original,
}

impl FromStr for FitDegrees {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "internal" => Ok(FitDegrees::Internal),
            "original" => Ok(FitDegrees::Original),
            _ => Err(format!("unknown degree source {s:?} (expected internal or original)")),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> From<OneOrMany<T>> for Vec<T> {
    fn from(v: OneOrMany<T>) -> Self {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(xs) => xs,
        }
    }
}

/// Keys accepted in a JSON config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: Option<Experiment>,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    #[serde(alias = "beta", default, deserialize_with = "one_or_many")]
    pub beta_list: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub kernel: Option<String>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub strategy: Option<Vec<String>>,
    pub output_dir: Option<PathBuf>,
    pub n_bootstrap: Option<usize>,
    pub scale: Option<f64>,
    pub fit_degrees: Option<FitDegrees>,
    pub round_limit: Option<u32>,
    pub trace: Option<bool>,
}

fn one_or_many<'de, D, T>(de: D) -> Result<Option<Vec<T>>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    Option::<OneOrMany<T>>::deserialize(de).map(|o| o.map(Vec::from))
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Keys set in `other` replace the ones set here.
    pub fn overridden_by(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            experiment: other.experiment.or(self.experiment),
            n: other.n.or(self.n),
            n_list: other.n_list.or(self.n_list),
            beta_list: other.beta_list.or(self.beta_list),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            kernel: other.kernel.or(self.kernel),
            strategy: other.strategy.or(self.strategy),
            output_dir: other.output_dir.or(self.output_dir),
            n_bootstrap: other.n_bootstrap.or(self.n_bootstrap),
            scale: other.scale.or(self.scale),
            fit_degrees: other.fit_degrees.or(self.fit_degrees),
            round_limit: other.round_limit.or(self.round_limit),
            trace: other.trace.or(self.trace),
        }
    }
}

/// A complete, validated experiment description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Graph sizes; a single entry unless an `n_list` was given.
    pub n_list: Vec<usize>,
    pub beta_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub kernel: Kernel,
    pub strategies: Vec<Strategy>,
    pub n_bootstrap: usize,
    pub scale: f64,
    pub fit_degrees: FitDegrees,
    pub round_limit: u32,
    #[serde(skip)]
    pub output_dir: PathBuf,
    #[serde(skip)]
    pub trace: bool,
}

impl ExperimentConfig {
    /// Defaults for `experiment` at desk scale.
    pub fn defaults(experiment: Experiment) -> Self {
        let (n_list, beta_list, trials) = match experiment {
            Experiment::Generate => (vec![10_000], vec![3.0], 1),
            Experiment::Degeneracy => (vec![10_000], vec![3.0, 3.5, 4.0, 4.5], 200),
            Experiment::Mis => (vec![10_000], vec![2.5, 3.0, 3.5], 50),
            Experiment::Fit => (vec![100_000], vec![3.0, 3.6, 4.2, 4.8], 20),
            Experiment::Diameter => (vec![1_000, 10_000, 100_000], vec![2.5, 3.0, 3.5], 10),
        };
        let strategies = match experiment {
            Experiment::Mis => Strategy::ALL.to_vec(),
            _ => vec![Strategy::Alg4],
        };
        ExperimentConfig {
            experiment,
            n_list,
            beta_list,
            trials,
            seed: 1,
            kernel: Kernel::default(),
            strategies,
            n_bootstrap: sfmis_core::plfit::DEFAULT_BOOTSTRAP,
            scale: 1.0,
            fit_degrees: FitDegrees::default(),
            round_limit: 10_000,
            output_dir: PathBuf::from("out"),
            trace: false,
        }
    }

    /// Defaults for the file's experiment (or `fallback`) with the file's
    /// keys applied.
    pub fn resolve(file: ConfigFile, fallback: Experiment) -> Result<Self, HarnessError> {
        let experiment = file.experiment.unwrap_or(fallback);
        let mut cfg = ExperimentConfig::defaults(experiment);
        match (file.n, file.n_list) {
            (_, Some(list)) => cfg.n_list = list,
            (Some(n), None) => cfg.n_list = vec![n],
            (None, None) => {}
        }
        if let Some(b) = file.beta_list {
            cfg.beta_list = b;
        }
        if let Some(t) = file.trials {
            cfg.trials = t;
        }
        if let Some(s) = file.seed {
            cfg.seed = s;
        }
        if let Some(k) = file.kernel {
            cfg.kernel = k.parse().map_err(|e: sfmis_core::GenError| HarnessError::Config(e.to_string()))?;
        }
        if let Some(list) = file.strategy {
            cfg.strategies =
                list.iter().map(|s| s.parse::<Strategy>()).collect::<Result<_, _>>().map_err(HarnessError::Config)?;
        }
        if let Some(d) = file.output_dir {
            cfg.output_dir = d;
        }
        if let Some(b) = file.n_bootstrap {
            cfg.n_bootstrap = b;
        }
        if let Some(s) = file.scale {
            cfg.scale = s;
        }
        if let Some(f) = file.fit_degrees {
            cfg.fit_degrees = f;
        }
        if let Some(r) = file.round_limit {
            cfg.round_limit = r;
        }
        if let Some(t) = file.trace {
            cfg.trace = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.beta_list.is_empty() {
            return bad("beta_list must not be empty".into());
        }
        if let Some(b) = self.beta_list.iter().find(|b| !(**b > 2.0) || !b.is_finite()) {
            return bad(format!("every beta must be a finite number above 2, got {b}"));
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return bad("graph sizes must be positive".into());
        }
        if self.strategies.is_empty() {
            return bad("at least one strategy is required".into());
        }
        if self.n_bootstrap < sfmis_core::plfit::MIN_BOOTSTRAP {
            return bad(format!("n_bootstrap must be at least {}", sfmis_core::plfit::MIN_BOOTSTRAP));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale must be positive, got {}", self.scale));
        }
        if self.round_limit < 1 {
            return bad("round_limit must be at least 1".into());
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form
    /// (output location and tracing excluded).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(canonical.as_bytes())[..8])
    }

    /// Seed of the graph for `(n, beta, trial)`.
    pub fn trial_seed(&self, n: usize, beta: f64, trial: usize) -> u64 {
        derive_seed(self.seed, &[n as u64, beta.to_bits(), trial as u64])
    }
}
