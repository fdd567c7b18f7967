//! Experiment configuration, read from JSON.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::gen::PerturbMode;
use crate::besov::ModulusOfContinuity;
use crate::error::{Error, Result};

pub const EXPERIMENTS: &[(&str, &str)] = &[
    ("lipschitz", "band-limited f: |f(A) - f(B)| against sigma |f|_inf max |A_j - B_j|"),
    ("hoelder", "cone |x|^alpha: |f(A) - f(B)| against max |A_j - B_j|^alpha"),
    ("omega", "f = omega(|x|): |f(A) - f(B)| against omega_*(max |A_j - B_j|)"),
    ("schatten", "trace-class, S_p and Besov variants of the perturbation bounds"),
    ("kontr", "growth of the multiplier norms of the divided differences of g(x1 - x3) sin x2"),
];

/// A modulus of continuity as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModulusSpec {
    Power { alpha: f64 },
    LogLipschitz,
    Table { t: Vec<f64>, w: Vec<f64> },
}

impl ModulusSpec {
    pub fn build(&self) -> Result<ModulusOfContinuity> {
        match self {
            Self::Power { alpha } => ModulusOfContinuity::power(*alpha),
            Self::LogLipschitz => Ok(ModulusOfContinuity::LogLipschitz),
            Self::Table { t, w } => ModulusOfContinuity::table(t.clone(), w.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Power { alpha } => format!("power-{alpha}"),
            Self::LogLipschitz => "log-lipschitz".into(),
            Self::Table { t, .. } => format!("table-{}", t.len()),
        }
    }
}

/// Log-spaced perturbation sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for DeltaSpec {
    fn default() -> Self {
        DeltaSpec {
            min: 1e-3,
            max: 1.0,
            count: 7,
        }
    }
}

impl DeltaSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let (a, b) = (self.min.ln(), self.max.ln());
        (0..self.count)
            .map(|k| (a + (b - a) * k as f64 / (self.count - 1) as f64).exp())
            .collect()
    }
}

/// Grid sizes and solver settings for `kontr`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub sizes: Vec<usize>,
    /// `gamma_2` solver tolerance.
    pub tol: f64,
    /// Required dominance of the `delta_2` growth over the controls.
    pub threshold: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            sizes: vec![4, 8, 16, 32],
            tol: 1e-3,
            threshold: 1.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub n: usize,
    pub dims: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub moduli: Vec<ModulusSpec>,
    /// Schatten exponents for the `S_p` variant.
    pub p: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub deltas: DeltaSpec,
    pub grid: GridSpec,
    /// Preset name for `lipschitz`; `None` picks `sin-xj` for `n = 1` and
    /// `random` otherwise.
    pub function: Option<String>,
    /// Number of terms for the `random` and `lacunary` presets.
    pub terms: usize,
    /// Perturbation size for `lipschitz` at `sigma = 1`.
    pub epsilon: f64,
    /// Spectra are drawn from `[-half_width, half_width]^n`.
    pub half_width: f64,
    /// Tip smoothing of the cone.
    pub smoothing: f64,
    pub modes: Vec<PerturbMode>,
    /// Reports go to `out/{experiment}/`.
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: "lipschitz".into(),
            n: 1,
            dims: vec![4, 8, 16],
            sigmas: vec![1.0, 2.0, 4.0],
            alphas: vec![0.3, 0.5, 0.7],
            moduli: vec![ModulusSpec::Power { alpha: 0.5 }, ModulusSpec::LogLipschitz],
            p: vec![1.5, 2.0, 4.0],
            trials: 50,
            seed: 0,
            deltas: DeltaSpec::default(),
            grid: GridSpec::default(),
            function: None,
            terms: 4,
            epsilon: 0.1,
            half_width: 2.0,
            smoothing: 0.0,
            modes: vec![PerturbMode::SpectralShift, PerturbMode::BasisRotate, PerturbMode::Both],
            out: PathBuf::from("out"),
        }
    }
}

fn positive(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() || v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgument(format!("{name} must be a nonempty list of positive numbers")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn for_experiment(name: &str) -> Self {
        ExperimentConfig {
            experiment: name.into(),
            ..Default::default()
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if !EXPERIMENTS.iter().any(|(k, _)| *k == self.experiment) {
            return Err(Error::InvalidArgument(format!("unknown experiment {:?}", self.experiment)));
        }
        if self.n == 0 || self.trials == 0 || self.terms == 0 {
            return Err(Error::InvalidArgument("n, trials and terms must be positive".into()));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::InvalidArgument("dims must be a nonempty list of positive sizes".into()));
        }
        positive("sigmas", &self.sigmas)?;
        positive("alphas", &self.alphas)?;
        positive("p", &self.p)?;
        if self.alphas.iter().any(|a| *a >= 1.0) {
            return Err(Error::InvalidArgument("alphas must lie in (0, 1)".into()));
        }
        if !(self.deltas.min > 0.0 && self.deltas.max >= self.deltas.min && self.deltas.count > 0) {
            return Err(Error::InvalidArgument("deltas need 0 < min <= max and count >= 1".into()));
        }
        if self.grid.sizes.is_empty() || self.grid.sizes.iter().any(|&s| s < 2) {
            return Err(Error::InvalidArgument("grid sizes must be at least 2".into()));
        }
        if !(self.grid.tol > 0.0 && self.grid.threshold > 0.0) {
            return Err(Error::InvalidArgument("grid tol and threshold must be positive".into()));
        }
        if !(self.epsilon > 0.0 && self.half_width > 0.0 && self.smoothing >= 0.0) {
            return Err(Error::InvalidArgument(
                "epsilon and half_width must be positive, smoothing nonnegative".into(),
            ));
        }
        if self.modes.is_empty() {
            return Err(Error::InvalidArgument("modes must be nonempty".into()));
        }
        for m in &self.moduli {
            m.build()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "hoelder", "n": 2}"#).unwrap();
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.trials, 50);
        let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_json(r#"{"experiment": "nope"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"sigmas": [1, -2]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"dims": [0]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"typo": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"moduli": [{"kind": "power", "alpha": 1.5}]}"#).is_err());
    }

    #[test]
    fn delta_grid() {
        let d = DeltaSpec::default().values();
        assert_eq!(d.len(), 7);
        assert!((d[0] - 1e-3).abs() < 1e-15 && (d[6] - 1.0).abs() < 1e-15);
        assert!((d[2] - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn modulus_spec_json() {
        let m: ModulusSpec = serde_json::from_str(r#"{"kind": "log-lipschitz"}"#).unwrap();
        assert_eq!(m, ModulusSpec::LogLipschitz);
    }
}
