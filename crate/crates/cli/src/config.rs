//! Experiment configuration: JSON file, flag overrides, content hash.
//!
//! The config file is a flat JSON object (the `bands` array is the one
//! nested exception); every field is optional and falls back to the default
//! experiment. Unknown keys are rejected so a typo cannot silently run the
//! default. Command-line flags override file values, and the hash stamped
//! into output headers is taken over the fully resolved configuration, so
//! two runs with the same hash saw exactly the same parameters.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use crate::CliError;

/// One frequency band paired with its time window and amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandConfig {
    pub freq_lo: f64,
    pub freq_hi: f64,
    pub time_lo: f64,
    pub time_hi: f64,
    pub alpha: f64,
}

impl Default for BandConfig {
    fn default() -> Self {
        BandConfig {
            freq_lo: 0.0,
            freq_hi: PI,
            time_lo: -1.0,
            time_hi: 1.0,
            alpha: 1.0,
        }
    }
}

/// Full experiment description with the canonical defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Bandwidth of the centered band `[-omega, omega]`.
    pub omega: f64,
    /// Half-length of the observation window `[-T, T]`.
    pub t_half: f64,
    /// Observation samples per trial, uniform over the window.
    pub n_obs: usize,
    /// Evaluation grid density in samples per unit time.
    pub sample_rate: f64,
    /// Noise bounds for sweeps; the first entry is the single-run default.
    pub epsilons: Vec<f64>,
    /// Trials per noise level in a sweep.
    pub trials: u64,
    /// Master seed; trial t draws from seed + t.
    pub seed: u64,
    /// Number of basis functions.
    pub basis_count: usize,
    /// Quadrature nodes for the basis discretization.
    pub resolution: usize,
    /// Evaluation interval `[lo, hi]` for error reporting and plots.
    pub eval_range: (f64, f64),
    /// Damping exponent of the random test-signal spectrum.
    pub smoothness: f64,
    /// Bands of the multiband demonstration.
    pub bands: Vec<BandConfig>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            omega: PI,
            t_half: 1.0,
            n_obs: 201,
            sample_rate: 100.0,
            epsilons: vec![0.1, 0.05, 0.025, 0.0125, 0.0063, 0.0031],
            trials: 20,
            seed: 42,
            basis_count: 10,
            resolution: 256,
            eval_range: (-3.0, 3.0),
            smoothness: 0.0,
            bands: vec![
                BandConfig::default(),
                BandConfig {
                    freq_lo: 2.0 * PI,
                    freq_hi: 3.0 * PI,
                    time_lo: -1.0,
                    time_hi: 1.0,
                    alpha: 1.0,
                },
            ],
        }
    }
}

impl ExperimentConfig {
    /// Read a config file, or the defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ExperimentConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Reject values no command could run with.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("omega", self.omega),
            ("t_half", self.t_half),
            ("sample_rate", self.sample_rate),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_obs < 2 {
            return Err(CliError::Usage(format!(
                "n_obs must be at least 2, got {}",
                self.n_obs
            )));
        }
        if self.basis_count == 0 {
            return Err(CliError::Usage("basis_count must be at least 1".into()));
        }
        if self.epsilons.is_empty() {
            return Err(CliError::Usage("epsilons must not be empty".into()));
        }
        for &eps in &self.epsilons {
            if !eps.is_finite() || eps < 0.0 {
                return Err(CliError::Usage(format!(
                    "epsilons entries must be finite and nonnegative, got {eps}"
                )));
            }
        }
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        let (lo, hi) = self.eval_range;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(CliError::Usage(format!(
                "eval_range [{lo}, {hi}] is empty or not finite"
            )));
        }
        if !self.smoothness.is_finite() || self.smoothness < 0.0 {
            return Err(CliError::Usage(format!(
                "smoothness must be finite and nonnegative, got {}",
                self.smoothness
            )));
        }
        Ok(())
    }

    /// Uniform evaluation grid implied by `eval_range` and `sample_rate`.
    pub fn eval_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.eval_range;
        let n = ((hi - lo) * self.sample_rate).round() as usize + 1;
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Hex SHA-256 of the resolved config's canonical JSON encoding.
    pub fn sha256(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// The `# ...` comment line stamped at the top of every output CSV.
    pub fn provenance_comment(&self) -> String {
        format!(
            "btlimit {} config_sha256={}",
            env!("CARGO_PKG_VERSION"),
            self.sha256()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default_experiment() {
        let cfg: ExperimentConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.n_obs, 201);
        assert_eq!(cfg.epsilons.len(), 6);
        assert_eq!(cfg.bands.len(), 2);
    }

    #[test]
    fn partial_override_keeps_other_defaults() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"seed": 7, "epsilons": [0.1, 0.05]}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.epsilons, vec![0.1, 0.05]);
        assert_eq!(cfg.omega, PI);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"sed": 7}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }

    #[test]
    fn validation_catches_degenerate_values() {
        let mut cfg = ExperimentConfig::default();
        cfg.omega = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.n_obs = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.eval_range = (2.0, 2.0);
        assert!(cfg.validate().is_err());

        assert!(ExperimentConfig::default().validate().is_ok());
    }

    #[test]
    fn eval_grid_hits_both_ends_at_the_sample_rate() {
        let cfg = ExperimentConfig::default();
        let grid = cfg.eval_grid();
        assert_eq!(grid.len(), 601);
        assert_eq!(grid[0], -3.0);
        assert_eq!(*grid.last().unwrap(), 3.0);
        assert!((grid[1] - grid[0] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn hash_tracks_every_field() {
        let base = ExperimentConfig::default();
        let mut changed = base.clone();
        changed.seed = 43;
        assert_ne!(base.sha256(), changed.sha256());
        assert_eq!(base.sha256(), ExperimentConfig::default().sha256());
        assert_eq!(base.sha256().len(), 64);
    }
}
