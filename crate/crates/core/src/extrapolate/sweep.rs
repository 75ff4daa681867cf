//! Noise-level sweep measuring how the extrapolation error scales.
//!
//! For each noise bound epsilon and each trial, the driver draws a random
//! test signal, perturbs its samples, solves with the chosen strategy, and
//! compares against the truth on an evaluation grid. The headline statistic
//! is the ratio `max_error / epsilon^(1/3)`: if the cube-root error law
//! holds, that ratio is flat across epsilon, so its mean per epsilon should
//! stay within a small factor of the median across the sweep.
//!
//! Seeding is two-level so the experiment is reproducible and the comparison
//! across epsilon is paired: trial t draws its signal from `seed + t` and its
//! noise shape from `(seed + t) XOR mask`. Equal trials therefore share both
//! the signal and the noise direction, with epsilon only scaling amplitude.

use super::{
    error_metrics, uniform_grid, ErrorMetrics, ExtrapolateError, Extrapolator, ObservationSet,
};
use crate::btsignal::{add_noise, random_bt_signal};
use crate::numerics::SeededRng;
use crate::pswf::PswfBasis;
use std::fmt::Write as _;
use std::sync::Arc;

/// Separates the noise stream from the signal stream of the same trial.
const NOISE_SEED_MASK: u64 = 0xA5A5_A5A5_A5A5_A5A5;

/// Seed of trial `t`'s signal stream.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_add(trial)
}

/// Seed of the noise stream paired with a signal stream.
pub fn noise_seed(trial_seed: u64) -> u64 {
    trial_seed ^ NOISE_SEED_MASK
}

/// Experiment shape; the basis and evaluation grid are passed separately.
#[derive(Clone, Debug)]
pub struct SweepParams {
    /// Observation samples per trial, uniform over the basis window.
    pub n_obs: usize,
    /// Noise bounds to sweep, every entry positive.
    pub epsilons: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Damping exponent of the random test signals.
    pub smoothness: f64,
}

/// One (epsilon, trial) solve.
#[derive(Clone, Debug)]
pub struct SweepCell {
    pub epsilon: f64,
    pub trial: u64,
    pub metrics: ErrorMetrics,
    /// `max_error / epsilon^(1/3)`, the error-law diagnostic.
    pub ratio: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Converged-only aggregates for one epsilon.
#[derive(Clone, Copy, Debug)]
pub struct SweepSummary {
    pub epsilon: f64,
    pub trials: usize,
    pub converged: usize,
    /// Mean over converged trials; NaN when none converged.
    pub mean_max_error: f64,
    /// Mean ratio over converged trials; NaN when none converged.
    pub mean_ratio: f64,
}

/// Full sweep output: raw cells plus per-epsilon summaries.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub cells: Vec<SweepCell>,
    pub summaries: Vec<SweepSummary>,
}

impl SweepReport {
    /// Raw cells as CSV (no comment header; callers prepend their own).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "epsilon,trial,max_error,max_error_inside,max_error_outside,rms,ratio,iterations,converged\n",
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.epsilon,
                c.trial,
                c.metrics.max_error,
                c.metrics.max_inside,
                c.metrics.max_outside,
                c.metrics.rms,
                c.ratio,
                c.iterations,
                c.converged
            );
        }
        out
    }

    /// Per-epsilon summaries as CSV.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("epsilon,trials,converged,mean_max_error,mean_ratio\n");
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.epsilon, s.trials, s.converged, s.mean_max_error, s.mean_ratio
            );
        }
        out
    }

    /// Fraction of cells whose solve did not converge.
    pub fn failure_fraction(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        let failed = self.cells.iter().filter(|c| !c.converged).count();
        failed as f64 / self.cells.len() as f64
    }

    /// Largest per-epsilon mean ratio, over epsilons with any converged
    /// trials; NaN when nothing converged anywhere.
    pub fn max_mean_ratio(&self) -> f64 {
        self.summaries
            .iter()
            .filter(|s| s.converged > 0)
            .map(|s| s.mean_ratio)
            .fold(f64::NAN, f64::max)
    }

    /// Median of the per-epsilon mean ratios (converged epsilons only);
    /// NaN when nothing converged anywhere.
    pub fn median_mean_ratio(&self) -> f64 {
        let mut ratios: Vec<f64> = self
            .summaries
            .iter()
            .filter(|s| s.converged > 0)
            .map(|s| s.mean_ratio)
            .collect();
        if ratios.is_empty() {
            return f64::NAN;
        }
        ratios.sort_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
        let n = ratios.len();
        if n % 2 == 1 {
            ratios[n / 2]
        } else {
            0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
        }
    }
}

/// Run the full sweep with one strategy. Cells come out ordered by the
/// epsilon list first, trial second, and the whole run is a pure function of
/// its arguments.
pub fn run_sweep(
    basis: &Arc<PswfBasis>,
    grid: &[f64],
    params: &SweepParams,
    method: &dyn Extrapolator,
) -> Result<SweepReport, ExtrapolateError> {
    if params.epsilons.is_empty() {
        return Err(ExtrapolateError::EmptyEpsilons);
    }
    if params.trials == 0 {
        return Err(ExtrapolateError::ZeroTrials);
    }
    for &eps in &params.epsilons {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(ExtrapolateError::InvalidEpsilon(eps));
        }
    }

    let t_half = basis.params().t_half();
    let obs_times = uniform_grid(t_half, params.n_obs);

    // The signal of a trial does not depend on epsilon; draw each once.
    struct Trial {
        clean: Vec<f64>,
        truth: Vec<f64>,
    }
    let trials: Vec<Trial> = (0..params.trials)
        .map(|t| {
            let mut rng = SeededRng::new(trial_seed(params.seed, t));
            let (_, f_true) = random_bt_signal(basis, &mut rng, params.smoothness);
            Trial {
                clean: obs_times.iter().map(|&tau| f_true.eval(tau)).collect(),
                truth: f_true.eval_grid(grid),
            }
        })
        .collect();

    let mut cells = Vec::with_capacity(params.epsilons.len() * params.trials as usize);
    let mut summaries = Vec::with_capacity(params.epsilons.len());
    for &eps in &params.epsilons {
        let mut converged = 0usize;
        let mut sum_err = 0.0;
        let mut sum_ratio = 0.0;
        for (t, trial) in trials.iter().enumerate() {
            let t = t as u64;
            let mut noise_rng = SeededRng::new(noise_seed(trial_seed(params.seed, t)));
            let noisy = add_noise(&trial.clean, &mut noise_rng, eps);
            let obs = ObservationSet::new(t_half, noisy, eps)?;
            let result = method.solve(basis, &obs)?;
            let est = result.eval_grid(grid);
            let metrics = error_metrics(grid, &trial.truth, &est, t_half);
            let ratio = metrics.max_error / eps.cbrt();
            if result.converged() {
                converged += 1;
                sum_err += metrics.max_error;
                sum_ratio += ratio;
            }
            cells.push(SweepCell {
                epsilon: eps,
                trial: t,
                metrics,
                ratio,
                iterations: result.iterations(),
                converged: result.converged(),
            });
        }
        let denom = converged as f64;
        summaries.push(SweepSummary {
            epsilon: eps,
            trials: trials.len(),
            converged,
            mean_max_error: if converged > 0 { sum_err / denom } else { f64::NAN },
            mean_ratio: if converged > 0 { sum_ratio / denom } else { f64::NAN },
        });
    }
    Ok(SweepReport { cells, summaries })
}
