//! Extrapolating a bandlimited signal from noisy samples of a finite segment.
//!
//! The data model: a true signal `f = K q_true` is observed on a uniform grid
//! over `[-T, T]` with per-sample noise bounded by epsilon. An extrapolant is
//! any signal `f~ = K q` whose samples sit within `2 epsilon` of the
//! observations (the data themselves are within epsilon of the truth, so the
//! truth is feasible). Among the feasible densities, the minimum-norm one is
//! the canonical choice: its whole-line error obeys a Hoelder-type bound that
//! decays like `epsilon^(1/3)` on compact sets, which the sweep machinery in
//! this module measures empirically.
//!
//! Solvers live behind the [`Extrapolator`] trait so callers pick by name:
//! `"mns"` is the constrained minimum-norm solve (the method whose error law
//! is quoted above), `"tikhonov"` a penalized least-squares baseline.

mod mns;
mod strategy;
mod sweep;
mod tikhonov;

pub use strategy::{by_name, method_names, Extrapolator, MnsExtrapolator, TikhonovExtrapolator};
pub use sweep::{
    noise_seed, run_sweep, trial_seed, SweepCell, SweepParams, SweepReport, SweepSummary,
};
pub use tikhonov::{solve_tikhonov, MuSelection};

use crate::btsignal::{KernelDensity, SignalError};
use crate::numerics::NumericsError;
use crate::pswf::{PswfBasis, PswfError};
use std::sync::Arc;
use thiserror::Error;

/// Errors from problem assembly and the solvers.
#[derive(Debug, Error)]
pub enum ExtrapolateError {
    #[error("need at least 2 observation samples, got {got}")]
    TooFewObservations { got: usize },

    #[error("noise bound epsilon = {0} must be finite and nonnegative")]
    InvalidEpsilon(f64),

    #[error(
        "observation window half-length {obs_t_half} does not match the basis window {basis_t_half}"
    )]
    ParamMismatch { obs_t_half: f64, basis_t_half: f64 },

    #[error("normal matrix lost positive definiteness at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },

    #[error("sweep needs at least one epsilon")]
    EmptyEpsilons,

    #[error("sweep needs at least one trial")]
    ZeroTrials,

    #[error(transparent)]
    Pswf(#[from] PswfError),

    #[error(transparent)]
    Signal(#[from] SignalError),

    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Uniform sampling grid of `n` points spanning `[-t_half, t_half]`.
pub fn uniform_grid(t_half: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| -t_half + 2.0 * t_half * j as f64 / (n - 1) as f64)
        .collect()
}

/// Noisy samples of the unknown signal on a uniform grid over `[-T, T]`.
#[derive(Clone, Debug)]
pub struct ObservationSet {
    t_half: f64,
    times: Vec<f64>,
    values: Vec<f64>,
    epsilon: f64,
}

impl ObservationSet {
    pub fn new(t_half: f64, values: Vec<f64>, epsilon: f64) -> Result<Self, ExtrapolateError> {
        if values.len() < 2 {
            return Err(ExtrapolateError::TooFewObservations { got: values.len() });
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(ExtrapolateError::InvalidEpsilon(epsilon));
        }
        let times = uniform_grid(t_half, values.len());
        Ok(ObservationSet {
            t_half,
            times,
            values,
            epsilon,
        })
    }

    pub fn t_half(&self) -> f64 {
        self.t_half
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The constrained minimum-norm problem:
/// minimize the density norm subject to sup-norm data fidelity.
#[derive(Clone, Debug)]
pub struct MnsProblem {
    basis: Arc<PswfBasis>,
    obs: ObservationSet,
    solver_tol: f64,
    max_iters: usize,
}

impl MnsProblem {
    pub fn new(basis: Arc<PswfBasis>, obs: ObservationSet) -> Result<Self, ExtrapolateError> {
        let basis_t_half = basis.params().t_half();
        if (obs.t_half() - basis_t_half).abs() > 1e-9 {
            return Err(ExtrapolateError::ParamMismatch {
                obs_t_half: obs.t_half(),
                basis_t_half,
            });
        }
        Ok(MnsProblem {
            basis,
            obs,
            solver_tol: 1e-8,
            max_iters: 200_000,
        })
    }

    pub fn with_solver_tol(mut self, tol: f64) -> Self {
        assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
        self.solver_tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn basis(&self) -> &Arc<PswfBasis> {
        &self.basis
    }

    pub fn observations(&self) -> &ObservationSet {
        &self.obs
    }

    pub fn solver_tol(&self) -> f64 {
        self.solver_tol
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    /// Half-width of the feasibility box around each observation. Twice the
    /// noise bound (truth plus noise), with the solver tolerance as a floor
    /// so exact data still leaves the interior nonempty numerically.
    pub fn constraint_slack(&self) -> f64 {
        let slack = 2.0 * self.obs.epsilon();
        if slack > 0.0 {
            slack
        } else {
            self.solver_tol
        }
    }
}

/// A solved extrapolation: the density, its kernel image, and solve stats.
#[derive(Clone, Debug)]
pub struct ExtrapolationResult {
    basis: Arc<PswfBasis>,
    density: KernelDensity,
    residual_inf: f64,
    iterations: usize,
    converged: bool,
}

impl ExtrapolationResult {
    pub(crate) fn new(
        basis: Arc<PswfBasis>,
        density: KernelDensity,
        residual_inf: f64,
        iterations: usize,
        converged: bool,
    ) -> Self {
        ExtrapolationResult {
            basis,
            density,
            residual_inf,
            iterations,
            converged,
        }
    }

    pub fn basis(&self) -> &Arc<PswfBasis> {
        &self.basis
    }

    pub fn density(&self) -> &KernelDensity {
        &self.density
    }

    /// L2 norm of the recovered density over the window.
    pub fn density_norm(&self) -> f64 {
        self.density.norm()
    }

    /// Worst absolute data misfit, `max_j |(K q)(tau_j) - f_j|`.
    pub fn residual_inf(&self) -> f64 {
        self.residual_inf
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Whether the solver met its stopping rule within the iteration budget.
    /// A non-converged result is still the best iterate found, not garbage.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Evaluate the extrapolant anywhere on the line.
    pub fn eval(&self, t: f64) -> f64 {
        self.basis
            .kernel_apply(&self.density, t)
            .expect("density was built on the basis rule")
    }

    pub fn eval_grid(&self, grid: &[f64]) -> Vec<f64> {
        self.basis
            .kernel_apply_grid(&self.density, grid)
            .expect("density was built on the basis rule")
    }
}

/// Pointwise error summary of an extrapolant against the truth on a grid.
#[derive(Clone, Copy, Debug)]
pub struct ErrorMetrics {
    /// `max_t |f~ - f|` over the whole grid.
    pub max_error: f64,
    /// Max over grid points with `|t| <= T` (the observed window).
    pub max_inside: f64,
    /// Max over grid points with `|t| > T` (the extrapolated region);
    /// zero when the grid never leaves the window.
    pub max_outside: f64,
    /// Root mean square error over the whole grid.
    pub rms: f64,
}

/// Compare truth and estimate sample-by-sample on `grid`, splitting the max
/// error at the observation window boundary `t_half`.
pub fn error_metrics(grid: &[f64], f_true: &[f64], f_est: &[f64], t_half: f64) -> ErrorMetrics {
    assert_eq!(grid.len(), f_true.len(), "grid/truth length mismatch");
    assert_eq!(grid.len(), f_est.len(), "grid/estimate length mismatch");
    assert!(!grid.is_empty(), "error metrics need a nonempty grid");
    let mut max_error = 0.0f64;
    let mut max_inside = 0.0f64;
    let mut max_outside = 0.0f64;
    let mut sum_sq = 0.0f64;
    for ((&t, &ft), &fe) in grid.iter().zip(f_true).zip(f_est) {
        let err = (fe - ft).abs();
        max_error = max_error.max(err);
        if t.abs() <= t_half + 1e-12 {
            max_inside = max_inside.max(err);
        } else {
            max_outside = max_outside.max(err);
        }
        sum_sq += err * err;
    }
    ErrorMetrics {
        max_error,
        max_inside,
        max_outside,
        rms: (sum_sq / grid.len() as f64).sqrt(),
    }
}
