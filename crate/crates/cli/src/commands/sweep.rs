//! `btlimit sweep`: rerun the extrapolation experiment over a grid of noise
//! bounds and trials, then report how the worst-case error scales.
//!
//! The headline statistic is R = max_error / epsilon^(1/3) per cell. If the
//! cube-root error law holds, the per-epsilon mean of R is flat across the
//! sweep; the run prints the max and median of those means side by side.

use crate::config::ExperimentConfig;
use crate::{svg, CliError};
use btlimit_core::extrapolate::{run_sweep, Extrapolator, SweepParams};
use btlimit_core::pswf::{build_basis, BandParams};
use std::fs;
use std::path::Path;
use std::sync::Arc;

pub fn run(cfg: &ExperimentConfig, solver: &dyn Extrapolator, out: &Path) -> Result<(), CliError> {
    if cfg.epsilons.len() < 2 {
        return Err(CliError::Usage(format!(
            "a sweep needs at least two epsilons to show a trend, got {}",
            cfg.epsilons.len()
        )));
    }
    let params = BandParams::new(cfg.omega, cfg.t_half)?;
    let basis = Arc::new(build_basis(params, cfg.basis_count, cfg.resolution)?);
    let grid = cfg.eval_grid();
    let sweep_params = SweepParams {
        n_obs: cfg.n_obs,
        epsilons: cfg.epsilons.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        smoothness: cfg.smoothness,
    };
    let report = run_sweep(&basis, &grid, &sweep_params, solver)?;

    let comment = cfg.provenance_comment();
    let cells_path = out.join("sweep_cells.csv");
    fs::write(&cells_path, format!("# {comment}\n{}", report.to_csv()))?;
    let summary_path = out.join("sweep_summary.csv");
    fs::write(&summary_path, format!("# {comment}\n{}", report.summary_csv()))?;

    // Log-log plot of mean max error against epsilon, with a slope-1/3
    // reference anchored at the first epsilon that has converged trials.
    let log_eps: Vec<f64> = report.summaries.iter().map(|s| s.epsilon.ln()).collect();
    let log_err: Vec<f64> = report
        .summaries
        .iter()
        .map(|s| s.mean_max_error.ln())
        .collect();
    let mut series = vec![svg::Series {
        label: "ln mean max error",
        xs: &log_eps,
        ys: &log_err,
        color: "#1f77b4",
    }];
    let anchor = report
        .summaries
        .iter()
        .position(|s| s.converged > 0 && s.mean_max_error.is_finite());
    let reference: Vec<f64>;
    if let Some(i0) = anchor {
        reference = log_eps
            .iter()
            .map(|&le| log_err[i0] + (le - log_eps[i0]) / 3.0)
            .collect();
        series.push(svg::Series {
            label: "slope 1/3 reference",
            xs: &log_eps,
            ys: &reference,
            color: "#d62728",
        });
    }
    let plot_path = out.join("sweep_plot.svg");
    fs::write(
        &plot_path,
        svg::line_plot("error vs noise bound", "ln epsilon", "ln error", &series),
    )?;

    println!(
        "sweep: method={} epsilons={} trials={} n_obs={} seed={}",
        solver.name(),
        cfg.epsilons.len(),
        cfg.trials,
        cfg.n_obs,
        cfg.seed
    );
    for s in &report.summaries {
        println!(
            "epsilon={} converged={}/{} mean_max_error={:e} mean_ratio={:.4}",
            s.epsilon, s.converged, s.trials, s.mean_max_error, s.mean_ratio
        );
    }
    println!(
        "ratio band: max={:.4} median={:.4} (flat R = max_error/epsilon^(1/3) backs the cube-root law)",
        report.max_mean_ratio(),
        report.median_mean_ratio()
    );
    for p in [&cells_path, &summary_path, &plot_path] {
        println!("wrote {}", p.display());
    }

    let failed = report.failure_fraction();
    if failed > 0.1 {
        return Err(CliError::Solver(format!(
            "{:.0}% of sweep cells failed to converge; see {}",
            100.0 * failed,
            cells_path.display()
        )));
    }
    Ok(())
}
