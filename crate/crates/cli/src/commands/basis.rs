//! `btlimit basis`: build the basis (with the resolution stability check)
//! and export it as a reloadable bundle plus a quick-look plot.

use crate::config::ExperimentConfig;
use crate::{svg, CliError};
use btlimit_core::pswf::{build_basis_checked, export_bundle, BandParams};
use std::fs;
use std::path::Path;

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<(), CliError> {
    let params = BandParams::new(cfg.omega, cfg.t_half)?;
    let basis = build_basis_checked(params, cfg.basis_count, cfg.resolution)?;

    let comment = cfg.provenance_comment();
    let (eig_path, nodes_path) = export_bundle(&basis, out, "basis")?;
    super::prepend_comment(&eig_path, &comment)?;
    super::prepend_comment(&nodes_path, &comment)?;

    let grid = cfg.eval_grid();
    let shown = cfg.basis_count.min(4);
    let values: Vec<Vec<f64>> = (0..shown)
        .map(|k| {
            grid.iter()
                .map(|&t| basis.eval_phi(k, t).expect("index below count"))
                .collect()
        })
        .collect();
    let labels: Vec<String> = (0..shown).map(|k| format!("phi_{k}")).collect();
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let series: Vec<svg::Series> = values
        .iter()
        .enumerate()
        .map(|(k, ys)| svg::Series {
            label: &labels[k],
            xs: &grid,
            ys,
            color: colors[k % colors.len()],
        })
        .collect();
    let plot_path = out.join("basis_plot.svg");
    fs::write(
        &plot_path,
        svg::line_plot("basis functions", "t", "phi_k(t)", &series),
    )?;

    println!(
        "basis: omega={} t_half={} count={} resolution={}",
        cfg.omega,
        cfg.t_half,
        basis.count(),
        basis.resolution()
    );
    for (k, &lambda) in basis.eigenvalues().iter().enumerate() {
        println!("lambda_{k} = {lambda:e}");
    }
    println!("wrote {}", eig_path.display());
    println!("wrote {}", nodes_path.display());
    println!("wrote {}", plot_path.display());
    Ok(())
}
