use log::info;
use rayon::prelude::*;
use serde::Serialize;

use platesoil::smatrix::{assemble_at, frobenius_norm};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::manifest::{RunManifest, Timer};
use crate::output::{Cell, OutputDir};

use super::build_basis;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub omega_rad_per_s: f64,
    pub total_nodes: usize,
    pub reference_nodes: usize,
    pub static_path: bool,
    /// `||S_N - S_ref||_F`.
    pub error_abs: f64,
    /// `||S_N - S_ref||_F / ||S_ref||_F`.
    pub error_rel: f64,
    pub rho_min: f64,
    pub xi_tail_per_m: f64,
}

/// Frobenius error of `S` against a reference at `reference_factor` times the largest budget.
pub fn convergence_report(
    cfg: &RunConfig,
    schedule: &[usize],
    omegas: &[f64],
) -> Result<(RunManifest, Vec<ConvergenceRow>), CliError> {
    cfg.validate()?;
    if schedule.is_empty() || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("node schedule must be nonempty and strictly increasing".into()));
    }
    if omegas.is_empty() || omegas.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(CliError::Usage("frequencies must be nonempty, finite and nonnegative".into()));
    }
    let mut timer = Timer::default();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let reference_nodes = schedule[schedule.len() - 1] * cfg.convergence.reference_factor;
    let manifest = RunManifest::new(
        "convergence-report",
        cfg,
        serde_json::json!({
            "node_schedule": schedule,
            "omegas_rad_per_s": omegas,
            "reference_nodes": reference_nodes,
        }),
    );
    let soil = cfg.soil_spec();
    let basis = timer.time("modes", || build_basis(&cfg.plate_spec(), cfg.modes.count, cfg.mode_options()))?;
    let quad = cfg.quad();

    let per_omega = |&w: &f64| -> Result<Vec<ConvergenceRow>, CliError> {
        let reference = assemble_at(&basis, &soil, w, &quad.with_total_nodes(reference_nodes))?;
        let norm = frobenius_norm(&reference.entries);
        schedule
            .iter()
            .map(|&n| {
                let s = assemble_at(&basis, &soil, w, &quad.with_total_nodes(n))?;
                let err = frobenius_norm(&(&s.entries - &reference.entries));
                Ok(ConvergenceRow {
                    omega_rad_per_s: w,
                    total_nodes: n,
                    reference_nodes,
                    static_path: s.meta.is_static,
                    error_abs: err,
                    error_rel: err / norm,
                    rho_min: s.meta.rho.iter().copied().fold(f64::INFINITY, f64::min),
                    xi_tail_per_m: s.meta.xi_tail,
                })
            })
            .collect()
    };
    let rows: Vec<ConvergenceRow> = timer.time("assembly", || -> Result<_, CliError> {
        let nested: Vec<Vec<ConvergenceRow>> = if cfg.deterministic {
            omegas.iter().map(per_omega).collect::<Result<_, _>>()?
        } else {
            omegas.par_iter().map(per_omega).collect::<Result<_, _>>()?
        };
        Ok(nested.into_iter().flatten().collect())
    })?;
    info!("convergence report: {} rows", rows.len());

    let csv: Vec<Vec<Cell>> = rows
        .iter()
        .map(|r| {
            vec![
                r.omega_rad_per_s.into(),
                r.total_nodes.into(),
                r.reference_nodes.into(),
                Cell::Int(r.static_path as i64),
                r.error_abs.into(),
                r.error_rel.into(),
                r.rho_min.into(),
                r.xi_tail_per_m.into(),
            ]
        })
        .collect();
    out.write_csv(
        "convergence.csv",
        "S-matrix error against the reference budget",
        &[
            "omega_rad_per_s",
            "total_nodes",
            "reference_nodes",
            "static_path",
            "error_abs",
            "error_rel",
            "rho_min",
            "xi_tail_per_m",
        ],
        &csv,
    )?;
    Ok((manifest.finish(&out, timer)?, rows))
}
