mod basis;
mod compare;
mod convergence;
mod run;

pub use basis::dump_basis;
pub use compare::{compare_radii, CompareOptions, CompareReport, RadiusResult};
pub use convergence::{convergence_report, ConvergenceRow};
pub use run::{default_times, run, RunOutcome};

use log::info;
use platesoil::coupled_solver::{frequency_sweep_partial, ModalSolution};
use platesoil::halfspace::SoilSpec;
use platesoil::plate_modes::{find_modes_with, ModeBasis, ModeOptions, PlateSpec};

use crate::config::RunConfig;
use crate::error::{CliError, FrequencyFailure};

pub(crate) fn build_basis(plate: &PlateSpec, count: usize, opts: ModeOptions) -> Result<ModeBasis, CliError> {
    let basis = find_modes_with(plate, count, opts)?;
    info!(
        "{} modes for R = {} m, lambda_max R = {:.3}",
        basis.len(),
        plate.radius,
        basis.max_lambda() * plate.radius
    );
    Ok(basis)
}

/// Sweeps the grid and reports every failed frequency together.
pub(crate) fn sweep(
    cfg: &RunConfig,
    basis: &ModeBasis,
    soil: &SoilSpec,
    grid: &[f64],
) -> Result<Vec<ModalSolution>, CliError> {
    let outcomes = frequency_sweep_partial(basis, soil, grid, &cfg.sweep_config());
    let mut ok = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for (&w, r) in grid.iter().zip(outcomes) {
        match r {
            Ok(s) => ok.push(s),
            Err(e) => failures.push(FrequencyFailure {
                omega_rad_per_s: w,
                reason: e.to_string(),
            }),
        }
    }
    if failures.is_empty() {
        Ok(ok)
    } else {
        Err(CliError::Sweep {
            total: grid.len(),
            failures,
        })
    }
}
