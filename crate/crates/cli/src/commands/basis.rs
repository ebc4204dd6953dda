use crate::config::RunConfig;
use crate::error::CliError;
use crate::manifest::{RunManifest, Timer};
use crate::output::{Cell, OutputDir};

use super::build_basis;

pub const BASIS_HEADER: [&str; 5] = ["n", "lambda_per_m", "a1", "a2_scaled", "norm"];

pub(crate) fn basis_rows(basis: &platesoil::plate_modes::ModeBasis) -> Vec<Vec<Cell>> {
    basis
        .modes
        .iter()
        .map(|m| {
            vec![
                Cell::from(m.index),
                Cell::from(m.lambda),
                Cell::from(m.a1),
                Cell::from(m.a2_scaled),
                Cell::from(m.norm),
            ]
        })
        .collect()
}

/// Writes `basis.csv` and a manifest.
pub fn dump_basis(cfg: &RunConfig) -> Result<RunManifest, CliError> {
    cfg.validate()?;
    let mut timer = Timer::default();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let manifest = RunManifest::new("dump-basis", cfg, serde_json::Value::Null);
    let basis = timer.time("modes", || build_basis(&cfg.plate_spec(), cfg.modes.count, cfg.mode_options()))?;
    out.write_csv("basis.csv", "free-edge mode basis", &BASIS_HEADER, &basis_rows(&basis))?;
    manifest.finish(&out, timer)
}
