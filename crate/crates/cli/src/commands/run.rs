use log::{info, warn};
use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use platesoil::response::soil::SoilField;
use platesoil::response::synthesis::max_step_for;
use platesoil::response::{synthesize_time, synthesize_time_two_sided, Observable, ResponseField};
use platesoil::Complex;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::manifest::{FrequencyDiagnostics, RunManifest, Timer};
use crate::output::{Cell, OutputDir};

use super::basis::{basis_rows, BASIS_HEADER};
use super::{build_basis, sweep};

pub struct RunOutcome {
    pub manifest: RunManifest,
    pub field: ResponseField,
}

/// Largest alias-free window `[-0.1 t_max, t_max]` for the grid, 501 samples.
pub fn default_times(grid: &[f64]) -> Vec<f64> {
    let step = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let t_max = std::f64::consts::PI / (4.0 * step);
    debug_assert!((max_step_for(t_max) - step).abs() <= 1e-12 * step);
    let (t0, n) = (-0.1 * t_max, 501);
    let d = (t_max - t0) / (n - 1) as f64;
    (0..n).map(|i| t0 + d * i as f64).collect()
}

#[derive(Serialize)]
struct IndexEntry<'a> {
    index: usize,
    omega_rad_per_s: f64,
    file: &'a str,
}

fn complex_rows(x: &[f64], z: &[Complex]) -> Vec<Vec<Cell>> {
    x.iter().zip(z).map(|(&w, v)| vec![w.into(), v.re.into(), v.im.into()]).collect()
}

/// Mode construction, sweep, observables, and every output file.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let plate = cfg.plate_spec();
    let soil = cfg.soil_spec();
    let mut timer = Timer::default();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut manifest = RunManifest::new("run", cfg, serde_json::Value::Null);

    let basis = timer.time("modes", || build_basis(&plate, cfg.modes.count, cfg.mode_options()))?;
    out.write_csv("basis.csv", "free-edge mode basis", &BASIS_HEADER, &basis_rows(&basis))?;

    let solutions = timer.time("sweep", || sweep(cfg, &basis, &soil, &grid))?;
    info!("sweep finished: {} frequencies", solutions.len());
    manifest.diagnostics = solutions.iter().map(FrequencyDiagnostics::from).collect();
    let field = ResponseField::new(basis, &solutions);

    let mut index = Vec::with_capacity(grid.len());
    let names: Vec<String> = (0..grid.len()).map(|i| format!("coefficients/omega_{i:05}.csv")).collect();
    for (i, (&w, name)) in grid.iter().zip(&names).enumerate() {
        let a = &field.coefficients[i];
        let b = &field.traction[i];
        let rows: Vec<Vec<Cell>> = (0..a.len())
            .map(|n| vec![n.into(), a[n].re.into(), a[n].im.into(), b[n].re.into(), b[n].im.into()])
            .collect();
        out.write_csv(
            name,
            &format!("modal coefficients at omega = {w:e} rad/s"),
            &["n", "a_re", "a_im", "b_re", "b_im"],
            &rows,
        )?;
        index.push(IndexEntry {
            index: i,
            omega_rad_per_s: w,
            file: name,
        });
    }
    out.write_bytes(
        "coefficients/index.json",
        "frequency index of the coefficient files",
        serde_json::to_string_pretty(&index).expect("index is serializable").as_bytes(),
    )?;

    let energy: Vec<Vec<Cell>> = grid
        .iter()
        .zip(&solutions)
        .map(|(&w, s)| {
            let k = field.kinetic_energy(w)?;
            Ok(vec![w.into(), k.into(), s.diagnostics.power_input.into()])
        })
        .collect::<Result<_, CliError>>()?;
    out.write_csv(
        "energy.csv",
        "kinetic energy spectrum and power input",
        &["omega_rad_per_s", "kinetic_energy_j", "power_input_w"],
        &energy,
    )?;

    let times = match &cfg.observables.times {
        Some(t) => Some(t.samples()),
        None if grid.len() >= 2 => Some(default_times(&grid)),
        None => None,
    };
    timer.time("observables", || -> Result<(), CliError> {
        let opts = cfg.observables.strain_options();
        for (i, &r) in cfg.observables.points_m.iter().enumerate() {
            for (name, obs, unit) in [
                ("deflection", Observable::Deflection { r }, "m"),
                ("strain", Observable::Strain { r, options: opts }, "strain"),
            ] {
                let spec = field.spectrum(obs)?;
                out.write_csv(
                    &format!("spectra/{name}_p{i}.csv"),
                    &format!("{name} spectrum at r = {r} m"),
                    &["omega_rad_per_s", "re", "im"],
                    &complex_rows(&grid, &spec),
                )?;
                match &times {
                    Some(t) => {
                        let v = synthesize_time(&grid, &spec, t)?;
                        out.write_series(
                            &format!("time/{name}_p{i}.csv"),
                            &format!("{name} [{unit}] at r = {r} m"),
                            ["t_s", "value"],
                            t,
                            &v,
                        )?;
                    }
                    None => warn!("single-frequency grid: no time series for {name} at r = {r} m"),
                }
            }
        }
        Ok(())
    })?;

    let so = &cfg.observables.soil;
    if !so.radii_m.is_empty() && !so.depths_m.is_empty() && !so.snapshot_times_s.is_empty() {
        timer.time("soil", || -> Result<(), CliError> {
            let points: Vec<(f64, f64)> = so
                .depths_m
                .iter()
                .flat_map(|&z| so.radii_m.iter().map(move |&r| (r, z)))
                .collect();
            let quad = cfg.quad();
            let per_omega = |(&w, b): (&f64, &DVector<Complex>)| -> Result<Vec<Complex>, CliError> {
                let f = SoilField::new(b, &field.basis, &soil, w, &quad)?;
                points.iter().map(|&(r, z)| Ok(f.at(r, z)?)).collect()
            };
            let pairs: Vec<_> = grid.iter().zip(&field.traction).collect();
            let by_omega: Vec<Vec<Complex>> = if cfg.deterministic {
                pairs.into_iter().map(per_omega).collect::<Result<_, _>>()?
            } else {
                pairs.into_par_iter().map(per_omega).collect::<Result<_, _>>()?
            };
            let mut rows = Vec::new();
            let mut signals = Vec::with_capacity(points.len());
            for p in 0..points.len() {
                let spec: Vec<Complex> = by_omega.iter().map(|v| v[p]).collect();
                signals.push(synthesize_time_two_sided(&grid, &spec, &so.snapshot_times_s)?);
            }
            for (k, &t) in so.snapshot_times_s.iter().enumerate() {
                for (p, &(r, z)) in points.iter().enumerate() {
                    let (re, im) = signals[p][k];
                    rows.push(vec![t.into(), r.into(), z.into(), re.into(), im.into()]);
                }
            }
            out.write_csv(
                "soil_snapshots.csv",
                "vertical soil displacement at snapshot times",
                &["t_s", "r_m", "z_m", "re", "im"],
                &rows,
            )
        })?;
    }

    let manifest = manifest.finish(&out, timer)?;
    Ok(RunOutcome { manifest, field })
}
