use log::info;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use platesoil::coupled_solver::{ModalSolution, SweepContext};
use platesoil::response::{synthesize_time, Observable, ResponseField};
use platesoil::smatrix::{assemble_at, relative_difference};
use platesoil::Complex;

use crate::config::RunConfig;
use crate::error::{CliError, FrequencyFailure};
use crate::manifest::{RunManifest, Timer};
use crate::output::{Cell, OutputDir};

use super::{build_basis, default_times};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareOptions {
    pub radii_m: Vec<f64>,
    /// Scale the mode count with `R` so `lambda_max` matches the configured plate.
    /// The S comparison always uses the first `modes.count` modes.
    pub scale_modes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusResult {
    pub radius_m: f64,
    pub modes: usize,
    pub center_displacement_m: Vec<f64>,
    pub peak_abs_m: f64,
    pub peak_time_s: f64,
    /// `max_t |w_R(t) - w_Rmax(t)|` against the largest radius.
    pub deviation_from_largest_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDifference {
    pub radius_a_m: f64,
    pub radius_b_m: f64,
    /// `||S_b - S_a|| / ||S_a||` of the normalized matrices per grid frequency, `a` the smaller radius.
    pub relative_difference: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub grid: Vec<f64>,
    pub times: Vec<f64>,
    pub radii: Vec<RadiusResult>,
    pub pairs: Vec<PairDifference>,
}

struct RadiusSweep {
    normalized: Vec<DMatrix<Complex>>,
    field: ResponseField,
}

fn sweep_radius(cfg: &RunConfig, radius: f64, modes: usize, grid: &[f64]) -> Result<RadiusSweep, CliError> {
    let plate = cfg.plate_spec().with_radius(radius);
    let soil = cfg.soil_spec();
    let basis = build_basis(&plate, modes, cfg.mode_options())?;
    let ctx = SweepContext::new(&basis, &soil);
    let sweep_cfg = cfg.sweep_config();
    let n = cfg.modes.count;
    let one = |&w: &f64| -> Result<(DMatrix<Complex>, ModalSolution), platesoil::Error> {
        let s = assemble_at(&basis, &soil, w, &sweep_cfg.quad)?;
        let norm = s.normalized(&ctx.gram)?.view((0, 0), (n, n)).into_owned();
        Ok((norm, ctx.solve_with(&s, &sweep_cfg)?))
    };
    let outcomes: Vec<_> = if cfg.deterministic {
        grid.iter().map(one).collect()
    } else {
        grid.par_iter().map(one).collect()
    };
    let mut normalized = Vec::with_capacity(grid.len());
    let mut solutions = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for (&w, r) in grid.iter().zip(outcomes) {
        match r {
            Ok((m, s)) => {
                normalized.push(m);
                solutions.push(s);
            }
            Err(e) => failures.push(FrequencyFailure {
                omega_rad_per_s: w,
                reason: format!("R = {radius} m: {e}"),
            }),
        }
    }
    if !failures.is_empty() {
        return Err(CliError::Sweep {
            total: grid.len(),
            failures,
        });
    }
    Ok(RadiusSweep {
        normalized,
        field: ResponseField::new(basis, &solutions),
    })
}

/// S-matrix differences and center-displacement overlays across plate radii.
pub fn compare_radii(cfg: &RunConfig, opts: &CompareOptions) -> Result<(RunManifest, CompareReport), CliError> {
    cfg.validate()?;
    let radii = &opts.radii_m;
    if radii.len() < 2 {
        return Err(CliError::Usage("compare-radii needs at least two radii".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(CliError::Usage(format!("invalid radius {r}")));
    }
    let grid = cfg.grid()?;
    if grid.len() < 2 {
        return Err(CliError::Usage("compare-radii needs at least two frequencies".into()));
    }
    let times = match &cfg.observables.times {
        Some(t) => t.samples(),
        None => default_times(&grid),
    };
    let mut timer = Timer::default();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let manifest = RunManifest::new("compare-radii", cfg, serde_json::to_value(opts).expect("serializable"));

    let base_r = cfg.plate.radius_m;
    let n = cfg.modes.count;
    let sweeps: Vec<RadiusSweep> = timer.time("sweeps", || {
        radii
            .iter()
            .map(|&r| {
                let modes = if opts.scale_modes {
                    ((n as f64) * r / base_r).ceil().max(n as f64) as usize
                } else {
                    n
                };
                info!("compare-radii: R = {r} m with {modes} modes");
                sweep_radius(cfg, r, modes, &grid)
            })
            .collect::<Result<_, _>>()
    })?;

    let mut pairs = Vec::new();
    for i in 0..radii.len() {
        for j in i + 1..radii.len() {
            // a is the smaller radius and serves as the reference
            let (a, b) = if radii[i] <= radii[j] { (i, j) } else { (j, i) };
            let d = sweeps[a]
                .normalized
                .iter()
                .zip(&sweeps[b].normalized)
                .map(|(x, y)| relative_difference(y, x))
                .collect::<Result<Vec<_>, _>>()?;
            pairs.push(PairDifference {
                radius_a_m: radii[a],
                radius_b_m: radii[b],
                relative_difference: d,
            });
        }
    }

    let centers: Vec<Vec<f64>> = timer.time("synthesis", || {
        sweeps
            .iter()
            .map(|s| {
                let spec = s.field.spectrum(Observable::Deflection { r: 0.0 })?;
                Ok(synthesize_time(&grid, &spec, &times)?)
            })
            .collect::<Result<_, CliError>>()
    })?;
    let largest = (0..radii.len())
        .max_by(|&a, &b| radii[a].total_cmp(&radii[b]))
        .expect("at least two radii");
    let results: Vec<RadiusResult> = radii
        .iter()
        .zip(&sweeps)
        .zip(&centers)
        .map(|((&r, s), w)| {
            let (k, peak) = w
                .iter()
                .map(|v| v.abs())
                .enumerate()
                .fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
            let dev = w
                .iter()
                .zip(&centers[largest])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            RadiusResult {
                radius_m: r,
                modes: s.field.basis.len(),
                center_displacement_m: w.clone(),
                peak_abs_m: peak,
                peak_time_s: times[k],
                deviation_from_largest_m: dev,
            }
        })
        .collect();

    let mut rows = Vec::new();
    for p in &pairs {
        for (&w, &d) in grid.iter().zip(&p.relative_difference) {
            rows.push(vec![w.into(), p.radius_a_m.into(), p.radius_b_m.into(), d.into()]);
        }
    }
    out.write_csv(
        "s_difference.csv",
        "relative Frobenius difference of normalized S matrices",
        &["omega_rad_per_s", "radius_a_m", "radius_b_m", "relative_difference"],
        &rows,
    )?;
    let mut rows = Vec::new();
    for r in &results {
        for (&t, &w) in times.iter().zip(&r.center_displacement_m) {
            rows.push(vec![r.radius_m.into(), t.into(), w.into()]);
        }
    }
    out.write_csv(
        "center_displacement.csv",
        "center deflection overlays",
        &["radius_m", "t_s", "w_m"],
        &rows,
    )?;
    let rows: Vec<Vec<Cell>> = results
        .iter()
        .map(|r| {
            vec![
                r.radius_m.into(),
                r.modes.into(),
                r.peak_abs_m.into(),
                r.peak_time_s.into(),
                r.deviation_from_largest_m.into(),
            ]
        })
        .collect();
    out.write_csv(
        "radius_summary.csv",
        "per-radius peak and deviation from the largest radius",
        &["radius_m", "modes", "peak_abs_m", "peak_time_s", "deviation_from_largest_m"],
        &rows,
    )?;
    let report = CompareReport {
        grid,
        times,
        radii: results,
        pairs,
    };
    Ok((manifest.finish(&out, timer)?, report))
}
