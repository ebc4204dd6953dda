//! JSON run manifest: config echo, timings, per-frequency diagnostics, file index.

use std::time::Instant;

use serde::Serialize;

use platesoil::coupled_solver::{ModalSolution, SolverMethod};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{FileEntry, OutputDir};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// Records wall time per stage.
#[derive(Debug, Default)]
pub struct Timer {
    stages: Vec<StageTiming>,
}

impl Timer {
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.stages.push(StageTiming {
            stage: stage.to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    pub fn into_stages(self) -> Vec<StageTiming> {
        self.stages
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyDiagnostics {
    pub omega_rad_per_s: f64,
    pub static_path: bool,
    pub node_counts: Vec<usize>,
    pub xi_tail_per_m: f64,
    pub rho: Vec<f64>,
    pub tail_estimate: f64,
    pub asymmetry: f64,
    pub static_min_eigenvalue: Option<f64>,
    pub c_method: SolverMethod,
    pub c_condition: f64,
    pub c_rank: usize,
    pub c_residual: f64,
    pub k_method: SolverMethod,
    pub k_condition: f64,
    pub k_rank: usize,
    pub k_residual: f64,
    pub power_input_w: f64,
}

impl From<&ModalSolution> for FrequencyDiagnostics {
    fn from(s: &ModalSolution) -> Self {
        let d = &s.diagnostics;
        Self {
            omega_rad_per_s: s.omega,
            static_path: d.smatrix.is_static,
            node_counts: d.smatrix.node_counts.clone(),
            xi_tail_per_m: d.smatrix.xi_tail,
            rho: d.smatrix.rho.clone(),
            tail_estimate: d.smatrix.tail_estimate,
            asymmetry: d.smatrix.asymmetry,
            static_min_eigenvalue: d.smatrix.static_min_eigenvalue,
            c_method: d.c_solve.method,
            c_condition: d.c_solve.condition,
            c_rank: d.c_solve.rank,
            c_residual: d.c_solve.residual,
            k_method: d.k_solve.method,
            k_condition: d.k_solve.condition,
            k_rank: d.k_solve.rank,
            k_residual: d.k_solve.residual,
            power_input_w: d.power_input,
        }
    }
}

/// Ranges over the sweep, for a quick look without scanning every frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticSummary {
    pub rho_min: f64,
    pub rho_max: f64,
    pub condition_max: f64,
    pub residual_max: f64,
    pub least_squares_count: usize,
    pub negative_power_count: usize,
}

impl DiagnosticSummary {
    pub fn from_rows(rows: &[FrequencyDiagnostics]) -> Option<Self> {
        if rows.is_empty() {
            return None;
        }
        let rho = rows.iter().flat_map(|r| r.rho.iter().copied());
        let (rho_min, rho_max) = rho.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        Some(Self {
            rho_min,
            rho_max,
            condition_max: rows
                .iter()
                .flat_map(|r| [r.c_condition, r.k_condition])
                .filter(|c| !c.is_nan())
                .fold(0.0, f64::max),
            residual_max: rows.iter().flat_map(|r| [r.c_residual, r.k_residual]).fold(0.0, f64::max),
            least_squares_count: rows
                .iter()
                .filter(|r| r.c_method == SolverMethod::LeastSquares || r.k_method == SolverMethod::LeastSquares)
                .count(),
            negative_power_count: rows.iter().filter(|r| r.power_input_w < 0.0).count(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub software: String,
    pub version: String,
    pub config: RunConfig,
    /// Command-specific settings not in the config (schedules, radii).
    pub arguments: serde_json::Value,
    pub timings: Vec<StageTiming>,
    pub summary: Option<DiagnosticSummary>,
    pub diagnostics: Vec<FrequencyDiagnostics>,
    pub files: Vec<FileEntry>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig, arguments: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            software: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            arguments,
            timings: Vec::new(),
            summary: None,
            diagnostics: Vec::new(),
            files: Vec::new(),
        }
    }

    /// Writes the manifest last, after every file it indexes.
    pub fn finish(mut self, out: &OutputDir, timer: Timer) -> Result<Self, CliError> {
        self.timings = timer.into_stages();
        self.summary = DiagnosticSummary::from_rows(&self.diagnostics);
        self.files = out.files().to_vec();
        let text = serde_json::to_string_pretty(&self).expect("manifest is serializable");
        crate::output::write_atomic(&out.root().join(MANIFEST_NAME), text.as_bytes())?;
        Ok(self)
    }
}
