//! Run configuration. Every dimensional field carries its unit in the name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use platesoil::coupled_solver::{SolverConfig, SweepConfig};
use platesoil::halfspace::SoilSpec;
use platesoil::plate_modes::{ModeOptions, PlateSpec};
use platesoil::response::{uniform_grid, Fiber, LoadPulse, StrainOptions};
use platesoil::smatrix::{QuadConfig, TailSpec};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateConfig {
    pub youngs_modulus_pa: f64,
    pub poisson_ratio: f64,
    pub density_kg_per_m3: f64,
    pub thickness_m: f64,
    pub radius_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoilConfig {
    pub shear_modulus_pa: f64,
    pub c_l_m_per_s: f64,
    pub c_t_m_per_s: f64,
}

/// Raised-cosine pulse `F0/2 (1 - cos(2 pi t / T0))` on `[0, T0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadConfig {
    pub peak_force_n: f64,
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    /// Number of modes, counting the constant mode when it is included.
    pub count: usize,
    #[serde(default = "yes")]
    pub include_constant: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, untagged)]
pub enum GridConfig {
    /// `count` uniform points from 0 to `omega_max_rad_per_s`.
    Uniform { omega_max_rad_per_s: f64, count: usize },
    Explicit { omegas_rad_per_s: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub total_nodes: Option<usize>,
    pub tail_ratio: usize,
    pub nodes_per_unit: f64,
    pub xi_tail_relative: f64,
    pub xi_tail_absolute_per_m: Option<f64>,
    pub pole_guard: f64,
    pub static_switch_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadConfig::default();
        Self {
            total_nodes: q.total_nodes,
            tail_ratio: q.tail_ratio,
            nodes_per_unit: q.nodes_per_unit,
            xi_tail_relative: q.tail.relative,
            xi_tail_absolute_per_m: q.tail.absolute,
            pole_guard: q.pole_guard,
            static_switch_factor: q.switch_factor,
        }
    }
}

impl QuadratureConfig {
    pub fn to_core(&self) -> QuadConfig {
        QuadConfig {
            total_nodes: self.total_nodes,
            tail_ratio: self.tail_ratio,
            nodes_per_unit: self.nodes_per_unit,
            tail: TailSpec {
                relative: self.xi_tail_relative,
                absolute: self.xi_tail_absolute_per_m,
            },
            pole_guard: self.pole_guard,
            switch_factor: self.static_switch_factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub cond_switch: f64,
    pub rcond: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            cond_switch: s.cond_switch,
            rcond: s.rcond,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    pub start_s: f64,
    pub end_s: f64,
    pub count: usize,
}

impl TimeWindow {
    pub fn samples(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start_s];
        }
        let d = (self.end_s - self.start_s) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start_s + d * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SoilOutputConfig {
    pub radii_m: Vec<f64>,
    pub depths_m: Vec<f64>,
    pub snapshot_times_s: Vec<f64>,
}

impl Default for SoilOutputConfig {
    fn default() -> Self {
        Self {
            radii_m: vec![],
            depths_m: vec![],
            snapshot_times_s: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservablesConfig {
    /// Radii at which deflection and strain are reported.
    pub points_m: Vec<f64>,
    pub strain_fiber: Fiber,
    pub strain_poisson_coupling: bool,
    /// Synthesis times; `None` uses `[-0.1 t_max, t_max]` with the longest alias-free `t_max`.
    pub times: Option<TimeWindow>,
    pub soil: SoilOutputConfig,
}

impl Default for ObservablesConfig {
    fn default() -> Self {
        Self {
            points_m: vec![0.0],
            strain_fiber: Fiber::Bottom,
            strain_poisson_coupling: false,
            times: None,
            soil: SoilOutputConfig::default(),
        }
    }
}

impl ObservablesConfig {
    pub fn strain_options(&self) -> StrainOptions {
        StrainOptions {
            fiber: self.strain_fiber,
            poisson_coupling: self.strain_poisson_coupling,
        }
    }
}

/// Frequencies and reference budget for `convergence-report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    pub omegas_rad_per_s: Vec<f64>,
    pub node_schedule: Vec<usize>,
    /// Reference budget as a multiple of the largest scheduled budget.
    pub reference_factor: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            omegas_rad_per_s: vec![0.0, 1e3],
            node_schedule: vec![40, 80, 120, 160, 240, 320, 480, 640, 960, 1280],
            reference_factor: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub plate: PlateConfig,
    pub soil: SoilConfig,
    pub load: LoadConfig,
    pub modes: ModesConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub observables: ObservablesConfig,
    #[serde(default)]
    pub convergence: ConvergenceConfig,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub deterministic: bool,
}

fn default_output() -> PathBuf {
    PathBuf::from("platesoil-out")
}

fn field(name: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        field: name.to_string(),
        reason: reason.into(),
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(field(name, format!("must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| field("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    /// Checks every field before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.plate;
        positive("plate.youngs_modulus_pa", p.youngs_modulus_pa)?;
        positive("plate.density_kg_per_m3", p.density_kg_per_m3)?;
        positive("plate.thickness_m", p.thickness_m)?;
        positive("plate.radius_m", p.radius_m)?;
        if !(p.poisson_ratio > -1.0 && p.poisson_ratio < 0.5) {
            return Err(field("plate.poisson_ratio", "must lie in (-1, 0.5)"));
        }
        let s = &self.soil;
        positive("soil.shear_modulus_pa", s.shear_modulus_pa)?;
        positive("soil.c_t_m_per_s", s.c_t_m_per_s)?;
        positive("soil.c_l_m_per_s", s.c_l_m_per_s)?;
        if s.c_l_m_per_s <= s.c_t_m_per_s {
            return Err(field("soil.c_l_m_per_s", "must exceed soil.c_t_m_per_s"));
        }
        positive("load.peak_force_n", self.load.peak_force_n)?;
        positive("load.duration_s", self.load.duration_s)?;
        if self.modes.count == 0 {
            return Err(field("modes.count", "at least one mode is required"));
        }
        self.grid()?;
        self.quad().validate().map_err(|e| field("quadrature", e.to_string()))?;
        let sv = &self.solver;
        positive("solver.cond_switch", sv.cond_switch)?;
        if !(sv.rcond > 0.0 && sv.rcond < 1.0) {
            return Err(field("solver.rcond", "must lie in (0, 1)"));
        }
        let o = &self.observables;
        for &r in &o.points_m {
            if !(r >= 0.0 && r <= p.radius_m) {
                return Err(field("observables.points_m", format!("{r} lies outside [0, radius_m]")));
            }
        }
        if let Some(t) = &o.times {
            if t.count == 0 || !(t.end_s >= t.start_s) || !t.start_s.is_finite() || !t.end_s.is_finite() {
                return Err(field("observables.times", "needs count > 0 and finite start_s <= end_s"));
            }
        }
        for &r in &o.soil.radii_m {
            if !(r.is_finite() && r >= 0.0) {
                return Err(field("observables.soil.radii_m", format!("invalid radius {r}")));
            }
        }
        for &z in &o.soil.depths_m {
            if !(z.is_finite() && z >= 0.0) {
                return Err(field("observables.soil.depths_m", format!("invalid depth {z}")));
            }
        }
        let c = &self.convergence;
        if c.node_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(field("convergence.node_schedule", "must be strictly increasing"));
        }
        if c.reference_factor < 2 {
            return Err(field("convergence.reference_factor", "must be at least 2"));
        }
        if c.omegas_rad_per_s.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(field("convergence.omegas_rad_per_s", "must be finite and nonnegative"));
        }
        Ok(())
    }

    pub fn plate_spec(&self) -> PlateSpec {
        let p = &self.plate;
        PlateSpec {
            youngs_modulus: p.youngs_modulus_pa,
            poisson_ratio: p.poisson_ratio,
            density: p.density_kg_per_m3,
            thickness: p.thickness_m,
            radius: p.radius_m,
        }
    }

    pub fn soil_spec(&self) -> SoilSpec {
        SoilSpec {
            shear_modulus: self.soil.shear_modulus_pa,
            c_l: self.soil.c_l_m_per_s,
            c_t: self.soil.c_t_m_per_s,
        }
    }

    pub fn load_pulse(&self) -> LoadPulse {
        LoadPulse {
            f0: self.load.peak_force_n,
            t0: self.load.duration_s,
        }
    }

    pub fn mode_options(&self) -> ModeOptions {
        ModeOptions {
            include_constant: self.modes.include_constant,
            ..Default::default()
        }
    }

    pub fn quad(&self) -> QuadConfig {
        self.quadrature.to_core()
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            quad: self.quad(),
            solver: SolverConfig {
                cond_switch: self.solver.cond_switch,
                rcond: self.solver.rcond,
            },
            load: Some(self.load_pulse()),
            deterministic: self.deterministic,
        }
    }

    /// Sorted, validated frequency grid.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        match &self.grid {
            GridConfig::Uniform {
                omega_max_rad_per_s,
                count,
            } => uniform_grid(*omega_max_rad_per_s, *count).map_err(|e| field("grid", e.to_string())),
            GridConfig::Explicit { omegas_rad_per_s } => {
                if omegas_rad_per_s.is_empty() {
                    return Err(field("grid.omegas_rad_per_s", "must not be empty"));
                }
                if omegas_rad_per_s.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(field("grid.omegas_rad_per_s", "must be finite and nonnegative"));
                }
                if omegas_rad_per_s.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(field("grid.omegas_rad_per_s", "must be strictly increasing"));
                }
                Ok(omegas_rad_per_s.clone())
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sample() -> RunConfig {
        RunConfig {
            plate: PlateConfig {
                youngs_modulus_pa: 70e9,
                poisson_ratio: 0.3,
                density_kg_per_m3: 2700.0,
                thickness_m: 0.0127,
                radius_m: 0.0762,
            },
            soil: SoilConfig {
                shear_modulus_pa: 5e8,
                c_l_m_per_s: 1000.0,
                c_t_m_per_s: 500.0,
            },
            load: LoadConfig {
                peak_force_n: 1000.0,
                duration_s: 2e-4,
            },
            modes: ModesConfig {
                count: 2,
                include_constant: true,
            },
            grid: GridConfig::Uniform {
                omega_max_rad_per_s: 2e3,
                count: 3,
            },
            quadrature: QuadratureConfig::default(),
            solver: SolverSettings::default(),
            observables: ObservablesConfig {
                points_m: vec![0.0, 0.0127],
                times: Some(TimeWindow {
                    start_s: 0.0,
                    end_s: 1e-4,
                    count: 5,
                }),
                soil: SoilOutputConfig {
                    radii_m: vec![0.0, 0.05],
                    depths_m: vec![0.0, 0.1],
                    snapshot_times_s: vec![5e-5],
                },
                ..Default::default()
            },
            convergence: ConvergenceConfig::default(),
            output_dir: PathBuf::from("out"),
            deterministic: true,
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let cfg = sample();
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        let explicit = RunConfig {
            grid: GridConfig::Explicit {
                omegas_rad_per_s: vec![0.0, 10.0, 20.0],
            },
            quadrature: QuadratureConfig {
                total_nodes: Some(400),
                xi_tail_absolute_per_m: Some(3000.0),
                ..Default::default()
            },
            ..cfg
        };
        assert_eq!(RunConfig::from_json(&explicit.to_json()).unwrap(), explicit);
    }

    #[test]
    fn minimal_document_uses_defaults() {
        let text = r#"{
            "plate": {"youngs_modulus_pa": 7e10, "poisson_ratio": 0.3, "density_kg_per_m3": 2700,
                      "thickness_m": 0.0127, "radius_m": 0.0762},
            "soil": {"shear_modulus_pa": 5e8, "c_l_m_per_s": 1000, "c_t_m_per_s": 500},
            "load": {"peak_force_n": 1000, "duration_s": 2e-4},
            "modes": {"count": 4},
            "grid": {"omega_max_rad_per_s": 1e4, "count": 11}
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert!(cfg.modes.include_constant);
        assert_eq!(cfg.quad(), QuadConfig::default());
        assert_eq!(cfg.grid().unwrap().len(), 11);
    }

    #[test]
    fn validation_names_the_field() {
        let mut cfg = sample();
        cfg.plate.radius_m = -1.0;
        match cfg.validate() {
            Err(CliError::Config { field, .. }) => assert_eq!(field, "plate.radius_m"),
            other => panic!("{other:?}"),
        }
        let mut cfg = sample();
        cfg.soil.c_l_m_per_s = 100.0;
        assert!(matches!(cfg.validate(), Err(CliError::Config { field, .. }) if field == "soil.c_l_m_per_s"));
        let mut cfg = sample();
        cfg.observables.points_m = vec![1.0];
        assert!(cfg.validate().is_err());
        let mut cfg = sample();
        cfg.grid = GridConfig::Explicit {
            omegas_rad_per_s: vec![10.0, 5.0],
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        v["plate"]["radius_mm"] = serde_json::json!(76.2);
        assert!(RunConfig::from_json(&v.to_string()).is_err());
    }
}
