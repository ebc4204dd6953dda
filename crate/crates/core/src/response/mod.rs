//! Observables built from the modal coefficients: deflection, radial strain,
//! kinetic energy, time signals and the soil field.

mod load;
pub mod soil;
pub mod synthesis;

pub use load::LoadPulse;
pub use soil::{soil_field, soil_field_at, soil_field_static, SoilField};
pub use synthesis::{synthesize_time, synthesize_time_two_sided, uniform_grid};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::coupled_solver::ModalSolution;
use crate::error::{invalid, Error, Result};
use crate::halfspace::SoilSpec;
use crate::plate_modes::{gram_matrix, ModeBasis};
use crate::smatrix::QuadConfig;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiber {
    /// `z = -h/2`.
    #[default]
    Bottom,
    /// `z = +h/2`.
    Top,
}

/// Strain definition: `eps_r = -z w_rr`, optionally `-z (w_rr + nu w_r / r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct StrainOptions {
    pub fiber: Fiber,
    pub poisson_coupling: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Observable {
    Deflection { r: f64 },
    Strain { r: f64, options: StrainOptions },
}

/// Modal coefficients over a frequency grid plus the basis they refer to.
#[derive(Debug, Clone)]
pub struct ResponseField {
    pub basis: ModeBasis,
    pub gram: DMatrix<f64>,
    pub grid: Vec<f64>,
    pub coefficients: Vec<DVector<Complex>>,
    /// Traction coefficients `b_k = sum_n a_n C_nk`, per frequency.
    pub traction: Vec<DVector<Complex>>,
}

impl ResponseField {
    pub fn new(basis: ModeBasis, solutions: &[ModalSolution]) -> Self {
        let gram = gram_matrix(&basis);
        Self {
            gram,
            grid: solutions.iter().map(|s| s.omega).collect(),
            coefficients: solutions.iter().map(|s| s.a.clone()).collect(),
            traction: solutions.iter().map(|s| s.traction_coefficients()).collect(),
            basis,
        }
    }

    /// Field from raw coefficients (no traction data).
    pub fn from_coefficients(basis: ModeBasis, grid: Vec<f64>, coefficients: Vec<DVector<Complex>>) -> Result<Self> {
        if grid.len() != coefficients.len() {
            return Err(Error::Dimension("grid and coefficient counts differ".into()));
        }
        if coefficients.iter().any(|a| a.len() != basis.len()) {
            return Err(Error::Dimension("coefficient length differs from basis size".into()));
        }
        let n = basis.len();
        Ok(Self {
            gram: gram_matrix(&basis),
            traction: vec![DVector::zeros(n); grid.len()],
            grid,
            coefficients,
            basis,
        })
    }

    pub fn index_of(&self, omega: f64) -> Result<usize> {
        self.grid
            .iter()
            .position(|&w| (w - omega).abs() <= 1e-12 * w.abs().max(1.0))
            .ok_or(Error::OffGrid(omega))
    }

    fn modal_sum(&self, idx: usize, r: f64, deriv: u8) -> Result<Complex> {
        let mut s = Complex::new(0.0, 0.0);
        for (a, m) in self.coefficients[idx].iter().zip(&self.basis.modes) {
            s += a * m.eval(r, deriv)?;
        }
        Ok(s)
    }

    /// `w(r, omega) = sum_n a_n phi_n(r)`.
    pub fn deflection(&self, r: f64, omega: f64) -> Result<Complex> {
        self.modal_sum(self.index_of(omega)?, r, 0)
    }

    fn strain_at(&self, idx: usize, r: f64, opts: StrainOptions) -> Result<Complex> {
        let z = match opts.fiber {
            Fiber::Bottom => -0.5 * self.basis.plate.thickness,
            Fiber::Top => 0.5 * self.basis.plate.thickness,
        };
        let mut curv = self.modal_sum(idx, r, 2)?;
        if opts.poisson_coupling {
            let nu = self.basis.plate.poisson_ratio;
            // w_r / r -> w_rr as r -> 0
            let slope = if r > 0.0 {
                self.modal_sum(idx, r, 1)? / r
            } else {
                curv
            };
            curv += slope * nu;
        }
        Ok(curv * (-z))
    }

    /// Radial strain at the selected fiber.
    pub fn radial_strain(&self, r: f64, omega: f64, opts: StrainOptions) -> Result<Complex> {
        self.strain_at(self.index_of(omega)?, r, opts)
    }

    /// `K(omega) = pi rho h omega^2 a^H N a`.
    pub fn kinetic_energy(&self, omega: f64) -> Result<f64> {
        let idx = self.index_of(omega)?;
        let a = &self.coefficients[idx];
        let g = self.gram.map(|v| Complex::new(v, 0.0));
        let q = (a.adjoint() * g * a)[(0, 0)].re;
        Ok(PI * self.basis.plate.areal_mass() * omega * omega * q)
    }

    /// Observable spectrum over the whole grid.
    pub fn spectrum(&self, obs: Observable) -> Result<Vec<Complex>> {
        (0..self.grid.len())
            .map(|i| match obs {
                Observable::Deflection { r } => self.modal_sum(i, r, 0),
                Observable::Strain { r, options } => self.strain_at(i, r, options),
            })
            .collect()
    }

    /// Time signal of an observable by direct Fourier synthesis.
    pub fn synthesize(&self, obs: Observable, times: &[f64]) -> Result<Vec<f64>> {
        synthesize_time(&self.grid, &self.spectrum(obs)?, times)
    }

    /// Soil displacement spectrum at `(r, z)` over the grid.
    pub fn soil_spectrum(&self, soil: &SoilSpec, r: f64, z: f64, cfg: &QuadConfig) -> Result<Vec<Complex>> {
        if self.traction.iter().all(|b| b.iter().all(|v| v.norm() == 0.0)) {
            return Err(invalid("traction", "field carries no traction coefficients"));
        }
        self.grid
            .iter()
            .zip(&self.traction)
            .map(|(&w, b)| soil_field_at(b, &self.basis, soil, w, r, z, cfg))
            .collect()
    }
}
