//! Per-frequency linear algebra: `C S = N`, the modal matrix `K`, and the sweep driver.

use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::halfspace::SoilSpec;
use crate::plate_modes::{gram_matrix, ModeBasis, PlateSpec};
use crate::response::LoadPulse;
use crate::smatrix::{assemble_at, QuadConfig, SMatrix, SMatrixMeta};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Direct,
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// 1-norm condition number above which least squares replaces LU.
    pub cond_switch: f64,
    /// Relative singular-value cutoff for the least-squares rank.
    pub rcond: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cond_switch: 1e8,
            rcond: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub method: SolverMethod,
    /// 1-norm condition number (infinite if LU broke down).
    pub condition: f64,
    /// Numerical rank (full unless least squares truncated).
    pub rank: usize,
    /// `||A X - B||_F / ||B||_F`.
    pub residual: f64,
}

fn norm1(a: &DMatrix<Complex>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn frobenius(a: &DMatrix<Complex>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_finite(a: &DMatrix<Complex>, what: &str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Solves `A X = B`: LU with partial pivoting when the 1-norm condition number is
/// below the switch, otherwise SVD least squares with rank truncation.
pub fn solve_dense(
    a: &DMatrix<Complex>,
    b: &DMatrix<Complex>,
    cfg: &SolverConfig,
) -> Result<(DMatrix<Complex>, SolveDiagnostics)> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return Err(Error::Dimension(format!(
            "A is {}x{}, B is {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    check_finite(a, "system matrix")?;
    check_finite(b, "right-hand side")?;
    let n = a.nrows();
    let lu = a.clone().lu();
    let inverse = lu.try_inverse();
    let condition = match &inverse {
        Some(inv) => norm1(a) * norm1(inv),
        None => f64::INFINITY,
    };
    let bnorm = frobenius(b).max(f64::MIN_POSITIVE);
    if condition.is_finite() && condition < cfg.cond_switch {
        if let Some(x) = lu.solve(b) {
            let residual = frobenius(&(a * &x - b)) / bnorm;
            return Ok((
                x,
                SolveDiagnostics {
                    method: SolverMethod::Direct,
                    condition,
                    rank: n,
                    residual,
                },
            ));
        }
    }
    let (x, rank) = least_squares(a, b, cfg.rcond)?;
    let residual = frobenius(&(a * &x - b)) / bnorm;
    if rank < n {
        warn!("least-squares solve truncated rank {rank} of {n} (cond {condition:.3e})");
    }
    Ok((
        x,
        SolveDiagnostics {
            method: SolverMethod::LeastSquares,
            condition,
            rank,
            residual,
        },
    ))
}

/// Minimum-norm least squares via SVD, discarding singular values below `rcond * s_max`.
pub fn least_squares(
    a: &DMatrix<Complex>,
    b: &DMatrix<Complex>,
    rcond: f64,
) -> Result<(DMatrix<Complex>, usize)> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = rcond * smax * a.nrows().max(a.ncols()) as f64;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut rank = 0;
    let mut x = DMatrix::<Complex>::zeros(a.ncols(), b.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut || s == 0.0 {
            continue;
        }
        rank += 1;
        let coeff = u.column(i).adjoint() * b / Complex::new(s, 0.0);
        let vi = v_t.row(i).adjoint();
        x += vi * coeff;
    }
    Ok((x, rank))
}

/// `C` from `C S = N`, solved as `S^T C^T = N^T`.
pub fn solve_c(
    s: &DMatrix<Complex>,
    gram: &DMatrix<f64>,
    cfg: &SolverConfig,
) -> Result<(DMatrix<Complex>, SolveDiagnostics)> {
    if s.nrows() != gram.nrows() || s.ncols() != gram.ncols() {
        return Err(Error::Dimension("S and N differ in shape".into()));
    }
    let nt = gram.transpose().map(|v| Complex::new(v, 0.0));
    let (ct, mut diag) = solve_dense(&s.transpose(), &nt, cfg)?;
    let c = ct.transpose();
    let n = gram.map(|v| Complex::new(v, 0.0));
    diag.residual = frobenius(&(&c * s - &n)) / frobenius(&n).max(f64::MIN_POSITIVE);
    Ok((c, diag))
}

/// `P_nm = int_0^R psi_n phi_m r dr = (C N)_nm`.
pub fn coupling_integrals(c: &DMatrix<Complex>, gram: &DMatrix<f64>) -> DMatrix<Complex> {
    c * gram.map(|v| Complex::new(v, 0.0))
}

/// `K_mn = (D lambda_n^4 - rho h omega^2) N_mn + P_nm`; row `m` is the equation tested
/// against `phi_m`, column `n` multiplies `a_n`.
pub fn k_matrix(
    basis: &ModeBasis,
    gram: &DMatrix<f64>,
    p: &DMatrix<Complex>,
    omega: f64,
) -> DMatrix<Complex> {
    let d = basis.plate.rigidity();
    let mass = basis.plate.areal_mass() * omega * omega;
    let n = basis.len();
    DMatrix::from_fn(n, n, |m, j| {
        let stiff = d * basis.modes[j].lambda.powi(4) - mass;
        Complex::new(stiff * gram[(m, j)], 0.0) + p[(j, m)]
    })
}

/// Right-hand side `p_hat phi_m(0) / (2 pi)`.
pub fn modal_rhs(basis: &ModeBasis, p_hat: Complex) -> DVector<Complex> {
    DVector::from_iterator(
        basis.len(),
        basis
            .center_values()
            .into_iter()
            .map(|v| p_hat * (v / (2.0 * PI))),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalDiagnostics {
    pub c_solve: SolveDiagnostics,
    pub k_solve: SolveDiagnostics,
    pub smatrix: SMatrixMeta,
    /// `Re(conj(p_hat) (-i omega) w(0))`; nonnegative when the soil absorbs energy.
    pub power_input: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalSolution {
    pub omega: f64,
    pub a: DVector<Complex>,
    pub rhs_scale: Complex,
    /// Traction expansion `psi_n = sum_k C_nk phi_k`.
    pub c: DMatrix<Complex>,
    pub diagnostics: ModalDiagnostics,
}

impl ModalSolution {
    /// Traction coefficients `b_k = sum_n a_n C_nk`, so that `q = sum_k b_k phi_k`.
    pub fn traction_coefficients(&self) -> DVector<Complex> {
        self.c.transpose() * &self.a
    }
}

/// Solves `K a = rhs` for a given load spectrum value.
pub fn solve_modal(
    k: &DMatrix<Complex>,
    p_hat: Complex,
    basis: &ModeBasis,
    cfg: &SolverConfig,
) -> Result<(DVector<Complex>, SolveDiagnostics)> {
    let rhs = modal_rhs(basis, p_hat);
    let b = DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
    if rhs.iter().all(|z| *z == Complex::new(0.0, 0.0)) {
        check_finite(k, "K matrix")?;
        let diag = SolveDiagnostics {
            method: SolverMethod::Direct,
            condition: f64::NAN,
            rank: k.nrows(),
            residual: 0.0,
        };
        return Ok((DVector::zeros(rhs.len()), diag));
    }
    let (x, diag) = solve_dense(k, &b, cfg)?;
    Ok((x.column(0).into_owned(), diag))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct SweepConfig {
    pub quad: QuadConfig,
    pub solver: SolverConfig,
    /// Load pulse; `None` solves for a unit spectrum.
    pub load: Option<LoadPulse>,
    /// Sequential, fixed-order execution.
    pub deterministic: bool,
}

/// Everything derived from the basis that is shared across frequencies.
#[derive(Debug, Clone)]
pub struct SweepContext<'a> {
    pub basis: &'a ModeBasis,
    pub soil: &'a SoilSpec,
    pub gram: DMatrix<f64>,
}

impl<'a> SweepContext<'a> {
    pub fn new(basis: &'a ModeBasis, soil: &'a SoilSpec) -> Self {
        Self {
            basis,
            soil,
            gram: gram_matrix(basis),
        }
    }

    /// Full pipeline at one frequency: kernel, plan, S, C, K, a.
    pub fn solve(&self, omega: f64, cfg: &SweepConfig) -> Result<ModalSolution> {
        let s = assemble_at(self.basis, self.soil, omega, &cfg.quad)?;
        self.solve_with(&s, cfg)
    }

    pub fn solve_with(&self, s: &SMatrix, cfg: &SweepConfig) -> Result<ModalSolution> {
        let omega = s.omega;
        let (c, c_diag) = solve_c(&s.entries, &self.gram, &cfg.solver)?;
        let p = coupling_integrals(&c, &self.gram);
        let k = k_matrix(self.basis, &self.gram, &p, omega);
        let p_hat = cfg
            .load
            .map(|l| l.spectrum(omega))
            .unwrap_or(Complex::new(1.0, 0.0));
        let (a, k_diag) = solve_modal(&k, p_hat, self.basis, &cfg.solver)?;
        let w0: Complex = a
            .iter()
            .zip(self.basis.center_values())
            .map(|(ai, v)| ai * v)
            .sum();
        let power_input = (p_hat.conj() * Complex::new(0.0, -omega) * w0).re;
        if power_input < -1e-9 * (p_hat.norm() * omega * w0.norm()) {
            warn!("negative power input {power_input:.3e} at omega = {omega}");
        }
        Ok(ModalSolution {
            omega,
            a,
            rhs_scale: p_hat,
            c,
            diagnostics: ModalDiagnostics {
                c_solve: c_diag,
                k_solve: k_diag,
                smatrix: s.meta.clone(),
                power_input,
            },
        })
    }
}

/// Runs every frequency of `grid` and returns per-frequency outcomes in grid order.
pub fn frequency_sweep_partial(
    basis: &ModeBasis,
    soil: &SoilSpec,
    grid: &[f64],
    cfg: &SweepConfig,
) -> Vec<Result<ModalSolution>> {
    let ctx = SweepContext::new(basis, soil);
    if cfg.deterministic {
        grid.iter().map(|&w| ctx.solve(w, cfg)).collect()
    } else {
        grid.par_iter().map(|&w| ctx.solve(w, cfg)).collect()
    }
}

/// Sweep over a sorted nonnegative grid; fails with every per-frequency error collected.
pub fn frequency_sweep(
    plate: &PlateSpec,
    soil: &SoilSpec,
    basis: &ModeBasis,
    grid: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<ModalSolution>> {
    if plate != &basis.plate {
        return Err(invalid("plate", "does not match the basis plate"));
    }
    if grid.is_empty() {
        return Err(invalid("grid", "must not be empty"));
    }
    if grid.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(invalid("grid", "frequencies must be finite and nonnegative"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("grid", "must be sorted"));
    }
    let outcomes = frequency_sweep_partial(basis, soil, grid, cfg);
    let mut ok = Vec::with_capacity(grid.len());
    let mut failed = Vec::new();
    for (&w, r) in grid.iter().zip(outcomes) {
        match r {
            Ok(s) => ok.push(s),
            Err(e) => failed.push((w, e.to_string())),
        }
    }
    if failed.is_empty() {
        Ok(ok)
    } else {
        Err(Error::Sweep(failed))
    }
}
