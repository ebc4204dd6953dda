//! Lamb half-space surface admittance, Rayleigh denominator, Rayleigh pole and residue.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkernel::{complex_sqrt_decaying, radical};
use crate::Complex;

/// Default pole guard, relative to `xi_R`.
pub const DEFAULT_POLE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoilSpec {
    /// Shear modulus [Pa].
    pub shear_modulus: f64,
    /// Longitudinal wave speed [m/s].
    pub c_l: f64,
    /// Shear wave speed [m/s].
    pub c_t: f64,
}

impl SoilSpec {
    pub fn new(shear_modulus: f64, c_l: f64, c_t: f64) -> Result<Self> {
        let s = Self {
            shear_modulus,
            c_l,
            c_t,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shear_modulus.is_finite() && self.shear_modulus > 0.0) {
            return Err(invalid("shear_modulus", "must be positive and finite"));
        }
        if !(self.c_t.is_finite() && self.c_t > 0.0) {
            return Err(invalid("c_t", "must be positive and finite"));
        }
        if !(self.c_l.is_finite() && self.c_l > self.c_t) {
            return Err(invalid("c_l", "must be finite and exceed c_t"));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        self.c_t / self.c_l
    }

    /// `C_L^2 / (2 mu (C_L^2 - C_T^2))`: the `omega -> 0` limit of `xi * alpha_HS`.
    pub fn static_coefficient(&self) -> f64 {
        let l2 = self.c_l * self.c_l;
        let t2 = self.c_t * self.c_t;
        l2 / (2.0 * self.shear_modulus * (l2 - t2))
    }

    /// Static admittance `C_L^2 / (2 mu xi (C_L^2 - C_T^2))`.
    pub fn static_admittance(&self, xi: f64) -> f64 {
        self.static_coefficient() / xi
    }

    /// Rayleigh wave speed `c_R = sqrt(zeta) C_T`.
    pub fn rayleigh_speed(&self) -> f64 {
        rayleigh_zeta(self.kappa())
            .expect("kappa in (0,1) after validation")
            .sqrt()
            * self.c_t
    }
}

fn rayleigh_residual(zeta: f64, kappa: f64) -> f64 {
    let a = 2.0 - zeta;
    a * a - 4.0 * (1.0 - zeta).sqrt() * (1.0 - kappa * kappa * zeta).sqrt()
}

/// Root in `(0, 1)` of `(2 - zeta)^2 = 4 sqrt(1 - zeta) sqrt(1 - kappa^2 zeta)`.
///
/// `zeta = 0` is a trivial root; `f < 0` just to its right and `f(1) = 1 > 0`,
/// so the bracket starts slightly above zero.
pub fn rayleigh_zeta(kappa: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(invalid("kappa", format!("must lie in (0, 1), got {kappa}")));
    }
    let mut lo = 1e-6;
    let mut hi = 1.0;
    debug_assert!(rayleigh_residual(lo, kappa) < 0.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rayleigh_residual(mid, kappa) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Frequency slice of the half-space: wavenumbers, Rayleigh pole and residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceKernel {
    pub soil: SoilSpec,
    pub omega: f64,
    pub k_l: f64,
    pub k_t: f64,
    pub xi_r: f64,
    pub zeta: f64,
    pub kappa: f64,
    /// Residue `A_R` of `alpha_HS` at `xi_R` (real for real `omega`).
    pub residue: f64,
    /// Pole guard relative to `xi_R`.
    pub guard: f64,
    /// Quotient `Q(s)` of the rationalised numerator `P(s) = (s - xi_R^2) Q(s)`, `s = xi^2`.
    quotient: [f64; 3],
}

impl HalfspaceKernel {
    pub fn new(soil: &SoilSpec, omega: f64) -> Result<Self> {
        soil.validate()?;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", format!("must be positive, got {omega}")));
        }
        let kappa = soil.kappa();
        let zeta = rayleigh_zeta(kappa)?;
        let k_l = omega / soil.c_l;
        let k_t = omega / soil.c_t;
        let xi_r = omega / (zeta.sqrt() * soil.c_t);
        let mut k = Self {
            soil: *soil,
            omega,
            k_l,
            k_t,
            xi_r,
            zeta,
            kappa,
            residue: 0.0,
            guard: DEFAULT_POLE_GUARD,
            quotient: [0.0; 3],
        };
        k.quotient = k.numerator_quotient();
        k.residue = k.rayleigh_residue();
        Ok(k)
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn mu(&self) -> f64 {
        self.soil.shear_modulus
    }

    /// `sqrt(xi^2 - k_L^2)`, decaying branch.
    pub fn alpha(&self, xi: f64) -> Complex {
        radical(xi, self.k_l)
    }

    /// `sqrt(xi^2 - k_T^2)`, decaying branch.
    pub fn beta(&self, xi: f64) -> Complex {
        radical(xi, self.k_t)
    }

    /// Rayleigh denominator for complex `xi`.
    pub fn omega_denominator(&self, xi: Complex) -> Complex {
        let x2 = xi * xi;
        let t2 = self.k_t * self.k_t;
        let l2 = self.k_l * self.k_l;
        let a = complex_sqrt_decaying(x2 - l2);
        let b = complex_sqrt_decaying(x2 - t2);
        let c = 2.0 * x2 - t2;
        c * c - 4.0 * x2 * a * b
    }

    /// Synthetic division of `P(s) = 16(L-T) s^3 + 8T(3T-2L) s^2 - 8T^3 s + T^4`
    /// by `s - xi_R^2`; the remainder vanishes up to roundoff and is dropped so that
    /// the pole sits exactly at `xi_R`.
    fn numerator_quotient(&self) -> [f64; 3] {
        let t = self.k_t * self.k_t;
        let l = self.k_l * self.k_l;
        let sr = self.xi_r * self.xi_r;
        let q2 = 16.0 * (l - t);
        let q1 = 8.0 * t * (3.0 * t - 2.0 * l) + sr * q2;
        let q0 = -8.0 * t * t * t + sr * q1;
        [q0, q1, q2]
    }

    /// Rayleigh denominator for real `xi >= 0`. Above `k_T` it is evaluated as
    /// `P(xi^2) / ((2 xi^2 - k_T^2)^2 + 4 xi^2 alpha beta)` with `P` factored through
    /// the pole, which avoids cancellation both at large `xi` and next to `xi_R`.
    pub fn omega_real(&self, xi: f64) -> Complex {
        if xi > self.k_t {
            let s = xi * xi;
            let t = self.k_t * self.k_t;
            let ab = (xi - self.k_l).sqrt()
                * (xi + self.k_l).sqrt()
                * (xi - self.k_t).sqrt()
                * (xi + self.k_t).sqrt();
            let [q0, q1, q2] = self.quotient;
            let num = (xi - self.xi_r) * (xi + self.xi_r) * ((q2 * s + q1) * s + q0);
            let c = 2.0 * s - t;
            Complex::new(num / (c * c + 4.0 * s * ab), 0.0)
        } else {
            let t = self.k_t * self.k_t;
            let c = 2.0 * xi * xi - t;
            c * c - 4.0 * xi * xi * self.alpha(xi) * self.beta(xi)
        }
    }

    /// Closed-form `d Omega / d xi` for real `xi > k_T`.
    pub fn omega_derivative(&self, xi: f64) -> f64 {
        let t = self.k_t * self.k_t;
        let a = self.alpha(xi).re;
        let b = self.beta(xi).re;
        8.0 * xi * (2.0 * xi * xi - t) - 8.0 * xi * a * b - 4.0 * xi.powi(3) * (a / b + b / a)
    }

    fn rayleigh_residue(&self) -> f64 {
        let t = self.k_t * self.k_t;
        -self.alpha(self.xi_r).re * t / (self.mu() * self.omega_derivative(self.xi_r))
    }

    /// Residue `A_R = -alpha(xi_R) k_T^2 / (mu dOmega/dxi(xi_R))`.
    pub fn residue(&self) -> f64 {
        self.residue
    }

    /// Rayleigh speed `omega / xi_R`.
    pub fn rayleigh_speed(&self) -> f64 {
        self.omega / self.xi_r
    }

    pub fn in_pole_guard(&self, xi: f64) -> bool {
        (xi - self.xi_r).abs() < self.guard * self.xi_r
    }

    /// `alpha_HS(xi) = -alpha k_T^2 / (mu Omega)`; rejects points inside the pole guard.
    pub fn alpha_hs(&self, xi: f64) -> Result<Complex> {
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(invalid("xi", format!("must be finite and nonnegative, got {xi}")));
        }
        if self.in_pole_guard(xi) {
            return Err(Error::PoleProximity { xi, xi_r: self.xi_r });
        }
        Ok(self.alpha_hs_unchecked(xi))
    }

    pub(crate) fn alpha_hs_unchecked(&self, xi: f64) -> Complex {
        let t = self.k_t * self.k_t;
        -self.alpha(xi) * t / (self.mu() * self.omega_real(xi))
    }

    /// Laurent remainder `B = alpha_HS - A_R / (xi - xi_R)`.
    pub fn remainder(&self, xi: f64) -> Complex {
        self.alpha_hs_unchecked(xi) - self.residue / (xi - self.xi_r)
    }

    /// Surface-to-depth transfer: vertical displacement at depth `z` per unit
    /// transformed traction, `(alpha / (mu Omega)) [(2 xi^2 - k_T^2) e^{-alpha z} - 2 xi^2 e^{-beta z}]`.
    /// At `z = 0` this is `alpha_HS`.
    pub fn depth_kernel(&self, xi: f64, z: f64) -> Complex {
        let a = self.alpha(xi);
        let b = self.beta(xi);
        let s = xi * xi;
        let bracket = (2.0 * s - self.k_t * self.k_t) * (-a * z).exp() - 2.0 * s * (-b * z).exp();
        a * bracket / (self.mu() * self.omega_real(xi))
    }

    /// Residue of [`Self::depth_kernel`] at `xi_R`.
    pub fn depth_residue(&self, z: f64) -> f64 {
        let xi = self.xi_r;
        let a = self.alpha(xi).re;
        let b = self.beta(xi).re;
        let s = xi * xi;
        let bracket = (2.0 * s - self.k_t * self.k_t) * (-a * z).exp() - 2.0 * s * (-b * z).exp();
        a * bracket / (self.mu() * self.omega_derivative(xi))
    }

    /// Large-`xi` limit of `xi alpha_HS`: `-k_T^2 / (2 mu (k_L^2 - k_T^2))`.
    pub fn large_xi_limit(&self) -> f64 {
        let t = self.k_t * self.k_t;
        let l = self.k_l * self.k_l;
        -t / (2.0 * self.mu() * (l - t))
    }
}
