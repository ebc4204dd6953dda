//! Vertical displacement inside the half-space from the contact traction.
//!
//! `w(r, z) = int_0^inf D(xi, z) q_hat(xi) J0(xi r) xi dxi` with
//! `D = (alpha / (mu Omega)) [(2 xi^2 - k_T^2) e^{-alpha z} - 2 xi^2 e^{-beta z}]` and
//! `q_hat = sum_k b_k H[phi_k]`. The Rayleigh pole is subtracted exactly as in the
//! S-matrix assembly.

use nalgebra::DVector;

use crate::error::{invalid, Error, Result};
use crate::halfspace::{HalfspaceKernel, SoilSpec};
use crate::hankel::BasisTransformer;
use crate::numkernel::{gauss_legendre, j0};
use crate::plate_modes::ModeBasis;
use crate::smatrix::{plan_quadrature, pole_factor, QuadConfig};

use crate::Complex;

fn check_point(r: f64, z: f64) -> Result<()> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid("r", format!("must be finite and nonnegative, got {r}")));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(invalid("z", format!("depth must be finite and nonnegative, got {z}")));
    }
    Ok(())
}

fn traction(transformer: &BasisTransformer, b: &DVector<Complex>, xi: f64, buf: &mut [f64]) -> Complex {
    transformer.eval_into(xi, buf);
    b.iter().zip(buf.iter()).map(|(bk, t)| bk * *t).sum()
}

/// Transformed traction tabulated on the quadrature nodes of one frequency, so that
/// the field can be evaluated at many `(r, z)` points cheaply.
#[derive(Debug, Clone)]
pub struct SoilField {
    /// `(xi, weight, q_hat(xi))`.
    nodes: Vec<(f64, f64, Complex)>,
    path: Path,
}

#[derive(Debug, Clone)]
enum Path {
    Static { coef: f64, mu: f64 },
    Dynamic { kernel: HalfspaceKernel, q_r: Complex, pole: Complex },
}

fn check_len(b: &DVector<Complex>, basis: &ModeBasis) -> Result<()> {
    if b.len() != basis.len() {
        return Err(Error::Dimension(format!(
            "{} traction coefficients for {} modes",
            b.len(),
            basis.len()
        )));
    }
    Ok(())
}

impl SoilField {
    /// Dynamic field at `kernel.omega > 0` for traction `q = sum_k b_k phi_k`. Node
    /// counts follow the plate radius; far outside the disk (`r >> R`) raise
    /// `nodes_per_unit`.
    pub fn dynamic(b: &DVector<Complex>, basis: &ModeBasis, kernel: &HalfspaceKernel, cfg: &QuadConfig) -> Result<Self> {
        check_len(b, basis)?;
        let kernel = kernel.with_guard(cfg.pole_guard);
        let plan = plan_quadrature(&kernel, cfg, basis.radius(), basis.max_lambda())?;
        let transformer = BasisTransformer::new(basis);
        let mut buf = vec![0.0; basis.len()];
        let xr = kernel.xi_r;
        let gap = kernel.guard * xr;
        let nodes = plan
            .nodes()?
            .into_iter()
            .map(|(xi0, w)| {
                // nodes inside the pole guard move to its boundary
                let xi = if (xi0 - xr).abs() < gap {
                    if xi0 < xr {
                        xr - gap
                    } else {
                        xr + gap
                    }
                } else {
                    xi0
                };
                (xi, w, traction(&transformer, b, xi, &mut buf))
            })
            .collect();
        Ok(Self {
            nodes,
            path: Path::Dynamic {
                q_r: traction(&transformer, b, xr, &mut buf),
                pole: pole_factor(&plan, &kernel),
                kernel,
            },
        })
    }

    /// Static field with `D_0 = e^{-xi z} (C / xi + z / (2 mu))`, `C` the static coefficient.
    pub fn static_field(b: &DVector<Complex>, basis: &ModeBasis, soil: &SoilSpec, cfg: &QuadConfig) -> Result<Self> {
        check_len(b, basis)?;
        let radius = basis.radius();
        let xi_tail = cfg.tail.floor(radius, basis.max_lambda());
        let n = cfg
            .total_nodes
            .unwrap_or(((cfg.nodes_per_unit * xi_tail * radius).ceil() as usize + 48) * 2)
            .min(crate::numkernel::quadrature::MAX_ORDER);
        let rule = gauss_legendre(n)?;
        let transformer = BasisTransformer::new(basis);
        let mut buf = vec![0.0; basis.len()];
        let half = 0.5 * xi_tail;
        let nodes = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&u, &w)| {
                let xi = half * (u + 1.0);
                (xi, w * half, traction(&transformer, b, xi, &mut buf))
            })
            .collect();
        Ok(Self {
            nodes,
            path: Path::Static {
                coef: soil.static_coefficient(),
                mu: soil.shear_modulus,
            },
        })
    }

    /// Routes to the static path below the switch frequency.
    pub fn new(b: &DVector<Complex>, basis: &ModeBasis, soil: &SoilSpec, omega: f64, cfg: &QuadConfig) -> Result<Self> {
        if omega <= cfg.omega_switch(soil, basis.radius()) {
            Self::static_field(b, basis, soil, cfg)
        } else {
            Self::dynamic(b, basis, &HalfspaceKernel::new(soil, omega)?, cfg)
        }
    }

    /// Vertical displacement at radius `r` and depth `z >= 0`.
    pub fn at(&self, r: f64, z: f64) -> Result<Complex> {
        check_point(r, z)?;
        let mut sum = Complex::new(0.0, 0.0);
        match &self.path {
            Path::Static { coef, mu } => {
                for &(xi, w, q) in &self.nodes {
                    let d = (-xi * z).exp() * (coef + xi * z / (2.0 * mu));
                    sum += q * (d * j0(xi * r) * w);
                }
                Ok(sum)
            }
            Path::Dynamic { kernel, q_r, pole } => {
                let xr = kernel.xi_r;
                let g_r = q_r * (j0(xr * r) * xr);
                let d_r = kernel.depth_residue(z);
                for &(xi, w, q) in &self.nodes {
                    let g = q * (j0(xi * r) * xi);
                    let v = kernel.depth_kernel(xi, z) * g - g_r * (d_r / (xi - xr));
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::NonFinite(format!("soil integrand at xi = {xi}")));
                    }
                    sum += v * w;
                }
                Ok(sum + pole * g_r * d_r)
            }
        }
    }
}

/// Field at `omega > 0` for traction coefficients `b` (`q = sum_k b_k phi_k`).
pub fn soil_field(
    b: &DVector<Complex>,
    basis: &ModeBasis,
    kernel: &HalfspaceKernel,
    r: f64,
    z: f64,
    cfg: &QuadConfig,
) -> Result<Complex> {
    check_point(r, z)?;
    SoilField::dynamic(b, basis, kernel, cfg)?.at(r, z)
}

/// Static field at one point; see [`SoilField::static_field`].
pub fn soil_field_static(
    b: &DVector<Complex>,
    basis: &ModeBasis,
    soil: &SoilSpec,
    r: f64,
    z: f64,
    cfg: &QuadConfig,
) -> Result<Complex> {
    check_point(r, z)?;
    SoilField::static_field(b, basis, soil, cfg)?.at(r, z)
}

/// Routes to the static path below the switch frequency.
pub fn soil_field_at(
    b: &DVector<Complex>,
    basis: &ModeBasis,
    soil: &SoilSpec,
    omega: f64,
    r: f64,
    z: f64,
    cfg: &QuadConfig,
) -> Result<Complex> {
    check_point(r, z)?;
    SoilField::new(b, basis, soil, omega, cfg)?.at(r, z)
}
