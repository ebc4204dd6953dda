//! Axisymmetric free-edge eigenmodes of a Kirchhoff plate on `[0, R]`.
//!
//! Each positive mode is `phi(r) = a1 J0(lambda r) + A2 I0(lambda r)`. The `I0`
//! coefficient is stored as `a2_scaled = A2 exp(lambda R)` so that every evaluation
//! works with `exp(-x) I0(x)` and never overflows.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkernel::bessel::{i0e, i0e_derivatives, i1e, j0_derivatives, j0_j1};
use crate::numkernel::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateSpec {
    /// Young's modulus [Pa].
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Density [kg/m^3].
    pub density: f64,
    /// Thickness [m].
    pub thickness: f64,
    /// Radius [m].
    pub radius: f64,
}

impl PlateSpec {
    pub fn new(
        youngs_modulus: f64,
        poisson_ratio: f64,
        density: f64,
        thickness: f64,
        radius: f64,
    ) -> Result<Self> {
        let p = Self {
            youngs_modulus,
            poisson_ratio,
            density,
            thickness,
            radius,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("youngs_modulus", self.youngs_modulus),
            ("density", self.density),
            ("thickness", self.thickness),
            ("radius", self.radius),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(invalid(
                "poisson_ratio",
                format!("must lie in (0, 0.5), got {}", self.poisson_ratio),
            ));
        }
        Ok(())
    }

    /// Flexural rigidity `E h^3 / (12 (1 - nu^2))` [N m].
    pub fn rigidity(&self) -> f64 {
        self.youngs_modulus * self.thickness.powi(3)
            / (12.0 * (1.0 - self.poisson_ratio * self.poisson_ratio))
    }

    /// Mass per unit area `rho h` [kg/m^2].
    pub fn areal_mass(&self) -> f64 {
        self.density * self.thickness
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub index: usize,
    /// Eigenvalue [1/m]; zero for the constant mode.
    pub lambda: f64,
    pub a1: f64,
    /// `A2 * exp(lambda R)`.
    pub a2_scaled: f64,
    /// `int_0^R phi^2 r dr`.
    pub norm: f64,
    pub radius: f64,
}

impl Mode {
    pub fn constant(radius: f64) -> Self {
        Self {
            index: 0,
            lambda: 0.0,
            a1: 1.0,
            a2_scaled: 0.0,
            norm: 0.5 * radius * radius,
            radius,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.lambda == 0.0
    }

    /// `phi(0) = a1 + A2`.
    pub fn value_at_center(&self) -> f64 {
        self.a1 + self.a2_scaled * (-self.lambda * self.radius).exp()
    }

    /// Pointwise value or radial derivative (`deriv` in 0..=3) at `r` in `[0, R]`.
    pub fn eval(&self, r: f64, deriv: u8) -> Result<f64> {
        let tol = 1e-12 * self.radius;
        if !(r >= -tol && r <= self.radius + tol) || !r.is_finite() {
            return Err(Error::OutOfDomain {
                r,
                radius: self.radius,
            });
        }
        if deriv > 3 {
            return Err(invalid("deriv", format!("must be 0..=3, got {deriv}")));
        }
        Ok(self.eval_unchecked(r.clamp(0.0, self.radius), deriv))
    }

    pub(crate) fn eval_unchecked(&self, r: f64, deriv: u8) -> f64 {
        if self.is_constant() {
            return if deriv == 0 { self.a1 } else { 0.0 };
        }
        let lam = self.lambda;
        let x = lam * r;
        let growth = (lam * (r - self.radius)).exp();
        let b = self.a2_scaled * growth;
        let (jd, id) = bessel_profiles(x, deriv);
        lam.powi(deriv as i32) * (self.a1 * jd + b * id)
    }
}

/// `(J0^(k)(x), exp(-x) I0^(k)(x))` for `k = deriv`, with the `x -> 0` limits.
fn bessel_profiles(x: f64, deriv: u8) -> (f64, f64) {
    const SMALL: f64 = 1e-2;
    match deriv {
        0 => {
            let (j0, _) = j0_j1(x);
            (j0, i0e(x))
        }
        1 => {
            let (_, j1) = j0_j1(x);
            (-j1, i1e(x))
        }
        2 => {
            if x < 1e-8 {
                let e = (-x).exp();
                return (-0.5, 0.5 * e);
            }
            let d = j0_derivatives(x);
            let i = i0e_derivatives(x);
            (d[2], i[2])
        }
        _ => {
            if x < SMALL {
                let x3 = x * x * x;
                let e = (-x).exp();
                return (0.375 * x - 5.0 * x3 / 96.0, (0.375 * x + 5.0 * x3 / 96.0) * e);
            }
            let d = j0_derivatives(x);
            let i = i0e_derivatives(x);
            (d[3], i[3])
        }
    }
}

/// Free-edge coefficient matrix `[[c1, c2], [c3, c4]]` built literally from the
/// third-, second- and first-derivative combinations, with the `I0` column scaled
/// by `exp(-lambda R)`.
pub fn edge_coefficients(lambda: f64, plate: &PlateSpec) -> [[f64; 2]; 2] {
    let r = plate.radius;
    let nu = plate.poisson_ratio;
    let x = lambda * r;
    let j = j0_derivatives(x);
    let i = i0e_derivatives(x);
    let l2 = lambda * lambda;
    let l3 = l2 * lambda;
    let shear = |d: &[f64; 4]| l3 * d[3] + l2 / r * d[2] - lambda / (r * r) * d[1];
    let moment = |d: &[f64; 4]| l2 * d[2] + nu * lambda / r * d[1];
    [[shear(&j), shear(&i)], [moment(&j), moment(&i)]]
}

/// Edge matrix after reduction to `{J0, J1, I0, I1}` and division of the rows by
/// `lambda^3` and `lambda^2`: rows `[J1, I1]` and `[-J0 + (1-nu) J1/x, I0 - (1-nu) I1/x]`.
fn reduced_edge_matrix(x: f64, nu: f64) -> Matrix2<f64> {
    let (j0, j1) = j0_j1(x);
    let a = i0e(x);
    let b = i1e(x);
    Matrix2::new(j1, b, -j0 + (1.0 - nu) * j1 / x, a - (1.0 - nu) * b / x)
}

/// Characteristic determinant `c1 c4 - c2 c3`, divided by the product of the row norms
/// so it stays O(1) for all `lambda > 0`. Its zeros are the free-edge eigenvalues.
pub fn char_det(lambda: f64, plate: &PlateSpec) -> f64 {
    scaled_det(lambda * plate.radius, plate.poisson_ratio)
}

fn scaled_det(x: f64, nu: f64) -> f64 {
    let m = reduced_edge_matrix(x, nu);
    let n1 = m[(0, 0)].hypot(m[(0, 1)]);
    let n2 = m[(1, 0)].hypot(m[(1, 1)]);
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]) / (n1 * n2)
}

/// Root-scan step in `lambda R`.
pub const SCAN_STEP: f64 = std::f64::consts::PI / 20.0;

/// Default ceiling on `lambda R` for `count` requested modes.
pub fn default_ceiling(count: usize) -> f64 {
    40.0 + 4.0 * count as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeOptions {
    pub include_constant: bool,
    /// Upper limit of the root scan in `lambda R`; `None` uses `40 + 4N`.
    pub ceiling: Option<f64>,
}

impl Default for ModeOptions {
    fn default() -> Self {
        Self {
            include_constant: true,
            ceiling: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    pub plate: PlateSpec,
    pub modes: Vec<Mode>,
}

impl ModeBasis {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.plate.radius
    }

    pub fn max_lambda(&self) -> f64 {
        self.modes.iter().map(|m| m.lambda).fold(0.0, f64::max)
    }

    /// `phi_m(0)` for every mode.
    pub fn center_values(&self) -> Vec<f64> {
        self.modes.iter().map(Mode::value_at_center).collect()
    }
}

/// Constant mode plus the first `count - 1` positive free-edge modes.
pub fn find_modes(plate: &PlateSpec, count: usize) -> Result<ModeBasis> {
    find_modes_with(plate, count, ModeOptions::default())
}

pub fn find_modes_with(plate: &PlateSpec, count: usize, opts: ModeOptions) -> Result<ModeBasis> {
    plate.validate()?;
    if count == 0 {
        return Err(invalid("count", "at least one mode is required"));
    }
    let r = plate.radius;
    let wanted = if opts.include_constant { count - 1 } else { count };
    let ceiling = opts.ceiling.unwrap_or_else(|| default_ceiling(count));
    let roots = scan_roots(plate.poisson_ratio, wanted, ceiling)?;
    let mut modes = Vec::with_capacity(count);
    if opts.include_constant {
        modes.push(Mode::constant(r));
    }
    for x in roots {
        let (a1, a2_scaled) = null_vector(x, plate.poisson_ratio);
        let mut mode = Mode {
            index: modes.len(),
            lambda: x / r,
            a1,
            a2_scaled,
            norm: 0.0,
            radius: r,
        };
        mode.norm = mode_norm(&mode)?;
        modes.push(mode);
    }
    Ok(ModeBasis {
        plate: *plate,
        modes,
    })
}

/// Bracketing scan of the characteristic determinant in `x = lambda R`, then bisection.
pub fn scan_roots(nu: f64, wanted: usize, ceiling: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::with_capacity(wanted);
    if wanted == 0 {
        return Ok(roots);
    }
    let mut lo = SCAN_STEP;
    let mut f_lo = scaled_det(lo, nu);
    while roots.len() < wanted {
        let hi = lo + SCAN_STEP;
        if hi > ceiling {
            return Err(Error::RootScan {
                found: roots.len(),
                wanted,
                ceiling,
            });
        }
        let f_hi = scaled_det(hi, nu);
        if f_lo == 0.0 {
            roots.push(lo);
        } else if f_lo * f_hi < 0.0 {
            roots.push(bisect(|x| scaled_det(x, nu), lo, hi, f_lo));
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(roots)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Unit right singular vector of the smallest singular value of the reduced edge
/// matrix, oriented so that `a1 > 0`.
fn null_vector(x: f64, nu: f64) -> (f64, f64) {
    let m = reduced_edge_matrix(x, nu);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let k = if svd.singular_values[0] <= svd.singular_values[1] {
        0
    } else {
        1
    };
    let (mut a1, mut a2) = (v_t[(k, 0)], v_t[(k, 1)]);
    if a1 < 0.0 || (a1 == 0.0 && a2 < 0.0) {
        a1 = -a1;
        a2 = -a2;
    }
    (a1, a2)
}

/// Gauss–Legendre order that resolves products of two modes up to `lambda_max`.
pub fn product_rule_order(lambda_max_r: f64) -> usize {
    ((2.0 * lambda_max_r / std::f64::consts::PI).ceil() as usize * 4 + 64).min(4096)
}

fn mode_norm(mode: &Mode) -> Result<f64> {
    let rule = gauss_legendre(product_rule_order(mode.lambda * mode.radius))?;
    Ok(rule.integrate(0.0, mode.radius, |r| {
        let v = mode.eval_unchecked(r, 0);
        v * v * r
    }))
}

/// Gram matrix `N_nm = int_0^R phi_n phi_m r dr`.
pub fn gram_matrix(basis: &ModeBasis) -> DMatrix<f64> {
    let n = basis.len();
    let r = basis.radius();
    let rule = gauss_legendre(product_rule_order(basis.max_lambda() * r))
        .expect("order is capped at the maximum");
    let half = 0.5 * r;
    let mut values = DMatrix::<f64>::zeros(rule.order, n);
    let mut weights = vec![0.0; rule.order];
    for (q, (&u, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let rr = half * (u + 1.0);
        weights[q] = w * half * rr;
        for (j, m) in basis.modes.iter().enumerate() {
            values[(q, j)] = m.eval_unchecked(rr, 0);
        }
    }
    let mut g = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for (q, &w) in weights.iter().enumerate() {
                s += w * values[(q, i)] * values[(q, j)];
            }
            g[(i, j)] = s;
            g[(j, i)] = s;
        }
    }
    for (i, m) in basis.modes.iter().enumerate() {
        g[(i, i)] = m.norm;
    }
    g
}
