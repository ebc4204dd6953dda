//! Modal S-matrix `S_km = int_0^inf alpha_HS(xi) H[phi_k] H[phi_m] xi dxi` at `omega + i0`.
//!
//! The Rayleigh pole is subtracted,
//!
//! ```text
//! S_km = int_0^xi_tail Bt(xi) dxi + A_R g_km(xi_R) xi_R (log|(xi_tail - xi_R)/xi_R| + i pi)
//! Bt   = alpha_HS g_km xi - A_R g_km(xi_R) xi_R / (xi - xi_R)
//! ```
//!
//! and the regular remainder is integrated on `[0,k_L] [k_L,xi_mid] [xi_mid,k_T] [k_T,xi_tail]`
//! with quadratic endpoint maps that absorb the square-root branch points.
//! Because `Bt` is linear in the outer product of the transforms, the whole matrix is
//! assembled from one node table: `S = T^T diag(c) T + s t_R t_R^T`.

use log::{debug, warn};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::halfspace::{HalfspaceKernel, SoilSpec};
use crate::hankel::{g_km, BasisTransformer};
use crate::numkernel::{complex_sqrt_decaying, gauss_legendre, GaussRule};
use crate::plate_modes::{Mode, ModeBasis};
use crate::Complex;

const MAX_RULE: usize = crate::numkernel::quadrature::MAX_ORDER;

/// Endpoint map on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointMap {
    /// `T_a(u) = a + (b - a) ((u + 1)/2)^2`, absorbs a branch point at `a`.
    Left,
    /// `T_b(u) = b - (b - a) ((u + 1)/2)^2`, absorbs a branch point at `b`.
    Right,
}

impl EndpointMap {
    /// `(xi, |dxi/du|)` at `u`.
    pub fn apply(self, a: f64, b: f64, u: f64) -> (f64, f64) {
        let t = 0.5 * (u + 1.0);
        let jac = (b - a) * t;
        match self {
            EndpointMap::Left => (a + (b - a) * t * t, jac),
            EndpointMap::Right => (b - (b - a) * t * t, jac),
        }
    }

    /// Both preimages of `xi` in the complex `u` plane.
    pub fn inverse(self, a: f64, b: f64, xi: Complex) -> [Complex; 2] {
        let q = match self {
            EndpointMap::Left => (xi - a) / (b - a),
            EndpointMap::Right => (Complex::new(b, 0.0) - xi) / (b - a),
        };
        let s = 2.0 * q.sqrt();
        [Complex::new(-1.0, 0.0) + s, Complex::new(-1.0, 0.0) - s]
    }
}

/// Bernstein ellipse parameter `max |u +- sqrt(u^2 - 1)|` through `u`.
pub fn bernstein_rho(u: Complex) -> f64 {
    let w = (u * u - 1.0).sqrt();
    (u + w).norm().max((u - w).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
    pub map: EndpointMap,
    pub nodes: usize,
    /// Radius of the largest singularity-free Bernstein ellipse.
    pub rho: f64,
}

impl Interval {
    fn new(a: f64, b: f64, map: EndpointMap, nodes: usize, singular: &[f64]) -> Self {
        let mut rho = f64::INFINITY;
        for &s in singular {
            for u in map.inverse(a, b, Complex::new(s, 0.0)) {
                if (u + 1.0).norm() < 1e-12 {
                    continue;
                }
                rho = rho.min(bernstein_rho(u));
            }
        }
        Self {
            a,
            b,
            map,
            nodes,
            rho,
        }
    }
}

/// Truncation point of the wavenumber integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    /// Multiple of `xi_R`.
    pub relative: f64,
    /// Absolute floor [1/m]; `None` uses `max(200 / R, 4 lambda_max)`.
    pub absolute: Option<f64>,
}

impl Default for TailSpec {
    fn default() -> Self {
        Self {
            relative: 8.0,
            absolute: None,
        }
    }
}

impl TailSpec {
    /// Frequency-independent floor. Past `lambda_max` every mode transform is in its
    /// `xi^{-3/2}` decay; a tail below it would drop the highest modes from `S`.
    pub fn floor(&self, radius: f64, lambda_max: f64) -> f64 {
        self.absolute
            .unwrap_or_else(|| (200.0 / radius).max(4.0 * lambda_max))
    }

    pub fn resolve(&self, xi_r: f64, radius: f64, lambda_max: f64) -> f64 {
        (self.relative * xi_r).max(self.floor(radius, lambda_max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    /// Total node budget over the four intervals (or the static rule). `None` picks
    /// a count from the oscillation length of the integrand.
    pub total_nodes: Option<usize>,
    /// `N4 / N1`, with `N1 = N2 = N3`.
    pub tail_ratio: usize,
    /// Gauss points per unit of `xi R` in automatic mode.
    pub nodes_per_unit: f64,
    pub tail: TailSpec,
    /// Pole guard relative to `xi_R`.
    pub pole_guard: f64,
    /// Frequencies below `switch_factor * C_T / R` use the static path.
    pub switch_factor: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            total_nodes: None,
            tail_ratio: 2,
            nodes_per_unit: 2.5,
            tail: TailSpec::default(),
            pole_guard: crate::halfspace::DEFAULT_POLE_GUARD,
            switch_factor: 1e-6,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tail_ratio == 0 {
            return Err(invalid("tail_ratio", "must be at least 1"));
        }
        if let Some(n) = self.total_nodes {
            if n < 3 + self.tail_ratio {
                return Err(invalid("total_nodes", format!("{n} is too small to split")));
            }
        }
        if !(self.nodes_per_unit > 0.0) {
            return Err(invalid("nodes_per_unit", "must be positive"));
        }
        if !(self.tail.relative > 1.0) {
            return Err(invalid("tail.relative", "must exceed 1"));
        }
        if let Some(a) = self.tail.absolute {
            if !(a > 0.0) {
                return Err(invalid("tail.absolute", "must be positive"));
            }
        }
        if !(self.pole_guard > 0.0 && self.pole_guard < 1e-2) {
            return Err(invalid("pole_guard", "must lie in (0, 1e-2)"));
        }
        if !(self.switch_factor >= 0.0) {
            return Err(invalid("switch_factor", "must be nonnegative"));
        }
        Ok(())
    }

    pub fn omega_switch(&self, soil: &SoilSpec, radius: f64) -> f64 {
        self.switch_factor * soil.c_t / radius
    }

    pub fn with_total_nodes(mut self, n: usize) -> Self {
        self.total_nodes = Some(n);
        self
    }

    pub fn with_tail_absolute(mut self, xi_tail: f64) -> Self {
        self.tail.absolute = Some(xi_tail);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadPlan {
    pub omega: f64,
    pub xi_tail: f64,
    pub intervals: [Interval; 4],
}

impl QuadPlan {
    pub fn xi_mid(&self) -> f64 {
        self.intervals[1].b
    }

    pub fn total_nodes(&self) -> usize {
        self.intervals.iter().map(|i| i.nodes).sum()
    }

    pub fn rho_min(&self) -> f64 {
        self.intervals.iter().map(|i| i.rho).fold(f64::INFINITY, f64::min)
    }

    /// A priori quadrature error shape `rho_p^{-2 N_p}`, summed over intervals.
    pub fn error_shape(&self) -> f64 {
        self.intervals
            .iter()
            .map(|i| i.rho.powf(-2.0 * i.nodes as f64))
            .sum()
    }

    /// Flattened `(xi, weight)` table including the map Jacobians.
    pub fn nodes(&self) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(self.total_nodes());
        for iv in &self.intervals {
            let rule = gauss_legendre(iv.nodes)?;
            push_mapped(&rule, iv, &mut out);
        }
        Ok(out)
    }
}

fn push_mapped(rule: &GaussRule, iv: &Interval, out: &mut Vec<(f64, f64)>) {
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (xi, jac) = iv.map.apply(iv.a, iv.b, u);
        out.push((xi, w * jac));
    }
}

fn auto_nodes(cfg: &QuadConfig, length_r: f64) -> usize {
    (cfg.nodes_per_unit * length_r).ceil() as usize + 48
}

/// Builds the four-interval plan for one frequency.
pub fn plan_quadrature(kernel: &HalfspaceKernel, cfg: &QuadConfig, radius: f64, lambda_max: f64) -> Result<QuadPlan> {
    cfg.validate()?;
    let xi_tail = cfg.tail.resolve(kernel.xi_r, radius, lambda_max);
    if !(xi_tail > kernel.xi_r) {
        return Err(Error::TailBelowPole {
            xi_tail,
            xi_r: kernel.xi_r,
        });
    }
    let (k_l, k_t) = (kernel.k_l, kernel.k_t);
    let xi_mid = 0.5 * (k_l + k_t);
    let ratio = cfg.tail_ratio;
    let (n, n4) = match cfg.total_nodes {
        Some(total) => {
            let n = (total / (3 + ratio)).max(1);
            (n.min(MAX_RULE), (total - 3 * n).min(MAX_RULE))
        }
        None => {
            let short = auto_nodes(cfg, k_t * radius);
            let long = auto_nodes(cfg, (xi_tail - k_t) * radius);
            let n = short.max(long.div_ceil(ratio)).min(MAX_RULE);
            (n, (ratio * n).min(MAX_RULE))
        }
    };
    let sing = [k_l, -k_l, k_t, -k_t];
    let intervals = [
        Interval::new(0.0, k_l, EndpointMap::Right, n, &sing),
        Interval::new(k_l, xi_mid, EndpointMap::Left, n, &sing),
        Interval::new(xi_mid, k_t, EndpointMap::Right, n, &sing),
        Interval::new(k_t, xi_tail, EndpointMap::Left, n4, &sing),
    ];
    Ok(QuadPlan {
        omega: kernel.omega,
        xi_tail,
        intervals,
    })
}

/// Pole-free integrand `Bt(xi)` for one matrix entry. Inside the pole guard the
/// value at the nearer guard boundary is used.
pub fn integrand_btilde(xi: f64, kernel: &HalfspaceKernel, k: &Mode, m: &Mode) -> Complex {
    let xi = guarded(xi, kernel);
    let gr = g_km(k, m, kernel.xi_r) * kernel.xi_r;
    kernel.alpha_hs_unchecked(xi) * (g_km(k, m, xi) * xi) - kernel.residue * gr / (xi - kernel.xi_r)
}

fn guarded(xi: f64, kernel: &HalfspaceKernel) -> f64 {
    let g = kernel.guard * kernel.xi_r;
    let d = xi - kernel.xi_r;
    if d.abs() < g {
        if d < 0.0 {
            kernel.xi_r - g
        } else {
            kernel.xi_r + g
        }
    } else {
        xi
    }
}

/// Exact pole contribution `log|(xi_tail - xi_R)/xi_R| + i pi`.
pub fn pole_factor(plan: &QuadPlan, kernel: &HalfspaceKernel) -> Complex {
    Complex::new(((plan.xi_tail - kernel.xi_r) / kernel.xi_r).abs().ln(), std::f64::consts::PI)
}

/// One entry by direct summation of `Bt` over the plan (reference path).
pub fn assemble_entry(k: &Mode, m: &Mode, plan: &QuadPlan, kernel: &HalfspaceKernel) -> Result<Complex> {
    let mut sum = Complex::new(0.0, 0.0);
    for (xi, w) in plan.nodes()? {
        let v = integrand_btilde(xi, kernel, k, m);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("Bt at xi = {xi}")));
        }
        sum += v * w;
    }
    let gr = g_km(k, m, kernel.xi_r) * kernel.xi_r;
    Ok(sum + pole_factor(plan, kernel) * (kernel.residue * gr))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SMatrixMeta {
    pub is_static: bool,
    pub node_counts: Vec<usize>,
    pub xi_tail: f64,
    /// Per-interval Bernstein radii (empty on the static path).
    pub rho: Vec<f64>,
    /// Size of the neglected tail from the leading asymptote; logged, never added.
    pub tail_estimate: f64,
    /// Nodes moved to the pole-guard boundary.
    pub guarded_nodes: usize,
    /// Largest relative asymmetry `|S - S^T| / |S|`.
    pub asymmetry: f64,
    /// Smallest eigenvalue on the static path.
    pub static_min_eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    pub omega: f64,
    pub entries: DMatrix<Complex>,
    pub meta: SMatrixMeta,
}

impl SMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Entries for unit-norm modes, `S_km / sqrt(N_kk N_mm)`. Modes of plates with
    /// different radii share the same shape in `r / R`, so normalized matrices of equal
    /// size can be compared entrywise across radii.
    pub fn normalized(&self, gram: &DMatrix<f64>) -> Result<DMatrix<Complex>> {
        let n = self.dim();
        if gram.nrows() != n || gram.ncols() != n {
            return Err(Error::Dimension(format!("Gram matrix is {}x{}, S is {n}x{n}", gram.nrows(), gram.ncols())));
        }
        let s: Vec<f64> = (0..n).map(|i| gram[(i, i)].sqrt()).collect();
        Ok(DMatrix::from_fn(n, n, |i, j| self.entries[(i, j)] / (s[i] * s[j])))
    }
}

/// `sqrt(sum |a_ij|^2)`.
pub fn frobenius_norm(a: &DMatrix<Complex>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||a - b||_F / ||b||_F`, with `b` the reference.
pub fn relative_difference(a: &DMatrix<Complex>, b: &DMatrix<Complex>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    let d = frobenius_norm(&(a - b));
    let r = frobenius_norm(b);
    Ok(if r > 0.0 { d / r } else { d })
}

/// Transform table `T[j, n] = H[phi_n](xi_j)`.
fn transform_table(transformer: &BasisTransformer, xs: &[f64]) -> DMatrix<f64> {
    let n = transformer.len();
    let mut t = DMatrix::<f64>::zeros(xs.len(), n);
    let mut row = vec![0.0; n];
    for (j, &xi) in xs.iter().enumerate() {
        transformer.eval_into(xi, &mut row);
        for (c, &v) in row.iter().enumerate() {
            t[(j, c)] = v;
        }
    }
    t
}

/// `T^T diag(c) T` for real `T` and real `c`.
fn weighted_gram(t: &DMatrix<f64>, c: &[f64]) -> DMatrix<f64> {
    let mut scaled = t.clone();
    for (j, &cj) in c.iter().enumerate() {
        scaled.row_mut(j).scale_mut(cj);
    }
    t.transpose() * scaled
}

fn symmetrize(m: &mut DMatrix<Complex>) -> f64 {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = m[(i, j)];
            let b = m[(j, i)];
            asym = asym.max((a - b).norm());
            let avg = (a + b) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    if norm > 0.0 {
        asym / norm
    } else {
        0.0
    }
}

fn check_finite(m: &DMatrix<Complex>, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Dynamic assembly for `omega > 0` from the shared node table.
pub fn assemble(basis: &ModeBasis, kernel: &HalfspaceKernel, cfg: &QuadConfig) -> Result<SMatrix> {
    let radius = basis.radius();
    let kernel = kernel.with_guard(cfg.pole_guard);
    let plan = plan_quadrature(&kernel, cfg, radius, basis.max_lambda())?;
    let table = plan.nodes()?;
    let mut xs = Vec::with_capacity(table.len());
    let mut c_re = Vec::with_capacity(table.len());
    let mut c_im = Vec::with_capacity(table.len());
    let mut e = 0.0;
    let mut guarded_nodes = 0;
    for &(xi0, w) in &table {
        let xi = guarded(xi0, &kernel);
        if xi != xi0 {
            guarded_nodes += 1;
        }
        let c = kernel.alpha_hs_unchecked(xi) * (w * xi);
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite(format!("alpha_HS at xi = {xi}")));
        }
        xs.push(xi);
        c_re.push(c.re);
        c_im.push(c.im);
        e += w / (xi - kernel.xi_r);
    }
    let transformer = BasisTransformer::new(basis);
    let t = transform_table(&transformer, &xs);
    let s_re = weighted_gram(&t, &c_re);
    let s_im = weighted_gram(&t, &c_im);
    let t_r = transformer.eval(kernel.xi_r);
    let pole = (pole_factor(&plan, &kernel) - e) * (kernel.residue * kernel.xi_r);
    let n = basis.len();
    let mut entries = DMatrix::<Complex>::from_fn(n, n, |i, j| {
        Complex::new(s_re[(i, j)], s_im[(i, j)]) + pole * (t_r[i] * t_r[j])
    });
    check_finite(&entries, "S-matrix")?;
    let asymmetry = symmetrize(&mut entries);

    let t_tail = transformer.eval(plan.xi_tail);
    let gmax = t_tail.iter().map(|v| v * v).fold(0.0, f64::max);
    let tail_estimate = 0.5 * kernel.large_xi_limit().abs() * gmax * plan.xi_tail;
    debug!(
        "omega={:.6e} nodes={} rho_min={:.4} tail~{:.3e} guarded={}",
        kernel.omega,
        plan.total_nodes(),
        plan.rho_min(),
        tail_estimate,
        guarded_nodes
    );
    Ok(SMatrix {
        omega: kernel.omega,
        entries,
        meta: SMatrixMeta {
            is_static: false,
            node_counts: plan.intervals.iter().map(|i| i.nodes).collect(),
            xi_tail: plan.xi_tail,
            rho: plan.intervals.iter().map(|i| i.rho).collect(),
            tail_estimate,
            guarded_nodes,
            asymmetry,
            static_min_eigenvalue: None,
        },
    })
}

/// Static assembly: `S_km = C_L^2/(2 mu (C_L^2 - C_T^2)) int_0^xi_tail g_km dxi`
/// with one Gauss–Legendre rule on `[0, xi_tail]`.
pub fn assemble_static(basis: &ModeBasis, soil: &SoilSpec, cfg: &QuadConfig) -> Result<SMatrix> {
    cfg.validate()?;
    soil.validate()?;
    let radius = basis.radius();
    let xi_tail = cfg.tail.floor(radius, basis.max_lambda());
    let nodes = cfg
        .total_nodes
        .unwrap_or_else(|| auto_nodes(cfg, xi_tail * radius) * 2)
        .min(MAX_RULE);
    let rule = gauss_legendre(nodes)?;
    let half = 0.5 * xi_tail;
    let coef = soil.static_coefficient();
    let xs: Vec<f64> = rule.nodes.iter().map(|&u| half * (u + 1.0)).collect();
    let c: Vec<f64> = rule.weights.iter().map(|&w| w * half * coef).collect();
    let transformer = BasisTransformer::new(basis);
    let t = transform_table(&transformer, &xs);
    let s = weighted_gram(&t, &c);
    let n = basis.len();
    let mut entries = DMatrix::<Complex>::from_fn(n, n, |i, j| Complex::new(s[(i, j)], 0.0));
    check_finite(&entries, "static S-matrix")?;
    let asymmetry = symmetrize(&mut entries);
    let sym = DMatrix::<f64>::from_fn(n, n, |i, j| entries[(i, j)].re);
    let min_eig = SymmetricEigen::new(sym).eigenvalues.min();
    if min_eig <= 0.0 {
        warn!("static S-matrix is not positive definite (min eigenvalue {min_eig:.3e})");
    }
    let t_tail = transformer.eval(xi_tail);
    let gmax = t_tail.iter().map(|v| v * v).fold(0.0, f64::max);
    Ok(SMatrix {
        omega: 0.0,
        entries,
        meta: SMatrixMeta {
            is_static: true,
            node_counts: vec![nodes],
            xi_tail,
            rho: Vec::new(),
            tail_estimate: 0.5 * coef * gmax * xi_tail,
            guarded_nodes: 0,
            asymmetry,
            static_min_eigenvalue: Some(min_eig),
        },
    })
}

/// Routes to the static path below the switch frequency.
pub fn assemble_at(basis: &ModeBasis, soil: &SoilSpec, omega: f64, cfg: &QuadConfig) -> Result<SMatrix> {
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(invalid("omega", format!("must be finite and nonnegative, got {omega}")));
    }
    if omega <= cfg.omega_switch(soil, basis.radius()) {
        assemble_static(basis, soil, cfg)
    } else {
        let kernel = HalfspaceKernel::new(soil, omega)?;
        assemble(basis, &kernel, cfg)
    }
}

/// Principal-branch radicals at a complex frequency, for comparison oracles.
pub fn alpha_hs_shifted(soil: &SoilSpec, omega: Complex, xi: f64) -> Complex {
    let kl = omega / soil.c_l;
    let kt = omega / soil.c_t;
    let x2 = Complex::new(xi * xi, 0.0);
    let a = complex_sqrt_decaying(x2 - kl * kl);
    let b = complex_sqrt_decaying(x2 - kt * kt);
    let c = x2 * 2.0 - kt * kt;
    let om = c * c - x2 * a * b * 4.0;
    -a * kt * kt / (om * soil.shear_modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plate_modes::{find_modes, PlateSpec};

    #[test]
    fn normalized_matrix_is_radius_comparable() {
        let (basis, soil) = setup(3);
        let gram = crate::plate_modes::gram_matrix(&basis);
        let s = assemble_at(&basis, &soil, 2e3, &QuadConfig::default()).unwrap();
        let sn = s.normalized(&gram).unwrap();
        assert_eq!(relative_difference(&sn, &sn).unwrap(), 0.0);
        let k = 1;
        let expect = s.entries[(k, k)] / gram[(k, k)];
        assert!((sn[(k, k)] - expect).norm() < 1e-14 * expect.norm());
        assert!(s.normalized(&DMatrix::zeros(2, 2)).is_err());
    }

    fn setup(n: usize) -> (ModeBasis, SoilSpec) {
        let plate = PlateSpec::new(70e9, 0.3, 2700.0, 0.0127, 0.0762).unwrap();
        (find_modes(&plate, n).unwrap(), SoilSpec::new(5e8, 1000.0, 500.0).unwrap())
    }

    #[test]
    fn mid_point_and_map_assignment() {
        let soil = SoilSpec::new(1.0, 1000.0, 500.0).unwrap();
        let k = HalfspaceKernel::new(&soil, 1000.0).unwrap();
        let plan = plan_quadrature(&k, &QuadConfig::default(), 0.1, 0.0).unwrap();
        assert_eq!(plan.xi_mid(), 1.5);
        let maps: Vec<_> = plan.intervals.iter().map(|i| i.map).collect();
        use EndpointMap::*;
        assert_eq!(maps, vec![Right, Left, Right, Left]);
        assert!(plan.intervals[3].a < k.xi_r && k.xi_r < plan.intervals[3].b);
    }

    #[test]
    fn singularity_images() {
        let (a, b) = (0.0, 1.0);
        let u = EndpointMap::Right.inverse(a, b, Complex::new(-1.0, 0.0));
        let s = 2.0 * 2f64.sqrt();
        assert!((u[0] - Complex::new(s - 1.0, 0.0)).norm() < 1e-15);
        assert!((u[1] - Complex::new(-s - 1.0, 0.0)).norm() < 1e-15);
        let u = EndpointMap::Right.inverse(a, b, Complex::new(2.0, 0.0));
        let g = 2.0 * ((2.0 - 1.0) / 1.0f64).sqrt();
        assert!((u[0] - Complex::new(-1.0, g)).norm() < 1e-15);
        assert!((u[1] - Complex::new(-1.0, -g)).norm() < 1e-15);
        let e = EndpointMap::Left.inverse(2.0, 5.0, Complex::new(2.0, 0.0));
        assert!((e[0] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn maps_cover_interval_in_order() {
        for map in [EndpointMap::Left, EndpointMap::Right] {
            let r = gauss_legendre(40).unwrap();
            let iv = Interval::new(2.0, 7.0, map, 40, &[]);
            let mut v = Vec::new();
            push_mapped(&r, &iv, &mut v);
            let len: f64 = v.iter().map(|p| p.1).sum();
            assert!((len - 5.0).abs() < 1e-13);
            let int: f64 = v.iter().map(|p| p.1 * p.0 * p.0).sum();
            assert!((int - (343.0 - 8.0) / 3.0).abs() < 1e-11);
        }
    }

    #[test]
    fn bernstein_radius_exceeds_one() {
        let (_, soil) = setup(1);
        for &w in &[10.0, 1e3, 1e5] {
            let k = HalfspaceKernel::new(&soil, w).unwrap();
            let plan = plan_quadrature(&k, &QuadConfig::default(), 0.0762, 0.0).unwrap();
            for iv in &plan.intervals {
                assert!(iv.rho > 1.0, "omega={w}: {iv:?}");
            }
        }
    }

    #[test]
    fn rejects_tail_below_pole() {
        let (_, soil) = setup(1);
        let k = HalfspaceKernel::new(&soil, 1e5).unwrap();
        let cfg = QuadConfig {
            tail: TailSpec {
                relative: 1.0001,
                absolute: Some(1.0),
            },
            ..QuadConfig::default()
        };
        let cfg2 = QuadConfig {
            tail: TailSpec {
                relative: 0.5,
                absolute: Some(1.0),
            },
            ..QuadConfig::default()
        };
        assert!(plan_quadrature(&k, &cfg, 0.0762, 0.0).is_ok());
        assert!(plan_quadrature(&k, &cfg2, 0.0762, 0.0).is_err());
    }

    #[test]
    fn btilde_is_continuous_and_reconstructs_alpha() {
        let (basis, soil) = setup(3);
        let k = HalfspaceKernel::new(&soil, 2e3).unwrap();
        let (a, b) = (&basis.modes[1], &basis.modes[2]);
        let g = k.guard * k.xi_r;
        let l = integrand_btilde(k.xi_r - g, &k, a, b);
        let r = integrand_btilde(k.xi_r + g, &k, a, b);
        assert!((l - r).norm() < 1e-4 * l.norm());
        assert_eq!(integrand_btilde(k.xi_r, &k, a, b), r);
        let xi = 0.7 * k.xi_r;
        let gr = g_km(a, b, k.xi_r) * k.xi_r;
        let back = integrand_btilde(xi, &k, a, b) + k.residue * gr / (xi - k.xi_r);
        let direct = k.alpha_hs(xi).unwrap() * g_km(a, b, xi) * xi;
        assert!((back - direct).norm() <= 1e-14 * direct.norm());
    }

    #[test]
    fn btilde_matches_shifted_frequency() {
        let (basis, soil) = setup(3);
        let w = 2e3;
        let k = HalfspaceKernel::new(&soil, w).unwrap();
        let (a, b) = (&basis.modes[0], &basis.modes[2]);
        for &f in &[0.3, 1.2, 1.8, 3.0] {
            let xi = f * k.k_t;
            let shifted = alpha_hs_shifted(&soil, Complex::new(w, 1e-8 * w), xi);
            let gr = g_km(a, b, k.xi_r) * k.xi_r;
            let oracle = shifted * g_km(a, b, xi) * xi - k.residue * gr / (xi - k.xi_r);
            let v = integrand_btilde(xi, &k, a, b);
            assert!((v - oracle).norm() < 1e-6 * oracle.norm(), "f={f}");
        }
    }

    #[test]
    fn fast_and_entrywise_paths_agree() {
        let (basis, soil) = setup(4);
        let k = HalfspaceKernel::new(&soil, 3e3).unwrap();
        let cfg = QuadConfig::default().with_total_nodes(400);
        let s = assemble(&basis, &k, &cfg).unwrap();
        let plan = plan_quadrature(&k, &cfg, basis.radius(), basis.max_lambda()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = assemble_entry(&basis.modes[i], &basis.modes[j], &plan, &k).unwrap();
                assert!((e - s.entries[(i, j)]).norm() < 1e-9 * s.entries[(i, j)].norm());
            }
        }
        let one = find_modes(&basis.plate, 1).unwrap();
        let s1 = assemble(&one, &k, &cfg).unwrap();
        let e = assemble_entry(&one.modes[0], &one.modes[0], &plan, &k).unwrap();
        assert!((s1.entries[(0, 0)] - e).norm() < 1e-12 * e.norm());
    }

    #[test]
    fn symmetric_and_residue_is_imaginary() {
        let (basis, soil) = setup(5);
        let k = HalfspaceKernel::new(&soil, 5e3).unwrap();
        let s = assemble(&basis, &k, &QuadConfig::default()).unwrap();
        assert!(s.meta.asymmetry < 1e-12);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(s.entries[(i, j)], s.entries[(j, i)]);
            }
        }
        let plan = plan_quadrature(&k, &QuadConfig::default(), basis.radius(), basis.max_lambda()).unwrap();
        let pf = pole_factor(&plan, &k);
        assert_eq!(pf.im, std::f64::consts::PI);
        let gr = g_km(&basis.modes[1], &basis.modes[1], k.xi_r) * k.xi_r;
        let residue_term = Complex::new(0.0, pf.im) * (k.residue * gr);
        assert_eq!(residue_term.re, 0.0);
    }

    #[test]
    fn static_path_is_real_symmetric_positive() {
        let (basis, soil) = setup(6);
        let s = assemble_static(&basis, &soil, &QuadConfig::default()).unwrap();
        assert!(s.meta.is_static);
        assert!(s.entries.iter().all(|z| z.im == 0.0));
        assert!(s.meta.static_min_eigenvalue.unwrap() > 0.0);
        let routed = assemble_at(&basis, &soil, 0.0, &QuadConfig::default()).unwrap();
        assert_eq!(routed.entries, s.entries);
    }

    #[test]
    fn static_matches_low_frequency_dynamic() {
        let (basis, soil) = setup(4);
        let cfg = QuadConfig::default();
        let w = 1e-4 * soil.c_t / basis.radius();
        let st = assemble_static(&basis, &soil, &cfg).unwrap();
        let dy = assemble_at(&basis, &soil, w, &cfg).unwrap();
        assert!(!dy.meta.is_static);
        let diff = (&dy.entries - &st.entries).norm();
        assert!(diff < 1e-3 * st.entries.norm(), "{}", diff / st.entries.norm());
    }
}
