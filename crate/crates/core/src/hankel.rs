//! Closed-form finite Hankel transforms `int_0^R f(r) J0(xi r) r dr` of the plate modes.
//!
//! With `x = lambda R` and `y = xi R`:
//!
//! * `H[J0(lambda r)] = R^2 (x J1(x) J0(y) - y J0(x) J1(y)) / (x^2 - y^2)`
//! * `H[I0(lambda r)] = R^2 (x I1(x) J0(y) + y I0(x) J1(y)) / (x^2 + y^2)`
//!
//! The `J0` form has a removable singularity at `y = x`; inside a small window it is
//! replaced by its second-order Taylor expansion about `y = x`. The `I0` form is always
//! evaluated with `exp(-x)`-scaled Bessel values, and the scale factor cancels against
//! the stored `a2_scaled` coefficient.

use crate::numkernel::bessel::{i0e, i1e, j0_j1};
use crate::plate_modes::{Mode, ModeBasis};

/// Half-width of the equal-argument window in `|R (xi - lambda)|`.
pub const EQUAL_ARGUMENT_WINDOW: f64 = 1e-4;

/// Dimensionless `J0` transform `h(x, y)` given `J0(x), J1(x), J0(y), J1(y)`.
#[inline]
fn j0_kernel(x: f64, jx: (f64, f64), y: f64, jy: (f64, f64)) -> f64 {
    let d = y - x;
    if d.abs() < EQUAL_ARGUMENT_WINDOW {
        let (a, b) = jx;
        let h0 = 0.5 * (a * a + b * b);
        let h1 = -b * b / (2.0 * x);
        let h2 = (5.0 * b * b - 2.0 * x * a * b - x * x * (a * a + b * b)) / (12.0 * x * x);
        h0 + d * (h1 + d * h2)
    } else {
        (x * jx.1 * jy.0 - y * jx.0 * jy.1) / ((x - y) * (x + y))
    }
}

#[inline]
fn i0_kernel_scaled(x: f64, ix: (f64, f64), y: f64, jy: (f64, f64)) -> f64 {
    (x * ix.1 * jy.0 + y * ix.0 * jy.1) / (x * x + y * y)
}

/// `int_0^R J0(lambda r) J0(xi r) r dr`.
pub fn hankel_j0(lambda: f64, radius: f64, xi: f64) -> f64 {
    let x = lambda * radius;
    let y = xi * radius;
    radius * radius * j0_kernel(x, j0_j1(x), y, j0_j1(y))
}

/// `exp(-lambda R) int_0^R I0(lambda r) J0(xi r) r dr`.
pub fn hankel_i0_scaled(lambda: f64, radius: f64, xi: f64) -> f64 {
    let x = lambda * radius;
    let y = xi * radius;
    radius * radius * i0_kernel_scaled(x, (i0e(x), i1e(x)), y, j0_j1(y))
}

/// `int_0^R I0(lambda r) J0(xi r) r dr`. Overflows once `lambda R` exceeds ~700; the
/// solver only uses [`hankel_i0_scaled`].
pub fn hankel_i0(lambda: f64, radius: f64, xi: f64) -> f64 {
    (lambda * radius).exp() * hankel_i0_scaled(lambda, radius, xi)
}

/// `R J1(xi R) / xi`, the transform of the constant 1, with limit `R^2 / 2` at `xi = 0`.
fn constant_kernel(y: f64, j1y: f64) -> f64 {
    if y == 0.0 {
        0.5
    } else {
        j1y / y
    }
}

/// Finite Hankel transform of one mode.
pub fn mode_transform(mode: &Mode, xi: f64) -> f64 {
    let r = mode.radius;
    let y = xi * r;
    let jy = j0_j1(y);
    ModeConstants::new(mode).eval(y, jy) * (r * r)
}

/// `g_km(xi) = H[phi_k](xi) H[phi_m](xi)`.
pub fn g_km(k: &Mode, m: &Mode, xi: f64) -> f64 {
    mode_transform(k, xi) * mode_transform(m, xi)
}

#[derive(Debug, Clone, Copy)]
struct ModeConstants {
    x: f64,
    a1: f64,
    a2_scaled: f64,
    jx: (f64, f64),
    ix: (f64, f64),
    constant: bool,
}

impl ModeConstants {
    fn new(mode: &Mode) -> Self {
        let x = mode.lambda * mode.radius;
        Self {
            x,
            a1: mode.a1,
            a2_scaled: mode.a2_scaled,
            jx: j0_j1(x),
            ix: (i0e(x), i1e(x)),
            constant: mode.is_constant(),
        }
    }

    /// Dimensionless transform (divide out `R^2`).
    #[inline]
    fn eval(&self, y: f64, jy: (f64, f64)) -> f64 {
        if self.constant {
            return self.a1 * constant_kernel(y, jy.1);
        }
        self.a1 * j0_kernel(self.x, self.jx, y, jy)
            + self.a2_scaled * i0_kernel_scaled(self.x, self.ix, y, jy)
    }
}

/// Evaluates all mode transforms of a basis at one `xi`, sharing `J0(xi R)` and
/// `J1(xi R)` across modes.
#[derive(Debug, Clone)]
pub struct BasisTransformer {
    radius: f64,
    consts: Vec<ModeConstants>,
}

impl BasisTransformer {
    pub fn new(basis: &ModeBasis) -> Self {
        Self {
            radius: basis.radius(),
            consts: basis.modes.iter().map(ModeConstants::new).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.consts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }

    /// Writes `H[phi_n](xi)` for every mode into `out`.
    pub fn eval_into(&self, xi: f64, out: &mut [f64]) {
        let r2 = self.radius * self.radius;
        let y = xi * self.radius;
        let jy = j0_j1(y);
        for (o, c) in out.iter_mut().zip(&self.consts) {
            *o = c.eval(y, jy) * r2;
        }
    }

    pub fn eval(&self, xi: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        self.eval_into(xi, &mut v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::bessel::j0;
    use crate::plate_modes::{find_modes, PlateSpec};

    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn value_at_zero_frequency() {
        let (lam, r) = (37.0, 0.09);
        let x = lam * r;
        let j1x = crate::numkernel::j1(x);
        assert!((hankel_j0(lam, r, 0.0) - r * j1x / lam).abs() < 1e-16);
    }

    #[test]
    fn equal_argument_value() {
        let (lam, r) = (41.3, 0.0762);
        let (a, b) = j0_j1(lam * r);
        let expect = 0.5 * r * r * (a * a + b * b);
        assert!((hankel_j0(lam, r, lam) - expect).abs() < 1e-15 * expect);
    }

    #[test]
    fn window_edges_are_continuous() {
        for &(lam, r) in &[(41.3, 0.0762), (7.0, 1.0), (300.0, 0.5)] {
            let at = hankel_j0(lam, r, lam);
            let dxi = EQUAL_ARGUMENT_WINDOW / r;
            for s in [-1.0, 1.0] {
                let inside = hankel_j0(lam, r, lam + s * dxi * (1.0 - 1e-9));
                let outside = hankel_j0(lam, r, lam + s * dxi * (1.0 + 1e-9));
                assert!((inside - outside).abs() < 1e-11 * at.abs(), "lam={lam} r={r}");
            }
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let r = 0.0762;
        for &(lam, xi) in &[(40.0, 13.0), (40.0, 40.0005), (123.0, 500.0), (3.0, 900.0)] {
            let qj = simpson(&|s: f64| j0(lam * s) * j0(xi * s) * s, 0.0, r, 1e-16);
            assert!((hankel_j0(lam, r, xi) / qj - 1.0).abs() < 1e-9, "J lam={lam} xi={xi}");
            let qi = simpson(
                &|s: f64| i0e(lam * s) * (lam * (s - r)).exp() * j0(xi * s) * s,
                0.0,
                r,
                1e-16,
            );
            assert!((hankel_i0_scaled(lam, r, xi) / qi - 1.0).abs() < 1e-9, "I lam={lam} xi={xi}");
        }
    }

    #[test]
    fn no_overflow_for_large_lambda_r() {
        let plate = PlateSpec::new(70e9, 0.3, 2700.0, 0.01, 1.0).unwrap();
        let basis = find_modes(&plate, 120).unwrap();
        assert!(basis.max_lambda() * plate.radius > 350.0);
        let t = BasisTransformer::new(&basis);
        for &xi in &[0.0, 1.0, 350.0, 1e4] {
            assert!(t.eval(xi).iter().all(|v| v.is_finite()));
        }
        assert!(hankel_i0_scaled(500.0, 1.0, 3.0).is_finite());
    }

    #[test]
    fn transformer_matches_single_mode_path() {
        let plate = PlateSpec::new(70e9, 0.3, 2700.0, 0.0127, 0.0762).unwrap();
        let basis = find_modes(&plate, 6).unwrap();
        let t = BasisTransformer::new(&basis);
        for &xi in &[0.0, 10.0, 77.7, 2000.0] {
            let v = t.eval(xi);
            for (m, &val) in basis.modes.iter().zip(&v) {
                assert_eq!(val, mode_transform(m, xi));
            }
        }
        let c = basis.modes[0];
        assert!((mode_transform(&c, 0.0) - 0.5 * 0.0762f64.powi(2)).abs() < 1e-18);
    }

    #[test]
    fn g_is_symmetric_and_square_nonnegative() {
        let plate = PlateSpec::new(70e9, 0.3, 2700.0, 0.0127, 0.0762).unwrap();
        let basis = find_modes(&plate, 5).unwrap();
        for &xi in &[0.5, 33.0, 400.0] {
            for k in &basis.modes {
                assert!(g_km(k, k, xi) >= 0.0);
                for m in &basis.modes {
                    assert_eq!(g_km(k, m, xi), g_km(m, k, xi));
                }
            }
        }
    }
}
