//! Raised-cosine contact pulse and its spectrum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Complex;

/// `p(t) = F0 (1 - cos(2 pi t / T0)) / 2` on `[0, T0]`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadPulse {
    /// Peak force [N].
    pub f0: f64,
    /// Contact duration [s].
    pub t0: f64,
}

/// `sin(y) / y` with a series near zero.
fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-3 {
        let y2 = y * y;
        1.0 - y2 / 6.0 * (1.0 - y2 / 20.0)
    } else {
        y.sin() / y
    }
}

impl LoadPulse {
    pub fn new(f0: f64, t0: f64) -> Result<Self> {
        if !(f0.is_finite() && f0 > 0.0) {
            return Err(invalid("f0", "must be positive and finite"));
        }
        if !(t0.is_finite() && t0 > 0.0) {
            return Err(invalid("t0", "must be positive and finite"));
        }
        Ok(Self { f0, t0 })
    }

    pub fn value(&self, t: f64) -> f64 {
        if (0.0..=self.t0).contains(&t) {
            0.5 * self.f0 * (1.0 - (2.0 * PI * t / self.t0).cos())
        } else {
            0.0
        }
    }

    /// `int_0^T0 p(t) e^{i omega t} dt`.
    ///
    /// With `x = omega T0 / 2` this is `(F0 T0 / 2) e^{ix} sinc(x) pi^2 / (pi^2 - x^2)`;
    /// near `x = +-pi` the factor `sin(x) / (pi - |x|)` is rewritten as `sinc(pi - |x|)`.
    pub fn spectrum(&self, omega: f64) -> Complex {
        let x = 0.5 * omega * self.t0;
        let ax = x.abs();
        let shape = if ax < 1.0 {
            sinc(ax) * PI * PI / ((PI - ax) * (PI + ax))
        } else {
            PI * PI * sinc(PI - ax) / (ax * (PI + ax))
        };
        Complex::from_polar(0.5 * self.f0 * self.t0 * shape, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(p: &LoadPulse, w: f64) -> Complex {
        // composite Simpson on a smooth integrand
        let n = 20000;
        let h = p.t0 / n as f64;
        let mut s = Complex::new(0.0, 0.0);
        for k in 0..=n {
            let t = k as f64 * h;
            let c = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += Complex::from_polar(c * p.value(t), w * t);
        }
        s * (h / 3.0)
    }

    #[test]
    fn area_at_zero() {
        let p = LoadPulse::new(1000.0, 2e-4).unwrap();
        assert!((p.spectrum(0.0) - Complex::new(0.1, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn matches_time_quadrature() {
        let p = LoadPulse::new(750.0, 3e-4).unwrap();
        let w0 = 2.0 * PI / p.t0;
        for &w in &[1.0, 3e3, w0, w0 * (1.0 + 1e-9), 0.999 * w0, 2.5 * w0, -1.7 * w0, 40.0 * w0] {
            let a = p.spectrum(w);
            let b = direct(&p, w);
            assert!((a - b).norm() < 1e-10 * p.f0 * p.t0, "omega={w}");
        }
    }

    #[test]
    fn conjugate_symmetry_and_decay() {
        let p = LoadPulse::new(1.0, 1.0).unwrap();
        assert_eq!(p.spectrum(-3.3), p.spectrum(3.3).conj());
        assert!(p.spectrum(1e3).norm() < 1e-2 * p.f0 * p.t0);
    }

    #[test]
    fn rejects_bad_pulse() {
        assert!(LoadPulse::new(0.0, 1.0).is_err());
        assert!(LoadPulse::new(1.0, -1.0).is_err());
    }
}
