//! Special functions, Gauss–Legendre rules and the branch-resolved square root.

pub mod bessel;
pub mod quadrature;

pub use bessel::{bessel_i_scaled, bessel_j, i0e, i1e, j0, j0_j1, j1, Order};
pub use quadrature::{gauss_legendre, GaussRule};

use crate::Complex;

/// Square root with `Re(w) >= 0`, and `Im(w) <= 0` when `Re(w) == 0`.
///
/// This is the `eta -> 0+` limit of the principal root of `xi^2 - ((omega + i eta)/c)^2`,
/// so on the real axis below a branch point `sqrt(xi^2 - k^2) = -i sqrt(k^2 - xi^2)`.
pub fn complex_sqrt_decaying(z: Complex) -> Complex {
    let w = z.sqrt();
    if w.re == 0.0 && w.im > 0.0 {
        Complex::new(0.0, -w.im)
    } else if w.re < 0.0 {
        -w
    } else {
        w
    }
}

/// Decaying-branch `sqrt(xi^2 - k^2)` for real arguments.
pub fn radical(xi: f64, k: f64) -> Complex {
    let d = (xi - k) * (xi + k);
    if d >= 0.0 {
        Complex::new(d.sqrt(), 0.0)
    } else {
        Complex::new(0.0, -(-d).sqrt())
    }
}
