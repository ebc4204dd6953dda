//! Shared oracles for the integration tests. Nothing here calls the quadrature or
//! kernel code under test.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use platesoil::halfspace::SoilSpec;
use platesoil::plate_modes::PlateSpec;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn plate(radius: f64) -> PlateSpec {
    PlateSpec::new(70e9, 0.3, 2700.0, 0.0127, radius).unwrap()
}

pub fn soil() -> SoilSpec {
    SoilSpec::new(5e8, 1000.0, 500.0).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// `(integral, error estimate, integral of |f|)` on one panel.
fn gk15<F: FnMut(f64) -> C>(f: &mut F, a: f64, b: f64) -> (C, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let (fl, fr) = (f(c - x), f(c + x));
        let s = fl + fr;
        k += s * WGK[i];
        abs += (fl.norm() + fr.norm()) * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm(), abs * h.abs())
}

/// Adaptive Gauss–Kronrod (7, 15). The error target is the larger of `abs_tol` and
/// `rel_tol` times a coarse estimate of `|I|`, floored at roundoff of `int |f|`.
pub fn integrate_c<F: FnMut(f64) -> C>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> C {
    adaptive(f, a, b, abs_tol, rel_tol, 1e-13)
}

/// As [`integrate_c`], but panels stop refining once the Kronrod/Gauss difference is
/// below `noise` times `int |f|` on the panel. Use for integrands whose evaluation
/// carries more than roundoff-level relative error.
pub fn adaptive<F: FnMut(f64) -> C>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, noise: f64) -> C {
    let m = 32;
    let h = (b - a) / m as f64;
    let coarse: Vec<(C, f64, f64)> = (0..m).map(|i| gk15(&mut f, a + i as f64 * h, a + (i + 1) as f64 * h)).collect();
    let total: C = coarse.iter().map(|c| c.0).sum();
    let l1: f64 = coarse.iter().map(|c| c.2).sum();
    let tol = abs_tol.max(rel_tol * total.norm()).max(1e-14 * l1);
    let mut sum = C::new(0.0, 0.0);
    for (i, p) in coarse.into_iter().enumerate() {
        let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        sum += refine(&mut f, x0, x1, p, tol / m as f64, noise, 40);
    }
    sum
}

fn refine<F: FnMut(f64) -> C>(f: &mut F, a: f64, b: f64, piece: (C, f64, f64), tol: f64, noise: f64, depth: u32) -> C {
    let (v, e, abs) = piece;
    if e <= tol || e <= noise * abs || depth == 0 {
        return v;
    }
    let m = 0.5 * (a + b);
    if m <= a || m >= b {
        return v;
    }
    let l = gk15(f, a, m);
    let r = gk15(f, m, b);
    refine(f, a, m, l, 0.5 * tol, noise, depth - 1) + refine(f, m, b, r, 0.5 * tol, noise, depth - 1)
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    integrate_c(|x| C::new(f(x), 0.0), a, b, abs_tol, rel_tol).re
}

/// Sum of adaptive integrals over consecutive breakpoints.
pub fn integrate_pieces<F: FnMut(f64) -> C>(mut f: F, breaks: &[f64], rel_tol: f64, noise: f64) -> C {
    breaks
        .windows(2)
        .map(|w| adaptive(&mut f, w[0], w[1], 0.0, rel_tol, noise))
        .sum()
}

/// Least-squares line through `(x, y)`: returns `(slope, intercept, r_squared)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx, sxy * sxy / (sxx * syy))
}
