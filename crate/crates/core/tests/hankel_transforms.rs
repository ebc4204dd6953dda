mod common;

use common::{integrate, linear_fit, plate, rng};
use platesoil::hankel::{g_km, hankel_i0, hankel_i0_scaled, hankel_j0, mode_transform};
use platesoil::numkernel::{i0e, j0};
use platesoil::plate_modes::find_modes;
use rand::Rng;

const R: f64 = 0.0762;

/// `|q - closed| <= 1e-9 |q|`, with a roundoff allowance proportional to `int |f|`
/// for pairs whose transform nearly cancels.
fn check(closed: f64, f: impl Fn(f64) -> f64, what: &str) {
    let q = integrate(&f, 0.0, R, 0.0, 1e-13);
    let l1 = integrate(|s| f(s).abs(), 0.0, R, 0.0, 1e-8);
    let err = (closed - q).abs();
    assert!(err <= 1e-9 * q.abs() + 1e-12 * l1, "{what}: closed {closed} quad {q}");
}

fn random_pairs(seed: u64) -> Vec<(f64, f64)> {
    let mut g = rng(seed);
    (0..200)
        .map(|i| {
            let x: f64 = g.gen_range(0.2..80.0);
            let y = match i % 4 {
                0 => x * (1.0 + g.gen_range(-1e-5..1e-5)),
                1 => g.gen_range(0.0..3.0),
                _ => g.gen_range(0.0..250.0),
            };
            (x / R, y / R)
        })
        .collect()
}

#[test]
fn j0_closed_form_on_random_pairs() {
    for (lam, xi) in random_pairs(11) {
        check(hankel_j0(lam, R, xi), |s| j0(lam * s) * j0(xi * s) * s, &format!("J lam={lam} xi={xi}"));
    }
}

#[test]
fn i0_closed_form_on_random_pairs() {
    for (lam, xi) in random_pairs(12) {
        // scaled form keeps the oracle finite for every lambda R in range
        check(
            hankel_i0_scaled(lam, R, xi),
            |s| i0e(lam * s) * (lam * (s - R)).exp() * j0(xi * s) * s,
            &format!("I lam={lam} xi={xi}"),
        );
        if lam * R < 30.0 {
            let unscaled = integrate(|s| i0e(lam * s) * (lam * s).exp() * j0(xi * s) * s, 0.0, R, 0.0, 1e-13);
            assert!((hankel_i0(lam, R, xi) / unscaled - 1.0).abs() < 1e-9);
        }
    }
}

/// Upper envelope over one period `2 pi / R` starting at `xi`.
fn envelope(f: impl Fn(f64) -> f64, xi: f64) -> f64 {
    (0..96)
        .map(|i| f(xi + 2.0 * std::f64::consts::PI / R * i as f64 / 96.0).abs())
        .fold(0.0, f64::max)
}

fn decay_slope(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lx, mut ly) = (vec![], vec![]);
    for i in 0..=30 {
        let xi = 1e2 / R * 10f64.powf(3.0 * i as f64 / 30.0);
        lx.push(xi.ln());
        ly.push(envelope(&f, xi).ln());
    }
    linear_fit(&lx, &ly).0
}

#[test]
fn decay_exponents() {
    let basis = find_modes(&plate(R), 6).unwrap();
    for m in &basis.modes {
        let s = decay_slope(|xi| mode_transform(m, xi));
        assert!((s + 1.5).abs() < 0.1, "mode {} slope {s}", m.index);
    }
    for (k, m) in [(0, 0), (1, 2), (3, 5), (5, 5)] {
        let (a, b) = (&basis.modes[k], &basis.modes[m]);
        let s = decay_slope(|xi| g_km(a, b, xi));
        assert!((s + 3.0).abs() < 0.1, "g_{k}{m} slope {s}");
    }
}
