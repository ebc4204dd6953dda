//! Direct Fourier synthesis on a frequency grid.
//!
//! Transform pair: `f_hat(omega) = int f(t) e^{i omega t} dt` and, for real `f`,
//! `f(t) = (1/pi) Re int_0^inf f_hat(omega) e^{-i omega t} d omega`.

use std::f64::consts::PI;

use log::warn;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::Complex;

/// Relative size of `|f_hat(omega_max)|` above which truncation is reported.
pub const TAIL_TOLERANCE: f64 = 1e-3;

/// Largest grid step permitted for times up to `t_max`.
pub fn max_step_for(t_max: f64) -> f64 {
    PI / (4.0 * t_max)
}

fn validate(grid: &[f64], spectrum: &[Complex], times: &[f64]) -> Result<()> {
    if grid.len() != spectrum.len() {
        return Err(Error::Dimension(format!(
            "grid has {} points, spectrum {}",
            grid.len(),
            spectrum.len()
        )));
    }
    if grid.len() < 2 {
        return Err(invalid("grid", "needs at least two frequencies"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("grid", "must be strictly increasing"));
    }
    let step = grid
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    if let Some(&t) = times.iter().max_by(|a, b| a.abs().total_cmp(&b.abs())) {
        let required = max_step_for(t.abs());
        if step > required * (1.0 + 1e-12) {
            return Err(Error::Aliasing {
                t,
                required,
                actual: step,
            });
        }
    }
    let peak = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let last = spectrum.last().map(|z| z.norm()).unwrap_or(0.0);
    if peak > 0.0 && last > TAIL_TOLERANCE * peak {
        warn!(
            "spectrum not decayed at omega_max = {:.4e}: |f(omega_max)|/max = {:.3e}",
            grid[grid.len() - 1],
            last / peak
        );
    }
    Ok(())
}

fn one_sided(grid: &[f64], spectrum: &[Complex], t: f64) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..grid.len() - 1 {
        let h = grid[i + 1] - grid[i];
        let a = spectrum[i] * Complex::from_polar(1.0, -grid[i] * t);
        let b = spectrum[i + 1] * Complex::from_polar(1.0, -grid[i + 1] * t);
        acc += (a + b) * (0.5 * h);
    }
    acc
}

/// Real time signal `(1/pi) Re int f_hat e^{-i omega t}` by the composite trapezoid rule.
/// The grid should start at `omega = 0`; anything below `grid[0]` is not integrated.
pub fn synthesize_time(grid: &[f64], spectrum: &[Complex], times: &[f64]) -> Result<Vec<f64>> {
    validate(grid, spectrum, times)?;
    Ok(times
        .par_iter()
        .map(|&t| one_sided(grid, spectrum, t).re / PI)
        .collect())
}

/// Two-sided synthesis `(1/2pi) int_{-inf}^{inf}` using the Hermitian extension
/// `f_hat(-omega) = conj(f_hat(omega))`, summed explicitly as complex numbers.
/// Returns `(value, imaginary residue)` per time.
pub fn synthesize_time_two_sided(
    grid: &[f64],
    spectrum: &[Complex],
    times: &[f64],
) -> Result<Vec<(f64, f64)>> {
    validate(grid, spectrum, times)?;
    let neg_grid: Vec<f64> = grid.iter().rev().map(|w| -w).collect();
    let neg_spec: Vec<Complex> = spectrum.iter().rev().map(|z| z.conj()).collect();
    Ok(times
        .par_iter()
        .map(|&t| {
            let v = (one_sided(grid, spectrum, t) + one_sided(&neg_grid, &neg_spec, t)) / (2.0 * PI);
            (v.re, v.im)
        })
        .collect())
}

/// Uniform grid `0, d, 2d, ..., omega_max` with `count` points.
pub fn uniform_grid(omega_max: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(omega_max > 0.0) {
        return Err(invalid("grid", "needs omega_max > 0 and at least two points"));
    }
    let d = omega_max / (count - 1) as f64;
    Ok((0..count).map(|i| i as f64 * d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::LoadPulse;

    #[test]
    fn zero_spectrum_gives_zero_signal() {
        let grid = uniform_grid(100.0, 50).unwrap();
        let spec = vec![Complex::new(0.0, 0.0); 50];
        let s = synthesize_time(&grid, &spec, &[0.0, 0.001]).unwrap();
        assert!(s.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn recovers_pulse() {
        let p = LoadPulse::new(1000.0, 2e-4).unwrap();
        let d = 2.0 * PI / (64.0 * p.t0);
        let wmax = 200.0 / p.t0;
        let count = (wmax / d).ceil() as usize + 1;
        let grid: Vec<f64> = (0..count).map(|i| i as f64 * d).collect();
        let spec: Vec<Complex> = grid.iter().map(|&w| p.spectrum(w)).collect();
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * p.t0 / 100.0).collect();
        let s = synthesize_time(&grid, &spec, &times).unwrap();
        let err = times
            .iter()
            .zip(&s)
            .map(|(&t, &v)| (v - p.value(t)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3 * p.f0, "max error {err}");
        let early = synthesize_time(&grid, &spec, &[-0.3 * p.t0, -0.1 * p.t0]).unwrap();
        assert!(early.iter().all(|v| v.abs() < 1e-2 * p.f0));
        let two = synthesize_time_two_sided(&grid, &spec, &times).unwrap();
        for ((re, im), v) in two.iter().zip(&s) {
            assert!((re - v).abs() < 1e-9 * p.f0);
            assert!(im.abs() < 1e-10 * p.f0);
        }
    }

    #[test]
    fn aliasing_guard() {
        let grid = uniform_grid(1e4, 11).unwrap();
        let spec = vec![Complex::new(1.0, 0.0); 11];
        assert!(matches!(
            synthesize_time(&grid, &spec, &[1.0]),
            Err(Error::Aliasing { .. })
        ));
        assert!(synthesize_time(&grid, &spec, &[1e-4]).is_ok());
    }
}
