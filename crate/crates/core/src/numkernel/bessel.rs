//! Bessel functions of the first kind (orders 0 and 1) and exponentially
//! scaled modified Bessel functions of the first kind.
//!
//! `J` uses three regimes: a power series for `|x| < 1` (keeps relative
//! accuracy near the origin), Miller's backward recurrence normalised by
//! `J0 + 2 sum J_2k = 1` up to [`ASYMPTOTIC_THRESHOLD`], and the Hankel
//! asymptotic expansion beyond. The scaled `I` functions use the Cephes
//! Chebyshev expansions of `exp(-x) I_n(x)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Switch point between backward recurrence and the asymptotic expansion.
pub const ASYMPTOTIC_THRESHOLD: f64 = 20.0;

const SERIES_THRESHOLD: f64 = 1.0;

/// Order selector for the two Bessel orders the solver needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Zero,
    One,
}

/// `J_order(x)` for finite `x`.
pub fn bessel_j(order: Order, x: f64) -> f64 {
    match order {
        Order::Zero => j0(x),
        Order::One => j1(x),
    }
}

/// `exp(-x) I_order(x)` for `x >= 0`.
pub fn bessel_i_scaled(order: Order, x: f64) -> f64 {
    match order {
        Order::Zero => i0e(x),
        Order::One => i1e(x),
    }
}

pub fn j0(x: f64) -> f64 {
    j01(x.abs()).0
}

pub fn j1(x: f64) -> f64 {
    let v = j01(x.abs()).1;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `(J0(x), J1(x))` for `x >= 0`, sharing work between the two orders.
pub fn j0_j1(x: f64) -> (f64, f64) {
    let (a, b) = j01(x.abs());
    if x < 0.0 {
        (a, -b)
    } else {
        (a, b)
    }
}

fn j01(x: f64) -> (f64, f64) {
    if x < SERIES_THRESHOLD {
        series_j01(x)
    } else if x < ASYMPTOTIC_THRESHOLD {
        miller_j01(x)
    } else {
        asymptotic_j01(x)
    }
}

fn series_j01(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let mut t0 = 1.0;
    let mut s0 = 1.0;
    let mut t1 = 0.5 * x;
    let mut s1 = t1;
    for k in 1..30 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0.abs() < 1e-18 * s0.abs() && t1.abs() <= 1e-18 * s1.abs() {
            break;
        }
    }
    (s0, s1)
}

fn miller_j01(x: f64) -> (f64, f64) {
    let start = 2 * (((x + 26.0 + 4.0 * x.sqrt()) / 2.0).ceil() as usize);
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{n+1}
    let mut cur = 1e-300; // J_n
    let mut norm = 0.0;
    let mut out1 = 0.0;
    let mut n = start;
    while n > 0 {
        let prev = n as f64 * two_over_x * cur - next; // J_{n-1}
        next = cur;
        cur = prev;
        let m = n - 1;
        if m > 0 && m % 2 == 0 {
            norm += 2.0 * cur;
        }
        if m == 1 {
            out1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            out1 *= 1e-250;
        }
        n -= 1;
    }
    norm += cur;
    (cur / norm, out1 / norm)
}

fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    // P and Q series of the Hankel expansion; a_k = prod (4nu^2 - (2j-1)^2) / (k! (8x)^k)
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * 8.0 * x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn asymptotic_j01(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    // chi0 = x - pi/4, chi1 = x - 3 pi / 4
    let cos0 = (c + s) * FRAC_1_SQRT_2;
    let sin0 = (s - c) * FRAC_1_SQRT_2;
    let cos1 = (s - c) * FRAC_1_SQRT_2;
    let sin1 = -(s + c) * FRAC_1_SQRT_2;
    (
        amp * (p0 * cos0 - q0 * sin0),
        amp * (p1 * cos1 - q1 * sin1),
    )
}

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const I0_A: [f64; 30] = [
    -4.41534164647933937950E-18,
    3.33079451882223809783E-17,
    -2.43127984654795469359E-16,
    1.71539128555513303061E-15,
    -1.16853328779934516808E-14,
    7.67618549860493561688E-14,
    -4.85644678311192946090E-13,
    2.95505266312963983461E-12,
    -1.72682629144155570723E-11,
    9.67580903537323691224E-11,
    -5.18979560163526290666E-10,
    2.65982372468238665035E-9,
    -1.30002500998624804212E-8,
    6.04699502254191894932E-8,
    -2.67079385394061173391E-7,
    1.11738753912010371815E-6,
    -4.41673835845875056359E-6,
    1.64484480707288970893E-5,
    -5.75419501008210370398E-5,
    1.88502885095841655729E-4,
    -5.76375574538582365885E-4,
    1.63947561694133579842E-3,
    -4.32430999505057594430E-3,
    1.05464603945949983183E-2,
    -2.37374148058994688156E-2,
    4.93052842396707084878E-2,
    -9.49010970480476444210E-2,
    1.71620901522208775349E-1,
    -3.04682672343198398683E-1,
    6.76795274409476084995E-1,
];

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const I0_B: [f64; 25] = [
    -7.23318048787475395456E-18,
    -4.83050448594418207126E-18,
    4.46562142029675999901E-17,
    3.46122286769746109310E-17,
    -2.82762398051658348494E-16,
    -3.42548561967721913462E-16,
    1.77256013305652638360E-15,
    3.81168066935262242075E-15,
    -9.55484669882830764870E-15,
    -4.15056934728722208663E-14,
    1.54008621752140982691E-14,
    3.85277838274214270114E-13,
    7.18012445138366623367E-13,
    -1.79417853150680611778E-12,
    -1.32158118404477131188E-11,
    -3.14991652796324136454E-11,
    1.18891471078464383424E-11,
    4.94060238822496958910E-10,
    3.39623202570838634515E-9,
    2.26666899049817806459E-8,
    2.04891858946906374183E-7,
    2.89137052083475648297E-6,
    6.88975834691682398426E-5,
    3.36911647825569408990E-3,
    8.04490411014108831608E-1,
];

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const I1_A: [f64; 29] = [
    2.77791411276104639959E-18,
    -2.11142121435816608115E-17,
    1.55363195773620046921E-16,
    -1.10559694773538630805E-15,
    7.60068429473540693410E-15,
    -5.04218550472791168711E-14,
    3.22379336594557470981E-13,
    -1.98397439776494371520E-12,
    1.17361862988909016308E-11,
    -6.66348972350202774223E-11,
    3.62559028155211703701E-10,
    -1.88724975172282928790E-9,
    9.38153738649577178388E-9,
    -4.44505912879632808065E-8,
    2.00329475355213526229E-7,
    -8.56872026469545474066E-7,
    3.47025130813767847674E-6,
    -1.32731636560394358279E-5,
    4.78156510755005422638E-5,
    -1.61760815825896745588E-4,
    5.12285956168575772895E-4,
    -1.51357245063125314899E-3,
    4.15642294431288815669E-3,
    -1.05640848946261981558E-2,
    2.47264490306265168283E-2,
    -5.29459812080949914269E-2,
    1.02643658689847095384E-1,
    -1.76416518357834055153E-1,
    2.52587186443633654823E-1,
];

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const I1_B: [f64; 25] = [
    7.51729631084210481353E-18,
    4.41434832307170791151E-18,
    -4.65030536848935832153E-17,
    -3.20952592199342395980E-17,
    2.96262899764595013876E-16,
    3.30820231092092828324E-16,
    -1.88035477551078244854E-15,
    -3.81440307243700780478E-15,
    1.04202769841288027642E-14,
    4.27244001671195135429E-14,
    -2.10154184277266431302E-14,
    -4.08355111109219731823E-13,
    -7.19855177624590851209E-13,
    2.03562854414708950722E-12,
    1.41258074366137813316E-11,
    3.25260358301548823856E-11,
    -1.89749581235054123450E-11,
    -5.58974346219658380687E-10,
    -3.83538038596423702205E-9,
    -2.63146884688951950684E-8,
    -2.51223623787020892529E-7,
    -3.88256480887769039346E-6,
    -1.10588938762623716291E-4,
    -9.76109749136146840777E-3,
    7.78576235018280120474E-1,
];

fn chbevl(x: f64, coeffs: &[f64]) -> f64 {
    let mut b0 = coeffs[0];
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in &coeffs[1..] {
        b2 = b1;
        b1 = b0;
        b0 = x * b1 - b2 + c;
    }
    0.5 * (b0 - b2)
}

/// `exp(-|x|) I0(x)`.
pub fn i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= 8.0 {
        chbevl(0.5 * x - 2.0, &I0_A)
    } else {
        chbevl(32.0 / x - 2.0, &I0_B) / x.sqrt()
    }
}

/// `exp(-|x|) I1(x)`.
pub fn i1e(x: f64) -> f64 {
    let z = x.abs();
    let v = if z <= 8.0 {
        chbevl(0.5 * z - 2.0, &I1_A) * z
    } else {
        chbevl(32.0 / z - 2.0, &I1_B) / z.sqrt()
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Derivatives of `J0` with respect to its argument: `[J0, J0', J0'', J0''']`.
///
/// Uses `J0' = -J1`, `J0'' = -J0 + J1/x`, `J0''' = J1 + J0/x - 2 J1/x^2`.
/// Requires `x > 0`.
pub fn j0_derivatives(x: f64) -> [f64; 4] {
    let (a, b) = j0_j1(x);
    [a, -b, -a + b / x, b + a / x - 2.0 * b / (x * x)]
}

/// Scaled derivatives of `I0`: `exp(-x) * [I0, I0', I0'', I0''']` for `x > 0`.
///
/// Uses `I0' = I1`, `I0'' = I0 - I1/x`, `I0''' = I1 - I0/x + 2 I1/x^2`.
pub fn i0e_derivatives(x: f64) -> [f64; 4] {
    let a = i0e(x);
    let b = i1e(x);
    [a, b, a - b / x, b - a / x + 2.0 * b / (x * x)]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trapezoid rule on the periodic integral representation
    /// `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt`; converges geometrically.
    fn j_integral(n: f64, x: f64) -> f64 {
        let m = 4 * (x.abs() as usize) + 200;
        let h = PI / m as f64;
        let mut s = 0.5 * ((0.0f64).cos() + (n * PI).cos());
        for k in 1..m {
            let t = k as f64 * h;
            s += (n * t - x * t.sin()).cos();
        }
        s * h / PI
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(Order::Zero, 0.0), 1.0);
        assert_eq!(bessel_j(Order::One, 0.0), 0.0);
        assert_eq!(bessel_i_scaled(Order::Zero, 0.0), 1.0);
        assert_eq!(bessel_i_scaled(Order::One, 0.0), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(j0(2.404825557695773).abs() < 1e-12);
    }

    #[test]
    fn regimes_agree_with_integral_representation() {
        let mut x = 0.01;
        while x < 60.0 {
            assert!((j0(x) - j_integral(0.0, x)).abs() < 1e-14, "J0({x})");
            assert!((j1(x) - j_integral(1.0, x)).abs() < 1e-14, "J1({x})");
            x *= 1.07;
        }
    }

    #[test]
    fn recurrence_and_asymptotic_overlap() {
        let mut x = 16.0;
        while x < 30.0 {
            let a = miller_j01(x);
            let b = asymptotic_j01(x);
            assert!((a.0 - b.0).abs() < 1e-13, "J0 overlap at {x}");
            assert!((a.1 - b.1).abs() < 1e-13, "J1 overlap at {x}");
            x += 0.173;
        }
    }

    #[test]
    fn series_and_recurrence_overlap() {
        for &x in &[0.5, 0.8, 0.99, 1.2, 1.5] {
            let a = series_j01(x);
            let b = miller_j01(x);
            assert!((a.0 - b.0).abs() < 1e-15);
            assert!((a.1 - b.1).abs() < 1e-15);
        }
    }

    #[test]
    fn small_argument_keeps_relative_accuracy() {
        let x = 1e-9;
        assert!((j1(x) / (0.5 * x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parity() {
        assert_eq!(j0(-3.7), j0(3.7));
        assert_eq!(j1(-3.7), -j1(3.7));
    }

    #[test]
    fn scaled_i0_matches_positive_series() {
        // Power series for I0 has only positive terms: no cancellation.
        for &x in &[0.3, 2.0, 7.9, 8.1, 15.0, 50.0, 120.0] {
            let q = 0.25 * x * x;
            let mut t = 1.0f64;
            let mut s = 1.0f64;
            let mut s1 = 0.5 * x;
            let mut t1 = 0.5 * x;
            for k in 1..600 {
                let kf = k as f64;
                t *= q / (kf * kf);
                t1 *= q / (kf * (kf + 1.0));
                s += t;
                s1 += t1;
            }
            let e = (-x).exp();
            assert!((i0e(x) / (s * e) - 1.0).abs() < 1e-13, "i0e({x})");
            assert!((i1e(x) / (s1 * e) - 1.0).abs() < 1e-13, "i1e({x})");
        }
    }

    #[test]
    fn derivative_identities_match_finite_differences() {
        let h = 1e-4;
        for &x in &[0.7, 3.3, 11.0, 27.5] {
            let d = j0_derivatives(x);
            let dp = j0_derivatives(x + h);
            let dm = j0_derivatives(x - h);
            for k in 0..3 {
                let fd = (dp[k] - dm[k]) / (2.0 * h);
                assert!((fd - d[k + 1]).abs() < 1e-7, "J0 deriv {k} at {x}");
            }
            let unscaled = |y: f64| {
                let v = i0e_derivatives(y);
                let e = y.exp();
                [v[0] * e, v[1] * e, v[2] * e, v[3] * e]
            };
            let d = unscaled(x);
            let dp = unscaled(x + h);
            let dm = unscaled(x - h);
            for k in 0..3 {
                let fd = (dp[k] - dm[k]) / (2.0 * h);
                assert!((fd / d[k + 1] - 1.0).abs() < 1e-7, "I0 deriv {k} at {x}");
            }
        }
    }
}
