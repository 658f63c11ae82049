//! Reference computations that share no code with the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn theta(m: usize, len: usize) -> f64 {
    2.0 * PI * m as f64 / len as f64
}

/// `(1/M) sum_m f(theta_m) e^{-i k theta_m}` by plain quadrature.
pub fn quadrature_coefficient(samples: &[Complex64], k: i64) -> Complex64 {
    let len = samples.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, &v) in samples.iter().enumerate() {
        // Reduce k m mod M first so the angle stays small and accurate.
        let r = (k.rem_euclid(len as i64) as usize * m) % len;
        acc += v * Complex64::from_polar(1.0, -theta(r, len));
    }
    acc / len as f64
}

/// `sum_k c_k e^{i k theta_m}` evaluated point by point.
pub fn synthesize(len: usize, coeffs: &[(i64, Complex64)]) -> Vec<Complex64> {
    (0..len)
        .map(|m| {
            coeffs
                .iter()
                .map(|&(k, ck)| {
                    let r = (k.rem_euclid(len as i64) as usize * m) % len;
                    ck * Complex64::from_polar(1.0, theta(r, len))
                })
                .sum()
        })
        .collect()
}

/// `(f * g)(theta_m) = (1/M) sum_s f(theta_m - theta_s) g(theta_s)`.
pub fn direct_convolution(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let len = f.len();
    assert_eq!(len, g.len());
    (0..len)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..len {
                acc += f[(m + len - s) % len] * g[s];
            }
            acc / len as f64
        })
        .collect()
}

pub fn mean_abs(samples: &[Complex64]) -> f64 {
    samples.iter().map(|v| v.norm()).sum::<f64>() / samples.len() as f64
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `(1/n) (sin(n t / 2) / sin(t / 2))^2`, equal to `n` at `t = 0`.
pub fn fejer_closed_form(n: usize, t: f64) -> f64 {
    let s = (t / 2.0).sin();
    if s.abs() < 1e-300 {
        return n as f64;
    }
    let q = (n as f64 * t / 2.0).sin() / s;
    q * q / n as f64
}
