//! Discrete Fourier transforms on power-of-two grids.
//!
//! `forward` computes `X_k = sum_m x_m e^{-2 pi i k m / M}` and `inverse`
//! computes the unnormalized adjoint `x_m = sum_k X_k e^{2 pi i k m / M}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

pub fn forward(data: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(data, -1.0)
}

pub fn inverse(data: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(data, 1.0)
}

/// O(M^2) evaluation of the same sums. Reference only.
pub fn direct(data: &[Complex64], sign: f64) -> Vec<Complex64> {
    let m = data.len();
    (0..m)
        .map(|k| {
            data.iter()
                .enumerate()
                .map(|(j, &x)| x * twiddle(sign, (k * j) % m, m))
                .sum()
        })
        .collect()
}

fn twiddle(sign: f64, j: usize, m: usize) -> Complex64 {
    let angle = sign * 2.0 * PI * (j as f64) / (m as f64);
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

fn transform(data: &[Complex64], sign: f64) -> Result<Vec<Complex64>> {
    let n = data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(invalid("transform length must be a power of two"));
    }
    let bits = n.trailing_zeros();
    let mut a: Vec<Complex64> = (0..n)
        .map(|i| {
            let r = if bits == 0 {
                0
            } else {
                i.reverse_bits() >> (usize::BITS - bits)
            };
            data[r]
        })
        .collect();
    // Twiddles are computed directly per stage to keep rounding error at
    // O(eps log M) instead of accumulating by repeated multiplication.
    let table: Vec<Complex64> = (0..n / 2).map(|j| twiddle(sign, j, n)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = table[k * stride];
                let u = a[start + k];
                let v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
    Ok(a)
}
