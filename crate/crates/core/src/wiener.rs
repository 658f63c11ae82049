//! The convolution algebra `L1(T)` on the sampled circle.
//!
//! A [`CircleSignal`] is stored by its discrete Fourier coefficients, which
//! is the Wiener-algebra side of the Gelfand transform. Samples are
//! synthesized on demand. Convolution is a coefficient product, so
//! band-limited identities such as `f * h_n = K_n` hold to rounding even
//! when `h_n` has astronomically large coefficients.
//!
//! The `M`-point circle is formally a finite, unital group algebra. It is
//! used here as a truncation of `L1(T)`, and nets are only evaluated at
//! orders well below `M / 2`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::algebra::AlgebraModel;
use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::net::{ApproxIdentityFamily, InverseNet, ResidualTrace, Schedule, Side, TraceEntry};
use crate::verify::{self, ApproxInvCertificate, ModulusMethod, Verdict, ZeroDivisorModulus};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `M` equispaced points `theta_m = 2 pi m / M` with Haar weight `1/M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    m: usize,
}

impl CircleGrid {
    /// `m` must be a power of two, at least 8.
    pub fn new(m: usize) -> Result<Self> {
        if m < 8 || !m.is_power_of_two() {
            return Err(invalid(format!(
                "circle grid needs a power of two >= 8 samples, got {}",
                m
            )));
        }
        Ok(Self { m })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequencies `|k| < band_limit()` are represented without aliasing.
    pub fn band_limit(&self) -> usize {
        self.m / 2
    }

    pub fn theta(&self, i: usize) -> f64 {
        2.0 * PI * (i as f64) / (self.m as f64)
    }

    fn slot(&self, k: i64) -> usize {
        k.rem_euclid(self.m as i64) as usize
    }

    fn check_frequency(&self, k: i64) -> Result<()> {
        if k.unsigned_abs() as usize >= self.band_limit() {
            return Err(Error::Aliasing {
                order: k.unsigned_abs() as usize,
                limit: self.band_limit(),
            });
        }
        Ok(())
    }
}

/// A function on the sampled circle, stored by its Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSignal {
    grid: CircleGrid,
    spectrum: Vec<Complex64>,
}

impl CircleSignal {
    pub fn zero(grid: CircleGrid) -> Self {
        Self {
            grid,
            spectrum: vec![ZERO; grid.len()],
        }
    }

    pub fn from_samples(grid: CircleGrid, samples: &[Complex64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(invalid("sample count does not match the grid"));
        }
        if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("samples must be finite"));
        }
        let inv_m = 1.0 / grid.len() as f64;
        let spectrum = fft::forward(samples)?.into_iter().map(|c| c * inv_m).collect();
        Ok(Self { grid, spectrum })
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples: Vec<Complex64> = (0..grid.len()).map(|i| f(grid.theta(i))).collect();
        Self::from_samples(grid, &samples)
    }

    /// Trigonometric polynomial `sum c_k e^{i k theta}`; every `|k| < M/2`.
    pub fn from_coefficients(grid: CircleGrid, coeffs: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let mut s = Self::zero(grid);
        for (k, c) in coeffs {
            grid.check_frequency(k)?;
            s.spectrum[grid.slot(k)] += c;
        }
        Ok(s)
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        let mut s = Self::zero(grid);
        s.spectrum[0] = c;
        s
    }

    /// Unit of the finite group algebra: every coefficient equals 1 (the
    /// point mass of weight `M` at `theta = 0`). It is not band-limited and
    /// has no counterpart in `L1(T)`.
    pub fn grid_unit(grid: CircleGrid) -> Self {
        Self {
            grid,
            spectrum: vec![Complex64::new(1.0, 0.0); grid.len()],
        }
    }

    /// `e^{i k theta}`.
    pub fn character(grid: CircleGrid, k: i64) -> Result<Self> {
        Self::from_coefficients(grid, [(k, Complex64::new(1.0, 0.0))])
    }

    /// Poisson kernel `P_r`, with coefficients `r^|k|` for `|k| < M/2`.
    pub fn poisson(grid: CircleGrid, r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(invalid(format!("Poisson radius must lie in [0, 1), got {}", r)));
        }
        let b = grid.band_limit() as i64;
        Self::from_coefficients(
            grid,
            (1 - b..b).map(|k| (k, Complex64::new(libm::pow(r, k.unsigned_abs() as f64), 0.0))),
        )
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    /// `f^(k)` for any integer `k` (taken modulo `M`).
    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.spectrum[self.grid.slot(k)]
    }

    /// Coefficients in FFT order.
    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn samples(&self) -> Vec<Complex64> {
        fft::inverse(&self.spectrum).expect("grid length is a power of two")
    }

    pub fn max_coefficient(&self) -> f64 {
        self.spectrum.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn map_spectrum(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let m = self.grid.len() as i64;
        let spectrum = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let i = i as i64;
                let k = if i >= m / 2 { i - m } else { i };
                f(k, c)
            })
            .collect();
        Self {
            grid: self.grid,
            spectrum,
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(invalid("signals live on different grids"));
        }
        Ok(Self {
            grid: self.grid,
            spectrum: self
                .spectrum
                .iter()
                .zip(&other.spectrum)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_spectrum(|_, c| c * s)
    }
}

/// `(1/M) sum |f(theta_m)|`.
pub fn l1_norm(f: &CircleSignal) -> f64 {
    let m = f.grid.len() as f64;
    f.samples().iter().map(|v| v.norm()).sum::<f64>() / m
}

/// `sum_k w(k) |f^(k)|`, the weighted Wiener norm on the coefficient side.
///
/// Weights are taken as given; no growth condition is checked.
pub fn weighted_coefficient_norm(f: &CircleSignal, weight: impl Fn(i64) -> f64) -> f64 {
    let m = f.grid.len() as i64;
    (0..m)
        .map(|k| if k >= m / 2 { k - m } else { k })
        .map(|k| weight(k) * f.coefficient(k).norm())
        .sum()
}

/// `(f * g)(theta_m) = (1/M) sum_s f(theta_m - theta_s) g(theta_s)`.
pub fn convolve(f: &CircleSignal, g: &CircleSignal) -> Result<CircleSignal> {
    f.zip(g, |a, b| a * b)
}

/// Coefficients `f^(k)` for `|k| <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    n_max: usize,
    values: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, k: i64) -> Option<Complex64> {
        let idx = k + self.n_max as i64;
        (0..self.values.len() as i64)
            .contains(&idx)
            .then(|| self.values[idx as usize])
    }

    /// `(k, f^(k))` in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let off = self.n_max as i64;
        self.values.iter().enumerate().map(move |(i, &c)| (i as i64 - off, c))
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn fourier(f: &CircleSignal, n_max: usize) -> Result<FourierCoeffs> {
    f.grid.check_frequency(n_max as i64)?;
    let n = n_max as i64;
    Ok(FourierCoeffs {
        n_max,
        values: (-n..=n).map(|k| f.coefficient(k)).collect(),
    })
}

/// Fejér kernel `K_n` with coefficients `(1 - |k|/n)_+`.
pub fn fejer_kernel(grid: CircleGrid, n: usize) -> Result<CircleSignal> {
    if n == 0 {
        return Err(invalid("Fejér order must be positive"));
    }
    if n >= grid.band_limit() {
        return Err(Error::Aliasing {
            order: n,
            limit: grid.band_limit(),
        });
    }
    let nn = n as i64;
    CircleSignal::from_coefficients(
        grid,
        (1 - nn..nn).map(|k| (k, Complex64::new(1.0 - (k.abs() as f64) / (n as f64), 0.0))),
    )
}

/// The Fejér family `n -> K_n`, norm-bounded by 1.
pub fn fejer_family(grid: CircleGrid) -> ApproxIdentityFamily<'static, CircleSignal> {
    ApproxIdentityFamily::new(move |n| fejer_kernel(grid, n.get()).unwrap_or_else(|_| CircleSignal::zero(grid)))
        .with_norm_bound(1.0)
}

/// `(sup_k |f^(k)|, |f|_1)`; the first never exceeds the second.
pub fn gelfand_sup_bound(f: &CircleSignal) -> (f64, f64) {
    (f.max_coefficient(), l1_norm(f))
}

/// Traces of `|e_j^(k) - 1|` per frequency.
pub fn aid_pointwise_limit_check(
    family: &ApproxIdentityFamily<'_, CircleSignal>,
    frequencies: &[i64],
    tol: f64,
    schedule: &Schedule,
) -> Result<Vec<ResidualTrace>> {
    let mut traces = frequencies
        .iter()
        .map(|_| ResidualTrace::new(tol))
        .collect::<Result<Vec<_>>>()?;
    for j in schedule.iter() {
        let e = family.member(j);
        for (&k, trace) in frequencies.iter().zip(traces.iter_mut()) {
            e.grid.check_frequency(k)?;
            let r = (e.coefficient(k) - Complex64::new(1.0, 0.0)).norm();
            trace.push(TraceEntry {
                index: j,
                residual: r,
                left_residual: r,
                right_residual: r,
                member_norm: l1_norm(&e),
            })?;
        }
    }
    Ok(traces)
}

/// Coefficients at or below `relative * max_k |f^(k)|` count as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisionFloor {
    pub relative: f64,
}

impl Default for DivisionFloor {
    fn default() -> Self {
        Self { relative: 1e-12 }
    }
}

impl DivisionFloor {
    pub const fn relative(relative: f64) -> Self {
        Self { relative }
    }

    pub fn absolute_for(&self, f: &CircleSignal) -> f64 {
        self.relative * f.max_coefficient()
    }
}

/// First `|k| < n` (in order `0, 1, -1, 2, -2, ...`) with `|f^(k)|` at or
/// below the floor.
pub fn band_check(f: &CircleSignal, n: usize, floor: DivisionFloor) -> Result<()> {
    let limit = floor.absolute_for(f);
    let n = n as i64;
    for a in 0..n {
        for k in if a == 0 { [0, 0] } else { [a, -a] } {
            let mag = f.coefficient(k).norm();
            if mag <= limit {
                return Err(Error::DivisionFloor {
                    frequency: k,
                    magnitude: mag,
                    floor: limit,
                });
            }
        }
    }
    Ok(())
}

/// Wiener division `h_n` with `h_n^(k) = (1 - |k|/n)_+ / f^(k)`, so that
/// `f * h_n = K_n`.
pub fn wiener_division(f: &CircleSignal, n: usize, floor: DivisionFloor) -> Result<CircleSignal> {
    let kernel = fejer_kernel(f.grid, n)?;
    band_check(f, n, floor)?;
    let nn = n as i64;
    Ok(kernel.map_spectrum(|k, c| if k.abs() < nn { c / f.coefficient(k) } else { ZERO }))
}

/// The net `n -> h_n`. Fails up front if the band check fails at the largest
/// scheduled order.
pub fn wiener_division_net(
    f: &CircleSignal,
    schedule: &Schedule,
    floor: DivisionFloor,
) -> Result<InverseNet<'static, CircleSignal>> {
    band_check(f, schedule.last().get(), floor)?;
    let f = f.clone();
    let grid = f.grid;
    Ok(InverseNet::right(move |n| {
        wiener_division(&f, n.get(), floor).unwrap_or_else(|_| CircleSignal::zero(grid))
    }))
}

/// Witness of the divisor-of-zero direction at frequency `n`: the
/// character `e^{i n theta}` (unit `L1` norm) and `|f * chi_n|_1 / |chi_n|_1`,
/// which equals `|f^(n)|`.
pub fn tdz_witness(f: &CircleSignal, n: usize) -> Result<ZeroDivisorModulus<CircleSignal>> {
    let chi = CircleSignal::character(f.grid, n as i64)?;
    let value = l1_norm(&convolve(f, &chi)?) / l1_norm(&chi);
    Ok(ZeroDivisorModulus {
        value,
        witness: chi,
        method: ModulusMethod::Sampled,
    })
}

/// `L1(T)` on a grid as an [`AlgebraModel`].
///
/// The refuter fires when a coefficient with `|k| < band` is at or below the
/// division floor: by the Wiener criterion such an element has no
/// approximate inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerAlgebra {
    pub grid: CircleGrid,
    pub band: usize,
    pub floor: DivisionFloor,
}

impl WienerAlgebra {
    pub fn new(grid: CircleGrid) -> Self {
        Self {
            grid,
            band: grid.band_limit() / 2,
            floor: DivisionFloor::default(),
        }
    }

    pub fn with_band(mut self, band: usize) -> Self {
        self.band = band.min(self.grid.band_limit());
        self
    }

    pub fn with_floor(mut self, floor: DivisionFloor) -> Self {
        self.floor = floor;
        self
    }
}

impl AlgebraModel for WienerAlgebra {
    type Element = CircleSignal;

    fn name(&self) -> &str {
        "wiener"
    }

    fn contains(&self, x: &CircleSignal) -> bool {
        x.grid == self.grid
    }

    fn zero(&self) -> CircleSignal {
        CircleSignal::zero(self.grid)
    }

    fn add(&self, a: &CircleSignal, b: &CircleSignal) -> CircleSignal {
        a.add(b).expect("grids checked by contains")
    }

    fn sub(&self, a: &CircleSignal, b: &CircleSignal) -> CircleSignal {
        a.sub(b).expect("grids checked by contains")
    }

    fn scale(&self, s: Complex64, a: &CircleSignal) -> CircleSignal {
        a.scale(s)
    }

    fn mul(&self, a: &CircleSignal, b: &CircleSignal) -> CircleSignal {
        convolve(a, b).expect("grids checked by contains")
    }

    fn norm(&self, a: &CircleSignal) -> f64 {
        l1_norm(a)
    }

    /// `f*(theta) = conj(f(-theta))`, i.e. conjugated coefficients.
    fn involution(&self, a: &CircleSignal) -> Option<CircleSignal> {
        Some(a.map_spectrum(|_, c| c.conj()))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> CircleSignal {
        band_limited_signal(self.grid, 8, 1.0 / 3.0, rng)
    }

    fn refute(&self, x: &CircleSignal, _side: Side) -> Option<String> {
        match band_check(x, self.band, self.floor) {
            Err(Error::DivisionFloor {
                frequency, magnitude, ..
            }) => Some(format!(
                "Fourier coefficient vanishes at frequency {} (|f^| = {:e})",
                frequency, magnitude
            )),
            _ => None,
        }
    }

    fn zero_divisor_candidates(&self, _x: &CircleSignal) -> Vec<CircleSignal> {
        let b = self.band as i64;
        (1 - b..b)
            .filter_map(|k| CircleSignal::character(self.grid, k).ok())
            .collect()
    }
}

/// Trigonometric polynomial of the given degree with coefficients drawn
/// uniformly from the disk of radius `decay^|k|`.
pub fn band_limited_signal(grid: CircleGrid, degree: usize, decay: f64, rng: &mut dyn RngCore) -> CircleSignal {
    let d = degree.min(grid.band_limit() - 1) as i64;
    let coeffs: Vec<(i64, Complex64)> = (-d..=d)
        .map(|k| {
            let radius = libm::pow(decay, k.unsigned_abs() as f64) * libm::sqrt(rng.random::<f64>());
            let phase = 2.0 * PI * rng.random::<f64>();
            (k, Complex64::from_polar(radius, phase))
        })
        .collect();
    CircleSignal::from_coefficients(grid, coeffs).expect("degree is inside the band")
}

/// Why a product certificate could not be issued.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorFailure {
    /// 1 or 2.
    pub factor: usize,
    pub frequency: i64,
    pub magnitude: f64,
}

/// Certificate for `f1 * f2` built from the net `h_n(f1) * h_n(f2)`.
pub struct ProductCertificate<'a> {
    pub verdict: Verdict,
    pub failing_factor: Option<FactorFailure>,
    /// Present when both factors pass the band check.
    pub certificate: Option<ApproxInvCertificate<'a, CircleSignal>>,
    /// Largest `|h_n(f1) * h_n(f2)|_1` along the schedule.
    pub max_net_norm: f64,
}

pub fn product_invertibility_check(
    model: &WienerAlgebra,
    f1: &CircleSignal,
    f2: &CircleSignal,
    test_set: &[CircleSignal],
    tol: f64,
    schedule: &Schedule,
    floor: DivisionFloor,
) -> Result<ProductCertificate<'static>> {
    let n = schedule.last().get();
    for (factor, f) in [(1, f1), (2, f2)] {
        match band_check(f, n, floor) {
            Ok(()) => {}
            Err(Error::DivisionFloor {
                frequency, magnitude, ..
            }) => {
                return Ok(ProductCertificate {
                    verdict: Verdict::Refuted,
                    failing_factor: Some(FactorFailure {
                        factor,
                        frequency,
                        magnitude,
                    }),
                    certificate: None,
                    max_net_norm: 0.0,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let h1 = wiener_division_net(f1, schedule, floor)?;
    let h2 = wiener_division_net(f2, schedule, floor)?;
    let net = InverseNet::right(move |j| convolve(&h1.member(j), &h2.member(j)).expect("factors share a grid"));
    let max_net_norm = schedule.iter().map(|j| l1_norm(&net.member(j))).fold(0.0, f64::max);
    let product = convolve(f1, f2)?;
    let certificate = verify::check_approx_invertible(model, product, net, test_set, tol, schedule)?;
    Ok(ProductCertificate {
        verdict: certificate.verdict,
        failing_factor: None,
        certificate: Some(certificate),
        max_net_norm,
    })
}
