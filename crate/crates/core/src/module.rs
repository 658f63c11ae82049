//! `L1(T)` acting on `Lp(T)` by convolution, and deconvolution through the
//! Wiener-division net.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::net::{ApproxIdentityFamily, ResidualTrace, Schedule, TraceEntry};
use crate::rng::SeedStream;
use crate::wiener::{self, band_check, CircleSignal, DivisionFloor};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Exponent `p` in `[1, inf]` of the module norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(invalid(format!("module exponent must be >= 1, got {}", p)));
        }
        Ok(Self(p))
    }

    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INF: Exponent = Exponent(f64::INFINITY);

    pub fn get(self) -> f64 {
        self.0
    }
}

/// An element of `Lp(T)` on the shared circle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleSignal {
    pub signal: CircleSignal,
    pub p: Exponent,
}

impl ModuleSignal {
    pub fn new(signal: CircleSignal, p: Exponent) -> Self {
        Self { signal, p }
    }

    /// `((1/M) sum |g|^p)^{1/p}`, or the max for `p = inf`.
    pub fn norm(&self) -> f64 {
        lp_norm(&self.signal.samples(), self.p)
    }

    fn with_signal(&self, signal: CircleSignal) -> Self {
        Self { signal, p: self.p }
    }
}

pub fn lp_norm(samples: &[Complex64], p: Exponent) -> f64 {
    let p = p.get();
    if p.is_infinite() {
        return samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let m = samples.len() as f64;
    let top = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let s: f64 = samples.iter().map(|v| libm::pow(v.norm() / top, p)).sum::<f64>() / m;
    top * libm::pow(s, 1.0 / p)
}

/// Additive complex Gaussian noise with `E|n|^2 = sigma^2` per sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(invalid("noise standard deviation must be finite and non-negative"));
        }
        Ok(Self { sigma, seed })
    }

    pub fn apply(&self, b: &ModuleSignal) -> Result<ModuleSignal> {
        if self.sigma == 0.0 {
            return Ok(b.clone());
        }
        let mut rng = SeedStream::new(self.seed).rng(0x6e6f);
        let s = self.sigma / core::f64::consts::SQRT_2;
        let noisy: Vec<Complex64> = b
            .signal
            .samples()
            .into_iter()
            .map(|v| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                v + Complex64::new(re, im) * s
            })
            .collect();
        Ok(b.with_signal(CircleSignal::from_samples(b.signal.grid(), &noisy)?))
    }
}

/// `f ⊛ g`, the circular convolution of an algebra element with a module
/// element.
pub fn module_action(f: &CircleSignal, g: &ModuleSignal) -> Result<ModuleSignal> {
    Ok(g.with_signal(wiener::convolve(f, &g.signal)?))
}

/// Trace of `|e_j ⊛ b - b|_B`.
pub fn module_identity_convergence(
    family: &ApproxIdentityFamily<'_, CircleSignal>,
    b: &ModuleSignal,
    tol: f64,
    schedule: &Schedule,
) -> Result<ResidualTrace> {
    let mut trace = ResidualTrace::new(tol)?;
    for j in schedule.iter() {
        let e = family.member(j);
        let moved = module_action(&e, b)?;
        let r = ModuleSignal::new(moved.signal.sub(&b.signal)?, b.p).norm();
        trace.push(TraceEntry {
            index: j,
            residual: r,
            left_residual: r,
            right_residual: r,
            member_norm: wiener::l1_norm(&e),
        })?;
    }
    Ok(trace)
}

/// `min |f ⊛ y - z|_B` over `y` with coefficients supported in `|k| < n`,
/// attained at `y^(k) = z^(k) / f^(k)`; the residual is the tail of `z`.
pub fn density_residual(f: &CircleSignal, z: &ModuleSignal, n: usize, floor: DivisionFloor) -> Result<f64> {
    if n == 0 || n > f.grid().band_limit() {
        return Err(invalid(format!("band {} outside 1..={}", n, f.grid().band_limit())));
    }
    band_check(f, n, floor)?;
    let nn = n as i64;
    let y = z
        .signal
        .map_spectrum(|k, c| if k.abs() < nn { c / f.coefficient(k) } else { ZERO });
    let fy = module_action(f, &z.with_signal(y))?;
    Ok(ModuleSignal::new(fy.signal.sub(&z.signal)?, z.p).norm())
}

/// Output of [`deconvolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Deconvolution {
    /// `g_n = h_n ⊛ b`.
    pub recovered: ModuleSignal,
    /// `|g_n - g|_B` when the ground truth was supplied.
    pub error: Option<f64>,
    /// `error / |g|_B`.
    pub relative_error: Option<f64>,
}

/// Recovers `g` from `b = f ⊛ g (+ noise)` as `g_n = h_n ⊛ b`.
///
/// Without noise `g_n = K_n ⊛ g`, so the error is exactly the Fejér
/// approximation error of `g`.
pub fn deconvolve(
    f: &CircleSignal,
    b: &ModuleSignal,
    n: usize,
    noise: Option<NoiseSpec>,
    truth: Option<&ModuleSignal>,
    floor: DivisionFloor,
) -> Result<Deconvolution> {
    let h = wiener::wiener_division(f, n, floor)?;
    let observed = match noise {
        Some(spec) => spec.apply(b)?,
        None => b.clone(),
    };
    let recovered = module_action(&h, &observed)?;
    let (error, relative_error) = match truth {
        Some(g) => {
            let e = ModuleSignal::new(recovered.signal.sub(&g.signal)?, b.p).norm();
            let gn = ModuleSignal::new(g.signal.clone(), b.p).norm();
            (Some(e), (gn > 0.0).then(|| e / gn))
        }
        None => (None, None),
    };
    Ok(Deconvolution {
        recovered,
        error,
        relative_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiener::{fejer_family, CircleGrid};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant_action_is_mean() {
        let g = CircleGrid::new(64).unwrap();
        let b = ModuleSignal::new(
            CircleSignal::from_fn(g, |t| Complex64::new(libm::cos(t) + 2.0, 0.0)).unwrap(),
            Exponent::TWO,
        );
        let out = module_action(&CircleSignal::constant(g, c(1.0)), &b).unwrap();
        for v in out.signal.samples() {
            assert!((v - c(2.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn norms_of_constants() {
        let g = CircleGrid::new(32).unwrap();
        for p in [Exponent::ONE, Exponent::TWO, Exponent::INF, Exponent::new(3.5).unwrap()] {
            let s = ModuleSignal::new(CircleSignal::constant(g, c(-2.0)), p);
            assert!((s.norm() - 2.0).abs() < 1e-14);
        }
        assert!(Exponent::new(0.9).is_err());
    }

    #[test]
    fn zero_family_leaves_full_norm() {
        let g = CircleGrid::new(64).unwrap();
        let b = ModuleSignal::new(CircleSignal::poisson(g, 0.3).unwrap(), Exponent::ONE);
        let zero = ApproxIdentityFamily::new(|_| CircleSignal::zero(g));
        let t = module_identity_convergence(&zero, &b, 1e-2, &Schedule::up_to(3).unwrap()).unwrap();
        assert!(t.residuals().all(|r| (r - b.norm()).abs() < 1e-14));
    }

    #[test]
    fn constant_target_converges_immediately() {
        let g = CircleGrid::new(64).unwrap();
        let b = ModuleSignal::new(CircleSignal::constant(g, c(3.0)), Exponent::INF);
        let t = module_identity_convergence(&fejer_family(g), &b, 1e-9, &Schedule::up_to(5).unwrap()).unwrap();
        assert!(t.residuals().all(|r| r < 1e-14));
    }

    #[test]
    fn density_examples() {
        let g = CircleGrid::new(256).unwrap();
        let f = CircleSignal::poisson(g, 0.5).unwrap();
        let z = ModuleSignal::new(
            CircleSignal::poisson(g, 0.2)
                .unwrap()
                .map_spectrum(|k, c| if k.abs() < 10 { c } else { ZERO }),
            Exponent::TWO,
        );
        assert!(density_residual(&f, &z, 10, DivisionFloor::default()).unwrap() < 1e-10);
        let chi = CircleSignal::character(g, 1).unwrap();
        assert!(density_residual(&chi, &z, 10, DivisionFloor::default()).is_err());
    }

    #[test]
    fn deconvolution_at_order_one_is_the_mean() {
        let g = CircleGrid::new(128).unwrap();
        let f = CircleSignal::poisson(g, 0.5).unwrap();
        let truth = ModuleSignal::new(CircleSignal::poisson(g, 0.4).unwrap().scale(c(2.0)), Exponent::TWO);
        let b = module_action(&f, &truth).unwrap();
        let d = deconvolve(&f, &b, 1, None, Some(&truth), DivisionFloor::default()).unwrap();
        for v in d.recovered.signal.samples() {
            assert!((v - c(2.0)).norm() < 1e-13);
        }
        assert!(d.error.unwrap() > 0.0);
    }

    #[test]
    fn noise_is_seeded() {
        let g = CircleGrid::new(64).unwrap();
        let b = ModuleSignal::new(CircleSignal::zero(g), Exponent::TWO);
        let a = NoiseSpec::new(1e-3, 5).unwrap().apply(&b).unwrap();
        let a2 = NoiseSpec::new(1e-3, 5).unwrap().apply(&b).unwrap();
        assert_eq!(a, a2);
        assert!(a.norm() > 0.0 && a.norm() < 1e-2);
        assert!(NoiseSpec::new(-1.0, 0).is_err());
    }
}
