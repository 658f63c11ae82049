//! The small disk algebra: polynomials vanishing at the origin under the
//! sup norm over the closed unit disk.
//!
//! Every sup norm here is sampled, which gives a lower bound of the true
//! value. The claims checked in this model are lower bounds as well, so
//! sampling errs on the safe side.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::algebra::AlgebraModel;
use crate::error::{invalid, Result};
use crate::net::Side;
use crate::rng::SeedStream;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `sum_{k>=1} c_k z^k`; `coeffs[0]` is `c_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyA0 {
    coeffs: Vec<Complex64>,
}

impl PolyA0 {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `c z^k`, `k >= 1`.
    pub fn monomial(k: usize, c: Complex64) -> Result<Self> {
        if k == 0 {
            return Err(invalid("constant terms are not allowed in the small disk algebra"));
        }
        let mut coeffs = vec![ZERO; k];
        coeffs[k - 1] = c;
        Ok(Self { coeffs })
    }

    /// The generator `chi_1(z) = z`.
    pub fn chi1() -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Formal degree (length of the coefficient list).
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| (acc + c) * z)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().max(other.degree());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or(ZERO);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Exact coefficient product; degrees add.
    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![ZERO; self.degree() + other.degree()];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                // z^{i+1} z^{j+1} = z^{i+j+2}, stored at i + j + 1.
                out[i + j + 1] += a * b;
            }
        }
        Self::new(out)
    }
}

/// Angles and annulus radii used for sampled sup norms.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSampling {
    angles: usize,
    radii: Vec<f64>,
    unit_circle: Vec<Complex64>,
}

impl CircleSampling {
    /// Radii default to `0.5, 0.55, ..., 1.0`.
    pub fn new(angles: usize) -> Result<Self> {
        Self::with_radii(angles, (0..=10).map(|i| 0.5 + 0.05 * i as f64).collect())
    }

    pub fn with_radii(angles: usize, radii: Vec<f64>) -> Result<Self> {
        if angles < 1024 {
            return Err(invalid(format!("need at least 1024 angles, got {}", angles)));
        }
        if radii.is_empty() || radii.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
            return Err(invalid("annulus radii must lie in [0, 1]"));
        }
        let unit_circle = (0..angles)
            .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / angles as f64))
            .collect();
        Ok(Self {
            angles,
            radii,
            unit_circle,
        })
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn circle(&self) -> &[Complex64] {
        &self.unit_circle
    }
}

/// `max_m |p(e^{i theta_m})|`, by the maximum modulus principle a lower
/// bound for the sup over the disk.
pub fn sup_norm_disk(p: &PolyA0, sampling: &CircleSampling) -> f64 {
    sampling.circle().iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max)
}

/// Schwarz bound `|p(z)| <= |z| |p|_inf`, with slack `1e-9`.
pub fn schwarz_check(p: &PolyA0, z: Complex64, sampling: &CircleSampling) -> Result<bool> {
    if z.norm() > 1.0 {
        return Err(invalid(format!("|z| = {} exceeds 1", z.norm())));
    }
    Ok(p.eval(z).norm() <= z.norm() * sup_norm_disk(p, sampling) + 1e-9)
}

/// Sampled `sup_{1/2 <= |z| <= 1} |p(z) - 1|`.
pub fn annulus_deviation(p: &PolyA0, sampling: &CircleSampling) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let mut best: f64 = 0.0;
    for &r in sampling.radii() {
        for &w in sampling.circle() {
            best = best.max((p.eval(w * r) - one).norm());
        }
    }
    best
}

/// Sampled `|f1 f2 - chi_1|_inf`.
pub fn product_deviation(f1: &PolyA0, f2: &PolyA0, sampling: &CircleSampling) -> f64 {
    sup_norm_disk(
        &f1.mul(f2).add(&PolyA0::chi1().scale(Complex64::new(-1.0, 0.0))),
        sampling,
    )
}

/// `(|f chi_1|_inf, |f|_inf)`; multiplication by `z` preserves moduli on
/// the circle, so the two agree.
pub fn chi1_isometry_check(f: &PolyA0, sampling: &CircleSampling) -> (f64, f64) {
    (
        sup_norm_disk(&f.mul(&PolyA0::chi1()), sampling),
        sup_norm_disk(f, sampling),
    )
}

/// Random polynomial with coefficients uniform in the disk of `radius`.
pub fn random_poly(degree: usize, radius: f64, rng: &mut dyn RngCore) -> PolyA0 {
    PolyA0::new(
        (0..degree)
            .map(|_| Complex64::from_polar(radius * libm::sqrt(rng.random::<f64>()), 2.0 * PI * rng.random::<f64>()))
            .collect(),
    )
}

/// Settings for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    /// Largest radius of the disk the start coefficients are drawn from.
    pub radius: f64,
    /// How many of the best starts are refined.
    pub refine: usize,
    pub passes: usize,
    /// Golden-section iterations per coordinate.
    pub golden_steps: usize,
    /// Half-width of the coordinate bracket.
    pub bracket: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 10_000,
            radius: 2.0,
            refine: 4,
            passes: 3,
            golden_steps: 24,
            bracket: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    /// Best coefficient vector (complex, flattened per factor).
    pub point: Vec<Complex64>,
    pub evaluations: usize,
}

/// Minimizes `objective` over `dim` complex coefficients.
///
/// Each seeded start is uniform in a disk whose radius is itself uniform in
/// `[0, radius]`; the best few starts are then refined by per-coordinate
/// golden-section search.
pub fn minimize(
    dim: usize,
    config: SearchConfig,
    seed: SeedStream,
    objective: impl Fn(&[Complex64]) -> f64,
) -> Result<SearchResult> {
    if config.starts == 0 || dim == 0 {
        return Err(invalid("search needs at least one start and one coordinate"));
    }
    let mut rng = seed.rng(0x6469);
    let mut evaluations = 0;
    let mut pool: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(config.refine + 1);
    for _ in 0..config.starts {
        let scale = config.radius * rng.random::<f64>();
        let x = random_poly(dim, scale, &mut rng).coeffs;
        let v = objective(&x);
        evaluations += 1;
        if pool.len() < config.refine.max(1) || v < pool.last().map_or(f64::INFINITY, |p| p.0) {
            pool.push((v, x));
            pool.sort_by(|a, b| a.0.total_cmp(&b.0));
            pool.truncate(config.refine.max(1));
        }
    }
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    for (best, x) in pool.iter_mut() {
        for _ in 0..config.passes {
            for coord in 0..2 * dim {
                let at = |x: &mut Vec<Complex64>, t: f64| {
                    let c = &mut x[coord / 2];
                    if coord % 2 == 0 {
                        c.re = t
                    } else {
                        c.im = t
                    }
                };
                let centre = if coord % 2 == 0 {
                    x[coord / 2].re
                } else {
                    x[coord / 2].im
                };
                let (mut a, mut b) = (centre - config.bracket, centre + config.bracket);
                let mut probe = x.clone();
                let mut f = |t: f64| {
                    at(&mut probe, t);
                    evaluations += 1;
                    objective(&probe)
                };
                let mut c = b - inv_phi * (b - a);
                let mut d = a + inv_phi * (b - a);
                let (mut fc, mut fd) = (f(c), f(d));
                for _ in 0..config.golden_steps {
                    if fc < fd {
                        b = d;
                        d = c;
                        fd = fc;
                        c = b - inv_phi * (b - a);
                        fc = f(c);
                    } else {
                        a = c;
                        c = d;
                        fc = fd;
                        d = a + inv_phi * (b - a);
                        fd = f(d);
                    }
                }
                let (t, v) = if fc < fd { (c, fc) } else { (d, fd) };
                if v < *best {
                    *best = v;
                    at(x, t);
                }
            }
        }
    }
    let (value, point) = pool
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("pool is non-empty");
    Ok(SearchResult {
        value,
        point,
        evaluations,
    })
}

/// Smallest sampled annulus deviation found over polynomials of the given
/// degree.
pub fn search_annulus_deviation(
    degree: usize,
    sampling: &CircleSampling,
    config: SearchConfig,
    seed: SeedStream,
) -> Result<SearchResult> {
    minimize(degree, config, seed, |c| {
        annulus_deviation(&PolyA0::new(c.to_vec()), sampling)
    })
}

/// Smallest sampled `|f1 f2 - chi_1|` found over two factors of the given
/// degree.
pub fn search_product_deviation(
    degree: usize,
    sampling: &CircleSampling,
    config: SearchConfig,
    seed: SeedStream,
) -> Result<SearchResult> {
    minimize(2 * degree, config, seed, |c| {
        let (a, b) = c.split_at(degree);
        product_deviation(&PolyA0::new(a.to_vec()), &PolyA0::new(b.to_vec()), sampling)
    })
}

/// Smallest sampled `|chi_1 g - chi_1|` found over `g` of the given degree:
/// how close any candidate identity gets on the generator.
pub fn search_identity_defect(
    degree: usize,
    sampling: &CircleSampling,
    config: SearchConfig,
    seed: SeedStream,
) -> Result<SearchResult> {
    minimize(degree, config, seed, |c| {
        product_deviation(&PolyA0::chi1(), &PolyA0::new(c.to_vec()), sampling)
    })
}

/// The small disk algebra as an [`AlgebraModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiskAlgebra {
    pub sampling: CircleSampling,
    /// Degree of random elements.
    pub random_degree: usize,
}

impl DiskAlgebra {
    pub fn new(sampling: CircleSampling) -> Self {
        Self {
            sampling,
            random_degree: 8,
        }
    }
}

impl AlgebraModel for DiskAlgebra {
    type Element = PolyA0;

    fn name(&self) -> &str {
        "disk"
    }

    fn contains(&self, _x: &PolyA0) -> bool {
        true
    }

    fn zero(&self) -> PolyA0 {
        PolyA0::zero()
    }

    fn add(&self, a: &PolyA0, b: &PolyA0) -> PolyA0 {
        a.add(b)
    }

    fn scale(&self, s: Complex64, a: &PolyA0) -> PolyA0 {
        a.scale(s)
    }

    fn mul(&self, a: &PolyA0, b: &PolyA0) -> PolyA0 {
        a.mul(b)
    }

    fn norm(&self, a: &PolyA0) -> f64 {
        sup_norm_disk(a, &self.sampling)
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> PolyA0 {
        random_poly(self.random_degree, 2.0, rng)
    }

    /// For any `x` and `r`, `x r chi_1` is a product of two elements, so it
    /// stays at distance at least 1/3 from `chi_1`.
    fn refute(&self, _x: &PolyA0, _side: Side) -> Option<String> {
        Some(String::from(
            "x r chi_1 is a product in A0(D) and stays at sup distance >= 1/3 from chi_1",
        ))
    }
}
