//! `C0(R)` sampled on a symmetric grid over `[-L, L]`.
//!
//! Vanishing at infinity is encoded by requiring input elements to be at most
//! the tail tolerance in modulus at the two extreme grid points. Compact sets
//! are index windows, and approximate identities are piecewise-linear
//! plateaus over expanding windows.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::algebra::AlgebraModel;
use crate::error::{invalid, Error, Result};
use crate::net::{ApproxIdentityFamily, InverseNet, NetIndex, Schedule, Side};

/// Relative threshold below which `|f|` counts as zero for division.
pub const DEFAULT_DIVISION_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpace {
    half_width: f64,
    points: usize,
    tail_tolerance: f64,
}

impl GridSpace {
    pub fn new(half_width: f64, points: usize, tail_tolerance: f64) -> Result<Self> {
        if points < 3 {
            return Err(invalid("grid needs at least 3 points"));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(invalid("half width must be positive"));
        }
        if tail_tolerance.is_nan() || tail_tolerance <= 0.0 {
            return Err(invalid("tail tolerance must be positive"));
        }
        Ok(Self {
            half_width,
            points,
            tail_tolerance,
        })
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn point(&self, i: usize) -> f64 {
        // Mirror the upper half so the grid is exactly symmetric.
        let d = self.spacing();
        if 2 * i < self.points {
            -self.half_width + i as f64 * d
        } else {
            self.half_width - (self.points - 1 - i) as f64 * d
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.point(i))
    }

    /// Index of the grid point nearest 0 (exactly 0 for odd point counts).
    pub fn center(&self) -> usize {
        (self.points - 1) / 2
    }
}

/// Complex values on the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct C0Element {
    values: Vec<Complex64>,
}

impl C0Element {
    /// Checked constructor: enforces the tail bound at both grid ends.
    pub fn new(space: &GridSpace, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(invalid("value count does not match the grid"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("values must be finite"));
        }
        let ends = [values[0].norm(), values[values.len() - 1].norm()];
        if ends.iter().any(|&e| e > space.tail_tolerance) {
            return Err(invalid(format!(
                "element does not vanish at infinity: end values {:e}, {:e} exceed tail tolerance {:e}",
                ends[0], ends[1], space.tail_tolerance
            )));
        }
        Ok(Self { values })
    }

    pub fn from_fn(space: &GridSpace, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(space, space.points().map(f).collect())
    }

    /// No tail check; used for products and intermediate results.
    pub fn from_values(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn zero(space: &GridSpace) -> Self {
        Self::from_values(alloc::vec![Complex64::new(0.0, 0.0); space.len()])
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self::from_values(self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect())
    }

    pub fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.len(), other.len(), "elements on different grids");
        Self::from_values(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }
}

pub fn sup_norm(f: &C0Element) -> f64 {
    f.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Index interval `[lo, hi]` standing in for a compact set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompactWindow {
    pub lo: usize,
    pub hi: usize,
}

impl CompactWindow {
    pub fn new(space: &GridSpace, lo: usize, hi: usize) -> Result<Self> {
        if lo > hi || hi >= space.len() {
            return Err(invalid(format!(
                "window [{}, {}] outside grid of {} points",
                lo,
                hi,
                space.len()
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, other: &CompactWindow) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }
}

type Growth = Box<dyn Fn(NetIndex) -> CompactWindow>;

/// Plateau functions `e_K`: 1 on `K(n)`, linear down to 0 over `ramp` cells.
pub struct WindowFamily {
    space: GridSpace,
    growth: Growth,
    ramp: usize,
    schedule: Schedule,
}

impl WindowFamily {
    pub fn space(&self) -> &GridSpace {
        &self.space
    }

    pub fn ramp(&self) -> usize {
        self.ramp
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn window(&self, j: NetIndex) -> CompactWindow {
        (self.growth)(j)
    }

    pub fn plateau(&self, j: NetIndex) -> C0Element {
        plateau(&self.space, self.window(j), self.ramp)
    }

    /// Indices where the plateau at the last scheduled index is non-zero.
    pub fn max_support(&self) -> CompactWindow {
        support(&self.space, self.window(self.schedule.last()), self.ramp)
    }

    pub fn as_identity_family(&self) -> ApproxIdentityFamily<'_, C0Element> {
        ApproxIdentityFamily::new(move |j| self.plateau(j)).with_norm_bound(1.0)
    }
}

fn support(space: &GridSpace, w: CompactWindow, ramp: usize) -> CompactWindow {
    let r = ramp.saturating_sub(1);
    CompactWindow {
        lo: w.lo.saturating_sub(r),
        hi: (w.hi + r).min(space.len() - 1),
    }
}

fn plateau(space: &GridSpace, w: CompactWindow, ramp: usize) -> C0Element {
    let values = (0..space.len())
        .map(|i| {
            let d = w.lo.saturating_sub(i).max(i.saturating_sub(w.hi));
            let v = if ramp == 0 {
                if d == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (1.0 - d as f64 / ramp as f64).max(0.0)
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    C0Element::from_values(values)
}

/// Validates the windows along `schedule` (nested, with the ramp inside the
/// grid) and returns the plateau family.
pub fn plateau_family(
    space: GridSpace,
    growth: impl Fn(NetIndex) -> CompactWindow + 'static,
    ramp: usize,
    schedule: Schedule,
) -> Result<WindowFamily> {
    let mut prev: Option<CompactWindow> = None;
    for j in schedule.iter() {
        let w = growth(j);
        CompactWindow::new(&space, w.lo, w.hi)?;
        if w.lo < ramp || w.hi + ramp > space.len() - 1 {
            return Err(invalid(format!(
                "window [{}, {}] with ramp {} exceeds the grid of {} points",
                w.lo,
                w.hi,
                ramp,
                space.len()
            )));
        }
        if let Some(p) = prev {
            if !w.contains(&p) {
                return Err(invalid(format!(
                    "window at index {} does not contain its predecessor",
                    j
                )));
            }
        }
        prev = Some(w);
    }
    Ok(WindowFamily {
        space,
        growth: Box::new(growth),
        ramp,
        schedule,
    })
}

/// Windows centered at 0 with half-width `step * n` cells, capped so that
/// the ramp stays inside the grid.
pub fn symmetric_growth(space: &GridSpace, step: usize, ramp: usize) -> impl Fn(NetIndex) -> CompactWindow + 'static {
    let c = space.center();
    let upper_center = space.len() / 2;
    let max_half = c.saturating_sub(ramp);
    move |j| {
        let w = (j.get() * step).min(max_half);
        CompactWindow {
            lo: c - w,
            hi: upper_center + w,
        }
    }
}

/// Result of [`is_nonvanishing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonvanishing {
    pub nonvanishing: bool,
    /// Index of the smallest modulus.
    pub min_index: usize,
    pub min_value: f64,
}

pub fn is_nonvanishing(f: &C0Element, threshold: f64) -> Nonvanishing {
    let (min_index, min_value) = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Nonvanishing {
        nonvanishing: min_value > threshold,
        min_index,
        min_value,
    }
}

/// `K -> g_K = e_K / f`, so that `f g_K = e_K` pointwise.
///
/// `threshold` is absolute; [`default_division_threshold`] gives the usual
/// choice. Fails if `|f|` is at or below it anywhere on the support of the
/// largest scheduled plateau.
pub fn reciprocal_inverse_net<'a>(
    f: &C0Element,
    family: &'a WindowFamily,
    threshold: f64,
) -> Result<InverseNet<'a, C0Element>> {
    if f.len() != family.space.len() {
        return Err(invalid("element and family live on different grids"));
    }
    let s = family.max_support();
    for i in s.lo..=s.hi {
        let mag = f.values[i].norm();
        if mag <= threshold {
            return Err(Error::SingularDivision {
                index: i,
                magnitude: mag,
                threshold,
            });
        }
    }
    let f = f.clone();
    Ok(InverseNet::right(move |j| {
        let e = family.plateau(j);
        e.zip(&f, |e, f| if e == Complex64::new(0.0, 0.0) { e } else { e / f })
    }))
}

pub fn default_division_threshold(f: &C0Element) -> f64 {
    DEFAULT_DIVISION_THRESHOLD * sup_norm(f)
}

/// A non-invertible element within `eps / 2` of `f`.
///
/// Cuts `f` off outside the smallest window containing every point with
/// `|f| > eps / 2`; the cutoff is 1 on that window, ramps linearly to 0 and
/// vanishes at the grid ends, so `f g` has an exact zero.
pub fn perturb_to_noninvertible(f: &C0Element, eps: f64) -> Result<C0Element> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(invalid("eps must be positive"));
    }
    let n = f.len();
    let big: Vec<usize> = (0..n).filter(|&i| f.values[i].norm() > eps / 2.0).collect();
    let (Some(&lo), Some(&hi)) = (big.first(), big.last()) else {
        return Ok(C0Element::from_values(alloc::vec![Complex64::new(0.0, 0.0); n]));
    };
    if lo == 0 || hi == n - 1 {
        return Err(Error::CannotPerturb(format!(
            "|f| > eps/2 = {:e} reaches the grid boundary; refine the grid or enlarge L",
            eps / 2.0
        )));
    }
    let cutoff = |i: usize| -> f64 {
        if i < lo {
            i as f64 / lo as f64
        } else if i > hi {
            (n - 1 - i) as f64 / (n - 1 - hi) as f64
        } else {
            1.0
        }
    };
    Ok(f.map(|i, v| v * cutoff(i)))
}

/// `C0(R)` on a grid as an [`AlgebraModel`]. Not unital: the constant 1 does
/// not vanish at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C0Algebra {
    pub space: GridSpace,
    /// Absolute modulus at or below which a grid value counts as a zero.
    pub zero_threshold: f64,
}

impl C0Algebra {
    pub fn new(space: GridSpace) -> Self {
        Self {
            space,
            zero_threshold: 0.0,
        }
    }

    pub fn with_zero_threshold(mut self, threshold: f64) -> Self {
        self.zero_threshold = threshold;
        self
    }

    fn effective_threshold(&self, f: &C0Element) -> f64 {
        self.zero_threshold.max(default_division_threshold(f))
    }
}

impl AlgebraModel for C0Algebra {
    type Element = C0Element;

    fn name(&self) -> &str {
        "c0"
    }

    fn contains(&self, x: &C0Element) -> bool {
        x.len() == self.space.len()
    }

    fn zero(&self) -> C0Element {
        C0Element::zero(&self.space)
    }

    fn add(&self, a: &C0Element, b: &C0Element) -> C0Element {
        a.zip(b, |x, y| x + y)
    }

    fn sub(&self, a: &C0Element, b: &C0Element) -> C0Element {
        a.zip(b, |x, y| x - y)
    }

    fn scale(&self, s: Complex64, a: &C0Element) -> C0Element {
        a.map(|_, v| v * s)
    }

    fn mul(&self, a: &C0Element, b: &C0Element) -> C0Element {
        a.zip(b, |x, y| x * y)
    }

    fn norm(&self, a: &C0Element) -> f64 {
        sup_norm(a)
    }

    fn involution(&self, a: &C0Element) -> Option<C0Element> {
        Some(a.map(|_, v| v.conj()))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> C0Element {
        random_bump(&self.space, rng)
    }

    fn refute(&self, x: &C0Element, _side: Side) -> Option<String> {
        let nv = is_nonvanishing(x, self.effective_threshold(x));
        (!nv.nonvanishing).then(|| {
            format!(
                "vanishes at t = {} (|f| = {:e})",
                self.space.point(nv.min_index),
                nv.min_value
            )
        })
    }

    /// `inf_{|y|=1} sup |f y| = min |f|`, attained by the point mass at the
    /// minimizer.
    fn exact_zero_divisor_modulus(&self, x: &C0Element) -> Option<(f64, C0Element)> {
        let nv = is_nonvanishing(x, 0.0);
        let witness =
            C0Element::zero(&self.space).map(|i, v| if i == nv.min_index { Complex64::new(1.0, 0.0) } else { v });
        Some((nv.min_value, witness))
    }
}

/// `a e^{i phi} exp(-b (t - c)^2)` with the width chosen so the tails meet
/// the grid's tail tolerance.
pub fn random_bump(space: &GridSpace, rng: &mut dyn RngCore) -> C0Element {
    let l = space.half_width();
    let amp = 0.5 + rng.random::<f64>();
    let phase = 2.0 * PI * rng.random::<f64>();
    let center = (rng.random::<f64>() - 0.5) * l * 0.5;
    // exp(-b (L - |c|)^2) <= tail / (2 amp) at the ends.
    let reach = l - center.abs();
    let b_min = libm::log(2.0 * amp / space.tail_tolerance()) / (reach * reach);
    let b = b_min * (1.0 + rng.random::<f64>());
    let values = space
        .points()
        .map(|t| Complex64::from_polar(amp * libm::exp(-b * (t - center) * (t - center)), phase))
        .collect();
    C0Element::from_values(values)
}
