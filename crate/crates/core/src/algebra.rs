use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::RngCore;

use crate::net::Side;

/// A normed algebra over the complex numbers, given by its element
/// arithmetic.
///
/// Every concrete model in this crate is a finite truncation of an
/// infinite-dimensional algebra. The trait carries just enough structure for
/// the generic verifiers in [`crate::verify`]: arithmetic, the norm, an
/// optional involution, and hooks for model-specific refuters and
/// zero-divisor estimates.
pub trait AlgebraModel {
    type Element: Clone;

    /// Short identifier used in reports.
    fn name(&self) -> &str;

    /// Whether `x` is shaped for this model (dimension, grid size).
    fn contains(&self, x: &Self::Element) -> bool;

    fn zero(&self) -> Self::Element;

    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn scale(&self, s: Complex64, a: &Self::Element) -> Self::Element;

    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn norm(&self, a: &Self::Element) -> f64;

    fn sub(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        self.add(a, &self.scale(Complex64::new(-1.0, 0.0), b))
    }

    /// `x*`, when the model carries an involution.
    fn involution(&self, _a: &Self::Element) -> Option<Self::Element> {
        None
    }

    /// The unit, for unital models.
    fn unit(&self) -> Option<Self::Element> {
        None
    }

    fn is_unital(&self) -> bool {
        self.unit().is_some()
    }

    /// A random element, used for sampled estimates and property checks.
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Element;

    /// Analytic proof that `x` is *not* approximately invertible on `side`.
    ///
    /// Only models with a genuine criterion (rank, non-vanishing, Fourier
    /// support) return `Some`.
    fn refute(&self, _x: &Self::Element, _side: Side) -> Option<String> {
        None
    }

    /// Closed form for `inf_{|y| = 1} |x y|` together with a minimizer.
    fn exact_zero_divisor_modulus(&self, _x: &Self::Element) -> Option<(f64, Self::Element)> {
        None
    }

    /// Extra structured candidates for the sampled zero-divisor estimate.
    fn zero_divisor_candidates(&self, _x: &Self::Element) -> Vec<Self::Element> {
        Vec::new()
    }
}
