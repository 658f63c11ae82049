//! Approximate identities and approximate inverses in concrete normed
//! algebras.
//!
//! The crate realizes four finite truncations of non-unital algebras:
//!
//! * [`c0`]: `C0(R)` sampled on a symmetric grid, with plateau approximate
//!   identities and the explicit inverse net `e_K / f`;
//! * [`wiener`]: `L1(T)` on the sampled circle, with Fejér kernels and
//!   Wiener division;
//! * [`disk`]: the small disk algebra of polynomials vanishing at the origin;
//! * [`operators`]: Schatten-class matrices with singular systems and the
//!   projection and `U_m` nets;
//!
//! plus the [`module`] action of `L1(T)` on `Lp(T)` used for deconvolution.
//! The generic verifiers in [`verify`] work over any [`AlgebraModel`].
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod c0;
pub mod disk;
pub mod error;
pub mod fft;
pub mod linalg;
pub mod module;
pub mod net;
pub mod operators;
pub mod rng;
pub mod verify;
pub mod wiener;

pub use algebra::AlgebraModel;
pub use error::{Error, Result};
pub use net::{ApproxIdentityFamily, InverseNet, NetIndex, ResidualTrace, Schedule, Side, TraceEntry};
pub use num_complex::Complex64;
pub use rng::SeedStream;
pub use verify::{ApproxInvCertificate, IdentityCheck, ModulusMethod, Verdict, ZeroDivisorModulus};
