//! Schatten-class operator ideals on a finite-dimensional Hilbert space.
//!
//! Operators are `n x n` complex matrices. The tensor `f ⊗ g` denotes the
//! rank-one map `v -> <v, g> f`, and singular systems follow
//! `S e_k = lambda_k u_k` (input vectors `e_k`, output vectors `u_k`). With
//! that convention `U_m = sum_{k<=m} lambda_k^{-1} e_k ⊗ u_k` satisfies
//! `T U_m = P_m`, the orthogonal projection onto `span(u_1..u_m)`.
//!
//! At finite dimension dense range, surjectivity, injectivity and
//! boundedness below all collapse to `lambda_n > 0`; the routines below
//! report them separately anyway so the infinite-dimensional statements
//! keep their shape.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::AlgebraModel;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, inner, normalized, vec_norm, CMatrix};
use crate::net::{ApproxIdentityFamily, InverseNet, ResidualTrace, Schedule, Side, TraceEntry};
use crate::rng::SeedStream;

pub use crate::linalg::SingularSystem;

/// Relative rank threshold: singular values at or below `1e-10 * lambda_1`
/// count as zero.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-10;

/// Exponent of a Schatten class, `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchattenParams {
    p: f64,
}

impl SchattenParams {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(invalid(format!("Schatten exponent must be >= 1, got {}", p)));
        }
        Ok(Self { p })
    }

    pub const fn trace_class() -> Self {
        Self { p: 1.0 }
    }

    pub const fn hilbert_schmidt() -> Self {
        Self { p: 2.0 }
    }

    pub const fn compact() -> Self {
        Self { p: f64::INFINITY }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `l^p` norm of a list of singular values.
    pub fn norm_of(&self, values: &[f64]) -> f64 {
        if self.p.is_infinite() {
            return values.iter().copied().fold(0.0, f64::max);
        }
        if self.p == 1.0 {
            return values.iter().sum();
        }
        let top = values.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return 0.0;
        }
        let s: f64 = values.iter().map(|&v| libm::pow(v / top, self.p)).sum();
        top * libm::pow(s, 1.0 / self.p)
    }
}

/// Unit vector defining the pure state `tau_a(T) = <T a, a>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector(Vec<Complex64>);

impl PureStateVector {
    pub fn new(a: Vec<Complex64>) -> Result<Self> {
        let n = vec_norm(&a);
        if (n - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("pure state vector must have unit norm, got {}", n)));
        }
        Ok(Self(a))
    }

    /// Normalizes `a`; fails on the zero vector.
    pub fn normalize(a: &[Complex64]) -> Result<Self> {
        normalized(a)
            .map(Self)
            .ok_or_else(|| invalid("cannot normalize the zero vector"))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// `P_a = a ⊗ a`.
    pub fn projection(&self) -> CMatrix {
        CMatrix::outer(&self.0, &self.0)
    }
}

pub fn svd(s: &CMatrix) -> Result<SingularSystem> {
    linalg::svd(s)
}

/// `a_k(S) = inf { |S - F| : rank F < k }`, which equals `lambda_k`.
pub fn approximation_number(s: &CMatrix, k: usize) -> Result<f64> {
    if k == 0 || k > s.rows() {
        return Err(invalid(format!(
            "approximation number index {} outside 1..={}",
            k,
            s.rows()
        )));
    }
    Ok(svd(s)?.values[k - 1])
}

pub fn schatten_norm(s: &CMatrix, params: SchattenParams) -> Result<f64> {
    Ok(params.norm_of(&svd(s)?.values))
}

pub fn op_norm(s: &CMatrix) -> Result<f64> {
    Ok(svd(s)?.values.first().copied().unwrap_or(0.0))
}

/// Which norm a [`MatrixAlgebra`] carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixNorm {
    Operator,
    Schatten(SchattenParams),
}

/// `n x n` complex matrices as a normed algebra with involution `T -> T*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixAlgebra {
    pub dim: usize,
    pub norm: MatrixNorm,
    pub rank_threshold: f64,
}

impl MatrixAlgebra {
    pub fn new(dim: usize, norm: MatrixNorm) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("matrix dimension must be positive"));
        }
        Ok(Self {
            dim,
            norm,
            rank_threshold: DEFAULT_RANK_THRESHOLD,
        })
    }

    pub fn with_rank_threshold(mut self, rel: f64) -> Self {
        self.rank_threshold = rel;
        self
    }
}

impl AlgebraModel for MatrixAlgebra {
    type Element = CMatrix;

    fn name(&self) -> &str {
        "matrix"
    }

    fn contains(&self, x: &CMatrix) -> bool {
        x.rows() == self.dim && x.cols() == self.dim
    }

    fn zero(&self) -> CMatrix {
        CMatrix::zeros(self.dim, self.dim)
    }

    fn add(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        a.add(b)
    }

    fn sub(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        a.sub(b)
    }

    fn scale(&self, s: Complex64, a: &CMatrix) -> CMatrix {
        a.scale(s)
    }

    fn mul(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        a.matmul(b)
    }

    fn norm(&self, a: &CMatrix) -> f64 {
        let r = match self.norm {
            MatrixNorm::Operator => op_norm(a),
            MatrixNorm::Schatten(p) => schatten_norm(a, p),
        };
        r.unwrap_or(f64::NAN)
    }

    fn involution(&self, a: &CMatrix) -> Option<CMatrix> {
        Some(a.adjoint())
    }

    fn unit(&self) -> Option<CMatrix> {
        Some(CMatrix::identity(self.dim))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> CMatrix {
        random_matrix(self.dim, rng)
    }

    fn refute(&self, x: &CMatrix, side: Side) -> Option<String> {
        let rk = range_kernel_refuter(x, self.rank_threshold).ok()?;
        let (ok, what) = match side {
            Side::Right => (rk.dense_range, "range is not dense"),
            Side::Left => (rk.injective, "kernel is non-trivial"),
        };
        (!ok).then(|| format!("{} (smallest singular value {:e})", what, rk.sigma_min))
    }

    fn exact_zero_divisor_modulus(&self, x: &CMatrix) -> Option<(f64, CMatrix)> {
        let s = svd(x).ok()?;
        let k = s.len() - 1;
        let e = s.input_vector(k);
        // Rank-one y = e_n ⊗ e_n has norm 1 in every Schatten class and
        // |x y| = lambda_n, which is the infimum.
        Some((s.values[k], CMatrix::outer(&e, &e)))
    }
}

/// Complex Gaussian matrix with entries of variance `1/n`.
pub fn random_matrix(n: usize, rng: &mut dyn RngCore) -> CMatrix {
    let scale = 1.0 / libm::sqrt(2.0 * n as f64);
    CMatrix::from_fn(n, n, |_, _| gaussian(rng) * scale)
}

pub fn random_vector(n: usize, rng: &mut dyn RngCore) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn random_unit_vector(n: usize, rng: &mut dyn RngCore) -> Vec<Complex64> {
    loop {
        if let Some(v) = normalized(&random_vector(n, rng)) {
            return v;
        }
    }
}

fn gaussian(rng: &mut dyn RngCore) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Orthonormal basis obtained from the singular vectors of a random matrix.
pub fn random_orthonormal_basis(n: usize, rng: &mut dyn RngCore) -> Vec<Vec<Complex64>> {
    let s = svd(&random_matrix(n, rng)).expect("random matrices are finite");
    (0..n).map(|k| s.output_vector(k)).collect()
}

/// Random matrix of exactly the given rank (up to rounding).
pub fn random_matrix_of_rank(n: usize, rank: usize, rng: &mut dyn RngCore) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for _ in 0..rank.min(n) {
        let f = random_vector(n, rng);
        let g = random_vector(n, rng);
        out = out.add(&CMatrix::outer(&f, &g).scale(Complex64::new(1.0 / n as f64, 0.0)));
    }
    out
}

/// Projection family `m -> sum_{j <= m} b_j ⊗ b_j`, saturating at the full
/// basis. Every member has operator norm 1; the Schatten-p norm of `S_m` is
/// `m^{1/p}`, so no bound in the ideal norm is declared.
pub fn projection_family(basis: &[Vec<Complex64>]) -> Result<ApproxIdentityFamily<'static, CMatrix>> {
    let n = basis.len();
    if n == 0 {
        return Err(invalid("basis is empty"));
    }
    for (i, b) in basis.iter().enumerate() {
        if b.len() != n {
            return Err(invalid("basis vectors must have the basis length"));
        }
        for (j, c) in basis.iter().enumerate().take(i + 1) {
            let target = if i == j { 1.0 } else { 0.0 };
            if (inner(b, c) - Complex64::new(target, 0.0)).norm() > 1e-9 {
                return Err(invalid(format!("basis is not orthonormal at ({}, {})", i, j)));
            }
        }
    }
    // Prefix sums so each member is a single lookup.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(CMatrix::zeros(n, n));
    for b in basis {
        let next = prefix.last().expect("non-empty").add(&CMatrix::outer(b, b));
        prefix.push(next);
    }
    Ok(ApproxIdentityFamily::new(move |m| prefix[m.get().min(n)].clone()).with_operator_norm_bound(1.0))
}

/// Outcome of [`strong_convergence_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct StrongConvergence {
    /// `max_v max(|S_j v - v|, |S_j* v - v|)` per index.
    pub trace: ResidualTrace,
    pub sup_op_norm: f64,
    pub pass: bool,
}

/// Strong convergence `S_j v -> v` and `S_j* v -> v` on test vectors.
///
/// The family must declare an operator-norm bound; it is checked at every
/// scheduled index.
pub fn strong_convergence_check(
    family: &ApproxIdentityFamily<'_, CMatrix>,
    test_vectors: &[Vec<Complex64>],
    tol: f64,
    schedule: &Schedule,
) -> Result<StrongConvergence> {
    let bound = family
        .operator_norm_bound()
        .ok_or_else(|| Error::PreconditionViolation("family declares no uniform operator-norm bound".into()))?;
    if test_vectors.is_empty() {
        return Err(invalid("no test vectors"));
    }
    let mut trace = ResidualTrace::new(tol)?;
    let mut sup_op_norm: f64 = 0.0;
    for j in schedule.iter() {
        let s = family.member(j);
        let norm = op_norm(&s)?;
        sup_op_norm = sup_op_norm.max(norm);
        if norm > bound + 1e-9 {
            return Err(Error::PreconditionViolation(format!(
                "member {} has operator norm {} above the declared bound {}",
                j, norm, bound
            )));
        }
        let adj = s.adjoint();
        let mut left: f64 = 0.0;
        let mut right: f64 = 0.0;
        for v in test_vectors {
            let d = |m: &CMatrix| {
                let w = m.apply(v);
                vec_norm(&w.iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>())
            };
            left = left.max(d(&s));
            right = right.max(d(&adj));
        }
        trace.push(TraceEntry {
            index: j,
            residual: left.max(right),
            left_residual: left,
            right_residual: right,
            member_norm: norm,
        })?;
    }
    let pass = trace.final_residual().is_some_and(|r| r <= tol);
    Ok(StrongConvergence {
        trace,
        sup_op_norm,
        pass,
    })
}

/// Right inverse net `m -> U_m` of an operator with dense range, using the
/// default rank threshold.
pub fn right_inverse_net(t: &CMatrix) -> Result<InverseNet<'static, CMatrix>> {
    right_inverse_net_with_threshold(t, DEFAULT_RANK_THRESHOLD)
}

pub fn right_inverse_net_with_threshold(t: &CMatrix, rel_threshold: f64) -> Result<InverseNet<'static, CMatrix>> {
    let s = svd(t)?;
    let n = s.len();
    let threshold = rel_threshold * s.values.first().copied().unwrap_or(0.0);
    if let Some(k) = s.values.iter().position(|&v| v <= threshold) {
        return Err(Error::RankDeficient {
            index: k + 1,
            value: s.values[k],
            threshold,
        });
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(CMatrix::zeros(n, n));
    for k in 0..n {
        let term =
            CMatrix::outer(&s.input_vector(k), &s.output_vector(k)).scale(Complex64::new(1.0 / s.values[k], 0.0));
        let next = prefix.last().expect("non-empty").add(&term);
        prefix.push(next);
    }
    Ok(InverseNet::right(move |m| prefix[m.get().min(n)].clone()))
}

/// `P_m`, the projection onto the first `m` output singular vectors.
pub fn output_projection(s: &SingularSystem, m: usize) -> CMatrix {
    let n = s.output.rows();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..m.min(s.len()) {
        let u = s.output_vector(k);
        out = out.add(&CMatrix::outer(&u, &u));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeKernel {
    pub dense_range: bool,
    pub injective: bool,
    pub sigma_min: f64,
    /// Absolute threshold, `rel_threshold * lambda_1`.
    pub threshold: f64,
}

/// Dense range and injectivity at finite truncation (both are
/// `lambda_n > threshold * lambda_1`).
pub fn range_kernel_refuter(t: &CMatrix, rel_threshold: f64) -> Result<RangeKernel> {
    let s = svd(t)?;
    let top = s.values.first().copied().unwrap_or(0.0);
    let sigma_min = s.values.last().copied().unwrap_or(0.0);
    let threshold = rel_threshold * top;
    let full = sigma_min > threshold && sigma_min > 0.0;
    Ok(RangeKernel {
        dense_range: full,
        injective: full,
        sigma_min,
        threshold,
    })
}

/// `tau_a(T) = <T a, a>`.
pub fn pure_state_value(t: &CMatrix, a: &PureStateVector) -> Complex64 {
    inner(&t.apply(a.as_slice()), a.as_slice())
}

/// `T ∈ N_{tau_a}`, i.e. `tau_a(T* T) = |T a|^2 = 0` up to `tol`.
pub fn modular_ideal_membership(t: &CMatrix, a: &PureStateVector, tol: f64) -> bool {
    vec_norm(&t.apply(a.as_slice())) <= tol
}

/// Minimizes `|T* a| = tau_a(T T*)^{1/2}` over unit vectors.
///
/// Samples `samples` random unit vectors, then refines the best one by
/// inverse iteration on `T T* + delta I`. No singular value decomposition is
/// involved, so this is an independent route to `lambda_n`.
pub fn min_pure_state_defect(t: &CMatrix, samples: usize, seed: SeedStream) -> Result<(f64, PureStateVector)> {
    if samples == 0 {
        return Err(invalid("samples must be positive"));
    }
    let n = t.rows();
    let adj = t.adjoint();
    let defect = |a: &[Complex64]| vec_norm(&adj.apply(a));
    let mut rng = seed.rng(0x7073);
    let mut best = random_unit_vector(n, &mut rng);
    let mut best_val = defect(&best);
    for _ in 1..samples {
        let a = random_unit_vector(n, &mut rng);
        let v = defect(&a);
        if v < best_val {
            best = a;
            best_val = v;
        }
    }
    let gram = t.matmul(&adj);
    let fro = t.frobenius_norm();
    // The shift must survive rounding against entries of size |T|_F^2,
    // otherwise a singular T T* yields an exact zero pivot.
    let mut delta = (fro * fro * 1e-14).max(f64::MIN_POSITIVE);
    let shift = |d: f64| gram.add(&CMatrix::identity(n).scale(Complex64::new(d, 0.0)));
    let mut shifted = shift(delta);
    for _ in 0..200 {
        let x = match shifted.solve(&best) {
            Ok(x) => x,
            Err(_) if delta < fro * fro * 1e-6 => {
                delta *= 1e3;
                shifted = shift(delta);
                continue;
            }
            Err(_) => break,
        };
        let Some(next) = normalized(&x) else { break };
        let v = defect(&next);
        let done = (best_val - v).abs() <= 1e-15 * best_val.max(1e-300);
        if v <= best_val {
            best_val = v;
            best = next;
        }
        if done {
            break;
        }
    }
    Ok((best_val, PureStateVector(best)))
}

/// Right approximate invertibility of `T` matches left approximate
/// invertibility of `T*`, and the adjoint of the `U_m` net is a left net for
/// `T*` with the same residuals.
pub fn adjoint_duality_check(t: &CMatrix, rel_threshold: f64) -> Result<bool> {
    let direct = range_kernel_refuter(t, rel_threshold)?;
    let adjoint = range_kernel_refuter(&t.adjoint(), rel_threshold)?;
    if direct.dense_range != adjoint.injective {
        return Ok(false);
    }
    if !direct.dense_range {
        return Ok(true);
    }
    let net = right_inverse_net_with_threshold(t, rel_threshold)?;
    let t_adj = t.adjoint();
    let n = t.rows();
    for m in 1..=n {
        let idx = crate::net::NetIndex::new(m)?;
        let u = net.member(idx);
        let right = t.matmul(&u);
        let left = u.adjoint().matmul(&t_adj);
        if right.adjoint().sub(&left).max_abs() > 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
