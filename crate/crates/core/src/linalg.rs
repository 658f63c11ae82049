//! Dense complex matrices and the one-sided Jacobi singular value
//! decomposition.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(invalid("matrix data length does not match shape"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { ZERO })
    }

    /// `f g^H`, i.e. the rank-one operator `v -> <v, g> f`.
    pub fn outer(f: &[Complex64], g: &[Complex64]) -> Self {
        Self::from_fn(f.len(), g.len(), |i, j| f[i] * g[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "apply shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn zip_with(&self, other: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Solves `self x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if !self.is_square() || b.len() != self.rows {
            return Err(invalid("solve requires a square system"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() == 0.0 {
                return Err(Error::RankDeficient {
                    index: col + 1,
                    value: 0.0,
                    threshold: 0.0,
                });
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                x.swap(pivot, col);
            }
            let p = a[(col, col)];
            for i in col + 1..n {
                let factor = a[(i, col)] / p;
                if factor == ZERO {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(i, j)] -= factor * v;
                }
                let xc = x[col];
                x[i] -= factor * xc;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s / a[(i, i)];
        }
        Ok(x)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `<v, w> = sum v_i conj(w_i)`.
pub fn inner(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|a| a.norm_sqr()).sum())
}

pub fn normalized(v: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = vec_norm(v);
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|a| a / n).collect())
}

/// Singular values with output and input singular vectors.
///
/// `S e_k = lambda_k u_k`, so `S = sum_k lambda_k u_k e_k^H`. Columns of
/// `output` are the `u_k`, columns of `input` are the `e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSystem {
    pub values: Vec<f64>,
    pub output: CMatrix,
    pub input: CMatrix,
}

impl SingularSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn output_vector(&self, k: usize) -> Vec<Complex64> {
        self.output.column(k)
    }

    pub fn input_vector(&self, k: usize) -> Vec<Complex64> {
        self.input.column(k)
    }

    /// `sum_{k < rank} lambda_k u_k e_k^H`.
    pub fn truncation(&self, rank: usize) -> CMatrix {
        let n = self.output.rows();
        let mut out = CMatrix::zeros(n, self.input.rows());
        for k in 0..rank.min(self.len()) {
            let term = CMatrix::outer(&self.output_vector(k), &self.input_vector(k))
                .scale(Complex64::new(self.values[k], 0.0));
            out = out.add(&term);
        }
        out
    }
}

/// Relative off-diagonal mass at which a Jacobi sweep counts as converged.
pub const JACOBI_TOL: f64 = 1e-12;

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
///
/// Column pairs of `A V` are rotated until mutually orthogonal; the column
/// norms are then the singular values. Output vectors for zero singular
/// values are completed to an orthonormal basis by Gram-Schmidt against the
/// standard basis. Values are sorted non-increasing with a stable sort, so
/// the result is deterministic for a given input.
pub fn svd(a: &CMatrix) -> Result<SingularSystem> {
    if !a.is_square() {
        return Err(invalid("svd expects a square matrix"));
    }
    if !a.is_finite() {
        return Err(Error::NumericOverflow("matrix has non-finite entries".into()));
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n);
    let cap = (100 * n * n).max(1);
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged && sweeps < cap {
        sweeps += 1;
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for i in 0..n {
                    let (ap, aq) = (w[(i, p)], w[(i, q)]);
                    alpha += ap.norm_sqr();
                    beta += aq.norm_sqr();
                    gamma += ap.conj() * aq;
                }
                let g = gamma.norm();
                if alpha == 0.0 || beta == 0.0 || g == 0.0 {
                    continue;
                }
                let rel = g / libm::sqrt(alpha * beta);
                off = off.max(rel);
                if rel <= f64::EPSILON {
                    continue;
                }
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        converged = off <= JACOBI_TOL;
    }
    if !converged {
        return Err(Error::NonConvergence(sweeps));
    }

    let mut order: Vec<(f64, usize)> = (0..n).map(|j| (vec_norm(&w.column(j)), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let scale = order.first().map_or(0.0, |o| o.0);
    let mut values = Vec::with_capacity(n);
    let mut output = CMatrix::zeros(n, n);
    let mut input = CMatrix::zeros(n, n);
    let mut pending = Vec::new();
    for (k, &(sigma, j)) in order.iter().enumerate() {
        input.set_column(k, &v.column(j));
        if sigma > scale * f64::EPSILON * (n as f64) && sigma > 0.0 {
            let u: Vec<Complex64> = w.column(j).iter().map(|x| x / sigma).collect();
            output.set_column(k, &u);
            values.push(sigma);
        } else {
            values.push(if sigma > 0.0 { sigma } else { 0.0 });
            pending.push(k);
        }
    }
    if !pending.is_empty() {
        complete_basis(&mut output, &pending);
    }
    Ok(SingularSystem { values, output, input })
}

fn rotate(m: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    // q-column is first multiplied by conj(phase) so the Gram entry is real.
    let ph = phase.conj();
    for i in 0..m.rows() {
        let ap = m[(i, p)];
        let aq = m[(i, q)] * ph;
        m[(i, p)] = ap * c - aq * s;
        m[(i, q)] = ap * s + aq * c;
    }
}

/// Fills the listed columns with unit vectors orthogonal to all other
/// columns (which must already be orthonormal).
fn complete_basis(q: &mut CMatrix, pending: &[usize]) {
    let n = q.rows();
    let mut filled: Vec<usize> = (0..q.cols()).filter(|c| !pending.contains(c)).collect();
    let mut candidate = 0;
    for &k in pending {
        while candidate < n {
            let mut v = vec![ZERO; n];
            v[candidate] = ONE;
            candidate += 1;
            for _ in 0..2 {
                for &c in &filled {
                    let col = q.column(c);
                    let proj = inner(&v, &col);
                    for (x, y) in v.iter_mut().zip(&col) {
                        *x -= proj * y;
                    }
                }
            }
            if vec_norm(&v) > 1e-8 {
                let v = normalized(&v).expect("nonzero");
                q.set_column(k, &v);
                filled.push(k);
                break;
            }
        }
    }
}
