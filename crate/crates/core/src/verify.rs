//! Generic verifiers shared by every algebra model.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::AlgebraModel;
use crate::error::{invalid, Error, Result};
use crate::net::{ApproxIdentityFamily, InverseNet, ResidualTrace, Schedule, Side, TraceEntry};
use crate::rng::SeedStream;

/// Tolerance for identities that hold exactly up to rounding.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for asymptotic convergence at default resolutions.
pub const ASYMPTOTIC_TOL: f64 = 1e-2;

/// Outcome of [`check_approximate_identity`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    /// One trace per test element, in test-set order.
    pub traces: Vec<ResidualTrace>,
    /// Largest `norm(e_j)` seen along the schedule.
    pub max_member_norm: f64,
    /// `false` only when a declared norm bound was exceeded.
    pub bound_holds: bool,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn worst_final_residual(&self) -> f64 {
        self.traces
            .iter()
            .filter_map(ResidualTrace::final_residual)
            .fold(0.0, f64::max)
    }
}

/// Diagnostic for a single trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecayVerdict {
    pub passes: bool,
    /// Residuals never increase after the trace maximum.
    pub eventually_non_increasing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    CertifiedRight,
    CertifiedLeft,
    CertifiedTwoSided,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        matches!(
            self,
            Verdict::CertifiedLeft | Verdict::CertifiedRight | Verdict::CertifiedTwoSided
        )
    }

    pub fn certifies(self, side: Side) -> bool {
        matches!(
            (self, side),
            (Verdict::CertifiedTwoSided, _)
                | (Verdict::CertifiedRight, Side::Right)
                | (Verdict::CertifiedLeft, Side::Left)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedRight => "certified-right",
            Verdict::CertifiedLeft => "certified-left",
            Verdict::CertifiedTwoSided => "certified-two-sided",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Evidence that an element is (or is not) approximately invertible.
pub struct ApproxInvCertificate<'a, E> {
    pub element: E,
    pub net: InverseNet<'a, E>,
    /// Checks of `j -> l_j x`, treating the net as a left net.
    pub left: IdentityCheck,
    /// Checks of `j -> x r_j`, treating the net as a right net.
    pub right: IdentityCheck,
    pub verdict: Verdict,
    /// Reason given by the model refuter, if it fired.
    pub refutation: Option<String>,
}

impl<E> ApproxInvCertificate<'_, E> {
    /// A certified side must have every final residual within tolerance.
    pub fn is_sound(&self) -> bool {
        let ok = |c: &IdentityCheck| {
            c.traces
                .iter()
                .all(|t| t.final_residual().map(|r| r <= t.tolerance()).unwrap_or(false))
        };
        match self.verdict {
            Verdict::CertifiedRight => ok(&self.right),
            Verdict::CertifiedLeft => ok(&self.left),
            Verdict::CertifiedTwoSided => ok(&self.left) && ok(&self.right),
            Verdict::Refuted => self.refutation.is_some(),
            Verdict::Inconclusive => true,
        }
    }

    pub fn trace(&self, side: Side) -> &IdentityCheck {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// Upper estimate of `inf_{|y|=1} |x y|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDivisorModulus<E> {
    pub value: f64,
    pub witness: E,
    pub method: ModulusMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusMethod {
    Exact,
    Sampled,
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericOverflow(format!("{} = {}", what, v)))
    }
}

/// Evaluates `max(norm(e_j x - x), norm(x e_j - x))` for every test element
/// along the schedule.
///
/// The verdict passes when every final residual is within `tol` and the
/// declared norm bound (if any) holds at every evaluated index.
pub fn check_approximate_identity<M: AlgebraModel>(
    model: &M,
    family: &ApproxIdentityFamily<'_, M::Element>,
    test_set: &[M::Element],
    tol: f64,
    schedule: &Schedule,
) -> Result<IdentityCheck> {
    if test_set.is_empty() {
        return Err(invalid("test set is empty"));
    }
    if test_set.iter().any(|x| !model.contains(x)) {
        return Err(invalid(format!("test element does not belong to {}", model.name())));
    }
    let mut traces = test_set
        .iter()
        .map(|_| ResidualTrace::new(tol))
        .collect::<Result<Vec<_>>>()?;
    let mut max_member_norm: f64 = 0.0;
    let mut bound_holds = true;
    for j in schedule.iter() {
        let e = family.member(j);
        if !model.contains(&e) {
            return Err(invalid(format!(
                "family member {} does not belong to {}",
                j,
                model.name()
            )));
        }
        let member_norm = finite(model.norm(&e), "family member norm")?;
        max_member_norm = max_member_norm.max(member_norm);
        if let Some(bound) = family.norm_bound() {
            if member_norm > bound + tol {
                bound_holds = false;
            }
        }
        for (x, trace) in test_set.iter().zip(traces.iter_mut()) {
            let left = finite(model.norm(&model.sub(&model.mul(&e, x), x)), "left residual")?;
            let right = finite(model.norm(&model.sub(&model.mul(x, &e), x)), "right residual")?;
            trace.push(TraceEntry {
                index: j,
                residual: left.max(right),
                left_residual: left,
                right_residual: right,
                member_norm,
            })?;
        }
    }
    let pass = bound_holds && traces.iter().all(|t| residual_decay_verdict(t, tol).passes);
    Ok(IdentityCheck {
        traces,
        max_member_norm,
        bound_holds,
        pass,
    })
}

/// Pass iff the last residual is within `tol`.
pub fn residual_decay_verdict(trace: &ResidualTrace, tol: f64) -> DecayVerdict {
    let residuals: Vec<f64> = trace.residuals().collect();
    let Some(&last) = residuals.last() else {
        return DecayVerdict {
            passes: false,
            eventually_non_increasing: false,
        };
    };
    let peak = residuals
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &r)| if r >= acc.1 { (i, r) } else { acc },
        )
        .0;
    let eventually_non_increasing = residuals[peak..].windows(2).all(|w| w[1] <= w[0]);
    DecayVerdict {
        passes: last <= tol,
        eventually_non_increasing,
    }
}

/// Builds `j -> x r_j` (or `l_j x`) from the net and checks both products
/// against the test set.
///
/// `Refuted` comes only from the model's analytic refuter. A net whose
/// residuals stagnate yields `Inconclusive`.
pub fn check_approx_invertible<'a, M: AlgebraModel>(
    model: &M,
    x: M::Element,
    net: InverseNet<'a, M::Element>,
    test_set: &[M::Element],
    tol: f64,
    schedule: &Schedule,
) -> Result<ApproxInvCertificate<'a, M::Element>> {
    if !model.contains(&x) {
        return Err(invalid(format!("element does not belong to {}", model.name())));
    }
    if model.norm(&x) <= tol {
        return Err(invalid("zero element cannot be approximately invertible"));
    }
    let right_family = ApproxIdentityFamily::new(|j| model.mul(&x, &net.member(j)));
    let left_family = ApproxIdentityFamily::new(|j| model.mul(&net.member(j), &x));
    let right = check_approximate_identity(model, &right_family, test_set, tol, schedule)?;
    let left = check_approximate_identity(model, &left_family, test_set, tol, schedule)?;
    drop((right_family, left_family));

    let refutation = model.refute(&x, net.side());
    let verdict = if refutation.is_some() {
        Verdict::Refuted
    } else {
        match (net.side(), right.pass, left.pass) {
            (_, true, true) => Verdict::CertifiedTwoSided,
            (Side::Right, true, false) => Verdict::CertifiedRight,
            (Side::Left, false, true) => Verdict::CertifiedLeft,
            _ => Verdict::Inconclusive,
        }
    };
    Ok(ApproxInvCertificate {
        element: x,
        net,
        left,
        right,
        verdict,
        refutation,
    })
}

/// `a ∘ b = a b - a - b`.
pub fn circle_op<M: AlgebraModel>(model: &M, a: &M::Element, b: &M::Element) -> M::Element {
    model.sub(&model.sub(&model.mul(a, b), a), b)
}

/// Trace of `norm(a ∘ b_j)`; it tends to zero when `a` is topologically
/// right quasi-invertible along the net.
pub fn quasi_inv_residual<M: AlgebraModel>(
    model: &M,
    a: &M::Element,
    net: &InverseNet<'_, M::Element>,
    tol: f64,
    schedule: &Schedule,
) -> Result<ResidualTrace> {
    let mut trace = ResidualTrace::new(tol)?;
    for j in schedule.iter() {
        let b = net.member(j);
        let r = finite(model.norm(&circle_op(model, a, &b)), "circle residual")?;
        trace.push(TraceEntry {
            index: j,
            residual: r,
            left_residual: r,
            right_residual: r,
            member_norm: finite(model.norm(&b), "net member norm")?,
        })?;
    }
    Ok(trace)
}

/// Diagonal of the pair net: `k -> r_k l_k`.
///
/// When `x r_j` and `l_j x` are both approximate identities, so is
/// `x w_k x` (see [`sandwich_family`]).
pub fn combine_nets<'a, M: AlgebraModel>(
    model: &'a M,
    left: InverseNet<'a, M::Element>,
    right: InverseNet<'a, M::Element>,
) -> Result<InverseNet<'a, M::Element>> {
    if left.side() != Side::Left || right.side() != Side::Right {
        return Err(invalid("combine_nets expects a left net and a right net"));
    }
    Ok(InverseNet::right(move |k| model.mul(&right.member(k), &left.member(k))))
}

/// `k -> x w_k x`.
pub fn sandwich_family<'a, M: AlgebraModel>(
    model: &'a M,
    x: &'a M::Element,
    w: &'a InverseNet<'a, M::Element>,
) -> ApproxIdentityFamily<'a, M::Element> {
    ApproxIdentityFamily::new(move |k| model.mul(&model.mul(x, &w.member(k)), x))
}

/// Estimates the left zero-divisor modulus `inf_{|y|=1} |x y|`.
///
/// Uses the model's closed form when it has one; otherwise minimizes over
/// `candidate_count` random unit elements plus any structured candidates the
/// model offers. The sampled value is an upper estimate.
pub fn zero_divisor_modulus<M: AlgebraModel>(
    model: &M,
    x: &M::Element,
    candidate_count: usize,
    seed: SeedStream,
) -> Result<ZeroDivisorModulus<M::Element>> {
    if candidate_count == 0 {
        return Err(invalid("candidate_count must be positive"));
    }
    if !model.contains(x) {
        return Err(invalid(format!("element does not belong to {}", model.name())));
    }
    if let Some((value, witness)) = model.exact_zero_divisor_modulus(x) {
        return Ok(ZeroDivisorModulus {
            value,
            witness,
            method: ModulusMethod::Exact,
        });
    }
    let mut rng = seed.rng(0x7a64);
    let structured = model.zero_divisor_candidates(x);
    let random = (0..candidate_count).map(|_| model.random_element(&mut rng));
    let mut best: Option<(f64, M::Element)> = None;
    for y in structured.into_iter().chain(random) {
        let n = model.norm(&y);
        if !(n.is_finite() && n > 0.0) {
            continue;
        }
        let y = model.scale(Complex64::new(1.0 / n, 0.0), &y);
        let v = finite(model.norm(&model.mul(x, &y)), "zero-divisor candidate")?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, y));
        }
    }
    let (value, witness) =
        best.ok_or_else(|| Error::NumericOverflow("no candidate had a finite positive norm".into()))?;
    Ok(ZeroDivisorModulus {
        value,
        witness,
        method: ModulusMethod::Sampled,
    })
}

/// Result of comparing a right certificate for `x` with the left
/// certificate for `x*` built from the adjoint net.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub right_verdict: Verdict,
    pub adjoint_left_verdict: Verdict,
    /// Largest difference between matching residuals of the two checks.
    pub max_discrepancy: f64,
}

impl DualityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.right_verdict.certifies(Side::Right) == self.adjoint_left_verdict.certifies(Side::Left)
            && self.max_discrepancy <= tol
    }
}

/// Certifies `x` with the right net `(r_j)` and `x*` with the left net
/// `(r_j*)` against the adjoint test set, and compares residuals entry by
/// entry.
pub fn involution_duality<M: AlgebraModel>(
    model: &M,
    x: &M::Element,
    net: &InverseNet<'_, M::Element>,
    test_set: &[M::Element],
    tol: f64,
    schedule: &Schedule,
) -> Result<DualityReport> {
    if net.side() != Side::Right {
        return Err(invalid("involution_duality expects a right net"));
    }
    let star = |a: &M::Element| {
        model
            .involution(a)
            .ok_or_else(|| invalid(format!("{} has no involution", model.name())))
    };
    let x_star = star(x)?;
    let adjoint_tests = test_set.iter().map(star).collect::<Result<Vec<_>>>()?;

    let direct = check_approx_invertible(
        model,
        x.clone(),
        InverseNet::right(|j| net.member(j)),
        test_set,
        tol,
        schedule,
    )?;
    let adjoint = check_approx_invertible(
        model,
        x_star,
        InverseNet::left(|j| model.involution(&net.member(j)).unwrap_or_else(|| model.zero())),
        &adjoint_tests,
        tol,
        schedule,
    )?;
    let mut max_discrepancy: f64 = 0.0;
    for (a, b) in direct.right.traces.iter().zip(adjoint.left.traces.iter()) {
        for (ea, eb) in a.entries().iter().zip(b.entries()) {
            max_discrepancy = max_discrepancy.max((ea.residual - eb.residual).abs());
        }
    }
    Ok(DualityReport {
        right_verdict: direct.verdict,
        adjoint_left_verdict: adjoint.verdict,
        max_discrepancy,
    })
}
