use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};

/// Position in a sequential net; larger is finer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetIndex(usize);

impl NetIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("net index must be positive"));
        }
        Ok(Self(n))
    }

    pub const fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for NetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Strictly increasing list of net indices at which a net is evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule(Vec<NetIndex>);

impl Schedule {
    /// Every index `1..=max`.
    pub fn up_to(max: usize) -> Result<Self> {
        Self::from_indices(1..=max)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut out: Vec<NetIndex> = Vec::new();
        for n in indices {
            let idx = NetIndex::new(n)?;
            if let Some(last) = out.last() {
                if idx <= *last {
                    return Err(invalid(format!(
                        "schedule must be strictly increasing ({} after {})",
                        idx, last
                    )));
                }
            }
            out.push(idx);
        }
        if out.is_empty() {
            return Err(invalid("schedule is empty"));
        }
        Ok(Self(out))
    }

    /// Powers of two `lo, 2 lo, ...` not exceeding `hi`.
    pub fn doubling(lo: usize, hi: usize) -> Result<Self> {
        let mut v = Vec::new();
        let mut n = lo.max(1);
        while n <= hi {
            v.push(n);
            n *= 2;
        }
        Self::from_indices(v)
    }

    pub fn indices(&self) -> &[NetIndex] {
        &self.0
    }

    pub fn last(&self) -> NetIndex {
        *self.0.last().expect("schedule is never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = NetIndex> + '_ {
        self.0.iter().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

type Generator<'a, E> = Box<dyn Fn(NetIndex) -> E + 'a>;

/// Candidate approximate identity `j -> e_j`.
pub struct ApproxIdentityFamily<'a, E> {
    generator: Generator<'a, E>,
    norm_bound: Option<f64>,
    operator_norm_bound: Option<f64>,
}

impl<'a, E> ApproxIdentityFamily<'a, E> {
    pub fn new(generator: impl Fn(NetIndex) -> E + 'a) -> Self {
        Self {
            generator: Box::new(generator),
            norm_bound: None,
            operator_norm_bound: None,
        }
    }

    /// Declares `norm(e_j) <= bound` for every index.
    pub fn with_norm_bound(mut self, bound: f64) -> Self {
        self.norm_bound = Some(bound);
        self
    }

    /// Declares that `e_j` acts with norm at most `bound` as a left and right
    /// multiplier. For matrices this is the operator norm, which can stay at
    /// 1 while Schatten norms grow with the rank.
    pub fn with_operator_norm_bound(mut self, bound: f64) -> Self {
        self.operator_norm_bound = Some(bound);
        self
    }

    pub fn norm_bound(&self) -> Option<f64> {
        self.norm_bound
    }

    pub fn operator_norm_bound(&self) -> Option<f64> {
        self.operator_norm_bound
    }

    pub fn operator_norm_bounded(&self) -> bool {
        self.operator_norm_bound.is_some()
    }

    pub fn member(&self, j: NetIndex) -> E {
        (self.generator)(j)
    }
}

impl<E> fmt::Debug for ApproxIdentityFamily<'_, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxIdentityFamily")
            .field("norm_bound", &self.norm_bound)
            .field("operator_norm_bound", &self.operator_norm_bound)
            .finish_non_exhaustive()
    }
}

/// Net of candidate one-sided inverses `j -> r_j` (or `l_j`).
pub struct InverseNet<'a, E> {
    generator: Generator<'a, E>,
    side: Side,
}

impl<'a, E> InverseNet<'a, E> {
    pub fn new(side: Side, generator: impl Fn(NetIndex) -> E + 'a) -> Self {
        Self {
            generator: Box::new(generator),
            side,
        }
    }

    pub fn right(generator: impl Fn(NetIndex) -> E + 'a) -> Self {
        Self::new(Side::Right, generator)
    }

    pub fn left(generator: impl Fn(NetIndex) -> E + 'a) -> Self {
        Self::new(Side::Left, generator)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn member(&self, j: NetIndex) -> E {
        (self.generator)(j)
    }
}

impl<E> fmt::Debug for InverseNet<'_, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InverseNet")
            .field("side", &self.side)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub index: NetIndex,
    /// The residual the verdict is based on.
    pub residual: f64,
    /// `norm(e_j x - x)`.
    pub left_residual: f64,
    /// `norm(x e_j - x)`.
    pub right_residual: f64,
    /// `norm(e_j)`.
    pub member_norm: f64,
}

/// Residuals of a net evaluated along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTrace {
    entries: Vec<TraceEntry>,
    tolerance: f64,
}

impl ResidualTrace {
    pub fn new(tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(invalid("tolerance must be positive and finite"));
        }
        Ok(Self {
            entries: Vec::new(),
            tolerance,
        })
    }

    pub fn push(&mut self, entry: TraceEntry) -> Result<()> {
        if let Some(last) = self.entries.last() {
            if entry.index <= last.index {
                return Err(invalid("trace indices must be strictly increasing"));
            }
        }
        for v in [entry.residual, entry.left_residual, entry.right_residual] {
            if !v.is_finite() || v < 0.0 {
                return Err(crate::Error::NumericOverflow(format!(
                    "residual {} at index {}",
                    v, entry.index
                )));
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.entries.last().map(|e| e.residual)
    }

    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.residual)
    }
}
