//! The algebra generated by `N` canonical pairs `p_m`, `q^m` with
//! `[p_m, q^n] = c δ_mn I`: words, pq-ordered monomials and elements.

mod element;
mod rewrite;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::CoeffMode;

pub use element::{el_add, el_eq, el_from_monomial, el_mul, el_neg, el_scale, Element};
pub use rewrite::normal_order_word;

/// Whether generators may carry negative exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExponentMode {
    Polynomial,
    Laurent,
}

impl ExponentMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ExponentMode::Polynomial => "polynomial",
            ExponentMode::Laurent => "laurent",
        }
    }
}

impl fmt::Display for ExponentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number of pairs, exponent mode and optional truncation order of `c`.
///
/// Laurent mode always carries a truncation order: reordering `q^-1` past
/// `p^-1` produces an infinite series in `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    n_pairs: u32,
    mode: ExponentMode,
    trunc: Option<u32>,
}

impl AlgebraContext {
    pub fn new(n_pairs: u32, mode: ExponentMode, trunc: Option<u32>) -> Result<Self> {
        if n_pairs == 0 {
            return Err(Error::InvalidContext("need at least one pair".into()));
        }
        if mode == ExponentMode::Laurent && trunc.is_none() {
            return Err(Error::InvalidContext(
                "laurent mode requires a truncation order".into(),
            ));
        }
        Ok(AlgebraContext {
            n_pairs,
            mode,
            trunc,
        })
    }

    /// Exact polynomial algebra.
    pub fn polynomial(n_pairs: u32) -> Result<Self> {
        Self::new(n_pairs, ExponentMode::Polynomial, None)
    }

    /// Algebra with inverses, coefficients modulo `c^(k+1)`.
    pub fn laurent(n_pairs: u32, k: u32) -> Result<Self> {
        Self::new(n_pairs, ExponentMode::Laurent, Some(k))
    }

    pub fn with_truncation(mut self, k: u32) -> Self {
        self.trunc = Some(k);
        self
    }

    pub fn n_pairs(&self) -> u32 {
        self.n_pairs
    }

    pub fn mode(&self) -> ExponentMode {
        self.mode
    }

    pub fn truncation(&self) -> Option<u32> {
        self.trunc
    }

    pub fn coeff_mode(&self) -> CoeffMode {
        match self.trunc {
            Some(k) => CoeffMode::Truncated(k),
            None => CoeffMode::Exact,
        }
    }

    pub(crate) fn check_index(&self, index: u32) -> Result<()> {
        if index == 0 || index > self.n_pairs {
            return Err(Error::InvalidGenerator {
                index,
                n_pairs: self.n_pairs,
            });
        }
        Ok(())
    }

    pub(crate) fn check_exponent(&self, exponent: i64) -> Result<()> {
        if exponent < 0 && self.mode == ExponentMode::Polynomial {
            return Err(Error::NegativeExponentInPolynomialMode { exponent });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub kind: Kind,
    pub index: u32,
}

impl GeneratorId {
    pub fn p(index: u32) -> Self {
        GeneratorId {
            kind: Kind::P,
            index,
        }
    }

    pub fn q(index: u32) -> Self {
        GeneratorId {
            kind: Kind::Q,
            index,
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::P => write!(f, "p{}", self.index),
            Kind::Q => write!(f, "q{}", self.index),
        }
    }
}

/// An unordered product of generator powers. The empty word is `I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    factors: Vec<(GeneratorId, i64)>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    /// Zero exponents are dropped.
    pub fn from_factors<I: IntoIterator<Item = (GeneratorId, i64)>>(factors: I) -> Self {
        let mut w = Word::new();
        for (g, e) in factors {
            w.push(g, e);
        }
        w
    }

    pub fn push(&mut self, gen: GeneratorId, exponent: i64) {
        if exponent != 0 {
            self.factors.push((gen, exponent));
        }
    }

    pub fn factors(&self) -> &[(GeneratorId, i64)] {
        &self.factors
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Word { factors }
    }

    /// Number of unit factors, i.e. the sum of `|exponent|`.
    pub fn len(&self) -> u64 {
        self.factors.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn validate(&self, ctx: &AlgebraContext) -> Result<()> {
        for (g, e) in &self.factors {
            ctx.check_index(g.index)?;
            ctx.check_exponent(*e)?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write_power(f, g, *e)?;
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, g: &GeneratorId, e: i64) -> fmt::Result {
    if e == 1 {
        write!(f, "{g}")
    } else {
        write!(f, "{g}^{e}")
    }
}

/// pq-ordered monomial `p_1^{a_1} q^{1 b_1} ... p_N^{a_N} q^{N b_N}`.
///
/// Only indices with `(a_m, b_m) != (0, 0)` are stored; the empty map is `I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalMonomial {
    exps: BTreeMap<u32, (i64, i64)>,
}

impl NormalMonomial {
    pub fn identity() -> Self {
        NormalMonomial::default()
    }

    /// From `(index, p_exponent, q_exponent)` triples; later triples for the
    /// same index overwrite earlier ones.
    pub fn from_pairs<I: IntoIterator<Item = (u32, i64, i64)>>(pairs: I) -> Self {
        let mut m = NormalMonomial::identity();
        for (idx, a, b) in pairs {
            m.set(idx, a, b);
        }
        m
    }

    pub fn p(index: u32, a: i64) -> Self {
        Self::from_pairs([(index, a, 0)])
    }

    pub fn q(index: u32, b: i64) -> Self {
        Self::from_pairs([(index, 0, b)])
    }

    pub fn set(&mut self, index: u32, a: i64, b: i64) {
        if a == 0 && b == 0 {
            self.exps.remove(&index);
        } else {
            self.exps.insert(index, (a, b));
        }
    }

    /// `(p exponent, q exponent)` for `index`.
    pub fn get(&self, index: u32) -> (i64, i64) {
        self.exps.get(&index).copied().unwrap_or((0, 0))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, i64, i64)> + '_ {
        self.exps.iter().map(|(&m, &(a, b))| (m, a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn max_index(&self) -> u32 {
        self.exps.keys().next_back().copied().unwrap_or(0)
    }

    /// Signed total degree `Σ (a_m + b_m)`.
    pub fn total_degree(&self) -> i64 {
        self.exps.values().map(|(a, b)| a + b).sum()
    }

    pub fn p_degree(&self) -> i64 {
        self.exps.values().map(|(a, _)| a).sum()
    }

    pub fn q_degree(&self) -> i64 {
        self.exps.values().map(|(_, b)| b).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.exps.values().any(|&(a, b)| a < 0 || b < 0)
    }

    pub fn validate(&self, ctx: &AlgebraContext) -> Result<()> {
        for (&m, &(a, b)) in &self.exps {
            ctx.check_index(m)?;
            ctx.check_exponent(a)?;
            ctx.check_exponent(b)?;
        }
        Ok(())
    }

    /// Serializes as the word `p_1^{a_1} q^{1 b_1} ...`.
    pub fn to_word(&self) -> Word {
        let mut w = Word::new();
        for (&m, &(a, b)) in &self.exps {
            w.push(GeneratorId::p(m), a);
            w.push(GeneratorId::q(m), b);
        }
        w
    }

    /// Rendering order: higher signed total degree first, then exponent
    /// vectors `(a_1, b_1, a_2, ...)` in descending lexicographic order.
    pub fn render_cmp(&self, other: &Self) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then_with(|| {
                let top = self.max_index().max(other.max_index());
                for m in 1..=top {
                    let ord = other.get(m).cmp(&self.get(m));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
    }
}

/// `p1^2 q1^2 p2^-1`, or `I` for the identity.
impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}
