use std::collections::BTreeMap;
use std::fmt;

use super::{normal_order_word, AlgebraContext, GeneratorId, Kind, NormalMonomial, Word};
use crate::error::{Error, Result};
use crate::scalar::{CSeries, Rational};

/// Finite sum of `CSeries`-weighted pq-ordered monomials.
///
/// Terms are kept in canonical form, so structural equality is algebraic
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    ctx: AlgebraContext,
    terms: BTreeMap<NormalMonomial, CSeries>,
}

impl Element {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Element {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: AlgebraContext) -> Self {
        Self::scalar(CSeries::one(ctx.coeff_mode()), ctx)
    }

    /// `coeff * I`.
    pub fn scalar(coeff: CSeries, ctx: AlgebraContext) -> Self {
        let mut e = Element::zero(ctx);
        if !coeff.is_zero() {
            e.terms.insert(NormalMonomial::identity(), coeff.with_mode(ctx.coeff_mode()));
        }
        e
    }

    pub fn from_monomial(m: NormalMonomial, coeff: CSeries, ctx: AlgebraContext) -> Result<Self> {
        Self::from_terms([(m, coeff)], ctx)
    }

    /// A single generator power `p_m^e` or `q_m^e`.
    pub fn generator(gen: GeneratorId, exponent: i64, ctx: AlgebraContext) -> Result<Self> {
        let m = match gen.kind {
            Kind::P => NormalMonomial::p(gen.index, exponent),
            Kind::Q => NormalMonomial::q(gen.index, exponent),
        };
        Self::from_monomial(m, CSeries::one(ctx.coeff_mode()), ctx)
    }

    /// Sums the given terms after validating them against `ctx`.
    pub fn from_terms<I>(terms: I, ctx: AlgebraContext) -> Result<Self>
    where
        I: IntoIterator<Item = (NormalMonomial, CSeries)>,
    {
        let mut e = Element::zero(ctx);
        for (m, coeff) in terms {
            m.validate(&ctx)?;
            if coeff.mode() != ctx.coeff_mode() {
                return Err(Error::ModeMismatch {
                    left: ctx.coeff_mode(),
                    right: coeff.mode(),
                });
            }
            e.add_term(m, coeff)?;
        }
        Ok(e)
    }

    pub(crate) fn add_term(&mut self, m: NormalMonomial, coeff: CSeries) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let sum = slot.add(&coeff)?;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalMonomial, &CSeries)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &NormalMonomial) -> CSeries {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| CSeries::zero(self.ctx.coeff_mode()))
    }

    /// Terms in rendering order.
    pub fn sorted_terms(&self) -> Vec<(&NormalMonomial, &CSeries)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.render_cmp(b.0));
        v
    }

    fn check_ctx(&self, other: &Element) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, coeff) in &other.terms {
            out.add_term(m.clone(), coeff.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &CSeries) -> Result<Element> {
        let mut out = Element::zero(self.ctx);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.mul(s)?)?;
        }
        Ok(out)
    }

    pub fn scale_rational(&self, r: &Rational) -> Element {
        let mut out = Element::zero(self.ctx);
        for (m, coeff) in &self.terms {
            let scaled = coeff.scale(r);
            if !scaled.is_zero() {
                out.terms.insert(m.clone(), scaled);
            }
        }
        out
    }

    /// Algebra product: every pair of monomials is concatenated into a word
    /// and normal-ordered.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_ctx(other)?;
        let mut out = Element::zero(self.ctx);
        for (ma, ca) in &self.terms {
            let wa = ma.to_word();
            for (mb, cb) in &other.terms {
                let coeff = ca.mul(cb)?;
                if coeff.is_zero() {
                    continue;
                }
                let ordered = normal_order_word(&wa.concat(&mb.to_word()), &self.ctx)?;
                for (m, c) in ordered.terms {
                    out.add_term(m, c.mul(&coeff)?)?;
                }
            }
        }
        Ok(out)
    }

    /// Integer power with a non-negative exponent.
    pub fn pow(&self, n: u32) -> Result<Element> {
        let mut acc = Element::one(self.ctx);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn equals(&self, other: &Element) -> Result<bool> {
        self.check_ctx(other)?;
        Ok(self.terms == other.terms)
    }

    /// Word serialization of each term, for re-ordering checks.
    pub fn to_words(&self) -> Vec<(Word, CSeries)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.to_word(), c.clone()))
            .collect()
    }

    /// Keeps only the `c^deg` part of every coefficient.
    pub fn degree_part(&self, deg: u32) -> Element {
        let mut out = Element::zero(self.ctx);
        for (m, c) in &self.terms {
            let part = c.degree_part(deg);
            if !part.is_zero() {
                out.terms.insert(m.clone(), part);
            }
        }
        out
    }

    /// Largest c-degree appearing in any coefficient.
    pub fn max_c_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(CSeries::max_degree).max()
    }

    pub fn min_c_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(CSeries::min_degree).min()
    }

    /// Largest total p-degree over all monomials (0 for the zero element).
    pub fn max_p_degree(&self) -> i64 {
        self.terms.keys().map(NormalMonomial::p_degree).max().unwrap_or(0)
    }

    pub fn max_q_degree(&self) -> i64 {
        self.terms.keys().map(NormalMonomial::q_degree).max().unwrap_or(0)
    }

    /// Exponents of `(p_m, q_m)` over all terms.
    pub(crate) fn exponents_at(&self, m: u32) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.keys().map(move |mono| mono.get(m))
    }

    pub fn max_index(&self) -> u32 {
        self.terms.keys().map(NormalMonomial::max_index).max().unwrap_or(0)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(NormalMonomial::has_negative)
    }

    /// The same element viewed in another context with the same coefficient
    /// mode and enough pairs.
    pub fn with_context(&self, ctx: AlgebraContext) -> Result<Element> {
        Element::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.with_mode(ctx.coeff_mode()))),
            ctx,
        )
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: bool, m: &NormalMonomial, coeff: &CSeries) -> fmt::Result {
    let (negative, coeff_text) = match coeff.as_single_term() {
        Some((deg, r)) => {
            let abs = CSeries::monomial(r.abs(), deg, coeff.mode());
            (r.is_negative(), abs.to_string())
        }
        None => (false, format!("({coeff})")),
    };
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    match (coeff_text == "1", m.is_identity()) {
        (true, true) => f.write_str("I"),
        (true, false) => write!(f, "{m}"),
        (false, true) => write!(f, "{coeff_text}*I"),
        (false, false) => write!(f, "{coeff_text}*{m}"),
    }
}

/// Canonical text form, e.g. `p1^2 q1^2 - 4*c*p1 q1 + 2*c^2*I`; zero is `0`.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            write_term(f, i == 0, m, c)?;
        }
        Ok(())
    }
}

pub fn el_add(a: &Element, b: &Element) -> Result<Element> {
    a.add(b)
}

pub fn el_neg(a: &Element) -> Element {
    a.neg()
}

pub fn el_mul(a: &Element, b: &Element) -> Result<Element> {
    a.mul(b)
}

pub fn el_scale(a: &Element, s: &CSeries) -> Result<Element> {
    a.scale(s)
}

pub fn el_eq(a: &Element, b: &Element) -> Result<bool> {
    a.equals(b)
}

pub fn el_from_monomial(m: NormalMonomial, coeff: CSeries, ctx: AlgebraContext) -> Result<Element> {
    Element::from_monomial(m, coeff, ctx)
}
