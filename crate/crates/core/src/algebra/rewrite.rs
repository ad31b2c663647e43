//! Normal-ordering rewriter.
//!
//! Generators with different indices commute, so a word is split per index
//! and each single-pair subword is ordered independently. Within one index
//! the word is folded left to right: the running normal form is multiplied on
//! the right by unit factors `p^±1` and `q^±1`. Moving `p^τ` left across
//! `q^b` peels one unit `q^σ` at a time with the elementary swaps
//!
//! ```text
//! q    p    = p    q    - c
//! q    p^-1 = p^-1 q    + c p^-2
//! q^-1 p    = p    q^-1 + c q^-2
//! q^-1 p^-1 = p^-1 q^-1 - c p^-1 q^-2 p^-1
//! ```
//!
//! Each correction term carries one more power of `c`, so the last rule
//! recurses with one less degree of headroom and stops at the truncation
//! order.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::{AlgebraContext, Element, Kind, NormalMonomial, Word};
use crate::error::{Error, Result};
use crate::scalar::{CSeries, CoeffMode};

/// Normal form of a single-index expression: `(a, b) ↦ coeff` for `p^a q^b`.
type PairForm = BTreeMap<(i64, i64), CSeries>;

type SwapKey = (i64, i64, Option<u32>);

thread_local! {
    static SWAP_CACHE: RefCell<HashMap<SwapKey, Rc<PairForm>>> = RefCell::new(HashMap::new());
}

fn mode_for(headroom: Option<u32>) -> CoeffMode {
    match headroom {
        Some(k) => CoeffMode::Truncated(k),
        None => CoeffMode::Exact,
    }
}

fn add_into(form: &mut PairForm, key: (i64, i64), coeff: CSeries) -> Result<()> {
    if coeff.is_zero() {
        return Ok(());
    }
    match form.get_mut(&key) {
        Some(slot) => {
            let sum = slot.add(&coeff)?;
            if sum.is_zero() {
                form.remove(&key);
            } else {
                *slot = sum;
            }
        }
        None => {
            form.insert(key, coeff);
        }
    }
    Ok(())
}

fn checked(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("exponent"))
}

fn unit_form(a: i64, b: i64, sign: i64, headroom: Option<u32>) -> PairForm {
    let mode = mode_for(headroom);
    let mut form = PairForm::new();
    form.insert((a, b), CSeries::constant(sign.into(), mode));
    form
}

fn right_mul_q(form: &PairForm, exponent: i64) -> Result<PairForm> {
    let mut out = PairForm::new();
    for (&(a, b), coeff) in form {
        out.insert((a, checked(b, exponent)?), coeff.clone());
    }
    Ok(out)
}

fn right_mul_p(form: &PairForm, tau: i64, headroom: Option<u32>) -> Result<PairForm> {
    let mut out = PairForm::new();
    for (&(a, b), coeff) in form {
        let swapped = swap_q_p(b, tau, headroom)?;
        for (&(a2, b2), c2) in swapped.iter() {
            add_into(&mut out, (checked(a, a2)?, b2), coeff.mul(c2)?)?;
        }
    }
    Ok(out)
}

/// Normal form of `q^b p^τ` for a unit `τ = ±1`, modulo `c^(headroom+1)`.
fn swap_q_p(b: i64, tau: i64, headroom: Option<u32>) -> Result<Rc<PairForm>> {
    let key = (b, tau, headroom);
    if let Some(hit) = SWAP_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(hit);
    }
    let form = Rc::new(compute_swap(b, tau, headroom)?);
    SWAP_CACHE.with(|c| c.borrow_mut().insert(key, Rc::clone(&form)));
    Ok(form)
}

fn compute_swap(b: i64, tau: i64, headroom: Option<u32>) -> Result<PairForm> {
    if b == 0 {
        return Ok(unit_form(tau, 0, 1, headroom));
    }
    let sigma = b.signum();
    let rest = b - sigma;

    // q^b p^τ = (q^rest p^τ) q^σ + q^rest (q^σ p^τ - p^τ q^σ)
    let mut out = right_mul_q(&*swap_q_p(rest, tau, headroom)?, sigma)?;

    let inner = match headroom {
        Some(0) => return Ok(out),
        Some(k) => Some(k - 1),
        None => None,
    };
    // The bracketed correction is c times the form below.
    let correction = match (sigma, tau) {
        (1, 1) => unit_form(0, rest, -1, inner),
        (1, _) => {
            let f = right_mul_p(&unit_form(0, rest, 1, inner), -1, inner)?;
            right_mul_p(&f, -1, inner)?
        }
        (_, 1) => unit_form(0, checked(rest, -2)?, 1, inner),
        _ => {
            if headroom.is_none() {
                return Err(Error::MixedNegativeExact);
            }
            let f = right_mul_p(&unit_form(0, rest, -1, inner), -1, inner)?;
            let f = right_mul_q(&f, -2)?;
            right_mul_p(&f, -1, inner)?
        }
    };
    let mode = mode_for(headroom);
    for (key, coeff) in correction {
        add_into(&mut out, key, coeff.shifted(1, mode)?)?;
    }
    Ok(out)
}

fn order_single_index(factors: &[(Kind, i64)], headroom: Option<u32>) -> Result<PairForm> {
    let mut form = unit_form(0, 0, 1, headroom);
    for &(kind, e) in factors {
        match kind {
            Kind::Q => form = right_mul_q(&form, e)?,
            Kind::P => {
                for _ in 0..e.unsigned_abs() {
                    form = right_mul_p(&form, e.signum(), headroom)?;
                }
            }
        }
        if form.is_empty() {
            break;
        }
    }
    Ok(form)
}

/// Rewrites `w` into the unique pq-ordered element equal to it.
///
/// Exact in polynomial mode; modulo `c^(K+1)` when the context truncates.
pub fn normal_order_word(w: &Word, ctx: &AlgebraContext) -> Result<Element> {
    w.validate(ctx)?;
    let headroom = ctx.truncation();
    let mode = ctx.coeff_mode();

    let mut by_index: BTreeMap<u32, Vec<(Kind, i64)>> = BTreeMap::new();
    for &(g, e) in w.factors() {
        by_index.entry(g.index).or_default().push((g.kind, e));
    }

    let mut terms: Vec<(NormalMonomial, CSeries)> =
        vec![(NormalMonomial::identity(), CSeries::one(mode))];
    for (index, factors) in by_index {
        let form = order_single_index(&factors, headroom)?;
        let mut next = Vec::with_capacity(terms.len() * form.len());
        for (mono, coeff) in &terms {
            for (&(a, b), c2) in &form {
                let mut m = mono.clone();
                m.set(index, a, b);
                let product = coeff.mul(c2)?;
                if !product.is_zero() {
                    next.push((m, product));
                }
            }
        }
        terms = next;
        if terms.is_empty() {
            break;
        }
    }
    Element::from_terms(terms, *ctx)
}
