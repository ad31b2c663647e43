//! Representation on commutative polynomials: `q_m` multiplies by `x_m` and
//! `p_m` acts as `c ∂/∂x_m`.
//!
//! The action is faithful on polynomial-mode elements with exact
//! coefficients, so comparing two elements on enough basis monomials is an
//! equality test that never touches the rewriter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::algebra::{Element, ExponentMode, NormalMonomial};
use crate::calculus::falling_factorial;
use crate::error::{Error, Result};
use crate::scalar::{CSeries, CoeffMode, Rational};

/// Polynomial in `x_1, ..., x_N` with coefficients in `ℚ[c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyState {
    n: usize,
    coeffs: BTreeMap<Vec<u32>, CSeries>,
}

impl PolyState {
    pub fn zero(n: usize) -> Self {
        PolyState {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// The monomial `x^e`.
    pub fn monomial(exps: Vec<u32>) -> Self {
        let mut s = PolyState::zero(exps.len());
        s.coeffs.insert(exps, CSeries::one(CoeffMode::Exact));
        s
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, CSeries> {
        &self.coeffs
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: CSeries) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        match self.coeffs.get_mut(&exps) {
            Some(slot) => {
                let sum = slot.add(&coeff)?;
                if sum.is_zero() {
                    self.coeffs.remove(&exps);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.coeffs.insert(exps, coeff);
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolyState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, coeff)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({coeff})")?;
            for (m, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " x{}", m + 1)?,
                    _ => write!(f, " x{}^{e}", m + 1)?,
                }
            }
        }
        Ok(())
    }
}

fn check_supported(a: &Element) -> Result<()> {
    if a.ctx().mode() == ExponentMode::Laurent {
        return Err(Error::LaurentModeUnsupported);
    }
    if a.ctx().coeff_mode() != CoeffMode::Exact {
        return Err(Error::TruncatedCoefficientsUnsupported);
    }
    Ok(())
}

fn small_falling_factorial(x: i64, k: i64) -> Option<i128> {
    let mut acc: i128 = 1;
    for i in 0..k {
        let f = i128::from(x) - i128::from(i);
        if f == 0 {
            return Some(0);
        }
        acc = acc.checked_mul(f)?;
    }
    Some(acc)
}

/// `p^a q^b` acting on `x^e`: multiply by `x^b`, then differentiate `a` times.
fn act_monomial(mono: &NormalMonomial, exps: &[u32]) -> Option<(Vec<u32>, Rational, u32)> {
    let mut out = exps.to_vec();
    let mut factor = Rational::one();
    let mut c_degree = 0u32;
    for (m, a, b) in mono.pairs() {
        let slot = &mut out[m as usize - 1];
        let raised = i64::from(*slot) + b;
        let ff = match small_falling_factorial(raised, a) {
            Some(0) => return None,
            Some(v) => Rational::from(BigInt::from(v)),
            None => Rational::from(falling_factorial(raised, a as u32)),
        };
        factor = factor * ff;
        *slot = (raised - a) as u32;
        c_degree += a as u32;
    }
    Some((out, factor, c_degree))
}

/// Applies `a` to the polynomial `s`.
pub fn apply(a: &Element, s: &PolyState) -> Result<PolyState> {
    check_supported(a)?;
    let n = a.ctx().n_pairs() as usize;
    if s.n != n {
        return Err(Error::InvalidContext(format!(
            "polynomial has {} variables, element has {n} pairs",
            s.n
        )));
    }
    let mut out = PolyState::zero(n);
    for (exps, sc) in &s.coeffs {
        for (mono, ac) in a.terms() {
            let Some((target, factor, c_degree)) = act_monomial(mono, exps) else {
                continue;
            };
            let coeff = ac.mul(sc)?.shifted(c_degree, CoeffMode::Exact)?.scale(&factor);
            out.add_term(target, coeff)?;
        }
    }
    Ok(out)
}

/// Every `x^e` with `|e| ≤ degree`, ordered by total degree then lexicographically.
pub fn basis(n: usize, degree: u32) -> Vec<PolyState> {
    fn go(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    for total in 0..=degree {
        go(n, total, &mut Vec::with_capacity(n), &mut all);
    }
    all.into_iter().map(PolyState::monomial).collect()
}

/// `max q-degree + max p-degree + 1` over both elements; large enough for
/// `rep_equal` to decide equality.
pub fn default_degree(a: &Element, b: &Element) -> u32 {
    let q = a.max_q_degree().max(b.max_q_degree());
    let p = a.max_p_degree().max(b.max_p_degree());
    (q + p + 1).max(0) as u32
}

/// Whether `a` and `b` act identically on every basis monomial of total
/// degree at most `degree`.
pub fn rep_equal(a: &Element, b: &Element, degree: u32) -> Result<bool> {
    check_supported(a)?;
    check_supported(b)?;
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch);
    }
    let n = a.ctx().n_pairs() as usize;
    let fast = integer_images(a, b);
    for f in basis(n, degree) {
        let exps = f.coeffs().keys().next().expect("basis monomial");
        let same = match &fast {
            Some((ia, ib)) => match (act_integer(ia, exps), act_integer(ib, exps)) {
                (Some(x), Some(y)) => x == y,
                _ => apply(a, &f)? == apply(b, &f)?,
            },
            None => apply(a, &f)? == apply(b, &f)?,
        };
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A term `p^a q^b` with its coefficient scaled to integers, by c-degree.
struct IntTerm {
    pairs: Vec<(usize, i64, i64)>,
    c_degree: u32,
    coeff: Vec<(u32, i128)>,
}

/// Both elements multiplied by the common denominator of their
/// coefficients, when every scaled coefficient fits in `i128`.
fn integer_images(a: &Element, b: &Element) -> Option<(Vec<IntTerm>, Vec<IntTerm>)> {
    let mut lcm = BigInt::from(1);
    for (_, c) in a.terms().chain(b.terms()) {
        for (_, r) in c.terms() {
            lcm = lcm.lcm(r.denom());
        }
    }
    let image = |e: &Element| -> Option<Vec<IntTerm>> {
        e.terms()
            .map(|(mono, c)| {
                let coeff = c
                    .terms()
                    .map(|(deg, r)| i128::try_from(r.numer() * (&lcm / r.denom())).ok().map(|v| (deg, v)))
                    .collect::<Option<Vec<_>>>()?;
                let c_degree = mono.pairs().map(|(_, a, _)| a as u32).sum();
                let pairs = mono.pairs().map(|(m, a, b)| (m as usize - 1, a, b)).collect();
                Some(IntTerm { pairs, c_degree, coeff })
            })
            .collect()
    };
    Some((image(a)?, image(b)?))
}

/// The action on `x^e` in integer arithmetic; `None` on overflow.
fn act_integer(terms: &[IntTerm], exps: &[u32]) -> Option<HashMap<(Vec<u32>, u32), i128>> {
    let mut out: HashMap<(Vec<u32>, u32), i128> = HashMap::new();
    for t in terms {
        let mut target = exps.to_vec();
        let mut factor: i128 = 1;
        for &(m, a, b) in &t.pairs {
            let raised = i64::from(target[m]) + b;
            factor = factor.checked_mul(small_falling_factorial(raised, a)?)?;
            if factor == 0 {
                break;
            }
            target[m] = (raised - a) as u32;
        }
        if factor == 0 {
            continue;
        }
        for &(deg, v) in &t.coeff {
            let slot = out.entry((target.clone(), deg + t.c_degree)).or_insert(0);
            *slot = slot.checked_add(v.checked_mul(factor)?)?;
        }
    }
    out.retain(|_, v| *v != 0);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{normal_order_word, AlgebraContext, GeneratorId, Word};

    fn ctx(n: u32) -> AlgebraContext {
        AlgebraContext::polynomial(n).unwrap()
    }

    #[test]
    fn p_on_x() {
        let ctx = ctx(1);
        let p = Element::generator(GeneratorId::p(1), 1, ctx).unwrap();
        let got = apply(&p, &PolyState::monomial(vec![1])).unwrap();
        let mut want = PolyState::zero(1);
        want.add_term(vec![0], CSeries::c(CoeffMode::Exact)).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn canonical_relation() {
        let ctx = ctx(1);
        let pq = normal_order_word(&Word::from_factors([(GeneratorId::p(1), 1), (GeneratorId::q(1), 1)]), &ctx).unwrap();
        let qp = normal_order_word(&Word::from_factors([(GeneratorId::q(1), 1), (GeneratorId::p(1), 1)]), &ctx).unwrap();
        let bracket = pq.sub(&qp).unwrap();
        for e in 0..=4 {
            let x = PolyState::monomial(vec![e]);
            let got = apply(&bracket, &x).unwrap();
            let mut want = PolyState::zero(1);
            want.add_term(vec![e], CSeries::c(CoeffMode::Exact)).unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn p_squared_on_x_cubed() {
        let ctx = ctx(1);
        let p2 = Element::generator(GeneratorId::p(1), 2, ctx).unwrap();
        let got = apply(&p2, &PolyState::monomial(vec![3])).unwrap();
        let mut want = PolyState::zero(1);
        want.add_term(vec![1], CSeries::monomial(6.into(), 2, CoeffMode::Exact)).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn distinguishes_generators() {
        let ctx = ctx(1);
        let p = Element::generator(GeneratorId::p(1), 1, ctx).unwrap();
        let q = Element::generator(GeneratorId::q(1), 1, ctx).unwrap();
        assert!(!rep_equal(&p, &q, 3).unwrap());
        assert!(rep_equal(&p, &p, 3).unwrap());
    }

    #[test]
    fn rejects_laurent_and_truncated() {
        let l = AlgebraContext::laurent(1, 3).unwrap();
        let a = Element::one(l);
        assert_eq!(rep_equal(&a, &a, 2), Err(Error::LaurentModeUnsupported));
        let t = AlgebraContext::polynomial(1).unwrap().with_truncation(3);
        let a = Element::one(t);
        assert_eq!(apply(&a, &PolyState::monomial(vec![0])), Err(Error::TruncatedCoefficientsUnsupported));
    }

    #[test]
    fn huge_coefficients_use_exact_path() {
        let ctx = ctx(1);
        let big = Rational::from(BigInt::from(2).pow(140u32));
        let a = Element::from_monomial(NormalMonomial::p(1, 2), CSeries::constant(big.clone(), CoeffMode::Exact), ctx).unwrap();
        let b = Element::from_monomial(NormalMonomial::p(1, 2), CSeries::constant(big + Rational::one(), CoeffMode::Exact), ctx).unwrap();
        assert!(integer_images(&a, &b).is_none());
        assert!(rep_equal(&a, &a, 3).unwrap());
        assert!(!rep_equal(&a, &b, 3).unwrap());
    }

    #[test]
    fn fractional_coefficients() {
        let ctx = ctx(1);
        let half = Rational::new(BigInt::from(1), BigInt::from(2)).unwrap();
        let a = Element::from_monomial(NormalMonomial::q(1, 1), CSeries::constant(half, CoeffMode::Exact), ctx).unwrap();
        let b = Element::from_monomial(NormalMonomial::q(1, 1), CSeries::one(CoeffMode::Exact), ctx).unwrap();
        assert!(!rep_equal(&a, &b, 2).unwrap());
        assert!(rep_equal(&a.add(&a).unwrap(), &b, 2).unwrap());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(1, 3).len(), 4);
        assert_eq!(basis(2, 2).len(), 6);
        assert_eq!(basis(3, 2).len(), 10);
    }
}
