//! Commutators by direct expansion and by the derivative series
//!
//! ```text
//! [A, B] = - Σ_{k ≠ 0} Π_m ((-c)^{k_m} / k_m!) ((∂_p^k A)(∂_q^k B) - (∂_p^k B)(∂_q^k A))
//! ```
//!
//! The sum runs over multi-indices `k ∈ ℕ^N`. It is evaluated three ways:
//! per multi-index, grouped by total order `|k|` with multinomial weights,
//! and flat over ordered index tuples `(n_1, ..., n_|k|)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::algebra::{Element, Kind};
use crate::calculus::{d_multi, d_p, d_q};
use crate::error::{Error, Result};
use crate::scalar::{CSeries, Rational};

/// Exponent vector `(k_1, ..., k_N)` of a mixed partial derivative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    ks: Vec<u32>,
}

impl MultiIndex {
    pub fn new(ks: Vec<u32>) -> Self {
        MultiIndex { ks }
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex { ks: vec![0; n] }
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.ks.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ks.iter().all(|&k| k == 0)
    }

    /// `|k|! / Π k_m!`
    pub fn multinomial(&self) -> BigUint {
        let mut out = factorial(self.total());
        for &k in &self.ks {
            out /= factorial(k);
        }
        out
    }

    /// `Π k_m!`
    pub fn factorial_product(&self) -> BigUint {
        self.ks.iter().map(|&k| factorial(k)).product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.ks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// All `k ∈ ℕ^n` with `|k| = total`, in lexicographic order.
pub fn compositions(n: usize, total: u32) -> Vec<MultiIndex> {
    bounded_compositions(&vec![total; n], total)
}

/// Compositions of `total` with `k_m ≤ caps[m]`, in lexicographic order.
fn bounded_compositions(caps: &[u32], total: u32) -> Vec<MultiIndex> {
    fn go(caps: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        let pos = cur.len();
        if pos == caps.len() {
            if left == 0 {
                out.push(MultiIndex::new(cur.clone()));
            }
            return;
        }
        let room: u32 = caps[pos + 1..].iter().map(|&c| c.min(left)).sum();
        let hi = caps[pos].min(left);
        let lo = left.saturating_sub(room);
        for k in lo..=hi {
            cur.push(k);
            go(caps, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if caps.is_empty() {
        if total == 0 {
            out.push(MultiIndex::new(Vec::new()));
        }
        return out;
    }
    go(caps, total, &mut Vec::with_capacity(caps.len()), &mut out);
    out
}

/// Number of multi-indices of total `k` in `n` slots: `C(k+n-1, n-1)`.
pub fn composition_count(n: usize, k: u32) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let n = n as u32;
    factorial(k + n - 1) / (factorial(k) * factorial(n - 1))
}

/// Multinomial coefficients of every multi-index of total `k`, in
/// lexicographic order.
pub fn multinomial_coefficients(n: usize, k: u32) -> Vec<BigUint> {
    compositions(n, k).iter().map(MultiIndex::multinomial).collect()
}

/// `Σ_{|k|=K} K!/Π k_m!`, which equals `n^K`.
pub fn multinomial_sum(n: usize, k: u32) -> BigUint {
    multinomial_coefficients(n, k).into_iter().sum()
}

fn check_pair(a: &Element, b: &Element) -> Result<()> {
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// `AB - BA` with both products normal-ordered.
pub fn commutator_direct(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(Element::zero(*a.ctx()));
    }
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `(∂_p^k A)(∂_q^k B) - (∂_p^k B)(∂_q^k A)`
fn bracket(a: &Element, b: &Element, k: &MultiIndex) -> Result<Element> {
    let dpa = d_multi(a, k, Kind::P)?;
    let dqb = d_multi(b, k, Kind::Q)?;
    let dpb = d_multi(b, k, Kind::P)?;
    let dqa = d_multi(a, k, Kind::Q)?;
    cross(&dpa, &dqb, &dpb, &dqa)
}

fn cross(dpa: &Element, dqb: &Element, dpb: &Element, dqa: &Element) -> Result<Element> {
    let mut out = Element::zero(*dpa.ctx());
    if !dpa.is_zero() && !dqb.is_zero() {
        out = dpa.mul(dqb)?;
    }
    if !dpb.is_zero() && !dqa.is_zero() {
        out = out.sub(&dpb.mul(dqa)?)?;
    }
    Ok(out)
}

/// `-(-c)^k / k!` in the coefficient mode of `e`.
fn order_prefactor(e: &Element, k: u32) -> CSeries {
    let sign = if k.is_multiple_of(2) { -1 } else { 1 };
    let r = Rational::new(BigInt::from(sign), BigInt::from(factorial(k))).expect("k! is nonzero");
    CSeries::monomial(r, k, e.ctx().coeff_mode())
}

/// How far each derivative order can go before every bracket vanishes.
///
/// Per index the bound is the smaller of the largest positive `p_m` and
/// `q_m` exponents, where a negative exponent on a side makes that side
/// unbounded. The total order is further capped by the truncation order.
struct Caps {
    per_index: Vec<u32>,
    total: u32,
}

fn derivative_caps(a: &Element, b: &Element) -> Caps {
    let ctx = a.ctx();
    let n = ctx.n_pairs();
    let trunc = ctx.truncation();
    let mut per_index = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let mut p_cap: Option<u32> = Some(0);
        let mut q_cap: Option<u32> = Some(0);
        for (pe, qe) in a.exponents_at(m).chain(b.exponents_at(m)) {
            p_cap = side_cap(p_cap, pe);
            q_cap = side_cap(q_cap, qe);
        }
        let cap = match (p_cap, q_cap) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => trunc.unwrap_or(0),
        };
        per_index.push(cap);
    }
    let sum: u32 = per_index.iter().sum();
    let total = match trunc {
        Some(k) => sum.min(k),
        None => sum,
    };
    for cap in &mut per_index {
        *cap = (*cap).min(total);
    }
    Caps { per_index, total }
}

fn side_cap(cap: Option<u32>, exponent: i64) -> Option<u32> {
    let cap = cap?;
    if exponent < 0 {
        return None;
    }
    Some(cap.max(u32::try_from(exponent).unwrap_or(u32::MAX)))
}

/// Series evaluated one multi-index at a time with weight
/// `Π (-c)^{k_m} / k_m!`.
pub fn commutator_series(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    let mut acc = Element::zero(*a.ctx());
    if a.is_zero() || b.is_zero() {
        return Ok(acc);
    }
    let caps = derivative_caps(a, b);
    let mode = a.ctx().coeff_mode();
    for total in 1..=caps.total {
        for k in bounded_compositions(&caps.per_index, total) {
            let br = bracket(a, b, &k)?;
            if br.is_zero() {
                continue;
            }
            let sign = if total % 2 == 0 { -1 } else { 1 };
            let r = Rational::new(BigInt::from(sign), BigInt::from(k.factorial_product()))?;
            acc = acc.add(&br.scale(&CSeries::monomial(r, total, mode))?)?;
        }
    }
    Ok(acc)
}

/// Multinomially weighted bracket sum of order `k`, without the `c` prefactor.
fn grouped_inner(a: &Element, b: &Element, k: u32, caps: Option<&[u32]>) -> Result<Element> {
    let n = a.ctx().n_pairs() as usize;
    let indices = match caps {
        Some(caps) => bounded_compositions(caps, k),
        None => compositions(n, k),
    };
    let mut inner = Element::zero(*a.ctx());
    for kv in indices {
        let br = bracket(a, b, &kv)?;
        if br.is_zero() {
            continue;
        }
        inner = inner.add(&br.scale_rational(&Rational::from(BigInt::from(kv.multinomial()))))?;
    }
    Ok(inner)
}

/// Series grouped by total order: `-Σ_k ((-c)^k / k!) Σ_{|k|=k} multinomial · bracket`.
pub fn commutator_series_grouped(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    let mut acc = Element::zero(*a.ctx());
    if a.is_zero() || b.is_zero() {
        return Ok(acc);
    }
    let caps = derivative_caps(a, b);
    for k in 1..=caps.total {
        let inner = grouped_inner(a, b, k, Some(&caps.per_index))?;
        if inner.is_zero() {
            continue;
        }
        acc = acc.add(&inner.scale(&order_prefactor(a, k))?)?;
    }
    Ok(acc)
}

/// Series over ordered index tuples `(n_1, ..., n_k) ∈ {1..N}^k`.
///
/// The tuples are walked depth first so each derivative is taken once per
/// prefix, and a prefix is dropped as soon as both products of its bracket
/// vanish.
pub fn commutator_series_flat(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    let ctx = *a.ctx();
    let mut acc = Element::zero(ctx);
    if a.is_zero() || b.is_zero() {
        return Ok(acc);
    }
    let caps = derivative_caps(a, b);
    if caps.total == 0 {
        return Ok(acc);
    }
    let mut by_order = vec![Element::zero(ctx); caps.total as usize + 1];
    let start = [a.clone(), b.clone(), b.clone(), a.clone()];
    flat_walk(&start, 0, caps.total, ctx.n_pairs(), &mut by_order)?;
    for (k, inner) in by_order.iter().enumerate().skip(1) {
        if inner.is_zero() {
            continue;
        }
        acc = acc.add(&inner.scale(&order_prefactor(a, k as u32))?)?;
    }
    Ok(acc)
}

/// `ds = [∂_p A, ∂_q B, ∂_p B, ∂_q A]` for the current tuple prefix.
fn flat_walk(ds: &[Element; 4], depth: u32, max: u32, n: u32, by_order: &mut [Element]) -> Result<()> {
    if depth == max {
        return Ok(());
    }
    for m in 1..=n {
        let next = [
            d_p(&ds[0], m, 1)?,
            d_q(&ds[1], m, 1)?,
            d_p(&ds[2], m, 1)?,
            d_q(&ds[3], m, 1)?,
        ];
        let left_dead = next[0].is_zero() || next[1].is_zero();
        let right_dead = next[2].is_zero() || next[3].is_zero();
        if left_dead && right_dead {
            continue;
        }
        let slot = depth as usize + 1;
        let br = cross(&next[0], &next[1], &next[2], &next[3])?;
        by_order[slot] = by_order[slot].add(&br)?;
        flat_walk(&next, depth + 1, max, n, by_order)?;
    }
    Ok(())
}

/// The order-`k` term `-((-c)^k / k!) Σ_{|k|=k} multinomial · bracket` of the
/// series, with its products normal-ordered.
pub fn series_term_k(a: &Element, b: &Element, k: u32) -> Result<Element> {
    check_pair(a, b)?;
    if k == 0 || a.is_zero() || b.is_zero() {
        return Ok(Element::zero(*a.ctx()));
    }
    let inner = grouped_inner(a, b, k, None)?;
    inner.scale(&order_prefactor(a, k))
}

/// Leading term `{A, B} = Σ_m (∂_{p_m} A ∂_{q_m} B - ∂_{p_m} B ∂_{q_m} A)`,
/// so that `[A, B] = c {A, B} + O(c^2)`.
pub fn poisson_leading(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    let mut acc = Element::zero(*a.ctx());
    for m in 1..=a.ctx().n_pairs() {
        acc = acc.add(&pair_bracket(a, b, &[(m, 1)])?)?;
    }
    Ok(acc)
}

/// Bracket for the mixed derivative `Π ∂_{m}^{k}` over the listed `(m, k)`.
fn pair_bracket(a: &Element, b: &Element, parts: &[(u32, u32)]) -> Result<Element> {
    let apply = |e: &Element, kind: Kind| -> Result<Element> {
        let mut out = e.clone();
        for &(m, k) in parts {
            out = match kind {
                Kind::P => d_p(&out, m, k)?,
                Kind::Q => d_q(&out, m, k)?,
            };
        }
        Ok(out)
    };
    cross(&apply(a, Kind::P)?, &apply(b, Kind::Q)?, &apply(b, Kind::P)?, &apply(a, Kind::Q)?)
}

/// Second-order bracket sum written out by index pattern:
/// `Σ_m [∂_m^2] + 2 Σ_{m<n} [∂_m ∂_n]`.
pub fn grouped_term_k2(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    let n = a.ctx().n_pairs();
    let mut acc = Element::zero(*a.ctx());
    for m in 1..=n {
        acc = acc.add(&pair_bracket(a, b, &[(m, 2)])?)?;
        for o in m + 1..=n {
            let br = pair_bracket(a, b, &[(m, 1), (o, 1)])?;
            acc = acc.add(&br.scale_rational(&Rational::from(2)))?;
        }
    }
    Ok(acc)
}

/// Third-order bracket sum written out by index pattern:
/// `Σ_m [∂_m^3] + 3 Σ_{m≠n} [∂_m ∂_n^2] + 6 Σ_{m<n<o} [∂_m ∂_n ∂_o]`.
pub fn grouped_term_k3(a: &Element, b: &Element) -> Result<Element> {
    check_pair(a, b)?;
    let n = a.ctx().n_pairs();
    let mut acc = Element::zero(*a.ctx());
    for m in 1..=n {
        acc = acc.add(&pair_bracket(a, b, &[(m, 3)])?)?;
        for o in 1..=n {
            if o != m {
                let br = pair_bracket(a, b, &[(m, 1), (o, 2)])?;
                acc = acc.add(&br.scale_rational(&Rational::from(3)))?;
            }
        }
        for o in m + 1..=n {
            for r in o + 1..=n {
                let br = pair_bracket(a, b, &[(m, 1), (o, 1), (r, 1)])?;
                acc = acc.add(&br.scale_rational(&Rational::from(6)))?;
            }
        }
    }
    Ok(acc)
}

/// Which evaluation strategy to use for `[A, B]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Series,
    Grouped,
    Flat,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Direct, Method::Series, Method::Grouped, Method::Flat];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Series => "series",
            Method::Grouped => "grouped",
            Method::Flat => "flat",
        }
    }

    pub fn apply(self, a: &Element, b: &Element) -> Result<Element> {
        match self {
            Method::Direct => commutator_direct(a, b),
            Method::Series => commutator_series(a, b),
            Method::Grouped => commutator_series_grouped(a, b),
            Method::Flat => commutator_series_flat(a, b),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraContext, NormalMonomial};

    fn el(ctx: AlgebraContext, terms: &[(&[(u32, i64, i64)], i64)]) -> Element {
        Element::from_terms(
            terms.iter().map(|(pairs, c)| {
                (
                    NormalMonomial::from_pairs(pairs.iter().copied()),
                    CSeries::constant((*c).into(), ctx.coeff_mode()),
                )
            }),
            ctx,
        )
        .unwrap()
    }

    fn all_methods(a: &Element, b: &Element) -> Element {
        let direct = commutator_direct(a, b).unwrap();
        for m in [Method::Series, Method::Grouped, Method::Flat] {
            assert_eq!(m.apply(a, b).unwrap(), direct, "{m} disagrees for [{a}, {b}]");
        }
        direct
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(composition_count(3, 2), BigUint::from(6u32));
        assert_eq!(composition_count(4, 3), BigUint::from(20u32));
        assert_eq!(multinomial_sum(4, 3), BigUint::from(64u32));
        assert_eq!(multinomial_sum(3, 2), BigUint::from(9u32));
        let first: Vec<_> = compositions(2, 2).into_iter().map(|k| k.ks().to_vec()).collect();
        assert_eq!(first, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn multinomials() {
        assert_eq!(MultiIndex::new(vec![1, 1]).multinomial(), BigUint::from(2u32));
        assert_eq!(MultiIndex::new(vec![2, 1, 0]).multinomial(), BigUint::from(3u32));
        assert_eq!(MultiIndex::new(vec![1, 1, 1]).multinomial(), BigUint::from(6u32));
        let coeffs: Vec<u32> = multinomial_coefficients(2, 3)
            .into_iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(coeffs, vec![1, 3, 3, 1]);
    }

    #[test]
    fn canonical_pair() {
        let ctx = AlgebraContext::polynomial(1).unwrap();
        let p = el(ctx, &[(&[(1, 1, 0)], 1)]);
        let q = el(ctx, &[(&[(1, 0, 1)], 1)]);
        let got = all_methods(&p, &q);
        assert_eq!(got.to_string(), "c*I");
    }

    #[test]
    fn p_squared_q_squared() {
        let ctx = AlgebraContext::polynomial(1).unwrap();
        let p2 = el(ctx, &[(&[(1, 2, 0)], 1)]);
        let q2 = el(ctx, &[(&[(1, 0, 2)], 1)]);
        assert_eq!(all_methods(&p2, &q2).to_string(), "4*c*p1 q1 - 2*c^2*I");
    }

    #[test]
    fn two_pairs() {
        let ctx = AlgebraContext::polynomial(2).unwrap();
        let a = el(ctx, &[(&[(1, 1, 0), (2, 1, 0)], 1)]);
        let b = el(ctx, &[(&[(1, 0, 1), (2, 0, 1)], 1)]);
        assert_eq!(all_methods(&a, &b).to_string(), "c*p1 q1 + c*p2 q2 - c^2*I");
    }

    #[test]
    fn laurent_methods_agree() {
        let ctx = AlgebraContext::laurent(1, 4).unwrap();
        let a = el(ctx, &[(&[(1, -1, 0)], 1)]);
        let b = el(ctx, &[(&[(1, 0, 2)], 1)]);
        all_methods(&a, &b);
        let a = el(ctx, &[(&[(1, 2, -1)], 1)]);
        let b = el(ctx, &[(&[(1, -1, 1)], 1)]);
        all_methods(&a, &b);
    }

    #[test]
    fn zero_and_identity() {
        let ctx = AlgebraContext::polynomial(2).unwrap();
        let a = el(ctx, &[(&[(1, 2, 1)], 1)]);
        for m in Method::ALL {
            assert!(m.apply(&a, &Element::zero(ctx)).unwrap().is_zero());
            assert!(m.apply(&Element::one(ctx), &a).unwrap().is_zero());
            assert!(m.apply(&a, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn leading_term_is_poisson() {
        let ctx = AlgebraContext::polynomial(2).unwrap();
        let a = el(ctx, &[(&[(1, 2, 1), (2, 1, 0)], 1)]);
        let b = el(ctx, &[(&[(1, 1, 2), (2, 0, 1)], 3)]);
        let t1 = series_term_k(&a, &b, 1).unwrap();
        let pb = poisson_leading(&a, &b).unwrap();
        assert_eq!(t1, pb.scale(&CSeries::c(ctx.coeff_mode())).unwrap());
    }

    #[test]
    fn explicit_grouped_terms() {
        let ctx = AlgebraContext::polynomial(3).unwrap();
        let a = el(ctx, &[(&[(1, 2, 1), (2, 1, 0), (3, 1, 1)], 1)]);
        let b = el(ctx, &[(&[(1, 1, 2), (2, 0, 2), (3, 0, 1)], 1)]);
        for (k, explicit) in [(2, grouped_term_k2(&a, &b)), (3, grouped_term_k3(&a, &b))] {
            let explicit = explicit.unwrap();
            let want = explicit.scale(&order_prefactor(&a, k)).unwrap();
            assert_eq!(series_term_k(&a, &b, k).unwrap(), want);
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }
}
