//! Formal partial derivatives on normal-ordered elements.
//!
//! `∂_p^k p^x = x (x-1) ... (x-k+1) p^(x-k)` for every integer `x`, so the
//! same rule covers polynomial and Laurent exponents.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Element, Kind};
use crate::commutators::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// `x (x-1) ... (x-k+1)`; the empty product for `k = 0` is 1.
pub fn falling_factorial(x: i64, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        let factor = BigInt::from(x) - BigInt::from(i);
        if factor.is_zero() {
            return BigInt::zero();
        }
        acc *= factor;
    }
    acc
}

fn derive(a: &Element, index: u32, k: u32, kind: Kind) -> Result<Element> {
    let n_pairs = a.ctx().n_pairs();
    if index == 0 || index > n_pairs {
        return Err(Error::InvalidIndex { index, n_pairs });
    }
    if k == 0 {
        return Ok(a.clone());
    }
    let shift = i64::from(k);
    let mut out = Element::zero(*a.ctx());
    for (mono, coeff) in a.terms() {
        let (pe, qe) = mono.get(index);
        let x = match kind {
            Kind::P => pe,
            Kind::Q => qe,
        };
        let ff = falling_factorial(x, k);
        if ff.is_zero() {
            continue;
        }
        let lowered = x.checked_sub(shift).ok_or(Error::Overflow("exponent"))?;
        let mut m = mono.clone();
        match kind {
            Kind::P => m.set(index, lowered, qe),
            Kind::Q => m.set(index, pe, lowered),
        }
        out.add_term(m, coeff.scale(&Rational::from(ff)))?;
    }
    Ok(out)
}

/// `∂^k / ∂p_m^k` applied termwise.
pub fn d_p(a: &Element, index: u32, k: u32) -> Result<Element> {
    derive(a, index, k, Kind::P)
}

/// `∂^k / ∂q_m^k` applied termwise.
pub fn d_q(a: &Element, index: u32, k: u32) -> Result<Element> {
    derive(a, index, k, Kind::Q)
}

/// Applies `∂^{k_m}` for every index `m` on the chosen side.
pub fn d_multi(a: &Element, ks: &MultiIndex, side: Kind) -> Result<Element> {
    let n = a.ctx().n_pairs() as usize;
    if ks.len() != n {
        return Err(Error::MultiIndexLength {
            expected: n,
            got: ks.len(),
        });
    }
    let mut out = a.clone();
    for (i, &k) in ks.ks().iter().enumerate() {
        if k == 0 {
            continue;
        }
        out = derive(&out, i as u32 + 1, k, side)?;
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraContext, GeneratorId, NormalMonomial};
    use crate::scalar::CSeries;

    fn poly(n: u32) -> AlgebraContext {
        AlgebraContext::polynomial(n).unwrap()
    }

    fn mono(ctx: AlgebraContext, pairs: &[(u32, i64, i64)], coeff: i64) -> Element {
        Element::from_monomial(
            NormalMonomial::from_pairs(pairs.iter().copied()),
            CSeries::constant(coeff.into(), ctx.coeff_mode()),
            ctx,
        )
        .unwrap()
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), BigInt::from(1));
        assert_eq!(falling_factorial(3, 2), BigInt::from(6));
        assert_eq!(falling_factorial(2, 3), BigInt::from(0));
        assert_eq!(falling_factorial(-1, 3), BigInt::from(-6));
        assert_eq!(falling_factorial(-2, 2), BigInt::from(6));
    }

    #[test]
    fn d_p_examples() {
        let ctx = poly(1);
        let p3 = mono(ctx, &[(1, 3, 0)], 1);
        assert_eq!(d_p(&p3, 1, 1).unwrap(), mono(ctx, &[(1, 2, 0)], 3));
        let q2 = mono(ctx, &[(1, 0, 2)], 1);
        assert!(d_p(&q2, 1, 1).unwrap().is_zero());
        let p2q = mono(ctx, &[(1, 2, 1)], 1);
        assert!(d_p(&p2q, 1, 3).unwrap().is_zero());
        assert_eq!(d_p(&p2q, 1, 0).unwrap(), p2q);
    }

    #[test]
    fn inverse_power_derivatives() {
        let ctx = AlgebraContext::laurent(1, 4).unwrap();
        let pinv = Element::generator(GeneratorId::p(1), -1, ctx).unwrap();
        let mut fact = 1i64;
        for k in 1..=5u32 {
            fact *= i64::from(k);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let want = mono(ctx, &[(1, -(k as i64) - 1, 0)], sign * fact);
            assert_eq!(d_p(&pinv, 1, k).unwrap(), want);
        }
        let qinv = Element::generator(GeneratorId::q(1), -1, ctx).unwrap();
        assert_eq!(d_q(&qinv, 1, 1).unwrap(), mono(ctx, &[(1, 0, -2)], -1));
    }

    #[test]
    fn d_q_examples() {
        let ctx = poly(1);
        assert_eq!(
            d_q(&mono(ctx, &[(1, 0, 2)], 1), 1, 1).unwrap(),
            mono(ctx, &[(1, 0, 1)], 2)
        );
        assert!(d_q(&mono(ctx, &[(1, 2, 0)], 1), 1, 1).unwrap().is_zero());
    }

    #[test]
    fn d_multi_examples() {
        let ctx = poly(2);
        let p1p2 = mono(ctx, &[(1, 1, 0), (2, 1, 0)], 1);
        let got = d_multi(&p1p2, &MultiIndex::new(vec![1, 1]), Kind::P).unwrap();
        assert_eq!(got, Element::one(ctx));
        let zero = MultiIndex::new(vec![0, 0]);
        assert_eq!(d_multi(&p1p2, &zero, Kind::P).unwrap(), p1p2);
        let a = mono(ctx, &[(1, 2, 0), (2, 0, 2)], 1);
        let got = d_multi(&a, &MultiIndex::new(vec![2, 0]), Kind::P).unwrap();
        assert_eq!(got, mono(ctx, &[(2, 0, 2)], 2));
    }

    #[test]
    fn index_errors() {
        let ctx = poly(2);
        let a = mono(ctx, &[(1, 1, 0)], 1);
        assert!(matches!(d_p(&a, 3, 1), Err(Error::InvalidIndex { index: 3, .. })));
        assert!(matches!(d_q(&a, 0, 1), Err(Error::InvalidIndex { .. })));
        assert!(d_multi(&a, &MultiIndex::new(vec![1]), Kind::P).is_err());
    }

    #[test]
    fn derivative_of_identity_is_zero() {
        let ctx = poly(1);
        assert!(d_p(&Element::one(ctx), 1, 1).unwrap().is_zero());
        assert_eq!(d_p(&Element::one(ctx), 1, 0).unwrap(), Element::one(ctx));
    }
}
