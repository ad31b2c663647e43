use num_bigint::BigInt;
use weyl_core::calculus::{d_multi, d_p, d_q, falling_factorial};
use weyl_core::commutators::{
    commutator_direct, composition_count, factorial, grouped_term_k2, grouped_term_k3, multinomial_sum,
    poisson_leading, series_term_k, Method,
};
use weyl_core::oracle::{apply, rep_equal, PolyState};
use weyl_core::{
    parse_element, AlgebraContext, CSeries, CoeffMode, Element, Error, Kind, MultiIndex, NormalMonomial, Rational,
};

fn el(ctx: AlgebraContext, terms: &[(&[(u32, i64, i64)], i64, u32)]) -> Element {
    Element::from_terms(
        terms.iter().map(|(pairs, coeff, deg)| {
            (
                NormalMonomial::from_pairs(pairs.iter().copied()),
                CSeries::monomial((*coeff).into(), *deg, ctx.coeff_mode()),
            )
        }),
        ctx,
    )
    .unwrap()
}

fn lower(src: &str, ctx: &AlgebraContext) -> Element {
    parse_element(src, ctx).unwrap()
}

fn poly(n: u32) -> AlgebraContext {
    AlgebraContext::polynomial(n).unwrap()
}

#[test]
fn single_pair_orderings() {
    let ctx = poly(1);
    assert_eq!(lower("q1 p1", &ctx), el(ctx, &[(&[(1, 1, 1)], 1, 0), (&[], -1, 1)]));
    assert_eq!(
        lower("p1 q1 p1 q1", &ctx),
        el(ctx, &[(&[(1, 2, 2)], 1, 0), (&[(1, 1, 1)], -1, 1)])
    );
    assert_eq!(
        lower("q1 p1 q1 p1", &ctx),
        el(ctx, &[(&[(1, 2, 2)], 1, 0), (&[(1, 1, 1)], -3, 1), (&[], 1, 2)])
    );
    assert_eq!(
        lower("q1 q1 p1 p1", &ctx),
        el(ctx, &[(&[(1, 2, 2)], 1, 0), (&[(1, 1, 1)], -4, 1), (&[], 2, 2)])
    );
    assert_eq!(
        lower("3 p1 q1 p1 q1 - 2 q1^2 p1^2", &ctx),
        el(ctx, &[(&[(1, 2, 2)], 1, 0), (&[(1, 1, 1)], 5, 1), (&[], -4, 2)])
    );
}

#[test]
fn distinct_indices_commute() {
    let ctx = poly(2);
    assert_eq!(lower("p1 q2", &ctx), el(ctx, &[(&[(1, 1, 0), (2, 0, 1)], 1, 0)]));
    assert_eq!(lower("q2 p1", &ctx), lower("p1 q2", &ctx));
}

#[test]
fn two_pair_factorization() {
    let ctx = poly(2);
    let want = el(
        ctx,
        &[
            (&[(1, 2, 2), (2, 2, 2)], 1, 0),
            (&[(1, 2, 2), (2, 1, 1)], -1, 1),
            (&[(1, 1, 1), (2, 2, 2)], -1, 1),
            (&[(1, 1, 1), (2, 1, 1)], 1, 2),
        ],
    );
    let got = lower("p2 p1 q1 q2 p1 p2 q2 q1", &ctx);
    assert_eq!(got, want);
    let factors = lower("(p1^2 q1^2 - c p1 q1)(p2^2 q2^2 - c p2 q2)", &ctx);
    assert_eq!(got, factors);
}

/// `q^y p^x = Σ_k ((-c)^k / k!) x(x-1)..(x-k+1) y(y-1)..(y-k+1) p^(x-k) q^(y-k)`
fn swap_closed_form(x: i64, y: i64, ctx: &AlgebraContext) -> Element {
    let top = ctx.truncation().unwrap_or((x.max(0).min(y.max(0))) as u32);
    let mut terms = Vec::new();
    for k in 0..=top {
        let ff = falling_factorial(x, k) * falling_factorial(y, k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let r = Rational::new(BigInt::from(sign) * ff, BigInt::from(factorial(k))).unwrap();
        let m = NormalMonomial::from_pairs([(1, x - i64::from(k), y - i64::from(k))]);
        terms.push((m, CSeries::monomial(r, k, ctx.coeff_mode())));
    }
    Element::from_terms(terms, *ctx).unwrap()
}

#[test]
fn swaps_match_closed_form() {
    let ctx = poly(1);
    for x in 0..=5 {
        for y in 0..=5 {
            let got = lower(&format!("q1^{y} p1^{x}"), &ctx);
            assert_eq!(got, swap_closed_form(x, y, &ctx), "q^{y} p^{x}");
        }
    }
    let ctx = AlgebraContext::laurent(1, 5).unwrap();
    for x in -3..=3 {
        for y in -3..=3 {
            let got = lower(&format!("q1^{y} p1^{x}"), &ctx);
            assert_eq!(got, swap_closed_form(x, y, &ctx), "q^{y} p^{x}");
        }
    }
}

#[test]
fn laurent_orderings() {
    let ctx = AlgebraContext::laurent(1, 2).unwrap();
    assert_eq!(
        lower("q1 p1^-1", &ctx),
        el(ctx, &[(&[(1, -1, 1)], 1, 0), (&[(1, -2, 0)], 1, 1)])
    );
    let ctx = AlgebraContext::laurent(1, 3).unwrap();
    assert_eq!(
        lower("q1^-1 p1^-1", &ctx),
        el(
            ctx,
            &[
                (&[(1, -1, -1)], 1, 0),
                (&[(1, -2, -2)], -1, 1),
                (&[(1, -3, -3)], 2, 2),
                (&[(1, -4, -4)], -6, 3),
            ]
        )
    );
    assert_eq!(lower("p1 p1^-1 q1^-1 q1", &ctx), Element::one(ctx));
}

#[test]
fn element_operations() {
    let ctx = poly(1);
    assert_eq!(lower("p1", &ctx).mul(&lower("q1", &ctx)).unwrap(), lower("p1 q1", &ctx));
    assert_eq!(
        lower("q1", &ctx).mul(&lower("p1", &ctx)).unwrap(),
        el(ctx, &[(&[(1, 1, 1)], 1, 0), (&[], -1, 1)])
    );
    let x = lower("p1^2 q1^2 - c p1 q1", &ctx);
    assert_eq!(x.mul(&Element::one(ctx)).unwrap(), x);
    assert!(lower("p1", &ctx).add(&lower("-p1", &ctx)).unwrap().is_zero());
    let two_c = CSeries::monomial(2.into(), 1, CoeffMode::Exact);
    assert_eq!(lower("p1 q1", &ctx).scale(&two_c).unwrap(), el(ctx, &[(&[(1, 1, 1)], 2, 1)]));
    assert_eq!(
        Element::from_monomial(NormalMonomial::identity(), CSeries::one(CoeffMode::Exact), ctx).unwrap(),
        Element::one(ctx)
    );
    assert_eq!(
        Element::from_monomial(NormalMonomial::from_pairs([(1, 1, 1)]), CSeries::c(CoeffMode::Exact).neg(), ctx)
            .unwrap(),
        el(ctx, &[(&[(1, 1, 1)], -1, 1)])
    );
    assert!(matches!(
        Element::from_monomial(NormalMonomial::p(1, -2), CSeries::one(CoeffMode::Exact), ctx),
        Err(Error::NegativeExponentInPolynomialMode { .. })
    ));
}

#[test]
fn coefficient_series() {
    let exact = CoeffMode::Exact;
    let c = |k: i64, d: u32| CSeries::monomial(k.into(), d, exact);
    assert!(c(3, 1).add(&c(-3, 1)).unwrap().is_zero());
    assert_eq!(c(2, 1).mul(&c(3, 1)).unwrap(), c(6, 2));
    let t1 = CoeffMode::Truncated(1);
    assert!(CSeries::c(t1).mul(&CSeries::c(t1)).unwrap().is_zero());
    let t2 = CoeffMode::Truncated(2);
    let c2 = CSeries::monomial(1.into(), 2, t2);
    assert_eq!(c2.add(&c2).unwrap(), CSeries::monomial(2.into(), 2, t2));
    let one_minus = c(1, 0).sub(&c(1, 1)).unwrap();
    let one_plus = c(1, 0).add(&c(1, 1)).unwrap();
    assert_eq!(one_minus.mul(&one_plus).unwrap().to_string(), "1 - c^2");
    let half = Rational::new(1, 2).unwrap();
    assert_eq!(c(2, 0).add(&c(1, 1)).unwrap().scale(&half).to_string(), "1 + 1/2*c");
    assert!(CSeries::zero(exact).is_zero());
}

#[test]
fn derivatives() {
    let ctx = poly(2);
    assert_eq!(d_p(&lower("p1^3", &ctx), 1, 1).unwrap(), lower("3 p1^2", &ctx));
    assert!(d_p(&lower("q1^2", &ctx), 1, 1).unwrap().is_zero());
    assert!(d_p(&lower("p1^2 q1", &ctx), 1, 3).unwrap().is_zero());
    assert_eq!(d_q(&lower("q1^2", &ctx), 1, 1).unwrap(), lower("2 q1", &ctx));
    assert!(d_q(&lower("p1^2", &ctx), 1, 1).unwrap().is_zero());
    let mi = |v: &[u32]| MultiIndex::new(v.to_vec());
    assert_eq!(d_multi(&lower("p1 p2", &ctx), &mi(&[1, 1]), Kind::P).unwrap(), Element::one(ctx));
    let a = lower("p1^2 q2^2", &ctx);
    assert_eq!(d_multi(&a, &mi(&[0, 0]), Kind::P).unwrap(), a);
    assert_eq!(d_multi(&a, &mi(&[2, 0]), Kind::P).unwrap(), lower("2 q2^2", &ctx));

    let l = AlgebraContext::laurent(1, 6).unwrap();
    for k in 0..=6u32 {
        let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
        let fact: i64 = (1..=i64::from(k)).product();
        assert_eq!(
            d_p(&lower("p1^-1", &l), 1, k).unwrap(),
            el(l, &[(&[(1, -1 - i64::from(k), 0)], sign * fact, 0)])
        );
    }
    assert_eq!(d_q(&lower("q1^-1", &l), 1, 1).unwrap(), lower("-q1^-2", &l));
}

#[test]
fn commutators_by_every_method() {
    let one = poly(1);
    let two = poly(2);
    let cases = [
        ("p1", "q1", "c", one),
        ("p1^2", "q1^2", "4 c p1 q1 - 2 c^2", one),
        ("p1", "p1^3", "0", one),
        ("p1 p2", "q1 q2", "c p1 q1 + c p2 q2 - c^2", two),
    ];
    for (a, b, want, ctx) in cases {
        let (a, b, want) = (lower(a, &ctx), lower(b, &ctx), lower(want, &ctx));
        for m in Method::ALL {
            assert_eq!(m.apply(&a, &b).unwrap(), want, "{m}: [{a}, {b}]");
        }
    }

    let l = AlgebraContext::laurent(1, 2).unwrap();
    let want = lower("-c p1^-2", &l);
    for m in Method::ALL {
        assert_eq!(m.apply(&lower("p1^-1", &l), &lower("q1", &l)).unwrap(), want);
    }

    let l = AlgebraContext::laurent(1, 4).unwrap();
    let got = commutator_direct(&lower("p1^2", &l), &lower("q1^-2", &l)).unwrap();
    let want = lower("c (2 p1)(-2 q1^-3) - 1/2 c^2 (2)(6 q1^-4)", &l);
    assert_eq!(got, want);
}

#[test]
fn series_terms() {
    let one = poly(1);
    let two = poly(2);
    let (p, q) = (lower("p1", &one), lower("q1", &one));
    let (p2, q2) = (lower("p1^2", &one), lower("q1^2", &one));
    assert_eq!(series_term_k(&p, &q, 1).unwrap(), lower("c", &one));
    assert_eq!(series_term_k(&p2, &q2, 2).unwrap(), lower("-2 c^2", &one));
    assert!(series_term_k(&p2, &q2, 3).unwrap().is_zero());
    assert!(series_term_k(&p, &q, 2).unwrap().is_zero());
    let (a, b) = (lower("p1 p2", &two), lower("q1 q2", &two));
    assert_eq!(series_term_k(&a, &b, 2).unwrap(), lower("-c^2", &two));

    assert_eq!(poisson_leading(&p, &q).unwrap(), Element::one(one));
    assert_eq!(poisson_leading(&p2, &q2).unwrap(), lower("4 p1 q1", &one));
    let pq = lower("p1 q1", &one);
    assert!(poisson_leading(&pq, &pq).unwrap().is_zero());

    assert_eq!(grouped_term_k2(&p2, &q2).unwrap(), lower("4", &one));
    assert_eq!(grouped_term_k2(&a, &b).unwrap(), lower("2", &two));
    assert!(grouped_term_k3(&p2, &q2).unwrap().is_zero());
}

#[test]
fn counting() {
    assert_eq!(multinomial_sum(4, 3), 64u32.into());
    assert_eq!(composition_count(4, 3), 20u32.into());
    for k in 0..8 {
        assert_eq!(multinomial_sum(1, k), 1u32.into());
    }
}

#[test]
fn representation() {
    let ctx = poly(1);
    let got = apply(&lower("p1", &ctx), &PolyState::monomial(vec![1])).unwrap();
    assert_eq!(got.coeffs().len(), 1);
    assert_eq!(got.coeffs()[&vec![0]], CSeries::c(CoeffMode::Exact));

    let got = apply(&lower("p1^2", &ctx), &PolyState::monomial(vec![3])).unwrap();
    assert_eq!(got.coeffs()[&vec![1]], CSeries::monomial(6.into(), 2, CoeffMode::Exact));

    let qqpp = lower("q1 q1 p1 p1", &ctx);
    let want = lower("p1^2 q1^2 - 4 c p1 q1 + 2 c^2", &ctx);
    assert!(rep_equal(&qqpp, &want, 6).unwrap());
    assert!(!rep_equal(&lower("p1", &ctx), &lower("q1", &ctx), 3).unwrap());
}
