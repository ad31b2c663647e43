use proptest::prelude::*;

use weyl_core::calculus::{d_p, d_q};
use weyl_core::commutators::{commutator_direct, series_term_k, Method};
use weyl_core::oracle::{apply, basis, default_degree, rep_equal};
use weyl_core::verify::{random_element, Shape};
use weyl_core::{parse_element, AlgebraContext, Element, GeneratorId, Word};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx_strategy() -> impl Strategy<Value = AlgebraContext> {
    prop_oneof![
        (1u32..=3).prop_map(|n| AlgebraContext::polynomial(n).unwrap()),
        (1u32..=2, 2u32..=5).prop_map(|(n, k)| AlgebraContext::laurent(n, k).unwrap()),
    ]
}

fn element_in(ctx: AlgebraContext, seed: u64) -> Element {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = if ctx.truncation().is_some() {
        Shape {
            min_exp: -2,
            max_exp: 2,
            max_terms: 3,
            max_c_degree: 2,
        }
    } else {
        Shape::POLYNOMIAL
    };
    random_element(&mut rng, &ctx, &shape)
}

fn poly_pair() -> impl Strategy<Value = (Element, Element)> {
    (1u32..=3, any::<u64>(), any::<u64>()).prop_map(|(n, s1, s2)| {
        let ctx = AlgebraContext::polynomial(n).unwrap();
        (element_in(ctx, s1), element_in(ctx, s2))
    })
}

fn word_strategy(n: u32, laurent: bool) -> impl Strategy<Value = Word> {
    let lo = if laurent { -2i64 } else { 1 };
    prop::collection::vec((any::<bool>(), 1..=n, lo..=2i64), 0..7).prop_map(|fs| {
        Word::from_factors(fs.into_iter().map(|(is_p, i, e)| {
            let g = if is_p { GeneratorId::p(i) } else { GeneratorId::q(i) };
            (g, e)
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(ctx in ctx_strategy(), seed in any::<u64>()) {
        let a = element_in(ctx, seed);
        let back = parse_element(&a.to_string(), &ctx).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn multiplication_is_associative(ctx in ctx_strategy(), s in any::<[u64; 3]>()) {
        let (a, b, c) = (element_in(ctx, s[0]), element_in(ctx, s[1]), element_in(ctx, s[2]));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent(w in word_strategy(2, true)) {
        let ctx = AlgebraContext::laurent(2, 4).unwrap();
        let once = weyl_core::algebra::normal_order_word(&w, &ctx).unwrap();
        let mut again = Element::zero(ctx);
        for (word, coeff) in once.to_words() {
            let e = weyl_core::algebra::normal_order_word(&word, &ctx).unwrap();
            again = again.add(&e.scale(&coeff).unwrap()).unwrap();
        }
        prop_assert_eq!(again, once);
    }

    #[test]
    fn word_order_matches_representation(w in word_strategy(2, false)) {
        let ctx = AlgebraContext::polynomial(2).unwrap();
        let ordered = weyl_core::algebra::normal_order_word(&w, &ctx).unwrap();
        let mut factors = Element::one(ctx);
        for &(g, e) in w.factors() {
            factors = factors.mul(&Element::generator(g, e, ctx).unwrap()).unwrap();
        }
        prop_assert_eq!(&factors, &ordered);
        for f in basis(2, 3) {
            let mut direct = f.clone();
            for &(g, e) in w.factors().iter().rev() {
                direct = apply(&Element::generator(g, e, ctx).unwrap(), &direct).unwrap();
            }
            prop_assert_eq!(apply(&ordered, &f).unwrap(), direct);
        }
    }

    #[test]
    fn methods_agree((a, b) in poly_pair()) {
        let direct = commutator_direct(&a, &b).unwrap();
        for m in [Method::Series, Method::Grouped, Method::Flat] {
            prop_assert_eq!(&m.apply(&a, &b).unwrap(), &direct);
        }
    }

    #[test]
    fn oracle_agrees_with_equality((a, b) in poly_pair()) {
        let d = default_degree(&a, &b);
        prop_assert_eq!(rep_equal(&a, &b, d).unwrap(), a == b);
        prop_assert!(rep_equal(&a, &a.clone(), d).unwrap());
    }

    #[test]
    fn graded_terms_have_minimum_degree((a, b) in poly_pair(), k in 1u32..5) {
        let t = series_term_k(&a, &b, k).unwrap();
        prop_assert!(t.min_c_degree().is_none_or(|d| d >= k));
    }

    #[test]
    fn mixed_partials_commute(ctx in ctx_strategy(), seed in any::<u64>(), i in 0u32..3, j in 0u32..3) {
        let a = element_in(ctx, seed);
        let n = ctx.n_pairs();
        let pq = d_q(&d_p(&a, 1, i).unwrap(), n, j).unwrap();
        let qp = d_p(&d_q(&a, n, j).unwrap(), 1, i).unwrap();
        prop_assert_eq!(pq, qp);
        let composed = d_p(&d_p(&a, 1, i).unwrap(), 1, j).unwrap();
        prop_assert_eq!(composed, d_p(&a, 1, i + j).unwrap());
    }

    #[test]
    fn derivatives_are_linear(ctx in ctx_strategy(), s in any::<[u64; 2]>(), k in 0u32..4) {
        let (a, b) = (element_in(ctx, s[0]), element_in(ctx, s[1]));
        let lhs = d_q(&a.add(&b).unwrap(), 1, k).unwrap();
        let rhs = d_q(&a, 1, k).unwrap().add(&d_q(&b, 1, k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_is_a_derivation_of_products((a, b) in poly_pair(), s in any::<u64>()) {
        let c = element_in(*a.ctx(), s);
        let lhs = commutator_direct(&a, &b.mul(&c).unwrap()).unwrap();
        let rhs = commutator_direct(&a, &b)
            .unwrap()
            .mul(&c)
            .unwrap()
            .add(&b.mul(&commutator_direct(&a, &c).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn swapped_product_differs_by_c() {
    for n in 1..=3u32 {
        let ctx = AlgebraContext::polynomial(n).unwrap();
        let src = |a: &str, b: &str| parse_element(&format!("{a} {b}"), &ctx).unwrap();
        let p = format!("p{n}");
        let q = format!("q{n}");
        let diff = src(&p, &q).sub(&src(&q, &p)).unwrap();
        assert_eq!(diff.to_string(), "c*I");
    }
}
