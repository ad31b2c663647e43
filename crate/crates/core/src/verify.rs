//! Seeded randomized checks of the engine against its own identities and the
//! representation oracle.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraContext, Element, NormalMonomial};
use crate::calculus::{d_p, d_q, falling_factorial};
use crate::commutators::{
    commutator_direct, commutator_series, commutator_series_flat, commutator_series_grouped, composition_count,
    compositions, factorial, grouped_term_k2, grouped_term_k3, multinomial_coefficients, multinomial_sum,
    series_term_k, Method,
};
use crate::error::Result;
use crate::oracle::{apply, basis, default_degree, rep_equal, PolyState};
use crate::scalar::{CSeries, CoeffMode, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Counting,
    Axioms,
    Series,
    Laurent,
    Grouped,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Counting,
        Suite::Axioms,
        Suite::Series,
        Suite::Laurent,
        Suite::Grouped,
        Suite::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Counting => "counting",
            Suite::Axioms => "axioms",
            Suite::Series => "series",
            Suite::Laurent => "laurent",
            Suite::Grouped => "grouped",
            Suite::Oracle => "oracle",
        }
    }

    /// Number of random cases used when none is requested.
    pub fn default_cases(self) -> usize {
        match self {
            Suite::Counting => 1,
            Suite::Axioms => 200,
            Suite::Series => 500,
            Suite::Laurent => 100,
            Suite::Grouped => 100,
            Suite::Oracle => 500,
        }
    }

    fn salt(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64 + 1
    }

    pub fn run(self, cases: usize, seed: u64) -> Report {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ self.salt());
        let mut report = Report::new(self, seed, cases);
        match self {
            Suite::Counting => counting(&mut report),
            Suite::Axioms => axioms(&mut report, &mut rng, cases),
            Suite::Series => series(&mut report, &mut rng, cases),
            Suite::Laurent => laurent(&mut report, &mut rng, cases),
            Suite::Grouped => grouped(&mut report, &mut rng, cases),
            Suite::Oracle => oracle(&mut report, &mut rng, cases),
        }
        report
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: Suite, seed: u64, cases: usize) -> Self {
        Report {
            suite: suite.as_str().to_string(),
            seed,
            cases,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn slot(&mut self, name: &str) -> &mut Check {
        let i = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(Check {
                    name: name.to_string(),
                    passed: 0,
                    total: 0,
                    first_failure: None,
                });
                self.checks.len() - 1
            }
        };
        &mut self.checks[i]
    }

    /// Records one outcome; an `Err` counts as a failure.
    fn record(&mut self, name: &str, outcome: Result<bool>, context: impl FnOnce() -> String) {
        let slot = self.slot(name);
        slot.total += 1;
        match outcome {
            Ok(true) => slot.passed += 1,
            Ok(false) => {
                slot.first_failure.get_or_insert_with(context);
            }
            Err(e) => {
                slot.first_failure.get_or_insert_with(|| format!("{}: {e}", context()));
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {}, {} cases)", self.suite, self.seed, self.cases)?;
        for note in &self.notes {
            writeln!(f, "  {note}")?;
        }
        for c in &self.checks {
            let verdict = if c.ok() { "pass" } else { "FAIL" };
            writeln!(f, "  {:<28} {:>5}/{:<5} {verdict}", c.name, c.passed, c.total)?;
            if let Some(msg) = &c.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
        }
        write!(f, "{}: {}", self.suite, if self.ok() { "pass" } else { "FAIL" })
    }
}

/// Shape of randomly generated elements.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub min_exp: i64,
    pub max_exp: i64,
    pub max_terms: usize,
    pub max_c_degree: u32,
}

impl Shape {
    pub const POLYNOMIAL: Shape = Shape {
        min_exp: 0,
        max_exp: 3,
        max_terms: 4,
        max_c_degree: 1,
    };
}

fn random_coeff<R: Rng>(rng: &mut R, mode: CoeffMode, max_c_degree: u32) -> CSeries {
    let mut num: i64 = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let den: i64 = if rng.gen_bool(0.2) { 2 } else { 1 };
    let deg = if max_c_degree > 0 && rng.gen_bool(0.25) {
        rng.gen_range(1..=max_c_degree)
    } else {
        0
    };
    let r = Rational::new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator");
    CSeries::monomial(r, deg, mode)
}

fn random_monomial<R: Rng>(rng: &mut R, n: u32, shape: &Shape) -> NormalMonomial {
    let mut m = NormalMonomial::identity();
    for index in 1..=n {
        if n > 1 && rng.gen_bool(0.3) {
            continue;
        }
        let a = rng.gen_range(shape.min_exp..=shape.max_exp);
        let b = rng.gen_range(shape.min_exp..=shape.max_exp);
        m.set(index, a, b);
    }
    m
}

/// A random nonzero element of `ctx` with up to `shape.max_terms` terms.
pub fn random_element<R: Rng>(rng: &mut R, ctx: &AlgebraContext, shape: &Shape) -> Element {
    loop {
        let count = rng.gen_range(1..=shape.max_terms);
        let terms: Vec<_> = (0..count)
            .map(|_| {
                (
                    random_monomial(rng, ctx.n_pairs(), shape),
                    random_coeff(rng, ctx.coeff_mode(), shape.max_c_degree),
                )
            })
            .collect();
        let e = Element::from_terms(terms, *ctx).expect("generated terms fit the context");
        if !e.is_zero() {
            return e;
        }
    }
}

fn describe_pair(a: &Element, b: &Element) -> String {
    format!("A = {a}; B = {b}")
}

fn counting(report: &mut Report) {
    for n in 1..=5usize {
        for k in 0..=6u32 {
            let ctx = || format!("N={n}, k={k}");
            let power = BigUint::from(n).pow(k);
            report.record("multinomial sum is N^k", Ok(multinomial_sum(n, k) == power), ctx);
            let binom = factorial(n as u32 - 1 + k) / (factorial(n as u32 - 1) * factorial(k));
            let count = composition_count(n, k);
            let listed = BigUint::from(compositions(n, k).len());
            report.record(
                "composition count",
                Ok(count == binom && listed == binom),
                ctx,
            );
        }
    }
    let mut coeffs: Vec<u32> = multinomial_coefficients(4, 3)
        .into_iter()
        .map(|c| u32::try_from(c).unwrap_or(u32::MAX))
        .collect();
    coeffs.sort_unstable();
    let ones = coeffs.iter().filter(|&&c| c == 1).count();
    let threes = coeffs.iter().filter(|&&c| c == 3).count();
    let sixes = coeffs.iter().filter(|&&c| c == 6).count();
    report.record(
        "N=4 k=3 coefficient classes",
        Ok(coeffs.len() == 20 && ones == 4 && threes == 12 && sixes == 4),
        || format!("{coeffs:?}"),
    );
    report.notes.push(format!(
        "multinomial_sum(4,3)={}, composition_count(4,3)={}",
        multinomial_sum(4, 3),
        composition_count(4, 3)
    ));
}

fn bracket(a: &Element, b: &Element) -> Result<Element> {
    commutator_series(a, b)
}

fn axioms<R: Rng>(report: &mut Report, rng: &mut R, cases: usize) {
    let shape = Shape {
        min_exp: 0,
        max_exp: 2,
        max_terms: 3,
        max_c_degree: 1,
    };
    for _ in 0..cases {
        let n = rng.gen_range(1..=3);
        let ctx = AlgebraContext::polynomial(n).expect("valid context");
        let a = random_element(rng, &ctx, &shape);
        let b = random_element(rng, &ctx, &shape);
        let c = random_element(rng, &ctx, &shape);
        let alpha = random_coeff(rng, ctx.coeff_mode(), 1);
        let ctx_msg = || format!("A = {a}; B = {b}; C = {c}");

        report.record(
            "anticommutativity",
            (|| Ok(bracket(&a, &b)? == bracket(&b, &a)?.neg()))(),
            ctx_msg,
        );
        report.record(
            "bilinearity",
            (|| {
                let lhs = bracket(&a.scale(&alpha)?.add(&b)?, &c)?;
                let rhs = bracket(&a, &c)?.scale(&alpha)?.add(&bracket(&b, &c)?)?;
                let lhs2 = bracket(&c, &a.scale(&alpha)?.add(&b)?)?;
                let rhs2 = bracket(&c, &a)?.scale(&alpha)?.add(&bracket(&c, &b)?)?;
                Ok(lhs == rhs && lhs2 == rhs2)
            })(),
            ctx_msg,
        );
        report.record(
            "jacobi",
            (|| {
                let s = bracket(&a, &bracket(&b, &c)?)?
                    .add(&bracket(&b, &bracket(&c, &a)?)?)?
                    .add(&bracket(&c, &bracket(&a, &b)?)?)?;
                Ok(s.is_zero())
            })(),
            ctx_msg,
        );
        report.record(
            "leibniz",
            (|| {
                let lhs = bracket(&a, &b.mul(&c)?)?;
                let rhs = bracket(&a, &b)?.mul(&c)?.add(&b.mul(&bracket(&a, &c)?)?)?;
                Ok(lhs == rhs)
            })(),
            ctx_msg,
        );
        let d = random_element(rng, &ctx, &shape);
        report.record(
            "product expansion [AB,CD]",
            (|| {
                let lhs = bracket(&a.mul(&b)?, &c.mul(&d)?)?;
                let ac = bracket(&a, &c)?;
                let ad = bracket(&a, &d)?;
                let bc = bracket(&b, &c)?;
                let bd = bracket(&b, &d)?;
                let rhs = ac
                    .mul(&b)?
                    .mul(&d)?
                    .add(&c.mul(&ad)?.mul(&b)?)?
                    .add(&a.mul(&bc)?.mul(&d)?)?
                    .add(&a.mul(&c)?.mul(&bd)?)?
                    .sub(&ac.mul(&bd)?)?;
                Ok(lhs == rhs)
            })(),
            || format!("A = {a}; B = {b}; C = {c}; D = {d}"),
        );
    }
}

/// `apply(r, f) = A(B f) - B(A f)` on every box monomial `x^e` with
/// `e_m ≤` the largest `p_m` exponent of `r`, `AB` or `BA`.
pub fn rep_commutator_holds(a: &Element, b: &Element, r: &Element) -> Result<bool> {
    let n = a.ctx().n_pairs();
    let mut caps = vec![0u32; n as usize];
    for m in 1..=n {
        let top = |e: &Element| e.terms().map(|(mono, _)| mono.get(m).0).max().unwrap_or(0);
        let pa = top(a);
        let pb = top(b);
        caps[m as usize - 1] = (pa + pb).max(top(r)).max(0) as u32;
    }
    let mut exps = vec![0u32; n as usize];
    loop {
        let f = PolyState::monomial(exps.clone());
        let ab = apply(a, &apply(b, &f)?)?;
        let ba = apply(b, &apply(a, &f)?)?;
        let lhs = apply(r, &f)?;
        if !poly_sub_eq(&lhs, &ab, &ba)? {
            return Ok(false);
        }
        let mut i = 0;
        loop {
            if i == exps.len() {
                return Ok(true);
            }
            if exps[i] < caps[i] {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// `lhs == x - y`, compared coefficientwise.
fn poly_sub_eq(lhs: &PolyState, x: &PolyState, y: &PolyState) -> Result<bool> {
    let mut keys: Vec<&Vec<u32>> = lhs.coeffs().keys().chain(x.coeffs().keys()).chain(y.coeffs().keys()).collect();
    keys.sort();
    keys.dedup();
    let zero = CSeries::zero(CoeffMode::Exact);
    for k in keys {
        let get = |p: &PolyState| p.coeffs().get(k).cloned().unwrap_or_else(|| zero.clone());
        if get(lhs) != get(x).sub(&get(y))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn series<R: Rng>(report: &mut Report, rng: &mut R, cases: usize) {
    for _ in 0..cases {
        let n = rng.gen_range(1..=3);
        let ctx = AlgebraContext::polynomial(n).expect("valid context");
        let a = random_element(rng, &ctx, &Shape::POLYNOMIAL);
        let b = random_element(rng, &ctx, &Shape::POLYNOMIAL);
        let msg = || describe_pair(&a, &b);
        let direct = match commutator_direct(&a, &b) {
            Ok(d) => d,
            Err(e) => {
                report.record("direct", Err(e), msg);
                continue;
            }
        };
        for method in [Method::Series, Method::Grouped, Method::Flat] {
            let name = format!("{method} = direct");
            let got = method.apply(&a, &b);
            let degree = default_degree(&direct, &direct);
            let outcome = got.and_then(|g| Ok(g == direct && rep_equal(&g, &direct, degree)?));
            report.record(&name, outcome, msg);
        }
        report.record("oracle [A,B] = AB - BA", rep_commutator_holds(&a, &b, &direct), msg);
        report.record(
            "graded terms sum to direct",
            (|| {
                let mut total = Element::zero(ctx);
                let top = direct.max_c_degree().unwrap_or(0);
                for k in 1..=top.max(1) {
                    let t = series_term_k(&a, &b, k)?;
                    if t.min_c_degree().is_some_and(|d| d < k) {
                        return Ok(false);
                    }
                    total = total.add(&t)?;
                }
                let beyond = series_term_k(&a, &b, top + 1)?;
                Ok(total == direct && beyond.is_zero())
            })(),
            msg,
        );
    }
}

/// `-Σ_{k=1..K} ((-c)^k / k!) ff(x, k+i) ff(y, k+j) p^{x-k-i} q^{y-k-j}`
fn shifted_power_series(x: i64, y: i64, i: u32, j: u32, ctx: &AlgebraContext) -> Result<Element> {
    let top = ctx.truncation().unwrap_or(0);
    let mut terms = Vec::new();
    for k in 1..=top {
        let ff = falling_factorial(x, k + i) * falling_factorial(y, k + j);
        let sign = if k % 2 == 0 { -1 } else { 1 };
        let r = Rational::new(BigInt::from(sign) * ff, BigInt::from(factorial(k)))?;
        let m = NormalMonomial::from_pairs([(1, x - i64::from(k + i), y - i64::from(k + j))]);
        terms.push((m, CSeries::monomial(r, k, ctx.coeff_mode())));
    }
    Element::from_terms(terms, *ctx)
}

fn power(ctx: &AlgebraContext, a: i64, b: i64) -> Element {
    Element::from_monomial(
        NormalMonomial::from_pairs([(1, a, b)]),
        CSeries::one(ctx.coeff_mode()),
        *ctx,
    )
    .expect("valid monomial")
}

fn binomial(k: u32, l: u32) -> Rational {
    Rational::from(BigInt::from(factorial(k) / (factorial(l) * factorial(k - l))))
}

fn laurent<R: Rng>(report: &mut Report, rng: &mut R, cases: usize) {
    const K: u32 = 6;
    let ctx = AlgebraContext::laurent(1, K).expect("valid context");
    let c = CSeries::c(ctx.coeff_mode());

    let base = [
        ("[p^-1, q] = -c p^-2", power(&ctx, -1, 0), power(&ctx, 0, 1), power(&ctx, -2, 0)),
        ("[p, q^-1] = -c q^-2", power(&ctx, 1, 0), power(&ctx, 0, -1), power(&ctx, 0, -2)),
    ];
    for (name, a, b, m) in base {
        let want = m.scale(&c).map(|e| e.neg());
        let outcome = want.and_then(|w| {
            let mut ok = true;
            for method in Method::ALL {
                ok &= method.apply(&a, &b)? == w;
            }
            Ok(ok)
        });
        report.record(name, outcome, || describe_pair(&a, &b));
    }

    let range: Vec<i64> = (-3..=3).filter(|&x| x != 0).collect();
    for &x in &range {
        for &y in &range {
            let a = power(&ctx, x, 0);
            let b = power(&ctx, 0, y);
            let msg = || format!("x={x}, y={y}");
            report.record(
                "power series (direct)",
                (|| Ok(commutator_direct(&a, &b)? == shifted_power_series(x, y, 0, 0, &ctx)?))(),
                msg,
            );
            report.record(
                "power series (series)",
                (|| Ok(commutator_series(&a, &b)? == shifted_power_series(x, y, 0, 0, &ctx)?))(),
                msg,
            );
            for i in 0..=2u32 {
                for j in 0..=2u32 {
                    report.record(
                        "shifted power series",
                        (|| {
                            let da = d_p(&a, 1, i)?;
                            let db = d_q(&b, 1, j)?;
                            Ok(commutator_direct(&da, &db)? == shifted_power_series(x, y, i, j, &ctx)?)
                        })(),
                        || format!("x={x}, y={y}, i={i}, j={j}"),
                    );
                }
            }
        }
    }

    for x in -4..=4i64 {
        for y in -4..=4i64 {
            for k in 0..=K {
                for (kind, gen) in [("p", (1i64, 0i64)), ("q", (0, 1))] {
                    let px = power(&ctx, gen.0 * x, gen.1 * x);
                    let py = power(&ctx, gen.0 * y, gen.1 * y);
                    let deriv = |e: &Element, n: u32| if kind == "p" { d_p(e, 1, n) } else { d_q(e, 1, n) };
                    report.record(
                        "leibnitz",
                        (|| {
                            let lhs = deriv(&px.mul(&py)?, k)?;
                            let mut rhs = Element::zero(ctx);
                            for l in 0..=k {
                                let t = deriv(&px, k - l)?.mul(&deriv(&py, l)?)?;
                                rhs = rhs.add(&t.scale_rational(&binomial(k, l)))?;
                            }
                            Ok(lhs == rhs)
                        })(),
                        || format!("{kind}: x={x}, y={y}, k={k}"),
                    );
                }
            }
        }
    }

    let shape = Shape {
        min_exp: -3,
        max_exp: 3,
        max_terms: 3,
        max_c_degree: 1,
    };
    for _ in 0..cases {
        let n = rng.gen_range(1..=2);
        let ctx = AlgebraContext::laurent(n, K).expect("valid context");
        let a = random_element(rng, &ctx, &shape);
        let b = random_element(rng, &ctx, &shape);
        report.record(
            "random pairs, methods agree",
            (|| {
                let direct = commutator_direct(&a, &b)?;
                Ok(commutator_series(&a, &b)? == direct
                    && commutator_series_grouped(&a, &b)? == direct
                    && commutator_series_flat(&a, &b)? == direct)
            })(),
            || describe_pair(&a, &b),
        );
    }
}

fn grouped<R: Rng>(report: &mut Report, rng: &mut R, cases: usize) {
    let shape = Shape {
        min_exp: 0,
        max_exp: 3,
        max_terms: 3,
        max_c_degree: 1,
    };
    for _ in 0..cases {
        let n = rng.gen_range(2..=4);
        let ctx = AlgebraContext::polynomial(n).expect("valid context");
        let a = random_element(rng, &ctx, &shape);
        let b = random_element(rng, &ctx, &shape);
        let c2 = CSeries::monomial(Rational::new(BigInt::from(-1), BigInt::from(2)).expect("valid"), 2, ctx.coeff_mode());
        let c3 = CSeries::monomial(Rational::new(BigInt::from(1), BigInt::from(6)).expect("valid"), 3, ctx.coeff_mode());
        report.record(
            "second order",
            (|| Ok(grouped_term_k2(&a, &b)?.scale(&c2)? == series_term_k(&a, &b, 2)?))(),
            || describe_pair(&a, &b),
        );
        report.record(
            "third order",
            (|| Ok(grouped_term_k3(&a, &b)?.scale(&c3)? == series_term_k(&a, &b, 3)?))(),
            || describe_pair(&a, &b),
        );
    }
}

/// Returns an element that differs from `a` in exactly one coefficient.
fn mutate<R: Rng>(rng: &mut R, a: &Element, shape: &Shape) -> Element {
    let ctx = *a.ctx();
    let monos: Vec<NormalMonomial> = a.terms().map(|(m, _)| m.clone()).collect();
    let target = if rng.gen_bool(0.5) {
        monos.choose(rng).cloned().expect("nonzero element")
    } else {
        random_monomial(rng, ctx.n_pairs(), shape)
    };
    let delta = random_coeff(rng, ctx.coeff_mode(), shape.max_c_degree);
    let bump = Element::from_monomial(target, delta, ctx).expect("valid monomial");
    a.add(&bump).expect("same context")
}

fn oracle<R: Rng>(report: &mut Report, rng: &mut R, cases: usize) {
    for _ in 0..cases {
        let n = rng.gen_range(1..=3);
        let ctx = AlgebraContext::polynomial(n).expect("valid context");
        let a = random_element(rng, &ctx, &Shape::POLYNOMIAL);
        let b = mutate(rng, &a, &Shape::POLYNOMIAL);
        let msg = || describe_pair(&a, &b);
        report.record(
            "equal elements",
            rep_equal(&a, &a.clone(), default_degree(&a, &a)),
            msg,
        );
        report.record(
            "mutated elements differ",
            (|| Ok(a != b && !rep_equal(&a, &b, default_degree(&a, &b))?))(),
            msg,
        );
        report.record(
            "action is multiplicative",
            (|| {
                let ab = a.mul(&b)?;
                for f in basis(n as usize, 2) {
                    if apply(&ab, &f)? != apply(&a, &apply(&b, &f)?)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })(),
            msg,
        );
    }
}

/// Runs every suite with its default case count, or `cases` when given.
pub fn run_all(cases: Option<usize>, seed: u64) -> Vec<Report> {
    Suite::ALL
        .iter()
        .map(|&s| s.run(cases.unwrap_or_else(|| s.default_cases()), seed))
        .collect()
}
