//! Exact coefficient arithmetic: rationals and (truncated) polynomials in the
//! central parameter `c`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default truncation order for series in `c`.
pub const DEFAULT_TRUNCATION: u32 = 8;

/// Arbitrary-precision rational number, always stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// `n/d` with `/1` omitted.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// `num/den`, denominator always present.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl std::ops::$imp<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(std::ops::$imp::$method(&self.0, &rhs.0))
            }
        }
        impl std::ops::$imp for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(std::ops::$imp::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// How a [`CSeries`] treats high powers of `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffMode {
    /// Finite polynomial in `c`, nothing dropped.
    Exact,
    /// Power series modulo `c^(K+1)`.
    Truncated(u32),
}

impl CoeffMode {
    /// Whether degree `deg` survives in this mode.
    pub fn keeps(self, deg: u32) -> bool {
        match self {
            CoeffMode::Exact => true,
            CoeffMode::Truncated(k) => deg <= k,
        }
    }
}

/// Element of the coefficient ring: a polynomial (or truncated series) in the
/// formal central symbol `c` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CSeries {
    terms: BTreeMap<u32, Rational>,
    mode: CoeffMode,
}

impl CSeries {
    pub fn zero(mode: CoeffMode) -> Self {
        CSeries {
            terms: BTreeMap::new(),
            mode,
        }
    }

    pub fn one(mode: CoeffMode) -> Self {
        Self::constant(Rational::one(), mode)
    }

    pub fn constant(r: Rational, mode: CoeffMode) -> Self {
        Self::monomial(r, 0, mode)
    }

    /// `r * c^deg`, or zero when `deg` is beyond the truncation order.
    pub fn monomial(r: Rational, deg: u32, mode: CoeffMode) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() && mode.keeps(deg) {
            terms.insert(deg, r);
        }
        CSeries { terms, mode }
    }

    /// `c` itself.
    pub fn c(mode: CoeffMode) -> Self {
        Self::monomial(Rational::one(), 1, mode)
    }

    /// Builds a series from `(degree, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(terms: I, mode: CoeffMode) -> Self
    where
        I: IntoIterator<Item = (u32, Rational)>,
    {
        let mut out = CSeries::zero(mode);
        for (deg, r) in terms {
            out.add_term(deg, r);
        }
        out
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero coefficients in ascending degree order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        self.terms.iter().map(|(&d, r)| (d, r))
    }

    pub fn coeff(&self, deg: u32) -> Rational {
        self.terms.get(&deg).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// The single `(degree, coefficient)` pair if there is exactly one.
    pub fn as_single_term(&self) -> Option<(u32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, deg: u32, r: Rational) {
        if r.is_zero() || !self.mode.keeps(deg) {
            return;
        }
        let slot = self.terms.entry(deg).or_insert_with(Rational::zero);
        *slot = &*slot + &r;
        if slot.is_zero() {
            self.terms.remove(&deg);
        }
    }

    fn check_mode(&self, other: &CSeries) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch {
                left: self.mode,
                right: other.mode,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CSeries) -> Result<CSeries> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (&deg, r) in &other.terms {
            out.add_term(deg, r.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CSeries) -> Result<CSeries> {
        self.add(&other.neg())
    }

    /// Cauchy product, dropping degrees above the truncation order.
    pub fn mul(&self, other: &CSeries) -> Result<CSeries> {
        self.check_mode(other)?;
        let mut out = CSeries::zero(self.mode);
        for (&da, ra) in &self.terms {
            for (&db, rb) in &other.terms {
                let deg = da.checked_add(db).ok_or(Error::Overflow("c-degree"))?;
                if self.mode.keeps(deg) {
                    out.add_term(deg, ra * rb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> CSeries {
        if r.is_zero() {
            return CSeries::zero(self.mode);
        }
        CSeries {
            terms: self.terms.iter().map(|(&d, x)| (d, x * r)).collect(),
            mode: self.mode,
        }
    }

    pub fn neg(&self) -> CSeries {
        CSeries {
            terms: self.terms.iter().map(|(&d, x)| (d, -x)).collect(),
            mode: self.mode,
        }
    }

    /// Multiplies by `c^shift` and re-expresses the result in `mode`.
    pub fn shifted(&self, shift: u32, mode: CoeffMode) -> Result<CSeries> {
        let mut out = CSeries::zero(mode);
        for (&d, r) in &self.terms {
            let deg = d.checked_add(shift).ok_or(Error::Overflow("c-degree"))?;
            out.add_term(deg, r.clone());
        }
        Ok(out)
    }

    /// Same coefficients under another mode (dropping degrees it cannot hold).
    pub fn with_mode(&self, mode: CoeffMode) -> CSeries {
        let mut out = CSeries::zero(mode);
        for (&d, r) in &self.terms {
            out.add_term(d, r.clone());
        }
        out
    }

    /// Keeps only the coefficient of `c^deg`.
    pub fn degree_part(&self, deg: u32) -> CSeries {
        CSeries::monomial(self.coeff(deg), deg, self.mode)
    }

    /// Divides by `c`; fails if a constant term is present.
    pub fn div_c(&self) -> Result<CSeries> {
        if self.terms.contains_key(&0) {
            return Err(Error::NotDivisibleByC);
        }
        Ok(CSeries {
            terms: self.terms.iter().map(|(&d, r)| (d - 1, r.clone())).collect(),
            mode: self.mode,
        })
    }
}

pub fn cs_add(a: &CSeries, b: &CSeries) -> Result<CSeries> {
    a.add(b)
}

pub fn cs_mul(a: &CSeries, b: &CSeries) -> Result<CSeries> {
    a.mul(b)
}

pub fn cs_scale(a: &CSeries, r: &Rational) -> CSeries {
    a.scale(r)
}

pub fn cs_neg(a: &CSeries) -> CSeries {
    a.neg()
}

pub fn cs_is_zero(a: &CSeries) -> bool {
    a.is_zero()
}

fn write_c_power(f: &mut fmt::Formatter<'_>, abs: &Rational, deg: u32) -> fmt::Result {
    match (deg, abs.is_one()) {
        (0, _) => write!(f, "{abs}"),
        (1, true) => write!(f, "c"),
        (1, false) => write!(f, "{abs}*c"),
        (d, true) => write!(f, "c^{d}"),
        (d, false) => write!(f, "{abs}*c^{d}"),
    }
}

/// Canonical form `r0 + r1*c + r2*c^2 + ...`; zero renders as `0`.
impl fmt::Display for CSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&deg, r)) in self.terms.iter().enumerate() {
            let abs = r.abs();
            match (i, r.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_c_power(f, &abs, deg)?;
        }
        Ok(())
    }
}
