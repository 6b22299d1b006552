//! Exact scalar ring for all symbolic computation.
//!
//! A [`ScalarExpr`] is a finite sum of terms
//!
//! ```text
//!     (gaussian rational) * sqrt(squarefree integer) * (Laurent monomial in formal parameters)
//! ```
//!
//! with the imaginary unit living in the coefficient field, so that
//! conjugation and `i^2 = -1` are exact. Square factors of radicands are
//! always extracted into the coefficient, which makes the representation
//! canonical: two expressions are equal iff their term maps are equal.
//! Distinct square roots of squarefree integers are linearly independent
//! over the rationals, so syntactic equality on the canonical form is sound.
//!
//! All values are immutable; operations are pure functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("parameter `{0}` is unbound in evaluation")]
    UnboundParameter(Param),
    #[error("parameter `{0}` is bound to zero but appears with negative exponent {1}")]
    ZeroToNegativePower(Param, i32),
    #[error("expression is not a single term, cannot invert")]
    NotSingleTerm,
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("square root of a negative rational")]
    NegativeRadicand,
}

// ---------------------------------------------------------------------------
// Formal parameters
// ---------------------------------------------------------------------------

/// The formal self-adjoint parameters of the algebra family.
///
/// All scalar expressions live over one global declaration set, so sums and
/// products of any two expressions are always defined. Conjugation fixes
/// every parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Alpha,
    Epsilon,
    R,
    RHat,
    Kappa,
    Lambda,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Epsilon => "eps",
            Param::R => "R",
            Param::RHat => "Rhat",
            Param::Kappa => "kappa",
            Param::Lambda => "lambda",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Numeric bindings for evaluation.
pub type Bindings = BTreeMap<Param, Complex64>;

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// An exact Gaussian rational `re + im*i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(q: BigRational) -> Self {
        GaussRat::new(q, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// Exact multiplicative inverse. Errors on zero.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(GaussRat::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "({}{}i)", self.re, self.im)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

// ---------------------------------------------------------------------------
// Square roots of integers
// ---------------------------------------------------------------------------

/// Split `n` into `(s, r)` with `n = s^2 * r` and `r` squarefree.
///
/// Trial division handles every prime factor that can occur in factorial
/// ratios and coupling coefficients; a final perfect-square test catches a
/// leftover prime square beyond the trial bound.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    let one = BigUint::one();
    if n.is_zero() {
        return (BigUint::zero(), one);
    }
    let mut rem = n.clone();
    let mut outside = BigUint::one();
    let mut inside = BigUint::one();

    let mut p = BigUint::from(2u32);
    let bound = BigUint::from(1_000_000u64);
    while &p * &p <= rem && p <= bound {
        let mut mult = 0u32;
        while (&rem % &p).is_zero() {
            rem /= &p;
            mult += 1;
        }
        if mult > 0 {
            outside *= p.pow(mult / 2);
            if mult % 2 == 1 {
                inside *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if rem > one {
        let s = rem.sqrt();
        if &s * &s == rem {
            outside *= s;
        } else {
            inside *= rem;
        }
    }
    (outside, inside)
}

/// Exact value `coeff * sqrt(radicand)` with squarefree positive radicand.
///
/// Zero is canonicalized to `0 * sqrt(1)`. Closed under multiplication;
/// addition is only defined between values sharing a radicand (general sums
/// live in [`ScalarExpr`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtRational {
    coeff: BigRational,
    radicand: BigUint,
}

impl SqrtRational {
    /// Build `coeff * sqrt(radicand)`, extracting square factors.
    pub fn new(coeff: BigRational, radicand: BigUint) -> Self {
        if coeff.is_zero() || radicand.is_zero() {
            return SqrtRational {
                coeff: BigRational::zero(),
                radicand: BigUint::one(),
            };
        }
        let (outside, inside) = squarefree_decompose(&radicand);
        SqrtRational {
            coeff: coeff * BigRational::from_integer(BigInt::from(outside)),
            radicand: inside,
        }
    }

    pub fn zero() -> Self {
        SqrtRational::new(BigRational::zero(), BigUint::one())
    }

    pub fn one() -> Self {
        SqrtRational::new(BigRational::one(), BigUint::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        SqrtRational::new(q, BigUint::one())
    }

    pub fn from_int(n: i64) -> Self {
        SqrtRational::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Principal square root of a nonnegative rational, `sqrt(n/d) = sqrt(nd)/d`.
    pub fn sqrt_of_rational(q: &BigRational) -> Result<Self, ScalarError> {
        if q.is_negative() {
            return Err(ScalarError::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(SqrtRational::zero());
        }
        let n = q.numer().to_biguint().expect("nonnegative numerator");
        let d = q.denom().to_biguint().expect("positive denominator");
        let rad = &n * &d;
        Ok(SqrtRational::new(
            BigRational::new(BigInt::one(), q.denom().clone()),
            rad,
        ))
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The exact square, always rational.
    pub fn squared(&self) -> BigRational {
        &self.coeff * &self.coeff * BigRational::from_integer(BigInt::from(self.radicand.clone()))
    }

    /// Signed square: `sign(self) * self^2`, an exact rational.
    pub fn signed_squared(&self) -> BigRational {
        let sq = self.squared();
        if self.coeff.is_negative() {
            -sq
        } else {
            sq
        }
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let r = self.radicand.to_f64().unwrap_or(f64::NAN);
        c * r.sqrt()
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        SqrtRational::new(&self.coeff * &rhs.coeff, &self.radicand * &rhs.radicand)
    }
}

impl Neg for &SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        SqrtRational {
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

// ---------------------------------------------------------------------------
// Laurent monomials
// ---------------------------------------------------------------------------

/// A Laurent monomial in the formal parameters (exponents may be negative).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<Param, i32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn param(p: Param, exp: i32) -> Self {
        let mut m = BTreeMap::new();
        if exp != 0 {
            m.insert(p, exp);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, p: Param) -> i32 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (&p, &e) in &rhs.0 {
            let entry = out.entry(p).or_insert(0);
            *entry += e;
            if *entry == 0 {
                out.remove(&p);
            }
        }
        Monomial(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Param, i32)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Scalar expressions
// ---------------------------------------------------------------------------

/// Term key: squarefree radicand together with a parameter monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct TermKey {
    mono: Monomial,
    radicand: BigUint,
}

/// Exact scalar: a finite sum of Gaussian-rational multiples of
/// `sqrt(r) * monomial` terms, kept in canonical form (no zero coefficients,
/// radicands squarefree).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScalarExpr {
    terms: BTreeMap<TermKey, GaussRat>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::default()
    }

    pub fn one() -> Self {
        ScalarExpr::from_gauss(GaussRat::one())
    }

    pub fn i() -> Self {
        ScalarExpr::from_gauss(GaussRat::i())
    }

    pub fn from_int(n: i64) -> Self {
        ScalarExpr::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ScalarExpr::from_gauss(GaussRat::from_ratio(num, den))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ScalarExpr::from_gauss(GaussRat::from_rational(q))
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(
                TermKey {
                    mono: Monomial::one(),
                    radicand: BigUint::one(),
                },
                g,
            );
        }
        ScalarExpr { terms }
    }

    pub fn from_sqrt_rational(s: &SqrtRational) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(
                TermKey {
                    mono: Monomial::one(),
                    radicand: s.radicand().clone(),
                },
                GaussRat::from_rational(s.coeff().clone()),
            );
        }
        ScalarExpr { terms }
    }

    /// `sqrt(n)` for a nonnegative integer, square factors extracted.
    pub fn sqrt_int(n: u64) -> Self {
        let s = SqrtRational::new(BigRational::one(), BigUint::from(n));
        ScalarExpr::from_sqrt_rational(&s)
    }

    /// Principal square root of a nonnegative rational.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self, ScalarError> {
        Ok(ScalarExpr::from_sqrt_rational(&SqrtRational::sqrt_of_rational(q)?))
    }

    pub fn param(p: Param) -> Self {
        ScalarExpr::param_pow(p, 1)
    }

    pub fn param_pow(p: Param, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            TermKey {
                mono: Monomial::param(p, exp),
                radicand: BigUint::one(),
            },
            GaussRat::one(),
        );
        ScalarExpr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &ScalarExpr::one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, key: TermKey, g: GaussRat) {
        if g.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(g);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &g;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, g)| (k.clone(), g.conj()))
            .collect();
        ScalarExpr { terms }
    }

    pub fn scale(&self, g: &GaussRat) -> Self {
        if g.is_zero() {
            return ScalarExpr::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c * g))
            .collect();
        ScalarExpr { terms }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&GaussRat::from_rational(q.clone()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = ScalarExpr::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }

    /// Signed power; negative exponents require a single invertible term.
    pub fn pow_i(&self, exp: i32) -> Result<Self, ScalarError> {
        if exp >= 0 {
            Ok(self.pow(exp as u32))
        } else {
            Ok(self.invert_single()?.pow((-exp) as u32))
        }
    }

    /// If the expression is a single term, return its parts.
    pub fn as_single_term(&self) -> Option<(&Monomial, &BigUint, &GaussRat)> {
        if self.terms.len() == 1 {
            let (k, g) = self.terms.iter().next().unwrap();
            Some((&k.mono, &k.radicand, g))
        } else {
            None
        }
    }

    /// Exact inverse of a single-term expression:
    /// `(c sqrt(r) m)^-1 = (1/(c r)) sqrt(r) m^-1`.
    pub fn invert_single(&self) -> Result<Self, ScalarError> {
        let (mono, rad, g) = self.as_single_term().ok_or(ScalarError::NotSingleTerm)?;
        let rad_q = GaussRat::from_rational(BigRational::from_integer(BigInt::from(rad.clone())));
        let denom = g * &rad_q;
        let coeff = denom.inv()?;
        let inv_mono = Monomial(mono.iter().map(|(p, e)| (p, -e)).collect());
        let mut terms = BTreeMap::new();
        terms.insert(
            TermKey {
                mono: inv_mono,
                radicand: rad.clone(),
            },
            coeff,
        );
        Ok(ScalarExpr { terms })
    }

    /// Exact division by a single-term expression.
    pub fn div_single(&self, divisor: &ScalarExpr) -> Result<Self, ScalarError> {
        if divisor.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self * &divisor.invert_single()?)
    }

    /// Substitute `value` for a parameter. Negative exponents require the
    /// value to be a single invertible term.
    pub fn bind(&self, p: Param, value: &ScalarExpr) -> Result<Self, ScalarError> {
        let mut out = ScalarExpr::zero();
        for (k, g) in &self.terms {
            let e = k.mono.exponent(p);
            let mut stripped = ScalarExpr::zero();
            let reduced_mono = Monomial(k.mono.iter().filter(|&(q, _)| q != p).collect());
            stripped.insert_term(
                TermKey {
                    mono: reduced_mono,
                    radicand: k.radicand.clone(),
                },
                g.clone(),
            );
            if e == 0 {
                out = &out + &stripped;
            } else {
                out = &out + &(&stripped * &value.pow_i(e)?);
            }
        }
        Ok(out)
    }

    /// Substitute several parameters at once.
    pub fn bind_all(&self, subs: &BTreeMap<Param, ScalarExpr>) -> Result<Self, ScalarError> {
        let mut out = self.clone();
        for (&p, v) in subs {
            out = out.bind(p, v)?;
        }
        Ok(out)
    }

    /// Smallest exponent of `p` over all terms (`None` for the zero scalar).
    pub fn min_exponent(&self, p: Param) -> Option<i32> {
        self.terms.keys().map(|k| k.mono.exponent(p)).min()
    }

    /// Keep only terms whose exponent of `p` satisfies the predicate.
    pub fn filter_exponent(&self, p: Param, pred: impl Fn(i32) -> bool) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| pred(k.mono.exponent(p)))
            .map(|(k, g)| (k.clone(), g.clone()))
            .collect();
        ScalarExpr { terms }
    }

    /// Numeric evaluation with radicands as principal square roots.
    pub fn eval(&self, bindings: &Bindings) -> Result<Complex64, ScalarError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, g) in &self.terms {
            let mut term = g.to_complex();
            let r = self.radicand_f64(&k.radicand);
            term *= r.sqrt();
            for (p, e) in k.mono.iter() {
                let v = *bindings.get(&p).ok_or(ScalarError::UnboundParameter(p))?;
                if v.norm_sqr() == 0.0 && e < 0 {
                    return Err(ScalarError::ZeroToNegativePower(p, e));
                }
                term *= v.powi(e);
            }
            acc += term;
        }
        Ok(acc)
    }

    fn radicand_f64(&self, r: &BigUint) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// Gaussian-rational value of a constant expression (radicand 1, no
    /// parameters). `None` if the expression is not of that shape.
    pub fn as_gauss_rat(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        let (mono, rad, g) = self.as_single_term()?;
        if mono.is_one() && rad.is_one() {
            Some(g.clone())
        } else {
            None
        }
    }

    /// Exact rational value of a constant real expression, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        let g = self.as_gauss_rat()?;
        g.is_real().then_some(g.re)
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint, &GaussRat)> {
        self.terms.iter().map(|(k, g)| (&k.mono, &k.radicand, g))
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (k, g) in &rhs.terms {
            out.insert_term(k.clone(), g.clone());
        }
        out
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        let terms = self
            .terms
            .iter()
            .map(|(k, g)| (k.clone(), -g))
            .collect();
        ScalarExpr { terms }
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (ka, ga) in &self.terms {
            for (kb, gb) in &rhs.terms {
                // sqrt(r) * sqrt(s) = extract(r*s)
                let prod = SqrtRational::new(BigRational::one(), &ka.radicand * &kb.radicand);
                let coeff = &(ga * gb) * &GaussRat::from_rational(prod.coeff().clone());
                out.insert_term(
                    TermKey {
                        mono: ka.mono.mul(&kb.mono),
                        radicand: prod.radicand().clone(),
                    },
                    coeff,
                );
            }
        }
        out
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, g) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{g}")?;
            if !k.radicand.is_one() {
                write!(f, "*sqrt({})", k.radicand)?;
            }
            if !k.mono.is_one() {
                write!(f, "*{}", k.mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = &ScalarExpr::sqrt_int(2) * &ScalarExpr::param(Param::Epsilon);
        let sum = &a + &(-&a);
        assert!(sum.is_zero());
    }

    #[test]
    fn sqrt8_plus_sqrt2_is_3_sqrt2() {
        let sum = &ScalarExpr::sqrt_int(8) + &ScalarExpr::sqrt_int(2);
        let expected = ScalarExpr::sqrt_int(2).scale(&GaussRat::from_int(3));
        assert_eq!(sum, expected);
    }

    #[test]
    fn one_plus_i_single_term() {
        let s = &ScalarExpr::one() + &ScalarExpr::i();
        assert_eq!(s.num_terms(), 1);
        assert_eq!(
            s.as_gauss_rat().unwrap(),
            GaussRat::new(BigRational::one(), BigRational::one())
        );
    }

    #[test]
    fn sqrt3_squared_is_3() {
        let s = ScalarExpr::sqrt_int(3);
        assert_eq!(&s * &s, ScalarExpr::from_int(3));
    }

    #[test]
    fn laurent_exponents_cancel() {
        let a = &ScalarExpr::param(Param::Alpha) * &ScalarExpr::param_pow(Param::Epsilon, -1);
        let b = &ScalarExpr::param(Param::Alpha) * &ScalarExpr::param(Param::Epsilon);
        assert_eq!(&a * &b, ScalarExpr::param_pow(Param::Alpha, 2));
    }

    #[test]
    fn sqrt6_times_sqrt10_is_2_sqrt15() {
        let prod = &ScalarExpr::sqrt_int(6) * &ScalarExpr::sqrt_int(10);
        let expected = ScalarExpr::sqrt_int(15).scale(&GaussRat::from_int(2));
        assert_eq!(prod, expected);
    }

    #[test]
    fn conj_examples() {
        let ia = &ScalarExpr::i() * &ScalarExpr::param(Param::Alpha);
        assert_eq!(ia.conj(), -&ia);

        let real = &ScalarExpr::sqrt_int(2) * &ScalarExpr::param_pow(Param::R, 2);
        assert_eq!(real.conj(), real);

        let g = ScalarExpr::from_gauss(GaussRat::new(BigRational::one(), BigRational::one()));
        let mixed = &g * &ScalarExpr::param(Param::Epsilon);
        let expected = &ScalarExpr::from_gauss(GaussRat::new(
            BigRational::one(),
            -BigRational::one(),
        )) * &ScalarExpr::param(Param::Epsilon);
        assert_eq!(mixed.conj(), expected);
    }

    #[test]
    fn eval_examples() {
        let mut b = Bindings::new();
        b.insert(Param::Alpha, Complex64::new(0.0, 1.0));
        let alpha_sq = ScalarExpr::param_pow(Param::Alpha, 2);
        let v = alpha_sq.eval(&b).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let mut b2 = Bindings::new();
        b2.insert(Param::Alpha, Complex64::new(1.0, 0.0));
        b2.insert(Param::R, Complex64::new(3.0, 0.0));
        let e = &ScalarExpr::from_int(2)
            * &(&ScalarExpr::param_pow(Param::Alpha, 2) * &ScalarExpr::param_pow(Param::R, 2));
        assert!((e.eval(&b2).unwrap().re - 18.0).abs() < 1e-12);

        let mut b3 = Bindings::new();
        b3.insert(Param::Epsilon, Complex64::new(0.5, 0.0));
        let e3 = &ScalarExpr::sqrt_int(2) * &ScalarExpr::param_pow(Param::Epsilon, -1);
        assert!((e3.eval(&b3).unwrap().re - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn eval_error_paths() {
        let e = ScalarExpr::param(Param::Kappa);
        assert!(matches!(
            e.eval(&Bindings::new()),
            Err(ScalarError::UnboundParameter(Param::Kappa))
        ));

        let mut b = Bindings::new();
        b.insert(Param::Epsilon, Complex64::new(0.0, 0.0));
        let e2 = ScalarExpr::param_pow(Param::Epsilon, -2);
        assert!(matches!(
            e2.eval(&b),
            Err(ScalarError::ZeroToNegativePower(Param::Epsilon, -2))
        ));
    }

    #[test]
    fn invert_single_term() {
        let t = ScalarExpr::sqrt_int(3)
            .scale(&GaussRat::from_ratio(2, 5))
            .mul(&ScalarExpr::param_pow(Param::Alpha, -2));
        let inv = t.invert_single().unwrap();
        assert!((&t * &inv).is_one());
    }

    #[test]
    fn bind_substitutes_powers() {
        // R^2 -> 6 via R := sqrt(6)
        let e = ScalarExpr::param_pow(Param::R, 2);
        let v = ScalarExpr::sqrt_int(6);
        assert_eq!(e.bind(Param::R, &v).unwrap(), ScalarExpr::from_int(6));

        // negative powers invert the bound value
        let e2 = ScalarExpr::param_pow(Param::Epsilon, -2);
        let two = ScalarExpr::from_int(2);
        assert_eq!(
            e2.bind(Param::Epsilon, &two).unwrap(),
            ScalarExpr::from_ratio(1, 4)
        );
    }

    #[test]
    fn sqrt_of_rational_canonical() {
        // sqrt(9/2) = 3/2 sqrt(2)
        let s = SqrtRational::sqrt_of_rational(&q(9, 2)).unwrap();
        assert_eq!(s.coeff(), &q(3, 2));
        assert_eq!(s.radicand(), &BigUint::from(2u32));
    }

    // -- randomized ring laws ------------------------------------------------

    fn small_expr() -> impl Strategy<Value = ScalarExpr> {
        let term = (
            -3i64..4,
            1i64..5,
            -2i64..3,
            prop::sample::select(vec![1u64, 2, 3, 5, 6]),
            -2i32..3,
            -1i32..2,
        )
            .prop_map(|(n, d, im, rad, ea, ee)| {
                let g = GaussRat::new(q_ratio(n, d), q_ratio(im, 2));
                let mut t = ScalarExpr::from_gauss(g);
                t = &t * &ScalarExpr::sqrt_int(rad);
                t = &t * &ScalarExpr::param_pow(Param::Alpha, ea);
                t = &t * &ScalarExpr::param_pow(Param::Epsilon, ee);
                t
            });
        prop::collection::vec(term, 0..4).prop_map(|ts| {
            let mut acc = ScalarExpr::zero();
            for t in ts {
                acc = &acc + &t;
            }
            acc
        })
    }

    fn q_ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d.max(1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws(a in small_expr(), b in small_expr(), c in small_expr()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn conj_laws(a in small_expr(), b in small_expr()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn self_subtraction_normalizes_to_zero(a in small_expr()) {
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_ring_homomorphism(a in small_expr(), b in small_expr()) {
            let mut bind = Bindings::new();
            bind.insert(Param::Alpha, Complex64::new(0.7, 0.35));
            bind.insert(Param::Epsilon, Complex64::new(1.25, -0.5));
            let lhs = (&a * &b).eval(&bind).unwrap();
            let rhs = a.eval(&bind).unwrap() * b.eval(&bind).unwrap();
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            prop_assert!((lhs - rhs).norm() / scale < 1e-12);

            let lhs_add = (&a + &b).eval(&bind).unwrap();
            let rhs_add = a.eval(&bind).unwrap() + b.eval(&bind).unwrap();
            let scale_add = lhs_add.norm().max(rhs_add.norm()).max(1.0);
            prop_assert!((lhs_add - rhs_add).norm() / scale_add < 1e-12);
        }
    }
}
