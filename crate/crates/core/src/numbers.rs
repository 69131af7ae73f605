//! Exact arithmetic in ℚ and imaginary quadratic fields ℚ(√m).
//!
//! Elements are stored as `a + b·√m` with `a`, `b` arbitrary-precision
//! rationals. The nontrivial automorphism `√m ↦ −√m` is exposed as
//! [`FieldElement::conj`]; for `m < 0` it is the restriction of complex
//! conjugation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("incompatible coefficient fields: {0} and {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid radicand {0}: must be a negative squarefree integer")]
    InvalidRadicand(i64),
    #[error("{0} has no nontrivial conjugation")]
    NoConjugation(FieldSpec),
}

/// The coefficient field: ℚ or ℚ(√m) with `m` squarefree and negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Quadratic(i64),
}

impl FieldSpec {
    /// Builds ℚ(√m), rejecting radicands that are nonnegative or not squarefree.
    pub fn quadratic(m: i64) -> Result<Self, NumberError> {
        if m >= 0 || m == i64::MIN || !is_squarefree(m.unsigned_abs()) {
            return Err(NumberError::InvalidRadicand(m));
        }
        Ok(FieldSpec::Quadratic(m))
    }

    pub fn gaussian() -> Self {
        FieldSpec::Quadratic(-1)
    }

    pub fn radicand(&self) -> Option<i64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Quadratic(m) => Some(*m),
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, FieldSpec::Quadratic(_))
    }

    /// Symbol used for √m in the textual format.
    pub fn sqrt_symbol(&self) -> &'static str {
        match self {
            FieldSpec::Quadratic(-1) => "i",
            _ => "s",
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Quadratic(-1) => write!(f, "Q(i)"),
            FieldSpec::Quadratic(m) => write!(f, "Q(sqrt {m})"),
        }
    }
}

fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An element `a + b·√m`. Over ℚ the `b` part is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    a: Rational,
    b: Rational,
    spec: FieldSpec,
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational, spec: FieldSpec) -> Self {
        debug_assert!(spec.is_quadratic() || b.is_zero());
        FieldElement { a, b, spec }
    }

    pub fn from_rational(a: Rational, spec: FieldSpec) -> Self {
        FieldElement { a, b: Rational::zero(), spec }
    }

    pub fn from_int(n: i64, spec: FieldSpec) -> Self {
        Self::from_rational(Rational::from_integer(n.into()), spec)
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Self::from_int(0, spec)
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::from_int(1, spec)
    }

    /// √m itself. Fails over ℚ.
    pub fn sqrt_m(spec: FieldSpec) -> Result<Self, NumberError> {
        match spec {
            FieldSpec::Rationals => Err(NumberError::NoConjugation(spec)),
            FieldSpec::Quadratic(_) => Ok(FieldElement { a: Rational::zero(), b: Rational::one(), spec }),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &Rational {
        &self.b
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True iff the element lies in the fixed field of conjugation (here ℚ).
    pub fn is_fixed(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        FieldElement { a: self.a.clone(), b: -&self.b, spec: self.spec }
    }

    fn m(&self) -> Rational {
        Rational::from_integer(self.spec.radicand().unwrap_or(0).into())
    }

    /// Field norm `a² − m·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - self.m() * &self.b * &self.b
    }

    fn check(&self, other: &Self) -> Result<(), NumberError> {
        if self.spec != other.spec {
            return Err(NumberError::FieldMismatch(self.spec, other.spec));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        Ok(FieldElement { a: &self.a + &other.a, b: &self.b + &other.b, spec: self.spec })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        Ok(FieldElement { a: &self.a - &other.a, b: &self.b - &other.b, spec: self.spec })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.b.is_zero() && other.b.is_zero() {
            return FieldElement::from_rational(&self.a * &other.a, self.spec);
        }
        let a = &self.a * &other.a + self.m() * &self.b * &other.b;
        let b = &self.a * &other.b + &self.b * &other.a;
        FieldElement { a, b, spec: self.spec }
    }

    /// Multiplicative inverse via `x⁻¹ = conj(x) / N(x)`.
    pub fn inv(&self) -> Result<Self, NumberError> {
        if self.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        let n = self.norm();
        Ok(FieldElement { a: &self.a / &n, b: -&self.b / &n, spec: self.spec })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumberError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        FieldElement { a: &self.a * r, b: &self.b * r, spec: self.spec }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one(self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let spec = self.spec;
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(FieldElement::from_rational(r, spec));
            }
            // (d√m)² = d²m
            let m = spec.radicand()?;
            let d2 = &self.a / Rational::from_integer(m.into());
            let d = rational_sqrt(&d2)?;
            return Some(FieldElement::new(Rational::zero(), d, spec));
        }
        // (c + d√m)² = c² + m d² + 2cd√m; c² solves c⁴ − a c² + m b²/4 = 0
        let disc = rational_sqrt(&self.norm())?;
        let two = Rational::from_integer(2.into());
        for c2 in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if let Some(c) = rational_sqrt(&c2) {
                if c.is_zero() {
                    continue;
                }
                let d = &self.b / (&two * &c);
                let cand = FieldElement::new(c, d, spec);
                if &cand.mul_unchecked(&cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn is_integral_rational(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }
}

/// Square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(Rational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

/// Least common multiple of the denominators of both parts.
pub fn denominator_lcm(x: &FieldElement) -> BigInt {
    x.a.denom().lcm(x.b.denom())
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field arithmetic on mismatched coefficient fields")
            }
        }
        impl std::ops::$tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b, spec: self.spec }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.spec.sqrt_symbol();
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*{}", self.b, sym),
            (false, false) => write!(f, "{} + {}*{}", self.a, self.b, sym),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn el(a: i64, b: i64, m: i64) -> FieldElement {
        FieldElement::new(q(a, 1), q(b, 1), FieldSpec::quadratic(m).unwrap())
    }

    #[test]
    fn gaussian_products() {
        assert_eq!(el(1, 1, -1) * el(1, -1, -1), el(2, 0, -1));
        assert_eq!(el(0, 1, -1) * el(0, 1, -1), el(-1, 0, -1));
        assert_eq!(el(1, 2, -2) + el(3, -2, -2), el(4, 0, -2));
    }

    #[test]
    fn inverses() {
        let g = FieldSpec::gaussian();
        assert_eq!(FieldElement::from_int(2, g).inv().unwrap(), FieldElement::from_rational(q(1, 2), g));
        assert_eq!(el(0, 1, -1).inv().unwrap(), el(0, -1, -1));
        let x = el(1, 1, -1);
        let inv = x.inv().unwrap();
        assert_eq!(inv, FieldElement::new(q(1, 2), q(-1, 2), g));
        assert!((x * inv).is_one());
        assert_eq!(FieldElement::zero(g).inv(), Err(NumberError::DivisionByZero));
    }

    #[test]
    fn conjugation() {
        assert_eq!(el(2, 3, -1).conj(), el(2, -3, -1));
        assert_eq!(el(5, 0, -1).conj(), el(5, 0, -1));
        let x = el(1, 1, -2);
        let y = el(2, -1, -2);
        assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        // (1+√−2)(2−√−2) = 2 − √−2 + 2√−2 + 2 = 4 + √−2
        assert_eq!(&x * &y, el(4, 1, -2));
    }

    #[test]
    fn fixed_elements() {
        assert!(FieldElement::from_rational(q(7, 3), FieldSpec::Rationals).is_fixed());
        assert!(!el(0, 1, -1).is_fixed());
        let x = el(3, -5, -7);
        assert!((&x + &x.conj()).is_fixed());
    }

    #[test]
    fn mismatched_fields() {
        let r = el(1, 1, -1).try_add(&el(1, 1, -2));
        assert!(matches!(r, Err(NumberError::FieldMismatch(_, _))));
    }

    #[test]
    fn radicand_validation() {
        assert!(FieldSpec::quadratic(-1).is_ok());
        assert!(FieldSpec::quadratic(-30).is_ok());
        assert!(FieldSpec::quadratic(-4).is_err());
        assert!(FieldSpec::quadratic(-18).is_err());
        assert!(FieldSpec::quadratic(2).is_err());
        assert!(FieldSpec::quadratic(0).is_err());
    }

    #[test]
    fn square_roots() {
        let g = FieldSpec::gaussian();
        // 2i = (1+i)²
        let r = FieldElement::new(q(0, 1), q(2, 1), g).sqrt().unwrap();
        assert_eq!(&r * &r, el(0, 2, -1));
        let r = FieldElement::from_int(-4, g).sqrt().unwrap();
        assert_eq!(&r * &r, FieldElement::from_int(-4, g));
        assert!(FieldElement::from_int(-4, FieldSpec::Rationals).sqrt().is_none());
        assert!(FieldElement::from_int(2, g).sqrt().is_none());
        assert_eq!(
            FieldElement::from_rational(q(9, 4), FieldSpec::Rationals).sqrt(),
            Some(FieldElement::from_rational(q(3, 2), FieldSpec::Rationals))
        );
    }
}
