//! Sparse multivariate polynomials over [`FieldElement`] coefficients.
//!
//! A [`Polynomial`] keeps its terms sorted in descending graded reverse
//! lexicographic order with no zero coefficients, so structural equality is
//! polynomial equality. Other monomial orders are used only inside the
//! Gröbner engine.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numbers::{FieldElement, FieldSpec, NumberError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different variable contexts: [{0}] vs [{1}]")]
    ContextMismatch(String, String),
    #[error("map has {found} components but its target has {expected} variables")]
    MapArity { expected: usize, found: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Number(#[from] NumberError),
}

/// Ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
}

pub type Context = Arc<VariableContext>;

impl VariableContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Context, PolyError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VariableContext { names }))
    }

    /// Context `prefix1, …, prefixN`.
    pub fn indexed(prefix: &str, count: usize) -> Context {
        Arc::new(VariableContext { names: (1..=count).map(|i| format!("{prefix}{i}")).collect() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }
}

fn same_context(a: &Context, b: &Context) -> Result<(), PolyError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(PolyError::ContextMismatch(a.names.join(","), b.names.join(",")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    pub fn var(nvars: usize, index: usize, power: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = power;
        Monomial { exps, degree: power }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A monomial order. `BlockElimination(k)` compares the first `k` variables
/// by grevlex, breaking ties with grevlex on the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
    BlockElimination(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::GrevLex => a.degree.cmp(&b.degree).then_with(|| {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::BlockElimination(k) => {
                grevlex(&a.exps[..k], &b.exps[..k]).then_with(|| grevlex(&a.exps[k..], &b.exps[k..]))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::BlockElimination(k) => format!("block({k})"),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub type Term = (Monomial, FieldElement);

/// Merges two term lists sorted descending by `order`, computing `a + sign·b`.
pub(crate) fn merge_terms(a: &[Term], b: &[Term], negate_b: bool, order: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.compare(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate_b { -c } else { c.clone() })));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ctx: Context,
    field: FieldSpec,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(ctx: &Context, field: FieldSpec) -> Self {
        Polynomial { ctx: ctx.clone(), field, terms: Vec::new() }
    }

    pub fn constant(ctx: &Context, c: FieldElement) -> Self {
        let field = c.spec();
        let terms = if c.is_zero() { vec![] } else { vec![(Monomial::one(ctx.len()), c)] };
        Polynomial { ctx: ctx.clone(), field, terms }
    }

    pub fn one(ctx: &Context, field: FieldSpec) -> Self {
        Self::constant(ctx, FieldElement::one(field))
    }

    pub fn var(ctx: &Context, field: FieldSpec, index: usize) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            field,
            terms: vec![(Monomial::var(ctx.len(), index, 1), FieldElement::one(field))],
        }
    }

    pub fn var_named(ctx: &Context, field: FieldSpec, name: &str) -> Result<Self, PolyError> {
        let idx = ctx.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))?;
        Ok(Self::var(ctx, field, idx))
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ctx: &Context, field: FieldSpec, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.exps.len(), ctx.len());
            match acc.get_mut(&m) {
                Some(e) => *e = &*e + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.compare(&b.0, &a.0));
        Polynomial { ctx: ctx.clone(), field, terms }
    }

    /// Terms already sorted descending under `order`; re-sorts canonically.
    pub(crate) fn from_sorted(ctx: &Context, field: FieldSpec, mut terms: Vec<Term>, order: &MonomialOrder) -> Self {
        if *order != MonomialOrder::GrevLex {
            terms.sort_by(|a, b| MonomialOrder::GrevLex.compare(&b.0, &a.0));
        }
        Polynomial { ctx: ctx.clone(), field, terms }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree).max().unwrap_or(0)
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<Term> {
        let mut t = self.terms.clone();
        if *order != MonomialOrder::GrevLex {
            t.sort_by(|a, b| order.compare(&b.0, &a.0));
        }
        t
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&Term> {
        self.terms.iter().max_by(|a, b| order.compare(&a.0, &b.0))
    }

    /// Indices of variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ctx.len()).filter(|&i| self.terms.iter().any(|(m, _)| m.exps[i] > 0)).collect()
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        same_context(&self.ctx, &other.ctx)?;
        if self.field != other.field {
            return Err(NumberError::FieldMismatch(self.field, other.field).into());
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.with_terms(merge_terms(&self.terms, &other.terms, false, &MonomialOrder::GrevLex)))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.with_terms(merge_terms(&self.terms, &other.terms, true, &MonomialOrder::GrevLex)))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut acc = Polynomial::zero(&self.ctx, self.field);
        for (m, c) in &other.terms {
            let part = self.mul_term(m, c);
            acc = acc.with_terms(merge_terms(&acc.terms, &part.terms, false, &MonomialOrder::GrevLex));
        }
        Ok(acc)
    }

    fn with_terms(&self, terms: Vec<Term>) -> Polynomial {
        Polynomial { ctx: self.ctx.clone(), field: self.field, terms }
    }

    /// Multiplication by a single term; order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.field);
        }
        self.with_terms(self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect())
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        self.mul_term(&Monomial::one(self.ctx.len()), c)
    }

    pub fn scale_rational(&self, r: &Rational) -> Polynomial {
        if r.is_zero() {
            return Polynomial::zero(&self.ctx, self.field);
        }
        self.with_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))).collect())
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies the field conjugation to every coefficient.
    pub fn conjugate(&self) -> Polynomial {
        self.with_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect())
    }

    /// `p + p^σ`.
    pub fn trace(&self) -> Polynomial {
        self + &self.conjugate()
    }

    /// `(Tr(p), Tr(√m·p))`, the traces against the basis `{1, √m}`.
    pub fn trace_pair(&self) -> Result<(Polynomial, Polynomial), PolyError> {
        let s = FieldElement::sqrt_m(self.field)?;
        Ok((self.trace(), self.scale(&s).trace()))
    }

    pub fn has_fixed_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_fixed())
    }

    /// Reinterprets the polynomial over a different coefficient field. Only
    /// valid when every coefficient is fixed or the fields agree.
    pub fn with_field(&self, field: FieldSpec) -> Polynomial {
        debug_assert!(field == self.field || self.has_fixed_coefficients());
        Polynomial {
            ctx: self.ctx.clone(),
            field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), FieldElement::from_rational(c.rational_part().clone(), field)))
                .collect(),
        }
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `target` index `mapping[i]`.
    pub fn embed(&self, target: &Context, mapping: &[usize]) -> Polynomial {
        Polynomial::from_terms(
            target,
            self.field,
            self.terms.iter().map(|(m, c)| {
                let mut exps = vec![0; target.len()];
                for (i, e) in m.exps.iter().enumerate() {
                    exps[mapping[i]] += e;
                }
                (Monomial::new(exps), c.clone())
            }),
        )
    }

    /// Moves the polynomial into `target` by matching variable names.
    /// Variables that do not occur may be absent from `target`.
    pub fn embed_by_name(&self, target: &Context) -> Result<Polynomial, PolyError> {
        let mut mapping = Vec::with_capacity(self.ctx.len());
        for (i, n) in self.ctx.names().iter().enumerate() {
            match target.index_of(n) {
                Some(j) => mapping.push(j),
                None if self.terms.iter().all(|(m, _)| m.exps[i] == 0) => mapping.push(0),
                None => return Err(PolyError::UnknownVariable(n.clone())),
            }
        }
        Ok(self.embed(target, &mapping))
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.ctx.len());
        let mut acc = FieldElement::zero(self.field);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, e) in point.iter().zip(&m.exps) {
                if *e > 0 {
                    v = &v * &x.pow(*e);
                }
            }
            acc = &acc + &v;
        }
        acc
    }

    /// Substitutes the components of `f` for the variables of `self`.
    pub fn compose(&self, f: &PolyMap) -> Result<Polynomial, PolyError> {
        same_context(&self.ctx, &f.target)?;
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); f.components.len()];
        let mut acc = Polynomial::zero(&f.source, self.field);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&f.source, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(f.components[i].clone());
                }
                while cache.len() < e as usize {
                    let next = cache.last().unwrap().try_mul(&f.components[i])?;
                    cache.push(next);
                }
                t = t.try_mul(&cache[e as usize - 1])?;
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Scales to integer coefficients with content 1 and positive leading
    /// coefficient. Only rescales polynomials whose coefficients are fixed;
    /// otherwise makes the leading coefficient 1.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        if !self.has_fixed_coefficients() {
            let lc = self.terms[0].1.inv().expect("nonzero leading coefficient");
            return self.scale(&lc);
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for (_, c) in &self.terms {
            den = den.lcm(c.rational_part().denom());
        }
        for (_, c) in &self.terms {
            let v = c.rational_part() * Rational::from_integer(den.clone());
            num = num.gcd(v.numer());
        }
        let mut factor = Rational::new(den, num);
        if self.terms[0].1.rational_part().is_negative() {
            factor = -factor;
        }
        self.scale_rational(&factor)
    }
}

macro_rules! poly_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial arithmetic across contexts")
            }
        }
        impl std::ops::$tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_op!(Add, add, try_add);
poly_op!(Sub, sub, try_sub);
poly_op!(Mul, mul, try_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.with_terms(self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Writes one term with a rational coefficient `r` (sign handled by caller),
/// an optional √m factor and a monomial.
fn write_term(out: &mut String, r: &Rational, sqrt_sym: Option<&str>, m: &Monomial, names: &[String]) {
    let mut factors: Vec<String> = Vec::new();
    if !r.is_one() || (sqrt_sym.is_none() && m.is_one()) {
        factors.push(r.to_string());
    }
    if let Some(s) = sqrt_sym {
        factors.push(s.to_string());
    }
    for (i, e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(names[i].clone()),
            e => factors.push(format!("{}^{}", names[i], e)),
        }
    }
    out.push_str(&factors.join("*"));
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sym = self.field.sqrt_symbol();
        let mut out = String::new();
        let mut first = true;
        for (m, c) in &self.terms {
            for (part, s) in [(c.rational_part(), None), (c.sqrt_part(), Some(sym))] {
                if part.is_zero() {
                    continue;
                }
                let neg = part.is_negative();
                match (first, neg) {
                    (true, true) => out.push('-'),
                    (true, false) => {}
                    (false, true) => out.push_str(" - "),
                    (false, false) => out.push_str(" + "),
                }
                write_term(&mut out, &part.abs(), s, m, self.ctx.names());
                first = false;
            }
        }
        f.write_str(&out)
    }
}

/// A polynomial map `source → target`, one component per target variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    source: Context,
    target: Context,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(source: &Context, target: &Context, components: Vec<Polynomial>) -> Result<Self, PolyError> {
        if components.len() != target.len() {
            return Err(PolyError::MapArity { expected: target.len(), found: components.len() });
        }
        for c in &components {
            same_context(c.context(), source)?;
        }
        Ok(PolyMap { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(ctx: &Context, field: FieldSpec) -> Self {
        PolyMap {
            source: ctx.clone(),
            target: ctx.clone(),
            components: (0..ctx.len()).map(|i| Polynomial::var(ctx, field, i)).collect(),
        }
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Applies conjugation to every component.
    pub fn conjugate(&self) -> PolyMap {
        PolyMap {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(Polynomial::conjugate).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &PolyMap) -> Result<PolyMap, PolyError> {
        same_context(&self.source, &inner.target)?;
        let components = self.components.iter().map(|c| c.compose(inner)).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { source: inner.source.clone(), target: self.target.clone(), components })
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Vec<FieldElement> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Context {
        VariableContext::indexed("x", 2)
    }

    fn g() -> FieldSpec {
        FieldSpec::gaussian()
    }

    fn i_el() -> FieldElement {
        FieldElement::sqrt_m(g()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let c = ctx2();
        let x1 = Polynomial::var(&c, g(), 0);
        let one = Polynomial::one(&c, g());
        let p = &(&x1 + &one) * &(&x1 - &one);
        assert_eq!(p.to_string(), "x1^2 - 1");
        assert_eq!(&p + &Polynomial::zero(&c, g()), p);
    }

    #[test]
    fn gaussian_norm_form() {
        let c = ctx2();
        let x1 = Polynomial::var(&c, g(), 0);
        let x2 = Polynomial::var(&c, g(), 1);
        let a = &x1 + &x2.scale(&i_el());
        let b = &x1 - &x2.scale(&i_el());
        assert_eq!((&a * &b).to_string(), "x1^2 + x2^2");
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Polynomial::var(&ctx2(), g(), 0);
        let b = Polynomial::var(&VariableContext::indexed("y", 2), g(), 0);
        assert!(matches!(a.try_add(&b), Err(PolyError::ContextMismatch(_, _))));
    }

    #[test]
    fn traces() {
        let c = ctx2();
        let x1 = Polynomial::var(&c, g(), 0);
        let ix1 = x1.scale(&i_el());
        assert!(ix1.trace().is_zero());
        let sq = &x1 * &x1;
        assert_eq!(sq.trace().to_string(), "2*x1^2");
        let one_plus_i = FieldElement::new(Rational::from_integer(1.into()), Rational::from_integer(1.into()), g());
        assert_eq!(sq.scale(&one_plus_i).trace().to_string(), "2*x1^2");
        let (t0, t1) = ix1.trace_pair().unwrap();
        assert!(t0.is_zero());
        assert_eq!(t1.to_string(), "-2*x1");
        let (t0, t1) = x1.trace_pair().unwrap();
        assert_eq!(t0.to_string(), "2*x1");
        assert!(t1.is_zero());
        let q = Polynomial::var(&c, FieldSpec::Rationals, 0);
        assert!(q.trace_pair().is_err());
    }

    #[test]
    fn composition() {
        let c = ctx2();
        let x1 = Polynomial::var(&c, g(), 0);
        let x2 = Polynomial::var(&c, g(), 1);
        let swap = PolyMap::new(&c, &c, vec![x2.clone(), x1.clone()]).unwrap();
        let p = &x1 * &x2;
        assert_eq!(p.compose(&swap).unwrap(), p);
        assert_eq!(p.compose(&PolyMap::identity(&c, g())).unwrap(), p);
        let q = &x1.pow(2) + &x2;
        assert_eq!(q.compose(&swap).unwrap().to_string(), "x2^2 + x1");
    }

    #[test]
    fn orders() {
        let a = Monomial::new(vec![1, 0, 2]);
        let b = Monomial::new(vec![0, 3, 0]);
        assert_eq!(MonomialOrder::Lex.compare(&a, &b), Ordering::Greater);
        // same degree; last variable exponent larger in a → a smaller
        assert_eq!(MonomialOrder::GrevLex.compare(&a, &b), Ordering::Less);
        assert_eq!(MonomialOrder::BlockElimination(1).compare(&a, &b), Ordering::Greater);
        let c = Monomial::new(vec![0, 5, 5]);
        assert_eq!(MonomialOrder::BlockElimination(1).compare(&a, &c), Ordering::Greater);
    }

    #[test]
    fn normalization() {
        let c = ctx2();
        let q = FieldSpec::Rationals;
        let x1 = Polynomial::var(&c, q, 0);
        let p = x1.scale_rational(&Rational::new((-3).into(), 4.into()))
            + Polynomial::constant(&c, FieldElement::from_rational(Rational::new(3.into(), 2.into()), q));
        assert_eq!(p.normalized().to_string(), "x1 - 2");
    }

    #[test]
    fn printing_sqrt_terms() {
        let c = ctx2();
        let x1 = Polynomial::var(&c, g(), 0);
        assert_eq!(x1.scale(&-i_el()).to_string(), "-i*x1");
        let p = &x1.pow(2) - &x1.scale(&i_el());
        assert_eq!(p.to_string(), "x1^2 - i*x1");
        let f = FieldSpec::quadratic(-2).unwrap();
        let s = Polynomial::constant(
            &c,
            FieldElement::new(Rational::new(1.into(), 2.into()), Rational::from_integer(3.into()), f),
        );
        assert_eq!(s.to_string(), "1/2 + 3*s");
    }
}
