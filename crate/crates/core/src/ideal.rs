//! Gröbner bases over ℚ and ℚ(√m).
//!
//! Buchberger's algorithm with the Gebauer–Möller installation of the
//! product and chain criteria. Pairs are selected by smallest total degree
//! of their lcm, ties broken by index pair, so the run is deterministic.
//! The returned basis is reduced and sorted by descending leading monomial.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::numbers::{FieldElement, FieldSpec};
use crate::poly::{Context, Monomial, MonomialOrder, PolyError, Polynomial, Term, VariableContext};

pub const DEFAULT_MAX_PAIRS: u64 = 2_000_000;
pub const DEFAULT_MAX_COEFFICIENT_BITS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("resource limit exceeded: {what} (limit {limit}) after {pairs} S-pairs")]
    ResourceLimit { what: &'static str, limit: u64, pairs: u64 },
    #[error("cannot eliminate {k} of {n} variables")]
    BadElimination { k: usize, n: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Caps on the work a single Gröbner computation may do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: u64,
    pub max_coefficient_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: DEFAULT_MAX_PAIRS, max_coefficient_bits: DEFAULT_MAX_COEFFICIENT_BITS }
    }
}

impl Budget {
    pub fn with_pairs(max_pairs: u64) -> Self {
        Budget { max_pairs, ..Budget::default() }
    }
}

/// Result of a Gröbner computation together with the work it took.
#[derive(Debug, Clone)]
pub struct GroebnerRun {
    pub basis: Vec<Polynomial>,
    pub pairs_processed: u64,
}

// ---------------------------------------------------------------------------
// term-list kernels, all lists sorted descending under the active order

fn coefficient_bits(c: &FieldElement) -> u64 {
    let a = c.rational_part();
    let b = c.sqrt_part();
    a.numer().bits().max(a.denom().bits()).max(b.numer().bits()).max(b.denom().bits())
}

/// `a − c·x^shift·b`.
fn sub_scaled(a: &[Term], b: &[Term], c: &FieldElement, shift: &Monomial, order: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|(m, bc)| (m.mul(shift), bc)).peekable();
    while i < a.len() {
        let Some((bm, _)) = bi.peek() else { break };
        match order.compare(&a[i].0, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (bm, bc) = bi.next().unwrap();
                out.push((bm, -&(c * bc)));
            }
            Ordering::Equal => {
                let (bm, bc) = bi.next().unwrap();
                let v = &a[i].1 - &(c * bc);
                if !v.is_zero() {
                    out.push((bm, v));
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(bi.map(|(bm, bc)| (bm, -&(c * bc))));
    out
}

fn make_monic(terms: &mut [Term]) {
    if let Some((_, lc)) = terms.first() {
        if lc.is_one() {
            return;
        }
        let inv = lc.inv().expect("nonzero leading coefficient");
        for (_, c) in terms.iter_mut() {
            *c = &*c * &inv;
        }
    }
}

struct Reducer {
    order: MonomialOrder,
    budget: Budget,
    pairs: u64,
}

impl Reducer {
    /// Full reduction of `p` modulo the monic divisors.
    fn reduce(&self, mut p: Vec<Term>, divisors: &[&[Term]]) -> Result<Vec<Term>, IdealError> {
        let mut rem: Vec<Term> = Vec::new();
        while !p.is_empty() {
            let found = divisors.iter().find(|d| d[0].0.divides(&p[0].0));
            match found {
                Some(d) => {
                    let shift = d[0].0.quotient_of(&p[0].0);
                    let c = p[0].1.clone();
                    p = sub_scaled(&p[1..], &d[1..], &c, &shift, &self.order);
                    if let Some(bits) = p.iter().map(|(_, c)| coefficient_bits(c)).max() {
                        if bits > self.budget.max_coefficient_bits {
                            return Err(IdealError::ResourceLimit {
                                what: "coefficient size in bits",
                                limit: self.budget.max_coefficient_bits,
                                pairs: self.pairs,
                            });
                        }
                    }
                }
                None => {
                    // move the leading term to the remainder
                    let mut it = std::mem::take(&mut p).into_iter();
                    rem.push(it.next().unwrap());
                    p = it.collect();
                }
            }
        }
        Ok(rem)
    }
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn s_polynomial(f: &[Term], g: &[Term], lcm: &Monomial, order: &MonomialOrder) -> Vec<Term> {
    let sf = f[0].0.quotient_of(lcm);
    let sg = g[0].0.quotient_of(lcm);
    let one = FieldElement::one(f[0].1.spec());
    let fs: Vec<Term> = f[1..].iter().map(|(m, c)| (m.mul(&sf), c.clone())).collect();
    sub_scaled(&fs, &g[1..], &one, &sg, order)
}

/// Buchberger completion over term lists. Inputs need not be monic.
fn buchberger(
    inputs: Vec<Vec<Term>>,
    order: MonomialOrder,
    budget: Budget,
) -> Result<(Vec<Vec<Term>>, u64), IdealError> {
    let mut reducer = Reducer { order, budget, pairs: 0 };
    let mut polys: Vec<Vec<Term>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // inputs enter through the same update as reduced S-polynomials
    let mut queue: Vec<Vec<Term>> = inputs.into_iter().filter(|p| !p.is_empty()).collect();
    queue.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));
    let mut queue = queue.into_iter();

    loop {
        let h = if let Some(next) = queue.next() {
            let divs: Vec<&[Term]> =
                polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p.as_slice()).collect();
            let mut r = reducer.reduce(next, &divs)?;
            make_monic(&mut r);
            r
        } else {
            // select by smallest lcm degree, then smallest index pair
            let Some(best) = pairs
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| (a.lcm.degree(), a.i, a.j).cmp(&(b.lcm.degree(), b.i, b.j)))
                .map(|(k, _)| k)
            else {
                break;
            };
            let pair = pairs.swap_remove(best);
            reducer.pairs += 1;
            if reducer.pairs > budget.max_pairs {
                return Err(IdealError::ResourceLimit {
                    what: "S-pairs processed",
                    limit: budget.max_pairs,
                    pairs: reducer.pairs,
                });
            }
            let s = s_polynomial(&polys[pair.i], &polys[pair.j], &pair.lcm, &order);
            let divs: Vec<&[Term]> =
                polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p.as_slice()).collect();
            let mut r = reducer.reduce(s, &divs)?;
            make_monic(&mut r);
            r
        };
        if h.is_empty() {
            continue;
        }
        if h[0].0.is_one() {
            return Ok((vec![h], reducer.pairs));
        }
        let hi = polys.len();
        let hlm = h[0].0.clone();
        polys.push(h);
        active.push(true);
        update(&polys, &mut active, &mut pairs, hi, &hlm);
    }

    let basis: Vec<Vec<Term>> = polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    Ok((interreduce(basis, &reducer)?, reducer.pairs))
}

/// Gebauer–Möller update for a new element `h`.
fn update(polys: &[Vec<Term>], active: &mut [bool], pairs: &mut Vec<Pair>, h: usize, hlm: &Monomial) {
    let lm = |k: usize| &polys[k][0].0;
    let candidates: Vec<Pair> =
        (0..h).filter(|&g| active[g]).map(|g| Pair { i: g, j: h, lcm: lm(g).lcm(hlm) }).collect();

    // chain criterion among the new pairs: drop pairs whose lcm is a proper
    // multiple of another new lcm
    let minimal: Vec<&Pair> =
        candidates.iter().filter(|c| !candidates.iter().any(|o| o.lcm != c.lcm && o.lcm.divides(&c.lcm))).collect();
    // one pair per lcm; a coprime pair in the group kills the whole group
    let mut new_pairs: Vec<Pair> = Vec::new();
    let mut seen: Vec<&Monomial> = Vec::new();
    for c in &minimal {
        if seen.contains(&&c.lcm) {
            continue;
        }
        seen.push(&c.lcm);
        let group_coprime = minimal.iter().any(|o| o.lcm == c.lcm && lm(o.i).is_coprime(hlm));
        if !group_coprime {
            new_pairs.push((*c).clone());
        }
    }

    // chain criterion on old pairs
    pairs.retain(|p| !(hlm.divides(&p.lcm) && lm(p.i).lcm(hlm) != p.lcm && lm(p.j).lcm(hlm) != p.lcm));
    pairs.extend(new_pairs);

    for (g, a) in active.iter_mut().enumerate().take(h) {
        if *a && hlm.divides(lm(g)) {
            *a = false;
        }
    }
}

fn interreduce(mut basis: Vec<Vec<Term>>, reducer: &Reducer) -> Result<Vec<Vec<Term>>, IdealError> {
    let order = reducer.order;
    // minimal basis
    basis.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));
    let mut minimal: Vec<Vec<Term>> = Vec::new();
    for p in basis {
        if !minimal.iter().any(|q| q[0].0.divides(&p[0].0)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&[Term]> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.as_slice()).collect();
        let tail = reducer.reduce(minimal[k][1..].to_vec(), &others)?;
        let mut p = Vec::with_capacity(tail.len() + 1);
        p.push(minimal[k][0].clone());
        p.extend(tail);
        make_monic(&mut p);
        out.push(p);
    }
    out.sort_by(|a, b| order.compare(&b[0].0, &a[0].0));
    Ok(out)
}

fn check_contexts(ctx: &Context, field: FieldSpec, p: &Polynomial) -> Result<(), IdealError> {
    if p.context() != ctx {
        return Err(PolyError::ContextMismatch(ctx.names().join(","), p.context().names().join(",")).into());
    }
    if p.field() != field {
        return Err(PolyError::Number(crate::numbers::NumberError::FieldMismatch(field, p.field())).into());
    }
    Ok(())
}

/// Remainder of `p` on division by `basis` (first divisor wins).
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Result<Polynomial, IdealError> {
    for b in basis {
        check_contexts(p.context(), p.field(), b)?;
    }
    let divisors: Vec<Vec<Term>> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let mut t = b.sorted_terms(order);
            make_monic(&mut t);
            t
        })
        .collect();
    let refs: Vec<&[Term]> = divisors.iter().map(|d| d.as_slice()).collect();
    let reducer =
        Reducer { order: *order, budget: Budget { max_pairs: u64::MAX, max_coefficient_bits: u64::MAX }, pairs: 0 };
    let rem = reducer.reduce(p.sorted_terms(order), &refs)?;
    Ok(Polynomial::from_sorted(p.context(), p.field(), rem, order))
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
pub fn groebner_basis(
    generators: &[Polynomial],
    order: &MonomialOrder,
    budget: Budget,
) -> Result<GroebnerRun, IdealError> {
    let Some(first) = generators.first() else {
        return Ok(GroebnerRun { basis: vec![], pairs_processed: 0 });
    };
    let (ctx, field) = (first.context().clone(), first.field());
    for g in generators {
        check_contexts(&ctx, field, g)?;
    }
    let inputs = generators.iter().map(|g| g.sorted_terms(order)).collect();
    let (basis, pairs) = buchberger(inputs, *order, budget)?;
    Ok(GroebnerRun {
        basis: basis.into_iter().map(|t| Polynomial::from_sorted(&ctx, field, t, order)).collect(),
        pairs_processed: pairs,
    })
}

/// An ideal given by generators, with reduced bases cached per order.
#[derive(Debug)]
pub struct Ideal {
    ctx: Context,
    field: FieldSpec,
    generators: Vec<Polynomial>,
    budget: Budget,
    cache: Mutex<HashMap<MonomialOrder, GroebnerRun>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ctx: self.ctx.clone(),
            field: self.field,
            generators: self.generators.clone(),
            budget: self.budget,
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ctx: &Context, field: FieldSpec, generators: Vec<Polynomial>) -> Result<Self, IdealError> {
        for g in &generators {
            check_contexts(ctx, field, g)?;
        }
        Ok(Ideal {
            ctx: ctx.clone(),
            field,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            budget: Budget::default(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self.cache.lock().unwrap().clear();
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn groebner_run(&self, order: &MonomialOrder) -> Result<GroebnerRun, IdealError> {
        if let Some(run) = self.cache.lock().unwrap().get(order) {
            return Ok(run.clone());
        }
        let run = groebner_basis(&self.generators, order, self.budget)?;
        self.cache.lock().unwrap().insert(*order, run.clone());
        Ok(run)
    }

    pub fn groebner(&self, order: &MonomialOrder) -> Result<Vec<Polynomial>, IdealError> {
        Ok(self.groebner_run(order)?.basis)
    }

    pub fn contains(&self, p: &Polynomial, order: &MonomialOrder) -> Result<bool, IdealError> {
        check_contexts(&self.ctx, self.field, p)?;
        let gb = self.groebner(order)?;
        Ok(normal_form(p, &gb, order)?.is_zero())
    }

    pub fn equals(&self, other: &Ideal, order: &MonomialOrder) -> Result<bool, IdealError> {
        if self.ctx != other.ctx || self.field != other.field {
            return Ok(false);
        }
        Ok(self.groebner(order)? == other.groebner(order)?)
    }

    /// True iff the ideal is the whole ring (the variety is empty over ℂ).
    pub fn is_trivial(&self) -> Result<bool, IdealError> {
        let gb = self.groebner(&MonomialOrder::GrevLex)?;
        Ok(gb.len() == 1 && gb[0].is_constant())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        let mut gens = self.generators.clone();
        for g in &other.generators {
            check_contexts(&self.ctx, self.field, g)?;
            gens.push(g.clone());
        }
        Ok(Ideal::new(&self.ctx, self.field, gens)?.with_budget(self.budget))
    }

    /// Conjugates every generator's coefficients.
    pub fn conjugate(&self) -> Ideal {
        Ideal {
            ctx: self.ctx.clone(),
            field: self.field,
            generators: self.generators.iter().map(Polynomial::conjugate).collect(),
            budget: self.budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Intersection with the polynomial ring in the last `n − k` variables.
    pub fn eliminate(&self, k: usize) -> Result<Ideal, IdealError> {
        let n = self.ctx.len();
        if k == 0 || k >= n {
            return Err(IdealError::BadElimination { k, n });
        }
        let order = MonomialOrder::BlockElimination(k);
        let run = self.groebner_run(&order)?;
        let kept_ctx = VariableContext::new(self.ctx.names()[k..].iter().cloned())?;
        let mapping: Vec<usize> = (0..n).map(|i| i.saturating_sub(k)).collect();
        let kept: Vec<Polynomial> = run
            .basis
            .iter()
            .filter(|p| p.support().iter().all(|&v| v >= k))
            .map(|p| p.embed(&kept_ctx, &mapping))
            .collect();
        let out = Ideal::new(&kept_ctx, self.field, kept.clone())?.with_budget(self.budget);
        // the surviving elements are already the reduced basis under grevlex
        out.cache.lock().unwrap().insert(
            MonomialOrder::GrevLex,
            GroebnerRun { basis: sort_desc(kept, &MonomialOrder::GrevLex), pairs_processed: run.pairs_processed },
        );
        Ok(out)
    }

    /// Rabinowitsch test: `p ∈ √I` iff `1 ∈ I + ⟨1 − y·p⟩`.
    pub fn contains_radical(&self, p: &Polynomial) -> Result<bool, IdealError> {
        check_contexts(&self.ctx, self.field, p)?;
        if p.is_zero() {
            return Ok(true);
        }
        let mut y = String::from("y");
        while self.ctx.contains(&y) {
            y.push('_');
        }
        let mut names: Vec<String> = self.ctx.names().to_vec();
        names.push(y);
        let ext = VariableContext::new(names)?;
        let mapping: Vec<usize> = (0..self.ctx.len()).collect();
        let mut gens: Vec<Polynomial> = self.generators.iter().map(|g| g.embed(&ext, &mapping)).collect();
        let yv = Polynomial::var(&ext, self.field, self.ctx.len());
        let one = Polynomial::one(&ext, self.field);
        gens.push(&one - &(&yv * &p.embed(&ext, &mapping)));
        Ideal::new(&ext, self.field, gens)?.with_budget(self.budget).is_trivial()
    }
}

fn sort_desc(mut v: Vec<Polynomial>, order: &MonomialOrder) -> Vec<Polynomial> {
    v.sort_by(|a, b| {
        let la = &a.leading_term(order).unwrap().0;
        let lb = &b.leading_term(order).unwrap().0;
        order.compare(lb, la)
    });
    v
}

/// Every S-polynomial of `basis` reduces to zero against it.
pub fn satisfies_buchberger_criterion(basis: &[Polynomial], order: &MonomialOrder) -> Result<bool, IdealError> {
    let lists: Vec<Vec<Term>> = basis
        .iter()
        .map(|b| {
            let mut t = b.sorted_terms(order);
            make_monic(&mut t);
            t
        })
        .collect();
    let Some(first) = basis.first() else { return Ok(true) };
    for i in 0..lists.len() {
        for j in i + 1..lists.len() {
            let lcm = lists[i][0].0.lcm(&lists[j][0].0);
            let s = s_polynomial(&lists[i], &lists[j], &lcm, order);
            let s = Polynomial::from_sorted(first.context(), first.field(), s, order);
            if !normal_form(&s, basis, order)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff `basis` is reduced: monic leading terms and no term divisible
/// by another element's leading monomial.
pub fn is_reduced(basis: &[Polynomial], order: &MonomialOrder) -> bool {
    let lts: Vec<&Term> = basis.iter().filter_map(|b| b.leading_term(order)).collect();
    if lts.len() != basis.len() || lts.iter().any(|(_, c)| !c.is_one()) {
        return false;
    }
    basis.iter().enumerate().all(|(i, b)| {
        b.terms().iter().all(|(m, _)| lts.iter().enumerate().all(|(j, (lm, _))| j == i || !lm.divides(m)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn p(s: &str, ctx: &Context, f: FieldSpec) -> Polynomial {
        parse_poly(s, ctx, f).unwrap()
    }

    fn ideal(gens: &[&str], names: &[&str], f: FieldSpec) -> Ideal {
        let ctx = VariableContext::new(names.iter().copied()).unwrap();
        Ideal::new(&ctx, f, gens.iter().map(|g| p(g, &ctx, f)).collect()).unwrap()
    }

    fn strs(v: &[Polynomial]) -> Vec<String> {
        v.iter().map(|p| p.to_string()).collect()
    }

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn division() {
        let ctx = VariableContext::indexed("x", 2);
        let lex = MonomialOrder::Lex;
        let basis = [p("x1", &ctx, Q), p("x2", &ctx, Q)];
        assert!(normal_form(&p("x1^2 + x2", &ctx, Q), &basis, &lex).unwrap().is_zero());
        let r = normal_form(&p("x1 + 1", &ctx, Q), &[p("x1^2", &ctx, Q)], &lex).unwrap();
        assert_eq!(r.to_string(), "x1 + 1");
        let r = normal_form(&p("x1^2*x2", &ctx, Q), &[p("x1^2 - x2", &ctx, Q)], &lex).unwrap();
        assert_eq!(r.to_string(), "x2^2");
    }

    #[test]
    fn small_bases() {
        let i = ideal(&["x1", "x2"], &["x1", "x2"], Q);
        assert_eq!(strs(&i.groebner(&MonomialOrder::GrevLex).unwrap()), ["x1", "x2"]);
        let i = ideal(&["x1^2 - x2", "x1"], &["x1", "x2"], Q);
        assert_eq!(strs(&i.groebner(&MonomialOrder::Lex).unwrap()), ["x1", "x2"]);
    }

    #[test]
    fn membership_and_equality() {
        let i = ideal(&["x1", "x2"], &["x1", "x2"], Q);
        let g = MonomialOrder::GrevLex;
        assert!(i.contains(&p("x1^2 + x2", i.context(), Q), &g).unwrap());
        assert!(!i.contains(&p("x1 + 1", i.context(), Q), &g).unwrap());
        let a = ideal(&["x1"], &["x1"], Q);
        let b = ideal(&["2*x1"], &["x1"], Q);
        let c = ideal(&["x1^2"], &["x1"], Q);
        assert!(a.equals(&b, &g).unwrap());
        assert!(!a.equals(&c, &g).unwrap());
    }

    #[test]
    fn triviality() {
        assert!(ideal(&["x1", "x1 - 1"], &["x1"], Q).is_trivial().unwrap());
        assert!(!ideal(&["x1"], &["x1"], Q).is_trivial().unwrap());
    }

    #[test]
    fn elimination() {
        let i = ideal(&["y - x^2", "x - 2"], &["x", "y"], Q);
        let e = i.eliminate(1).unwrap();
        assert_eq!(strs(e.generators()), ["y - 4"]);
        let e = ideal(&["x"], &["x", "y"], Q).eliminate(1).unwrap();
        assert!(e.is_zero_ideal());
        let i = ideal(&["y - x^2", "z - x^3"], &["x", "y", "z"], Q);
        let e = i.eliminate(1).unwrap();
        let target = p("y^3 - z^2", e.context(), Q);
        assert!(e.contains(&target, &MonomialOrder::GrevLex).unwrap());
        assert!(ideal(&["x"], &["x", "y"], Q).eliminate(2).is_err());
    }

    #[test]
    fn radical_membership() {
        let i = ideal(&["x1^2"], &["x1", "x2"], Q);
        assert!(i.contains_radical(&p("x1", i.context(), Q)).unwrap());
        assert!(!i.contains_radical(&p("x1 + 1", i.context(), Q)).unwrap());
        let i = ideal(&["x1"], &["x1", "x2"], Q);
        assert!(i.contains_radical(&p("x1*x2", i.context(), Q)).unwrap());
    }

    #[test]
    fn sums() {
        let a = ideal(&["x1"], &["x1", "x2"], Q);
        let b = ideal(&["x2"], &["x1", "x2"], Q);
        let s = a.sum(&b).unwrap();
        assert_eq!(strs(s.generators()), ["x1", "x2"]);
        assert!(a.sum(&a).unwrap().equals(&a, &MonomialOrder::GrevLex).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let i = ideal(&["x^2 - y", "x*y - 1", "y^3 - x"], &["x", "y"], Q).with_budget(Budget::with_pairs(1));
        assert!(matches!(i.groebner(&MonomialOrder::GrevLex), Err(IdealError::ResourceLimit { .. })));
    }

    #[test]
    fn humbert_basis_is_idempotent() {
        let f = FieldSpec::gaussian();
        let i = ideal(&["1 + x1^2 + x2^2", "-1 + x1^2 + x3^2", "i + x1^2 + x4^2"], &["x1", "x2", "x3", "x4"], f);
        let g = MonomialOrder::GrevLex;
        let gb = i.groebner(&g).unwrap();
        assert!(is_reduced(&gb, &g));
        assert!(satisfies_buchberger_criterion(&gb, &g).unwrap());
        let again = Ideal::new(i.context(), f, gb.clone()).unwrap().groebner(&g).unwrap();
        assert_eq!(gb, again);
        // the conjugate third generator is not in the ideal
        assert!(!i.contains(&p("-i + x1^2 + x4^2", i.context(), f), &g).unwrap());
        assert!(!i.equals(&i.conjugate(), &g).unwrap());
    }
}
