//! Descent of an affine variety with an antiholomorphic involution to the
//! real subfield of its coefficient field.
//!
//! The involution is given through its holomorphic companion `F`, i.e. the
//! symmetry is `x ↦ conj(F(x))` and `F` maps `X` onto the conjugate variety.
//! When `X` is not self-conjugate the model `Z` is the image of
//! `R(x) = Ψ(x, F(x))`, where `Ψ` collects the swap-invariant polynomials
//!
//! ```text
//! t_k        = x_k + z_k          (1 ≤ k ≤ n)
//! t_{n+k}    = x_k·z_k            (1 ≤ k ≤ n)
//! t_{2n+k−1} = x_1·x_k + z_1·z_k  (2 ≤ k ≤ n)
//! ```
//!
//! `Z` is computed by elimination and rewritten over the fixed field with
//! traces; every step is re-checked and reported as a [`Certificate`].

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ideal::{Budget, Ideal, IdealError};
use crate::numbers::{FieldElement, FieldSpec, Rational};
use crate::poly::{Context, MonomialOrder, PolyError, PolyMap, Polynomial, VariableContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("symmetry check failed: {condition} (generator {index}): witness {witness}")]
    InvalidSymmetry { condition: SymmetryCondition, index: usize, witness: String },
    #[error(
        "ideal is not invariant under conjugation: generator {index} `{witness}` has a conjugate outside the ideal"
    )]
    NotInvariant { index: usize, witness: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

impl From<PolyError> for DescentError {
    fn from(e: PolyError) -> Self {
        DescentError::Ideal(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryCondition {
    /// `P_j^σ ∘ F ∈ I(X)`: F maps X into its conjugate.
    MapsIntoConjugate,
    /// `(F^σ ∘ F)_k − x_k ∈ I(X)`: the symmetry is an involution.
    Involution,
}

impl std::fmt::Display for SymmetryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymmetryCondition::MapsIntoConjugate => f.write_str("F does not map X into its conjugate"),
            SymmetryCondition::Involution => f.write_str("conj(F)∘F is not the identity on X"),
        }
    }
}

/// Whether invariance and membership are decided for ideals or for their
/// radicals (i.e. for varieties).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InvarianceMode {
    #[default]
    Ideal,
    Radical,
}

impl InvarianceMode {
    pub fn name(&self) -> &'static str {
        match self {
            InvarianceMode::Ideal => "ideal",
            InvarianceMode::Radical => "radical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentOptions {
    /// Order used for membership and equality checks.
    pub order: MonomialOrder,
    pub verify: bool,
    pub invariance: InvarianceMode,
    pub budget: Budget,
    /// Random ambient points used by the separation check when `W` is empty.
    pub separation_samples: usize,
    pub seed: u64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            order: MonomialOrder::GrevLex,
            verify: true,
            invariance: InvarianceMode::Ideal,
            budget: Budget::default(),
            separation_samples: 25,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DescentProblem {
    field: FieldSpec,
    ctx: Context,
    generators: Vec<Polynomial>,
    symmetry: PolyMap,
    pub options: DescentOptions,
}

impl DescentProblem {
    pub fn new(
        field: FieldSpec,
        generators: Vec<Polynomial>,
        symmetry: PolyMap,
        options: DescentOptions,
    ) -> Result<Self, DescentError> {
        let ctx = symmetry.source().clone();
        if symmetry.target() != &ctx {
            return Err(DescentError::Precondition("symmetry must map the ambient space to itself".into()));
        }
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            return Err(DescentError::Precondition("ideal must have at least one generator".into()));
        }
        for g in generators.iter().chain(symmetry.components()) {
            if g.context() != &ctx || g.field() != field {
                return Err(DescentError::Precondition("generators and symmetry must share context and field".into()));
            }
        }
        Ok(DescentProblem { field, ctx, generators, symmetry, options })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn dimension(&self) -> usize {
        self.ctx.len()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn symmetry(&self) -> &PolyMap {
        &self.symmetry
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ctx, self.field, self.generators.clone())
            .expect("validated generators")
            .with_budget(self.options.budget)
    }

    /// The conjugate problem: generators and `F` conjugated.
    pub fn conjugate(&self) -> DescentProblem {
        DescentProblem {
            field: self.field,
            ctx: self.ctx.clone(),
            generators: self.generators.iter().map(Polynomial::conjugate).collect(),
            symmetry: self.symmetry.conjugate(),
            options: self.options.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Certificate {
    fn pass(name: &str) -> Self {
        Certificate { name: name.into(), pass: true, witness: None }
    }

    fn fail(name: &str, witness: impl Into<String>) -> Self {
        Certificate { name: name.into(), pass: false, witness: Some(witness.into()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    SelfConjugate,
    GenericDescent,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::SelfConjugate => "SelfConjugate",
            Branch::GenericDescent => "GenericDescent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WStatus {
    Empty,
    NonEmpty(Vec<Polynomial>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Isomorphism,
    Birational,
}

#[derive(Debug, Clone)]
pub struct DescentReport {
    pub branch: Branch,
    pub field: FieldSpec,
    pub invariance: InvarianceMode,
    /// Variables of `Z`: the input variables for the self-conjugate branch,
    /// `t1, …, t(3n−1)` otherwise.
    pub z_context: Context,
    pub z_generators: Vec<Polynomial>,
    pub r: Option<PolyMap>,
    pub w_status: Option<WStatus>,
    pub map_kind: MapKind,
    pub certificates: Vec<Certificate>,
    /// S-pairs processed per stage.
    pub work: Vec<(String, u64)>,
    /// Wall-clock milliseconds per stage.
    pub timings: Vec<(String, u128)>,
}

impl DescentReport {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    pub fn z_ideal(&self) -> Ideal {
        Ideal::new(&self.z_context, self.field, self.z_generators.clone()).expect("report generators share a context")
    }
}

// ---------------------------------------------------------------------------
// naming helpers

/// `prefix1..prefixN` for the first candidate prefix that avoids `taken`.
fn fresh_context(candidates: &[&str], count: usize, taken: &[&Context]) -> Context {
    let mut suffix = String::new();
    loop {
        for p in candidates {
            let prefix = format!("{p}{suffix}");
            let ctx = VariableContext::indexed(&prefix, count);
            if ctx.names().iter().all(|n| taken.iter().all(|t| !t.contains(n))) {
                return ctx;
            }
        }
        suffix.push('_');
    }
}

fn concat(a: &Context, b: &Context) -> Context {
    VariableContext::new(a.names().iter().chain(b.names()).cloned()).expect("disjoint contexts")
}

fn z_context_for(problem: &DescentProblem) -> Context {
    fresh_context(&["z", "u"], problem.dimension(), &[problem.context()])
}

fn t_context_for(problem: &DescentProblem) -> Context {
    let n = problem.dimension();
    fresh_context(&["t", "w"], 3 * n - 1, &[problem.context()])
}

// ---------------------------------------------------------------------------
// membership helpers honoring the invariance mode

fn member(ideal: &Ideal, p: &Polynomial, mode: InvarianceMode, order: &MonomialOrder) -> Result<bool, IdealError> {
    match mode {
        InvarianceMode::Ideal => ideal.contains(p, order),
        InvarianceMode::Radical => ideal.contains_radical(p),
    }
}

/// Index of the first generator of `gens` outside `ideal`.
fn first_outside(
    gens: &[Polynomial],
    ideal: &Ideal,
    mode: InvarianceMode,
    order: &MonomialOrder,
) -> Result<Option<usize>, IdealError> {
    for (k, g) in gens.iter().enumerate() {
        if !member(ideal, g, mode, order)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn same_ideal(a: &Ideal, b: &Ideal, mode: InvarianceMode, order: &MonomialOrder) -> Result<bool, IdealError> {
    match mode {
        InvarianceMode::Ideal => a.equals(b, order),
        InvarianceMode::Radical => Ok(first_outside(a.generators(), b, mode, order)?.is_none()
            && first_outside(b.generators(), a, mode, order)?.is_none()),
    }
}

// ---------------------------------------------------------------------------
// operations

/// Checks that `F` maps `X` into `X^σ` and that `F^σ ∘ F` is the identity
/// on `X`. Returns the two passing certificates.
pub fn validate_symmetry(problem: &DescentProblem) -> Result<Vec<Certificate>, DescentError> {
    let ideal = problem.ideal();
    let (mode, order) = (problem.options.invariance, problem.options.order);
    let f = problem.symmetry();
    for (j, p) in problem.generators().iter().enumerate() {
        let pulled = p.conjugate().compose(f)?;
        if !member(&ideal, &pulled, mode, &order)? {
            return Err(DescentError::InvalidSymmetry {
                condition: SymmetryCondition::MapsIntoConjugate,
                index: j + 1,
                witness: pulled.to_string(),
            });
        }
    }
    let twice = f.conjugate().after(f)?;
    for (k, c) in twice.components().iter().enumerate() {
        let diff = c - &Polynomial::var(problem.context(), problem.field(), k);
        if !member(&ideal, &diff, mode, &order)? {
            return Err(DescentError::InvalidSymmetry {
                condition: SymmetryCondition::Involution,
                index: k + 1,
                witness: diff.to_string(),
            });
        }
    }
    Ok(vec![Certificate::pass("symmetry_maps_into_conjugate"), Certificate::pass("cocycle_involution")])
}

/// True iff `X^σ = X` under the problem's invariance mode.
pub fn is_self_conjugate(problem: &DescentProblem) -> Result<bool, DescentError> {
    if !problem.field().is_quadratic() {
        return Ok(true);
    }
    let ideal = problem.ideal();
    Ok(same_ideal(&ideal, &ideal.conjugate(), problem.options.invariance, &problem.options.order)?)
}

/// Generators over the fixed field: `Tr(P)` and `Tr(√m·P)` for each input
/// generator, zeros dropped, content-normalized, duplicates removed.
pub fn trace_generators(gens: &[Polynomial]) -> Result<Vec<Polynomial>, DescentError> {
    let mut out: Vec<Polynomial> = Vec::new();
    for g in gens {
        let parts = if g.field().is_quadratic() {
            let (a, b) = g.trace_pair()?;
            vec![a, b]
        } else {
            vec![g.clone()]
        };
        for p in parts {
            let p = p.normalized();
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Replaces only the generators that are not already over the fixed field.
fn symmetrize_generators(gens: &[Polynomial]) -> Result<Vec<Polynomial>, DescentError> {
    let mut out: Vec<Polynomial> = Vec::new();
    for g in gens {
        let parts =
            if g.has_fixed_coefficients() { vec![g.normalized()] } else { trace_generators(std::slice::from_ref(g))? };
        for p in parts {
            if !p.is_zero() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// The self-conjugate shortcut: if `X^σ = X`, `X` is cut out by the traces
/// of its generators and no auxiliary construction is needed. Returns
/// `None` when the generic pipeline must run.
pub fn self_conjugate_branch(problem: &DescentProblem) -> Result<Option<DescentReport>, DescentError> {
    let start = Instant::now();
    if !is_self_conjugate(problem)? {
        return Ok(None);
    }
    let z = trace_generators(problem.generators())?;
    let mut report = DescentReport {
        branch: Branch::SelfConjugate,
        field: problem.field(),
        invariance: problem.options.invariance,
        z_context: problem.context().clone(),
        z_generators: z,
        r: Some(PolyMap::identity(problem.context(), problem.field())),
        w_status: None,
        map_kind: MapKind::Isomorphism,
        certificates: Vec::new(),
        work: Vec::new(),
        timings: vec![("self_conjugate".into(), start.elapsed().as_millis())],
    };
    if problem.options.verify {
        let ideal = problem.ideal();
        let traced = report.z_ideal().with_budget(problem.options.budget);
        let (mode, order) = (problem.options.invariance, problem.options.order);
        report.certificates.push(match first_outside(&report.z_generators, &ideal, mode, &order)? {
            None => Certificate::pass("traces_in_ideal"),
            Some(k) => Certificate::fail("traces_in_ideal", report.z_generators[k].to_string()),
        });
        report.certificates.push(match first_outside(ideal.generators(), &traced, mode, &order)? {
            None => Certificate::pass("generators_in_trace_ideal"),
            Some(k) => Certificate::fail("generators_in_trace_ideal", ideal.generators()[k].to_string()),
        });
        report.certificates.push(coefficients_certificate(&report.z_generators));
    }
    Ok(Some(report))
}

/// Ideal of the graph `{(x, F(x)) : x ∈ X}` in variables `x, z`.
pub fn graph_ideal(problem: &DescentProblem) -> Result<Ideal, DescentError> {
    let n = problem.dimension();
    let xz = concat(problem.context(), &z_context_for(problem));
    let into_x: Vec<usize> = (0..n).collect();
    let mut gens = Vec::with_capacity(n + problem.generators().len());
    for (j, fj) in problem.symmetry().components().iter().enumerate() {
        let zj = Polynomial::var(&xz, problem.field(), n + j);
        gens.push(&zj - &fj.embed(&xz, &into_x));
    }
    gens.extend(problem.generators().iter().map(|p| p.embed(&xz, &into_x)));
    Ok(Ideal::new(&xz, problem.field(), gens)?.with_budget(problem.options.budget))
}

/// The swap-invariant polynomials `t_1, …, t_{3n−1}`.
#[derive(Debug, Clone)]
pub struct InvariantMap {
    n: usize,
    map: PolyMap,
}

impl InvariantMap {
    /// Over ℚ in variables `x1..xn, z1..zn`, target `t1..t(3n−1)`.
    pub fn new(n: usize) -> Result<Self, DescentError> {
        if n < 1 {
            return Err(DescentError::Precondition("ambient dimension must be at least 1".into()));
        }
        let xz = concat(&VariableContext::indexed("x", n), &VariableContext::indexed("z", n));
        Ok(Self::over(&xz, &VariableContext::indexed("t", 3 * n - 1), FieldSpec::Rationals))
    }

    /// `xz` holds `x` in its first half and `z` in its second.
    pub fn over(xz: &Context, t: &Context, field: FieldSpec) -> Self {
        let n = xz.len() / 2;
        let v = |k: usize| Polynomial::var(xz, field, k);
        let mut comps = Vec::with_capacity(3 * n - 1);
        for k in 0..n {
            comps.push(&v(k) + &v(n + k));
        }
        for k in 0..n {
            comps.push(&v(k) * &v(n + k));
        }
        for k in 1..n {
            comps.push(&(&v(0) * &v(k)) + &(&v(n) * &v(n + k)));
        }
        InvariantMap { n, map: PolyMap::new(xz, t, comps).expect("3n−1 components") }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Polynomial] {
        self.map.components()
    }

    pub fn as_map(&self) -> &PolyMap {
        &self.map
    }

    /// `Ψ` evaluated at `(x, z)`.
    pub fn evaluate(&self, x: &[FieldElement], z: &[FieldElement]) -> Vec<FieldElement> {
        let point: Vec<FieldElement> = x.iter().chain(z).cloned().collect();
        let field = x.first().map(|e| e.spec()).unwrap_or(FieldSpec::Rationals);
        self.map.components().iter().map(|c| c.with_field(field).evaluate(&point)).collect()
    }
}

/// The swap `(x, z) ↦ (z, x)` on a context holding `x` then `z`.
pub fn swap_map(xz: &Context, field: FieldSpec) -> PolyMap {
    let n = xz.len() / 2;
    let comps = (0..2 * n).map(|k| Polynomial::var(xz, field, (k + n) % (2 * n))).collect();
    PolyMap::new(xz, xz, comps).expect("2n components")
}

/// `R = Ψ ∘ (x ↦ (x, F(x)))`, with components over `K` in the input
/// variables.
pub fn descent_map(problem: &DescentProblem) -> Result<PolyMap, DescentError> {
    let n = problem.dimension();
    let x = problem.context();
    let xz = concat(x, &z_context_for(problem));
    let psi = InvariantMap::over(&xz, &t_context_for(problem), problem.field());
    let mut graph = Vec::with_capacity(2 * n);
    graph.extend((0..n).map(|k| Polynomial::var(x, problem.field(), k)));
    graph.extend(problem.symmetry().components().iter().cloned());
    let phi = PolyMap::new(x, &xz, graph)?;
    Ok(psi.as_map().after(&phi)?)
}

/// Elimination ideal of `⟨t_k − R_k(x)⟩ + I(X)` with respect to `x`, i.e.
/// the ideal of the Zariski closure of `R(X)`. Returns the ideal and the
/// number of S-pairs processed.
fn image_ideal(problem: &DescentProblem, r: &PolyMap) -> Result<(Ideal, u64), DescentError> {
    let n = problem.dimension();
    let x = problem.context();
    let t = r.target().clone();
    let xt = concat(x, &t);
    let into_x: Vec<usize> = (0..n).collect();
    let mut gens = Vec::with_capacity(t.len() + problem.generators().len());
    for (k, rk) in r.components().iter().enumerate() {
        gens.push(&Polynomial::var(&xt, problem.field(), n + k) - &rk.embed(&xt, &into_x));
    }
    gens.extend(problem.generators().iter().map(|p| p.embed(&xt, &into_x)));
    let big = Ideal::new(&xt, problem.field(), gens)?.with_budget(problem.options.budget);
    let pairs = big.groebner_run(&MonomialOrder::BlockElimination(n))?.pairs_processed;
    Ok((big.eliminate(n)?, pairs))
}

/// `Z`: the closure of `R(X)` in the `t`-space, before trace cleanup.
/// Refused for self-conjugate problems.
pub fn compute_z(problem: &DescentProblem) -> Result<Ideal, DescentError> {
    if is_self_conjugate(problem)? {
        return Err(DescentError::Precondition(
            "X is self-conjugate; the trace branch applies and no auxiliary model is built".into(),
        ));
    }
    let r = descent_map(problem)?;
    Ok(image_ideal(problem, &r)?.0)
}

/// Rewrites an ideal stable under conjugation with generators over the
/// fixed field. Fails with a witness when the ideal is not stable.
pub fn symmetrize_z(z: &Ideal, mode: InvarianceMode, order: &MonomialOrder) -> Result<Ideal, DescentError> {
    let conj = z.conjugate();
    if let Some(k) = first_outside(conj.generators(), z, mode, order)? {
        return Err(DescentError::NotInvariant { index: k + 1, witness: z.generators()[k].to_string() });
    }
    let gens = symmetrize_generators(z.generators())?;
    let out = Ideal::new(z.context(), z.field(), gens)?.with_budget(z.budget());
    // both generating sets must describe the same ideal
    if let Some(k) = first_outside(out.generators(), z, mode, order)? {
        return Err(DescentError::NotInvariant { index: k + 1, witness: out.generators()[k].to_string() });
    }
    if let Some(k) = first_outside(z.generators(), &out, mode, order)? {
        return Err(DescentError::NotInvariant { index: k + 1, witness: z.generators()[k].to_string() });
    }
    Ok(out)
}

/// `W* = Φ(X) ∩ swap(Φ(X))` as an ideal in `x, z`.
pub fn exceptional_preimage(problem: &DescentProblem) -> Result<Ideal, DescentError> {
    let graph = graph_ideal(problem)?;
    let swap = swap_map(graph.context(), problem.field());
    let swapped = graph.generators().iter().map(|g| g.compose(&swap)).collect::<Result<Vec<_>, _>>()?;
    let other = Ideal::new(graph.context(), problem.field(), swapped)?;
    Ok(graph.sum(&other)?)
}

/// The locus `W ⊂ Z` of points with two preimages on `Φ(X)`.
pub fn compute_w(problem: &DescentProblem) -> Result<WStatus, DescentError> {
    Ok(compute_w_with_work(problem)?.0)
}

fn compute_w_with_work(problem: &DescentProblem) -> Result<(WStatus, u64), DescentError> {
    let wstar = exceptional_preimage(problem)?;
    let mut pairs = wstar.groebner_run(&MonomialOrder::GrevLex)?.pairs_processed;
    if wstar.is_trivial()? {
        return Ok((WStatus::Empty, pairs));
    }
    let xz = wstar.context().clone();
    let t = t_context_for(problem);
    let psi = InvariantMap::over(&xz, &t, problem.field());
    let xzt = concat(&xz, &t);
    let into: Vec<usize> = (0..xz.len()).collect();
    let mut gens: Vec<Polynomial> = wstar.generators().iter().map(|g| g.embed(&xzt, &into)).collect();
    for (k, c) in psi.components().iter().enumerate() {
        gens.push(&Polynomial::var(&xzt, problem.field(), xz.len() + k) - &c.embed(&xzt, &into));
    }
    let big = Ideal::new(&xzt, problem.field(), gens)?.with_budget(problem.options.budget);
    pairs += big.groebner_run(&MonomialOrder::BlockElimination(xz.len()))?.pairs_processed;
    let w = big.eliminate(xz.len())?;
    let w = symmetrize_z(&w, problem.options.invariance, &problem.options.order)?;
    Ok((WStatus::NonEmpty(sorted_generators(w.generators())), pairs))
}

fn sorted_generators(gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut v = gens.to_vec();
    let order = MonomialOrder::GrevLex;
    v.sort_by(|a, b| {
        let la = &a.leading_term(&order).expect("nonzero").0;
        let lb = &b.leading_term(&order).expect("nonzero").0;
        order.compare(lb, la).then_with(|| a.to_string().cmp(&b.to_string()))
    });
    v
}

fn coefficients_certificate(gens: &[Polynomial]) -> Certificate {
    match gens.iter().find(|g| !g.has_fixed_coefficients()) {
        None => Certificate::pass("coefficients_fixed"),
        Some(g) => Certificate::fail("coefficients_fixed", g.to_string()),
    }
}

/// Result of inverting `Ψ` at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    /// Candidate `(x, z)` pairs.
    Points(Vec<(Vec<FieldElement>, Vec<FieldElement>)>),
    /// The quadratic for coordinate `k` (1-based) has no root in `K`.
    NotRational { coordinate: usize },
}

/// Preimages of `t` under `Ψ` in the ambient space `K^n × K^n`.
///
/// Each pair `{x_k, z_k}` is the root set of `λ² − t_k·λ + t_{n+k}`; roots
/// are assigned to `x` or `z` so that the cross terms match.
pub fn fiber(t: &[FieldElement], n: usize) -> Result<Fiber, DescentError> {
    if n < 1 || t.len() != 3 * n - 1 {
        return Err(DescentError::Precondition(format!("expected {} coordinates for n = {n}", 3 * n - 1)));
    }
    let spec = t[0].spec();
    let four = FieldElement::from_int(4, spec);
    let half = FieldElement::from_rational(Rational::new(1.into(), 2.into()), spec);
    let mut roots = Vec::with_capacity(n);
    for k in 0..n {
        let disc = &(&t[k] * &t[k]) - &(&four * &t[n + k]);
        let Some(d) = disc.sqrt() else {
            return Ok(Fiber::NotRational { coordinate: k + 1 });
        };
        roots.push((&half * &(&t[k] + &d), &half * &(&t[k] - &d)));
    }
    let mut points: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = Vec::new();
    let (r1, s1) = &roots[0];
    for (x1, z1) in [(r1, s1), (s1, r1)] {
        // per coordinate, the assignments consistent with the cross term
        let mut choices: Vec<Vec<(FieldElement, FieldElement)>> = Vec::with_capacity(n);
        choices.push(vec![(x1.clone(), z1.clone())]);
        for k in 1..n {
            let (r, s) = &roots[k];
            let target = &t[2 * n + k - 1];
            let mut ok = Vec::new();
            for (xk, zk) in [(r, s), (s, r)] {
                if &(&(x1 * xk) + &(z1 * zk)) == target
                    && !ok.iter().any(|(a, _): &(FieldElement, FieldElement)| a == xk)
                {
                    ok.push((xk.clone(), zk.clone()));
                }
            }
            if ok.is_empty() {
                choices.clear();
                break;
            }
            choices.push(ok);
        }
        if choices.is_empty() {
            continue;
        }
        let mut partial: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = vec![(Vec::new(), Vec::new())];
        for opts in &choices {
            let mut next = Vec::with_capacity(partial.len() * opts.len());
            for (xs, zs) in &partial {
                for (xk, zk) in opts {
                    let mut xs = xs.clone();
                    let mut zs = zs.clone();
                    xs.push(xk.clone());
                    zs.push(zk.clone());
                    next.push((xs, zs));
                }
            }
            partial = next;
        }
        for p in partial {
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }
    Ok(Fiber::Points(points))
}

/// [`fiber`] restricted to points of `Φ(X)`: `z = F(x)` and `x ∈ X`.
pub fn fiber_on(problem: &DescentProblem, t: &[FieldElement]) -> Result<Fiber, DescentError> {
    match fiber(t, problem.dimension())? {
        Fiber::Points(pts) => Ok(Fiber::Points(
            pts.into_iter()
                .filter(|(x, z)| {
                    problem.generators().iter().all(|p| p.evaluate(x).is_zero()) && &problem.symmetry().evaluate(x) == z
                })
                .collect(),
        )),
        other => Ok(other),
    }
}

/// Random ambient points `p` with `fiber(Ψ(p)) = {p, swap(p)}` checked.
/// Returns the first counterexample.
pub fn separation_sample(
    n: usize,
    samples: usize,
    seed: u64,
    field: FieldSpec,
) -> Result<Option<String>, DescentError> {
    let psi = InvariantMap::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut coord = || {
            let num: i64 = rng.gen_range(-40..=40);
            let den: i64 = rng.gen_range(1..=9);
            FieldElement::from_rational(Rational::new(num.into(), den.into()), field)
        };
        let x: Vec<FieldElement> = (0..n).map(|_| coord()).collect();
        let z: Vec<FieldElement> = (0..n).map(|_| coord()).collect();
        let t = psi.evaluate(&x, &z);
        let fib = fiber(&t, n)?;
        let ok = match &fib {
            Fiber::Points(pts) => {
                let expected = [(x.clone(), z.clone()), (z.clone(), x.clone())];
                pts.iter().all(|p| expected.contains(p)) && expected.iter().all(|e| pts.contains(e))
            }
            Fiber::NotRational { .. } => false,
        };
        if !ok {
            return Ok(Some(format!("x = {x:?}, z = {z:?}")));
        }
    }
    Ok(None)
}

/// Eliminates every variable of `z` outside `keep`. `keep` equal to all
/// variables returns `z` unchanged. The result is the plain elimination
/// ideal; birationality of the projection is not certified.
pub fn project_z(z: &Ideal, keep: &[String]) -> Result<Ideal, DescentError> {
    if keep.is_empty() {
        return Err(DescentError::Precondition("keep-set must not be empty".into()));
    }
    let ctx = z.context();
    for k in keep {
        if !ctx.contains(k) {
            return Err(PolyError::UnknownVariable(k.clone()).into());
        }
    }
    let dropped: Vec<&String> = ctx.names().iter().filter(|n| !keep.contains(n)).collect();
    if dropped.is_empty() {
        return Ok(z.clone());
    }
    let kept: Vec<&String> = ctx.names().iter().filter(|n| keep.contains(n)).collect();
    let reordered = VariableContext::new(dropped.iter().chain(&kept).map(|s| s.to_string()))?;
    let gens = z.generators().iter().map(|g| g.embed_by_name(&reordered)).collect::<Result<Vec<_>, _>>()?;
    let big = Ideal::new(&reordered, z.field(), gens)?.with_budget(z.budget());
    let e = big.eliminate(dropped.len())?;
    let gens: Vec<Polynomial> = e.generators().iter().map(Polynomial::normalized).collect();
    Ok(Ideal::new(e.context(), z.field(), gens)?.with_budget(z.budget()))
}

/// Re-checks a generic descent report: `Z` stable under conjugation,
/// `R(X) ⊆ Z` by pullback membership, coefficients fixed and the `W`
/// status consistent.
pub fn verify_descent(problem: &DescentProblem, report: &DescentReport) -> Result<Vec<Certificate>, DescentError> {
    let (mode, order) = (problem.options.invariance, problem.options.order);
    let mut certs = Vec::new();
    let z = report.z_ideal().with_budget(problem.options.budget);

    certs.push(if same_ideal(&z, &z.conjugate(), mode, &order)? {
        Certificate::pass("z_conjugation_invariant")
    } else {
        Certificate::fail("z_conjugation_invariant", "Z differs from its conjugate")
    });

    let ideal = problem.ideal();
    let pullback = match &report.r {
        Some(r) if report.branch == Branch::GenericDescent => {
            let mut cert = Certificate::pass("pullback_membership");
            for g in &report.z_generators {
                let pulled = g.embed_by_name(r.target())?.compose(r)?;
                if !member(&ideal, &pulled, mode, &order)? {
                    cert = Certificate::fail("pullback_membership", format!("{g} pulls back to {pulled}"));
                    break;
                }
            }
            cert
        }
        _ => Certificate::fail("pullback_membership", "report carries no descent map"),
    };
    certs.push(pullback);
    certs.push(coefficients_certificate(&report.z_generators));

    let w_cert = match &report.w_status {
        Some(WStatus::Empty) => {
            if !exceptional_preimage(problem)?.is_trivial()? {
                Certificate::fail("w_consistency", "W reported empty but W* is nonempty")
            } else {
                match separation_sample(
                    problem.dimension(),
                    problem.options.separation_samples,
                    problem.options.seed,
                    problem.field(),
                )? {
                    None => Certificate::pass("w_consistency"),
                    Some(w) => Certificate::fail("w_consistency", format!("separation fails at {w}")),
                }
            }
        }
        Some(WStatus::NonEmpty(w)) => {
            let w_ideal =
                Ideal::new(&report.z_context, problem.field(), w.clone())?.with_budget(problem.options.budget);
            match first_outside(&report.z_generators, &w_ideal, InvarianceMode::Radical, &order)? {
                None => Certificate::pass("w_consistency"),
                Some(k) => {
                    Certificate::fail("w_consistency", format!("W not contained in Z: {}", report.z_generators[k]))
                }
            }
        }
        None => Certificate::fail("w_consistency", "W was not computed"),
    };
    certs.push(w_cert);
    Ok(certs)
}

/// Runs the whole construction: validation, branch selection, `Z`, trace
/// cleanup, `W` and verification.
pub fn descend(problem: &DescentProblem) -> Result<DescentReport, DescentError> {
    let mut timings = Vec::new();
    let clock = Instant::now();
    let mut certs = validate_symmetry(problem)?;
    timings.push(("validate".to_string(), clock.elapsed().as_millis()));

    if let Some(mut report) = self_conjugate_branch(problem)? {
        certs.append(&mut report.certificates);
        report.certificates = certs;
        timings.append(&mut report.timings);
        report.timings = timings;
        return Ok(report);
    }

    let clock = Instant::now();
    let r = descent_map(problem)?;
    let (z_raw, z_pairs) = image_ideal(problem, &r)?;
    timings.push(("compute_z".to_string(), clock.elapsed().as_millis()));

    let clock = Instant::now();
    let z = symmetrize_z(&z_raw, problem.options.invariance, &problem.options.order)?;
    timings.push(("symmetrize_z".to_string(), clock.elapsed().as_millis()));

    let clock = Instant::now();
    let (w, w_pairs) = compute_w_with_work(problem)?;
    timings.push(("compute_w".to_string(), clock.elapsed().as_millis()));

    let map_kind = if w == WStatus::Empty { MapKind::Isomorphism } else { MapKind::Birational };
    let mut report = DescentReport {
        branch: Branch::GenericDescent,
        field: problem.field(),
        invariance: problem.options.invariance,
        z_context: z.context().clone(),
        z_generators: sorted_generators(z.generators()),
        r: Some(r),
        w_status: Some(w),
        map_kind,
        certificates: Vec::new(),
        work: vec![("compute_z".into(), z_pairs), ("compute_w".into(), w_pairs)],
        timings: Vec::new(),
    };
    if problem.options.verify {
        let clock = Instant::now();
        certs.extend(verify_descent(problem, &report)?);
        timings.push(("verify".to_string(), clock.elapsed().as_millis()));
    }
    report.certificates = certs;
    report.timings = timings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_poly, parse_problem};

    const TOY: &str = "field Q(i)\nvars x\nideal:\n  x^2 - i\nsymmetry:\n  i*x\n";

    fn strs(v: &[Polynomial]) -> Vec<String> {
        v.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn invariant_map_shapes() {
        let psi = InvariantMap::new(2).unwrap();
        assert_eq!(strs(psi.components()), ["x1 + z1", "x2 + z2", "x1*z1", "x2*z2", "x1*x2 + z1*z2"]);
        assert_eq!(strs(InvariantMap::new(1).unwrap().components()), ["x1 + z1", "x1*z1"]);
        assert_eq!(InvariantMap::new(4).unwrap().components().len(), 11);
        assert!(InvariantMap::new(0).is_err());
    }

    #[test]
    fn toy_graph_and_map() {
        let p = parse_problem(TOY).unwrap();
        assert_eq!(strs(graph_ideal(&p).unwrap().generators()), ["-i*x + z1", "x^2 - i"]);
        let r = descent_map(&p).unwrap();
        assert_eq!(strs(r.components()), ["x + i*x", "i*x^2"]);
    }

    #[test]
    fn toy_z_and_w() {
        let p = parse_problem(TOY).unwrap();
        let z = compute_z(&p).unwrap();
        let z = symmetrize_z(&z, InvarianceMode::Ideal, &MonomialOrder::GrevLex).unwrap();
        let expected = Ideal::new(
            z.context(),
            z.field(),
            vec![
                parse_poly("t2 + 1", z.context(), z.field()).unwrap(),
                parse_poly("t1^2 + 2", z.context(), z.field()).unwrap(),
            ],
        )
        .unwrap();
        assert!(z.equals(&expected, &MonomialOrder::GrevLex).unwrap());
        assert_eq!(compute_w(&p).unwrap(), WStatus::Empty);
    }

    #[test]
    fn self_conjugate_cases() {
        let p = parse_problem("field Q(i)\nvars x1\nideal:\n  x1^2 + 1\nsymmetry:\n  x1\n").unwrap();
        let r = self_conjugate_branch(&p).unwrap().unwrap();
        assert_eq!(strs(&r.z_generators), ["x1^2 + 1"]);
        let p = parse_problem("field Q(i)\nvars x1\nideal:\n  i*x1\nsymmetry:\n  x1\n").unwrap();
        let r = self_conjugate_branch(&p).unwrap().unwrap();
        assert_eq!(strs(&r.z_generators), ["x1"]);
        let p = parse_problem(TOY).unwrap();
        assert!(self_conjugate_branch(&p).unwrap().is_none());
        let p = parse_problem("field Q(i)\nvars x1\nideal:\n  x1\nsymmetry:\n  x1\n").unwrap();
        assert!(matches!(compute_z(&p), Err(DescentError::Precondition(_))));
    }

    #[test]
    fn symmetry_validation() {
        let p = parse_problem("field Q\nvars x y\nideal:\n  x^2 + y^2 - 1\nsymmetry:\n  x\n  y\n").unwrap();
        assert_eq!(validate_symmetry(&p).unwrap().len(), 2);
        let p = parse_problem("field Q(i)\nvars x\nideal:\n  x^2 - i\nsymmetry:\n  x\n").unwrap();
        let e = validate_symmetry(&p).unwrap_err();
        assert!(matches!(
            e,
            DescentError::InvalidSymmetry { condition: SymmetryCondition::MapsIntoConjugate, index: 1, .. }
        ));
        // maps X into itself but conj(F)∘F = (4x, y)
        let p = parse_problem("field Q(i)\nvars x y\nideal:\n  y\nsymmetry:\n  2*x\n  y\n").unwrap();
        let e = validate_symmetry(&p).unwrap_err();
        assert_eq!(
            e,
            DescentError::InvalidSymmetry { condition: SymmetryCondition::Involution, index: 1, witness: "3*x".into() }
        );
    }

    #[test]
    fn symmetrize_rejects_non_invariant() {
        let ctx = VariableContext::indexed("t", 2);
        let g = FieldSpec::gaussian();
        let z = Ideal::new(&ctx, g, vec![parse_poly("t1 - i", &ctx, g).unwrap()]).unwrap();
        assert!(matches!(
            symmetrize_z(&z, InvarianceMode::Ideal, &MonomialOrder::GrevLex),
            Err(DescentError::NotInvariant { .. })
        ));
        let z = Ideal::new(&ctx, g, vec![parse_poly("i*t1", &ctx, g).unwrap()]).unwrap();
        let s = symmetrize_z(&z, InvarianceMode::Ideal, &MonomialOrder::GrevLex).unwrap();
        assert_eq!(strs(s.generators()), ["t1"]);
        let z = Ideal::new(&ctx, g, vec![parse_poly("t2^2 - 2*t1 + 2", &ctx, g).unwrap()]).unwrap();
        let s = symmetrize_z(&z, InvarianceMode::Ideal, &MonomialOrder::GrevLex).unwrap();
        assert_eq!(s.generators(), z.generators());
    }

    #[test]
    fn fibers() {
        let q = |v: &[i64]| v.iter().map(|&k| FieldElement::from_int(k, FieldSpec::Rationals)).collect::<Vec<_>>();
        let Fiber::Points(pts) = fiber(&q(&[5, 6]), 1).unwrap() else { panic!() };
        assert_eq!(pts, vec![(q(&[3]), q(&[2])), (q(&[2]), q(&[3]))]);
        let Fiber::Points(pts) = fiber(&q(&[5, 5, 6, 4, 14]), 2).unwrap() else { panic!() };
        assert!(pts.contains(&(q(&[2, 1]), q(&[3, 4]))));
        assert_eq!(pts.len(), 2);
        assert_eq!(fiber(&q(&[0, 1]), 1).unwrap(), Fiber::NotRational { coordinate: 1 });
        // inconsistent cross term
        assert_eq!(fiber(&q(&[5, 5, 6, 4, 13]), 2).unwrap(), Fiber::Points(vec![]));
        assert!(fiber(&q(&[1, 2, 3]), 1).is_err());
    }

    #[test]
    fn projection() {
        let p = parse_problem(TOY).unwrap();
        let z = symmetrize_z(&compute_z(&p).unwrap(), InvarianceMode::Ideal, &MonomialOrder::GrevLex).unwrap();
        let y = project_z(&z, &["t1".to_string()]).unwrap();
        assert_eq!(strs(y.generators()), ["t1^2 + 2"]);
        let all = project_z(&z, &["t1".to_string(), "t2".to_string()]).unwrap();
        assert_eq!(all.generators(), z.generators());
        assert!(project_z(&z, &[]).is_err());
        assert!(project_z(&z, &["t9".to_string()]).is_err());
    }

    #[test]
    fn nonempty_w() {
        // X = {0, i}, F = −x: the point 0 is fixed, so W = {Ψ(0, 0)}
        let p = parse_problem("field Q(i)\nvars x\nideal:\n  x^2 - i*x\nsymmetry:\n  -x\n").unwrap();
        let report = descend(&p).unwrap();
        assert_eq!(report.branch, Branch::GenericDescent);
        assert_eq!(report.map_kind, MapKind::Birational);
        let Some(WStatus::NonEmpty(w)) = &report.w_status else { panic!("{:?}", report.w_status) };
        assert_eq!(strs(w), ["t1", "t2"]);
        assert!(report.all_pass(), "{:?}", report.certificates);
        assert_eq!(strs(&report.z_generators), ["t2^2 - t2", "t1"]);
    }
}
