//! Named algebraic laws, grouped into suites, checked on [`Instance`]s.
//!
//! Each law walks the objects of an instance it applies to (pairs of finite
//! positive measures, operators against test vectors, ...) and records one
//! check per comparison. A law that finds nothing to work on reports zero
//! checks, which is not a failure.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, MeasureDef};
use crate::integral::{
    integrate, integrate_difference, integrate_pos, integrate_pos_by_refinement, integrate_signed,
    monotone_convergence_check, triangle_check, SimpleFunction,
};
use crate::lattice::{ext_add, ext_inf, ext_scale, ext_sup, ExtElement, LatticeElement, LatticeNorm, NormKind};
use crate::measure::{
    measure_norm, partition_bounds, partition_formula, sup_family, sup_increasing_sequence, Extremum, PosMeasure,
    SetFunction, SignedMeasure,
};
use crate::operator::{modulus_oracle, nob_report, rk_inf, rk_sup, RegularOperator};
use crate::repr::{
    isomorphism_check, measure_to_operator, nob_dichotomy_check, operator_to_measure, psi_embedding_check,
    recover_on_open, regularity_transfer_check, RepresentingMeasure, GRID_BOUND,
};
use crate::scalar;
use crate::space::{FiniteSet, FiniteSpace, MeasurableSet, NatSet, Space, ENUMERATION_BOUND};
use crate::table::Atoms;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lattice,
    Measures,
    Integral,
    Operators,
    Repr,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Lattice, Suite::Measures, Suite::Integral, Suite::Operators, Suite::Repr];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Measures => "measures",
            Suite::Integral => "integral",
            Suite::Operators => "operators",
            Suite::Repr => "repr",
        }
    }

    /// `"all"` selects every suite and yields `None`.
    pub fn parse(name: &str) -> Result<Option<Suite>> {
        if name == "all" {
            return Ok(None);
        }
        Suite::ALL.into_iter().find(|s| s.name() == name).map(Some).ok_or_else(|| Error::UnknownName(name.into()))
    }
}

/// Check counts for one law, with the first violation or, failing that, the
/// first checked value as a witness.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
    pub sample: Option<String>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(witness());
            }
        } else if self.sample.is_none() {
            self.sample = Some(witness());
        }
    }

    fn error(&mut self, e: Error) {
        self.record(false, || format!("unexpected error: {e}"));
    }

    pub fn merge(&mut self, other: &Tally) {
        self.checks += other.checks;
        self.violations += other.violations;
        if self.first_violation.is_none() {
            self.first_violation.clone_from(&other.first_violation);
        }
        if self.sample.is_none() {
            self.sample.clone_from(&other.sample);
        }
    }
}

pub type CheckFn = fn(&Instance, &mut Tally) -> Result<()>;

pub struct Law {
    pub name: &'static str,
    pub suite: Suite,
    check: CheckFn,
}

impl Law {
    /// A law outside the registry, e.g. for exercising the fuzz shrinker.
    pub const fn custom(name: &'static str, suite: Suite, check: CheckFn) -> Self {
        Self { name, suite, check }
    }

    pub fn run(&self, inst: &Instance) -> Tally {
        let mut tally = Tally::default();
        if let Err(e) = (self.check)(inst, &mut tally) {
            tally.error(e);
        }
        tally
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub name: &'static str,
    pub suite: Suite,
    pub checks: u64,
    pub violations: u64,
    pub witness: Option<String>,
}

impl LawReport {
    pub fn from_tally(law: &Law, t: &Tally) -> Self {
        Self {
            name: law.name,
            suite: law.suite,
            checks: t.checks,
            violations: t.violations,
            witness: t.first_violation.clone().or_else(|| t.sample.clone()),
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawsReport {
    pub instances: usize,
    pub laws: Vec<LawReport>,
    pub pass: bool,
}

impl LawsReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.laws {
            let mark = if l.pass() { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{mark}] {:<32} checks {:>7}  violations {}", l.name, l.checks, l.violations));
            if let Some(w) = &l.witness {
                out.push_str(&format!("  witness: {w}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn laws(suite: Option<Suite>) -> Vec<&'static Law> {
    REGISTRY.iter().filter(|l| suite.is_none_or(|s| l.suite == s)).collect()
}

pub fn find(name: &str) -> Option<&'static Law> {
    REGISTRY.iter().find(|l| l.name == name)
}

/// Runs every selected law on every instance.
pub fn run_laws(instances: &[Instance], suite: Option<Suite>) -> LawsReport {
    let reports: Vec<LawReport> = laws(suite)
        .into_iter()
        .map(|law| {
            let mut total = Tally::default();
            for inst in instances {
                total.merge(&law.run(inst));
            }
            LawReport::from_tally(law, &total)
        })
        .collect();
    LawsReport { instances: instances.len(), pass: reports.iter().all(LawReport::pass), laws: reports }
}

macro_rules! law {
    ($name:literal, $suite:ident, $f:ident) => {
        Law { name: $name, suite: Suite::$suite, check: $f }
    };
}

static REGISTRY: &[Law] = &[
    law!("lattice.identities", Lattice, lattice_identities),
    law!("lattice.extended", Lattice, lattice_extended),
    law!("lattice.norm", Lattice, lattice_norm),
    law!("measures.modular_identity", Measures, modular_identity),
    law!("measures.oracle_equivalence", Measures, oracle_equivalence),
    law!("measures.lattice_laws", Measures, measure_lattice_laws),
    law!("measures.additivity", Measures, additivity),
    law!("measures.jordan", Measures, jordan),
    law!("measures.al_additivity", Measures, al_additivity),
    law!("measures.suprema", Measures, suprema),
    law!("measures.nat_truncation", Measures, nat_truncation),
    law!("integral.refinement", Integral, integral_refinement),
    law!("integral.indicator", Integral, integral_indicator),
    law!("integral.linearity", Integral, integral_linearity),
    law!("integral.signed", Integral, integral_signed),
    law!("integral.triangle", Integral, integral_triangle),
    law!("integral.monotone_convergence", Integral, integral_monotone),
    law!("operators.modulus_oracle", Operators, operator_modulus),
    law!("operators.lattice", Operators, operator_lattice),
    law!("operators.linearity", Operators, operator_linearity),
    law!("operators.t_t_bound", Operators, operator_t_t),
    law!("operators.rk_formula", Operators, operator_rk),
    law!("repr.isomorphism", Repr, repr_isomorphism),
    law!("repr.recovery", Repr, repr_recovery),
    law!("repr.psi_embedding", Repr, repr_psi),
    law!("repr.transfer", Repr, repr_transfer),
    law!("repr.nob_dichotomy", Repr, repr_dichotomy),
    law!("repr.nat_representation", Repr, repr_nat),
];

// ---------------------------------------------------------------- helpers

fn finite_space(inst: &Instance) -> Option<&FiniteSpace> {
    match &inst.space {
        Space::Finite(s) if s.len() <= ENUMERATION_BOUND => Some(s),
        _ => None,
    }
}

fn all_keys(inst: &Instance) -> BTreeSet<u64> {
    let mut keys = BTreeSet::new();
    for m in inst.measures.values() {
        match m {
            MeasureDef::Pos(p) => keys.extend(p.exceptional_keys()),
            MeasureDef::Signed(s) => keys.extend(s.exceptional_keys()),
        }
    }
    for t in inst.operators.values() {
        if let Atoms::Nat(c) = t.columns() {
            keys.extend(c.keys());
        }
    }
    for f in inst.functions.values() {
        if let Atoms::Nat(c) = f.atoms() {
            keys.extend(c.keys());
        }
    }
    keys
}

/// Every subset on small finite spaces; on ℕ a fixed family built from the
/// instance's exceptional points.
fn probe_sets(inst: &Instance) -> Vec<MeasurableSet> {
    match &inst.space {
        Space::Finite(s) if s.len() <= ENUMERATION_BOUND => {
            s.subsets_of(s.full()).expect("bounded").into_iter().map(Into::into).collect()
        }
        Space::Finite(s) => vec![FiniteSet::EMPTY.into(), s.full().into()],
        Space::Nat => {
            let keys = all_keys(inst);
            let half: Vec<u64> = keys.iter().copied().step_by(2).collect();
            let beyond = keys.last().map_or(0, |k| k + 1);
            let mut sets = vec![
                NatSet::empty(),
                NatSet::all(),
                NatSet::fin(keys.iter().copied()),
                NatSet::cofin(keys.iter().copied()),
                NatSet::fin(half.iter().copied()),
                NatSet::cofin(half.iter().copied()),
                NatSet::fin([beyond, beyond + 3]),
                NatSet::fin(0..6),
                NatSet::cofin(0..6),
            ];
            sets.dedup();
            sets.into_iter().map(Into::into).collect()
        }
    }
}

fn describe(inst: &Instance, set: &MeasurableSet) -> String {
    inst.space.describe(set)
}

fn finite_pos(inst: &Instance) -> Vec<(&String, &PosMeasure)> {
    inst.pos_measures().filter(|(_, m)| m.is_finite()).collect()
}

/// Ordered pairs of distinct positions first, then each item with itself.
fn pairs<T>(items: &[T]) -> impl Iterator<Item = (&T, &T)> {
    let n = items.len();
    let distinct = (0..n).flat_map(move |i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)));
    distinct.chain((0..n).map(|i| (i, i))).map(move |(i, j)| (&items[i], &items[j]))
}

/// Pairs `(i, j)` with `i ≤ j`, for checks symmetric in their arguments.
fn unordered_pairs<T>(items: &[T]) -> impl Iterator<Item = (&T, &T)> {
    (0..items.len()).flat_map(move |i| (i..items.len()).map(move |j| (&items[i], &items[j])))
}

fn lattice_elements(inst: &Instance) -> Vec<LatticeElement> {
    let mut out: Vec<LatticeElement> = Vec::new();
    for m in inst.measures.values() {
        match m {
            MeasureDef::Pos(p) => out.extend(p.atoms().stored().into_iter().filter_map(|e| e.finite().cloned())),
            MeasureDef::Signed(s) => out.extend(s.atoms().stored().into_iter().cloned()),
        }
    }
    for t in inst.operators.values() {
        out.extend(t.columns().stored().into_iter().cloned());
    }
    out.dedup();
    out.truncate(6);
    out
}

fn one_norm(inst: &Instance) -> LatticeNorm {
    match inst.norm.kind {
        NormKind::One => inst.norm.clone(),
        NormKind::Sup => LatticeNorm::ONE,
    }
}

fn fin(x: &LatticeElement) -> ExtElement {
    ExtElement::Finite(x.clone())
}

fn nonneg_functions(inst: &Instance) -> Vec<(String, SimpleFunction)> {
    let mut out = Vec::new();
    for (name, f) in &inst.functions {
        if f.is_nonneg() {
            out.push((name.clone(), f.clone()));
        } else {
            out.push((format!("{name}+"), f.pos_part()));
            out.push((format!("{name}-"), f.neg_part()));
            out.push((format!("|{name}|"), f.abs()));
        }
    }
    out.push(("1".into(), SimpleFunction::constant(&inst.space, scalar::one())));
    out
}

// ---------------------------------------------------------------- lattice

fn lattice_identities(inst: &Instance, t: &mut Tally) -> Result<()> {
    let xs = lattice_elements(inst);
    let zero = LatticeElement::zero(inst.dim);
    for a in &xs {
        let decomposed = a.pos_part().sub(&a.neg_part()) == *a
            && a.pos_part().add(&a.neg_part()) == a.abs()
            && a.pos_part().meet(&a.neg_part()) == zero;
        t.record(decomposed, || format!("x = {a}: x⁺ = {}, x⁻ = {}", a.pos_part(), a.neg_part()));
        for b in &xs {
            t.record(a.join(b) == b.join(a) && a.meet(b) == b.meet(a), || format!("commutativity at {a}, {b}"));
            t.record(a.meet(&a.join(b)) == *a && a.join(&a.meet(b)) == *a, || format!("absorption at {a}, {b}"));
            t.record(a.add(b) == a.join(b).add(&a.meet(b)), || format!("x + y = x∨y + x∧y at {a}, {b}"));
            t.record(a.meet(b).le(a) && a.le(&a.join(b)), || format!("x∧y ≤ x ≤ x∨y at {a}, {b}"));
            for c in &xs {
                t.record(a.join(b).join(c) == a.join(&b.join(c)), || format!("associativity at {a}, {b}, {c}"));
                t.record(a.meet(&b.join(c)) == a.meet(b).join(&a.meet(c)), || {
                    format!("distributivity at {a}, {b}, {c}")
                });
                t.record(a.add(c).join(&b.add(c)) == a.join(b).add(c), || format!("translation at {a}, {b}, {c}"));
            }
        }
    }
    Ok(())
}

fn lattice_extended(inst: &Instance, t: &mut Tally) -> Result<()> {
    let inf = ExtElement::Infinity;
    let zero = ExtElement::zero(inst.dim);
    t.record(ext_scale(&scalar::zero(), &inf, inst.dim)? == zero, || "0·∞ = 0".into());
    t.record(ext_scale(&scalar::ratio(1, 3), &inf, inst.dim)? == inf, || "r·∞ = ∞".into());
    t.record(ext_scale(&scalar::int(-1), &inf, inst.dim).is_err(), || "negative scalar rejected".into());
    for x in lattice_elements(inst) {
        let a = fin(&x.abs());
        t.record(ext_add(&a, &inf) == inf && ext_add(&inf, &a) == inf, || format!("{a} + ∞ = ∞"));
        t.record(ext_inf([&inf, &a])? == a && ext_sup([&a, &inf])? == inf, || format!("inf/sup with ∞ at {a}"));
        t.record(a.le(&inf) && !inf.le(&a), || format!("{a} ≤ ∞"));
        t.record(ext_add(&a, &zero) == a, || format!("{a} + 0 = {a}"));
    }
    Ok(())
}

fn lattice_norm(inst: &Instance, t: &mut Tally) -> Result<()> {
    let n = &inst.norm;
    let one = one_norm(inst);
    let xs = lattice_elements(inst);
    for a in &xs {
        t.record(n.norm(a) == n.norm(&a.abs()), || format!("‖x‖ = ‖|x|‖ at {a}"));
        for r in [scalar::int(-2), scalar::ratio(3, 2)] {
            t.record(n.norm(&a.scale(&r)) == num_traits::Signed::abs(&r) * n.norm(a), || {
                format!("homogeneity at {a}, r = {r}")
            });
        }
        for b in &xs {
            let dominating = a.abs().add(&b.abs());
            t.record(n.norm(a) <= n.norm(&dominating), || format!("solidity at {a} ≤ {dominating}"));
            t.record(n.norm(&a.add(b)) <= n.norm(a) + n.norm(b), || format!("triangle at {a}, {b}"));
            let (p, q) = (a.abs(), b.abs());
            t.record(one.norm(&p.add(&q)) == one.norm(&p) + one.norm(&q), || format!("AL additivity at {p}, {q}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- measures

fn modular_identity(inst: &Instance, t: &mut Tally) -> Result<()> {
    let ms = finite_pos(inst);
    for ((a, mu), (b, nu)) in pairs(&ms) {
        let lhs = mu.join(nu)?.add(&mu.meet(nu)?)?;
        let rhs = mu.add(nu)?;
        let total = lhs.total();
        t.record(lhs == rhs, || format!("{a}, {b}: (μ∨ν + μ∧ν)(X) = {total}, (μ+ν)(X) = {}", rhs.total()));
    }
    let signed = inst.signed_measures();
    for ((a, mu), (b, nu)) in pairs(&signed) {
        let lhs = mu.join(nu)?.add(&mu.meet(nu)?)?;
        t.record(lhs == mu.add(nu)?, || format!("{a}, {b} (signed): (μ∨ν + μ∧ν)(X) = {}", lhs.total()));
    }
    Ok(())
}

fn oracle_equivalence(inst: &Instance, t: &mut Tally) -> Result<()> {
    let sets = probe_sets(inst);
    let all: Vec<(&String, &PosMeasure)> = inst.pos_measures().collect();
    for ((a, mu), (b, nu)) in unordered_pairs(&all) {
        let join = mu.join(nu)?;
        let meet = if mu.is_finite() && nu.is_finite() { Some(mu.meet(nu)?) } else { None };
        for d in &sets {
            let (sup, inf) = match &meet {
                Some(_) => partition_bounds(*mu, *nu, d)?,
                None => (partition_formula(*mu, *nu, d, Extremum::Sup)?, ExtElement::Infinity),
            };
            let got = join.eval(d)?;
            t.record(got == sup, || format!("{a} ∨ {b} at {}: fast {got}, formula {sup}", describe(inst, d)));
            if let Some(meet) = &meet {
                let got = meet.eval(d)?;
                t.record(got == inf, || format!("{a} ∧ {b} at {}: fast {got}, formula {inf}", describe(inst, d)));
            }
        }
    }
    let signed = inst.signed_measures();
    for ((a, mu), (b, nu)) in unordered_pairs(&signed) {
        let (join, meet) = (mu.join(nu)?, mu.meet(nu)?);
        for d in &sets {
            let (sup, inf) = partition_bounds(mu, nu, d)?;
            let ok = fin(&join.eval(d)?) == sup && fin(&meet.eval(d)?) == inf;
            t.record(ok, || format!("signed {a}, {b} at {}", describe(inst, d)));
        }
    }
    Ok(())
}

fn measure_lattice_laws(inst: &Instance, t: &mut Tally) -> Result<()> {
    let ms = finite_pos(inst);
    for ((a, mu), (b, nu)) in pairs(&ms) {
        let (join, meet) = (mu.join(nu)?, mu.meet(nu)?);
        t.record(join == nu.join(mu)? && meet == nu.meet(mu)?, || format!("commutativity at {a}, {b}"));
        t.record(mu.meet(&join)? == **mu && mu.join(&meet)? == **mu, || format!("absorption at {a}, {b}"));
        t.record(meet.le(mu)? && mu.le(&join)?, || format!("μ∧ν ≤ μ ≤ μ∨ν at {a}, {b}"));
        for (c, sigma) in &ms {
            t.record(join.join(sigma)? == mu.join(&nu.join(sigma)?)?, || format!("∨ associativity at {a}, {b}, {c}"));
            t.record(meet.meet(sigma)? == mu.meet(&nu.meet(sigma)?)?, || format!("∧ associativity at {a}, {b}, {c}"));
            let shifted = mu.add(sigma)?.join(&nu.add(sigma)?)?;
            t.record(shifted == join.add(sigma)?, || format!("translation at {a}, {b}, {c}"));
        }
    }
    Ok(())
}

fn additivity(inst: &Instance, t: &mut Tally) -> Result<()> {
    let sets = probe_sets(inst);
    let union_inter = |x: &MeasurableSet, y: &MeasurableSet| match (x, y) {
        (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => (a.union(*b).into(), a.intersection(*b).into()),
        (MeasurableSet::Nat(a), MeasurableSet::Nat(b)) => (a.union(b).into(), a.intersection(b).into()),
        _ => unreachable!("probe sets share the space"),
    };
    let subset = |x: &MeasurableSet, y: &MeasurableSet| match (x, y) {
        (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => a.is_subset(*b),
        (MeasurableSet::Nat(a), MeasurableSet::Nat(b)) => a.is_subset(b),
        _ => false,
    };
    let zero = ExtElement::zero(inst.dim);
    for (name, m) in &inst.measures {
        t.record(m.eval(&inst.space.empty())? == zero, || format!("{name}(∅) = 0"));
        let mut cache: std::collections::HashMap<MeasurableSet, ExtElement> = std::collections::HashMap::new();
        let mut value = |s: &MeasurableSet| -> Result<ExtElement> {
            if let Some(v) = cache.get(s) {
                return Ok(v.clone());
            }
            let v = m.eval(s)?;
            cache.insert(s.clone(), v.clone());
            Ok(v)
        };
        for (i, x) in sets.iter().enumerate() {
            for y in &sets[i..] {
                let (u, n) = union_inter(x, y);
                let lhs = ext_add(&value(&u)?, &value(&n)?);
                let (vx, vy) = (value(x)?, value(y)?);
                let rhs = ext_add(&vx, &vy);
                t.record(lhs == rhs, || {
                    format!(
                        "{name}: μ(A∪B)+μ(A∩B) = {lhs}, μ(A)+μ(B) = {rhs} at {}, {}",
                        describe(inst, x),
                        describe(inst, y)
                    )
                });
                if matches!(m, MeasureDef::Pos(_)) && subset(x, y) {
                    t.record(vx.le(&vy), || format!("{name} monotone at {}", describe(inst, x)));
                }
            }
        }
    }
    Ok(())
}

fn jordan(inst: &Instance, t: &mut Tally) -> Result<()> {
    let sets = probe_sets(inst);
    for (name, mu) in inst.signed_measures() {
        let (plus, minus) = (mu.pos_part(), mu.neg_part());
        let zero = SignedMeasure::zero(&inst.space, inst.dim);
        t.record(plus.to_signed()?.sub(&minus.to_signed()?)? == mu, || format!("{name} = μ⁺ − μ⁻"));
        t.record(plus.add(&minus)? == mu.abs(), || format!("|{name}| = μ⁺ + μ⁻"));
        t.record(plus.meet(&minus)? == PosMeasure::zero(&inst.space, inst.dim), || format!("{name}: μ⁺ ∧ μ⁻ = 0"));
        t.record(mu.join(&zero)?.to_pos()? == plus, || format!("{name}: μ⁺ = μ ∨ 0"));
        let total = measure_norm(&inst.norm, &mu);
        for d in &sets {
            let v = mu.eval(d)?;
            t.record(inst.norm.norm(&v) <= total, || {
                format!("{name}: ‖μ(Δ)‖ = {} > ‖μ‖ = {total}", inst.norm.norm(&v))
            });
            let sup = partition_formula(&mu, &zero, d, Extremum::Sup)?;
            t.record(sup == plus.eval(d)?, || {
                format!(
                    "{name}: μ⁺(Δ) = {}, sup μ(Γ) = {sup} at {}",
                    plus.eval(d).map(|v| v.to_string()).unwrap_or_default(),
                    describe(inst, d)
                )
            });
        }
    }
    Ok(())
}

fn al_additivity(inst: &Instance, t: &mut Tally) -> Result<()> {
    let norm = one_norm(inst);
    let ms: Vec<(&String, SignedMeasure)> =
        finite_pos(inst).into_iter().map(|(n, m)| m.to_signed().map(|s| (n, s))).collect::<Result<_>>()?;
    for ((a, mu), (b, nu)) in pairs(&ms) {
        let lhs = measure_norm(&norm, mu) + measure_norm(&norm, nu);
        let rhs = measure_norm(&norm, &mu.add(nu)?);
        t.record(lhs == rhs, || format!("{a}, {b}: ‖μ‖+‖ν‖ = {lhs}, ‖μ+ν‖ = {rhs}"));
    }
    Ok(())
}

fn suprema(inst: &Instance, t: &mut Tally) -> Result<()> {
    let ms: Vec<PosMeasure> = inst.pos_measures().map(|(_, m)| m.clone()).collect();
    if ms.is_empty() {
        return Ok(());
    }
    let sup = sup_family(&ms)?;
    for (i, m) in ms.iter().enumerate() {
        t.record(m.le(&sup)?, || format!("member {i} total {} under supremum total {}", m.total(), sup.total()));
    }
    // Least: below every other upper bound we can name.
    let bound = ms.iter().skip(1).try_fold(ms[0].clone(), |acc, m| acc.add(m))?;
    t.record(sup.le(&bound)?, || format!("supremum total {} under the family sum {}", sup.total(), bound.total()));
    let mut seq = vec![ms[0].clone()];
    for m in &ms[1..] {
        let next = seq.last().expect("non-empty").join(m)?;
        seq.push(next);
    }
    let stable_from = seq.len() - 1;
    seq.push(seq[stable_from].clone());
    let limit = sup_increasing_sequence(&seq, stable_from, &probe_sets(inst))?;
    t.record(limit == sup, || {
        format!("increasing-sequence supremum total {}, family supremum total {}", limit.total(), sup.total())
    });
    Ok(())
}

/// Independent oracle for the ℕ partition formula: every `A ⊆ Δ ∩ [0, N)`
/// where `N` lies past all exceptional points, combined with a few choices
/// of `B ⊆ Δ ∖ [0, N)`. Returns the (sup, inf) pair.
pub fn truncation_oracle(mu: &PosMeasure, nu: &PosMeasure, delta: &NatSet, n: u64) -> Result<(ExtElement, ExtElement)> {
    let head: Vec<u64> = (0..n).filter(|k| delta.contains(*k)).collect();
    let rest = delta.difference(&NatSet::fin(0..n));
    let mut tails: Vec<NatSet> = vec![NatSet::empty(), rest.clone()];
    if !rest.is_finite() {
        let first = (n..).find(|k| rest.contains(*k)).expect("cofinite sets are unbounded");
        tails.push(NatSet::fin([first]));
        tails.push(rest.difference(&NatSet::fin([first])));
    }
    let atom = |m: &PosMeasure, k: u64| m.eval(&NatSet::fin([k]).into());
    let mu_atoms: Vec<ExtElement> = head.iter().map(|k| atom(mu, *k)).collect::<Result<_>>()?;
    let nu_atoms: Vec<ExtElement> = head.iter().map(|k| atom(nu, *k)).collect::<Result<_>>()?;
    let table = |atoms: &[ExtElement]| {
        let mut out = vec![ExtElement::zero(mu.dim())];
        for j in 1usize..(1 << atoms.len()) {
            let v = ext_add(&out[j & (j - 1)], &atoms[j.trailing_zeros() as usize]);
            out.push(v);
        }
        out
    };
    let (mu_t, nu_t) = (table(&mu_atoms), table(&nu_atoms));
    let full = mu_t.len() - 1;
    let mut values = Vec::with_capacity(tails.len() * mu_t.len());
    for b in &tails {
        let (mb, nb) = (mu.eval(&b.clone().into())?, nu.eval(&rest.difference(b).into())?);
        for j in 0..mu_t.len() {
            values.push(ext_add(&ext_add(&mu_t[j], &mb), &ext_add(&nu_t[full ^ j], &nb)));
        }
    }
    Ok((ext_sup(&values)?, ext_inf(&values)?))
}

/// Truncation window for the ℕ oracle.
pub const TRUNCATION_MAX: u64 = 12;

fn nat_truncation(inst: &Instance, t: &mut Tally) -> Result<()> {
    if inst.space != Space::Nat {
        return Ok(());
    }
    let ms: Vec<(&String, &PosMeasure)> = inst.pos_measures().collect();
    let sets = probe_sets(inst);
    for ((a, mu), (b, nu)) in unordered_pairs(&ms) {
        let keys: BTreeSet<u64> = mu.exceptional_keys().union(&nu.exceptional_keys()).copied().collect();
        let n = keys.last().map_or(1, |k| k + 1);
        if n > TRUNCATION_MAX {
            continue;
        }
        for d in &sets {
            let MeasurableSet::Nat(delta) = d else { unreachable!() };
            // Finite sets reaching past the window are folded into the head.
            let window = match delta {
                NatSet::Fin(items) => items.last().map_or(n, |m| n.max(m + 1)),
                NatSet::CoFin(_) => n,
            };
            if window > TRUNCATION_MAX {
                continue;
            }
            let (sup, inf) = truncation_oracle(mu, nu, delta, window)?;
            for (mode, oracle) in [(Extremum::Sup, sup), (Extremum::Inf, inf)] {
                let formula = partition_formula(*mu, *nu, d, mode)?;
                t.record(oracle == formula, || {
                    format!("{a}, {b}, {mode:?} at {delta}: formula {formula}, truncation {oracle}")
                });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- integral

fn integral_refinement(inst: &Instance, t: &mut Tally) -> Result<()> {
    let fs = nonneg_functions(inst);
    for (a, mu) in inst.pos_measures() {
        for (b, f) in &fs {
            let (x, y) = (integrate_pos(f, mu)?, integrate_pos_by_refinement(f, mu)?);
            t.record(x == y, || format!("∮{b} d{a}: level sets {x}, refinement {y}"));
        }
    }
    Ok(())
}

fn integral_indicator(inst: &Instance, t: &mut Tally) -> Result<()> {
    let c = scalar::ratio(5, 2);
    for d in probe_sets(inst) {
        let chi = SimpleFunction::indicator(&inst.space, &d)?;
        for (a, mu) in inst.pos_measures() {
            let v = mu.eval(&d)?;
            t.record(integrate_pos(&chi, mu)? == v, || format!("∮χ_Δ d{a} = {v} at {}", describe(inst, &d)));
            let scaled = ext_scale(&c, &v, inst.dim)?;
            t.record(integrate_pos(&chi.scale(&c), mu)? == scaled, || format!("∮cχ_Δ d{a} at {}", describe(inst, &d)));
        }
    }
    Ok(())
}

fn integral_linearity(inst: &Instance, t: &mut Tally) -> Result<()> {
    let fs: Vec<(&String, &SimpleFunction)> = inst.functions.iter().collect();
    let ms: Vec<(&String, &PosMeasure)> = inst.pos_measures().collect();
    for (a, mu) in &ms {
        for ((fname, f), (gname, g)) in unordered_pairs(&fs) {
            let (Ok(x), Ok(y), Ok(z)) = (integrate(f, mu), integrate(g, mu), integrate(&f.add(g)?, mu)) else {
                continue;
            };
            t.record(z == x.add(&y), || format!("∮({fname}+{gname}) d{a} = {z}, sum {}", x.add(&y)));
        }
        for (fname, f) in &fs {
            let Ok(x) = integrate(f, mu) else { continue };
            for r in [scalar::int(-2), scalar::ratio(3, 2), scalar::zero()] {
                t.record(integrate(&f.scale(&r), mu)? == x.scale(&r), || format!("∮{r}·{fname} d{a}"));
            }
            let (p, abs) = (integrate_pos(&f.pos_part(), mu)?, integrate_pos(&f.abs(), mu)?);
            t.record(p.le(&abs) && p.is_positive(), || format!("0 ≤ ∮{fname}⁺ d{a} ≤ ∮|{fname}| d{a}"));
        }
        for (b, nu) in &ms {
            let sum = mu.add(nu)?;
            for (fname, f) in &fs {
                if let (Ok(x), Ok(y)) = (integrate(f, mu), integrate(f, nu)) {
                    t.record(integrate(f, &sum)? == x.add(&y), || format!("∮{fname} d({a}+{b})"));
                }
            }
        }
    }
    Ok(())
}

/// `Σ f(i)·μ({i})` straight from the atoms.
fn atomwise_integral(f: &SimpleFunction, mu: &SignedMeasure) -> Result<LatticeElement> {
    match (f.atoms(), mu.atoms()) {
        (Atoms::Finite { values: fv, .. }, Atoms::Finite { values: mv, .. }) => {
            Ok(fv.iter().zip(mv).fold(LatticeElement::zero(mu.dim()), |acc, (r, x)| acc.add(&x.scale(r))))
        }
        (Atoms::Nat(ft), Atoms::Nat(mt)) => {
            let keys: BTreeSet<u64> = ft.keys().union(&mt.keys()).copied().collect();
            Ok(keys.iter().fold(LatticeElement::zero(mu.dim()), |acc, k| acc.add(&mt.get(*k).scale(ft.get(*k)))))
        }
        _ => Err(Error::SpaceMismatch),
    }
}

fn integral_signed(inst: &Instance, t: &mut Tally) -> Result<()> {
    let shifts: Vec<PosMeasure> = finite_pos(inst).into_iter().map(|(_, m)| m.clone()).collect();
    for (a, rho) in inst.signed_measures() {
        for (fname, f) in &inst.functions {
            let jordan = integrate_signed(f, &rho)?;
            let direct = atomwise_integral(f, &rho)?;
            t.record(jordan == direct, || format!("∮{fname} d{a}: Jordan {jordan}, atomwise {direct}"));
            for sigma in &shifts {
                let (n1, n2) = (rho.pos_part().add(sigma)?, rho.neg_part().add(sigma)?);
                let other = integrate_difference(f, &n1, &n2)?;
                t.record(other == jordan, || format!("∮{fname} d{a} depends on the decomposition"));
            }
        }
    }
    Ok(())
}

fn integral_triangle(inst: &Instance, t: &mut Tally) -> Result<()> {
    for (a, rho) in inst.signed_measures() {
        for (fname, f) in &inst.functions {
            let r = triangle_check(f, &rho)?;
            t.record(r.holds, || format!("|∮{fname} d{a}| = {} vs ∮|{fname}| d|{a}| = {}", r.lhs, r.rhs));
        }
    }
    Ok(())
}

fn integral_monotone(inst: &Instance, t: &mut Tally) -> Result<()> {
    for (fname, f) in nonneg_functions(inst) {
        let seq: Vec<SimpleFunction> = [0, 1, 2, 3, 3].iter().map(|k| f.scale(&scalar::ratio(*k, 3))).collect();
        for (a, mu) in inst.pos_measures() {
            let r = monotone_convergence_check(&seq, 3, mu)?;
            t.record(r.holds, || format!("{fname} against {a}: sup {} vs limit {}", r.supremum, r.limit));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- operators

fn finite_ops(inst: &Instance) -> Vec<(&String, &RegularOperator)> {
    if finite_space(inst).is_none() {
        return Vec::new();
    }
    inst.operators.iter().collect()
}

fn operator_modulus(inst: &Instance, t: &mut Tally) -> Result<()> {
    let xs = nonneg_functions(inst);
    for (name, op) in finite_ops(inst) {
        let m = op.modulus();
        for (xname, x) in &xs {
            let (fast, oracle) = (m.apply(x)?, modulus_oracle(op, x)?);
            t.record(fast == oracle, || format!("|{name}|({xname}): columnwise {fast}, sign vectors {oracle}"));
        }
    }
    Ok(())
}

fn operator_lattice(inst: &Instance, t: &mut Tally) -> Result<()> {
    let ops: Vec<(&String, &RegularOperator)> = inst.operators.iter().collect();
    let zero = RegularOperator::zero(&inst.space, inst.dim);
    let xs = nonneg_functions(inst);
    for (name, op) in &ops {
        let (p, n) = (op.pos_part(), op.neg_part());
        t.record(p.sub(&n)? == **op && p.add(&n)? == op.modulus(), || format!("{name} = T⁺ − T⁻, |T| = T⁺ + T⁻"));
        t.record(p.meet(&n)? == zero, || format!("{name}: T⁺ ∧ T⁻ = 0"));
    }
    for ((a, x), (b, y)) in pairs(&ops) {
        let (join, meet) = (x.join(y)?, x.meet(y)?);
        t.record(join.add(&meet)? == x.add(y)?, || format!("{a}∨{b} + {a}∧{b} = {a}+{b}"));
        for (xname, f) in &xs {
            if !f.is_eventually_zero()
                && (x.nat_tail().is_some_and(|c| !c.is_zero()) || y.nat_tail().is_some_and(|c| !c.is_zero()))
            {
                continue;
            }
            let j = join.apply(f)?;
            t.record(x.apply(f)?.le(&j) && y.apply(f)?.le(&j), || {
                format!("({a}∨{b})({xname}) = {j} against {a}({xname}), {b}({xname})")
            });
        }
    }
    Ok(())
}

fn operator_linearity(inst: &Instance, t: &mut Tally) -> Result<()> {
    let fs: Vec<(&String, &SimpleFunction)> = inst.functions.iter().collect();
    for (name, op) in &inst.operators {
        for ((a, f), (b, g)) in unordered_pairs(&fs) {
            let (Ok(x), Ok(y)) = (op.apply(f), op.apply(g)) else { continue };
            t.record(op.apply(&f.add(g)?)? == x.add(&y), || format!("{name}({a}+{b})"));
        }
        for (a, f) in &fs {
            let Ok(x) = op.apply(f) else { continue };
            let r = scalar::ratio(-7, 3);
            t.record(op.apply(&f.scale(&r))? == x.scale(&r), || format!("{name}({r}·{a})"));
            let as_measure = SignedMeasure::from_atoms(op.dim(), op.columns().clone());
            if let Ok(mu) = as_measure {
                let direct = atomwise_integral(f, &mu)?;
                t.record(direct == x, || format!("{name}({a}) = {x}, atomwise {direct}"));
            }
        }
    }
    Ok(())
}

fn sup_norm_bound(f: &SimpleFunction, tt: &LatticeElement, factor: i64) -> LatticeElement {
    tt.scale(&(f.sup_norm() * scalar::int(factor)))
}

fn operator_t_t(inst: &Instance, t: &mut Tally) -> Result<()> {
    let ops: Vec<(&String, &RegularOperator)> = inst.operators.iter().collect();
    let one = SimpleFunction::constant(&inst.space, scalar::one());
    for (name, op) in &ops {
        let report = nob_report(op, &inst.norm);
        let Some(tt) = &report.t_t else {
            t.record(op.nat_tail().is_some_and(|c| !c.is_zero()), || {
                format!("{name}: no t_T, tail column {:?}", op.nat_tail().map(|c| c.to_string()))
            });
            continue;
        };
        if finite_space(inst).is_some() {
            let oracle = modulus_oracle(op, &one)?;
            t.record(*tt == oracle, || format!("{name}: t_T = {tt}, oracle {oracle}"));
        }
        t.record(report.regular_norm == Some(inst.norm.norm(tt)), || {
            format!(
                "{name}: ‖T‖_r = {:?}, ‖t_T‖ = {}",
                report.regular_norm.as_ref().map(scalar::format),
                scalar::format(&inst.norm.norm(tt))
            )
        });
        for (fname, f) in &inst.functions {
            let Ok(image) = op.apply(f) else { continue };
            let bound = sup_norm_bound(f, tt, 1);
            t.record(image.abs().le(&bound), || format!("|{name}({fname})| = {}, ‖f‖·t_T = {bound}", image.abs()));
            for (other, s) in &ops {
                if other != name && s.dominated_by(op)? {
                    let Ok(image) = s.apply(f) else { continue };
                    let bound = sup_norm_bound(f, tt, 2);
                    t.record(image.abs().le(&bound), || {
                        format!("|{other}({fname})| = {}, 2‖f‖·t_{name} = {bound}", image.abs())
                    });
                }
            }
        }
    }
    Ok(())
}

fn operator_rk(inst: &Instance, t: &mut Tally) -> Result<()> {
    let Some(space) = finite_space(inst) else { return Ok(()) };
    let ops = finite_ops(inst);
    for ((a, x), (b, y)) in unordered_pairs(&ops) {
        let (join, meet) = (x.join(y)?, x.meet(y)?);
        for d in space.subsets_of(space.full())? {
            let chi = SimpleFunction::indicator(&inst.space, &d.into())?;
            let (sup, inf) = (rk_sup(x, y, d)?, rk_inf(x, y, d)?);
            t.record(sup == join.apply(&chi)?, || format!("RK sup of {a}, {b} at {}", space.describe(d)));
            t.record(inf == meet.apply(&chi)?, || format!("RK inf of {a}, {b} at {}", space.describe(d)));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- repr

fn repr_isomorphism(inst: &Instance, t: &mut Tally) -> Result<()> {
    let ops = finite_ops(inst);
    if ops.is_empty() {
        return Ok(());
    }
    let probes: Vec<SimpleFunction> = inst.functions.values().cloned().collect();
    let mut norms = vec![inst.norm.clone(), LatticeNorm::SUP, LatticeNorm::ONE];
    norms.dedup();
    // Each operator against its successor, cyclically.
    for (i, (a, x)) in ops.iter().enumerate() {
        let (b, y) = ops[(i + 1) % ops.len()];
        let r = isomorphism_check(x, y, &probes, &norms)?;
        t.record(r.all_ok(), || format!("{a}, {b}: {r:?}"));
    }
    for (name, mu) in inst.signed_measures() {
        let back = operator_to_measure(&measure_to_operator(&mu))?;
        t.record(back == RepresentingMeasure::Signed(mu), || format!("μ(I_{name}) against {name}"));
    }
    Ok(())
}

/// Open sets larger than this are skipped by the recovery law; the grid has
/// `3^|V|` points.
pub const RECOVERY_MAX_OPEN: usize = 3;

fn repr_recovery(inst: &Instance, t: &mut Tally) -> Result<()> {
    let Some(space) = finite_space(inst) else { return Ok(()) };
    if space.len() > GRID_BOUND {
        return Ok(());
    }
    let mut positives: Vec<(String, RegularOperator)> = Vec::new();
    for (name, op) in &inst.operators {
        if op.is_positive() {
            positives.push((name.clone(), op.clone()));
        } else {
            positives.push((format!("|{name}|"), op.modulus()));
        }
    }
    for (name, op) in &positives {
        for v in space.subsets_of(space.full())?.into_iter().filter(|v| v.len() <= RECOVERY_MAX_OPEN) {
            let r = recover_on_open(op, v)?;
            t.record(r.holds(), || {
                format!(
                    "{name} at V = {}: grid sup {} over {} points, compact inf {}",
                    space.describe(v),
                    r.open_value,
                    r.grid_points,
                    r.compact_value
                )
            });
        }
    }
    Ok(())
}

fn repr_psi(inst: &Instance, t: &mut Tally) -> Result<()> {
    let Some(space) = finite_space(inst) else { return Ok(()) };
    let probes: Vec<PosMeasure> = finite_pos(inst).into_iter().map(|(_, m)| m.clone()).collect();
    for (name, mu) in inst.signed_measures() {
        let Atoms::Finite { values, .. } = mu.atoms() else { continue };
        for (x, e) in values.iter().enumerate() {
            let r = psi_embedding_check(space, x, e, &probes, &inst.norm)?;
            t.record(r.holds(), || {
                format!(
                    "e = {name}({}) = {e}, projections {:?} {}",
                    space.atoms()[x],
                    r.projections.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    r.witnesses.join("; ")
                )
                .trim_end()
                .to_string()
            });
        }
    }
    Ok(())
}

fn repr_transfer(inst: &Instance, t: &mut Tally) -> Result<()> {
    for (name, def) in &inst.transfers {
        let r = regularity_transfer_check(&def.instance, def.mode)?;
        t.record(r.holds, || format!("{name}: extremum {} vs ν(s) = {}", r.extremum, r.nu_s));
    }
    Ok(())
}

fn repr_dichotomy(inst: &Instance, t: &mut Tally) -> Result<()> {
    for (name, op) in &inst.operators {
        if inst.space == Space::Nat {
            let positive = if op.is_positive() { op.clone() } else { op.modulus() };
            let r = nob_dichotomy_check(&positive, &inst.norm)?;
            t.record(r.holds, || format!("{name}: {r:?}"));
        } else {
            t.record(nob_report(op, &inst.norm).is_nob, || {
                format!("{name} on a finite space: is_nob = {}", nob_report(op, &inst.norm).is_nob)
            });
        }
    }
    Ok(())
}

fn repr_nat(inst: &Instance, t: &mut Tally) -> Result<()> {
    if inst.space != Space::Nat {
        return Ok(());
    }
    for (name, op) in &inst.operators {
        let positive = if op.is_positive() { op.clone() } else { op.modulus() };
        let RepresentingMeasure::Positive(mu) = operator_to_measure(&positive)? else {
            unreachable!("ℕ operators map to positive measures")
        };
        let tail_zero = positive.nat_tail().is_some_and(LatticeElement::is_zero);
        for d in probe_sets(inst) {
            let MeasurableSet::Nat(set) = &d else { unreachable!() };
            let value = mu.eval(&d)?;
            if set.is_finite() {
                let chi = SimpleFunction::indicator(&inst.space, &d)?;
                let image = positive.apply(&chi)?;
                t.record(value == fin(&image), || format!("{name}: μ_T({set}) = {value}, T(χ) = {image}"));
            } else {
                t.record(value.is_finite() == tail_zero, || format!("{name}: μ_T({set}) = {value}"));
            }
        }
        for (fname, f) in &inst.functions {
            if !f.is_eventually_zero() {
                continue;
            }
            let image = positive.apply(f)?;
            let integral = integrate(f, &mu)?;
            t.record(image == integral, || format!("{name}({fname}) = {image}, ∮{fname} dμ_T = {integral}"));
        }
    }
    Ok(())
}
