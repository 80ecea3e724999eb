//! Reproductions of the two failure cases: the partition formula for the
//! infimum on ℕ with infinite measures, and the missing Hahn partition for a
//! vector-valued signed measure on a one-point space.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Error;
use crate::lattice::{ext_inf, ExtElement, LatticeElement};
use crate::measure::{partition_formula, Extremum, PosMeasure, SignedMeasure};
use crate::space::{FiniteSet, FiniteSpace, MeasurableSet, NatSet, Space};
use crate::table::{Atoms, NatTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetValue {
    pub set: String,
    pub value: ExtElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfimumSection {
    pub x: LatticeElement,
    pub y: LatticeElement,
    /// The largest measure below μ and ν, built atomwise.
    pub measure_inf: Vec<SetValue>,
    pub measure_inf_is_zero: bool,
    /// The partition formula on finite sets, where it still agrees.
    pub formula_on_finite: Vec<SetValue>,
    pub formula_at_n: ExtElement,
    pub meet_rejects_infinite: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionAttempt {
    pub positive: String,
    pub negative: String,
    pub plus_matches: bool,
    pub minus_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HahnSection {
    pub mu_p: LatticeElement,
    pub mu_plus: LatticeElement,
    pub mu_minus: LatticeElement,
    pub partitions: Vec<PartitionAttempt>,
    pub hahn_partition_exists: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwinRow {
    pub set: String,
    pub formula: ExtElement,
    pub meet: ExtElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwinSection {
    pub rows: Vec<TwinRow>,
    pub agree: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub infimum: InfimumSection,
    pub hahn: HahnSection,
    pub finite_twin: TwinSection,
}

impl CounterexampleReport {
    pub fn pass(&self) -> bool {
        self.infimum.pass && self.hahn.pass && self.finite_twin.pass
    }

    /// Fixed text layout used by the CLI and the golden test.
    pub fn render(&self) -> String {
        let mark = |ok: bool| if ok { "[PASS]" } else { "[FAIL]" };
        let mut out = String::new();
        let inf = &self.infimum;
        writeln!(out, "== infimum of infinite measures on N ==").unwrap();
        writeln!(out, "x = {}, y = {}", inf.x, inf.y).unwrap();
        writeln!(out, "mu(D) = |D|*x, nu(D) = |D|*y").unwrap();
        for sv in &inf.measure_inf {
            writeln!(out, "measure_inf({}) = {}", sv.set, sv.value).unwrap();
        }
        for sv in &inf.formula_on_finite {
            writeln!(out, "formula({}) = {}", sv.set, sv.value).unwrap();
        }
        writeln!(out, "measure_inf = 0").unwrap();
        writeln!(out, "formula_at_N = {}", inf.formula_at_n).unwrap();
        writeln!(out, "meet rejects infinite operands: {}", inf.meet_rejects_infinite).unwrap();
        writeln!(out, "{} infimum section", mark(inf.pass)).unwrap();

        let hahn = &self.hahn;
        writeln!(out, "== Hahn decomposition on {{p}} ==").unwrap();
        writeln!(out, "mu({{p}}) = {}", hahn.mu_p).unwrap();
        writeln!(out, "mu_plus({{p}}) = {}", hahn.mu_plus).unwrap();
        writeln!(out, "mu_minus({{p}}) = {}", hahn.mu_minus).unwrap();
        for p in &hahn.partitions {
            writeln!(
                out,
                "partition D+ = {}, D- = {}: plus {}, minus {}",
                p.positive,
                p.negative,
                if p.plus_matches { "matches" } else { "differs" },
                if p.minus_matches { "matches" } else { "differs" },
            )
            .unwrap();
        }
        writeln!(out, "hahn_partition_exists = {}", hahn.hahn_partition_exists).unwrap();
        writeln!(out, "{} Hahn section", mark(hahn.pass)).unwrap();

        let twin = &self.finite_twin;
        writeln!(out, "== finite twin on {{a1,a2}} ==").unwrap();
        for row in &twin.rows {
            writeln!(out, "{}: formula {} meet {}", row.set, row.formula, row.meet).unwrap();
        }
        writeln!(out, "agree = {}", twin.agree).unwrap();
        writeln!(out, "{} finite twin", mark(twin.pass)).unwrap();
        out
    }
}

fn infimum_section() -> InfimumSection {
    let x = LatticeElement::from_ints(&[1, 0]);
    let y = LatticeElement::from_ints(&[0, 1]);
    let mu = PosMeasure::nat(2, BTreeMap::new(), x.clone()).expect("positive tail");
    let nu = PosMeasure::nat(2, BTreeMap::new(), y.clone()).expect("positive tail");

    // Atomwise infimum, extended by σ-additivity: every atom gets x ∧ y = 0.
    let atoms = match (mu.atoms(), nu.atoms()) {
        (Atoms::Nat(a), Atoms::Nat(b)) => {
            NatTable::new(BTreeMap::new(), ext_inf([a.tail(), b.tail()]).expect("two operands"))
        }
        _ => unreachable!("both measures live on ℕ"),
    };
    let inf_measure = PosMeasure::from_atoms(2, Atoms::Nat(atoms)).expect("zero tail");

    let samples = [NatSet::empty(), NatSet::fin([0]), NatSet::fin([1, 2]), NatSet::cofin([0]), NatSet::all()];
    let measure_inf: Vec<SetValue> = samples
        .iter()
        .map(|s| SetValue { set: s.to_string(), value: inf_measure.eval(&s.clone().into()).expect("ℕ set") })
        .collect();
    let zero = ExtElement::zero(2);
    let measure_inf_is_zero = measure_inf.iter().all(|sv| sv.value == zero);

    let formula_on_finite: Vec<SetValue> = [NatSet::fin([0]), NatSet::fin([1, 2]), NatSet::fin([0, 1, 2, 3])]
        .iter()
        .map(|s| SetValue {
            set: s.to_string(),
            value: partition_formula(&mu, &nu, &s.clone().into(), Extremum::Inf).expect("ℕ set"),
        })
        .collect();
    let formula_at_n = partition_formula(&mu, &nu, &NatSet::all().into(), Extremum::Inf).expect("ℕ set");
    let meet_rejects_infinite = matches!(mu.meet(&nu), Err(Error::InfiniteOperand));

    let pass = measure_inf_is_zero
        && formula_on_finite.iter().all(|sv| sv.value == zero)
        && formula_at_n == ExtElement::Infinity
        && meet_rejects_infinite;
    InfimumSection {
        x,
        y,
        measure_inf,
        measure_inf_is_zero,
        formula_on_finite,
        formula_at_n,
        meet_rejects_infinite,
        pass,
    }
}

fn hahn_section() -> HahnSection {
    let space = FiniteSpace::new(["p"]).expect("one atom");
    let mu_p = LatticeElement::from_ints(&[1, -1]);
    let mu = SignedMeasure::finite(space.clone(), 2, vec![mu_p.clone()]).expect("one value");
    let p: MeasurableSet = space.full().into();
    let finite = |e: ExtElement| e.finite().expect("finite measure").clone();
    let mu_plus = finite(mu.pos_part().eval(&p).expect("in space"));
    let mu_minus = finite(mu.neg_part().eval(&p).expect("in space"));

    // Candidate Δ⁺ ∪ Δ⁻ = {p}: μ⁺ = μ(· ∩ Δ⁺), μ⁻ = −μ(· ∩ Δ⁻), checked on {p}.
    let partitions: Vec<PartitionAttempt> = [space.full(), FiniteSet::EMPTY]
        .into_iter()
        .map(|pos| {
            let neg = space.complement(pos);
            let on = |d: FiniteSet| mu.eval(&d.into()).expect("in space");
            PartitionAttempt {
                positive: space.describe(pos),
                negative: space.describe(neg),
                plus_matches: on(pos) == mu_plus,
                minus_matches: on(neg).neg() == mu_minus,
            }
        })
        .collect();
    let hahn_partition_exists = partitions.iter().any(|p| p.plus_matches && p.minus_matches);
    let pass = mu_plus == LatticeElement::from_ints(&[1, 0])
        && mu_minus == LatticeElement::from_ints(&[0, 1])
        && partitions.len() == 2
        && !hahn_partition_exists;
    HahnSection { mu_p, mu_plus, mu_minus, partitions, hahn_partition_exists, pass }
}

fn twin_section() -> TwinSection {
    let space = FiniteSpace::numbered(2).expect("two atoms");
    let x = LatticeElement::from_ints(&[1, 0]);
    let y = LatticeElement::from_ints(&[0, 1]);
    let mu = PosMeasure::finite(space.clone(), 2, vec![x.clone().into(), x.into()]).expect("finite");
    let nu = PosMeasure::finite(space.clone(), 2, vec![y.clone().into(), y.into()]).expect("finite");
    let meet = mu.meet(&nu).expect("finite operands");
    let rows: Vec<TwinRow> = space
        .subsets_of(space.full())
        .expect("two atoms")
        .into_iter()
        .map(|d| TwinRow {
            set: space.describe(d),
            formula: partition_formula(&mu, &nu, &d.into(), Extremum::Inf).expect("in space"),
            meet: meet.eval(&d.into()).expect("in space"),
        })
        .collect();
    let agree = rows.iter().all(|r| r.formula == r.meet);
    let total_zero = meet.eval(&Space::Finite(space).full()).ok() == Some(ExtElement::zero(2));
    TwinSection { pass: agree && total_zero, rows, agree }
}

pub fn counterexample_report() -> CounterexampleReport {
    CounterexampleReport { infimum: infimum_section(), hahn: hahn_section(), finite_twin: twin_section() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_both_cases() {
        let r = counterexample_report();
        assert!(r.pass(), "{}", r.render());
        assert_eq!(r.infimum.formula_at_n, ExtElement::Infinity);
        assert_eq!(r.hahn.mu_plus, LatticeElement::from_ints(&[1, 0]));
        assert_eq!(r.hahn.mu_minus, LatticeElement::from_ints(&[0, 1]));
        assert!(!r.hahn.hahn_partition_exists);
        assert_eq!(r.finite_twin.rows.len(), 4);
    }

    #[test]
    fn render_is_stable() {
        let a = counterexample_report().render();
        assert_eq!(a, counterexample_report().render());
        assert!(a.contains("formula_at_N = inf\n"));
        assert!(a.contains("mu_plus({p}) = (1,0)\n"));
        assert!(a.contains("hahn_partition_exists = false\n"));
    }
}
