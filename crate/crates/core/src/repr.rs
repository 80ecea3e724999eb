//! The operator ↔ measure correspondence on discrete spaces and the checks
//! that exercise it: roundtrips, bipositivity, isometry, the lattice
//! homomorphism property through Riesz–Kantorovich sums, recovery of `μ(V)`
//! and `μ(K)` from `T`, the nob dichotomy on ℕ, the embedding `e ↦ μ_e`, and
//! the abstract sup/inf transfer lemma.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integral::{integrate_signed, SimpleFunction};
use crate::lattice::{ExtElement, LatticeElement, LatticeNorm};
use crate::measure::{measure_norm, partition_formula, Extremum, PosMeasure, SignedMeasure};
use crate::operator::{modulus_oracle, nob_report, rk_inf, rk_sup, RegularOperator};
use crate::scalar::{self, Scalar};
use crate::space::{FiniteSet, FiniteSpace, NatSet, Space, ENUMERATION_BOUND};
use crate::table::Atoms;

/// The measure attached to an operator: signed on finite spaces, positive
/// (possibly infinite) for positive operators on ℕ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepresentingMeasure {
    Signed(SignedMeasure),
    Positive(PosMeasure),
}

/// `μ_T(Δ) = T(χ_Δ)`.
pub fn operator_to_measure(t: &RegularOperator) -> Result<RepresentingMeasure> {
    match t.columns() {
        Atoms::Finite { .. } => {
            Ok(RepresentingMeasure::Signed(SignedMeasure::from_atoms(t.dim(), t.columns().clone())?))
        }
        Atoms::Nat(_) => {
            if !t.is_positive() {
                return Err(Error::NotPositive("operators on ℕ must be positive to be represented".into()));
            }
            let atoms = t.columns().map(|c| ExtElement::Finite(c.clone()));
            Ok(RepresentingMeasure::Positive(PosMeasure::from_atoms(t.dim(), atoms)?))
        }
    }
}

/// The integration operator `I_μ(f) = ∮ f dμ`.
pub fn measure_to_operator(mu: &SignedMeasure) -> RegularOperator {
    RegularOperator::from_columns(mu.dim(), mu.atoms().clone()).expect("measure values share its dimension")
}

/// The integration operator of a positive measure whose atoms are finite.
pub fn pos_measure_to_operator(mu: &PosMeasure) -> Result<RegularOperator> {
    if mu.atoms().stored().iter().any(|v| v.is_infinite()) {
        return Err(Error::InfiniteValue("an atom of infinite measure has no column".into()));
    }
    let dim = crate::measure::SetFunction::dim(mu);
    RegularOperator::from_columns(dim, mu.atoms().map(|v| v.finite().expect("checked").clone()))
}

fn finite_space(t: &RegularOperator) -> Result<FiniteSpace> {
    match t.space() {
        Space::Finite(s) if s.len() <= ENUMERATION_BOUND => Ok(s),
        Space::Finite(s) => Err(Error::EnumerationBound { size: s.len(), bound: ENUMERATION_BOUND }),
        Space::Nat => Err(Error::SpaceMismatch),
    }
}

fn signed(t: &RegularOperator) -> Result<SignedMeasure> {
    match operator_to_measure(t)? {
        RepresentingMeasure::Signed(m) => Ok(m),
        RepresentingMeasure::Positive(m) => m.to_signed(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReprCheckReport {
    pub roundtrip_ok: bool,
    pub bipositive_ok: bool,
    pub isometry_ok: bool,
    pub lattice_hom_ok: bool,
    /// One entry per failed check, naming the offending set or function.
    pub witnesses: Vec<String>,
}

impl ReprCheckReport {
    pub fn all_ok(&self) -> bool {
        self.roundtrip_ok && self.bipositive_ok && self.isometry_ok && self.lattice_hom_ok
    }
}

/// Runs the representation checks on a pair of operators over the same
/// finite space. `probes` are extra test functions for the integral side;
/// the isometry is checked under each of `norms`.
pub fn isomorphism_check(
    t: &RegularOperator,
    s: &RegularOperator,
    probes: &[SimpleFunction],
    norms: &[LatticeNorm],
) -> Result<ReprCheckReport> {
    let space = finite_space(t)?;
    if s.space() != t.space() {
        return Err(Error::SpaceMismatch);
    }
    let whole = Space::Finite(space.clone());
    let sets = space.subsets_of(space.full())?;
    let mut report = ReprCheckReport {
        roundtrip_ok: true,
        bipositive_ok: true,
        isometry_ok: true,
        lattice_hom_ok: true,
        witnesses: Vec::new(),
    };
    let mu_t = signed(t)?;
    let mu_s = signed(s)?;

    // Roundtrips, checked through evaluation and integration rather than by
    // comparing stored columns alone.
    let mut functions: Vec<SimpleFunction> =
        (0..space.len()).map(|i| SimpleFunction::indicator(&whole, &space.atom(i).into())).collect::<Result<_>>()?;
    functions.push(SimpleFunction::constant(&whole, scalar::one()));
    functions.extend(probes.iter().cloned());
    for (op, mu) in [(t, &mu_t), (s, &mu_s)] {
        for d in &sets {
            let chi = SimpleFunction::indicator(&whole, &(*d).into())?;
            if mu.eval(&(*d).into())? != op.apply(&chi)? {
                report.roundtrip_ok = false;
                report.witnesses.push(format!("μ_T(Δ) ≠ T(χ_Δ) at Δ = {}", space.describe(*d)));
            }
        }
        let back = measure_to_operator(mu);
        if back != *op {
            report.roundtrip_ok = false;
            report.witnesses.push("I(μ_T) ≠ T".into());
        }
        if signed(&back)? != *mu {
            report.roundtrip_ok = false;
            report.witnesses.push("μ(I_μ) ≠ μ".into());
        }
        for f in &functions {
            if back.apply(f)? != integrate_signed(f, mu)? {
                report.roundtrip_ok = false;
                report.witnesses.push(format!("I_μ(f) ≠ ∮ f dμ for f = {:?}", f.atoms().stored()));
            }
        }
    }

    // Bipositivity: T ≥ 0 on the indicator basis iff μ_T ≥ 0 on every set.
    let op_positive = (0..space.len()).all(|i| {
        let chi = SimpleFunction::indicator(&whole, &space.atom(i).into()).expect("atom in space");
        t.apply(&chi).expect("same space").is_positive()
    });
    let measure_positive = sets.iter().all(|d| mu_t.eval(&(*d).into()).expect("same space").is_positive());
    if op_positive != measure_positive {
        report.bipositive_ok = false;
        report.witnesses.push(format!("T ≥ 0 is {op_positive} but μ_T ≥ 0 is {measure_positive}"));
    }

    // Isometry: ‖I_μ‖_r from the sign-vector oracle against ‖ |μ|(X) ‖.
    let one = SimpleFunction::constant(&whole, scalar::one());
    let oracle = modulus_oracle(t, &one)?;
    for norm in norms {
        let oracle_norm = norm.norm(&oracle);
        let measure_side = measure_norm(norm, &mu_t);
        let report_norm = nob_report(t, norm).regular_norm;
        if oracle_norm != measure_side || report_norm.as_ref() != Some(&measure_side) {
            report.isometry_ok = false;
            report.witnesses.push(format!(
                "‖T‖_r = {} (oracle) / {:?} (t_T) but ‖μ_T‖ = {}",
                oracle_norm,
                report_norm.map(|r| r.to_string()),
                measure_side
            ));
        }
    }

    // Lattice homomorphism.
    let join = mu_t.join(&mu_s)?;
    let meet = mu_t.meet(&mu_s)?;
    if signed(&t.join(s)?)? != join || signed(&t.meet(s)?)? != meet {
        report.lattice_hom_ok = false;
        report.witnesses.push("μ_{T∨S} ≠ μ_T ∨ μ_S".into());
    }
    for d in &sets {
        let set = (*d).into();
        let sup = rk_sup(t, s, *d)?;
        let inf = rk_inf(t, s, *d)?;
        let formula_sup = partition_formula(&mu_t, &mu_s, &set, Extremum::Sup)?;
        let formula_inf = partition_formula(&mu_t, &mu_s, &set, Extremum::Inf)?;
        if sup != join.eval(&set)? || ExtElement::Finite(sup) != formula_sup {
            report.lattice_hom_ok = false;
            report.witnesses.push(format!("RK sup ≠ (μ_T ∨ μ_S)(Δ) at Δ = {}", space.describe(*d)));
        }
        if inf != meet.eval(&set)? || ExtElement::Finite(inf) != formula_inf {
            report.lattice_hom_ok = false;
            report.witnesses.push(format!("RK inf ≠ (μ_T ∧ μ_S)(Δ) at Δ = {}", space.describe(*d)));
        }
    }
    Ok(report)
}

/// Largest `|V|` for which the `{0, 1/2, 1}` grid is enumerated.
pub const GRID_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    /// `sup { T(f) : 0 ≤ f ≤ 1, supp f ⊆ V }` over the grid.
    pub open_value: LatticeElement,
    pub open_attained_at_indicator: bool,
    pub open_matches_measure: bool,
    /// `inf { T(f) : 0 ≤ f ≤ 1, f = 1 on K }` over the grid, with `K = V`.
    pub compact_value: LatticeElement,
    pub compact_attained_at_indicator: bool,
    pub compact_matches_measure: bool,
    pub grid_points: usize,
    /// Grid points attaining the open-set supremum while taking the value 1/2
    /// on an atom where `T` is nonzero. Zero for every positive `T`.
    pub interior_maximizers: usize,
}

impl RecoveryReport {
    pub fn holds(&self) -> bool {
        self.open_attained_at_indicator
            && self.open_matches_measure
            && self.compact_attained_at_indicator
            && self.compact_matches_measure
            && self.interior_maximizers == 0
    }
}

fn grid(space: &FiniteSpace, free: FiniteSet, fixed_one: FiniteSet) -> Vec<SimpleFunction> {
    let levels = [scalar::zero(), scalar::ratio(1, 2), scalar::one()];
    let free: Vec<usize> = free.iter().collect();
    let count = 3usize.pow(free.len() as u32);
    (0..count)
        .map(|mut code| {
            let mut values = vec![scalar::zero(); space.len()];
            for i in fixed_one.iter() {
                values[i] = scalar::one();
            }
            for &i in &free {
                values[i] = levels[code % 3].clone();
                code /= 3;
            }
            SimpleFunction::finite(space.clone(), values).expect("sized to the space")
        })
        .collect()
}

/// Recovers `μ_T(V)` as a supremum and `μ_T(K)` (with `K = V`) as an infimum
/// of `T` over `[0, 1]`-valued grid functions, and checks both extrema are
/// attained at the indicator.
pub fn recover_on_open(t: &RegularOperator, v: FiniteSet) -> Result<RecoveryReport> {
    if !t.is_positive() {
        return Err(Error::NotPositive("recovery formulas need a positive operator".into()));
    }
    let space = finite_space(t)?;
    space.check(v)?;
    if space.len() > GRID_BOUND {
        return Err(Error::EnumerationBound { size: space.len(), bound: GRID_BOUND });
    }
    let whole = Space::Finite(space.clone());
    let mu = signed(t)?;

    let open_grid = grid(&space, v, FiniteSet::EMPTY);
    let images: Vec<LatticeElement> = open_grid.iter().map(|f| t.apply(f)).collect::<Result<_>>()?;
    let open_value = images.iter().skip(1).fold(images[0].clone(), |a, x| a.join(x));
    let chi_v = SimpleFunction::indicator(&whole, &v.into())?;
    let half = scalar::ratio(1, 2);
    let interior_maximizers = open_grid
        .iter()
        .zip(&images)
        .filter(|(f, image)| {
            **image == open_value
                && match (f.atoms(), t.columns()) {
                    (Atoms::Finite { values, .. }, Atoms::Finite { values: cols, .. }) => {
                        values.iter().zip(cols).any(|(x, c)| *x == half && !c.is_zero())
                    }
                    _ => false,
                }
        })
        .count();

    let k = v;
    let compact_grid = grid(&space, space.complement(k), k);
    let images: Vec<LatticeElement> = compact_grid.iter().map(|f| t.apply(f)).collect::<Result<_>>()?;
    let compact_value = images.iter().skip(1).fold(images[0].clone(), |a, x| a.meet(x));
    let chi_k = SimpleFunction::indicator(&whole, &k.into())?;

    Ok(RecoveryReport {
        open_attained_at_indicator: t.apply(&chi_v)? == open_value,
        open_matches_measure: mu.eval(&v.into())? == open_value,
        compact_attained_at_indicator: t.apply(&chi_k)? == compact_value,
        compact_matches_measure: mu.eval(&k.into())? == compact_value,
        grid_points: open_grid.len() + compact_grid.len(),
        interior_maximizers,
        open_value,
        compact_value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub measure_finite: bool,
    /// Partial sums of `|T|` over `{0, …, N−1}` stop growing.
    pub nob_by_truncation: bool,
    pub nob_by_tail: bool,
    #[serde(serialize_with = "scalar::serialize_opt")]
    pub regular_norm: Option<Scalar>,
    pub holds: bool,
}

/// Window used by the truncation side of [`nob_dichotomy_check`].
pub const TRUNCATION_WINDOW: u64 = 32;

/// For a positive operator on ℕ: `μ_T` is finite iff `T` is norm-to-order
/// bounded. The measure side evaluates `μ_T(ℕ)`; the operator side compares
/// the partial sums `|T|(χ_{0..N})` at `N = W` and `N = 2W` (with `W ≥ 32`
/// beyond every exceptional point) and, separately, inspects the tail column.
pub fn nob_dichotomy_check(t: &RegularOperator, norm: &LatticeNorm) -> Result<DichotomyReport> {
    let Some(tail) = t.nat_tail() else {
        return Err(Error::SpaceMismatch);
    };
    let measure_finite = match operator_to_measure(t)? {
        RepresentingMeasure::Positive(m) => m.eval(&NatSet::all().into())?.is_finite(),
        RepresentingMeasure::Signed(_) => unreachable!("ℕ operators map to positive measures"),
    };
    let last_key = match t.columns() {
        Atoms::Nat(cols) => cols.exceptional().keys().next_back().copied(),
        Atoms::Finite { .. } => None,
    };
    let window = last_key.map_or(TRUNCATION_WINDOW, |k| TRUNCATION_WINDOW.max(k + 1));
    let modulus = t.modulus();
    let partial = |n: u64| modulus.apply(&SimpleFunction::indicator(&Space::Nat, &NatSet::fin(0..n).into())?);
    let nob_by_truncation = partial(window)? == partial(2 * window)?;
    let nob_by_tail = tail.is_zero();
    let report = nob_report(t, norm);
    Ok(DichotomyReport {
        holds: measure_finite == nob_by_truncation && nob_by_truncation == nob_by_tail && report.is_nob == nob_by_tail,
        measure_finite,
        nob_by_truncation,
        nob_by_tail,
        regular_norm: report.regular_norm,
    })
}

/// `μ_e`: the point mass of `e` at atom `x`.
pub fn point_mass(space: &FiniteSpace, x: usize, e: &LatticeElement) -> Result<SignedMeasure> {
    if x >= space.len() {
        return Err(Error::SetOutsideSpace(format!("atom index {x}")));
    }
    let values = (0..space.len()).map(|i| if i == x { e.clone() } else { LatticeElement::zero(e.dim()) }).collect();
    SignedMeasure::finite(space.clone(), e.dim(), values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub valid_measure: bool,
    pub isometric: bool,
    pub lattice_homomorphism: bool,
    pub projection_ok: bool,
    /// `P(μ)` at sets containing `x`, one per probe.
    pub projections: Vec<ExtElement>,
    pub witnesses: Vec<String>,
}

impl PsiReport {
    pub fn holds(&self) -> bool {
        self.valid_measure && self.isometric && self.lattice_homomorphism && self.projection_ok
    }
}

/// Checks the embedding `e ↦ μ_e` and the band projection
/// `P(μ)(Δ) = inf { μ(Γ) : x ∈ Γ }` for `x ∈ Δ` (and `0` otherwise).
pub fn psi_embedding_check(
    space: &FiniteSpace,
    x: usize,
    e: &LatticeElement,
    probes: &[PosMeasure],
    norm: &LatticeNorm,
) -> Result<PsiReport> {
    if space.len() > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound { size: space.len(), bound: ENUMERATION_BOUND });
    }
    let mu_e = point_mass(space, x, e)?;
    let sets = space.subsets_of(space.full())?;
    let zero = LatticeElement::zero(e.dim());
    let mut witnesses = Vec::new();

    let valid_measure = sets.iter().all(|d| {
        let expected = if d.contains(x) { e } else { &zero };
        mu_e.eval(&(*d).into()).expect("same space") == *expected
    });
    if !valid_measure {
        witnesses.push("μ_e(Δ) differs from the point-mass rule".into());
    }
    let isometric = measure_norm(norm, &mu_e) == norm.norm(e);
    if !isometric {
        witnesses.push("‖μ_e‖ ≠ ‖e‖".into());
    }
    let abs_mu = point_mass(space, x, &e.abs())?;
    let lattice_homomorphism =
        abs_mu.to_pos()? == mu_e.abs() && point_mass(space, x, &e.pos_part())?.to_pos()? == mu_e.pos_part();
    if !lattice_homomorphism {
        witnesses.push("ψ(|e|) ≠ |ψ(e)|".into());
    }

    let mut projection_ok = true;
    let mut projections = Vec::new();
    for (n, mu) in probes.iter().enumerate() {
        let containing: Vec<ExtElement> =
            sets.iter().filter(|g| g.contains(x)).map(|g| mu.eval(&(*g).into())).collect::<Result<_>>()?;
        let value = crate::lattice::ext_inf(&containing)?;
        let atom_value = mu.eval(&space.atom(x).into())?;
        if value != atom_value {
            projection_ok = false;
            witnesses.push(format!("probe {n}: inf over Γ ∋ x is {value}, μ({{x}}) is {atom_value}"));
        }
        // P(μ) must be the point mass of μ({x}).
        if let ExtElement::Finite(a) = &value {
            let projected = point_mass(space, x, a)?;
            for d in &sets {
                let expected = if d.contains(x) { value.clone() } else { ExtElement::Finite(zero.clone()) };
                if ExtElement::Finite(projected.eval(&(*d).into())?) != expected {
                    projection_ok = false;
                    witnesses.push(format!("probe {n}: P(μ)(Δ) wrong at Δ = {}", space.describe(*d)));
                }
            }
        }
        projections.push(value);
    }
    Ok(PsiReport { valid_measure, isometric, lattice_homomorphism, projection_ok, projections, witnesses })
}

/// Two maps `μ, ν` on a finite set `S′` plus a distinguished point `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractTransferInstance {
    pub mu_primed: Vec<LatticeElement>,
    pub nu_primed: Vec<LatticeElement>,
    pub mu_s: LatticeElement,
    pub nu_s: LatticeElement,
}

impl AbstractTransferInstance {
    pub fn negate(&self) -> Self {
        Self {
            mu_primed: self.mu_primed.iter().map(LatticeElement::neg).collect(),
            nu_primed: self.nu_primed.iter().map(LatticeElement::neg).collect(),
            mu_s: self.mu_s.neg(),
            nu_s: self.nu_s.neg(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    /// `sup` (resp. `inf`) of `ν` over `S′`.
    pub extremum: LatticeElement,
    pub nu_s: LatticeElement,
    pub holds: bool,
}

fn fold_extremum(items: &[LatticeElement], mode: Extremum) -> Result<LatticeElement> {
    let (first, rest) = items.split_first().ok_or(Error::EmptyFamily)?;
    Ok(rest.iter().fold(first.clone(), |a, x| match mode {
        Extremum::Sup => a.join(x),
        Extremum::Inf => a.meet(x),
    }))
}

/// Validates the hypotheses of the transfer lemma and checks its conclusion.
///
/// Sup mode: `ν(s′) ≤ ν(s)`, `(μ−ν)(s′) ≤ (μ−ν)(s)` and `μ(s) = sup μ(s′)`
/// imply `ν(s) = sup ν(s′)`. Inf mode is the order dual. A violated
/// hypothesis rejects the instance with [`Error::Hypothesis`].
pub fn regularity_transfer_check(inst: &AbstractTransferInstance, mode: Extremum) -> Result<TransferReport> {
    let n = inst.mu_primed.len();
    if n == 0 || inst.nu_primed.len() != n {
        return Err(Error::Hypothesis("S′ must be non-empty with μ and ν defined on it".into()));
    }
    let below = |a: &LatticeElement, b: &LatticeElement| match mode {
        Extremum::Sup => a.le(b),
        Extremum::Inf => b.le(a),
    };
    let slack_s = inst.mu_s.sub(&inst.nu_s);
    for (i, (m, v)) in inst.mu_primed.iter().zip(&inst.nu_primed).enumerate() {
        if !below(v, &inst.nu_s) {
            return Err(Error::Hypothesis(format!("ν(s′) vs ν(s) at s′ = {i}")));
        }
        if !below(&m.sub(v), &slack_s) {
            return Err(Error::Hypothesis(format!("(μ−ν)(s′) vs (μ−ν)(s) at s′ = {i}")));
        }
    }
    if fold_extremum(&inst.mu_primed, mode)? != inst.mu_s {
        return Err(Error::Hypothesis("μ(s) is not the extremum of μ over S′".into()));
    }
    let extremum = fold_extremum(&inst.nu_primed, mode)?;
    Ok(TransferReport { holds: extremum == inst.nu_s, extremum, nu_s: inst.nu_s.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use std::collections::BTreeMap;

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn space3() -> FiniteSpace {
        FiniteSpace::numbered(3).unwrap()
    }

    fn t() -> RegularOperator {
        RegularOperator::from_rows(space3(), &[&[1, -2, 0], &[3, 0, -1]]).unwrap()
    }

    #[test]
    fn operator_measure_roundtrip() {
        let RepresentingMeasure::Signed(mu) = operator_to_measure(&t()).unwrap() else { panic!() };
        assert_eq!(mu.atoms().stored(), vec![&v(&[1, 3]), &v(&[-2, 0]), &v(&[0, -1])]);
        assert_eq!(mu.total(), v(&[-1, 2]));
        assert_eq!(measure_to_operator(&mu), t());
        let zero = RegularOperator::zero(&Space::Finite(space3()), 2);
        assert_eq!(
            operator_to_measure(&zero).unwrap(),
            RepresentingMeasure::Signed(SignedMeasure::zero(&Space::Finite(space3()), 2))
        );
        let nat = RegularOperator::nat(2, BTreeMap::new(), v(&[1, 0])).unwrap();
        let RepresentingMeasure::Positive(m) = operator_to_measure(&nat).unwrap() else { panic!() };
        assert_eq!(m.nat_tail(), Some(&v(&[1, 0])));
        assert_eq!(m.eval(&NatSet::all().into()).unwrap(), ExtElement::Infinity);
        let signed_nat = RegularOperator::nat(2, BTreeMap::from([(1, v(&[-1, 0]))]), v(&[0, 0])).unwrap();
        assert!(operator_to_measure(&signed_nat).is_err());
    }

    #[test]
    fn measure_operator_matches_integral() {
        let mu = SignedMeasure::finite(space3(), 2, vec![v(&[1, 0]), v(&[0, 2]), v(&[1, 1])]).unwrap();
        let f = SimpleFunction::from_ints(space3(), &[2, -1, 3]).unwrap();
        assert_eq!(measure_to_operator(&mu).apply(&f).unwrap(), v(&[5, 1]));
        let zero = SignedMeasure::zero(&Space::Finite(space3()), 2);
        assert_eq!(measure_to_operator(&zero), RegularOperator::zero(&Space::Finite(space3()), 2));
    }

    #[test]
    fn isomorphism_on_running_example() {
        let s = RegularOperator::from_rows(space3(), &[&[0, 1, 2], &[1, 1, 0]]).unwrap();
        let r = isomorphism_check(&t(), &s, &[], &[LatticeNorm::SUP]).unwrap();
        assert!(r.all_ok(), "{:?}", r.witnesses);
        let RepresentingMeasure::Signed(mu) = operator_to_measure(&t()).unwrap() else { panic!() };
        assert_eq!(measure_norm(&LatticeNorm::SUP, &mu), int(4));
        let id = RegularOperator::from_rows(space3(), &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert!(isomorphism_check(&id, &id, &[], &[LatticeNorm::ONE]).unwrap().all_ok());
    }

    #[test]
    fn recovery_example() {
        let p = RegularOperator::from_rows(space3(), &[&[1, 0, 2], &[0, 1, 1]]).unwrap();
        let r = recover_on_open(&p, FiniteSet::from_indices([0, 2])).unwrap();
        assert_eq!(r.open_value, v(&[3, 1]));
        assert!(r.holds());
        assert_eq!(r.grid_points, 9 + 3);
        let r = recover_on_open(&p, FiniteSet::EMPTY).unwrap();
        assert_eq!(r.open_value, v(&[0, 0]));
        let r = recover_on_open(&p, space3().full()).unwrap();
        assert_eq!(r.open_value, v(&[3, 2]));
        assert!(matches!(recover_on_open(&t(), FiniteSet::EMPTY), Err(Error::NotPositive(_))));
    }

    #[test]
    fn dichotomy_examples() {
        let inf = RegularOperator::nat(2, BTreeMap::new(), v(&[1, 0])).unwrap();
        let r = nob_dichotomy_check(&inf, &LatticeNorm::SUP).unwrap();
        assert!(!r.measure_finite && !r.nob_by_truncation && r.holds);
        let fin =
            RegularOperator::nat(2, BTreeMap::from([(0, v(&[1, 0])), (3, v(&[2, 1])), (7, v(&[0, 5]))]), v(&[0, 0]))
                .unwrap();
        let r = nob_dichotomy_check(&fin, &LatticeNorm::SUP).unwrap();
        assert!(r.measure_finite && r.nob_by_truncation && r.holds);
        assert_eq!(r.regular_norm, Some(int(6)));
        let zero = RegularOperator::zero(&Space::Nat, 2);
        assert!(nob_dichotomy_check(&zero, &LatticeNorm::SUP).unwrap().holds);
        let far = RegularOperator::nat(1, BTreeMap::from([(100, v(&[1]))]), v(&[0])).unwrap();
        assert!(nob_dichotomy_check(&far, &LatticeNorm::SUP).unwrap().holds);
    }

    #[test]
    fn psi_examples() {
        let mu_e = point_mass(&space3(), 1, &v(&[1, 1])).unwrap();
        assert_eq!(mu_e.eval(&FiniteSet::from_indices([1, 2]).into()).unwrap(), v(&[1, 1]));
        assert_eq!(mu_e.eval(&FiniteSet::from_indices([0, 2]).into()).unwrap(), v(&[0, 0]));
        let probe =
            PosMeasure::finite(space3(), 2, vec![v(&[1, 0]).into(), v(&[0, 2]).into(), v(&[1, 1]).into()]).unwrap();
        let r = psi_embedding_check(&space3(), 1, &v(&[1, 1]), &[probe], &LatticeNorm::SUP).unwrap();
        assert!(r.holds(), "{:?}", r.witnesses);
        assert_eq!(r.projections, vec![ExtElement::Finite(v(&[0, 2]))]);
    }

    #[test]
    fn transfer_examples() {
        let c = v(&[2, 3]);
        let inst = AbstractTransferInstance {
            mu_primed: vec![c.clone(); 3],
            nu_primed: vec![c.clone(); 3],
            mu_s: c.clone(),
            nu_s: c.clone(),
        };
        assert!(regularity_transfer_check(&inst, Extremum::Sup).unwrap().holds);
        assert!(regularity_transfer_check(&inst, Extremum::Inf).unwrap().holds);

        // ν(s′) ∈ {(0,0), (1,0)}, slack largest at s.
        let inst = AbstractTransferInstance {
            nu_primed: vec![v(&[0, 0]), v(&[1, 0])],
            mu_primed: vec![v(&[0, 1]), v(&[2, 2])],
            nu_s: v(&[1, 0]),
            mu_s: v(&[2, 2]),
        };
        let r = regularity_transfer_check(&inst, Extremum::Sup).unwrap();
        assert!(r.holds);
        assert!(regularity_transfer_check(&inst.negate(), Extremum::Inf).unwrap().holds);

        let bad = AbstractTransferInstance { nu_s: v(&[0, 0]), ..inst };
        assert!(matches!(regularity_transfer_check(&bad, Extremum::Sup), Err(Error::Hypothesis(_))));
    }
}
