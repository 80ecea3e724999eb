//! Positive `E⁺ ∪ {∞}`-valued and signed `E`-valued measures.
//!
//! Measures are stored atomwise, so σ-additivity holds by construction: the
//! value on a set is the (extended) sum of its atoms. On ℕ a positive measure
//! is an "exceptional entries + constant tail" table and takes the value `∞`
//! on every cofinite set as soon as the tail is nonzero.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{ext_add, ext_inf, ext_scale, ext_sup, ExtElement, LatticeElement, LatticeNorm};
use crate::scalar::{self, Scalar};
use crate::space::{FiniteSet, MeasurableSet, NatSet, Space, ENUMERATION_BOUND};
use crate::table::{Atoms, NatTable};

/// Which extremum a partition formula takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Sup,
    Inf,
}

/// Anything that can be evaluated on measurable sets, for use with
/// [`partition_formula`].
pub trait SetFunction {
    fn dim(&self) -> usize;
    fn space(&self) -> Space;
    fn value(&self, set: &MeasurableSet) -> Result<ExtElement>;
    /// Naturals where the function departs from its tail (empty on finite spaces).
    fn exceptional_keys(&self) -> BTreeSet<u64>;
}

fn check_dim(x: &LatticeElement, dim: usize) -> Result<()> {
    x.check_dim(dim)
}

fn check_finite_set(space: &crate::space::FiniteSpace, set: &MeasurableSet) -> Result<FiniteSet> {
    match set {
        MeasurableSet::Finite(s) => {
            space.check(*s)?;
            Ok(*s)
        }
        MeasurableSet::Nat(_) => Err(Error::SpaceMismatch),
    }
}

fn nat_set(set: &MeasurableSet) -> Result<&NatSet> {
    match set {
        MeasurableSet::Nat(s) => Ok(s),
        MeasurableSet::Finite(_) => Err(Error::SpaceMismatch),
    }
}

/// A σ-additive measure with values in `E⁺ ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PosMeasure {
    dim: usize,
    atoms: Atoms<ExtElement>,
}

impl PosMeasure {
    /// Builds a measure from per-atom values; `∞` is allowed only on finite spaces.
    pub fn from_atoms(dim: usize, atoms: Atoms<ExtElement>) -> Result<Self> {
        for v in atoms.stored() {
            match v {
                ExtElement::Finite(x) => {
                    check_dim(x, dim)?;
                    if !x.is_positive() {
                        return Err(Error::NotPositive(x.to_string()));
                    }
                }
                ExtElement::Infinity if matches!(atoms, Atoms::Nat(_)) => {
                    return Err(Error::InfiniteValue("atom values of a measure on ℕ".into()));
                }
                ExtElement::Infinity => {}
            }
        }
        Ok(Self { dim, atoms })
    }

    pub fn finite(space: crate::space::FiniteSpace, dim: usize, values: Vec<ExtElement>) -> Result<Self> {
        Self::from_atoms(dim, Atoms::finite(space, values)?)
    }

    /// A measure on ℕ: `exceptional[n]` on listed points, `tail` on every other point.
    pub fn nat(dim: usize, exceptional: BTreeMap<u64, LatticeElement>, tail: LatticeElement) -> Result<Self> {
        let table = NatTable::new(
            exceptional.into_iter().map(|(k, v)| (k, ExtElement::Finite(v))).collect(),
            ExtElement::Finite(tail),
        );
        Self::from_atoms(dim, Atoms::Nat(table))
    }

    pub fn zero(space: &Space, dim: usize) -> Self {
        let z = ExtElement::zero(dim);
        let atoms = match space {
            Space::Finite(s) => Atoms::Finite { space: s.clone(), values: vec![z; s.len()] },
            Space::Nat => Atoms::Nat(NatTable::constant(z)),
        };
        Self { dim, atoms }
    }

    pub fn atoms(&self) -> &Atoms<ExtElement> {
        &self.atoms
    }

    /// The tail of a measure on ℕ.
    pub fn nat_tail(&self) -> Option<&LatticeElement> {
        match &self.atoms {
            Atoms::Nat(t) => t.tail().finite(),
            Atoms::Finite { .. } => None,
        }
    }

    pub fn eval(&self, set: &MeasurableSet) -> Result<ExtElement> {
        match &self.atoms {
            Atoms::Finite { space, values } => {
                let s = check_finite_set(space, set)?;
                Ok(s.iter().fold(ExtElement::zero(self.dim), |acc, i| ext_add(&acc, &values[i])))
            }
            Atoms::Nat(t) => {
                let zero = ExtElement::zero(self.dim);
                match nat_set(set)? {
                    NatSet::Fin(s) => Ok(s.iter().fold(zero, |acc, n| ext_add(&acc, t.get(*n)))),
                    NatSet::CoFin(excluded) => {
                        if t.tail() != &zero {
                            return Ok(ExtElement::Infinity);
                        }
                        Ok(t.exceptional()
                            .iter()
                            .filter(|(k, _)| !excluded.contains(k))
                            .fold(zero, |acc, (_, v)| ext_add(&acc, v)))
                    }
                }
            }
        }
    }

    pub fn total(&self) -> ExtElement {
        self.eval(&self.atoms.space().full()).expect("full set belongs to the space")
    }

    /// Finite means `μ(X) ∈ E`.
    pub fn is_finite(&self) -> bool {
        self.total().is_finite()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: other.dim })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self { dim: self.dim, atoms: self.atoms.zip_with(&other.atoms, ext_add)? })
    }

    pub fn scale(&self, r: &Scalar) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeScalar(scalar::format(r)));
        }
        let dim = self.dim;
        Ok(Self { dim, atoms: self.atoms.map(|v| ext_scale(r, v, dim).expect("r >= 0")) })
    }

    /// The supremum `μ ∨ ν` in the cone of measures, computed atomwise.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let atoms = self.atoms.zip_with(&other.atoms, |a, b| ext_sup([a, b]).expect("two operands"))?;
        Ok(Self { dim: self.dim, atoms })
    }

    /// The infimum `μ ∧ ν` of two finite measures, computed atomwise.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        if !self.is_finite() || !other.is_finite() {
            return Err(Error::InfiniteOperand);
        }
        let atoms = self.atoms.zip_with(&other.atoms, |a, b| ext_inf([a, b]).expect("two operands"))?;
        Ok(Self { dim: self.dim, atoms })
    }

    /// Atomwise (equivalently, setwise) `self ≤ other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self.atoms.zip_with(&other.atoms, |a, b| a.le(b))?.all(|ok| *ok))
    }

    /// `μ − ν` for finite `ν ≤ μ`; the difference is again a positive measure.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.to_signed()?.sub(&other.to_signed()?)?.to_pos()
    }

    pub fn to_signed(&self) -> Result<SignedMeasure> {
        if !self.is_finite() {
            return Err(Error::InfiniteValue("signed measures take values in E".into()));
        }
        let atoms = self.atoms.map(|v| v.finite().expect("finite measure").clone());
        SignedMeasure::from_atoms(self.dim, atoms)
    }
}

impl SetFunction for PosMeasure {
    fn dim(&self) -> usize {
        self.dim
    }

    fn space(&self) -> Space {
        self.atoms.space()
    }

    fn value(&self, set: &MeasurableSet) -> Result<ExtElement> {
        self.eval(set)
    }

    fn exceptional_keys(&self) -> BTreeSet<u64> {
        match &self.atoms {
            Atoms::Nat(t) => t.keys(),
            Atoms::Finite { .. } => BTreeSet::new(),
        }
    }
}

/// A σ-additive `E`-valued measure; on ℕ it has finite support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedMeasure {
    dim: usize,
    atoms: Atoms<LatticeElement>,
}

impl SignedMeasure {
    pub fn from_atoms(dim: usize, atoms: Atoms<LatticeElement>) -> Result<Self> {
        for v in atoms.stored() {
            check_dim(v, dim)?;
        }
        if let Atoms::Nat(t) = &atoms {
            if !t.tail().is_zero() {
                return Err(Error::InfiniteValue("a signed measure on ℕ must have zero tail".into()));
            }
        }
        Ok(Self { dim, atoms })
    }

    pub fn finite(space: crate::space::FiniteSpace, dim: usize, values: Vec<LatticeElement>) -> Result<Self> {
        Self::from_atoms(dim, Atoms::finite(space, values)?)
    }

    pub fn nat(dim: usize, support: BTreeMap<u64, LatticeElement>) -> Result<Self> {
        Self::from_atoms(dim, Atoms::Nat(NatTable::new(support, LatticeElement::zero(dim))))
    }

    pub fn zero(space: &Space, dim: usize) -> Self {
        let z = LatticeElement::zero(dim);
        let atoms = match space {
            Space::Finite(s) => Atoms::Finite { space: s.clone(), values: vec![z; s.len()] },
            Space::Nat => Atoms::Nat(NatTable::constant(z)),
        };
        Self { dim, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> Space {
        self.atoms.space()
    }

    pub fn atoms(&self) -> &Atoms<LatticeElement> {
        &self.atoms
    }

    pub fn eval(&self, set: &MeasurableSet) -> Result<LatticeElement> {
        let zero = LatticeElement::zero(self.dim);
        match &self.atoms {
            Atoms::Finite { space, values } => {
                let s = check_finite_set(space, set)?;
                Ok(s.iter().fold(zero, |acc, i| acc.add(&values[i])))
            }
            Atoms::Nat(t) => {
                let set = nat_set(set)?;
                Ok(t.exceptional().iter().filter(|(k, _)| set.contains(**k)).fold(zero, |acc, (_, v)| acc.add(v)))
            }
        }
    }

    pub fn total(&self) -> LatticeElement {
        self.eval(&self.atoms.space().full()).expect("full set belongs to the space")
    }

    fn combine(&self, other: &Self, f: impl Fn(&LatticeElement, &LatticeElement) -> LatticeElement) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(Self { dim: self.dim, atoms: self.atoms.zip_with(&other.atoms, f)? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::sub)
    }

    pub fn scale(&self, r: &Scalar) -> Self {
        Self { dim: self.dim, atoms: self.atoms.map(|v| v.scale(r)) }
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, atoms: self.atoms.map(LatticeElement::neg) }
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::join)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::meet)
    }

    pub fn le(&self, other: &Self) -> Result<bool> {
        Ok(other.sub(self)?.is_positive())
    }

    pub fn is_positive(&self) -> bool {
        self.atoms.all(LatticeElement::is_positive)
    }

    fn lift(&self, f: impl Fn(&LatticeElement) -> LatticeElement) -> PosMeasure {
        PosMeasure { dim: self.dim, atoms: self.atoms.map(|v| ExtElement::Finite(f(v))) }
    }

    pub fn pos_part(&self) -> PosMeasure {
        self.lift(LatticeElement::pos_part)
    }

    pub fn neg_part(&self) -> PosMeasure {
        self.lift(LatticeElement::neg_part)
    }

    pub fn abs(&self) -> PosMeasure {
        self.lift(LatticeElement::abs)
    }

    /// Reinterprets a positive signed measure as a measure in the cone.
    pub fn to_pos(&self) -> Result<PosMeasure> {
        if let Some(v) = self.atoms.stored().into_iter().find(|v| !v.is_positive()) {
            return Err(Error::NotPositive(v.to_string()));
        }
        Ok(self.lift(LatticeElement::clone))
    }
}

impl SetFunction for SignedMeasure {
    fn dim(&self) -> usize {
        self.dim
    }

    fn space(&self) -> Space {
        self.atoms.space()
    }

    fn value(&self, set: &MeasurableSet) -> Result<ExtElement> {
        self.eval(set).map(ExtElement::Finite)
    }

    fn exceptional_keys(&self) -> BTreeSet<u64> {
        match &self.atoms {
            Atoms::Nat(t) => t.keys(),
            Atoms::Finite { .. } => BTreeSet::new(),
        }
    }
}

/// `‖μ‖ = ‖ |μ|(X) ‖`.
pub fn measure_norm(norm: &LatticeNorm, mu: &SignedMeasure) -> Scalar {
    let total = mu.abs().total();
    norm.norm(total.finite().expect("|μ| of a signed measure is finite"))
}

/// Brute-force partition formula
/// `ext(Γ ⊆ Δ) μ(Γ) + ν(Δ∖Γ)` where `ext` is `sup` or `inf`.
///
/// On finite spaces every measurable `Γ ⊆ Δ` is enumerated (`|Δ| ≤ 16`). On ℕ
/// only `Γ = A` and `Γ = A ∪ (Δ∖K)` for `A ⊆ K∩Δ` are enumerated, where `K`
/// collects the exceptional points of both functions: off `K` each point
/// contributes a fixed tail value, so per coordinate the extremum puts all of
/// `Δ∖K` on one side.
pub fn partition_formula<M: SetFunction, N: SetFunction>(
    mu: &M,
    nu: &N,
    delta: &MeasurableSet,
    mode: Extremum,
) -> Result<ExtElement> {
    let values = partition_values(mu, nu, delta)?;
    match mode {
        Extremum::Sup => ext_sup(&values),
        Extremum::Inf => ext_inf(&values),
    }
}

/// Both extrema of [`partition_formula`] from a single enumeration.
pub fn partition_bounds<M: SetFunction, N: SetFunction>(
    mu: &M,
    nu: &N,
    delta: &MeasurableSet,
) -> Result<(ExtElement, ExtElement)> {
    let values = partition_values(mu, nu, delta)?;
    Ok((ext_sup(&values)?, ext_inf(&values)?))
}

fn partition_values<M: SetFunction, N: SetFunction>(mu: &M, nu: &N, delta: &MeasurableSet) -> Result<Vec<ExtElement>> {
    if mu.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), found: nu.dim() });
    }
    let values = match (&mu.space(), delta) {
        (Space::Finite(space), MeasurableSet::Finite(d)) => {
            space.check(*d)?;
            let members: Vec<usize> = d.iter().collect();
            if members.len() > ENUMERATION_BOUND {
                return Err(Error::EnumerationBound { size: members.len(), bound: ENUMERATION_BOUND });
            }
            let mu_table = subset_values(mu, &members)?;
            let nu_table = subset_values(nu, &members)?;
            let full = mu_table.len() - 1;
            (0..mu_table.len()).map(|j| ext_add(&mu_table[j], &nu_table[full ^ j])).collect::<Vec<_>>()
        }
        (Space::Nat, MeasurableSet::Nat(d)) => {
            let keys: Vec<u64> =
                mu.exceptional_keys().union(&nu.exceptional_keys()).copied().filter(|k| d.contains(*k)).collect();
            if keys.len() > ENUMERATION_BOUND {
                return Err(Error::EnumerationBound { size: keys.len(), bound: ENUMERATION_BOUND });
            }
            let rest = d.difference(&NatSet::fin(keys.iter().copied()));
            let mut out = Vec::with_capacity(2 << keys.len());
            for j in 0u64..(1 << keys.len()) {
                let a = NatSet::fin(keys.iter().enumerate().filter(|(i, _)| j & (1 << i) != 0).map(|(_, k)| *k));
                for gamma in [a.clone(), a.union(&rest)] {
                    let complement = d.difference(&gamma);
                    out.push(ext_add(&mu.value(&gamma.into())?, &nu.value(&complement.into())?));
                }
            }
            out
        }
        _ => return Err(Error::SpaceMismatch),
    };
    Ok(values)
}

/// Values on all subsets of `members`, indexed by the bit pattern over `members`.
fn subset_values<M: SetFunction>(m: &M, members: &[usize]) -> Result<Vec<ExtElement>> {
    let singles: Vec<ExtElement> =
        members.iter().map(|&i| m.value(&FiniteSet::from_indices([i]).into())).collect::<Result<_>>()?;
    let mut table = Vec::with_capacity(1 << members.len());
    table.push(m.value(&FiniteSet::EMPTY.into())?);
    for j in 1usize..(1 << members.len()) {
        let low = j.trailing_zeros() as usize;
        let v = ext_add(&table[j & (j - 1)], &singles[low]);
        table.push(v);
    }
    Ok(table)
}

/// Least upper bound of a non-empty family, by pairwise joins.
pub fn sup_family(measures: &[PosMeasure]) -> Result<PosMeasure> {
    let (first, rest) = measures.split_first().ok_or(Error::EmptyFamily)?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.join(m))
}

/// Supremum of an increasing sequence that is constant from index `stable_from` on.
///
/// The result is the final term; it is checked against the setwise supremum
/// `sup_n μ_n(Δ)` on every probe set.
pub fn sup_increasing_sequence(seq: &[PosMeasure], stable_from: usize, probes: &[MeasurableSet]) -> Result<PosMeasure> {
    let last = seq.last().ok_or(Error::EmptyFamily)?;
    for (i, pair) in seq.windows(2).enumerate() {
        if !pair[0].le(&pair[1])? {
            return Err(Error::NotIncreasing(i));
        }
    }
    if stable_from >= seq.len() || seq[stable_from..].iter().any(|m| m != last) {
        return Err(Error::NotEventuallyConstant(stable_from));
    }
    for probe in probes {
        let values: Vec<ExtElement> = seq.iter().map(|m| m.eval(probe)).collect::<Result<_>>()?;
        if ext_sup(&values)? != last.eval(probe)? {
            return Err(Error::Hypothesis("setwise supremum differs from the limit measure".into()));
        }
    }
    Ok(last.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::space::FiniteSpace;

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn fin(c: &[i64]) -> ExtElement {
        ExtElement::Finite(v(c))
    }

    fn space3() -> FiniteSpace {
        FiniteSpace::numbered(3).unwrap()
    }

    fn mu() -> PosMeasure {
        PosMeasure::finite(space3(), 2, vec![fin(&[1, 0]), fin(&[0, 2]), fin(&[1, 1])]).unwrap()
    }

    fn nu() -> PosMeasure {
        PosMeasure::finite(space3(), 2, vec![fin(&[0, 1]), fin(&[1, 1]), fin(&[2, 0])]).unwrap()
    }

    fn counter(x: &[i64]) -> PosMeasure {
        PosMeasure::nat(2, BTreeMap::new(), v(x)).unwrap()
    }

    fn all() -> MeasurableSet {
        space3().full().into()
    }

    #[test]
    fn evaluation() {
        assert_eq!(mu().eval(&all()).unwrap(), fin(&[2, 3]));
        assert_eq!(mu().eval(&FiniteSet::EMPTY.into()).unwrap(), fin(&[0, 0]));
        let c = counter(&[1, 0]);
        assert_eq!(c.eval(&NatSet::fin([1, 2]).into()).unwrap(), fin(&[2, 0]));
        assert_eq!(c.eval(&NatSet::all().into()).unwrap(), ExtElement::Infinity);
        assert_eq!(c.eval(&all()), Err(Error::SpaceMismatch));
        assert!(mu().eval(&FiniteSet::from_mask(0b1000).into()).is_err());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            PosMeasure::finite(space3(), 2, vec![fin(&[1, -1]), fin(&[0, 0]), fin(&[0, 0])]),
            Err(Error::NotPositive(_))
        ));
        assert!(matches!(
            PosMeasure::finite(space3(), 2, vec![fin(&[1]), fin(&[0, 0]), fin(&[0, 0])]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(SignedMeasure::from_atoms(1, Atoms::Nat(NatTable::constant(v(&[1])))).is_err());
    }

    #[test]
    fn addition_and_scaling() {
        assert_eq!(mu().add(&nu()).unwrap().eval(&all()).unwrap(), fin(&[5, 5]));
        assert_eq!(mu().scale(&int(0)).unwrap(), PosMeasure::zero(&Space::Finite(space3()), 2));
        assert!(matches!(mu().scale(&int(-1)), Err(Error::NegativeScalar(_))));
        let s = counter(&[1, 0]).add(&counter(&[0, 1])).unwrap();
        assert_eq!(s.nat_tail(), Some(&v(&[1, 1])));
        assert_eq!(s.eval(&NatSet::all().into()).unwrap(), ExtElement::Infinity);
        let other = PosMeasure::finite(FiniteSpace::numbered(2).unwrap(), 2, vec![fin(&[0, 0]); 2]).unwrap();
        assert_eq!(mu().add(&other), Err(Error::SpaceMismatch));
    }

    #[test]
    fn join_and_meet_examples() {
        let j = mu().join(&nu()).unwrap();
        assert_eq!(j.atoms().stored(), vec![&fin(&[1, 1]), &fin(&[1, 2]), &fin(&[2, 1])]);
        assert_eq!(j.eval(&all()).unwrap(), fin(&[4, 4]));
        assert_eq!(mu().join(&mu()).unwrap(), mu());

        let m = mu().meet(&nu()).unwrap();
        assert_eq!(m.atoms().stored(), vec![&fin(&[0, 0]), &fin(&[0, 1]), &fin(&[1, 0])]);
        assert_eq!(m.eval(&all()).unwrap(), fin(&[1, 1]));
        let zero = PosMeasure::zero(&Space::Finite(space3()), 2);
        assert_eq!(mu().meet(&zero).unwrap(), zero);

        let cj = counter(&[1, 0]).join(&counter(&[0, 1])).unwrap();
        assert_eq!(cj.nat_tail(), Some(&v(&[1, 1])));
        assert_eq!(cj.eval(&NatSet::all().into()).unwrap(), ExtElement::Infinity);
        assert_eq!(counter(&[1, 0]).meet(&counter(&[0, 1])), Err(Error::InfiniteOperand));
    }

    #[test]
    fn partition_formula_examples() {
        // Γ = {a1}: μ(Γ) + ν({a2,a3}) = (1,0) + (3,1) = (4,1).
        let one = mu().eval(&FiniteSet::from_indices([0]).into()).unwrap();
        let rest = nu().eval(&FiniteSet::from_indices([1, 2]).into()).unwrap();
        assert_eq!(ext_add(&one, &rest), fin(&[4, 1]));
        assert_eq!(partition_formula(&mu(), &nu(), &all(), Extremum::Sup).unwrap(), fin(&[4, 4]));
        assert_eq!(partition_formula(&mu(), &nu(), &all(), Extremum::Inf).unwrap(), fin(&[1, 1]));
        let n = NatSet::all().into();
        assert_eq!(
            partition_formula(&counter(&[1, 0]), &counter(&[0, 1]), &n, Extremum::Inf).unwrap(),
            ExtElement::Infinity
        );
        let big = FiniteSpace::numbered(17).unwrap();
        let z = PosMeasure::zero(&Space::Finite(big.clone()), 1);
        assert!(matches!(
            partition_formula(&z, &z, &big.full().into(), Extremum::Sup),
            Err(Error::EnumerationBound { .. })
        ));
    }

    #[test]
    fn families() {
        assert_eq!(sup_family(&[mu()]).unwrap(), mu());
        let j = mu().join(&nu()).unwrap();
        assert_eq!(sup_family(&[mu(), nu(), j.clone()]).unwrap(), j);
        assert_eq!(sup_family(&[]), Err(Error::EmptyFamily));
        let s2 = FiniteSpace::numbered(2).unwrap();
        let d1 = PosMeasure::finite(s2.clone(), 2, vec![fin(&[1, 0]), fin(&[0, 0])]).unwrap();
        let d2 = PosMeasure::finite(s2.clone(), 2, vec![fin(&[0, 0]), fin(&[0, 1])]).unwrap();
        let both = PosMeasure::finite(s2, 2, vec![fin(&[1, 0]), fin(&[0, 1])]).unwrap();
        assert_eq!(sup_family(&[d1, d2]).unwrap(), both);
    }

    #[test]
    fn increasing_sequences() {
        let probes: Vec<MeasurableSet> =
            space3().subsets_of(space3().full()).unwrap().into_iter().map(Into::into).collect();
        assert_eq!(sup_increasing_sequence(&[mu(), mu(), mu()], 0, &probes).unwrap(), mu());
        let seq: Vec<PosMeasure> = (1..=5).map(|n| mu().scale(&int(n.min(3))).unwrap()).collect();
        assert_eq!(sup_increasing_sequence(&seq, 2, &probes).unwrap(), mu().scale(&int(3)).unwrap());
        assert_eq!(sup_increasing_sequence(&seq, 1, &probes), Err(Error::NotEventuallyConstant(1)));
        let down = vec![mu().scale(&int(2)).unwrap(), mu()];
        assert_eq!(sup_increasing_sequence(&down, 1, &probes), Err(Error::NotIncreasing(0)));

        // Raise one atom at a time.
        let z = Space::Finite(space3());
        let step = |k: usize| {
            let vals =
                (0..3).map(|i| if i < k { mu().atoms().stored()[i].clone() } else { ExtElement::zero(2) }).collect();
            PosMeasure::finite(space3(), 2, vals).unwrap()
        };
        let seq = vec![PosMeasure::zero(&z, 2), step(1), step(2), step(3), step(3)];
        assert_eq!(sup_increasing_sequence(&seq, 3, &probes).unwrap(), sup_family(&seq).unwrap());
    }

    #[test]
    fn signed_parts() {
        let p = FiniteSpace::new(["p"]).unwrap();
        let hahn = SignedMeasure::finite(p.clone(), 2, vec![v(&[1, -1])]).unwrap();
        let full: MeasurableSet = p.full().into();
        assert_eq!(hahn.pos_part().eval(&full).unwrap(), fin(&[1, 0]));
        assert_eq!(hahn.neg_part().eval(&full).unwrap(), fin(&[0, 1]));
        assert_eq!(mu().to_signed().unwrap().neg_part(), PosMeasure::zero(&Space::Finite(space3()), 2));

        let s2 = FiniteSpace::numbered(2).unwrap();
        let sm = SignedMeasure::finite(s2.clone(), 2, vec![v(&[1, -1]), v(&[-2, 3])]).unwrap();
        assert_eq!(sm.abs().total(), fin(&[3, 4]));
        assert_eq!(measure_norm(&LatticeNorm::SUP, &sm), int(4));
        assert_eq!(measure_norm(&LatticeNorm::SUP, &SignedMeasure::zero(&Space::Finite(s2), 2)), int(0));
        let recombined = sm.pos_part().to_signed().unwrap().sub(&sm.neg_part().to_signed().unwrap()).unwrap();
        assert_eq!(recombined, sm);
    }

    #[test]
    fn al_additivity_example() {
        let sum = mu().add(&nu()).unwrap().to_signed().unwrap();
        let lhs = measure_norm(&LatticeNorm::ONE, &mu().to_signed().unwrap())
            + measure_norm(&LatticeNorm::ONE, &nu().to_signed().unwrap());
        assert_eq!(lhs, measure_norm(&LatticeNorm::ONE, &sum));
        assert_eq!(lhs, int(10));
    }

    #[test]
    fn signed_order() {
        let a = mu().to_signed().unwrap();
        let b = mu().add(&nu()).unwrap().to_signed().unwrap();
        assert!(a.le(&b).unwrap());
        assert!(!b.le(&a).unwrap());
        assert_eq!(b.sub(&a).unwrap().to_pos().unwrap(), nu());
        assert_eq!(mu().add(&nu()).unwrap().difference(&mu()).unwrap(), nu());
        assert!(matches!(mu().difference(&nu()), Err(Error::NotPositive(_))));
    }
}
