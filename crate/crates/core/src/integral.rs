//! The order integral of simple (finite spaces) and eventually-constant (ℕ)
//! rational functions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{ext_add, ext_scale, ext_sup, ExtElement, LatticeElement};
use crate::measure::{PosMeasure, SignedMeasure};
use crate::scalar::{self, Scalar};
use crate::space::{FiniteSet, FiniteSpace, MeasurableSet, NatSet, Space};
use crate::table::{Atoms, NatTable};

/// A measurable function taking finitely many values: one value per atom, or
/// an eventually-constant sequence on ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleFunction {
    atoms: Atoms<Scalar>,
}

impl SimpleFunction {
    pub fn from_atoms(atoms: Atoms<Scalar>) -> Self {
        Self { atoms }
    }

    pub fn finite(space: FiniteSpace, values: Vec<Scalar>) -> Result<Self> {
        Ok(Self { atoms: Atoms::finite(space, values)? })
    }

    pub fn from_ints(space: FiniteSpace, values: &[i64]) -> Result<Self> {
        Self::finite(space, values.iter().map(|&v| scalar::int(v)).collect())
    }

    pub fn nat(exceptional: BTreeMap<u64, Scalar>, tail: Scalar) -> Self {
        Self { atoms: Atoms::Nat(NatTable::new(exceptional, tail)) }
    }

    pub fn constant(space: &Space, c: Scalar) -> Self {
        let atoms = match space {
            Space::Finite(s) => Atoms::Finite { space: s.clone(), values: vec![c; s.len()] },
            Space::Nat => Atoms::Nat(NatTable::constant(c)),
        };
        Self { atoms }
    }

    /// The indicator `χ_Δ`.
    pub fn indicator(space: &Space, set: &MeasurableSet) -> Result<Self> {
        match (space, set) {
            (Space::Finite(s), MeasurableSet::Finite(d)) => {
                s.check(*d)?;
                let values = (0..s.len()).map(|i| if d.contains(i) { scalar::one() } else { scalar::zero() }).collect();
                Self::finite(s.clone(), values)
            }
            (Space::Nat, MeasurableSet::Nat(NatSet::Fin(m))) => {
                Ok(Self::nat(m.iter().map(|&k| (k, scalar::one())).collect(), scalar::zero()))
            }
            (Space::Nat, MeasurableSet::Nat(NatSet::CoFin(m))) => {
                Ok(Self::nat(m.iter().map(|&k| (k, scalar::zero())).collect(), scalar::one()))
            }
            _ => Err(Error::SpaceMismatch),
        }
    }

    pub fn atoms(&self) -> &Atoms<Scalar> {
        &self.atoms
    }

    pub fn space(&self) -> Space {
        self.atoms.space()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self { atoms: self.atoms.map(f) }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        Ok(Self { atoms: self.atoms.zip_with(&other.atoms, f)? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, r: &Scalar) -> Self {
        self.map(|a| a * r)
    }

    pub fn pos_part(&self) -> Self {
        self.map(|a| if a.is_positive() { a.clone() } else { Scalar::zero() })
    }

    pub fn neg_part(&self) -> Self {
        self.map(|a| if a.is_negative() { -a } else { Scalar::zero() })
    }

    pub fn abs(&self) -> Self {
        self.map(Signed::abs)
    }

    pub fn is_nonneg(&self) -> bool {
        self.atoms.all(|a| !a.is_negative())
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        Ok(self.atoms.zip_with(&other.atoms, |a, b| a <= b)?.all(|ok| *ok))
    }

    /// `‖f‖_∞`.
    pub fn sup_norm(&self) -> Scalar {
        self.atoms.stored().into_iter().map(Signed::abs).fold(Scalar::zero(), |m, v| m.max(v))
    }

    /// Zero outside finitely many points (always true on a finite space).
    pub fn is_eventually_zero(&self) -> bool {
        match &self.atoms {
            Atoms::Nat(t) => t.tail().is_zero(),
            Atoms::Finite { .. } => true,
        }
    }

    /// The canonical decomposition `f = Σ r·χ_{f = r}` over distinct values `r`.
    pub fn level_sets(&self) -> Vec<(Scalar, MeasurableSet)> {
        match &self.atoms {
            Atoms::Finite { values, .. } => {
                let mut levels: BTreeMap<&Scalar, u64> = BTreeMap::new();
                for (i, v) in values.iter().enumerate() {
                    *levels.entry(v).or_default() |= 1 << i;
                }
                levels.into_iter().map(|(v, mask)| (v.clone(), FiniteSet::from_mask(mask).into())).collect()
            }
            Atoms::Nat(t) => {
                let mut levels: BTreeMap<&Scalar, BTreeSet<u64>> = BTreeMap::new();
                for (k, v) in t.exceptional() {
                    levels.entry(v).or_default().insert(*k);
                }
                let mut out: Vec<(Scalar, MeasurableSet)> =
                    levels.into_iter().map(|(v, keys)| (v.clone(), NatSet::Fin(keys).into())).collect();
                out.push((t.tail().clone(), NatSet::CoFin(t.keys()).into()));
                out
            }
        }
    }

    /// A finer decomposition: one cell per atom, or on ℕ one singleton per
    /// point of `extra ∪ exceptional(f)` plus the cofinite remainder.
    pub fn atomwise_cells(&self, extra: &BTreeSet<u64>) -> Vec<(Scalar, MeasurableSet)> {
        match &self.atoms {
            Atoms::Finite { values, .. } => {
                values.iter().enumerate().map(|(i, v)| (v.clone(), FiniteSet::from_indices([i]).into())).collect()
            }
            Atoms::Nat(t) => {
                let keys: BTreeSet<u64> = t.keys().union(extra).copied().collect();
                let mut out: Vec<(Scalar, MeasurableSet)> =
                    keys.iter().map(|&k| (t.get(k).clone(), NatSet::fin([k]).into())).collect();
                out.push((t.tail().clone(), NatSet::CoFin(keys).into()));
                out
            }
        }
    }
}

fn check_space(f: &SimpleFunction, mu: &PosMeasure) -> Result<()> {
    if f.atoms.same_space(mu.atoms()) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

fn weighted_sum(cells: &[(Scalar, MeasurableSet)], mu: &PosMeasure) -> Result<ExtElement> {
    let dim = crate::measure::SetFunction::dim(mu);
    cells.iter().try_fold(ExtElement::zero(dim), |acc, (r, set)| Ok(ext_add(&acc, &ext_scale(r, &mu.eval(set)?, dim)?)))
}

fn require_nonneg(f: &SimpleFunction) -> Result<()> {
    if f.is_nonneg() {
        Ok(())
    } else {
        Err(Error::NotPositive("integrand takes negative values".into()))
    }
}

/// `∮ f dμ = Σ r·μ(f = r)` for `f ≥ 0`, with `0·∞ = 0`.
pub fn integrate_pos(f: &SimpleFunction, mu: &PosMeasure) -> Result<ExtElement> {
    check_space(f, mu)?;
    require_nonneg(f)?;
    weighted_sum(&f.level_sets(), mu)
}

/// The same integral through the atomwise refinement of the level sets.
pub fn integrate_pos_by_refinement(f: &SimpleFunction, mu: &PosMeasure) -> Result<ExtElement> {
    check_space(f, mu)?;
    require_nonneg(f)?;
    let extra = crate::measure::SetFunction::exceptional_keys(mu);
    weighted_sum(&f.atomwise_cells(&extra), mu)
}

/// `∮ f dμ = ∮ f⁺ dμ − ∮ f⁻ dμ`, defined when both parts are finite.
pub fn integrate(f: &SimpleFunction, mu: &PosMeasure) -> Result<LatticeElement> {
    let plus = integrate_pos(&f.pos_part(), mu)?;
    let minus = integrate_pos(&f.neg_part(), mu)?;
    match (plus, minus) {
        (ExtElement::Finite(p), ExtElement::Finite(m)) => Ok(p.sub(&m)),
        _ => Err(Error::NotIntegrable("a one-sided integral is infinite".into())),
    }
}

/// Integral against `ν₁ − ν₂` for finite positive `ν₁`, `ν₂`.
pub fn integrate_difference(f: &SimpleFunction, nu1: &PosMeasure, nu2: &PosMeasure) -> Result<LatticeElement> {
    Ok(integrate(f, nu1)?.sub(&integrate(f, nu2)?))
}

/// Integral against a signed measure via its Jordan parts `μ⁺ − μ⁻`.
pub fn integrate_signed(f: &SimpleFunction, mu: &SignedMeasure) -> Result<LatticeElement> {
    integrate_difference(f, &mu.pos_part(), &mu.neg_part())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    /// `|∮ f dμ|`
    pub lhs: String,
    /// `∮ |f| d|μ|`
    pub rhs: String,
    pub holds: bool,
}

/// Checks `|∮ f dμ| ≤ ∮ |f| d|μ|` coordinatewise.
pub fn triangle_check(f: &SimpleFunction, mu: &SignedMeasure) -> Result<TriangleReport> {
    let lhs = integrate_signed(f, mu)?.abs();
    let rhs = integrate_pos(&f.abs(), &mu.abs())?;
    let holds = ExtElement::Finite(lhs.clone()).le(&rhs);
    Ok(TriangleReport { lhs: lhs.to_string(), rhs: rhs.to_string(), holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotoneReport {
    pub integrals: Vec<String>,
    pub supremum: String,
    pub limit: String,
    pub holds: bool,
}

/// For a pointwise increasing sequence of nonnegative functions, constant
/// from `stable_from` on, checks that the integrals increase and that their
/// supremum is the integral of the limit.
pub fn monotone_convergence_check(
    seq: &[SimpleFunction],
    stable_from: usize,
    mu: &PosMeasure,
) -> Result<MonotoneReport> {
    let last = seq.last().ok_or(Error::EmptyFamily)?;
    for (i, pair) in seq.windows(2).enumerate() {
        if !pair[0].le(&pair[1])? {
            return Err(Error::NotIncreasing(i));
        }
    }
    if stable_from >= seq.len() || seq[stable_from..].iter().any(|f| f != last) {
        return Err(Error::NotEventuallyConstant(stable_from));
    }
    let integrals: Vec<ExtElement> = seq.iter().map(|f| integrate_pos(f, mu)).collect::<Result<_>>()?;
    let increasing = integrals.windows(2).all(|w| w[0].le(&w[1]));
    let supremum = ext_sup(&integrals)?;
    let limit = integrate_pos(last, mu)?;
    Ok(MonotoneReport {
        integrals: integrals.iter().map(ToString::to_string).collect(),
        supremum: supremum.to_string(),
        limit: limit.to_string(),
        holds: increasing && supremum == limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn space3() -> FiniteSpace {
        FiniteSpace::numbered(3).unwrap()
    }

    fn mu() -> PosMeasure {
        let vals = [[1, 0], [0, 2], [1, 1]].iter().map(|c| ExtElement::Finite(v(c))).collect();
        PosMeasure::finite(space3(), 2, vals).unwrap()
    }

    fn f(vals: &[i64]) -> SimpleFunction {
        SimpleFunction::from_ints(space3(), vals).unwrap()
    }

    fn counter() -> PosMeasure {
        PosMeasure::nat(2, BTreeMap::new(), v(&[1, 0])).unwrap()
    }

    #[test]
    fn positive_integrals() {
        // 2(1,0) + 1(0,2) + 3(1,1)
        assert_eq!(integrate_pos(&f(&[2, 1, 3]), &mu()).unwrap(), ExtElement::Finite(v(&[5, 5])));
        assert_eq!(integrate_pos(&f(&[0, 0, 0]), &mu()).unwrap(), ExtElement::Finite(v(&[0, 0])));
        let one = SimpleFunction::constant(&Space::Nat, int(1));
        assert_eq!(integrate_pos(&one, &counter()).unwrap(), ExtElement::Infinity);
        let zero = SimpleFunction::constant(&Space::Nat, int(0));
        assert_eq!(integrate_pos(&zero, &counter()).unwrap(), ExtElement::Finite(v(&[0, 0])));
        let inf_atom = PosMeasure::finite(
            space3(),
            2,
            vec![ExtElement::Infinity, ExtElement::Finite(v(&[0, 2])), ExtElement::Finite(v(&[1, 1]))],
        )
        .unwrap();
        assert_eq!(integrate_pos(&f(&[0, 1, 1]), &inf_atom).unwrap(), ExtElement::Finite(v(&[1, 3])));
        assert!(integrate_pos(&f(&[-1, 0, 0]), &mu()).is_err());
        assert_eq!(integrate_pos(&one, &mu()), Err(Error::SpaceMismatch));
    }

    #[test]
    fn signed_integrals() {
        // 2(1,0) − (0,2) + 3(1,1)
        assert_eq!(integrate(&f(&[2, -1, 3]), &mu()).unwrap(), v(&[5, 1]));
        let zero = PosMeasure::zero(&Space::Finite(space3()), 2);
        assert_eq!(integrate(&f(&[2, -1, 3]), &zero).unwrap(), v(&[0, 0]));
        let sm = SignedMeasure::finite(space3(), 2, vec![v(&[1, 3]), v(&[-2, 0]), v(&[0, -1])]).unwrap();
        for mask in 0..8 {
            let d: MeasurableSet = FiniteSet::from_mask(mask).into();
            let chi = SimpleFunction::indicator(&Space::Finite(space3()), &d).unwrap();
            assert_eq!(integrate_signed(&chi, &sm).unwrap(), sm.eval(&d).unwrap());
        }
        let alt = SimpleFunction::nat(BTreeMap::from([(0, int(1))]), int(-1));
        assert!(matches!(integrate(&alt, &counter()), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn triangle_examples() {
        let sm = mu().to_signed().unwrap();
        let r = triangle_check(&f(&[2, -1, 3]), &sm).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.holds), ("(5,1)", "(5,5)", true));
        let r = triangle_check(&f(&[2, 1, 3]), &sm).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let s2 = FiniteSpace::numbered(2).unwrap();
        let m2 = SignedMeasure::finite(s2.clone(), 2, vec![v(&[1, 0]), v(&[1, 0])]).unwrap();
        let r = triangle_check(&SimpleFunction::from_ints(s2, &[1, -1]).unwrap(), &m2).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.holds), ("(0,0)", "(2,0)", true));
    }

    #[test]
    fn monotone_convergence() {
        let g = f(&[2, 1, 3]);
        let r = monotone_convergence_check(&[g.clone(), g.clone()], 0, &mu()).unwrap();
        assert!(r.holds);
        let seq: Vec<SimpleFunction> = (0..5).map(|n| g.scale(&ratio(n.min(2), 2))).collect();
        let r = monotone_convergence_check(&seq, 2, &mu()).unwrap();
        assert!(r.holds);
        assert_eq!(r.supremum, "(5,5)");
        // Raise the level sets one at a time: {3}, then {1,3}, then everything.
        let seq = vec![f(&[0, 0, 3]), f(&[2, 0, 3]), f(&[2, 1, 3]), f(&[2, 1, 3])];
        let r = monotone_convergence_check(&seq, 2, &mu()).unwrap();
        assert!(r.holds);
        assert_eq!(r.limit, "(5,5)");
        assert_eq!(monotone_convergence_check(&[g.clone(), f(&[0, 0, 0])], 1, &mu()), Err(Error::NotIncreasing(0)));
    }

    #[test]
    fn refinement_agrees_on_nat() {
        let m = PosMeasure::nat(2, BTreeMap::from([(3, v(&[2, 1]))]), v(&[0, 0])).unwrap();
        let g = SimpleFunction::nat(BTreeMap::from([(1, int(4)), (3, int(2))]), int(1));
        assert_eq!(integrate_pos(&g, &m).unwrap(), ExtElement::Finite(v(&[4, 2])));
        assert_eq!(integrate_pos_by_refinement(&g, &m).unwrap(), integrate_pos(&g, &m).unwrap());
    }
}
