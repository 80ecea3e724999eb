//! Regular operators from simple functions into `E`, stored by their values on
//! atom indicators ("columns").

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integral::SimpleFunction;
use crate::lattice::{LatticeElement, LatticeNorm};
use crate::scalar::{self, Scalar};
use crate::space::{FiniteSet, FiniteSpace, Space, ENUMERATION_BOUND};
use crate::table::{Atoms, NatTable};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularOperator {
    dim: usize,
    columns: Atoms<LatticeElement>,
}

impl RegularOperator {
    pub fn from_columns(dim: usize, columns: Atoms<LatticeElement>) -> Result<Self> {
        for c in columns.stored() {
            c.check_dim(dim)?;
        }
        Ok(Self { dim, columns })
    }

    pub fn finite(space: FiniteSpace, dim: usize, columns: Vec<LatticeElement>) -> Result<Self> {
        Self::from_columns(dim, Atoms::finite(space, columns)?)
    }

    /// Builds an operator on a finite space from its matrix, one row per
    /// coordinate of `E` and one column per atom.
    pub fn from_rows(space: FiniteSpace, rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.len();
        let columns =
            (0..space.len()).map(|j| LatticeElement::new(rows.iter().map(|r| scalar::int(r[j])).collect())).collect();
        Self::finite(space, dim, columns)
    }

    /// An operator on sequences: `exceptional[n]` at listed points and `tail` elsewhere.
    pub fn nat(dim: usize, exceptional: BTreeMap<u64, LatticeElement>, tail: LatticeElement) -> Result<Self> {
        Self::from_columns(dim, Atoms::Nat(NatTable::new(exceptional, tail)))
    }

    pub fn zero(space: &Space, dim: usize) -> Self {
        let z = LatticeElement::zero(dim);
        let columns = match space {
            Space::Finite(s) => Atoms::Finite { space: s.clone(), values: vec![z; s.len()] },
            Space::Nat => Atoms::Nat(NatTable::constant(z)),
        };
        Self { dim, columns }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> Space {
        self.columns.space()
    }

    pub fn columns(&self) -> &Atoms<LatticeElement> {
        &self.columns
    }

    pub fn nat_tail(&self) -> Option<&LatticeElement> {
        match &self.columns {
            Atoms::Nat(t) => Some(t.tail()),
            Atoms::Finite { .. } => None,
        }
    }

    /// `T(f) = Σ f(atom)·column(atom)`.
    ///
    /// On ℕ an operator with a nonzero tail column only accepts eventually-zero `f`.
    pub fn apply(&self, f: &SimpleFunction) -> Result<LatticeElement> {
        let zero = LatticeElement::zero(self.dim);
        match (&self.columns, f.atoms()) {
            (Atoms::Finite { space, values: cols }, Atoms::Finite { space: fs, values }) if space == fs => {
                Ok(cols.iter().zip(values).fold(zero, |acc, (c, v)| acc.add(&c.scale(v))))
            }
            (Atoms::Nat(cols), Atoms::Nat(values)) => {
                if !cols.tail().is_zero() && !f.is_eventually_zero() {
                    return Err(Error::NotInDomain(
                        "operator with nonzero tail column applied to a function that is not eventually zero".into(),
                    ));
                }
                let keys = cols.keys().union(&values.keys()).copied().collect::<Vec<_>>();
                Ok(keys.into_iter().fold(zero, |acc, k| acc.add(&cols.get(k).scale(values.get(k)))))
            }
            _ => Err(Error::SpaceMismatch),
        }
    }

    fn map(&self, f: impl Fn(&LatticeElement) -> LatticeElement) -> Self {
        Self { dim: self.dim, columns: self.columns.map(f) }
    }

    fn combine(&self, other: &Self, f: impl Fn(&LatticeElement, &LatticeElement) -> LatticeElement) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(Self { dim: self.dim, columns: self.columns.zip_with(&other.columns, f)? })
    }

    /// `|T|`: columnwise absolute values.
    pub fn modulus(&self) -> Self {
        self.map(LatticeElement::abs)
    }

    pub fn pos_part(&self) -> Self {
        self.map(LatticeElement::pos_part)
    }

    pub fn neg_part(&self) -> Self {
        self.map(LatticeElement::neg_part)
    }

    pub fn neg(&self) -> Self {
        self.map(LatticeElement::neg)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::sub)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::join)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeElement::meet)
    }

    pub fn is_positive(&self) -> bool {
        self.columns.all(LatticeElement::is_positive)
    }

    /// Columnwise `|self| ≤ |other|`.
    pub fn dominated_by(&self, other: &Self) -> Result<bool> {
        Ok(self.columns.zip_with(&other.columns, |a, b| a.abs().le(&b.abs()))?.all(|ok| *ok))
    }
}

fn finite_space(t: &RegularOperator) -> Result<&FiniteSpace> {
    match &t.columns {
        Atoms::Finite { space, .. } => Ok(space),
        Atoms::Nat(_) => Err(Error::SpaceMismatch),
    }
}

fn check_enumerable(n: usize) -> Result<()> {
    if n > ENUMERATION_BOUND {
        Err(Error::EnumerationBound { size: n, bound: ENUMERATION_BOUND })
    } else {
        Ok(())
    }
}

/// `sup { |T y| : |y| ≤ x }`, by enumerating the vertices `s ⊙ x` of the
/// box `[−x, x]` for sign vectors `s ∈ {−1, +1}^atoms`.
pub fn modulus_oracle(t: &RegularOperator, x: &SimpleFunction) -> Result<LatticeElement> {
    let space = finite_space(t)?;
    check_enumerable(space.len())?;
    if !x.is_nonneg() {
        return Err(Error::NotPositive("modulus oracle needs x ≥ 0".into()));
    }
    let n = space.len();
    let mut best: Option<LatticeElement> = None;
    for signs in 0u64..(1 << n) {
        let y = flip_signs(x, signs);
        let image = t.apply(&y)?.abs();
        best = Some(match best {
            Some(b) => b.join(&image),
            None => image,
        });
    }
    Ok(best.expect("at least one sign vector"))
}

fn flip_signs(f: &SimpleFunction, signs: u64) -> SimpleFunction {
    match f.atoms() {
        Atoms::Finite { space, values } => {
            let values =
                values.iter().enumerate().map(|(i, v)| if signs & (1 << i) != 0 { -v } else { v.clone() }).collect();
            SimpleFunction::finite(space.clone(), values).expect("same length")
        }
        Atoms::Nat(_) => f.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorNormReport {
    /// `t_T = sup { |T|x : x ≥ 0, ‖x‖ ≤ 1 }`, when it exists.
    pub t_t: Option<LatticeElement>,
    /// `‖T‖_r = ‖t_T‖`.
    #[serde(serialize_with = "scalar::serialize_opt")]
    pub regular_norm: Option<Scalar>,
    pub is_nob: bool,
}

/// Norm-to-order boundedness data for `T`.
///
/// On a finite space the positive unit ball has the top element `𝟙`, so
/// `t_T = |T|(𝟙)`. On ℕ, `T` is norm-to-order bounded exactly when its tail
/// column vanishes, and then `t_T` is the sum of the moduli of its columns.
pub fn nob_report(t: &RegularOperator, norm: &LatticeNorm) -> OperatorNormReport {
    let t_t = match &t.columns {
        Atoms::Finite { space, .. } => {
            let one = SimpleFunction::constant(&Space::Finite(space.clone()), scalar::one());
            Some(t.modulus().apply(&one).expect("same space"))
        }
        Atoms::Nat(cols) if cols.tail().is_zero() => {
            Some(LatticeElement::sum(t.dim, cols.exceptional().values().map(|c| c.abs()).collect::<Vec<_>>().iter()))
        }
        Atoms::Nat(_) => None,
    };
    OperatorNormReport { regular_norm: t_t.as_ref().map(|x| norm.norm(x)), is_nob: t_t.is_some(), t_t }
}

fn partition_images(t: &RegularOperator, s: &RegularOperator, delta: FiniteSet) -> Result<Vec<LatticeElement>> {
    let space = finite_space(t)?;
    if t.space() != s.space() {
        return Err(Error::SpaceMismatch);
    }
    space.check(delta)?;
    check_enumerable(delta.len())?;
    let whole = Space::Finite(space.clone());
    space
        .subsets_of(delta)?
        .into_iter()
        .map(|gamma| {
            let chi_gamma = SimpleFunction::indicator(&whole, &gamma.into())?;
            let chi_rest = SimpleFunction::indicator(&whole, &delta.difference(gamma).into())?;
            Ok(t.apply(&chi_gamma)?.add(&s.apply(&chi_rest)?))
        })
        .collect()
}

/// Riesz–Kantorovich supremum over disjoint decompositions of `χ_Δ`:
/// `sup_{Γ ⊆ Δ} T(χ_Γ) + S(χ_{Δ∖Γ})`.
pub fn rk_sup(t: &RegularOperator, s: &RegularOperator, delta: FiniteSet) -> Result<LatticeElement> {
    let images = partition_images(t, s, delta)?;
    Ok(images.iter().skip(1).fold(images[0].clone(), |acc, x| acc.join(x)))
}

/// The infimum counterpart of [`rk_sup`].
pub fn rk_inf(t: &RegularOperator, s: &RegularOperator, delta: FiniteSet) -> Result<LatticeElement> {
    let images = partition_images(t, s, delta)?;
    Ok(images.iter().skip(1).fold(images[0].clone(), |acc, x| acc.meet(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::space::NatSet;

    fn space3() -> FiniteSpace {
        FiniteSpace::numbered(3).unwrap()
    }

    fn t() -> RegularOperator {
        RegularOperator::from_rows(space3(), &[&[1, -2, 0], &[3, 0, -1]]).unwrap()
    }

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn sf(vals: &[i64]) -> SimpleFunction {
        SimpleFunction::from_ints(space3(), vals).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(t().apply(&sf(&[1, 0, 0])).unwrap(), v(&[1, 3]));
        assert_eq!(t().apply(&sf(&[1, 1, 1])).unwrap(), v(&[-1, 2]));
        let nat = RegularOperator::nat(2, BTreeMap::from([(5, v(&[0, 7]))]), v(&[1, 0])).unwrap();
        let chi5 = SimpleFunction::indicator(&Space::Nat, &NatSet::fin([5]).into()).unwrap();
        assert_eq!(nat.apply(&chi5).unwrap(), v(&[0, 7]));
        let chi2 = SimpleFunction::indicator(&Space::Nat, &NatSet::fin([2]).into()).unwrap();
        assert_eq!(nat.apply(&chi2).unwrap(), v(&[1, 0]));
        let one = SimpleFunction::constant(&Space::Nat, int(1));
        assert!(matches!(nat.apply(&one), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn modulus_examples() {
        let m = t().modulus();
        assert_eq!(m, RegularOperator::from_rows(space3(), &[&[1, 2, 0], &[3, 0, 1]]).unwrap());
        let p = m.clone();
        assert_eq!(p.modulus(), p);
        assert_eq!(t().neg().modulus(), m);
    }

    #[test]
    fn modulus_oracle_examples() {
        // coord 1: 1 + 2, coord 2: 3 + 1
        assert_eq!(modulus_oracle(&t(), &sf(&[1, 1, 1])).unwrap(), v(&[3, 4]));
        assert_eq!(modulus_oracle(&t(), &sf(&[0, 0, 0])).unwrap(), v(&[0, 0]));
        let p = t().modulus();
        let x = sf(&[2, 0, 5]);
        assert_eq!(modulus_oracle(&p, &x).unwrap(), p.apply(&x).unwrap());
        assert!(modulus_oracle(&t(), &sf(&[-1, 0, 0])).is_err());
    }

    #[test]
    fn nob_examples() {
        let r = nob_report(&t(), &LatticeNorm::SUP);
        assert_eq!(r.t_t, Some(v(&[3, 4])));
        assert_eq!(r.regular_norm, Some(int(4)));
        assert!(r.is_nob);
        let z = nob_report(&RegularOperator::zero(&Space::Finite(space3()), 2), &LatticeNorm::SUP);
        assert_eq!((z.t_t, z.regular_norm), (Some(v(&[0, 0])), Some(int(0))));
        let nat = RegularOperator::nat(2, BTreeMap::new(), v(&[1, 0])).unwrap();
        assert!(!nob_report(&nat, &LatticeNorm::SUP).is_nob);
        let nat = RegularOperator::nat(2, BTreeMap::from([(0, v(&[1, -1])), (4, v(&[0, 2]))]), v(&[0, 0])).unwrap();
        let r = nob_report(&nat, &LatticeNorm::ONE);
        assert_eq!(r.t_t, Some(v(&[1, 3])));
        assert_eq!(r.regular_norm, Some(int(4)));
    }

    #[test]
    fn riesz_kantorovich_examples() {
        let s2 = FiniteSpace::numbered(2).unwrap();
        let a = RegularOperator::finite(s2.clone(), 2, vec![v(&[1, 0]), v(&[0, 2])]).unwrap();
        let b = RegularOperator::finite(s2.clone(), 2, vec![v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(rk_sup(&a, &b, s2.full()).unwrap(), v(&[2, 3]));
        assert_eq!(
            rk_sup(&a, &a, s2.full()).unwrap(),
            a.apply(&SimpleFunction::constant(&Space::Finite(s2.clone()), int(1))).unwrap()
        );
        let zero = RegularOperator::zero(&Space::Finite(s2.clone()), 2);
        assert_eq!(rk_sup(&a, &zero, s2.full()).unwrap(), v(&[1, 2]));
        assert_eq!(rk_inf(&a, &b, s2.full()).unwrap(), v(&[0, 1]));
    }
}
