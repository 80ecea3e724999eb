//! Atomwise storage shared by measures, simple functions and operators.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, Space};

/// An eventually-constant table on ℕ: `exceptional[n]` where present, else
/// `tail`. Entries equal to the tail are dropped, so structural equality is
/// pointwise equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTable<T> {
    exceptional: BTreeMap<u64, T>,
    tail: T,
}

impl<T: Clone + PartialEq> NatTable<T> {
    pub fn new(exceptional: BTreeMap<u64, T>, tail: T) -> Self {
        let exceptional = exceptional.into_iter().filter(|(_, v)| *v != tail).collect();
        Self { exceptional, tail }
    }

    pub fn constant(tail: T) -> Self {
        Self { exceptional: BTreeMap::new(), tail }
    }

    pub fn get(&self, n: u64) -> &T {
        self.exceptional.get(&n).unwrap_or(&self.tail)
    }

    pub fn tail(&self) -> &T {
        &self.tail
    }

    pub fn exceptional(&self) -> &BTreeMap<u64, T> {
        &self.exceptional
    }

    pub fn keys(&self) -> BTreeSet<u64> {
        self.exceptional.keys().copied().collect()
    }

    pub fn map<U: Clone + PartialEq>(&self, f: impl Fn(&T) -> U) -> NatTable<U> {
        NatTable::new(self.exceptional.iter().map(|(k, v)| (*k, f(v))).collect(), f(&self.tail))
    }

    pub fn zip_with<U: Clone + PartialEq, V: Clone + PartialEq>(
        &self,
        other: &NatTable<U>,
        f: impl Fn(&T, &U) -> V,
    ) -> NatTable<V> {
        let keys: BTreeSet<u64> = self.keys().union(&other.keys()).copied().collect();
        NatTable::new(keys.into_iter().map(|k| (k, f(self.get(k), other.get(k)))).collect(), f(&self.tail, &other.tail))
    }

    pub fn all(&self, pred: impl Fn(&T) -> bool) -> bool {
        pred(&self.tail) && self.exceptional.values().all(pred)
    }
}

/// Per-atom values over a finite space, or an eventually-constant table on ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atoms<T> {
    Finite { space: FiniteSpace, values: Vec<T> },
    Nat(NatTable<T>),
}

impl<T: Clone + PartialEq> Atoms<T> {
    pub fn finite(space: FiniteSpace, values: Vec<T>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Parse(format!("expected {} atom values, found {}", space.len(), values.len())));
        }
        Ok(Atoms::Finite { space, values })
    }

    pub fn space(&self) -> Space {
        match self {
            Atoms::Finite { space, .. } => Space::Finite(space.clone()),
            Atoms::Nat(_) => Space::Nat,
        }
    }

    pub fn same_space<U>(&self, other: &Atoms<U>) -> bool {
        match (self, other) {
            (Atoms::Finite { space: a, .. }, Atoms::Finite { space: b, .. }) => a == b,
            (Atoms::Nat(_), Atoms::Nat(_)) => true,
            _ => false,
        }
    }

    pub fn map<U: Clone + PartialEq>(&self, f: impl Fn(&T) -> U) -> Atoms<U> {
        match self {
            Atoms::Finite { space, values } => {
                Atoms::Finite { space: space.clone(), values: values.iter().map(f).collect() }
            }
            Atoms::Nat(t) => Atoms::Nat(t.map(f)),
        }
    }

    pub fn zip_with<U: Clone + PartialEq, V: Clone + PartialEq>(
        &self,
        other: &Atoms<U>,
        f: impl Fn(&T, &U) -> V,
    ) -> Result<Atoms<V>> {
        match (self, other) {
            (Atoms::Finite { space, values: a }, Atoms::Finite { space: sb, values: b }) if space == sb => {
                Ok(Atoms::Finite { space: space.clone(), values: a.iter().zip(b).map(|(x, y)| f(x, y)).collect() })
            }
            (Atoms::Nat(a), Atoms::Nat(b)) => Ok(Atoms::Nat(a.zip_with(b, f))),
            _ => Err(Error::SpaceMismatch),
        }
    }

    pub fn all(&self, pred: impl Fn(&T) -> bool) -> bool {
        match self {
            Atoms::Finite { values, .. } => values.iter().all(pred),
            Atoms::Nat(t) => t.all(pred),
        }
    }

    /// Every stored value: all atoms of a finite space, or the exceptional
    /// entries followed by the tail on ℕ.
    pub fn stored(&self) -> Vec<&T> {
        match self {
            Atoms::Finite { values, .. } => values.iter().collect(),
            Atoms::Nat(t) => t.exceptional.values().chain(std::iter::once(&t.tail)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nat_table_is_canonical() {
        let a = NatTable::new(BTreeMap::from([(1, 5), (2, 0)]), 0);
        let b = NatTable::new(BTreeMap::from([(1, 5)]), 0);
        assert_eq!(a, b);
        assert_eq!(*a.get(2), 0);
        assert_eq!(*a.get(1), 5);
        let sum = a.zip_with(&NatTable::new(BTreeMap::from([(3, 1)]), 2), |x, y| x + y);
        assert_eq!(sum.keys(), BTreeSet::from([1, 3]));
        assert_eq!(*sum.get(1), 7);
        assert_eq!(*sum.get(3), 1);
        assert_eq!(*sum.tail(), 2);
    }

    #[test]
    fn finite_space_mismatch() {
        let a = Atoms::finite(FiniteSpace::numbered(2).unwrap(), vec![1, 2]).unwrap();
        let b = Atoms::finite(FiniteSpace::numbered(3).unwrap(), vec![1, 2, 3]).unwrap();
        assert_eq!(a.zip_with(&b, |x, y| x + y), Err(Error::SpaceMismatch));
        assert!(Atoms::finite(FiniteSpace::numbered(2).unwrap(), vec![1]).is_err());
    }
}
