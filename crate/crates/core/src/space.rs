//! Measurable spaces: finite atomic σ-algebras, and ℕ with its
//! finite/cofinite sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest atom count for which power-set enumeration is allowed.
pub const ENUMERATION_BOUND: usize = 16;

/// Largest atom count a [`FiniteSpace`] can hold (one bit per atom).
pub const MAX_ATOMS: usize = 64;

/// A finite set of labelled atoms; every union of atoms is measurable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    atoms: Vec<String>,
}

impl FiniteSpace {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms(atoms.len()));
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateAtom(a.clone()));
            }
        }
        Ok(Self { atoms })
    }

    /// Atoms labelled `a1, …, an`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("a{i}")))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    pub fn full(&self) -> FiniteSet {
        FiniteSet::from_mask(low_bits(self.len()))
    }

    pub fn empty(&self) -> FiniteSet {
        FiniteSet::EMPTY
    }

    pub fn atom(&self, i: usize) -> FiniteSet {
        assert!(i < self.len(), "atom index out of range");
        FiniteSet::from_mask(1 << i)
    }

    pub fn check(&self, set: FiniteSet) -> Result<()> {
        if set.mask & !low_bits(self.len()) == 0 {
            Ok(())
        } else {
            Err(Error::SetOutsideSpace(format!("{:#b}", set.mask)))
        }
    }

    pub fn complement(&self, set: FiniteSet) -> FiniteSet {
        FiniteSet::from_mask(!set.mask & low_bits(self.len()))
    }

    /// Every measurable subset of `set`, ordered by mask.
    pub fn subsets_of(&self, set: FiniteSet) -> Result<Vec<FiniteSet>> {
        self.check(set)?;
        let size = set.len();
        if size > ENUMERATION_BOUND {
            return Err(Error::EnumerationBound { size, bound: ENUMERATION_BOUND });
        }
        Ok(submasks(set.mask).map(FiniteSet::from_mask).collect())
    }

    /// The σ-algebra generated by `generators`: its atoms are the nonempty
    /// cells of the common refinement of the generators and their complements.
    pub fn generate_sigma_algebra(&self, generators: &[FiniteSet]) -> Result<GeneratedAlgebra> {
        for g in generators {
            self.check(*g)?;
        }
        // Two atoms share a cell iff every generator contains both or neither.
        let signature = |i: usize| -> Vec<bool> { generators.iter().map(|g| g.contains(i)).collect() };
        let mut cells: Vec<(Vec<bool>, u64)> = Vec::new();
        for i in 0..self.len() {
            let sig = signature(i);
            match cells.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, mask)) => *mask |= 1 << i,
                None => cells.push((sig, 1 << i)),
            }
        }
        let cells: Vec<FiniteSet> = cells.into_iter().map(|(_, m)| FiniteSet::from_mask(m)).collect();
        let labels = cells.iter().map(|c| {
            let members: Vec<&str> = c.iter().map(|i| self.atoms[i].as_str()).collect();
            if members.len() == 1 {
                members[0].to_string()
            } else {
                format!("{{{}}}", members.join(","))
            }
        });
        let space = FiniteSpace::new(labels.collect::<Vec<_>>())?;
        Ok(GeneratedAlgebra { space, cells })
    }

    pub fn describe(&self, set: FiniteSet) -> String {
        let members: Vec<&str> = set.iter().map(|i| self.atoms[i].as_str()).collect();
        format!("{{{}}}", members.join(","))
    }
}

/// Result of coarsening a space: the new space and, for each of its atoms,
/// the cell of the original space it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedAlgebra {
    pub space: FiniteSpace,
    pub cells: Vec<FiniteSet>,
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All submasks of `mask` in increasing numeric order.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        // (cur - mask) & mask steps to the next submask in increasing order.
        next = if cur == mask { None } else { Some(cur.wrapping_sub(mask) & mask) };
        Some(cur)
    })
}

/// A union of atoms of a [`FiniteSpace`], stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteSet {
    mask: u64,
}

impl FiniteSet {
    pub const EMPTY: FiniteSet = FiniteSet { mask: 0 };

    pub fn from_mask(mask: u64) -> Self {
        Self { mask }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self { mask: indices.into_iter().fold(0, |m, i| m | (1 << i)) }
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.mask & (1 << i) != 0
    }

    pub fn union(self, other: Self) -> Self {
        Self { mask: self.mask | other.mask }
    }

    pub fn intersection(self, other: Self) -> Self {
        Self { mask: self.mask & other.mask }
    }

    pub fn difference(self, other: Self) -> Self {
        Self { mask: self.mask & !other.mask }
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.mask & (1 << i) != 0)
    }
}

/// A finite or cofinite subset of ℕ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NatSet {
    /// Exactly these naturals.
    Fin(BTreeSet<u64>),
    /// All naturals except these.
    CoFin(BTreeSet<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NatOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

impl NatSet {
    pub fn fin(items: impl IntoIterator<Item = u64>) -> Self {
        NatSet::Fin(items.into_iter().collect())
    }

    pub fn cofin(items: impl IntoIterator<Item = u64>) -> Self {
        NatSet::CoFin(items.into_iter().collect())
    }

    pub fn all() -> Self {
        NatSet::CoFin(BTreeSet::new())
    }

    pub fn empty() -> Self {
        NatSet::Fin(BTreeSet::new())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NatSet::Fin(_))
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            NatSet::Fin(s) => s.contains(&n),
            NatSet::CoFin(s) => !s.contains(&n),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            NatSet::Fin(s) => NatSet::CoFin(s.clone()),
            NatSet::CoFin(s) => NatSet::Fin(s.clone()),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use NatSet::*;
        match (self, other) {
            (Fin(a), Fin(b)) => Fin(a | b),
            (Fin(a), CoFin(b)) | (CoFin(b), Fin(a)) => CoFin(b - a),
            (CoFin(a), CoFin(b)) => CoFin(a & b),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    /// Applies `op`; `other` is ignored for [`NatOp::Complement`].
    pub fn apply(&self, op: NatOp, other: &Self) -> Self {
        match op {
            NatOp::Union => self.union(other),
            NatOp::Intersection => self.intersection(other),
            NatOp::Difference => self.difference(other),
            NatOp::Complement => self.complement(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other) == NatSet::empty()
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, items) = match self {
            NatSet::Fin(s) => ("fin", s),
            NatSet::CoFin(s) => ("cofin", s),
        };
        let items: Vec<String> = items.iter().map(u64::to_string).collect();
        write!(f, "{tag}:[{}]", items.join(","))
    }
}

/// The two kinds of measurable space this crate works over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    Finite(FiniteSpace),
    Nat,
}

/// A measurable set of either kind of space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MeasurableSet {
    Finite(FiniteSet),
    Nat(NatSet),
}

impl From<FiniteSet> for MeasurableSet {
    fn from(s: FiniteSet) -> Self {
        MeasurableSet::Finite(s)
    }
}

impl From<NatSet> for MeasurableSet {
    fn from(s: NatSet) -> Self {
        MeasurableSet::Nat(s)
    }
}

impl Space {
    pub fn full(&self) -> MeasurableSet {
        match self {
            Space::Finite(s) => s.full().into(),
            Space::Nat => NatSet::all().into(),
        }
    }

    pub fn empty(&self) -> MeasurableSet {
        match self {
            Space::Finite(_) => FiniteSet::EMPTY.into(),
            Space::Nat => NatSet::empty().into(),
        }
    }

    pub fn describe(&self, set: &MeasurableSet) -> String {
        match (self, set) {
            (Space::Finite(s), MeasurableSet::Finite(d)) => s.describe(*d),
            (_, MeasurableSet::Nat(n)) => n.to_string(),
            (Space::Nat, MeasurableSet::Finite(d)) => format!("mask:{:#b}", d.mask()),
        }
    }
}
