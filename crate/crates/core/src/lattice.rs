//! The vector lattice of rational vectors under the coordinatewise order, its
//! one-point extension by `∞`, and lattice norms.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A rational vector, ordered coordinatewise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeElement(Vec<Scalar>);

impl LatticeElement {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Scalar::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        assert_eq!(self.dim(), other.dim(), "lattice dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self(self.0.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, r: &Scalar) -> Self {
        self.map(|a| a * r)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.max(b).clone())
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.min(b).clone())
    }

    pub fn abs(&self) -> Self {
        self.map(|a| a.abs())
    }

    pub fn pos_part(&self) -> Self {
        self.map(|a| if a.is_positive() { a.clone() } else { Scalar::zero() })
    }

    pub fn neg_part(&self) -> Self {
        self.map(|a| if a.is_negative() { -a } else { Scalar::zero() })
    }

    /// Coordinatewise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        assert_eq!(self.dim(), other.dim(), "lattice dimension mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }

    pub fn sum<'a>(dim: usize, items: impl IntoIterator<Item = &'a LatticeElement>) -> Self {
        items.into_iter().fold(Self::zero(dim), |acc, x| acc.add(x))
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

struct AsJson<'a>(&'a Scalar);

impl Serialize for AsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        scalar::serialize(self.0, s)
    }
}

impl Serialize for LatticeElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for c in &self.0 {
            seq.serialize_element(&AsJson(c))?;
        }
        seq.end()
    }
}

/// An element of `E ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtElement {
    Finite(LatticeElement),
    Infinity,
}

impl ExtElement {
    pub fn zero(dim: usize) -> Self {
        ExtElement::Finite(LatticeElement::zero(dim))
    }

    pub fn finite(&self) -> Option<&LatticeElement> {
        match self {
            ExtElement::Finite(x) => Some(x),
            ExtElement::Infinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtElement::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtElement::Finite(x) => x.is_positive(),
            ExtElement::Infinity => true,
        }
    }

    /// The order of the extension: finite values compare coordinatewise and
    /// everything lies below `∞`.
    pub fn le(&self, other: &Self) -> bool {
        match (self, other) {
            (_, ExtElement::Infinity) => true,
            (ExtElement::Infinity, ExtElement::Finite(_)) => false,
            (ExtElement::Finite(x), ExtElement::Finite(y)) => x.le(y),
        }
    }
}

impl Serialize for ExtElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtElement::Finite(x) => x.serialize(s),
            ExtElement::Infinity => s.serialize_str("inf"),
        }
    }
}

impl From<LatticeElement> for ExtElement {
    fn from(x: LatticeElement) -> Self {
        ExtElement::Finite(x)
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtElement::Finite(x) => x.fmt(f),
            ExtElement::Infinity => f.write_str("inf"),
        }
    }
}

pub fn ext_add(a: &ExtElement, b: &ExtElement) -> ExtElement {
    match (a, b) {
        (ExtElement::Finite(x), ExtElement::Finite(y)) => ExtElement::Finite(x.add(y)),
        _ => ExtElement::Infinity,
    }
}

/// Action of the nonnegative rationals on `E⁺ ∪ {∞}`, with `0·∞ = 0`.
///
/// `dim` supplies the dimension of the zero produced by `0·∞`.
pub fn ext_scale(r: &Scalar, a: &ExtElement, dim: usize) -> Result<ExtElement> {
    if r.is_negative() {
        return Err(Error::NegativeScalar(scalar::format(r)));
    }
    Ok(match a {
        ExtElement::Finite(x) => ExtElement::Finite(x.scale(r)),
        ExtElement::Infinity if r.is_zero() => ExtElement::zero(dim),
        ExtElement::Infinity => ExtElement::Infinity,
    })
}

pub fn ext_sup<'a>(items: impl IntoIterator<Item = &'a ExtElement>) -> Result<ExtElement> {
    let mut iter = items.into_iter();
    let mut acc = iter.next().ok_or(Error::EmptyFamily)?.clone();
    for item in iter {
        acc = match (&acc, item) {
            (ExtElement::Finite(x), ExtElement::Finite(y)) => ExtElement::Finite(x.join(y)),
            _ => ExtElement::Infinity,
        };
    }
    Ok(acc)
}

/// Infimum in `E ∪ {∞}`: `∞` members do not lower the infimum, so the
/// result is the coordinatewise minimum of the finite members, or `∞` when
/// there are none.
pub fn ext_inf<'a>(items: impl IntoIterator<Item = &'a ExtElement>) -> Result<ExtElement> {
    let mut seen = false;
    let mut acc: Option<LatticeElement> = None;
    for item in items {
        seen = true;
        if let ExtElement::Finite(y) = item {
            acc = Some(match acc {
                Some(x) => x.meet(y),
                None => y.clone(),
            });
        }
    }
    if !seen {
        return Err(Error::EmptyFamily);
    }
    Ok(acc.map_or(ExtElement::Infinity, ExtElement::Finite))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    Sup,
    One,
}

/// A lattice norm on `E`: the (weighted) sup norm or the (weighted) ℓ¹ norm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeNorm {
    pub kind: NormKind,
    weights: Option<Vec<Scalar>>,
}

impl LatticeNorm {
    pub const SUP: LatticeNorm = LatticeNorm { kind: NormKind::Sup, weights: None };
    pub const ONE: LatticeNorm = LatticeNorm { kind: NormKind::One, weights: None };

    pub fn weighted(kind: NormKind, weights: Vec<Scalar>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::NotPositive(scalar::format(w)));
        }
        Ok(Self { kind, weights: Some(weights) })
    }

    pub fn weights(&self) -> Option<&[Scalar]> {
        self.weights.as_deref()
    }

    pub fn norm(&self, x: &LatticeElement) -> Scalar {
        let weighted = x.coords().iter().enumerate().map(|(i, c)| match &self.weights {
            Some(w) => c.abs() * &w[i],
            None => c.abs(),
        });
        match self.kind {
            NormKind::Sup => weighted.fold(Scalar::zero(), |m, v| m.max(v)),
            NormKind::One => weighted.fold(Scalar::zero(), |s, v| s + v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn f(c: &[i64]) -> ExtElement {
        ExtElement::Finite(v(c))
    }

    #[test]
    fn extended_addition() {
        assert_eq!(ext_add(&f(&[1, 2]), &f(&[3, -1])), f(&[4, 1]));
        assert_eq!(ext_add(&f(&[1, 2]), &ExtElement::Infinity), ExtElement::Infinity);
        assert_eq!(ext_add(&ExtElement::Infinity, &ExtElement::Infinity), ExtElement::Infinity);
    }

    #[test]
    fn extended_scaling() {
        assert_eq!(ext_scale(&int(0), &ExtElement::Infinity, 2).unwrap(), f(&[0, 0]));
        assert_eq!(ext_scale(&int(3), &f(&[1, 0]), 2).unwrap(), f(&[3, 0]));
        assert_eq!(ext_scale(&ratio(1, 2), &ExtElement::Infinity, 2).unwrap(), ExtElement::Infinity);
        assert!(matches!(ext_scale(&int(-1), &f(&[1, 0]), 2), Err(Error::NegativeScalar(_))));
    }

    #[test]
    fn extended_sup() {
        assert_eq!(ext_sup(&[f(&[1, 0]), f(&[0, 2])]).unwrap(), f(&[1, 2]));
        assert_eq!(ext_sup(&[f(&[1, 0]), ExtElement::Infinity]).unwrap(), ExtElement::Infinity);
        assert_eq!(ext_sup(&[f(&[5, 5])]).unwrap(), f(&[5, 5]));
        assert_eq!(ext_sup(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn extended_inf() {
        assert_eq!(ext_inf(&[f(&[1, 0]), f(&[0, 2])]).unwrap(), f(&[0, 0]));
        assert_eq!(ext_inf(&[ExtElement::Infinity]).unwrap(), ExtElement::Infinity);
        assert_eq!(ext_inf(&[f(&[3, 3]), ExtElement::Infinity]).unwrap(), f(&[3, 3]));
        assert_eq!(ext_inf(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn norms() {
        assert_eq!(LatticeNorm::SUP.norm(&v(&[3, -4])), int(4));
        assert_eq!(LatticeNorm::ONE.norm(&v(&[3, -4])), int(7));
        assert_eq!(LatticeNorm::SUP.norm(&v(&[0, 0])), int(0));
        let w = LatticeNorm::weighted(NormKind::One, vec![int(2), ratio(1, 2)]).unwrap();
        assert_eq!(w.norm(&v(&[3, -4])), int(8));
        assert!(LatticeNorm::weighted(NormKind::Sup, vec![int(0)]).is_err());
    }

    #[test]
    fn parts_and_display() {
        let x = v(&[3, -4, 0]);
        assert_eq!(x.pos_part(), v(&[3, 0, 0]));
        assert_eq!(x.neg_part(), v(&[0, 4, 0]));
        assert_eq!(x.pos_part().sub(&x.neg_part()), x);
        assert_eq!(x.to_string(), "(3,-4,0)");
        assert_eq!(ExtElement::Finite(LatticeElement::new(vec![ratio(1, 2)])).to_string(), "(1/2)");
        assert_eq!(ExtElement::Infinity.to_string(), "inf");
    }

    #[test]
    fn extended_order() {
        assert!(f(&[1, 1]).le(&ExtElement::Infinity));
        assert!(!ExtElement::Infinity.le(&f(&[9, 9])));
        assert!(f(&[0, 1]).le(&f(&[1, 1])));
        assert!(!f(&[2, 0]).le(&f(&[1, 1])));
    }
}
