//! Exact rational scalars and their text form.
//!
//! Scalars print as a reduced `p/q`, or as a bare integer when `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serializer;

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn format(r: &Scalar) -> String {
    r.to_string()
}

/// JSON form: an integer when it fits in `i64`, otherwise a `"p/q"` string.
pub fn to_json(r: &Scalar) -> serde_json::Value {
    match r.is_integer().then(|| r.numer().to_i64()).flatten() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::from(format(r)),
    }
}

pub fn serialize<S: Serializer>(r: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r.is_integer().then(|| r.numer().to_i64()).flatten() {
        Some(n) => s.serialize_i64(n),
        None => s.serialize_str(&format(r)),
    }
}

pub fn serialize_opt<S: Serializer>(r: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize(r, s),
        None => s.serialize_none(),
    }
}

/// Parses `"p"`, `"-p"`, or `"p/q"` with `q > 0` after sign normalisation.
pub fn parse(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Scalar::new(p, q))
}

/// Random rational `p/q` with `|p| <= max` and `1 <= q <= max`.
pub fn random<R: Rng + ?Sized>(rng: &mut R, max: i64, nonnegative: bool) -> Scalar {
    let lo = if nonnegative { 0 } else { -max };
    let p = rng.gen_range(lo..=max);
    let q = rng.gen_range(1..=max);
    ratio(p, q)
}

/// A coarser magnitude used by the fuzz shrinker: `0`, then `±1`, then halving.
pub fn shrink_candidates(r: &Scalar) -> Vec<Scalar> {
    let mut out = Vec::new();
    if r.is_zero() {
        return out;
    }
    out.push(zero());
    let unit = if r.is_negative() { -one() } else { one() };
    if *r != unit {
        out.push(unit);
    }
    if !r.is_integer() {
        out.push(r.round());
    }
    let half = r / int(2);
    if half.numer().abs() >= BigInt::one() && !out.contains(&half) && half.abs() >= one() {
        out.push(half);
    }
    out.retain(|c| c != r);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(format(&parse("6/-4").unwrap()), "-3/2");
        assert_eq!(format(&ratio(4, 2)), "2");
        assert!(parse("1/0").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn shrink_moves_towards_zero() {
        let c = shrink_candidates(&ratio(7, 3));
        assert_eq!(c[0], zero());
        assert!(c.iter().all(|x| x.abs() <= ratio(7, 3)));
        assert!(shrink_candidates(&zero()).is_empty());
    }
}
