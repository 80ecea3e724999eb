//! Seeded random instances. Numerators and denominators stay within
//! [`MAX_ENTRY`]; about half the coordinates are zero or small integers so
//! that ties and cancellations show up often.

use std::collections::BTreeMap;

use rand::Rng;

use crate::instance::{Instance, MeasureDef, TransferDef};
use crate::integral::SimpleFunction;
use crate::lattice::{ExtElement, LatticeElement, LatticeNorm, NormKind};
use crate::measure::{Extremum, PosMeasure, SignedMeasure};
use crate::operator::RegularOperator;
use crate::repr::AbstractTransferInstance;
use crate::scalar::{self, Scalar};
use crate::space::{FiniteSpace, Space};

pub const MAX_ENTRY: i64 = 100;

/// Exceptional keys of generated ℕ objects stay below this bound.
pub const NAT_KEY_BOUND: u64 = 8;

pub fn scalar<R: Rng + ?Sized>(rng: &mut R, nonneg: bool) -> Scalar {
    match rng.gen_range(0..10) {
        0 | 1 => scalar::zero(),
        2..=4 => scalar::int(if nonneg { rng.gen_range(0..=3) } else { rng.gen_range(-3..=3) }),
        _ => scalar::random(rng, MAX_ENTRY, nonneg),
    }
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, dim: usize, nonneg: bool) -> LatticeElement {
    LatticeElement::new((0..dim).map(|_| scalar(rng, nonneg)).collect())
}

pub fn norm<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> LatticeNorm {
    let kind = if rng.gen_bool(0.5) { NormKind::Sup } else { NormKind::One };
    if rng.gen_range(0..4) == 0 {
        let weights = (0..dim).map(|_| scalar::ratio(rng.gen_range(1..=5), rng.gen_range(1..=3))).collect();
        LatticeNorm::weighted(kind, weights).expect("positive weights")
    } else {
        match kind {
            NormKind::Sup => LatticeNorm::SUP,
            NormKind::One => LatticeNorm::ONE,
        }
    }
}

pub fn pos_measure<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace, dim: usize) -> PosMeasure {
    let values = (0..space.len()).map(|_| ExtElement::Finite(element(rng, dim, true))).collect();
    PosMeasure::finite(space.clone(), dim, values).expect("nonnegative atoms")
}

pub fn signed_measure<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace, dim: usize) -> SignedMeasure {
    let values = (0..space.len()).map(|_| element(rng, dim, false)).collect();
    SignedMeasure::finite(space.clone(), dim, values).expect("sized to the space")
}

pub fn function<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace, nonneg: bool) -> SimpleFunction {
    SimpleFunction::finite(space.clone(), (0..space.len()).map(|_| scalar(rng, nonneg)).collect())
        .expect("sized to the space")
}

pub fn operator<R: Rng + ?Sized>(rng: &mut R, space: &FiniteSpace, dim: usize, positive: bool) -> RegularOperator {
    let columns = (0..space.len()).map(|_| element(rng, dim, positive)).collect();
    RegularOperator::finite(space.clone(), dim, columns).expect("sized to the space")
}

/// An operator `S` with `|S| ≤ |T|` columnwise: each entry of `T` is scaled
/// by a random factor in `[−1, 1]`.
pub fn dominated<R: Rng + ?Sized>(rng: &mut R, t: &RegularOperator) -> RegularOperator {
    let rng = std::cell::RefCell::new(rng);
    let columns = t.columns().map(|c| {
        LatticeElement::new(
            c.coords().iter().map(|x| x * scalar::ratio(rng.borrow_mut().gen_range(-4..=4), 4)).collect(),
        )
    });
    RegularOperator::from_columns(t.dim(), columns).expect("same dimension")
}

fn nat_keys<R: Rng + ?Sized>(rng: &mut R, key_bound: u64) -> Vec<u64> {
    let n = rng.gen_range(0..=4);
    (0..n).map(|_| rng.gen_range(0..key_bound)).collect()
}

pub fn nat_pos_measure<R: Rng + ?Sized>(rng: &mut R, dim: usize, key_bound: u64) -> PosMeasure {
    let exceptional: BTreeMap<u64, LatticeElement> =
        nat_keys(rng, key_bound).into_iter().map(|k| (k, element(rng, dim, true))).collect();
    let tail = if rng.gen_bool(0.5) { LatticeElement::zero(dim) } else { element(rng, dim, true) };
    PosMeasure::nat(dim, exceptional, tail).expect("nonnegative entries")
}

pub fn nat_signed_measure<R: Rng + ?Sized>(rng: &mut R, dim: usize, key_bound: u64) -> SignedMeasure {
    let support = nat_keys(rng, key_bound).into_iter().map(|k| (k, element(rng, dim, false))).collect();
    SignedMeasure::nat(dim, support).expect("dimension-consistent")
}

/// A positive operator on ℕ whose tail column is zero or random with equal odds.
pub fn nat_operator<R: Rng + ?Sized>(rng: &mut R, dim: usize, key_bound: u64) -> RegularOperator {
    let exceptional = nat_keys(rng, key_bound).into_iter().map(|k| (k, element(rng, dim, true))).collect();
    let tail = if rng.gen_bool(0.5) { LatticeElement::zero(dim) } else { element(rng, dim, true) };
    RegularOperator::nat(dim, exceptional, tail).expect("dimension-consistent")
}

/// An eventually-zero function on ℕ.
pub fn nat_function<R: Rng + ?Sized>(rng: &mut R, key_bound: u64, nonneg: bool) -> SimpleFunction {
    let exceptional = nat_keys(rng, key_bound).into_iter().map(|k| (k, scalar(rng, nonneg))).collect();
    SimpleFunction::nat(exceptional, scalar::zero())
}

/// A transfer instance satisfying the hypotheses for `mode`.
///
/// Sup mode: `μ(s′)` is random and `μ(s)` is its supremum. A slack `d(s) ≥ 0`
/// is drawn, then `d(s′) = d(s) − u·(μ(s) − μ(s′))` with `u ∈ [0, 1]` per
/// coordinate, and `ν = μ − d`. Both hypotheses hold, and the conclusion is
/// not built in: it holds because the coordinate where `μ(s′)` reaches `μ(s)`
/// has zero slack gap there. Inf mode negates a sup instance.
pub fn transfer<R: Rng + ?Sized>(rng: &mut R, dim: usize, mode: Extremum) -> AbstractTransferInstance {
    let n = rng.gen_range(1..=4);
    let mu_primed: Vec<LatticeElement> = (0..n).map(|_| element(rng, dim, false)).collect();
    let mu_s = mu_primed.iter().skip(1).fold(mu_primed[0].clone(), |a, x| a.join(x));
    let d_s = element(rng, dim, true);
    let nu_primed = mu_primed
        .iter()
        .map(|m| {
            let gap = mu_s.sub(m);
            let d = LatticeElement::new(
                d_s.coords()
                    .iter()
                    .zip(gap.coords())
                    .map(|(d, g)| d - g * scalar::ratio(rng.gen_range(0..=4), 4))
                    .collect(),
            );
            m.sub(&d)
        })
        .collect();
    let inst = AbstractTransferInstance { nu_s: mu_s.sub(&d_s), mu_s, mu_primed, nu_primed };
    match mode {
        Extremum::Sup => inst,
        Extremum::Inf => inst.negate(),
    }
}

/// A random instance on a finite space: positive measures `mu`, `nu`,
/// `sigma`; signed measures `rho`, `tau`; operators `T`, `S` and `D` (with
/// `|D| ≤ |T|`); functions `f`, `g`; nonnegative test vectors `x1`..`x5`;
/// and one transfer instance per mode.
pub fn finite_instance<R: Rng + ?Sized>(rng: &mut R, dim: usize, atoms: usize) -> Instance {
    let space = FiniteSpace::numbered(atoms).expect("small space");
    let mut inst = Instance::empty(dim, norm(rng, dim), Space::Finite(space.clone()));
    for name in ["mu", "nu", "sigma"] {
        inst.measures.insert(name.into(), MeasureDef::Pos(pos_measure(rng, &space, dim)));
    }
    for name in ["rho", "tau"] {
        inst.measures.insert(name.into(), MeasureDef::Signed(signed_measure(rng, &space, dim)));
    }
    let positive = rng.gen_range(0..4) == 0;
    let t = operator(rng, &space, dim, positive);
    inst.operators.insert("D".into(), dominated(rng, &t));
    inst.operators.insert("S".into(), operator(rng, &space, dim, false));
    inst.operators.insert("T".into(), t);
    inst.functions.insert("f".into(), function(rng, &space, false));
    inst.functions.insert("g".into(), function(rng, &space, false));
    for i in 1..=5 {
        inst.functions.insert(format!("x{i}"), function(rng, &space, true));
    }
    for (name, mode) in [("sup_transfer", Extremum::Sup), ("inf_transfer", Extremum::Inf)] {
        inst.transfers.insert(name.into(), TransferDef { mode, instance: transfer(rng, dim, mode) });
    }
    inst
}

/// A random instance on ℕ with keys below [`NAT_KEY_BOUND`]: positive
/// measures `mu`, `nu` (random zero or nonzero tails), signed `rho`,
/// positive operators `T`, `S`, and eventually-zero functions `f`, `g`.
pub fn nat_instance<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Instance {
    let mut inst = Instance::empty(dim, norm(rng, dim), Space::Nat);
    for name in ["mu", "nu"] {
        inst.measures.insert(name.into(), MeasureDef::Pos(nat_pos_measure(rng, dim, NAT_KEY_BOUND)));
    }
    inst.measures.insert("rho".into(), MeasureDef::Signed(nat_signed_measure(rng, dim, NAT_KEY_BOUND)));
    for name in ["S", "T"] {
        inst.operators.insert(name.into(), nat_operator(rng, dim, NAT_KEY_BOUND));
    }
    inst.functions.insert("f".into(), nat_function(rng, NAT_KEY_BOUND, false));
    inst.functions.insert("g".into(), nat_function(rng, NAT_KEY_BOUND, true));
    inst
}
