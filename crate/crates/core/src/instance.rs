//! JSON instance files and the set-expression language.
//!
//! ```json
//! {
//!   "lattice": {"dim": 2, "norm": "sup"},
//!   "space": {"kind": "finite", "atoms": ["a1", "a2", "a3"]},
//!   "measures": {
//!     "mu": {"kind": "pos", "atoms": [[1, 0], [0, 2], [1, 1]]},
//!     "rho": {"kind": "signed", "atoms": [[1, -1], ["-2/3", 3], [0, 0]]}
//!   },
//!   "operators": {"T": {"columns": [[1, 3], [-2, 0], [0, -1]]}},
//!   "functions": {"f": [2, -1, 3]}
//! }
//! ```
//!
//! On ℕ (`{"kind": "nat"}`) atomwise data takes the form
//! `{"exceptional": {"3": v}, "tail": t}`. Scalars are JSON integers or
//! `"p/q"` strings; floats are rejected. A positive measure may instead be
//! given by `"set_values"`, a map from set expressions to values, which is
//! accepted only if it is additive.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::integral::SimpleFunction;
use crate::lattice::{ExtElement, LatticeElement, LatticeNorm, NormKind};
use crate::measure::{Extremum, PosMeasure, SignedMeasure};
use crate::operator::RegularOperator;
use crate::repr::{regularity_transfer_check, AbstractTransferInstance};
use crate::scalar::{self, Scalar};
use crate::space::{FiniteSet, FiniteSpace, MeasurableSet, NatSet, Space};
use crate::table::{Atoms, NatTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureDef {
    Pos(PosMeasure),
    Signed(SignedMeasure),
}

impl MeasureDef {
    pub fn eval(&self, set: &MeasurableSet) -> Result<ExtElement> {
        match self {
            MeasureDef::Pos(m) => m.eval(set),
            MeasureDef::Signed(m) => m.eval(set).map(ExtElement::Finite),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferDef {
    pub mode: Extremum,
    pub instance: AbstractTransferInstance,
}

/// A parsed instance file. Names are unique across all object kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub dim: usize,
    pub norm: LatticeNorm,
    pub space: Space,
    pub measures: BTreeMap<String, MeasureDef>,
    pub operators: BTreeMap<String, RegularOperator>,
    pub functions: BTreeMap<String, SimpleFunction>,
    pub transfers: BTreeMap<String, TransferDef>,
}

impl Instance {
    pub fn empty(dim: usize, norm: LatticeNorm, space: Space) -> Self {
        Self {
            dim,
            norm,
            space,
            measures: BTreeMap::new(),
            operators: BTreeMap::new(),
            functions: BTreeMap::new(),
            transfers: BTreeMap::new(),
        }
    }

    pub fn measure(&self, name: &str) -> Result<&MeasureDef> {
        self.measures.get(name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    pub fn operator(&self, name: &str) -> Result<&RegularOperator> {
        self.operators.get(name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    pub fn function(&self, name: &str) -> Result<&SimpleFunction> {
        self.functions.get(name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    pub fn pos_measures(&self) -> impl Iterator<Item = (&String, &PosMeasure)> {
        self.measures.iter().filter_map(|(n, m)| match m {
            MeasureDef::Pos(p) => Some((n, p)),
            MeasureDef::Signed(_) => None,
        })
    }

    /// Signed measures, plus positive measures that happen to be finite.
    pub fn signed_measures(&self) -> Vec<(String, SignedMeasure)> {
        self.measures
            .iter()
            .filter_map(|(n, m)| match m {
                MeasureDef::Signed(s) => Some((n.clone(), s.clone())),
                MeasureDef::Pos(p) => p.to_signed().ok().map(|s| (n.clone(), s)),
            })
            .collect()
    }

    pub fn parse_set(&self, expr: &str) -> Result<MeasurableSet> {
        parse_set_expr(&self.space, expr)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.build()
    }

    pub fn to_json(&self) -> Value {
        let mut measures = Map::new();
        for (name, m) in &self.measures {
            let v = match m {
                MeasureDef::Pos(p) => {
                    let mut obj = atoms_to_json(p.atoms(), ext_to_json);
                    obj.insert("kind".into(), json!("pos"));
                    obj
                }
                MeasureDef::Signed(s) => {
                    let mut obj = atoms_to_json(s.atoms(), vec_to_json);
                    obj.insert("kind".into(), json!("signed"));
                    obj
                }
            };
            measures.insert(name.clone(), Value::Object(v));
        }
        let operators: Map<String, Value> = self
            .operators
            .iter()
            .map(|(name, t)| {
                let obj = match t.columns() {
                    Atoms::Finite { values, .. } => {
                        let mut m = Map::new();
                        m.insert("columns".into(), Value::Array(values.iter().map(vec_to_json).collect()));
                        m
                    }
                    nat => atoms_to_json(nat, vec_to_json),
                };
                (name.clone(), Value::Object(obj))
            })
            .collect();
        let functions: Map<String, Value> = self
            .functions
            .iter()
            .map(|(name, f)| {
                let v = match f.atoms() {
                    Atoms::Finite { values, .. } => Value::Array(values.iter().map(scalar::to_json).collect()),
                    nat => Value::Object(atoms_to_json(nat, scalar::to_json)),
                };
                (name.clone(), v)
            })
            .collect();
        let transfers: Map<String, Value> = self
            .transfers
            .iter()
            .map(|(name, t)| {
                let i = &t.instance;
                let v = json!({
                    "mode": match t.mode { Extremum::Sup => "sup", Extremum::Inf => "inf" },
                    "mu_primed": i.mu_primed.iter().map(vec_to_json).collect::<Vec<_>>(),
                    "nu_primed": i.nu_primed.iter().map(vec_to_json).collect::<Vec<_>>(),
                    "mu_s": vec_to_json(&i.mu_s),
                    "nu_s": vec_to_json(&i.nu_s),
                });
                (name.clone(), v)
            })
            .collect();
        let space = match &self.space {
            Space::Finite(s) => json!({"kind": "finite", "atoms": s.atoms()}),
            Space::Nat => json!({"kind": "nat"}),
        };
        let mut out = Map::new();
        out.insert("lattice".into(), json!({"dim": self.dim, "norm": norm_to_json(&self.norm)}));
        out.insert("space".into(), space);
        for (key, map) in
            [("measures", measures), ("operators", operators), ("functions", functions), ("transfers", transfers)]
        {
            if !map.is_empty() {
                out.insert(key.into(), Value::Object(map));
            }
        }
        Value::Object(out)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize")
    }
}

/// JSON object keys in file order, with duplicates rejected.
#[derive(Debug, Default)]
struct UniqueMap(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for UniqueMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl<'de> serde::de::Visitor<'de> for Visitor {
            type Value = UniqueMap;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an object of named entries")
            }
            fn visit_map<A: serde::de::MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<UniqueMap, A::Error> {
                let mut entries: Vec<(String, Value)> = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, Value>()? {
                    if entries.iter().any(|(e, _)| *e == k) {
                        return Err(serde::de::Error::custom(format!("duplicate name {k:?}")));
                    }
                    entries.push((k, v));
                }
                Ok(UniqueMap(entries))
            }
        }
        d.deserialize_map(Visitor)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    dim: usize,
    #[serde(default)]
    norm: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    lattice: RawLattice,
    space: Value,
    #[serde(default)]
    measures: UniqueMap,
    #[serde(default)]
    operators: UniqueMap,
    #[serde(default)]
    functions: UniqueMap,
    #[serde(default)]
    transfers: UniqueMap,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_scalar(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(scalar::int(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Scalar::from_integer(u.into()))
            } else {
                Err(perr(format!("{n} is not exact; write rationals as \"p/q\"")))
            }
        }
        Value::String(s) => scalar::parse(s),
        other => Err(perr(format!("expected a rational, found {other}"))),
    }
}

fn parse_vector(v: &Value, dim: usize) -> Result<LatticeElement> {
    let items = v.as_array().ok_or_else(|| perr(format!("expected a vector, found {v}")))?;
    let x = LatticeElement::new(items.iter().map(parse_scalar).collect::<Result<_>>()?);
    x.check_dim(dim)?;
    Ok(x)
}

fn parse_ext(v: &Value, dim: usize) -> Result<ExtElement> {
    match v {
        Value::String(s) if s == "inf" => Ok(ExtElement::Infinity),
        _ => parse_vector(v, dim).map(ExtElement::Finite),
    }
}

fn vec_to_json(x: &LatticeElement) -> Value {
    Value::Array(x.coords().iter().map(scalar::to_json).collect())
}

fn ext_to_json(x: &ExtElement) -> Value {
    match x {
        ExtElement::Finite(x) => vec_to_json(x),
        ExtElement::Infinity => json!("inf"),
    }
}

fn norm_to_json(n: &LatticeNorm) -> Value {
    let kind = match n.kind {
        NormKind::Sup => "sup",
        NormKind::One => "one",
    };
    match n.weights() {
        None => json!(kind),
        Some(w) => json!({"kind": kind, "weights": w.iter().map(scalar::to_json).collect::<Vec<_>>()}),
    }
}

fn parse_norm(v: Option<&Value>, dim: usize) -> Result<LatticeNorm> {
    let kind_of = |s: &str| match s {
        "sup" => Ok(NormKind::Sup),
        "one" => Ok(NormKind::One),
        other => Err(perr(format!("unknown norm {other:?}"))),
    };
    match v {
        None => Ok(LatticeNorm::SUP),
        Some(Value::String(s)) => Ok(match kind_of(s)? {
            NormKind::Sup => LatticeNorm::SUP,
            NormKind::One => LatticeNorm::ONE,
        }),
        Some(Value::Object(o)) => {
            let kind = kind_of(o.get("kind").and_then(Value::as_str).ok_or_else(|| perr("norm needs a kind"))?)?;
            let weights = parse_vector(o.get("weights").ok_or_else(|| perr("norm object needs weights"))?, dim)?;
            if o.len() != 2 {
                return Err(perr("norm object has unknown fields"));
            }
            LatticeNorm::weighted(kind, weights.into_coords())
        }
        Some(other) => Err(perr(format!("invalid norm {other}"))),
    }
}

/// Characters that the set-expression grammar reserves.
const RESERVED: &[char] = &['+', '-', '[', ']', '{', '}', ',', ':', ' ', '"'];

fn parse_space(v: &Value) -> Result<Space> {
    let o = v.as_object().ok_or_else(|| perr("space must be an object"))?;
    match o.get("kind").and_then(Value::as_str) {
        Some("nat") if o.len() == 1 => Ok(Space::Nat),
        Some("finite") if o.len() == 2 => {
            let atoms = o.get("atoms").and_then(Value::as_array).ok_or_else(|| perr("finite space needs atoms"))?;
            let labels: Vec<String> = atoms
                .iter()
                .map(|a| a.as_str().map(str::to_owned).ok_or_else(|| perr("atom labels must be strings")))
                .collect::<Result<_>>()?;
            for l in &labels {
                if l.is_empty() || l == "all" || l.contains(RESERVED) || l.parse::<u64>().is_ok() {
                    return Err(perr(format!("atom label {l:?} clashes with the set-expression syntax")));
                }
            }
            Ok(Space::Finite(FiniteSpace::new(labels)?))
        }
        _ => Err(perr("space must be {\"kind\":\"finite\",\"atoms\":[..]} or {\"kind\":\"nat\"}")),
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(format!("{what} must be an object")))
}

fn check_keys(o: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match o.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(perr(format!("unknown field {k:?} in {what}"))),
        None => Ok(()),
    }
}

/// Parses atomwise data: a list on finite spaces, `exceptional` + `tail` on ℕ.
fn parse_atoms<T: Clone + PartialEq>(
    space: &Space,
    o: &Map<String, Value>,
    list_key: &str,
    leaf: impl Fn(&Value) -> Result<T>,
    default_tail: Option<T>,
) -> Result<Atoms<T>> {
    match space {
        Space::Finite(s) => {
            let list = o
                .get(list_key)
                .and_then(Value::as_array)
                .ok_or_else(|| perr(format!("expected a {list_key:?} list")))?;
            if list.len() != s.len() {
                return Err(perr(format!("{} values for {} atoms", list.len(), s.len())));
            }
            Atoms::finite(s.clone(), list.iter().map(&leaf).collect::<Result<_>>()?)
        }
        Space::Nat => {
            let mut exceptional = BTreeMap::new();
            if let Some(e) = o.get("exceptional") {
                for (k, v) in object(e, "exceptional")? {
                    let n: u64 = k.parse().map_err(|_| perr(format!("exceptional key {k:?} is not a natural")))?;
                    exceptional.insert(n, leaf(v)?);
                }
            }
            let tail = match (o.get("tail"), default_tail) {
                (Some(t), _) => leaf(t)?,
                (None, Some(t)) => t,
                (None, None) => return Err(perr("ℕ data needs a tail")),
            };
            Ok(Atoms::Nat(NatTable::new(exceptional, tail)))
        }
    }
}

fn atoms_to_json<T: Clone + PartialEq>(atoms: &Atoms<T>, leaf: impl Fn(&T) -> Value) -> Map<String, Value> {
    let mut m = Map::new();
    match atoms {
        Atoms::Finite { values, .. } => {
            m.insert("atoms".into(), Value::Array(values.iter().map(&leaf).collect()));
        }
        Atoms::Nat(t) => {
            let ex: Map<String, Value> = t.exceptional().iter().map(|(k, v)| (k.to_string(), leaf(v))).collect();
            m.insert("exceptional".into(), Value::Object(ex));
            m.insert("tail".into(), leaf(t.tail()));
        }
    }
    m
}

fn parse_measure(v: &Value, dim: usize, space: &Space) -> Result<MeasureDef> {
    let o = object(v, "measure")?;
    check_keys(o, &["kind", "space", "atoms", "exceptional", "tail", "set_values"], "measure")?;
    if let Some(s) = o.get("space") {
        if parse_space(s)? != *space {
            return Err(Error::SpaceMismatch);
        }
    }
    let kind = o.get("kind").and_then(Value::as_str).ok_or_else(|| perr("measure needs a kind"))?;
    if let Some(table) = o.get("set_values") {
        if kind != "pos" || o.contains_key("atoms") || o.contains_key("exceptional") || o.contains_key("tail") {
            return Err(perr("set_values is only for positive measures and excludes atomwise data"));
        }
        return Ok(MeasureDef::Pos(measure_from_set_values(object(table, "set_values")?, dim, space)?));
    }
    match kind {
        "pos" => {
            let atoms = parse_atoms(space, o, "atoms", |x| parse_ext(x, dim), None)?;
            Ok(MeasureDef::Pos(PosMeasure::from_atoms(dim, atoms)?))
        }
        "signed" => {
            let atoms = parse_atoms(space, o, "atoms", |x| parse_vector(x, dim), Some(LatticeElement::zero(dim)))?;
            Ok(MeasureDef::Signed(SignedMeasure::from_atoms(dim, atoms)?))
        }
        other => Err(perr(format!("unknown measure kind {other:?}"))),
    }
}

/// Rebuilds a positive measure on a finite space from set values, rejecting
/// tables that are not additive over the atoms.
fn measure_from_set_values(table: &Map<String, Value>, dim: usize, space: &Space) -> Result<PosMeasure> {
    let Space::Finite(fs) = space else {
        return Err(perr("set_values is only supported on finite spaces"));
    };
    let mut entries = Vec::new();
    for (expr, v) in table {
        let MeasurableSet::Finite(set) = parse_set_expr(space, expr)? else { unreachable!() };
        entries.push((expr, set, parse_ext(v, dim)?));
    }
    let atoms: Vec<ExtElement> = (0..fs.len())
        .map(|i| {
            entries
                .iter()
                .find(|(_, s, _)| *s == fs.atom(i))
                .map(|(_, _, v)| v.clone())
                .ok_or_else(|| perr(format!("set_values lacks the atom {}", fs.atoms()[i])))
        })
        .collect::<Result<_>>()?;
    let mu = PosMeasure::finite(fs.clone(), dim, atoms)?;
    for (expr, set, v) in &entries {
        if mu.eval(&(*set).into())? != *v {
            return Err(perr(format!("set_values is not additive at {expr:?}")));
        }
    }
    Ok(mu)
}

fn parse_operator(v: &Value, dim: usize, space: &Space) -> Result<RegularOperator> {
    let o = object(v, "operator")?;
    check_keys(o, &["columns", "exceptional", "tail"], "operator")?;
    let cols = parse_atoms(space, o, "columns", |x| parse_vector(x, dim), None)?;
    RegularOperator::from_columns(dim, cols)
}

fn parse_function(v: &Value, space: &Space) -> Result<SimpleFunction> {
    match (v, space) {
        (Value::Array(_), Space::Finite(_)) => {
            let mut o = Map::new();
            o.insert("values".into(), v.clone());
            Ok(SimpleFunction::from_atoms(parse_atoms(space, &o, "values", parse_scalar, None)?))
        }
        (Value::Object(o), Space::Nat) => {
            check_keys(o, &["exceptional", "tail"], "function")?;
            Ok(SimpleFunction::from_atoms(parse_atoms(space, o, "values", parse_scalar, Some(scalar::zero()))?))
        }
        _ => Err(perr("functions are value lists on finite spaces and exceptional/tail objects on ℕ")),
    }
}

fn parse_transfer(v: &Value, dim: usize) -> Result<TransferDef> {
    let o = object(v, "transfer")?;
    check_keys(o, &["mode", "mu_primed", "nu_primed", "mu_s", "nu_s"], "transfer")?;
    let mode = match o.get("mode").and_then(Value::as_str) {
        Some("sup") => Extremum::Sup,
        Some("inf") => Extremum::Inf,
        _ => return Err(perr("transfer mode must be \"sup\" or \"inf\"")),
    };
    let list = |k: &str| -> Result<Vec<LatticeElement>> {
        o.get(k)
            .and_then(Value::as_array)
            .ok_or_else(|| perr(format!("transfer needs {k}")))?
            .iter()
            .map(|x| parse_vector(x, dim))
            .collect()
    };
    let one = |k: &str| parse_vector(o.get(k).ok_or_else(|| perr(format!("transfer needs {k}")))?, dim);
    let instance = AbstractTransferInstance {
        mu_primed: list("mu_primed")?,
        nu_primed: list("nu_primed")?,
        mu_s: one("mu_s")?,
        nu_s: one("nu_s")?,
    };
    // The lemma only speaks about instances meeting its hypotheses.
    match regularity_transfer_check(&instance, mode) {
        Err(Error::Hypothesis(msg)) => return Err(perr(msg)),
        other => other?,
    };
    Ok(TransferDef { mode, instance })
}

impl RawFile {
    fn build(self) -> Result<Instance> {
        let dim = self.lattice.dim;
        if dim == 0 {
            return Err(perr("lattice dimension must be at least 1"));
        }
        let norm = parse_norm(self.lattice.norm.as_ref(), dim)?;
        let space = parse_space(&self.space)?;
        let mut inst = Instance::empty(dim, norm, space);
        let mut seen = std::collections::BTreeSet::new();
        let mut fresh = |name: &str| {
            if seen.insert(name.to_owned()) {
                Ok(())
            } else {
                Err(perr(format!("duplicate name {name:?}")))
            }
        };
        let ctx = |name: &str, e: Error| match e {
            Error::Parse(m) => Error::Parse(format!("{name}: {m}")),
            other => other,
        };
        for (name, v) in &self.measures.0 {
            fresh(name)?;
            inst.measures.insert(name.clone(), parse_measure(v, dim, &inst.space).map_err(|e| ctx(name, e))?);
        }
        for (name, v) in &self.operators.0 {
            fresh(name)?;
            inst.operators.insert(name.clone(), parse_operator(v, dim, &inst.space).map_err(|e| ctx(name, e))?);
        }
        for (name, v) in &self.functions.0 {
            fresh(name)?;
            inst.functions.insert(name.clone(), parse_function(v, &inst.space).map_err(|e| ctx(name, e))?);
        }
        for (name, v) in &self.transfers.0 {
            fresh(name)?;
            inst.transfers.insert(name.clone(), parse_transfer(v, dim).map_err(|e| ctx(name, e))?);
        }
        Ok(inst)
    }
}

fn parse_nat_list(body: &str) -> Result<Vec<u64>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| perr(format!("{x:?} is not a natural")))).collect()
}

fn parse_term(space: &Space, term: &str) -> Result<MeasurableSet> {
    let term = term.trim();
    if term == "all" {
        return Ok(space.full());
    }
    let inner = |prefix: &str| term.strip_prefix(prefix).and_then(|r| r.strip_suffix(']'));
    match space {
        Space::Nat => {
            if let Some(body) = inner("fin:[") {
                Ok(NatSet::fin(parse_nat_list(body)?).into())
            } else if let Some(body) = inner("cofin:[") {
                Ok(NatSet::cofin(parse_nat_list(body)?).into())
            } else if let Ok(n) = term.parse::<u64>() {
                Ok(NatSet::fin([n]).into())
            } else {
                Err(perr(format!("invalid ℕ set term {term:?}")))
            }
        }
        Space::Finite(s) => {
            let label = |l: &str| {
                s.index_of(l.trim()).map(|i| s.atom(i)).ok_or_else(|| Error::SetOutsideSpace(l.trim().to_owned()))
            };
            if let Some(body) = term.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                if body.trim().is_empty() {
                    return Ok(FiniteSet::EMPTY.into());
                }
                let mut set = FiniteSet::EMPTY;
                for l in body.split(',') {
                    set = set.union(label(l)?);
                }
                Ok(set.into())
            } else if term.starts_with("fin:") || term.starts_with("cofin:") {
                Err(Error::SpaceMismatch)
            } else {
                Ok(label(term)?.into())
            }
        }
    }
}

/// Parses a set expression: terms (atom labels, `{a,b}`, `fin:[..]`,
/// `cofin:[..]`, naturals on ℕ, `all`) combined left to right with `+`
/// (union) and `-` (difference). The empty string is the empty set.
pub fn parse_set_expr(space: &Space, expr: &str) -> Result<MeasurableSet> {
    let expr = expr.trim();
    if expr.is_empty() {
        return Ok(space.empty());
    }
    let mut depth = 0i32;
    let mut pieces = Vec::new();
    let mut start = 0;
    let mut op = '+';
    for (i, c) in expr.char_indices() {
        match c {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            '+' | '-' if depth == 0 => {
                pieces.push((op, &expr[start..i]));
                op = c;
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(perr(format!("unbalanced brackets in {expr:?}")));
        }
    }
    if depth != 0 {
        return Err(perr(format!("unbalanced brackets in {expr:?}")));
    }
    pieces.push((op, &expr[start..]));
    let mut acc = space.empty();
    for (op, term) in pieces {
        if term.trim().is_empty() {
            return Err(perr(format!("empty term in {expr:?}")));
        }
        let t = parse_term(space, term)?;
        acc = match (acc, t) {
            (MeasurableSet::Finite(a), MeasurableSet::Finite(b)) => {
                if op == '+' { a.union(b) } else { a.difference(b) }.into()
            }
            (MeasurableSet::Nat(a), MeasurableSet::Nat(b)) => {
                if op == '+' { a.union(&b) } else { a.difference(&b) }.into()
            }
            _ => return Err(Error::SpaceMismatch),
        };
    }
    Ok(acc)
}
