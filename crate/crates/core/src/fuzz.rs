//! Seeded fuzzing of the law registry with deterministic shrinking.
//!
//! Case `i` draws its own ChaCha8 stream from `(seed, i)`, so the report does
//! not depend on how rayon schedules the cases. Each case is a random finite
//! instance plus a random ℕ instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gen;
use crate::instance::Instance;
use crate::laws::{laws, Law, LawReport, Tally};
use crate::scalar;

pub const MAX_DIM: usize = 4;
pub const MAX_ATOMS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: u64,
    /// Upper bound; each case samples its dimension from `1..=max_dim`.
    pub max_dim: usize,
    /// Upper bound; each case samples its atom count from `1..=max_atoms`.
    pub max_atoms: usize,
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cases == 0 {
            return Err(Error::Hypothesis("at least one case is required".into()));
        }
        if !(1..=MAX_DIM).contains(&self.max_dim) {
            return Err(Error::Hypothesis(format!("dimension bound must be in 1..={MAX_DIM}")));
        }
        if !(1..=MAX_ATOMS).contains(&self.max_atoms) {
            return Err(Error::Hypothesis(format!("atom bound must be in 1..={MAX_ATOMS}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub case: u64,
    pub law: &'static str,
    pub witness: String,
    /// The shrunk instance, in instance-file form.
    pub reproducer: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub laws: Vec<LawReport>,
    pub failures: Vec<FuzzFailure>,
    pub pass: bool,
}

impl FuzzReport {
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = format!("fuzz seed {} cases {} dim<={} atoms<={}\n", c.seed, c.cases, c.max_dim, c.max_atoms);
        for l in &self.laws {
            let mark = if l.pass() { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{mark}] {:<32} checks {:>9}  violations {}\n", l.name, l.checks, l.violations));
        }
        for f in &self.failures {
            out.push_str(&format!("\n{} failed on case {}: {}\nminimized reproducer:\n", f.law, f.case, f.witness));
            out.push_str(&serde_json::to_string_pretty(&f.reproducer).expect("JSON value"));
            out.push('\n');
        }
        out.push_str(if self.pass { "result: PASS\n" } else { "result: FAIL\n" });
        out
    }
}

fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The two instances of case `index`.
pub fn case_instances(seed: u64, index: u64, max_dim: usize, max_atoms: usize) -> [Instance; 2] {
    let mut rng = case_rng(seed, index);
    let dim = rng.gen_range(1..=max_dim);
    let atoms = rng.gen_range(1..=max_atoms);
    let finite = gen::finite_instance(&mut rng, dim, atoms);
    let nat = gen::nat_instance(&mut rng, dim);
    [finite, nat]
}

pub fn run(config: FuzzConfig) -> Result<FuzzReport> {
    run_with(config, &laws(None))
}

/// Runs `selected` on every case. Exposed separately so tests can fuzz a
/// deliberately broken law.
pub fn run_with(config: FuzzConfig, selected: &[&Law]) -> Result<FuzzReport> {
    config.validate()?;
    let per_case: Vec<Vec<(Tally, Option<usize>)>> = (0..config.cases)
        .into_par_iter()
        .map(|i| {
            let instances = case_instances(config.seed, i, config.max_dim, config.max_atoms);
            selected
                .iter()
                .map(|law| {
                    let mut total = Tally::default();
                    let mut failing = None;
                    for (k, inst) in instances.iter().enumerate() {
                        let t = law.run(inst);
                        if t.violations > 0 && failing.is_none() {
                            failing = Some(k);
                        }
                        total.merge(&t);
                    }
                    (total, failing)
                })
                .collect()
        })
        .collect();

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (j, law) in selected.iter().enumerate() {
        let mut total = Tally::default();
        let mut first_failure = None;
        for (i, case) in per_case.iter().enumerate() {
            let (t, failing) = &case[j];
            total.merge(t);
            if first_failure.is_none() {
                first_failure = failing.map(|k| (i as u64, k));
            }
        }
        reports.push(LawReport::from_tally(law, &total));
        if let Some((case, k)) = first_failure {
            let inst = case_instances(config.seed, case, config.max_dim, config.max_atoms)[k].clone();
            let small = shrink(&inst, |i| law.run(i).violations > 0);
            let witness = law.run(&small).first_violation.unwrap_or_default();
            failures.push(FuzzFailure { case, law: law.name, witness, reproducer: small.to_json() });
        }
    }
    Ok(FuzzReport { config, pass: failures.is_empty(), laws: reports, failures })
}

fn parse_value(v: &Value) -> Option<Instance> {
    Instance::from_json_str(&v.to_string()).ok()
}

const OBJECT_KINDS: [&str; 4] = ["measures", "operators", "functions", "transfers"];

fn for_each_object(v: &mut Value, mut f: impl FnMut(&str, &mut Value)) {
    for kind in OBJECT_KINDS {
        if let Some(Value::Object(map)) = v.get_mut(kind) {
            for obj in map.values_mut() {
                f(kind, obj);
            }
        }
    }
}

/// Removes atom `i` (finite spaces) from every atomwise list.
fn remove_atom(v: &Value, i: usize) -> Option<Value> {
    let mut out = v.clone();
    let atoms = out.pointer_mut("/space/atoms")?.as_array_mut()?;
    if atoms.len() <= 1 {
        return None;
    }
    atoms.remove(i);
    for_each_object(&mut out, |kind, obj| {
        let list = match (kind, obj) {
            ("functions", Value::Array(a)) => Some(a),
            (_, Value::Object(o)) => {
                let key = if o.contains_key("atoms") { "atoms" } else { "columns" };
                o.get_mut(key).and_then(Value::as_array_mut)
            }
            _ => None,
        };
        if let Some(list) = list {
            list.remove(i);
        }
    });
    Some(out)
}

/// Drops exceptional point `key` (ℕ) from every table.
fn remove_key(v: &Value, key: &str) -> Value {
    let mut out = v.clone();
    for_each_object(&mut out, |_, obj| {
        if let Some(Value::Object(ex)) = obj.get_mut("exceptional") {
            ex.remove(key);
        }
    });
    out
}

fn nat_keys(v: &Value) -> Vec<String> {
    let mut keys = std::collections::BTreeSet::new();
    let mut copy = v.clone();
    for_each_object(&mut copy, |_, obj| {
        if let Some(Value::Object(ex)) = obj.get("exceptional") {
            keys.extend(ex.keys().cloned());
        }
    });
    let mut keys: Vec<String> = keys.into_iter().collect();
    keys.sort_by_key(|k| k.parse::<u64>().unwrap_or(u64::MAX));
    keys
}

fn drop_coord_in(vector: &mut Value, j: usize) {
    if let Value::Array(a) = vector {
        if j < a.len() {
            a.remove(j);
        }
    }
}

/// Projects every vector onto the coordinates other than `j`.
fn drop_coord(v: &Value, j: usize) -> Option<Value> {
    let mut out = v.clone();
    let dim = out.pointer("/lattice/dim")?.as_u64()?;
    if dim <= 1 {
        return None;
    }
    *out.pointer_mut("/lattice/dim")? = Value::from(dim - 1);
    if let Some(w) = out.pointer_mut("/lattice/norm/weights") {
        drop_coord_in(w, j);
    }
    for_each_object(&mut out, |kind, obj| {
        if kind == "functions" {
            return;
        }
        let Value::Object(o) = obj else { return };
        for key in ["atoms", "columns", "mu_primed", "nu_primed"] {
            if let Some(Value::Array(list)) = o.get_mut(key) {
                list.iter_mut().for_each(|x| drop_coord_in(x, j));
            }
        }
        if let Some(Value::Object(ex)) = o.get_mut("exceptional") {
            ex.values_mut().for_each(|x| drop_coord_in(x, j));
        }
        for key in ["tail", "mu_s", "nu_s"] {
            if let Some(x) = o.get_mut(key) {
                drop_coord_in(x, j);
            }
        }
    });
    Some(out)
}

/// JSON pointers to every scalar inside the named objects.
fn scalar_slots(v: &Value) -> Vec<String> {
    fn walk(v: &Value, path: String, out: &mut Vec<String>) {
        match v {
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, format!("{path}/{i}"), out)),
            Value::Object(o) => {
                o.iter().for_each(|(k, x)| walk(x, format!("{path}/{}", k.replace('~', "~0").replace('/', "~1")), out))
            }
            Value::Number(_) => out.push(path),
            Value::String(s) if scalar::parse(s).is_ok() => out.push(path),
            _ => {}
        }
    }
    let mut out = Vec::new();
    for kind in OBJECT_KINDS {
        if let Some(x) = v.get(kind) {
            walk(x, format!("/{kind}"), &mut out);
        }
    }
    out
}

fn read_scalar(v: &Value) -> Option<scalar::Scalar> {
    match v {
        Value::Number(n) => n.as_i64().map(scalar::int),
        Value::String(s) => scalar::parse(s).ok(),
        _ => None,
    }
}

fn candidates(v: &Value) -> Vec<Value> {
    let mut out = Vec::new();
    if let Some(n) = v.pointer("/space/atoms").and_then(Value::as_array).map(Vec::len) {
        out.extend((0..n).filter_map(|i| remove_atom(v, i)));
    } else {
        out.extend(nat_keys(v).iter().map(|k| remove_key(v, k)));
    }
    let dim = v.pointer("/lattice/dim").and_then(Value::as_u64).unwrap_or(1) as usize;
    out.extend((0..dim).filter_map(|j| drop_coord(v, j)));
    for slot in scalar_slots(v) {
        let Some(r) = v.pointer(&slot).and_then(read_scalar) else { continue };
        for c in scalar::shrink_candidates(&r) {
            let mut next = v.clone();
            *next.pointer_mut(&slot).expect("slot exists") = scalar::to_json(&c);
            out.push(next);
        }
    }
    for kind in OBJECT_KINDS {
        if let Some(Value::Object(map)) = v.get(kind) {
            for name in map.keys() {
                let mut next = v.clone();
                next[kind].as_object_mut().expect("object").remove(name);
                out.push(next);
            }
        }
    }
    out
}

/// Greedy deterministic shrinking: atoms (or ℕ exceptional points) first,
/// then dimensions, then scalar magnitudes, then whole objects. The first
/// candidate that parses and still fails is taken, and the search restarts.
pub fn shrink(inst: &Instance, fails: impl Fn(&Instance) -> bool) -> Instance {
    let mut current = inst.to_json();
    let mut best = inst.clone();
    'outer: loop {
        for cand in candidates(&current) {
            if let Some(parsed) = parse_value(&cand) {
                if fails(&parsed) {
                    current = parsed.to_json();
                    best = parsed;
                    continue 'outer;
                }
            }
        }
        return best;
    }
}
