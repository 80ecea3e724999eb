//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordmeas::counterexample::counterexample_report;
use ordmeas::fuzz::{self, FuzzConfig};
use ordmeas::gen;
use ordmeas::instance::Instance;
use ordmeas::integral::triangle_check;
use ordmeas::lattice::ExtElement;
use ordmeas::measure::{measure_norm, partition_bounds};
use ordmeas::operator::{modulus_oracle, nob_report};
use ordmeas::repr::{
    isomorphism_check, nob_dichotomy_check, psi_embedding_check, recover_on_open, regularity_transfer_check,
};
use ordmeas::{
    Extremum, FiniteSpace, LatticeElement, LatticeNorm, MeasurableSet, PosMeasure, RegularOperator, SimpleFunction,
};

const GOLDEN: &str = include_str!("golden/counterexamples.txt");

type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn FnOnce() -> Outcome + 'a>);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

/// Finite instances with dimension and atom count cycling through 1..=4 and 1..=5.
fn finite_instances(criterion: u64, n: usize) -> Vec<Instance> {
    let mut rng = rng(criterion);
    (0..n).map(|i| gen::finite_instance(&mut rng, 1 + i % 4, 1 + i % 5)).collect()
}

fn sets(inst: &Instance) -> Vec<MeasurableSet> {
    let ordmeas::Space::Finite(space) = &inst.space else { unreachable!() };
    space.subsets_of(space.full()).unwrap().into_iter().map(Into::into).collect()
}

fn finite_pos(inst: &Instance) -> Vec<(&String, &PosMeasure)> {
    inst.pos_measures().collect()
}

fn criterion_1(instances: &[Instance]) -> Outcome {
    let mut checks = 0;
    for (i, inst) in instances.iter().enumerate() {
        let ms = finite_pos(inst);
        for (a, mu) in &ms {
            for (b, nu) in &ms {
                let lhs = mu.join(nu).unwrap().add(&mu.meet(nu).unwrap()).unwrap();
                let rhs = mu.add(nu).unwrap();
                for d in sets(inst) {
                    checks += 1;
                    if lhs.eval(&d).unwrap() != rhs.eval(&d).unwrap() {
                        return Outcome::new(false, format!("instance {i}: {a} ∨ {b} + {a} ∧ {b} ≠ {a} + {b}"));
                    }
                }
            }
        }
    }
    Outcome::new(true, format!("{} instances, {checks} set evaluations", instances.len()))
}

fn criterion_2(instances: &[Instance]) -> Outcome {
    let mut checks = 0;
    for (i, inst) in instances.iter().enumerate() {
        let ms = finite_pos(inst);
        for (k, (a, mu)) in ms.iter().enumerate() {
            for (b, nu) in &ms[k..] {
                let (join, meet) = (mu.join(nu).unwrap(), mu.meet(nu).unwrap());
                for d in sets(inst) {
                    checks += 2;
                    let (sup, inf) = partition_bounds(*mu, *nu, &d).unwrap();
                    if join.eval(&d).unwrap() != sup || meet.eval(&d).unwrap() != inf {
                        return Outcome::new(false, format!("instance {i}: {a}, {b} disagree with the formula"));
                    }
                }
            }
        }
        let signed = inst.signed_measures();
        for (k, (a, mu)) in signed.iter().enumerate() {
            for (b, nu) in &signed[k..] {
                let (join, meet) = (mu.join(nu).unwrap(), mu.meet(nu).unwrap());
                for d in sets(inst) {
                    checks += 2;
                    let (sup, inf) = partition_bounds(mu, nu, &d).unwrap();
                    if ExtElement::Finite(join.eval(&d).unwrap()) != sup
                        || ExtElement::Finite(meet.eval(&d).unwrap()) != inf
                    {
                        return Outcome::new(false, format!("instance {i}: signed {a}, {b} disagree"));
                    }
                }
            }
        }
    }
    Outcome::new(true, format!("{checks} fast-path/formula comparisons"))
}

fn criterion_3() -> Outcome {
    let report = counterexample_report();
    let text = report.render();
    if text != GOLDEN {
        return Outcome::new(false, "report differs from the golden file");
    }
    let inf = &report.infimum;
    let hahn = &report.hahn;
    let expected = [
        "formula_at_N = inf",
        "measure_inf = 0",
        "x = (1,0), y = (0,1)",
        "mu_plus({p}) = (1,0)",
        "mu_minus({p}) = (0,1)",
        "hahn_partition_exists = false",
    ];
    if let Some(line) = expected.iter().find(|l| !text.contains(*l)) {
        return Outcome::new(false, format!("missing line {line:?}"));
    }
    Outcome::new(
        report.pass() && inf.formula_at_n.is_infinite() && !hahn.hahn_partition_exists,
        "golden report matches",
    )
}

fn criterion_4(instances: &[Instance]) -> Outcome {
    let norms = [LatticeNorm::SUP, LatticeNorm::ONE];
    for (i, inst) in instances.iter().enumerate() {
        let probes: Vec<SimpleFunction> = inst.functions.values().cloned().collect();
        let (t, s) = (inst.operator("T").unwrap(), inst.operator("S").unwrap());
        for (x, y) in [(t, s), (s, t)] {
            let r = isomorphism_check(x, y, &probes, &norms).unwrap();
            if !r.all_ok() {
                return Outcome::new(false, format!("instance {i}: {}", r.witnesses.join("; ")));
            }
        }
    }
    Outcome::new(true, format!("{} instances, sup and one norms", instances.len()))
}

/// `sup { T y : −x ≤ y ≤ x }` straight from the vertices of the box.
fn sign_vector_sup(t: &RegularOperator, x: &SimpleFunction) -> LatticeElement {
    let space = match x.space() {
        ordmeas::Space::Finite(s) => s,
        ordmeas::Space::Nat => unreachable!(),
    };
    let values = x.atoms().stored();
    let mut best: Option<LatticeElement> = None;
    for signs in 0u32..(1 << space.len()) {
        let y: Vec<_> = (0..space.len())
            .map(|i| if signs & (1 << i) != 0 { values[i].clone() } else { -values[i].clone() })
            .collect();
        let image = t.apply(&SimpleFunction::finite(space.clone(), y).unwrap()).unwrap();
        best = Some(match best {
            None => image,
            Some(b) => b.join(&image),
        });
    }
    best.unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut checks = 0;
    for i in 0..500 {
        let space = FiniteSpace::numbered(1 + i % 5).unwrap();
        let t = gen::operator(&mut rng, &space, 1 + i % 4, false);
        let modulus = t.modulus();
        for _ in 0..5 {
            let x = gen::function(&mut rng, &space, true);
            let (fast, oracle, local) =
                (modulus.apply(&x).unwrap(), modulus_oracle(&t, &x).unwrap(), sign_vector_sup(&t, &x));
            checks += 1;
            if fast != oracle || fast != local {
                return Outcome::new(false, format!("operator {i}: |T|x = {fast}, oracle {oracle}, vertices {local}"));
            }
        }
    }
    Outcome::new(true, format!("500 operators, {checks} test vectors"))
}

fn criterion_6(instances: &[Instance]) -> Outcome {
    let mut dominated = 0;
    for (i, inst) in instances.iter().enumerate() {
        let (t, d) = (inst.operator("T").unwrap(), inst.operator("D").unwrap());
        assert!(d.dominated_by(t).unwrap());
        let tt = nob_report(t, &inst.norm).t_t.unwrap();
        for (name, f) in &inst.functions {
            let norm = f.sup_norm();
            if !t.apply(f).unwrap().abs().le(&tt.scale(&norm)) {
                return Outcome::new(false, format!("instance {i}: |T({name})| exceeds ‖{name}‖·t_T"));
            }
            dominated += 1;
            let two = &norm * ordmeas::scalar::int(2);
            if !d.apply(f).unwrap().abs().le(&tt.scale(&two)) {
                return Outcome::new(false, format!("instance {i}: |D({name})| exceeds 2‖{name}‖·t_T"));
            }
        }
    }
    Outcome::new(true, format!("{} instances, {dominated} dominated images", instances.len()))
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let mut checks = 0;
    for i in 0..300 {
        let space = FiniteSpace::numbered(1 + i % 3).unwrap();
        let t = gen::operator(&mut rng, &space, 1 + i % 4, true);
        for v in space.subsets_of(space.full()).unwrap() {
            let r = recover_on_open(&t, v).unwrap();
            checks += 1;
            let expected = t.apply(&SimpleFunction::indicator(&t.space(), &v.into()).unwrap()).unwrap();
            if !r.holds() || r.open_value != expected || r.compact_value != expected {
                return Outcome::new(false, format!("operator {i} at {}: {r:?}", space.describe(v)));
            }
        }
    }
    Outcome::new(true, format!("300 positive operators, {checks} open sets"))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let (mut finite, mut infinite) = (0, 0);
    for i in 0..200 {
        let t = gen::nat_operator(&mut rng, 1 + i % 4, 12);
        let norm = gen::norm(&mut rng, t.dim());
        let r = nob_dichotomy_check(&t, &norm).unwrap();
        if !r.holds {
            return Outcome::new(false, format!("operator {i}: {r:?}"));
        }
        if r.measure_finite {
            finite += 1;
        } else {
            infinite += 1;
        }
    }
    Outcome::new(finite > 0 && infinite > 0, format!("200 operators: {finite} finite, {infinite} infinite"))
}

fn criterion_9() -> Outcome {
    let mut rng = rng(9);
    for mode in [Extremum::Sup, Extremum::Inf] {
        for i in 0..1000 {
            let inst = gen::transfer(&mut rng, 1 + i % 4, mode);
            let r = regularity_transfer_check(&inst, mode).unwrap();
            if !r.holds {
                return Outcome::new(false, format!("{mode:?} instance {i}: {} vs {}", r.extremum, r.nu_s));
            }
        }
    }
    Outcome::new(true, "1000 instances per mode")
}

fn criterion_10(instances: &[Instance]) -> Outcome {
    let one = LatticeNorm::ONE;
    let mut rng = rng(10);
    for (i, inst) in instances.iter().enumerate() {
        let ms = finite_pos(inst);
        for (a, mu) in &ms {
            for (b, nu) in &ms {
                let sum = mu.add(nu).unwrap().to_signed().unwrap();
                let lhs = measure_norm(&one, &mu.to_signed().unwrap()) + measure_norm(&one, &nu.to_signed().unwrap());
                if lhs != measure_norm(&one, &sum) {
                    return Outcome::new(false, format!("instance {i}: ‖{a}‖ + ‖{b}‖ ≠ ‖{a} + {b}‖"));
                }
            }
        }
        let ordmeas::Space::Finite(space) = &inst.space else { unreachable!() };
        let x = rng.gen_range(0..space.len());
        let e = gen::element(&mut rng, inst.dim, false);
        let probes: Vec<PosMeasure> = ms.iter().map(|(_, m)| (*m).clone()).collect();
        for norm in [&one, &LatticeNorm::SUP, &inst.norm] {
            let r = psi_embedding_check(space, x, &e, &probes, norm).unwrap();
            if !r.holds() {
                return Outcome::new(false, format!("instance {i}: {}", r.witnesses.join("; ")));
            }
        }
    }
    Outcome::new(true, format!("{} instances", instances.len()))
}

fn criterion_11(instances: &[Instance]) -> Outcome {
    let mut checks = 0;
    let mut rng = rng(11);
    for (i, inst) in instances.iter().enumerate() {
        for (name, mu) in inst.signed_measures() {
            for (fname, f) in &inst.functions {
                checks += 1;
                let r = triangle_check(f, &mu).unwrap();
                if !r.holds {
                    return Outcome::new(
                        false,
                        format!("instance {i}: {fname} against {name}: {} vs {}", r.lhs, r.rhs),
                    );
                }
            }
        }
    }
    for i in 0..300 {
        let dim = 1 + i % 4;
        let mu = gen::nat_signed_measure(&mut rng, dim, 12);
        let f = gen::nat_function(&mut rng, 12, false);
        checks += 1;
        let r = triangle_check(&f, &mu).unwrap();
        if !r.holds {
            return Outcome::new(false, format!("ℕ case {i}: {} vs {}", r.lhs, r.rhs));
        }
    }
    Outcome::new(true, format!("{checks} (f, μ) pairs"))
}

fn criterion_12() -> Outcome {
    let config = FuzzConfig { seed: 42, cases: 1000, max_dim: fuzz::MAX_DIM, max_atoms: fuzz::MAX_ATOMS };
    let run_on = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| fuzz::run(config).unwrap())
    };
    let serial = run_on(1);
    let parallel = run_on(4.max(std::thread::available_parallelism().map_or(1, |n| n.get())));
    let (a, b) = (serial.render(), parallel.render());
    let json_a = serde_json::to_string(&serial).unwrap();
    let json_b = serde_json::to_string(&parallel).unwrap();
    if a != b || json_a != json_b {
        return Outcome::new(false, "reports differ between 1 and many threads");
    }
    Outcome::new(
        serial.pass,
        format!("1000 cases, {} bytes identical, fuzz {}", a.len(), if serial.pass { "pass" } else { "FAIL" }),
    )
}

fn timed(bound: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(b) = bound {
        if elapsed > b {
            out.ok = false;
            out.detail = format!("{} (over the {:?} bound)", out.detail, b);
        }
    }
    (out, elapsed)
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let base = finite_instances(1, 1000);
    let half = &base[..500];
    let criteria: Vec<Criterion> = vec![
        ("modular identity", secs(10), Box::new(|| criterion_1(&base))),
        ("oracle equivalence", secs(30), Box::new(|| criterion_2(&base))),
        ("counterexample reproduction", secs(1), Box::new(criterion_3)),
        ("representation isomorphism", secs(20), Box::new(|| criterion_4(half))),
        ("modulus oracle", secs(20), Box::new(criterion_5)),
        ("t_T contract", None, Box::new(|| criterion_6(half))),
        ("recovery formulas", secs(10), Box::new(criterion_7)),
        ("nob dichotomy", None, Box::new(criterion_8)),
        ("regularity transfer", None, Box::new(criterion_9)),
        ("AL additivity and ψ embedding", None, Box::new(|| criterion_10(half))),
        ("triangle inequality", None, Box::new(|| criterion_11(&base))),
        ("fuzz determinism", None, Box::new(criterion_12)),
    ];
    // Criterion numbers on the command line restrict the run.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, (name, bound, run)) in criteria.into_iter().enumerate() {
        if !only.is_empty() && !only.contains(&(n + 1)) {
            continue;
        }
        let (out, elapsed) = timed(bound, run);
        let tag = if out.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name}: {} ({:.2?})", n + 1, out.detail, elapsed);
        if !out.ok {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all selected criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
