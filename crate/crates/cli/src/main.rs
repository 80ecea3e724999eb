use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ordmeas::counterexample::counterexample_report;
use ordmeas::fuzz::{self, FuzzConfig};
use ordmeas::instance::{Instance, MeasureDef};
use ordmeas::integral::{integrate, integrate_pos, integrate_signed};
use ordmeas::laws::{run_laws, Suite};
use ordmeas::measure::measure_norm;
use ordmeas::operator::nob_report;
use ordmeas::repr::{
    isomorphism_check, measure_to_operator, operator_to_measure, pos_measure_to_operator, RepresentingMeasure,
};
use ordmeas::{scalar, Error, LatticeNorm, SimpleFunction};

const RUNNING: &str = include_str!("../data/running.json");
const COUNTER: &str = include_str!("../data/counter.json");

/// Generated instances added to the bundled files by `laws --builtin`.
const BUILTIN_CASES: u64 = 8;

#[derive(Parser)]
#[command(name = "ordmeas", version, about = "Exact vector-lattice-valued measures on discrete spaces")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure on a set expression.
    Eval {
        #[arg(long)]
        file: PathBuf,
        measure: String,
        /// Atom labels, `{a,b}`, `fin:[..]`, `cofin:[..]`, `all`, joined by `+` and `-`.
        set: String,
    },
    /// Lattice operations on named measures, operators or functions.
    Op {
        op: LatticeOp,
        #[arg(long)]
        file: PathBuf,
        first: String,
        second: Option<String>,
        /// Evaluate a resulting measure on this set instead of printing it.
        #[arg(long)]
        set: Option<String>,
    },
    /// Integrate a function against a measure.
    Integrate {
        #[arg(long)]
        file: PathBuf,
        function: String,
        measure: String,
    },
    /// Move between operators and their representing measures.
    Represent {
        mode: RepresentMode,
        #[arg(long)]
        file: PathBuf,
        name: String,
        /// Second operator for `check` (defaults to the first).
        other: Option<String>,
    },
    /// Run the law suites.
    #[command(group(ArgGroup::new("source").required(true).args(["file", "builtin"])))]
    Laws {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        builtin: bool,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Run every law on seeded random instances.
    Fuzz {
        #[arg(long, env = "ORDMEAS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: u64,
        #[arg(long, default_value_t = fuzz::MAX_DIM)]
        dim: usize,
        #[arg(long, default_value_t = fuzz::MAX_ATOMS)]
        atoms: usize,
    },
    /// Reproduce the two infinite-measure counterexamples.
    Counterexamples,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeOp {
    Join,
    Meet,
    Abs,
    Norm,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepresentMode {
    ToMeasure,
    ToOperator,
    Check,
}

/// A computed result: its text form and its JSON form.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn value(text: impl Into<String>) -> Self {
        let text = text.into();
        Output { json: json!({ "value": text }), text, ok: true }
    }

    fn object(v: Value) -> Self {
        Output { text: serde_json::to_string(&v).expect("JSON value"), json: v, ok: true }
    }
}

fn load(path: &PathBuf) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Instance::from_json_str(&text)
}

/// `obj` in instance-file form, as it would appear under `kind`.
fn as_file_object(inst: &Instance, kind: &str, fill: impl FnOnce(&mut Instance)) -> Value {
    let mut tmp = Instance::empty(inst.dim, inst.norm.clone(), inst.space.clone());
    fill(&mut tmp);
    tmp.to_json()[kind]["result"].clone()
}

fn measure_output(inst: &Instance, m: MeasureDef, set: Option<&str>) -> Result<Output, Error> {
    if let Some(expr) = set {
        return Ok(Output::value(m.eval(&inst.parse_set(expr)?)?.to_string()));
    }
    Ok(Output::object(as_file_object(inst, "measures", |t| {
        t.measures.insert("result".into(), m);
    })))
}

fn norm_text(v: Option<scalar::Scalar>) -> String {
    v.map_or_else(|| "inf".into(), |r| scalar::format(&r))
}

fn cmd_op(
    inst: &Instance,
    op: LatticeOp,
    first: &str,
    second: Option<&str>,
    set: Option<&str>,
) -> Result<Output, Error> {
    let binary = matches!(op, LatticeOp::Join | LatticeOp::Meet);
    if binary != second.is_some() {
        return Err(Error::Parse(if binary {
            "join and meet take two names".into()
        } else {
            "abs and norm take one name".into()
        }));
    }
    if let Ok(a) = inst.measure(first) {
        if let Some(b) = second {
            let b = inst.measure(b)?;
            let result = match (a, b) {
                (MeasureDef::Pos(x), MeasureDef::Pos(y)) => MeasureDef::Pos(match op {
                    LatticeOp::Join => x.join(y)?,
                    _ => x.meet(y)?,
                }),
                _ => {
                    let signed = |m: &MeasureDef| match m {
                        MeasureDef::Signed(s) => Ok(s.clone()),
                        MeasureDef::Pos(p) => p.to_signed(),
                    };
                    let (x, y) = (signed(a)?, signed(b)?);
                    MeasureDef::Signed(match op {
                        LatticeOp::Join => x.join(&y)?,
                        _ => x.meet(&y)?,
                    })
                }
            };
            return measure_output(inst, result, set);
        }
        return match (op, a) {
            (LatticeOp::Abs, MeasureDef::Pos(p)) => measure_output(inst, MeasureDef::Pos(p.clone()), set),
            (LatticeOp::Abs, MeasureDef::Signed(s)) => measure_output(inst, MeasureDef::Pos(s.abs()), set),
            (_, MeasureDef::Signed(s)) => Ok(Output::value(scalar::format(&measure_norm(&inst.norm, s)))),
            (_, MeasureDef::Pos(p)) => {
                Ok(Output::value(norm_text(p.to_signed().ok().map(|s| measure_norm(&inst.norm, &s)))))
            }
        };
    }
    if let Ok(a) = inst.operator(first) {
        let result = match (op, second) {
            (LatticeOp::Norm, _) => return Ok(Output::value(norm_text(nob_report(a, &inst.norm).regular_norm))),
            (LatticeOp::Abs, _) => a.modulus(),
            (LatticeOp::Join, Some(b)) => a.join(inst.operator(b)?)?,
            (_, Some(b)) => a.meet(inst.operator(b)?)?,
            (_, None) => unreachable!("arity checked above"),
        };
        return Ok(Output::object(as_file_object(inst, "operators", |t| {
            t.operators.insert("result".into(), result);
        })));
    }
    let f = inst.function(first)?;
    let result = match (op, second) {
        (LatticeOp::Norm, _) => return Ok(Output::value(scalar::format(&f.sup_norm()))),
        (LatticeOp::Abs, _) => f.abs(),
        (LatticeOp::Join, Some(g)) => f.zip_with(inst.function(g)?, |x, y| x.max(y).clone())?,
        (_, Some(g)) => f.zip_with(inst.function(g)?, |x, y| x.min(y).clone())?,
        (_, None) => unreachable!("arity checked above"),
    };
    Ok(Output::object(as_file_object(inst, "functions", |t| {
        t.functions.insert("result".into(), result);
    })))
}

fn cmd_integrate(inst: &Instance, function: &str, measure: &str) -> Result<Output, Error> {
    let f = inst.function(function)?;
    let value = match inst.measure(measure)? {
        MeasureDef::Pos(mu) if f.is_nonneg() => integrate_pos(f, mu)?.to_string(),
        MeasureDef::Pos(mu) => integrate(f, mu)?.to_string(),
        MeasureDef::Signed(mu) => integrate_signed(f, mu)?.to_string(),
    };
    Ok(Output::value(value))
}

fn cmd_represent(inst: &Instance, mode: RepresentMode, name: &str, other: Option<&str>) -> Result<Output, Error> {
    match mode {
        RepresentMode::ToMeasure => {
            let m = match operator_to_measure(inst.operator(name)?)? {
                RepresentingMeasure::Signed(s) => MeasureDef::Signed(s),
                RepresentingMeasure::Positive(p) => MeasureDef::Pos(p),
            };
            measure_output(inst, m, None)
        }
        RepresentMode::ToOperator => {
            let t = match inst.measure(name)? {
                MeasureDef::Signed(s) => measure_to_operator(s),
                MeasureDef::Pos(p) => pos_measure_to_operator(p)?,
            };
            Ok(Output::object(as_file_object(inst, "operators", |i| {
                i.operators.insert("result".into(), t);
            })))
        }
        RepresentMode::Check => {
            let t = inst.operator(name)?;
            let s = inst.operator(other.unwrap_or(name))?;
            let probes: Vec<SimpleFunction> = inst.functions.values().cloned().collect();
            let mut norms = vec![inst.norm.clone(), LatticeNorm::SUP, LatticeNorm::ONE];
            norms.dedup();
            let r = isomorphism_check(t, s, &probes, &norms)?;
            let mark = |b: bool| if b { "PASS" } else { "FAIL" };
            let mut text = format!(
                "[{}] roundtrip\n[{}] bipositive\n[{}] isometry\n[{}] lattice homomorphism",
                mark(r.roundtrip_ok),
                mark(r.bipositive_ok),
                mark(r.isometry_ok),
                mark(r.lattice_hom_ok)
            );
            for w in &r.witnesses {
                text.push_str(&format!("\nwitness: {w}"));
            }
            Ok(Output { ok: r.all_ok(), json: serde_json::to_value(&r).expect("serializable"), text })
        }
    }
}

fn builtin_instances() -> Result<Vec<Instance>, Error> {
    let mut out = vec![Instance::from_json_str(RUNNING)?, Instance::from_json_str(COUNTER)?];
    for i in 0..BUILTIN_CASES {
        out.extend(fuzz::case_instances(0, i, fuzz::MAX_DIM, fuzz::MAX_ATOMS));
    }
    Ok(out)
}

fn cmd_laws(file: Option<&PathBuf>, suite: &str) -> Result<Output, Error> {
    let suite = Suite::parse(suite)?;
    let instances = match file {
        Some(path) => vec![load(path)?],
        None => builtin_instances()?,
    };
    let report = run_laws(&instances, suite);
    let mut text = report.render();
    text.push_str(if report.pass { "result: PASS" } else { "result: FAIL" });
    Ok(Output { ok: report.pass, json: serde_json::to_value(&report).expect("serializable"), text })
}

fn cmd_fuzz(config: FuzzConfig) -> Result<Output, Error> {
    let start = Instant::now();
    let report = fuzz::run(config)?;
    eprintln!("runtime: {:.2?}", start.elapsed());
    let text = report.render().trim_end().to_string();
    Ok(Output { ok: report.pass, json: serde_json::to_value(&report).expect("serializable"), text })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Eval { file, measure, set } => {
            let inst = load(file)?;
            let value = inst.measure(measure)?.eval(&inst.parse_set(set)?)?;
            Ok(Output::value(value.to_string()))
        }
        Command::Op { op, file, first, second, set } => {
            cmd_op(&load(file)?, *op, first, second.as_deref(), set.as_deref())
        }
        Command::Integrate { file, function, measure } => cmd_integrate(&load(file)?, function, measure),
        Command::Represent { mode, file, name, other } => cmd_represent(&load(file)?, *mode, name, other.as_deref()),
        Command::Laws { file, suite, .. } => cmd_laws(file.as_ref(), suite),
        Command::Fuzz { seed, cases, dim, atoms } => {
            cmd_fuzz(FuzzConfig { seed: *seed, cases: *cases, max_dim: *dim, max_atoms: *atoms })
        }
        Command::Counterexamples => {
            let report = counterexample_report();
            let text = report.render().trim_end().to_string();
            Ok(Output { ok: report.pass(), json: serde_json::to_value(&report).expect("serializable"), text })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON value"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
