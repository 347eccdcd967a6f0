//! `clipcone` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use clipcone::chamber::{dirichlet_domain, reduce, root_reflections, translate_disjointness, word_closure};
use clipcone::clipping::{check_pairwise, validate_clipped};
use clipcone::descent::{descend, descend_walls, wall_entries, DescentOptions};
use clipcone::instance::{Instance, SCHEMA};
use clipcone::sample::DEFAULT_SEED;
use clipcone::scalar::{parse_rational, Rational};
use clipcone::{corpus, Error};

#[derive(Parser)]
#[command(name = "clipcone", version, about = "Exact computations with well-clipped cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    /// Overrides the group closure cap (and bounds reduction steps).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Include wall-clock timing; makes reports non-reproducible.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ambient structure, roots, integrality and pairwise angles.
    Validate { instance: PathBuf },
    /// Finite-group descent of the clipped cone.
    Descend { instance: PathBuf },
    /// Reflect a point of the plus cone into the chamber.
    Reduce {
        instance: PathBuf,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Truncated Dirichlet domain for reflections and group generators.
    Domain {
        instance: PathBuf,
        /// Base point, comma-separated; defaults to the witness.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, default_value_t = 2)]
        word_length: usize,
    },
    /// Pairwise angle classes of the roots.
    Angles { instance: PathBuf },
    /// Group sums of the instance walls.
    Walls { instance: PathBuf },
    /// Quick checks over the bundled instances.
    Selftest,
}

enum Failure {
    Input(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidCone(_) | Error::DimensionMismatch { .. } | Error::NotSymmetric | Error::DegenerateForm => {
                Failure::Input(e.to_string())
            }
            other => Failure::Domain(other),
        }
    }
}

fn error_kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn parse_point(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',').map(|t| parse_rational(t.trim()).map_err(|e| Failure::Input(format!("point: {e}")))).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

struct Loaded {
    inst: Instance,
    digest: String,
}

fn load(path: &PathBuf, common: &Common) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Input("instance is not UTF-8".into()))?;
    let mut inst = Instance::parse(&text)?;
    if let Some(cap) = common.cap {
        inst = inst.with_generators(inst.generators.clone(), cap)?;
    }
    Ok(Loaded { inst, digest: hex::encode(Sha256::digest(&bytes)) })
}

/// Payload plus verdict.
type Outcome = (Value, bool);

fn cmd_validate(inst: &Instance) -> Outcome {
    let v = validate_clipped(&inst.cone, inst.canon.clone());
    let roots: Vec<Value> = inst.cone.roots.iter().map(|r| r.to_json()).collect();
    let ok = v.ok();
    (json!({"roots": roots, "validation": v}), ok)
}

fn cmd_descend(inst: &Instance, common: &Common) -> Result<Outcome, Failure> {
    if inst.generators.is_empty() {
        return Err(Failure::Input("descend needs a group block".into()));
    }
    let r = descend(&inst.cone, &inst.action, &DescentOptions { samples: common.samples, seed: common.seed })?;
    Ok((r.to_json(), r.ok()))
}

fn cmd_reduce(inst: &Instance, point: &str, common: &Common) -> Result<Outcome, Failure> {
    let x = parse_point(point)?;
    let t = reduce(&x, &inst.cone, common.cap.unwrap_or(10_000))?;
    let ok = t.certified;
    Ok((serde_json::to_value(&t).expect("serializable"), ok))
}

fn cmd_domain(inst: &Instance, base: Option<&str>, word_length: usize, common: &Common) -> Result<Outcome, Failure> {
    let a = match base {
        Some(b) => parse_point(b)?,
        None => inst.cone.witness.clone(),
    };
    let mut gens = root_reflections(&inst.cone);
    gens.extend(inst.generators.iter().cloned());
    let elements = word_closure(inst.rank(), &gens, word_length);
    let roots: Vec<Vec<Rational>> = inst.cone.roots.iter().map(|r| r.e.clone()).collect();
    let d = dirichlet_domain(&a, &elements, &inst.cone.ambient, &roots)?;
    let disj = translate_disjointness(&d, &elements, &inst.cone.ambient, common.samples, common.seed)?;
    let ok = disj.max_count <= 1;
    Ok((json!({"word_length": word_length, "domain": d.to_json(), "disjointness": disj}), ok))
}

fn cmd_angles(inst: &Instance) -> Outcome {
    let p = check_pairwise(&inst.cone.roots, inst.cone.lattice());
    let ok = p.ok();
    (json!({"roots": inst.cone.roots.iter().map(|r| r.to_json()).collect::<Vec<_>>(), "pairwise": p}), ok)
}

fn cmd_walls(inst: &Instance) -> Result<Outcome, Failure> {
    let lat = inst.cone.lattice();
    let entries = wall_entries(&inst.walls, &inst.action, lat)?;
    let kept = descend_walls(&inst.walls, &inst.action, lat)?;
    Ok((json!({"group_order": inst.action.order(), "entries": entries, "descended": kept.iter().map(|w| strs(w)).collect::<Vec<_>>()}), true))
}

fn cmd_selftest(common: &Common) -> Result<Outcome, Failure> {
    let mut checks = Vec::new();
    for inst in corpus::all() {
        let expect = !corpus::INVALID.contains(&inst.name.as_str());
        let ok = validate_clipped(&inst.cone, inst.canon.clone()).ok();
        checks.push(json!({"name": format!("validate {}", inst.name), "passed": ok == expect}));
        if expect && !inst.generators.is_empty() {
            let r = descend(&inst.cone, &inst.action, &DescentOptions { samples: common.samples.min(200), seed: common.seed })?;
            checks.push(json!({"name": format!("descend {}", inst.name), "passed": r.ok()}));
        }
    }
    let ok = checks.iter().all(|c| c["passed"] == json!(true));
    Ok((json!({"checks": checks}), ok))
}

fn emit(report: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("serializable");
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli, common: Common) -> Result<bool, Failure> {
    let start = Instant::now();
    let (command, loaded) = match &cli.command {
        Command::Validate { instance } => ("validate", Some(load(instance, &common)?)),
        Command::Descend { instance } => ("descend", Some(load(instance, &common)?)),
        Command::Reduce { instance, .. } => ("reduce", Some(load(instance, &common)?)),
        Command::Domain { instance, .. } => ("domain", Some(load(instance, &common)?)),
        Command::Angles { instance } => ("angles", Some(load(instance, &common)?)),
        Command::Walls { instance } => ("walls", Some(load(instance, &common)?)),
        Command::Selftest => ("selftest", None),
    };
    let result = match (&cli.command, &loaded) {
        (Command::Validate { .. }, Some(l)) => Ok(cmd_validate(&l.inst)),
        (Command::Descend { .. }, Some(l)) => cmd_descend(&l.inst, &common),
        (Command::Reduce { point, .. }, Some(l)) => cmd_reduce(&l.inst, point, &common),
        (Command::Domain { base, word_length, .. }, Some(l)) => cmd_domain(&l.inst, base.as_deref(), *word_length, &common),
        (Command::Angles { .. }, Some(l)) => Ok(cmd_angles(&l.inst)),
        (Command::Walls { .. }, Some(l)) => cmd_walls(&l.inst),
        (Command::Selftest, _) => cmd_selftest(&common),
        _ => unreachable!("instance commands load an instance"),
    };
    let (payload, ok) = match result {
        Ok(x) => x,
        Err(Failure::Domain(e)) => (json!({"error": {"kind": error_kind(&e), "message": e.to_string()}}), false),
        Err(f) => return Err(f),
    };
    let mut report = json!({
        "schema": SCHEMA,
        "tool": "clipcone",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": common.seed,
        "samples": common.samples,
        "ok": ok,
        "payload": payload,
    });
    if let Some(l) = &loaded {
        report["instance"] = json!({"name": l.inst.name, "digest": format!("sha256:{}", l.digest)});
    }
    if common.timing {
        report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(&report, common.out.as_ref())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common.clone();
    if let Some(n) = std::env::var("CLIPCONE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli, common) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("clipcone: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("clipcone: {e}");
            ExitCode::from(1)
        }
    }
}
