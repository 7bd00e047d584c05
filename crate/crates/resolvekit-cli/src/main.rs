use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use resolvekit::construct::{bipermutation_construct, dual_block_endo, Bipermutation, BipermutationJson};
use resolvekit::degree::degrees;
use resolvekit::graph::{Graph, GraphJson};
use resolvekit::limits::{limit_estimates, DEFAULT_MAX_POWER};
use resolvekit::rule::{Endomorphism, LocalRule, RuleJson};
use resolvekit::textile::{
    build_lr_textile, build_qbiresolving_textile, build_rl_textile, expansiveness_situation, TextileJson,
};
use resolvekit::Error;

#[derive(Parser)]
#[command(name = "resolvekit", version, about = "Degrees, closingness and textile constructions for endomorphisms of Markov shifts")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Lr,
    Rl,
    Qbi,
}

#[derive(Subcommand)]
enum Command {
    /// Degree quadruple with strictness witnesses.
    Degrees { rule: PathBuf },
    /// Lower bounds and certificates for the four limits along powers.
    Limits {
        rule: PathBuf,
        #[arg(long, env = "RESOLVEKIT_MAX_POWER", default_value_t = DEFAULT_MAX_POWER)]
        max_power: usize,
    },
    /// Expansiveness situation of φσ^s.
    Expansiveness {
        rule: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        shift: i64,
    },
    /// Build a textile system carrying φσ^s.
    Construct {
        rule: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        shift: i64,
    },
    /// Splice a right-closing rule f and a left-closing rule f' through a bipermutation.
    Bipermute {
        f: PathBuf,
        fprime: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        t: i64,
        #[arg(long)]
        pi: PathBuf,
    },
    /// Dual higher-block endomorphism of the given order.
    Dualblock {
        rule: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Graphviz text for a graph, rule or textile file.
    ExportDot { artifact: PathBuf },
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_rule(path: &Path) -> Result<LocalRule, Error> {
    let j: RuleJson = parse(path, read_json(path)?)?;
    LocalRule::from_json(&j)
}

fn load_endo(path: &Path) -> Result<Endomorphism, Error> {
    Endomorphism::new(load_rule(path)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

/// Merges `extra` into the object `base`.
fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn run(cmd: &Command) -> Result<Value, Error> {
    Ok(match cmd {
        Command::Degrees { rule } => to_value(&degrees(&load_endo(rule)?)?),
        Command::Limits { rule, max_power } => {
            if *max_power == 0 {
                return Err(Error::Input("--max-power must be positive".into()));
            }
            to_value(&limit_estimates(&load_endo(rule)?, *max_power)?)
        }
        Command::Expansiveness { rule, shift } => to_value(&expansiveness_situation(&load_endo(rule)?, *shift)?),
        Command::Construct { rule, kind, shift } => {
            let e = load_endo(rule)?;
            let built = match kind {
                KindArg::Lr => build_lr_textile(&e.shift_compose(*shift))?,
                KindArg::Rl => build_rl_textile(&e.shift_compose(*shift))?,
                KindArg::Qbi => build_qbiresolving_textile(&e, *shift)?,
            };
            json!({
                "kind": built.kind,
                "order": built.order,
                "shift": built.shift,
                "textile": built.textile.to_json(),
                "transported": built.transported.to_json(),
                "degrees": built.degrees,
            })
        }
        Command::Bipermute { f, fprime, t, pi } => {
            let pj: BipermutationJson = parse(pi, read_json(pi)?)?;
            let pi = Bipermutation::from_json(&pj)?;
            let s = bipermutation_construct(&load_rule(fprime)?, &load_rule(f)?, *t, &pi)?;
            with(to_value(&s.endomorphism.rule().to_json()), json!({ "certificate": s.certificate }))
        }
        Command::Dualblock { rule, order } => {
            let d = dual_block_endo(&load_endo(rule)?, *order)?;
            with(to_value(&d.endomorphism.rule().to_json()), json!({ "order": d.order, "block": d.block }))
        }
        Command::ExportDot { .. } => unreachable!("handled as text"),
    })
}

fn export_dot(path: &Path) -> Result<String, Error> {
    let v = read_json(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("G").replace(|c: char| !c.is_alphanumeric(), "_");
    if v.get("gamma").is_some() {
        let t: TextileJson = parse(path, v)?;
        let gamma = Graph::from_json(&t.gamma)?;
        return Ok(gamma.to_dot_labeled(&name, |a| {
            let id = gamma.arc_id(a);
            Some(format!("{}/{}", t.p.arcs[id], t.q.arcs[id]))
        }));
    }
    if v.get("source_graph").is_some() {
        let r = load_rule(path)?;
        return Ok(r.source().to_dot(&name));
    }
    let g: GraphJson = parse(path, v)?;
    Ok(Graph::from_json(&g)?.to_dot(&name))
}

fn meta(cmd: &Command) -> Value {
    let name = match cmd {
        Command::Degrees { .. } => "degrees",
        Command::Limits { .. } => "limits",
        Command::Expansiveness { .. } => "expansiveness",
        Command::Construct { .. } => "construct",
        Command::Bipermute { .. } => "bipermute",
        Command::Dualblock { .. } => "dualblock",
        Command::ExportDot { .. } => "export-dot",
    };
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut m = Map::new();
    m.insert("command".into(), name.into());
    m.insert("generated_at".into(), secs.into());
    m.insert("tool".into(), "resolvekit".into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    Value::Object(m)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match &cli.command {
        Command::ExportDot { artifact } => export_dot(artifact),
        cmd => run(cmd).map(|v| {
            // serde_json maps are sorted, so the payload is byte-stable
            let v = with(v, json!({ "meta": meta(cmd) }));
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
