//! Command-line front end. `run` takes the argument list and two writers so
//! the whole thing can be driven from tests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::calculus::{check_proof, cut_formulas, restricted_cuts, CheckConfig, Proof};
use crate::engine::{BranchTrace, Budget, Search, SearchOutcome};
use crate::semantics::{countermodel_from_trace, eval_formula, truthset_external, verify_countermodel, Model};
use crate::syntax::{parse_formula, parse_sequent, Body, Formula, Sequent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mtl2", version, about = "Proof search and model checking for two-dimensional metric temporal logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a proof or a countermodel.
    Prove(ProveArgs),
    /// Check a proof document.
    Check(CheckArgs),
    /// Evaluate a sequent in a model file.
    Eval(EvalArgs),
    /// Build a model from an exported branch trace.
    Countermodel(CountermodelArgs),
    /// Print a sequent in canonical form.
    Fmt(FmtArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    /// Sequent text, or `@path` to read it from a file.
    pub sequent: String,
    #[arg(long, default_value_t = Budget::default().max_nodes)]
    pub budget_nodes: usize,
    #[arg(long, default_value_t = Budget::default().omega_width)]
    pub omega_width: usize,
    #[arg(long, default_value_t = CheckConfig::default().omega_k)]
    pub omega_k: u32,
    /// Where to write the proof (JSON) or the countermodel (TOML).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Proof document (JSON).
    pub proof: PathBuf,
    #[arg(long, default_value_t = CheckConfig::default().omega_k)]
    pub omega_k: u32,
    #[arg(long)]
    pub require_restricted_cuts: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Sequent text, or `@path`.
    pub sequent: String,
    /// Model file (TOML).
    #[arg(long)]
    pub model: PathBuf,
    /// Print the truth set of every formula.
    #[arg(long)]
    pub explain: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CountermodelArgs {
    /// Branch trace (JSON) as exported by `prove`.
    pub trace: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FmtArgs {
    /// Sequent text, or `@path`.
    pub sequent: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

struct Failure(String);

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Prove(a) => cmd_prove(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Countermodel(a) => cmd_countermodel(a, out),
        Command::Fmt(a) => cmd_fmt(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn sequent_arg(text: &str) -> Result<Sequent, Failure> {
    let src = match text.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => text.to_string(),
    };
    parse_sequent(src.trim()).map_err(|e| Failure(e.to_string()))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure(e.to_string()))
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) -> Result<(), Failure> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| Failure(e.to_string()))
}

fn cmd_prove(a: &ProveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sequent = sequent_arg(&a.sequent)?;
    let budget = Budget { max_nodes: a.budget_nodes, omega_width: a.omega_width };
    let mut search = Search::new(&sequent, &budget, a.omega_k);
    let outcome = search.run();
    let nodes = search.node_count();
    let cfg = CheckConfig { omega_k: a.omega_k };
    match outcome {
        SearchOutcome::Proved(proof) => {
            let cuts: Vec<String> = dedup(cut_formulas(&proof, &cfg));
            if let Some(path) = &a.out {
                write_file(path, &proof.to_json())?;
            }
            match a.format {
                Format::Text => {
                    say(out, format!("proved: {sequent}"))?;
                    say(out, format!("nodes: {nodes}"))?;
                    say(out, format!("proof size: {}", proof.size()))?;
                    say(out, format!("cut formulas: {}", cuts.len()))?;
                    for c in &cuts {
                        say(out, format!("  {c}"))?;
                    }
                }
                Format::Structured => emit(
                    out,
                    &json!({
                        "status": "proved",
                        "sequent": sequent.to_string(),
                        "nodes": nodes,
                        "cuts": cuts,
                        "proof": serde_json::to_value(&proof).map_err(|e| Failure(e.to_string()))?,
                    }),
                )?,
            }
            Ok(EXIT_OK)
        }
        SearchOutcome::Refuted { model, branch } => {
            let toml = model.to_toml();
            if let Some(path) = &a.out {
                write_file(path, &toml)?;
            }
            match a.format {
                Format::Text => {
                    say(out, format!("refuted: {sequent}"))?;
                    say(out, format!("nodes: {nodes}"))?;
                    say(out, "countermodel:")?;
                    for line in toml.lines() {
                        say(out, format!("  {line}"))?;
                    }
                }
                Format::Structured => emit(
                    out,
                    &json!({
                        "status": "refuted",
                        "sequent": sequent.to_string(),
                        "nodes": nodes,
                        "model": toml,
                        "branch": serde_json::to_value(&branch).map_err(|e| Failure(e.to_string()))?,
                    }),
                )?,
            }
            Ok(EXIT_NO)
        }
        SearchOutcome::Unknown { reason, open } => {
            let reason_text = serde_json::to_value(reason).map_err(|e| Failure(e.to_string()))?;
            if let (Some(path), Some(first)) = (&a.out, open.first()) {
                let trace = serde_json::to_string_pretty(first).map_err(|e| Failure(e.to_string()))?;
                write_file(path, &format!("{trace}\n"))?;
            }
            match a.format {
                Format::Text => {
                    say(out, format!("unknown: {sequent}"))?;
                    say(out, format!("reason: {}", reason_text.as_str().unwrap_or("")))?;
                    say(out, format!("nodes: {nodes}"))?;
                    say(out, format!("open branches reported: {}", open.len()))?;
                }
                Format::Structured => emit(
                    out,
                    &json!({
                        "status": "unknown",
                        "sequent": sequent.to_string(),
                        "reason": reason_text,
                        "nodes": nodes,
                        "open": serde_json::to_value(&open).map_err(|e| Failure(e.to_string()))?,
                    }),
                )?,
            }
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn dedup(fs: Vec<Formula>) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    fs.into_iter().map(|f| f.to_string()).filter(|s| seen.insert(s.clone())).collect()
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let src = read(&a.proof)?;
    let proof = Proof::from_json(&src).map_err(|e| Failure(format!("{}: {e}", a.proof.display())))?;
    let cfg = CheckConfig { omega_k: a.omega_k };
    let checked = check_proof(&proof, &cfg);
    let unrestricted: Vec<String> = if a.require_restricted_cuts && !restricted_cuts(&proof, &cfg) {
        dedup(cut_formulas(&proof, &cfg).into_iter().filter(|f| !crate::calculus::is_axiom_succedent(f)).collect())
    } else {
        Vec::new()
    };
    let ok = checked.is_ok() && unrestricted.is_empty();
    match a.format {
        Format::Text => {
            match &checked {
                Ok(()) => say(out, "proof ok")?,
                Err(v) => say(out, format!("invalid: {v}"))?,
            }
            for c in &unrestricted {
                say(out, format!("unrestricted cut: {c}"))?;
            }
        }
        Format::Structured => emit(
            out,
            &json!({
                "status": if ok { "ok" } else { "invalid" },
                "violation": checked.as_ref().err().map(|v| json!({"path": v.path, "message": v.violation.to_string()})),
                "unrestricted_cuts": unrestricted,
            }),
        )?,
    }
    Ok(if ok { EXIT_OK } else { EXIT_NO })
}

fn explain(f: &Formula, m: &Model) -> String {
    match f {
        Formula::Lab(_, Body::Temporal(b)) => truthset_external(b, m).to_string(),
        _ => eval_formula(f, m).to_string(),
    }
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sequent = sequent_arg(&a.sequent)?;
    let model = Model::from_toml(&read(&a.model)?).map_err(|e| Failure(format!("{}: {e}", a.model.display())))?;
    let truth = !verify_countermodel(&model, &sequent);
    let rows: Vec<(&str, String, bool, String)> = sequent
        .ante
        .iter()
        .map(|f| ("antecedent", f))
        .chain(sequent.succ.iter().map(|f| ("succedent", f)))
        .map(|(side, f)| (side, f.to_string(), eval_formula(f, &model), explain(f, &model)))
        .collect();
    match a.format {
        Format::Text => {
            say(out, if truth { "true" } else { "false" })?;
            if a.explain {
                for (side, f, v, set) in &rows {
                    let mark = if side.starts_with('a') { "L" } else { "R" };
                    if set == &v.to_string() {
                        say(out, format!("{mark} {f}: {v}"))?;
                    } else {
                        say(out, format!("{mark} {f}: {v} on {set}"))?;
                    }
                }
            }
        }
        Format::Structured => {
            let mut doc = json!({"status": if truth { "true" } else { "false" }, "sequent": sequent.to_string()});
            if a.explain {
                doc["formulas"] = rows
                    .iter()
                    .map(|(side, f, v, set)| json!({"side": side, "formula": f, "value": v, "truth_set": set}))
                    .collect();
            }
            emit(out, &doc)?;
        }
    }
    Ok(if truth { EXIT_OK } else { EXIT_NO })
}

fn cmd_countermodel(a: &CountermodelArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let src = read(&a.trace)?;
    let trace: BranchTrace = serde_json::from_str(&src).map_err(|e| Failure(format!("{}: {e}", a.trace.display())))?;
    let parse_all = |xs: &[String]| -> Result<Vec<Formula>, Failure> {
        xs.iter().map(|s| parse_formula(s).map_err(|e| Failure(format!("{s}: {e}")))).collect()
    };
    let gamma = parse_all(&trace.antecedent)?;
    let delta = parse_all(&trace.succedent)?;
    let sequent = Sequent { ante: gamma.clone(), succ: delta.clone() };
    match countermodel_from_trace(&gamma, &delta) {
        Ok(model) => {
            let toml = model.to_toml();
            let falsifies = verify_countermodel(&model, &sequent);
            if let Some(path) = &a.out {
                write_file(path, &toml)?;
            }
            match a.format {
                Format::Text => {
                    if a.out.is_none() {
                        out.write_all(toml.as_bytes()).map_err(|e| Failure(e.to_string()))?;
                    }
                    say(out, format!("falsifies branch sequent: {falsifies}"))?;
                }
                Format::Structured => {
                    emit(out, &json!({"status": "model", "model": toml, "falsifies": falsifies}))?
                }
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            match a.format {
                Format::Text => say(out, format!("no model: {e}"))?,
                Format::Structured => emit(out, &json!({"status": "failed", "diagnostic": e.to_string()}))?,
            }
            Ok(EXIT_NO)
        }
    }
}

fn cmd_fmt(a: &FmtArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sequent = sequent_arg(&a.sequent)?;
    match a.format {
        Format::Text => say(out, sequent.to_string())?,
        Format::Structured => emit(
            out,
            &json!({
                "sequent": sequent.to_string(),
                "antecedent": sequent.ante.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "succedent": sequent.succ.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            }),
        )?,
    }
    Ok(EXIT_OK)
}
