//! The `pomset` command line.
//!
//! Exit codes: 0 when a query is answered true (or a command succeeds), 1
//! when it is answered false, 2 on usage, parse or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::cases::{run_case_study, Voting, CASE_STUDIES};
use crate::logic::{parse_formula, Fault, ModelChecker, OracleCaps, Quantifier, Relation};
use crate::poset::{factorize_subsumption, to_dot, Poset, PosetJson, PosetSet};
use crate::term::{
    decide_with_witness, interp, interp_sp, parse_sp_term, parse_term, sp_check, synthesize_term,
    AxiomSystem, Query,
};
use crate::testkit::{differential_relation, DifferentialOptions, GenConfig};

#[derive(Debug, Parser)]
#[command(
    name = "pomset",
    version,
    about = "Pomsets with boxes: algebra, decision procedures and model checking"
)]
pub struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an equation between two terms.
    Eq(DecideArgs),
    /// Decide an inequation `lhs <= rhs` between two terms.
    Leq(DecideArgs),
    /// Model check a formula against the runs of a term or a JSON poset.
    Mc(McArgs),
    /// Recover a series-parallel term from a poset.
    Synth(PosetArgs),
    /// Report a forbidden pattern, if any.
    Patterns(PosetArgs),
    /// Factor a subsumption `P <= Q` through an order step and a box step.
    Factorize(FactorizeArgs),
    /// Render a poset as Graphviz DOT.
    ExportDot(DotArgs),
    /// Run a built-in case study and print its checks.
    Examples(ExamplesArgs),
    /// Cross-check the model checker against the brute-force oracle.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[arg(long, default_value = "bsp")]
    pub system: AxiomSystem,
    /// Left term, or `@file`.
    pub lhs: String,
    /// Right term, or `@file`.
    pub rhs: String,
}

/// A single poset: a series-parallel term, `@file` holding a term or JSON,
/// or `--poset-json <file>`.
#[derive(Debug, Args)]
pub struct PosetArgs {
    pub input: Option<String>,
    #[arg(long, value_name = "FILE", conflicts_with = "input")]
    pub poset_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value = "iso")]
    pub relation: Relation,
    #[arg(long, default_value = "all")]
    pub quantifier: Quantifier,
    /// Formula text, or `@file`.
    #[arg(long)]
    pub formula: String,
    #[command(flatten)]
    pub target: PosetArgs,
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    /// The smaller poset `P`.
    pub lower: String,
    /// The larger poset `Q`.
    pub upper: String,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    #[command(flatten)]
    pub poset: PosetArgs,
    /// Graph name.
    #[arg(long, default_value = "P")]
    pub name: String,
    #[arg(short = 'o', long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(CASE_STUDIES))]
    pub name: String,
    #[arg(long, default_value_t = 2)]
    pub voters: usize,
    #[arg(long, default_value_t = 2)]
    pub counters: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    DropParNesting,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Fault {
        match f {
            FaultArg::DropParNesting => Fault::DropParNesting,
        }
    }
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    /// Decided cases per relation.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_events: usize,
    #[arg(long, default_value_t = 2)]
    pub max_box_attempts: usize,
    #[arg(long, default_value_t = 3)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 3)]
    pub term_depth: usize,
    #[arg(long, default_value_t = 3)]
    pub formula_depth: usize,
    /// Only this relation; all three by default.
    #[arg(long)]
    pub relation: Option<Relation>,
    /// Run against a deliberately broken checker.
    #[arg(long, value_enum)]
    pub fault: Option<FaultArg>,
    /// Extra boxes the oracle may add when strengthening.
    #[arg(long, default_value_t = 2)]
    pub extra_boxes: usize,
    /// Write discrepancies as JSON lines to this file.
    #[arg(short = 'o', long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    fn usage(e: impl ToString) -> CliError {
        CliError::Usage(e.to_string())
    }
}

/// Outcome of a command that answered a question or did its job.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
}

impl Outcome {
    fn from_bool(b: bool) -> Outcome {
        if b {
            Outcome::True
        } else {
            Outcome::False
        }
    }

    pub fn code(self) -> i32 {
        match self {
            Outcome::True => 0,
            Outcome::False => 1,
        }
    }
}

/// Parses `argv` (program name first) and runs the command against the
/// process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Eq(args) => decide_cmd(args, Query::Eq, json, out),
        Command::Leq(args) => decide_cmd(args, Query::Leq, json, out),
        Command::Mc(args) => mc_cmd(args, json, out),
        Command::Synth(args) => synth_cmd(args, json, out),
        Command::Patterns(args) => patterns_cmd(args, json, out),
        Command::Factorize(args) => factorize_cmd(args, json, out),
        Command::ExportDot(args) => dot_cmd(args, out),
        Command::Examples(args) => examples_cmd(args, json, out),
        Command::Fuzz(args) => fuzz_cmd(args, json, out),
    }
}

/// Resolves `@file` indirection.
fn text_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn poset_from_text(text: &str) -> Result<Poset, CliError> {
    if looks_like_json(text) {
        Poset::from_json(text).map_err(CliError::usage)
    } else {
        let s = parse_sp_term(text.trim()).map_err(CliError::usage)?;
        Ok(interp_sp(&s))
    }
}

fn single_poset(args: &PosetArgs) -> Result<Poset, CliError> {
    match (&args.input, &args.poset_json) {
        (_, Some(path)) => Poset::from_json(&read_file(path)?).map_err(CliError::usage),
        (Some(input), None) => poset_from_text(&text_arg(input)?),
        (None, None) => Err(CliError::Usage("expected a term, @file or --poset-json".into())),
    }
}

/// Every run denoted by the input; a term may use `0` and `+` here.
fn poset_set(args: &PosetArgs) -> Result<PosetSet, CliError> {
    if let Some(input) = &args.input {
        let text = text_arg(input)?;
        if !looks_like_json(&text) {
            return Ok(interp(&parse_term(text.trim()).map_err(CliError::usage)?));
        }
    }
    let mut set = PosetSet::new();
    set.insert(single_poset(args)?);
    Ok(set)
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn decide_cmd(args: &DecideArgs, query: Query, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let lhs = parse_term(text_arg(&args.lhs)?.trim()).map_err(CliError::usage)?;
    let rhs = parse_term(text_arg(&args.rhs)?.trim()).map_err(CliError::usage)?;
    let decision = decide_with_witness(args.system, &lhs, &rhs, query).map_err(CliError::usage)?;
    if json {
        emit_json(out, &decision)?;
    } else {
        writeln!(out, "{}", decision.result)?;
    }
    Ok(Outcome::from_bool(decision.result))
}

fn mc_cmd(args: &McArgs, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let phi = parse_formula(text_arg(&args.formula)?.trim()).map_err(CliError::usage)?;
    let set = poset_set(&args.target)?;
    let mut mc = ModelChecker::new();
    // the member that decides the answer: a satisfying one for `some`, a
    // failing one for `all`
    let mut decisive = None;
    for (i, p) in set.iter().enumerate() {
        let res = mc.check(p, &phi, args.relation).map_err(CliError::usage)?;
        let wanted = args.quantifier == Quantifier::Some;
        if res.holds == wanted {
            decisive = Some((i, p, res));
            break;
        }
    }
    let holds = match args.quantifier {
        Quantifier::Some => decisive.is_some(),
        Quantifier::All => decisive.is_none(),
    };
    if json {
        let witness = decisive.map(|(i, p, res)| {
            json!({
                "member": i,
                "poset": PosetJson::from_poset(p),
                "trace": res.witness,
            })
        });
        emit_json(out, &json!({ "holds": holds, "witness": witness }))?;
    } else {
        writeln!(out, "{holds}")?;
        if let Some((i, p, _)) = decisive {
            let role = if holds { "satisfying" } else { "failing" };
            writeln!(out, "{role} run #{i}: {}", p.to_json())?;
        }
    }
    Ok(Outcome::from_bool(holds))
}

fn synth_cmd(args: &PosetArgs, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = single_poset(args)?;
    let term = synthesize_term(&p);
    if json {
        emit_json(
            out,
            &json!({
                "term": term.as_ref().map(ToString::to_string),
                "witness": if term.is_none() { sp_check(&p) } else { None },
            }),
        )?;
    } else {
        match &term {
            Some(t) => writeln!(out, "{t}")?,
            None => writeln!(out, "not series-parallel")?,
        }
    }
    Ok(Outcome::from_bool(term.is_some()))
}

fn patterns_cmd(args: &PosetArgs, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = single_poset(args)?;
    let witness = sp_check(&p);
    if json {
        emit_json(
            out,
            &json!({ "series_parallel": witness.is_none(), "witness": witness }),
        )?;
    } else {
        match &witness {
            None => writeln!(out, "series-parallel")?,
            Some(w) => writeln!(out, "{w}")?,
        }
    }
    Ok(Outcome::from_bool(witness.is_none()))
}

fn factorize_cmd(args: &FactorizeArgs, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = poset_from_text(&text_arg(&args.lower)?)?;
    let q = poset_from_text(&text_arg(&args.upper)?)?;
    let parts = factorize_subsumption(&p, &q);
    if json {
        let parts = parts.as_ref().map(|(r1, r2)| {
            json!({
                "with_upper_order": PosetJson::from_poset(r1),
                "with_lower_order": PosetJson::from_poset(r2),
            })
        });
        emit_json(out, &json!({ "result": parts.is_some(), "factors": parts }))?;
    } else {
        match &parts {
            Some((r1, r2)) => {
                writeln!(out, "with_upper_order: {}", r1.to_json())?;
                writeln!(out, "with_lower_order: {}", r2.to_json())?;
            }
            None => writeln!(out, "not subsumed")?,
        }
    }
    Ok(Outcome::from_bool(parts.is_some()))
}

fn dot_cmd(args: &DotArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let p = single_poset(&args.poset)?;
    let dot = to_dot(&p, &args.name);
    match &args.output {
        Some(path) => fs::write(path, dot)?,
        None => out.write_all(dot.as_bytes())?,
    }
    Ok(Outcome::True)
}

fn examples_cmd(args: &ExamplesArgs, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let voting = Voting::new(args.voters, args.counters)
        .ok_or_else(|| CliError::Usage("--voters and --counters must be at least 1".into()))?;
    let checks = run_case_study(&args.name, voting)
        .ok_or_else(|| CliError::Usage(format!("unknown case study {:?}", args.name)))?
        .map_err(CliError::usage)?;
    if json {
        emit_json(out, &checks)?;
    } else {
        for check in &checks {
            writeln!(out, "{check}")?;
        }
    }
    Ok(Outcome::from_bool(checks.iter().all(|c| c.passed())))
}

fn fuzz_cmd(args: &FuzzArgs, json: bool, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let cfg = GenConfig {
        max_events: args.max_events,
        max_box_attempts: args.max_box_attempts,
        alphabet_size: args.alphabet,
        term_depth: args.term_depth,
        formula_depth: args.formula_depth,
        seed: args.seed,
    };
    let opts = DifferentialOptions {
        caps: OracleCaps {
            extra_boxes: args.extra_boxes,
            ..OracleCaps::default()
        },
        fault: args.fault.map(Fault::from),
        shrink: true,
    };
    let relations = match args.relation {
        Some(r) => vec![r],
        None => Relation::ALL.to_vec(),
    };
    let mut lines = Vec::new();
    for rel in relations {
        let summary = differential_relation(&cfg, rel, args.cases, opts);
        if !json {
            writeln!(
                out,
                "{rel}: {} decided, {} unknown, {} discrepancies",
                summary.decided,
                summary.unknown,
                summary.discrepancies.len()
            )?;
        }
        lines.extend(summary.discrepancies.iter().map(|d| d.to_json_line()));
    }
    match &args.output {
        Some(path) => fs::write(path, lines.iter().map(|l| format!("{l}\n")).collect::<String>())?,
        None if json => {
            for line in &lines {
                writeln!(out, "{line}")?;
            }
        }
        None => {}
    }
    Ok(Outcome::from_bool(lines.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("pomset").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["eq", "--system", "bsp", "1;a", "a"]).0, 0);
        assert_eq!(run_capture(&["leq", "--system", "cmb", "a;b", "[a;b]"]).0, 1);
        assert_eq!(run_capture(&["eq", "--system", "bsp", "a+b", "a"]).0, 2);
        assert_eq!(run_capture(&["eq", "a;;b", "a"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn json_output_parses() {
        let (code, out, _) = run_capture(&["--json", "leq", "--system", "cmb", "[a;b]", "a;b"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"], true);
        assert!(v["witness"].is_array());
    }

    #[test]
    fn model_checking() {
        let formula = "<>((rx||ry)|>(wx||wy))";
        let naive = "print;(rx;ix;wx|ry;iy;wy);print";
        let args = [
            "--json",
            "mc",
            "--relation",
            "rev",
            "--quantifier",
            "some",
            "--formula",
            formula,
            naive,
        ];
        let (code, out, _) = run_capture(&args);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["holds"], true);
        assert_eq!(v["witness"]["trace"]["rule"], "context");
        assert_eq!(
            run_capture(&["mc", "--relation", "rev", "--formula", "~a", "a"]).0,
            2
        );
        assert_eq!(run_capture(&["mc", "--formula", "a", "0"]).0, 0);
        assert_eq!(
            run_capture(&["mc", "--quantifier", "some", "--formula", "a", "0"]).0,
            1
        );
    }

    #[test]
    fn poset_commands() {
        let n = r#"{"events":[{"id":0,"label":"a"},{"id":1,"label":"b"},{"id":2,"label":"c"},{"id":3,"label":"d"}],"order":[[0,2],[1,2],[1,3]],"boxes":[]}"#;
        let (code, out, _) = run_capture(&["--json", "patterns", n]);
        assert_eq!(code, 1);
        assert!(out.contains("\"series_parallel\":false"));
        assert_eq!(run_capture(&["synth", n]).0, 1);
        let (code, out, _) = run_capture(&["synth", "[a;b]|c"]);
        assert_eq!((code, out.trim()), (0, "c | [a;b]"));
        assert_eq!(run_capture(&["factorize", "[a;b]", "a|b"]).0, 0);
        assert_eq!(run_capture(&["factorize", "a;b", "b;a"]).0, 1);
        let (code, out, _) = run_capture(&["export-dot", "[a;b];c"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("digraph"));
        assert_eq!(run_capture(&["export-dot"]).0, 2);
    }
}
