//! Command-line front end over JSON model files.
//!
//! Exit codes: `0` when the checked property holds (or the evaluation is
//! true), `1` when it fails (or the evaluation is false), `2` for usage,
//! parse or validation errors. Reports go to stdout, diagnostics to
//! stderr; `--json` switches to machine-readable reports, and setting
//! `BK_COLOR=0` disables ANSI color in text reports.

use std::ffi::OsString;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coalgebra::{
    check_retraction, extract_belief_model, terminal_sequence, verify_closure, ClosureStatus,
    SideClosure, StrategyProfile, TerminalSequence, DEFAULT_CAP,
};
use crate::completeness::{
    is_assumption_complete, is_belief_complete, is_vwps, is_wps, WitnessReport,
};
use crate::composition::{
    characterize_belief_completeness, composition_lemma_check, Characterization,
};
use crate::error::{Error, Result};
use crate::fixpoint::{
    basic_lemma_verify, check_bk_assumptions, diagonal_certificate, generalized_assumptions_check,
    generalized_basic_lemma_verify, operator_fixpoint, q_predicate, PropOperator,
};
use crate::formula::{eval, parse_formula, sort_check};
use crate::model::{BeliefStructure, PredicateFamily};

#[derive(Parser)]
#[command(
    name = "bk",
    about = "Finite belief-structure workbench",
    disable_version_flag = true
)]
struct Cli {
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a modal formula at a state.
    Eval(EvalArgs),
    /// Run a completeness check for a relation against a named family.
    Complete(CompleteArgs),
    /// Check the believes-assumes assumptions and the fixpoint they force.
    Fixpoint(FixpointArgs),
    /// Check the generalized assumptions over a named belief cycle.
    Cycle(CycleArgs),
    /// Evaluate the composition lemma over a two-leg chain.
    Compose(ComposeArgs),
    /// Decide belief-completeness; construct the counterexample when it fails.
    Counterexample(CounterexampleArgs),
    /// Build a terminal sequence; optionally export an extracted model.
    Coalgebra(CoalgebraArgs),
    /// Produce the diagonal impossibility certificate.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Path to a JSON model document.
    #[arg(long)]
    model: PathBuf,
    /// Formula in the surface syntax, e.g. "[Ra][[Rb]] p".
    #[arg(long)]
    formula: String,
    /// State index on the formula's sort.
    #[arg(long)]
    state: usize,
    /// Sort hint, needed only when the formula has no atom or modality.
    #[arg(long)]
    sort: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum CompletenessKind {
    Assumption,
    Belief,
    Wps,
    Vwps,
}

impl CompletenessKind {
    fn name(self) -> &'static str {
        match self {
            CompletenessKind::Assumption => "assumption",
            CompletenessKind::Belief => "belief",
            CompletenessKind::Wps => "wps",
            CompletenessKind::Vwps => "vwps",
        }
    }
}

#[derive(Args)]
struct CompleteArgs {
    #[arg(long)]
    model: PathBuf,
    /// Relation name from the model.
    #[arg(long)]
    relation: String,
    /// Family name from the model.
    #[arg(long)]
    family: String,
    /// Which completeness notion to check.
    #[arg(long, value_enum)]
    kind: CompletenessKind,
}

#[derive(Args)]
struct FixpointArgs {
    #[arg(long)]
    model: PathBuf,
    /// First relation of the believes-assumes pair.
    #[arg(long)]
    ra: String,
    /// Second relation of the pair.
    #[arg(long)]
    rb: String,
    /// Candidate state on the base sort.
    #[arg(long)]
    state: usize,
    /// Truth-value operator: id, not, const-true or const-false.
    #[arg(long)]
    op: Option<String>,
    /// Named predicate for the basic equivalence check.
    #[arg(long)]
    pred: Option<String>,
}

#[derive(Args)]
struct CycleArgs {
    #[arg(long)]
    model: PathBuf,
    /// Cycle name from the model.
    #[arg(long)]
    cycle: String,
    /// Named predicate on the cycle's base sort.
    #[arg(long)]
    pred: String,
    /// Candidate state on the base sort.
    #[arg(long)]
    state: usize,
}

#[derive(Args)]
struct ComposeArgs {
    #[arg(long)]
    model: PathBuf,
    /// First leg of the chain.
    #[arg(long)]
    rab: String,
    /// Second leg of the chain.
    #[arg(long)]
    rbc: String,
    /// Family on the middle sort.
    #[arg(long)]
    family_b: String,
    /// Family on the final sort.
    #[arg(long)]
    family_c: String,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    model: PathBuf,
    /// Relation to test for belief-completeness.
    #[arg(long)]
    relation: String,
    /// Named predicate to test as a singleton family.
    #[arg(long)]
    pred: Option<String>,
    /// Named family to test.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct CoalgebraArgs {
    /// Strategy carrier size for the first agent.
    #[arg(long)]
    sa: usize,
    /// Strategy carrier size for the second agent.
    #[arg(long)]
    sb: usize,
    /// Powerset bound: subsets of size strictly below it are admitted.
    #[arg(long)]
    m: usize,
    /// Highest level to build.
    #[arg(long)]
    depth: usize,
    /// Cap on carrier elements per stage.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    action: Option<CoalgebraAction>,
}

#[derive(Subcommand)]
enum CoalgebraAction {
    /// Extract the model at a depth, verify it, and write it with a sidecar.
    Export {
        /// Extraction depth; the sequence needs stages through d + 1.
        #[arg(long)]
        d: usize,
        /// Output path for the model document.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    model: PathBuf,
    /// First relation of the believes-assumes pair.
    #[arg(long)]
    ra: String,
    /// Second relation of the pair.
    #[arg(long)]
    rb: String,
    /// Restrict the definable predicate class to a named family.
    #[arg(long)]
    family: Option<String>,
}

/// Parses and executes a command line, printing reports, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let json = cli.json;
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            if json {
                eprintln!("{}", json!({ "error": err.to_string() }));
            } else {
                eprintln!("bk: error: {err}");
            }
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args, cli.json),
        Command::Complete(args) => cmd_complete(args, cli.json),
        Command::Fixpoint(args) => cmd_fixpoint(args, cli.json),
        Command::Cycle(args) => cmd_cycle(args, cli.json),
        Command::Compose(args) => cmd_compose(args, cli.json),
        Command::Counterexample(args) => cmd_counterexample(args, cli.json),
        Command::Coalgebra(args) => cmd_coalgebra(args, cli.json),
        Command::Certify(args) => cmd_certify(args, cli.json),
    }
}

fn load_model(path: &Path) -> Result<BeliefStructure> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::ModelParse(format!("{} is not UTF-8", path.display())))?;
    BeliefStructure::from_json(&text)
}

fn color_enabled() -> bool {
    if std::env::var("BK_COLOR").map(|v| v == "0").unwrap_or(false) {
        return false;
    }
    std::io::stdout().is_terminal()
}

fn verdict(ok: bool, yes: &str, no: &str) -> String {
    let word = if ok { yes } else { no };
    if color_enabled() {
        let code = if ok { 32 } else { 31 };
        format!("\x1b[{code}m{word}\x1b[0m")
    } else {
        word.to_string()
    }
}

fn emit(value: Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("report serialization")
    );
}

fn exit_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn render_witness_report(report: &WitnessReport, out: &mut String) {
    use std::fmt::Write;
    if report.holds() {
        for (p, x) in report.witnesses() {
            let _ = writeln!(out, "  witness {p} -> {x}");
        }
    } else if let Some(p) = report.failing_predicate() {
        let _ = writeln!(out, "  failing predicate: {p}");
    }
}

fn cmd_eval(args: EvalArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    let f = parse_formula(&args.formula)?;
    let sorted = sort_check(&f, &m, args.sort.as_deref())?;
    let result = eval(&sorted, &m, args.state)?;
    if json {
        emit(json!({
            "command": "eval",
            "formula": sorted.formula().to_string(),
            "sort": sorted.sort(),
            "state": args.state,
            "result": result,
        }));
    } else {
        println!("formula: {}", sorted.formula());
        println!("sort: {}  state: {}", sorted.sort(), args.state);
        println!("result: {}", verdict(result, "true", "false"));
    }
    Ok(exit_code(result))
}

fn cmd_complete(args: CompleteArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    let relation = m.relation(&args.relation)?;
    let family = m.family(&args.family)?;
    let report = match args.kind {
        CompletenessKind::Assumption => is_assumption_complete(relation, family)?,
        CompletenessKind::Belief => is_belief_complete(relation, family)?,
        CompletenessKind::Wps => is_wps(relation, family)?,
        CompletenessKind::Vwps => is_vwps(relation, family)?,
    };
    if json {
        emit(json!({
            "command": "complete",
            "kind": args.kind.name(),
            "relation": args.relation,
            "family": args.family,
            "report": report.to_json(),
        }));
    } else {
        println!(
            "kind: {}  relation: {}  family: {} ({} members)",
            args.kind.name(),
            args.relation,
            args.family,
            family.len()
        );
        println!("verdict: {}", verdict(report.holds(), "holds", "fails"));
        let mut detail = String::new();
        render_witness_report(&report, &mut detail);
        print!("{detail}");
    }
    Ok(exit_code(report.holds()))
}

fn cmd_fixpoint(args: FixpointArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    match (&args.op, &args.pred) {
        (Some(_), Some(_)) | (None, None) => Err(Error::PreconditionFailed(
            "pass exactly one of --op and --pred".into(),
        )),
        (Some(op_name), None) => {
            let op = PropOperator::from_name(op_name).ok_or_else(|| {
                Error::PreconditionFailed(format!(
                    "unknown operator `{op_name}`; expected id, not, const-true or const-false"
                ))
            })?;
            let q = q_predicate(&m, &args.ra, &args.rb)?;
            let p =
                crate::model::Predicate::from_fn(q.sort(), q.width(), |x| op.apply(q.contains(x)));
            let check = check_bk_assumptions(&m, &args.ra, &args.rb, &p, args.state)?;
            let fixpoint = if check.all() {
                Some(operator_fixpoint(&m, &args.ra, &args.rb, op, args.state)?)
            } else {
                None
            };
            let holds = check.all();
            if json {
                emit(json!({
                    "command": "fixpoint",
                    "mode": "operator",
                    "operator": op.name(),
                    "state": args.state,
                    "assumptions": {"a1": check.a1, "a2": check.a2, "a3": check.a3},
                    "fixpoint": fixpoint.map(|fp| json!({"value": fp.value, "fixed": fp.is_fixed()})),
                    "holds": holds,
                }));
            } else {
                println!("operator: {}  candidate: {}", op.name(), args.state);
                println!(
                    "assumptions: A1 {}  A2 {}  A3 {}",
                    check.a1, check.a2, check.a3
                );
                match fixpoint {
                    Some(fp) => println!(
                        "fixpoint value: {}  ({}({}) = {})",
                        verdict(true, &fp.value.to_string(), ""),
                        op.name(),
                        fp.value,
                        op.apply(fp.value)
                    ),
                    None => println!(
                        "precondition {}: {}",
                        verdict(false, "", "fails"),
                        check.first_failing().unwrap_or("?")
                    ),
                }
            }
            Ok(exit_code(holds))
        }
        (None, Some(pred_name)) => {
            let p = m.predicate(pred_name)?.clone();
            let check = check_bk_assumptions(&m, &args.ra, &args.rb, &p, args.state)?;
            let equivalence = if check.all() {
                Some(basic_lemma_verify(&m, &args.ra, &args.rb, &p, args.state)?)
            } else {
                None
            };
            let holds = check.all() && equivalence.map(|e| e.holds()).unwrap_or(false);
            if json {
                emit(json!({
                    "command": "fixpoint",
                    "mode": "basic",
                    "pred": pred_name,
                    "state": args.state,
                    "assumptions": {"a1": check.a1, "a2": check.a2, "a3": check.a3},
                    "equivalence": equivalence.map(|e| json!({
                        "p_at_c": e.p_at_c, "q_at_c": e.q_at_c, "holds": e.holds()
                    })),
                    "holds": holds,
                }));
            } else {
                println!("predicate: {pred_name}  candidate: {}", args.state);
                println!(
                    "assumptions: A1 {}  A2 {}  A3 {}",
                    check.a1, check.a2, check.a3
                );
                match equivalence {
                    Some(e) => println!(
                        "p(c) = {}  q(c) = {}  equivalence {}",
                        e.p_at_c,
                        e.q_at_c,
                        verdict(e.holds(), "holds", "violated")
                    ),
                    None => println!(
                        "precondition {}: {}",
                        verdict(false, "", "fails"),
                        check.first_failing().unwrap_or("?")
                    ),
                }
            }
            Ok(exit_code(holds))
        }
    }
}

fn cmd_cycle(args: CycleArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    let cycle = m.cycle(&args.cycle)?.clone();
    let p = m.predicate(&args.pred)?.clone();
    let check = generalized_assumptions_check(&m, &cycle, &p, args.state)?;
    let vwps = if check.all() {
        Some(generalized_basic_lemma_verify(&m, &cycle, &p, args.state)?)
    } else {
        None
    };
    let holds = check.all() && vwps.map(|v| v.holds()).unwrap_or(false);
    if json {
        emit(json!({
            "command": "cycle",
            "cycle": args.cycle,
            "pred": args.pred,
            "state": args.state,
            "conjuncts": check.conjuncts().iter().map(|c| json!({
                "label": c.label, "holds": c.holds
            })).collect::<Vec<_>>(),
            "assumptions_hold": check.all(),
            "vwps": vwps.map(|v| json!({
                "composite_at_c": v.composite_at_c,
                "p_at_c": v.p_at_c,
                "holds": v.holds(),
            })),
            "holds": holds,
        }));
    } else {
        println!(
            "cycle: {} ({})  predicate: {}  candidate: {}",
            args.cycle,
            cycle.relation_names().join(" ; "),
            args.pred,
            args.state
        );
        for c in check.conjuncts() {
            println!("  {} : {}", c.label, verdict(c.holds, "true", "false"));
        }
        match vwps {
            Some(v) => println!(
                "composite(c,c) = {}  p(c) = {}  witness equation {}",
                v.composite_at_c,
                v.p_at_c,
                verdict(v.holds(), "holds", "violated")
            ),
            None => println!("assumptions {}", verdict(false, "", "fail")),
        }
    }
    Ok(exit_code(holds))
}

fn cmd_compose(args: ComposeArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    let r_ab = m.relation(&args.rab)?;
    let r_bc = m.relation(&args.rbc)?;
    let family_b = m.family(&args.family_b)?;
    let family_c = m.family(&args.family_c)?;
    let report = composition_lemma_check(r_ab, r_bc, family_b, family_c)?;
    let holds = report.conclusion.holds();
    if json {
        emit(json!({
            "command": "compose",
            "rab": args.rab,
            "rbc": args.rbc,
            "family_b": args.family_b,
            "family_c": args.family_c,
            "report": report.to_json(),
            "holds": holds,
        }));
    } else {
        println!("chain: {} ; {}", args.rab, args.rbc);
        println!(
            "hypothesis 1 (first leg belief-complete): {}",
            verdict(report.hypothesis_1.holds(), "holds", "fails")
        );
        render_and_print(&report.hypothesis_1);
        println!(
            "hypothesis 2 (second leg assumption-complete): {}",
            verdict(report.hypothesis_2.holds(), "holds", "fails")
        );
        render_and_print(&report.hypothesis_2);
        let in_family = report.hypothesis_3.iter().filter(|e| e.in_family).count();
        println!(
            "hypothesis 3 (comprehensions in middle family): {}/{}",
            in_family,
            report.hypothesis_3.len()
        );
        for e in &report.hypothesis_3 {
            println!(
                "  boxplus {} = {} : {}",
                e.predicate,
                e.boxplus,
                if e.in_family { "in family" } else { "missing" }
            );
        }
        println!(
            "conclusion (composite assumption-complete): {}",
            verdict(report.conclusion.holds(), "holds", "fails")
        );
        render_and_print(&report.conclusion);
        println!("consistent: {}", report.consistent);
    }
    Ok(exit_code(holds))
}

fn render_and_print(report: &WitnessReport) {
    let mut out = String::new();
    render_witness_report(report, &mut out);
    print!("{out}");
}

fn cmd_counterexample(args: CounterexampleArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    let relation = m.relation(&args.relation)?;
    let family = match (&args.pred, &args.family) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(Error::PreconditionFailed(
                "pass exactly one of --pred and --family".into(),
            ))
        }
        (Some(pred_name), None) => {
            let p = m.predicate(pred_name)?.clone();
            PredicateFamily::from_predicates(p.sort().to_string(), p.width(), vec![p], true)?
        }
        (None, Some(family_name)) => m.family(family_name)?.clone(),
    };
    let characterization = characterize_belief_completeness(relation, &family)?;
    // The requested artifact is the counterexample; belief-completeness
    // means there is none to construct.
    let holds = !characterization.is_complete();
    if json {
        emit(json!({
            "command": "counterexample",
            "relation": args.relation,
            "characterization": characterization.to_json(),
            "holds": holds,
        }));
    } else {
        println!(
            "relation: {}  family: {} members",
            args.relation,
            family.len()
        );
        match &characterization {
            Characterization::Complete(report) => {
                println!("verdict: belief-complete; no counterexample exists");
                render_and_print(report);
            }
            Characterization::Incomplete {
                failing_predicate,
                counterexample,
            } => {
                println!("verdict: incomplete at {failing_predicate}");
                println!(
                    "characteristic relation into {}: {}",
                    counterexample.char_relation.to_sort(),
                    counterexample.char_relation
                );
                println!("composite: {}", counterexample.composite);
                for (x, e) in counterexample.failure_evidence.iter().enumerate() {
                    match e {
                        crate::composition::FailureEvidence::EmptyImage => {
                            println!("  state {x}: image empty");
                        }
                        crate::composition::FailureEvidence::EscapingY(y) => {
                            println!("  state {x}: escapes through {y}");
                        }
                    }
                }
            }
        }
    }
    Ok(exit_code(holds))
}

fn stage_rows(seq: &TerminalSequence) -> Vec<Value> {
    seq.stages()
        .iter()
        .map(|s| {
            json!({
                "level": s.level(),
                "x_size": s.x_size(),
                "y_size": s.y_size(),
            })
        })
        .collect()
}

fn closure_side_lines(side: &SideClosure, out: &mut String) {
    use std::fmt::Write;
    let count = |entries: &[ClosureStatus]| {
        let mut in_family = 0;
        let mut empty = 0;
        let mut not_measurable = 0;
        for s in entries {
            match s {
                ClosureStatus::InFamily => in_family += 1,
                ClosureStatus::Empty => empty += 1,
                ClosureStatus::NotMeasurable => not_measurable += 1,
            }
        }
        (in_family, empty, not_measurable)
    };
    let _ = writeln!(
        out,
        "closure on {} ({} members):",
        side.family, side.family_size
    );
    for (name, statuses) in [
        (
            "intersection",
            side.intersections
                .iter()
                .map(|e| e.status)
                .collect::<Vec<_>>(),
        ),
        ("union", side.unions.iter().map(|e| e.status).collect()),
        (
            "assumes-image",
            side.modalities.iter().map(|e| e.assumes).collect(),
        ),
        (
            "believes-image",
            side.modalities.iter().map(|e| e.believes).collect(),
        ),
    ] {
        let (in_family, empty, not_measurable) = count(&statuses);
        let _ = writeln!(
            out,
            "  {name:<15} in-family {in_family}  empty {empty}  not-measurable {not_measurable}"
        );
    }
}

fn cmd_coalgebra(args: CoalgebraArgs, json: bool) -> Result<i32> {
    let profile = StrategyProfile::new(args.sa, args.sb, args.m)?;
    let seq = match terminal_sequence(&profile, args.depth, args.cap) {
        Ok(seq) => seq,
        Err(Error::SequenceCapped {
            level,
            attempted,
            cap,
            partial,
        }) => {
            let last = partial.stages().last().expect("level 0 always exists");
            return Err(Error::PreconditionFailed(format!(
                "stage {level} needs {attempted} elements (cap {cap}); last completed level {} with |X| = {}, |Y| = {}",
                last.level(),
                last.x_size(),
                last.y_size()
            )));
        }
        Err(e) => return Err(e),
    };

    match args.action {
        None => {
            if json {
                emit(json!({
                    "command": "coalgebra",
                    "profile": {"sa": args.sa, "sb": args.sb, "m": args.m},
                    "depth": args.depth,
                    "stages": stage_rows(&seq),
                    "converged_at": seq.converged_at(),
                    "holds": true,
                }));
            } else {
                println!("profile: sa={} sb={} m={}", args.sa, args.sb, args.m);
                println!("level  |X_k|  |Y_k|");
                for s in seq.stages() {
                    println!("{:>5}  {:>5}  {:>5}", s.level(), s.x_size(), s.y_size());
                }
                match seq.converged_at() {
                    Some(k) => println!("converged at level {k}"),
                    None => println!("no convergence within depth {}", args.depth),
                }
            }
            Ok(0)
        }
        Some(CoalgebraAction::Export { d, out }) => {
            let model = extract_belief_model(&seq, d)?;
            let structure = model.structure();
            let complete =
                is_assumption_complete(structure.relation("Ra")?, structure.family("PUb")?)?
                    .holds()
                    && is_assumption_complete(structure.relation("Rb")?, structure.family("PUa")?)?
                        .holds();
            let retraction = check_retraction(&seq, d)?;
            let closure = verify_closure(&model)?;

            let sidecar_path = out.with_extension("sidecar.json");
            std::fs::write(&out, structure.to_json())?;

            let x_terms = seq.x_terms(d + 1);
            let y_terms = seq.y_terms(d + 1);
            let ua_terms: Vec<String> = (0..structure.sort_size("Ua").unwrap_or(0))
                .map(|u| {
                    let t = u % x_terms.len();
                    let s = u / x_terms.len();
                    format!("({s},{})", x_terms[t])
                })
                .collect();
            let ub_terms: Vec<String> = (0..structure.sort_size("Ub").unwrap_or(0))
                .map(|u| {
                    let t = u % y_terms.len();
                    let s = u / y_terms.len();
                    format!("({s},{})", y_terms[t])
                })
                .collect();
            let sidecar = json!({
                "profile": {"sa": args.sa, "sb": args.sb, "m": args.m},
                "depth": args.depth,
                "extract_depth": d,
                "converged_at": seq.converged_at(),
                "stages": stage_rows(&seq),
                "terms": {"Ua": ua_terms, "Ub": ub_terms},
            });
            let mut sidecar_text =
                serde_json::to_string_pretty(&sidecar).expect("sidecar serialization");
            sidecar_text.push('\n');
            std::fs::write(&sidecar_path, sidecar_text)?;

            let holds = complete && retraction.holds();
            if json {
                emit(json!({
                    "command": "coalgebra",
                    "profile": {"sa": args.sa, "sb": args.sb, "m": args.m},
                    "depth": args.depth,
                    "stages": stage_rows(&seq),
                    "converged_at": seq.converged_at(),
                    "export": {
                        "extract_depth": d,
                        "model_path": out.display().to_string(),
                        "sidecar_path": sidecar_path.display().to_string(),
                        "assumption_complete": complete,
                        "retraction": retraction.holds(),
                        "closure": closure.to_json(),
                    },
                    "holds": holds,
                }));
            } else {
                println!(
                    "extracted model at depth {d}: |Ua| = {}, |Ub| = {}",
                    structure.sort_size("Ua").unwrap_or(0),
                    structure.sort_size("Ub").unwrap_or(0)
                );
                println!(
                    "families: PUb {} members, PUa {} members",
                    structure.family("PUb")?.len(),
                    structure.family("PUa")?.len()
                );
                println!("assumption-complete: {}", verdict(complete, "yes", "no"));
                println!(
                    "retraction: {} ({} checks)",
                    verdict(retraction.holds(), "holds", "fails"),
                    retraction.checks_on_ub + retraction.checks_on_ua
                );
                let mut table = String::new();
                closure_side_lines(&closure.on_ub, &mut table);
                closure_side_lines(&closure.on_ua, &mut table);
                print!("{table}");
                println!("wrote model to {}", out.display());
                println!("wrote sidecar to {}", sidecar_path.display());
            }
            Ok(exit_code(holds))
        }
    }
}

fn cmd_certify(args: CertifyArgs, json: bool) -> Result<i32> {
    let m = load_model(&args.model)?;
    let family = match &args.family {
        Some(name) => Some(m.family(name)?),
        None => None,
    };
    let cert = diagonal_certificate(&m, &args.ra, &args.rb, family)?;
    let holds = cert.diagonal_in_class() && !cert.witness_found();
    if json {
        emit(json!({
            "command": "certify",
            "ra": args.ra,
            "rb": args.rb,
            "family": args.family,
            "certificate": cert.to_json(),
            "holds": holds,
        }));
    } else {
        println!("q = {}", cert.q());
        println!("diagonal D = {}", cert.diagonal());
        if !cert.diagonal_in_class() {
            println!("diagonal not in the supplied class; the impossibility does not apply");
        } else {
            println!(
                "searched {} candidates; witness found: {}",
                cert.searched(),
                verdict(!cert.witness_found(), "no", "yes")
            );
            for (state, label) in cert.per_state_failure() {
                println!("  state {state} fails {label}");
            }
        }
        println!(
            "impossibility {}",
            verdict(holds, "certified", "not established")
        );
    }
    Ok(exit_code(holds))
}
