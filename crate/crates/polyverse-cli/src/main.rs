//! Batch command line over the polyverse library: evaluate and compose
//! polynomials, run law suites on the bundled universes, search for
//! counterexamples, and print JSON-lines reports.
//!
//! Exit codes: 0 when every selected law holds, 1 when a law failed (its
//! report line carries the counterexample), 2 on usage or IO errors, 3 when
//! a truncation cap or search budget was exhausted.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyverse::error::Error;
use polyverse::laws::{run_law, verify_law_counterexample, LawId, LawReport, LawStatus, Mode};
use polyverse::monoidal::compose_poly;
use polyverse::poly::{extension_card, mk_poly};
use polyverse::universes::{
    kleisli_compose, kleisli_compose_via_monad, mk_ufin, mk_uprop, PartialFn, UniversePoly,
};
use serde::Serialize;

const CANONICAL_LAWS: [LawId; 7] = [
    LawId::M1L,
    LawId::M1R,
    LawId::M2,
    LawId::DL1,
    LawId::DL2,
    LawId::DL3,
    LawId::DL4,
];

#[derive(Parser)]
#[command(name = "polyverse", version, about = "Polynomial universe law runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run selected laws over a universe, one JSON report per line.
    CheckLaws(CheckLawsArgs),
    /// Search one law for its minimal counterexample and re-verify it.
    FindCounterexample(FindCounterexampleArgs),
    /// Print the extension cardinality of a polynomial at a finite set.
    Eval(EvalArgs),
    /// Compose two polynomials and print the composite arities.
    Compose(ComposeArgs),
    /// Show partial-function composition agreeing with the Kleisli route
    /// through the proposition universe.
    DemoPartiality,
    /// Run the first distributive-law diagram on the truncated finite-set
    /// universe in both modes: strict fails, up-to-bijection recovers.
    DemoList(DemoListArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum UniverseKind {
    /// Truncated finite-set universe (codes are cardinalities up to a cap).
    Ufin,
    /// Two-valued proposition universe (the partiality monad).
    Uprop,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Compare lens tables on the nose.
    Strict,
    /// Compare lens tables up to a position bijection.
    #[value(name = "upto_iso")]
    UptoIso,
}

impl From<ModeArg> for Mode {
    fn from(mode: ModeArg) -> Mode {
        match mode {
            ModeArg::Strict => Mode::Strict,
            ModeArg::UptoIso => Mode::UptoIso,
        }
    }
}

#[derive(Args)]
struct CheckLawsArgs {
    /// Universe to check.
    #[arg(long, value_enum)]
    universe: UniverseKind,
    /// Truncation cap for the finite-set universe; must be at least 1.
    /// Defaults to 3 when a distributive law is selected, 4 otherwise.
    #[arg(long)]
    cap: Option<usize>,
    /// Equality mode for the distributive-law diagrams.
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    /// Comma-separated laws to run; M1 expands to M1L and M1R. Defaults to
    /// all of M1L, M1R, M2, DL1, DL2, DL3, DL4.
    #[arg(long, value_delimiter = ',')]
    laws: Option<Vec<String>>,
    /// Append a one-line human-readable summary to stdout.
    #[arg(long)]
    human: bool,
    /// Write the report lines to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FindCounterexampleArgs {
    /// Universe to search.
    #[arg(long, value_enum)]
    universe: UniverseKind,
    /// Truncation cap for the finite-set universe; must be at least 1.
    /// Defaults to 3 for distributive laws, 4 otherwise.
    #[arg(long)]
    cap: Option<usize>,
    /// Equality mode for the distributive-law diagrams.
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    /// Single law to search (M1L, M1R, M2, DL1, DL2, DL3, or DL4).
    #[arg(long)]
    law: String,
    /// Write the report line to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Polynomial as a JSON array of arities, for example '[0,1,2,3]'.
    #[arg(long)]
    poly: String,
    /// Cardinality of the input set.
    #[arg(long)]
    at: usize,
}

#[derive(Args)]
struct ComposeArgs {
    /// Outer polynomial as a JSON array of arities.
    #[arg(long)]
    left: String,
    /// Inner polynomial as a JSON array of arities.
    #[arg(long)]
    right: String,
}

#[derive(Args)]
struct DemoListArgs {
    /// Truncation cap; must be at least 1.
    #[arg(long, default_value_t = 3)]
    cap: usize,
    /// Append a one-line human-readable summary to stdout.
    #[arg(long)]
    human: bool,
    /// Write the report lines to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(err: Error) -> CliError {
        CliError::Lib(err)
    }
}

fn main() -> std::process::ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(CliError::Lib(err)) => {
            eprintln!("error: {err}");
            match err {
                Error::Overflow { .. }
                | Error::CapExceeded { .. }
                | Error::SearchExhausted { .. } => 3,
                _ => 2,
            }
        }
    };
    std::process::ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::CheckLaws(args) => check_laws(args),
        Command::FindCounterexample(args) => find_counterexample(args),
        Command::Eval(args) => eval(args),
        Command::Compose(args) => compose(args),
        Command::DemoPartiality => demo_partiality(),
        Command::DemoList(args) => demo_list(args),
    }
}

fn parse_law_selection(tokens: &[String]) -> Result<Vec<LawId>, CliError> {
    let mut picked = Vec::new();
    for token in tokens {
        if token == "M1" {
            picked.push(LawId::M1L);
            picked.push(LawId::M1R);
        } else {
            let law: LawId = token
                .parse()
                .map_err(|_| CliError::Usage(format!("unknown law {token}")))?;
            picked.push(law);
        }
    }
    if picked.is_empty() {
        return Err(CliError::Usage("no laws selected".to_string()));
    }
    let mut laws = Vec::new();
    for law in CANONICAL_LAWS {
        if picked.contains(&law) && !laws.contains(&law) {
            laws.push(law);
        }
    }
    Ok(laws)
}

fn is_distributive(law: LawId) -> bool {
    matches!(law, LawId::DL1 | LawId::DL2 | LawId::DL3 | LawId::DL4)
}

fn build_universe(
    kind: UniverseKind,
    cap: Option<usize>,
    laws: &[LawId],
) -> Result<UniversePoly, CliError> {
    match kind {
        UniverseKind::Uprop => {
            if cap.is_some() {
                return Err(CliError::Usage(
                    "--cap applies only to the ufin universe".to_string(),
                ));
            }
            Ok(mk_uprop()?)
        }
        UniverseKind::Ufin => {
            let default = if laws.iter().copied().any(is_distributive) {
                3
            } else {
                4
            };
            let cap = cap.unwrap_or(default);
            if cap < 1 {
                return Err(CliError::Usage("--cap must be at least 1".to_string()));
            }
            Ok(mk_ufin(cap)?)
        }
    }
}

fn exit_for(reports: &[LawReport]) -> u8 {
    if reports.iter().any(|r| r.status == LawStatus::Fails) {
        1
    } else if reports.iter().any(|r| r.status == LawStatus::CapExceeded) {
        3
    } else {
        0
    }
}

fn summary_line(reports: &[LawReport]) -> String {
    let holds = reports
        .iter()
        .filter(|r| r.status == LawStatus::Holds)
        .count();
    let capped = reports
        .iter()
        .filter(|r| r.status == LawStatus::CapExceeded)
        .count();
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| r.status == LawStatus::Fails)
        .map(|r| r.law.to_string())
        .collect();
    if failed.is_empty() {
        format!(
            "summary: {} law runs, {} hold, 0 fail, {} cap-exceeded",
            reports.len(),
            holds,
            capped
        )
    } else {
        format!(
            "summary: {} law runs, {} hold, {} fail ({}), {} cap-exceeded",
            reports.len(),
            holds,
            failed.len(),
            failed.join(", "),
            capped
        )
    }
}

fn emit_reports(
    reports: &[LawReport],
    output: Option<&Path>,
    human: bool,
) -> Result<u8, CliError> {
    let mut buf = String::new();
    for report in reports {
        let line = serde_json::to_string(report)
            .map_err(|e| CliError::Usage(format!("cannot serialize report: {e}")))?;
        buf.push_str(&line);
        buf.push('\n');
    }
    match output {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{buf}"),
    }
    if human {
        println!("{}", summary_line(reports));
    }
    Ok(exit_for(reports))
}

fn check_laws(args: CheckLawsArgs) -> Result<u8, CliError> {
    let laws = match &args.laws {
        None => CANONICAL_LAWS.to_vec(),
        Some(tokens) => parse_law_selection(tokens)?,
    };
    let universe = build_universe(args.universe, args.cap, &laws)?;
    let mode: Mode = args.mode.into();
    let mut reports = Vec::new();
    for law in &laws {
        reports.push(run_law(&universe, *law, mode)?);
    }
    emit_reports(&reports, args.output.as_deref(), args.human)
}

fn find_counterexample(args: FindCounterexampleArgs) -> Result<u8, CliError> {
    let law: LawId = args
        .law
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown law {}", args.law)))?;
    let laws = [law];
    let universe = build_universe(args.universe, args.cap, &laws)?;
    let mode: Mode = args.mode.into();
    let report = run_law(&universe, law, mode)?;
    if let Some(ce) = &report.counterexample {
        if !verify_law_counterexample(&universe, law, mode, ce)? {
            return Err(CliError::Lib(Error::PreconditionFailed {
                context: "counterexample failed re-verification".to_string(),
            }));
        }
    }
    emit_reports(&[report], args.output.as_deref(), false)
}

fn eval(args: EvalArgs) -> Result<u8, CliError> {
    let arities: Vec<usize> = serde_json::from_str(&args.poly)
        .map_err(|e| CliError::Usage(format!("--poly must be a JSON array of arities: {e}")))?;
    let count = extension_card(&mk_poly(arities), args.at)?;
    println!("{count}");
    Ok(0)
}

fn compose(args: ComposeArgs) -> Result<u8, CliError> {
    let left: Vec<usize> = serde_json::from_str(&args.left)
        .map_err(|e| CliError::Usage(format!("--left must be a JSON array of arities: {e}")))?;
    let right: Vec<usize> = serde_json::from_str(&args.right)
        .map_err(|e| CliError::Usage(format!("--right must be a JSON array of arities: {e}")))?;
    let composite = compose_poly(&mk_poly(left), &mk_poly(right))?;
    println!(
        "{}",
        serde_json::json!({ "arities": composite.arities() })
    );
    Ok(0)
}

#[derive(Serialize)]
struct KleisliExample {
    f: Vec<Option<usize>>,
    g: Vec<Option<usize>>,
    composite: Vec<Option<usize>>,
}

#[derive(Serialize)]
struct KleisliSweep {
    carrier: usize,
    pairs: u64,
    agree: bool,
}

fn all_partial_fns(domain: usize, codomain: usize) -> Vec<PartialFn> {
    let mut out = Vec::new();
    let choices = codomain + 1;
    let total = choices.pow(domain as u32);
    for code in 0..total {
        let mut entries = Vec::with_capacity(domain);
        let mut rest = code;
        for _ in 0..domain {
            let digit = rest % choices;
            rest /= choices;
            entries.push(if digit == 0 { None } else { Some(digit - 1) });
        }
        out.push(PartialFn {
            domain,
            codomain,
            entries,
        });
    }
    out
}

fn demo_partiality() -> Result<u8, CliError> {
    let f = PartialFn {
        domain: 3,
        codomain: 3,
        entries: vec![Some(1), None, Some(0)],
    };
    let g = PartialFn {
        domain: 3,
        codomain: 3,
        entries: vec![Some(2), Some(2), None],
    };
    let via_table = kleisli_compose(&f, &g)?;
    let via_monad = kleisli_compose_via_monad(&f, &g)?;
    if via_table.entries != via_monad.entries {
        return Err(CliError::Lib(Error::PreconditionFailed {
            context: "table and monad composites disagree".to_string(),
        }));
    }
    let example = KleisliExample {
        f: f.entries.clone(),
        g: g.entries.clone(),
        composite: via_table.entries.clone(),
    };
    let mut pairs = 0u64;
    let mut agree = true;
    let fns = all_partial_fns(3, 3);
    for f in &fns {
        for g in &fns {
            pairs += 1;
            let lhs = kleisli_compose(f, g)?;
            let rhs = kleisli_compose_via_monad(f, g)?;
            if lhs.entries != rhs.entries {
                agree = false;
            }
        }
    }
    let sweep = KleisliSweep {
        carrier: 3,
        pairs,
        agree,
    };
    let example_line = serde_json::to_string(&example)
        .map_err(|e| CliError::Usage(format!("cannot serialize demo: {e}")))?;
    let sweep_line = serde_json::to_string(&sweep)
        .map_err(|e| CliError::Usage(format!("cannot serialize demo: {e}")))?;
    println!("{example_line}");
    println!("{sweep_line}");
    Ok(if agree { 0 } else { 1 })
}

fn demo_list(args: DemoListArgs) -> Result<u8, CliError> {
    if args.cap < 1 {
        return Err(CliError::Usage("--cap must be at least 1".to_string()));
    }
    let universe = mk_ufin(args.cap)?;
    let reports = [
        run_law(&universe, LawId::DL1, Mode::Strict)?,
        run_law(&universe, LawId::DL1, Mode::UptoIso)?,
    ];
    emit_reports(&reports, args.output.as_deref(), args.human)
}
