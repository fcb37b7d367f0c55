//! Command-line front end. Every subcommand prints a JSON report (or CSV for
//! scans) and maps its verdict to an exit code: 0 affirmative, 1 negative or
//! inconclusive, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::BigRat;
use crate::criterion::{check_pair, discriminants, search_word_pair, CriterionVerdict, DiscriminantTriple};
use crate::error::Error;
use crate::lyapunov::{estimate_ensemble, RandomWalkSpec};
use crate::mirror_quintic::verify_theorem;
use crate::prym::{model_b_context, scan_parameters, symbolic_discriminants, PrymParams, ScanRow};
use crate::symplectic::{reciprocal_from_char_poly, IntMatrix, SymplecticContext};

pub const SCHEMA: u32 = 1;
pub const THREADS_ENV: &str = "SIMPLICITY_KIT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "simplicity-kit", version, about = "Exact pinching/twisting verification for Sp(4, Z) monoids")]
pub struct Cli {
    /// Worker threads for parallel stages (overridden by SIMPLICITY_KIT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the discriminant criterion on two matrix files.
    CheckCriterion { m: PathBuf, n: PathBuf },
    /// Run the criterion on the Prym family for h in [FROM, TO].
    PrymScan(ScanArgs),
    /// Reproduce the mirror quintic computation.
    MirrorQuintic,
    /// Recompute the symbolic discriminants in w and compare with the references.
    SymbolicCheck,
    /// Monte-Carlo Lyapunov spectrum of a random product.
    Lyapunov(LyapunovArgs),
    /// Search reduced words for a pair passing the criterion.
    SearchWords(SearchArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    from: i64,
    to: i64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct LyapunovArgs {
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated rational weights, e.g. `1/2,1/4,1/4`. Uniform if omitted.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<String>>,
    /// Matrix file with one generator per blank-line separated block.
    /// Defaults to the Prym generators A, B, C at `--h`.
    #[arg(long)]
    generators: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    h: i64,
    #[arg(long, default_value_t = 1)]
    renorm_interval: u64,
    #[arg(long, default_value_t = 1)]
    replicates: u64,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 6)]
    max_exp: u32,
    #[arg(long, default_value_t = 3)]
    max_letters: usize,
    /// Matrix file with one generator per blank-line separated block.
    #[arg(long)]
    generators: PathBuf,
}

#[derive(Serialize)]
struct RunReport {
    schema: u32,
    version: &'static str,
    command: &'static str,
    inputs: Value,
    results: Value,
    verdicts: Vec<String>,
    timing_ms: u128,
}

/// Exit status of a finished command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Affirmative = 0,
    Negative = 1,
    InputError = 2,
}

struct Output {
    command: &'static str,
    inputs: Value,
    results: Value,
    verdicts: Vec<String>,
    status: Status,
    csv: Option<String>,
}

fn status_of(err: &Error) -> Status {
    match err {
        Error::Mismatch { .. }
        | Error::InconclusiveRank(_)
        | Error::IllConditioned(_)
        | Error::NotPinching => Status::Negative,
        _ => Status::InputError,
    }
}

type CmdResult = std::result::Result<Output, (Status, String)>;

fn fail(err: Error) -> (Status, String) {
    (status_of(&err), err.to_string())
}

fn read_file(path: &Path) -> std::result::Result<String, (Status, String)> {
    std::fs::read_to_string(path).map_err(|e| (Status::InputError, format!("{}: {e}", path.display())))
}

/// Matrices separated by blank lines; `#` lines are comments.
pub fn parse_matrix_list(text: &str) -> crate::Result<Vec<IntMatrix>> {
    let mut blocks = vec![String::new()];
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !blocks.last().expect("nonempty").is_empty() {
                blocks.push(String::new());
            }
        } else {
            let last = blocks.last_mut().expect("nonempty");
            last.push_str(t);
            last.push('\n');
        }
    }
    let mats: Vec<IntMatrix> = blocks
        .iter()
        .filter(|b| !b.is_empty())
        .map(|b| IntMatrix::parse_text(b))
        .collect::<crate::Result<_>>()?;
    if mats.is_empty() {
        return Err(Error::Parse("no matrices found".into()));
    }
    Ok(mats)
}

fn triple_json(t: &DiscriminantTriple) -> Value {
    json!({ "d1": t.d1.to_string(), "d2": t.d2.to_string(), "d3": t.d3.to_string() })
}

fn verdict_json(v: &CriterionVerdict) -> Value {
    json!({
        "outcome": v.outcome,
        "failures": v.failures.iter().map(|f| json!({
            "label": f.label,
            "value": f.value.to_string(),
            "reason": f.reason,
        })).collect::<Vec<_>>(),
    })
}

fn outcome_name(v: &CriterionVerdict) -> String {
    serde_json::to_value(v.outcome)
        .ok()
        .and_then(|x| x.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn cmd_check_criterion(m: &Path, n: &Path) -> CmdResult {
    let mm = IntMatrix::parse_text(&read_file(m)?).map_err(fail)?;
    let nn = IntMatrix::parse_text(&read_file(n)?).map_err(fail)?;
    let p = reciprocal_from_char_poly(&mm).map_err(fail)?;
    let q = reciprocal_from_char_poly(&nn).map_err(fail)?;
    let verdict = check_pair(&p, &q);
    let form = SymplecticContext::new(vec![mm.clone(), nn.clone()])
        .ok()
        .map(|c| c.form().clone());
    Ok(Output {
        command: "check-criterion",
        inputs: json!({ "m": mm, "n": nn }),
        results: json!({
            "invariant_form": form,
            "p": { "a": p.a.to_string(), "b": p.b.to_string(), "discriminants": triple_json(&discriminants(&p)) },
            "q": { "a": q.a.to_string(), "b": q.b.to_string(), "discriminants": triple_json(&discriminants(&q)) },
            "verdict": verdict_json(&verdict),
        }),
        verdicts: vec![outcome_name(&verdict)],
        status: if verdict.is_simple() { Status::Affirmative } else { Status::Negative },
        csv: None,
    })
}

fn scan_row_json(r: &ScanRow) -> Value {
    json!({
        "h": r.params.h(),
        "w": r.params.w(),
        "D": r.discriminant.to_string(),
        "p": { "a": r.p.a.to_string(), "b": r.p.b.to_string(), "discriminants": triple_json(&r.p_discriminants) },
        "q": { "a": r.q.a.to_string(), "b": r.q.b.to_string(), "discriminants": triple_json(&r.q_discriminants) },
        "verdict": verdict_json(&r.verdict),
    })
}

fn scan_csv(rows: &[ScanRow]) -> crate::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["h", "w", "D", "verdict", "first_failure"]).map_err(io)?;
    for r in rows {
        let first = r
            .verdict
            .first_failure()
            .map(|f| f.label.clone())
            .unwrap_or_default();
        w.write_record([
            r.params.h().to_string(),
            r.params.w().to_string(),
            r.discriminant.to_string(),
            outcome_name(&r.verdict),
            first,
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_prym_scan(args: &ScanArgs) -> CmdResult {
    if args.from < 1 || args.from > args.to {
        return Err((
            Status::InputError,
            format!("invalid range {}..{}: need 1 <= from <= to", args.from, args.to),
        ));
    }
    let report = scan_parameters(args.from, args.to).map_err(fail)?;
    let csv = if args.csv { Some(scan_csv(&report.rows).map_err(fail)?) } else { None };
    Ok(Output {
        command: "prym-scan",
        inputs: json!({ "from": args.from, "to": args.to, "e": 1, "t": 0 }),
        results: json!({
            "rows": report.rows.iter().map(scan_row_json).collect::<Vec<_>>(),
            "exceptional": report.exceptional,
        }),
        verdicts: vec![format!("exceptional: {:?}", report.exceptional)],
        status: Status::Affirmative,
        csv,
    })
}

fn cmd_mirror_quintic() -> CmdResult {
    let report = verify_theorem().map_err(fail)?;
    let mut verdicts = vec!["simple_by_galois".to_string()];
    verdicts.push(if report.spectral_confirmed { "spectral_confirmed" } else { "spectral_inconclusive" }.into());
    Ok(Output {
        command: "mirror-quintic",
        inputs: json!({}),
        results: serde_json::to_value(&report).expect("report serialises"),
        verdicts,
        status: Status::Affirmative,
        csv: None,
    })
}

fn cmd_symbolic_check() -> CmdResult {
    let (_, checks) = symbolic_discriminants(1).map_err(fail)?;
    Ok(Output {
        command: "symbolic-check",
        inputs: json!({ "e": 1 }),
        results: json!({ "checks": checks }),
        verdicts: vec![format!("{} polynomials matched", checks.len())],
        status: Status::Affirmative,
        csv: None,
    })
}

fn cmd_lyapunov(args: &LyapunovArgs) -> CmdResult {
    let generators = match &args.generators {
        Some(path) => parse_matrix_list(&read_file(path)?).map_err(fail)?,
        None => {
            let params = PrymParams::from_h(args.h).map_err(fail)?;
            model_b_context(&params).map_err(fail)?.generators().to_vec()
        }
    };
    let weights: Vec<BigRat> = match &args.weights {
        Some(ws) => ws
            .iter()
            .map(|s| BigRat::from_str(s.trim()).map_err(|e| (Status::InputError, format!("weight {s:?}: {e}"))))
            .collect::<std::result::Result<_, _>>()?,
        None => {
            let n = generators.len() as i64;
            vec![BigRat::new(1.into(), n.into()); generators.len()]
        }
    };
    let spec = RandomWalkSpec::from_int_generators(&generators, weights.clone(), args.steps, args.seed)
        .and_then(|s| s.with_renorm_interval(args.renorm_interval))
        .map_err(fail)?;
    if args.replicates == 0 {
        return Err((Status::InputError, "replicates must be positive".into()));
    }
    let estimates = estimate_ensemble(&spec, args.replicates).map_err(fail)?;
    let simple = estimates.iter().all(|e| {
        e.exponents.windows(2).zip(e.std_errors.windows(2)).all(|(x, s)| {
            x[0] - x[1] > 5.0 * (s[0] * s[0] + s[1] * s[1]).sqrt()
        })
    });
    Ok(Output {
        command: "lyapunov",
        inputs: json!({
            "steps": args.steps,
            "seed": args.seed,
            "weights": weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "generators": generators,
            "renorm_interval": args.renorm_interval,
            "replicates": args.replicates,
        }),
        results: json!({ "estimates": estimates }),
        verdicts: vec![if simple { "gaps_exceed_5_se" } else { "gaps_not_resolved" }.into()],
        status: if simple { Status::Affirmative } else { Status::Negative },
        csv: None,
    })
}

fn cmd_search(args: &SearchArgs) -> CmdResult {
    let generators = parse_matrix_list(&read_file(&args.generators)?).map_err(fail)?;
    let ctx = SymplecticContext::new(generators.clone()).map_err(fail)?;
    let hit = search_word_pair(&ctx, args.max_exp, args.max_letters).map_err(fail)?;
    let names: Vec<String> = (0..generators.len()).map(|i| format!("M{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let results = match &hit {
        Some(h) => json!({
            "found": true,
            "first": h.first.render(&names),
            "second": h.second.render(&names),
            "first_poly": { "a": h.first_poly.a.to_string(), "b": h.first_poly.b.to_string() },
            "second_poly": { "a": h.second_poly.a.to_string(), "b": h.second_poly.b.to_string() },
            "verdict": verdict_json(&h.verdict),
        }),
        None => json!({ "found": false }),
    };
    Ok(Output {
        command: "search-words",
        inputs: json!({
            "max_exp": args.max_exp,
            "max_letters": args.max_letters,
            "generators": generators,
            "form": ctx.form(),
        }),
        results,
        verdicts: vec![if hit.is_some() { "found" } else { "not_found" }.into()],
        status: if hit.is_some() { Status::Affirmative } else { Status::Negative },
        csv: None,
    })
}

fn configure_threads(flag: Option<usize>) -> std::result::Result<(), String> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|e| format!("{THREADS_ENV}={v:?}: {e}"))?,
        ),
        Err(_) => flag,
    };
    if let Some(n) = n {
        // a global pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args` and runs the command, writing the report to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return Status::InputError as i32;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    if let Err(msg) = configure_threads(cli.threads) {
        let _ = writeln!(err, "error: {msg}");
        return Status::InputError as i32;
    }
    let start = Instant::now();
    let result = match &cli.command {
        Command::CheckCriterion { m, n } => cmd_check_criterion(m, n),
        Command::PrymScan(a) => cmd_prym_scan(a),
        Command::MirrorQuintic => cmd_mirror_quintic(),
        Command::SymbolicCheck => cmd_symbolic_check(),
        Command::Lyapunov(a) => cmd_lyapunov(a),
        Command::SearchWords(a) => cmd_search(a),
    };
    match result {
        Ok(o) => {
            if let Some(csv) = &o.csv {
                let _ = out.write_all(csv.as_bytes());
            } else {
                let report = RunReport {
                    schema: SCHEMA,
                    version: env!("CARGO_PKG_VERSION"),
                    command: o.command,
                    inputs: o.inputs,
                    results: o.results,
                    verdicts: o.verdicts,
                    timing_ms: start.elapsed().as_millis(),
                };
                let text = serde_json::to_string_pretty(&report).expect("report serialises");
                let _ = writeln!(out, "{text}");
            }
            o.status as i32
        }
        Err((status, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            status as i32
        }
    }
}
