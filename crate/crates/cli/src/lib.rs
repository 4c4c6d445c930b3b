//! Argument parsing and rendering for the `kneser` binary.
//!
//! [`run`] never exits the process; it returns the rendered output and the
//! exit code so the same path can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use kneser_core::cayleycheck::{
    search_regular_subgroup, verify_involutions, Check, Mode, SearchBudget, SearchOutcome,
    SubgroupSearchResult, VerificationReport,
};
use kneser_core::kneser::{validate, DEFAULT_MATERIALIZE_LIMIT};
use kneser_core::linegraph::{classify_line_odd, edge_pairs, line_order_odd};
use kneser_core::numth::binom_exact;
use kneser_core::perm::{involution_shape, parse_cycles, DEFAULT_MAX_ENUMERATION_DEGREE};
use kneser_core::witness::{classify_kneser, classify_odd, disjoint_fixed_pair, fixed_vertex};
use kneser_core::{BigNat, Classification, Error, KneserParams, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kneser",
    version,
    about = "Non-Cayley certificates for Kneser graphs, odd graphs and their line graphs"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,

    /// Largest vertex set that may be enumerated in memory.
    #[arg(long, env = "KNESER_MAX_MATERIALIZE", default_value_t = DEFAULT_MATERIALIZE_LIMIT, global = true)]
    pub max_materialize: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify Kneser graphs, odd graphs or line graphs of odd graphs.
    #[command(subcommand)]
    Classify(ClassifyCommand),
    /// Construct the vertex (or disjoint vertex pair) fixed by an involution.
    Witness(WitnessArgs),
    /// Run exhaustive or sampled verification.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Orders of the line graphs of odd graphs.
    LinegraphOrder(KSelection),
}

#[derive(Debug, Subcommand)]
pub enum ClassifyCommand {
    /// K(n,k) for one (n,k), or every valid k for each n in a range.
    Kneser(KneserSelection),
    /// The odd graph O_{k+1} = K(2k+1,k).
    Odd(KSelection),
    /// The line graph of O_{k+1}.
    LineOdd(KSelection),
}

#[derive(Debug, Args)]
pub struct KneserSelection {
    #[arg(long, requires = "k", conflicts_with = "n_range")]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Inclusive range A..B; classifies every valid (n,k) with n in it.
    #[arg(long, value_parser = parse_range, conflicts_with = "k")]
    pub n_range: Option<RangeInclusive<usize>>,
}

#[derive(Debug, Args)]
pub struct KSelection {
    #[arg(long, conflicts_with = "k_range")]
    pub k: Option<usize>,
    /// Inclusive range A..B.
    #[arg(long, value_parser = parse_range)]
    pub k_range: Option<RangeInclusive<usize>>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Involution in cycle notation, e.g. "(1 2)(3 4)".
    #[arg(long)]
    pub perm: String,
    /// Build two disjoint fixed vertices instead of one.
    #[arg(long)]
    pub pair: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Check that every involution of Sym([n]) fixes the constructed object.
    Involutions(InvolutionArgs),
    /// Brute-force search for a subgroup of Sym([n]) acting regularly on K(n,k).
    RegularSubgroup(SubgroupArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    FixedVertex,
    DisjointPair,
    LineVertex,
}

impl From<CheckArg> for Check {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::FixedVertex => Check::FixedVertex,
            CheckArg::DisjointPair => Check::DisjointPair,
            CheckArg::LineVertex => Check::FixedLineVertex,
        }
    }
}

#[derive(Debug, Args)]
pub struct InvolutionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = CheckArg::FixedVertex)]
    pub check: CheckArg,
    /// Check this many seeded random involutions instead of all of them.
    #[arg(long, requires = "seed")]
    pub sample: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATION_DEGREE)]
    pub max_exhaustive_n: usize,
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_degree)]
    pub max_degree: usize,
}

/// Parses an inclusive range `"A..B"` with `A ≤ B`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("range {text:?} must look like A..B"))?;
    let a = usize::from_str(a.trim()).map_err(|_| format!("bad range start {a:?}"))?;
    let b = usize::from_str(b.trim().trim_start_matches('=')).map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("range start {a} exceeds end {b}"));
    }
    Ok(a..=b)
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
            code: EXIT_USAGE,
        }
    }
}

fn error_outcome(err: Error) -> Outcome {
    match err {
        Error::InvariantViolation(_) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: EXIT_VERIFICATION_FAILED,
        },
        other => Outcome::usage(other.to_string()),
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    execute(&cli).unwrap_or_else(error_outcome)
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Classify(c) => cmd_classify(c, cli.format),
        Command::Witness(w) => cmd_witness(w, cli.format),
        Command::Verify(v) => cmd_verify(v, cli),
        Command::LinegraphOrder(sel) => cmd_linegraph_order(sel, cli),
    }
}

fn k_values(sel: &KSelection) -> Result<RangeInclusive<usize>, Error> {
    match (&sel.k, &sel.k_range) {
        (Some(k), None) => Ok(*k..=*k),
        (None, Some(r)) => Ok(r.clone()),
        _ => Err(Error::Domain("give either --k or --k-range".into())),
    }
}

pub fn cmd_classify(cmd: &ClassifyCommand, format: Format) -> Result<Outcome, Error> {
    let rows: Vec<Classification> = match cmd {
        ClassifyCommand::Kneser(sel) => match (sel.n, sel.k, &sel.n_range) {
            (Some(n), Some(k), None) => vec![classify_kneser(n, k)?],
            (None, None, Some(range)) => {
                let mut rows = Vec::new();
                for n in range.clone() {
                    for k in 2..=n.saturating_sub(1) / 2 {
                        if validate(n, k).is_ok() {
                            rows.push(classify_kneser(n, k)?);
                        }
                    }
                }
                rows
            }
            _ => return Err(Error::Domain("give --n and --k, or --n-range".into())),
        },
        ClassifyCommand::Odd(sel) => {
            let ks = k_values(sel)?;
            if *ks.start() < 1 {
                return Err(Error::Domain("odd graphs need k >= 1".into()));
            }
            ks.map(classify_odd).collect::<Result<_, _>>()?
        }
        ClassifyCommand::LineOdd(sel) => {
            let ks = k_values(sel)?;
            if *ks.start() < 2 {
                return Err(Error::Domain("line graph classification needs k >= 2".into()));
            }
            ks.map(classify_line_odd).collect::<Result<_, _>>()?
        }
    };
    Ok(Outcome::ok(render_classifications(&rows, format)))
}

pub fn render_classifications(rows: &[Classification], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = if rows.len() == 1 {
                serde_json::to_string_pretty(&rows[0])
            } else {
                serde_json::to_string_pretty(rows)
            }
            .expect("classification serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut s = Classification::TSV_HEADER.join("\t");
            s.push('\n');
            for row in rows {
                s.push_str(&row.tsv_row());
                s.push('\n');
            }
            s
        }
    }
}

pub fn cmd_witness(args: &WitnessArgs, format: Format) -> Result<Outcome, Error> {
    let params = validate(args.n, args.k)?;
    let theta = parse_cycles(&args.perm, args.n)?;
    let shape = involution_shape(&theta)?;
    let (v, w) = if args.pair {
        let (v, w) = disjoint_fixed_pair(&shape, params)?;
        (v, Some(w))
    } else {
        (fixed_vertex(&shape, params)?, None)
    };
    let out = match format {
        Format::Json => {
            let mut doc = json!({
                "n": args.n,
                "k": args.k,
                "theta": theta.to_string(),
                "v": v.to_string(),
                "verified": true,
            });
            if let Some(w) = w {
                doc["w"] = json!(w.to_string());
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        Format::Tsv => {
            let mut s = format!("theta\t{theta}\nv\t{v}\n");
            match w {
                Some(w) => {
                    let _ = writeln!(s, "w\t{w}");
                    s.push_str("check\tθ(v) = v, θ(w) = w, v ∩ w = ∅\n");
                }
                None => s.push_str("check\tθ(v) = v\n"),
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

pub fn cmd_verify(cmd: &VerifyCommand, cli: &Cli) -> Result<Outcome, Error> {
    match cmd {
        VerifyCommand::Involutions(args) => {
            let params = validate(args.n, args.k)?;
            let mode = match (args.sample, args.seed) {
                (Some(count), Some(seed)) => Mode::Sampled { seed, count },
                (None, _) => Mode::Exhaustive,
                (Some(_), None) => return Err(Error::Domain("--sample needs --seed".into())),
            };
            let report = verify_involutions(params, args.check.into(), mode, args.max_exhaustive_n)?;
            Ok(render_report(&report, cli.format))
        }
        VerifyCommand::RegularSubgroup(args) => {
            let params = validate(args.n, args.k)?;
            let budget = SearchBudget {
                max_degree: args.max_degree,
                max_points: cli.max_materialize,
            };
            let result = search_regular_subgroup(params, budget)?;
            let forbidden = classify_kneser(args.n, args.k)?.verdict == Verdict::NonCayley;
            Ok(render_search(&result, params, forbidden, cli.format))
        }
    }
}

fn render_report(report: &VerificationReport, format: Format) -> Outcome {
    let verified = report.verified();
    let (mode, sample) = match report.mode {
        Mode::Exhaustive => ("exhaustive", String::new()),
        Mode::Sampled { seed, count } => ("sampled", format!("seed={seed},count={count}")),
    };
    let stdout = match format {
        Format::Json => {
            let mut doc = serde_json::to_value(report).expect("report serializes");
            doc["verified"] = json!(verified);
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        Format::Tsv => {
            let check = serde_json::to_value(report.check).expect("check serializes");
            let mut s = String::from(
                "check\tn\tk\tmode\tsample\tinvolutions_checked\tfailures\telapsed_ms\tverified\n",
            );
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{mode}\t{}\t{}\t{}\t{:.3}\t{verified}",
                check.as_str().unwrap_or_default(),
                report.params.n(),
                report.params.k(),
                if sample.is_empty() { "-" } else { &sample },
                report.involutions_checked,
                report.failures.len(),
                report.elapsed.as_secs_f64() * 1e3,
            );
            s
        }
    };
    let mut stderr = String::new();
    for f in report.failures.iter().take(20) {
        let _ = writeln!(stderr, "failure: {} {}", f.theta, f.reason);
    }
    Outcome {
        stdout,
        stderr,
        code: if verified { EXIT_OK } else { EXIT_VERIFICATION_FAILED },
    }
}

fn render_search(
    result: &SubgroupSearchResult,
    params: KneserParams,
    forbidden: bool,
    format: Format,
) -> Outcome {
    let outcome_name = match &result.outcome {
        SearchOutcome::NoRegularSubgroup => "NoRegularSubgroup".to_string(),
        SearchOutcome::Found { generators } => format!(
            "Found({})",
            generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
        ),
        SearchOutcome::Skipped { reason } => format!("Skipped({reason})"),
    };
    let stdout = match format {
        Format::Json => {
            format!("{}\n", serde_json::to_string_pretty(result).expect("json"))
        }
        Format::Tsv => format!(
            "n\tk\ttarget_order\toutcome\tsubgroups_examined\tcauchy_checks\telapsed_ms\n{}\t{}\t{}\t{outcome_name}\t{}\t{}\t{:.3}\n",
            params.n(),
            params.k(),
            result.target_order,
            result.subgroups_examined,
            result.cauchy_checks,
            result.elapsed.as_secs_f64() * 1e3,
        ),
    };
    let (code, stderr) = match &result.outcome {
        SearchOutcome::NoRegularSubgroup => (EXIT_OK, String::new()),
        SearchOutcome::Found { .. } if forbidden => (
            EXIT_VERIFICATION_FAILED,
            format!("error: found a regular subgroup although K({},{}) is classified NonCayley\n", params.n(), params.k()),
        ),
        SearchOutcome::Found { .. } => (EXIT_OK, String::new()),
        SearchOutcome::Skipped { reason } => (EXIT_USAGE, format!("error: search refused: {reason}\n")),
    };
    Outcome { stdout, stderr, code }
}

#[derive(Debug, Serialize)]
struct LineOrderRow {
    k: usize,
    n: usize,
    base_order: String,
    line_order: String,
    enumerated: Option<u64>,
}

pub fn cmd_linegraph_order(sel: &KSelection, cli: &Cli) -> Result<Outcome, Error> {
    let ks = k_values(sel)?;
    if *ks.start() < 2 {
        return Err(Error::Domain("line graph orders need k >= 2".into()));
    }
    let mut rows = Vec::new();
    for k in ks {
        let params = KneserParams::odd(k)?;
        let order = line_order_odd(k as u64);
        let enumerated = (order <= BigNat::from(cli.max_materialize))
            .then(|| edge_pairs(params).count() as u64);
        rows.push(LineOrderRow {
            k,
            n: 2 * k + 1,
            base_order: binom_exact(2 * k as u64 + 1, k as u64).to_string(),
            line_order: order.to_string(),
            enumerated,
        });
    }
    let out = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).expect("json")),
        Format::Tsv => {
            let mut s = String::from("k\tn\tbase_order\tline_order\tenumerated\n");
            for r in &rows {
                let enumerated = r.enumerated.map_or("-".to_string(), |c| c.to_string());
                let _ = writeln!(s, "{}\t{}\t{}\t{}\t{enumerated}", r.k, r.n, r.base_order, r.line_order);
            }
            s
        }
    };
    if rows
        .iter()
        .any(|r| r.enumerated.is_some_and(|c| c.to_string() != r.line_order))
    {
        return Ok(Outcome {
            stdout: out,
            stderr: "error: enumerated line graph order disagrees with the formula\n".into(),
            code: EXIT_VERIFICATION_FAILED,
        });
    }
    Ok(Outcome::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..8").unwrap(), 2..=8);
        assert_eq!(parse_range("5..=5").unwrap(), 5..=5);
        assert!(parse_range("8..2").is_err());
        assert!(parse_range("2-8").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["kneser", "classify", "odd", "--k-range", "9..3"]).code, EXIT_USAGE);
        assert_eq!(run(["kneser", "bogus"]).code, EXIT_USAGE);
        assert_eq!(run(["kneser", "classify", "kneser", "--n", "5", "--k", "2", "--frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run(["kneser", "classify", "kneser", "--n", "6", "--k", "3"]).code, EXIT_USAGE);
        assert_eq!(run(["kneser", "classify", "odd"]).code, EXIT_USAGE);
        assert_eq!(run(["kneser", "--help"]).code, EXIT_OK);
    }
}
