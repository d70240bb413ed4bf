//! `ssw`: batch verification suites over the symbolic engine, with deterministic text/JSON
//! reports. Exit code 0 when every check passes, 1 on any failure, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use gca_core::{GcaError, PresentationFile};
use thiserror::Error;

pub mod report;
pub mod suites;

use report::{run_checks, Check, SuiteReport};
use suites::{ComplexOptions, Data, RepOptions, REPSCHEME_SUITES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: String, line: usize, col: usize, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Algebra { path: String, source: GcaError },
    #[error(transparent)]
    Complex(#[from] complexes::ComplexError),
    #[error(transparent)]
    Darboux(#[from] darboux::DarbouxError),
}

#[derive(Debug, Parser)]
#[command(name = "ssw", version, about = "Verify shifted symplectic Darboux data, Lagrangian intersections and representation schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// `text` or `json` on stdout, or a path to write the JSON report to
    #[arg(long, default_value = "text")]
    report: String,
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    data: Option<String>,
    /// even, general or weighted
    #[arg(long)]
    case: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// d² = 0 on a JSON presentation file
    Check {
        file: String,
        #[command(flatten)]
        out: Output,
    },
    /// Master equation, d² and symplectic checks for Darboux data; `build` prints the presentation
    Darboux {
        #[arg(value_parser = ["check", "build"], default_value = "check")]
        action: String,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// The Lagrangian-intersection pipeline and residue comparison, on a data file or on seeded even data
    Lagint {
        #[arg(value_parser = ["verify"], default_value = "verify")]
        action: String,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Tangent complexes T_q, T'_q on a window [lo, 2], with the maps between them
    Complexes {
        #[arg(value_parser = ["tq"], default_value = "tq")]
        action: String,
        #[command(flatten)]
        data: DataArgs,
        /// `lo:2` (or `lo,2`)
        #[arg(long, default_value = "-6:2", allow_hyphen_values = true)]
        window: String,
        /// phi, psi, probe (default: all three; weighted data only has phi)
        #[arg(long, value_delimiter = ',')]
        suite: Option<Vec<String>>,
        /// seed for the probe points
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// number of probe points
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Cobar, A_d/B_d, Koszul and tangent-complex checks for sheaves on affine n-space
    Repscheme {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_values_t = REPSCHEME_SUITES.map(String::from))]
        suite: Vec<String>,
        /// cobar Hilbert series / Koszul exactness weight (defaults 5 / 4)
        #[arg(long)]
        weight_bound: Option<u32>,
        /// largest matrix size accepted for --d
        #[arg(long, default_value_t = 3)]
        max_d: usize,
        #[command(flatten)]
        out: Output,
    },
}

fn read(path: &str) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn load_data(args: &DataArgs) -> Result<(Data, Vec<u8>), CliError> {
    let path = args.data.as_deref().ok_or_else(|| CliError::Usage("--data is required".into()))?;
    let case = args.case.as_deref().ok_or_else(|| CliError::Usage("--case is required".into()))?;
    let bytes = read(path)?;
    Ok((Data::parse(case, path, &bytes)?, bytes))
}

fn parse_window(w: &str) -> Result<i32, CliError> {
    let bad = || CliError::Usage(format!("bad window `{w}` (expected lo:2)"));
    let (lo, hi) = w.split_once([':', ',']).ok_or_else(bad)?;
    let (lo, hi): (i32, i32) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if hi != 2 || lo > 2 {
        return Err(CliError::Usage(format!("window [{lo}, {hi}]: the complexes live in degrees ≤ 2, so the window must be [lo, 2] with lo ≤ 2")));
    }
    Ok(lo)
}

fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SSW_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Usage(format!("SSW_THREADS = `{v}` is not a positive integer")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

enum Plan {
    Suite { command: String, input: Vec<u8>, checks: Vec<Check>, timed: bool, out: Output },
    Print(String),
}

fn plan(cli: Cli) -> Result<Plan, CliError> {
    let suite = |command: &str, input: Vec<u8>, checks, timed, out| Plan::Suite { command: command.into(), input, checks, timed, out };
    Ok(match cli.command {
        Command::Check { file, out } => {
            let bytes = read(&file)?;
            let text = String::from_utf8_lossy(&bytes);
            let algebra = |source| match source {
                GcaError::Parse { line, col, msg } => CliError::Parse { path: file.clone(), line, col, msg },
                source => CliError::Algebra { path: file.clone(), source },
            };
            let p = PresentationFile::from_json(&text).and_then(|f| f.build()).map_err(algebra)?;
            suite("check", bytes, suites::presentation(p), true, out)
        }
        Command::Darboux { action, data, out } => {
            let (data, bytes) = load_data(&data)?;
            if action == "build" {
                let a = data.build()?;
                let file = PresentationFile::from_presentation(&a.presentation);
                let doc = serde_json::json!({
                    "presentation": file,
                    "omega": { "shift": a.omega.shift, "leading": a.omega.leading.to_string() },
                });
                return Ok(Plan::Print(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json value"))));
            }
            suite("darboux", bytes, suites::darboux(data), true, out)
        }
        Command::Lagint { data, seed: Some(seed), count, out, .. } => {
            if data.data.is_some() {
                return Err(CliError::Usage("--seed generates its own data; drop --data".into()));
            }
            if data.case.as_deref().is_some_and(|c| c != "even") {
                return Err(CliError::Usage("seeded runs generate even data only".into()));
            }
            let input = format!("lagint seed={seed} count={count}").into_bytes();
            suite("lagint", input, suites::seeded_lagint(seed, count), false, out)
        }
        Command::Lagint { data, out, .. } => {
            let (data, bytes) = load_data(&data)?;
            suite("lagint", bytes, suites::lagint(data), true, out)
        }
        Command::Complexes { data, window, suite: names, seed, count, out, .. } => {
            let lo = parse_window(&window)?;
            let (data, mut bytes) = load_data(&data)?;
            let names = names.unwrap_or_else(|| match data {
                Data::Weighted(_) => vec!["phi".into()],
                _ => ["phi", "psi", "probe"].map(String::from).to_vec(),
            });
            bytes.extend(format!("\nwindow={lo}:2 seed={seed} count={count}").bytes());
            let checks = suites::complexes(data, ComplexOptions { lo, suites: names, seed, points: count })?;
            suite("complexes", bytes, checks, true, out)
        }
        Command::Repscheme { n, d, suite: names, weight_bound, max_d, out } => {
            if !(1..=4).contains(&n) {
                return Err(CliError::Usage(format!("--n {n}: affine n-space is supported for 1 ≤ n ≤ 4")));
            }
            if d < 1 || d > max_d {
                return Err(CliError::Usage(format!("--d {d}: must lie in 1..={max_d} (raise --max-d to go further)")));
            }
            let input = format!("repscheme n={n} d={d} suite={} weight-bound={weight_bound:?}", names.join(",")).into_bytes();
            let checks = suites::repscheme(RepOptions { n, d, suites: names, weight_bound })?;
            suite("repscheme", input, checks, true, out)
        }
    })
}

fn emit(report: &SuiteReport, out: &Output) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    let text = match out.report.as_str() {
        "text" => report.to_text(),
        "json" => report.to_json(),
        path => {
            std::fs::write(path, report.to_json()).map_err(|source| CliError::Io { path: path.into(), source })?;
            report.to_text()
        }
    };
    // a closed stdout is not worth a different exit code
    let _ = stdout.write_all(text.as_bytes());
    Ok(())
}

/// Parses `args` (including the program name), runs the selected suite and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ssw: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match plan(cli)? {
        Plan::Print(s) => {
            print!("{s}");
            Ok(0)
        }
        Plan::Suite { command, input, checks, timed, out } => {
            let records = pool()?.install(|| run_checks(&checks, timed));
            let report = SuiteReport::new(&command, &input, records);
            emit(&report, &out)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}
