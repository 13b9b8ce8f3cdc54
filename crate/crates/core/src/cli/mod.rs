//! The `rainbow` command-line tool.
//!
//! Exit codes: 0 success, 1 a proven bound failed, 2 bad input, 3 an exact
//! search ran out of budget.

mod experiment;
mod verify;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds::{self, Rational, RationalRepr};
use crate::coloring::{self, ColoredGraph};
use crate::error::Error;
use crate::exact::{self, SearchLimits};
use crate::heuristics::{self, MaximalizeOptions, SolveReport};
use crate::latin::{self, LatinSquare, Search};
use crate::paths::{self, Path, PathRecord};

pub use experiment::{run_experiment, ExperimentRow, ExperimentSpec};
pub use verify::{run_verify, VerifyRow, VerifySweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("bound violated: {0}")]
    Bound(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    /// The reader of standard output went away.
    #[error("output closed")]
    Closed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Bound(_) => EXIT_BOUND,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Closed => EXIT_OK,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundViolated { .. } => CliError::Bound(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe) {
            return CliError::Closed;
        }
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "rainbow", version, about = "Rainbow paths in properly edge-colored complete graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a coloring file.
    Gen(GenArgs),
    /// Run a solver on a coloring file and print its report as JSON.
    Solve(SolveArgs),
    /// Check a proven bound over a sweep of instances.
    Verify(VerifyArgs),
    /// Structural diagnostics of a rainbow path.
    Analyze(AnalyzeArgs),
    /// Latin square tools.
    Latin(LatinArgs),
    /// Run an experiment spec and emit a dataset.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Mm,
    Roundrobin,
    Random,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Mm => "mm",
            Family::Roundrobin => "roundrobin",
            Family::Random => "random",
        })
    }
}

/// Builds an instance with `n` vertices. For `mm`, `n` must be a power of two.
pub fn instance(family: Family, n: usize, seed: u64) -> CliResult<ColoredGraph> {
    let g = match family {
        Family::Mm => {
            if n < 2 || !n.is_power_of_two() {
                return Err(CliError::Input(format!("mm family needs n a power of two >= 2, got {n}")));
            }
            coloring::mm_coloring(n.trailing_zeros())?
        }
        Family::Roundrobin => coloring::round_robin_coloring(n)?,
        Family::Random => coloring::random_proper_coloring(n, seed)?,
    };
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Greedy,
    Maximalize,
    Ladder,
    Naive,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub family: Family,
    /// Exponent for `mm` (n = 2^m).
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Budgets {
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long)]
    pub budget_ms: Option<u64>,
    /// Vertex cap for exact searches.
    #[arg(long)]
    pub max_n: Option<usize>,
}

impl Budgets {
    fn limits(&self, default_max_n: usize) -> SearchLimits {
        SearchLimits {
            max_n: self.max_n.unwrap_or(default_max_n),
            node_budget: self.budget_nodes,
            time_budget: self.budget_ms.map(Duration::from_millis),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Coloring file, or `-` for standard input.
    pub input: String,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = SolveMethod::Maximalize)]
    pub method: SolveMethod,
    /// Start vertex for greedy, maximalize and naive.
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Seeded random restarts for maximalize.
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Split exact searches across threads.
    #[arg(long)]
    pub parallel: bool,
    /// Accept a budget-limited exact result instead of exiting with code 3.
    #[arg(long)]
    pub allow_partial: bool,
    #[command(flatten)]
    pub budgets: Budgets,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of gm, half, kfact, lemma1, lemma2, naive, counting, mm.
    pub bound: String,
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    /// Vertex counts, e.g. `30..60` (inclusive), `24,120` or `16`.
    #[arg(long, default_value = "10..30")]
    pub n: String,
    /// Exponents for the mm check.
    #[arg(long, default_value = "2..3")]
    pub m: String,
    #[arg(long, default_value = "1..4")]
    pub k: String,
    /// Path length for the counting check.
    #[arg(long, default_value_t = 60)]
    pub t: usize,
    /// Seeds per vertex count (random family) or random subsets (counting).
    #[arg(long, default_value_t = 5)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub budgets: Budgets,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Coloring file, or `-` for standard input.
    pub input: String,
    /// Path JSON file (`{"vertices": [...]}`), or `-` for standard input.
    #[arg(long)]
    pub path: String,
    /// Rational, e.g. `1`, `1/4` or `0.25`.
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    #[arg(long, default_value_t = 0)]
    pub a: usize,
    /// Reference maximum length; defaults to the path's own length.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatinCommand {
    Validate,
    FromColoring,
    ToColoring,
    Transversal,
    Partial,
    Matching,
    Subgraph,
}

#[derive(Debug, Args)]
pub struct LatinArgs {
    pub command: LatinCommand,
    /// Input file (Latin square, or coloring for `from-coloring`), or `-`.
    pub input: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub budgets: Budgets,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Experiment spec (JSON).
    pub spec: String,
    /// Overrides the spec's format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn write_output(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match out {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, text)?,
        _ => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_coloring(path: &str) -> CliResult<ColoredGraph> {
    Ok(coloring::read_coloring(&read_input(path)?)?)
}

/// Accepts `p/q`, integers and plain decimals.
pub fn parse_rational(s: &str) -> CliResult<Rational> {
    let bad = || CliError::Input(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10i128.pow(frac.len() as u32);
        let whole: i128 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let sign = if int.starts_with('-') { -1 } else { 1 };
        return Ok(Rational::new(whole * den + sign * f, den));
    }
    s.parse::<Rational>().map_err(|_| bad())
}

/// Parses `a..b` (inclusive), `a,b,c` or a single value.
pub fn parse_range(s: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::Input(format!("bad range `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Parses arguments and runs the tool, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(CliError::Closed) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Gen(a) => cmd_gen(&a, stdout, stderr),
        Command::Solve(a) => cmd_solve(&a, stdout, stderr),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Analyze(a) => cmd_analyze(&a, stdout),
        Command::Latin(a) => cmd_latin(&a, stdout, stderr),
        Command::Experiment(a) => cmd_experiment(&a, stdout),
    }
}

fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let g = match a.family {
        Family::Mm => {
            let m = match (a.m, a.n) {
                (Some(m), _) => m,
                (None, Some(n)) if n.is_power_of_two() && n >= 2 => n.trailing_zeros(),
                _ => return Err(CliError::Input("mm needs --m, or --n a power of two".into())),
            };
            coloring::mm_coloring(m)?
        }
        Family::Roundrobin | Family::Random => {
            let n = a.n.ok_or_else(|| CliError::Input(format!("{} needs --n", a.family)))?;
            instance(a.family, n, a.seed)?
        }
    };
    write_output(&a.out, stdout, &coloring::write_coloring(&g))?;
    writeln!(stderr, "n {} palette {}", g.n(), g.palette_len())?;
    Ok(EXIT_OK)
}

fn print_json(stdout: &mut dyn Write, value: &impl serde::Serialize) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let g = load_coloring(&a.input)?;
    if a.start >= g.n() {
        return Err(CliError::Input(format!("start vertex {} out of range", a.start)));
    }
    let start = Path::single(a.start);
    let reports: Vec<SolveReport> = match a.method {
        SolveMethod::Greedy => vec![heuristics::greedy_extend(&g, a.start, a.k)?],
        SolveMethod::Maximalize => {
            let opts = MaximalizeOptions { restarts: a.restarts, seed: a.seed };
            vec![heuristics::maximalize_with(&g, &start, a.k, opts)?]
        }
        SolveMethod::Naive => vec![heuristics::naive_recursive(&g, a.k, a.start)?],
        SolveMethod::Ladder => {
            let reports = heuristics::ladder(&g, a.k)?;
            let records: Vec<_> = reports.iter().map(|r| r.to_record(&g)).collect();
            print_json(stdout, &records)?;
            return Ok(EXIT_OK);
        }
        SolveMethod::Exact => {
            let limits = a.budgets.limits(SearchLimits::default().max_n);
            let found = if a.parallel {
                exact::max_k_rainbow_path_exact_parallel(&g, a.k, &limits)?
            } else {
                exact::max_k_rainbow_path_exact(&g, a.k, &limits)?
            };
            let report = found.into_report(&g, a.k)?;
            print_json(stdout, &report.to_record(&g))?;
            if report.exhaustive == Some(false) && !a.allow_partial {
                writeln!(stderr, "exact search stopped early; rerun with --allow-partial to accept")?;
                return Ok(EXIT_BUDGET);
            }
            return Ok(EXIT_OK);
        }
    };
    print_json(stdout, &reports[0].to_record(&g))?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let sweep = VerifySweep {
        bound: a.bound.clone(),
        family: a.family,
        n: parse_range(&a.n)?.into_iter().map(|v| v as usize).collect(),
        m: parse_range(&a.m)?.into_iter().map(|v| v as u32).collect(),
        k: parse_range(&a.k)?.into_iter().map(|v| v as u32).collect(),
        t: a.t,
        trials: a.trials,
        seed: a.seed,
        limits: a.budgets.limits(SearchLimits::default().max_n),
    };
    let rows = run_verify(&sweep)?;
    match a.format {
        Format::Json => print_json(stdout, &rows)?,
        Format::Csv => return Err(CliError::Input("csv output is only available for experiment".into())),
        Format::Text => {
            writeln!(stdout, "{:<28} {:>4} {:>10}     {:>14} pass", "instance", "k", "measured", "bound")?;
            for r in &rows {
                writeln!(
                    stdout,
                    "{:<28} {:>4} {:>10} {:>3} {:>14} {}",
                    r.instance,
                    r.k.map_or("-".to_string(), |k| k.to_string()),
                    r.measured,
                    r.relation,
                    format!("{}/{}", r.bound.num, r.bound.den),
                    if r.pass { "ok" } else { "FAIL" }
                )?;
            }
            let failed = rows.iter().filter(|r| !r.pass).count();
            writeln!(stdout, "{} rows, {} failed", rows.len(), failed)?;
        }
    }
    if rows.iter().any(|r| r.exhausted) {
        return Ok(EXIT_BUDGET);
    }
    Ok(if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_BOUND })
}

fn cmd_analyze(a: &AnalyzeArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let g = load_coloring(&a.input)?;
    let record: PathRecord = serde_json::from_str(&read_input(&a.path)?)?;
    let path = record.to_path(&g)?;
    if !paths::is_k_rainbow(&g, &path, 1) {
        return Err(CliError::Input("path is not rainbow".into()));
    }
    let epsilon = parse_rational(&a.epsilon)?;
    let t = a.t.unwrap_or(path.len());
    let set_a = paths::compute_a(&g, &path)?;
    let set_b = paths::compute_b(&g, &path)?;
    let set_r = paths::compute_r(&g, &path, a.a)?;
    let nice = paths::is_nice(&g, &path, t, epsilon, a.a)?;
    let cert = paths::maximality_certificate(&g, &path, 1)?;
    let on = path.membership(g.n());
    let gamma_start = paths::new_neighborhood(&g, &path, path.first());
    let gamma_end = paths::new_neighborhood(&g, &path, path.last());
    let off_path = |s: &std::collections::BTreeSet<usize>| s.iter().filter(|&&v| !on[v]).count();
    let n = g.n();
    let both = set_a.intersection(&set_b).count();
    let value = json!({
        "n": n,
        "t": t,
        "path": PathRecord::new(&g, &path, 1),
        "length": path.len(),
        "a": set_a,
        "b": set_b,
        "a_size": set_a.len(),
        "b_size": set_b.len(),
        "a_and_b_size": both,
        "r": set_r,
        "r_size": set_r.len(),
        "gamma_new_start": gamma_start.len(),
        "gamma_new_end": gamma_end.len(),
        "gamma_new_start_off_path": off_path(&gamma_start),
        "gamma_new_end_off_path": off_path(&gamma_end),
        "epsilon": RationalRepr::from(epsilon),
        "a_param": a.a,
        "nice": nice,
        "nice_threshold": RationalRepr::from(bounds::int(n) - bounds::int(t) - epsilon.recip()),
        "certificate": {
            "start": cert.start_condition,
            "end": cert.end_condition,
            "c_a": cert.c_a,
        },
        "a_at_least_n_minus_length": set_a.len() + path.len() >= n,
        "b_at_least_n_minus_length": set_b.len() + path.len() >= n,
    });
    print_json(stdout, &value)?;
    Ok(EXIT_OK)
}

fn cmd_latin(a: &LatinArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let text = read_input(&a.input)?;
    let limits = a.budgets.limits(latin::DEFAULT_ORDER_CAP);
    let load_square = || -> CliResult<LatinSquare> { Ok(latin::read_latin(&text)?) };
    match a.command {
        LatinCommand::Validate => {
            let sq = load_square()?;
            match sq.validate() {
                Ok(()) => {
                    writeln!(stdout, "ok")?;
                    Ok(EXIT_OK)
                }
                Err(v) => {
                    writeln!(stdout, "violation: {v}")?;
                    Ok(EXIT_INPUT)
                }
            }
        }
        LatinCommand::FromColoring => {
            let g = coloring::read_coloring(&text)?;
            let (relabelled, mapping) = g.relabel_palette();
            if mapping.iter().any(|(old, new)| old != new) {
                let pairs: Vec<String> = mapping.iter().map(|(o, n)| format!("{o}->{n}")).collect();
                writeln!(stderr, "palette relabelled: {}", pairs.join(" "))?;
            }
            let sq = latin::coloring_to_latin(&relabelled)?;
            write_output(&a.out, stdout, &latin::write_latin(&sq))?;
            Ok(EXIT_OK)
        }
        LatinCommand::ToColoring => {
            let g = latin::latin_to_coloring(&load_square()?)?;
            write_output(&a.out, stdout, &coloring::write_coloring(&g))?;
            Ok(EXIT_OK)
        }
        LatinCommand::Transversal => {
            let sq = checked_square(load_square()?)?;
            finish_search(latin::find_transversal(&sq, &limits)?, stdout, |t| {
                serde_json::to_value(t.to_record(&sq))
            })
        }
        LatinCommand::Matching => {
            let sq = checked_square(load_square()?)?;
            finish_search(latin::latin_to_bipartite_matching(&sq, &limits)?, stdout, |m| serde_json::to_value(m))
        }
        LatinCommand::Partial => {
            let sq = checked_square(load_square()?)?;
            let p = latin::max_partial_transversal(&sq, &limits)?;
            let mut v = serde_json::to_value(p.transversal.to_record(&sq))?;
            v["size"] = json!(p.transversal.len());
            v["exhaustive"] = json!(p.exhaustive);
            print_json(stdout, &v)?;
            Ok(if p.exhaustive { EXIT_OK } else { EXIT_BUDGET })
        }
        LatinCommand::Subgraph => {
            let sq = checked_square(load_square()?)?;
            match latin::find_transversal(&sq, &limits)? {
                Search::Found(t) => {
                    let sub = latin::transversal_to_rainbow_subgraph(&sq, &t)?;
                    print_json(stdout, &json!({ "transversal": t.to_record(&sq), "subgraph": sub }))?;
                    Ok(EXIT_OK)
                }
                Search::NotFound => {
                    writeln!(stdout, "none")?;
                    Ok(EXIT_OK)
                }
                Search::BudgetExhausted => Err(CliError::Budget("transversal search".into())),
            }
        }
    }
}

fn checked_square(sq: LatinSquare) -> CliResult<LatinSquare> {
    sq.validate().map_err(|v| CliError::Input(format!("not a Latin square: {v}")))?;
    Ok(sq)
}

fn finish_search<T>(
    found: Search<T>,
    stdout: &mut dyn Write,
    render: impl FnOnce(&T) -> serde_json::Result<serde_json::Value>,
) -> CliResult<i32> {
    match found {
        Search::Found(t) => {
            print_json(stdout, &render(&t)?)?;
            Ok(EXIT_OK)
        }
        Search::NotFound => {
            writeln!(stdout, "none")?;
            Ok(EXIT_OK)
        }
        Search::BudgetExhausted => Err(CliError::Budget("transversal search".into())),
    }
}

fn cmd_experiment(a: &ExperimentArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let spec: ExperimentSpec = serde_json::from_str(&read_input(&a.spec)?)
        .map_err(|e| CliError::Input(format!("experiment spec: {e}")))?;
    let rows = run_experiment(&spec)?;
    let format = a.format.unwrap_or(spec.format);
    let text = experiment::render(&rows, format)?;
    write_output(&a.out, stdout, &text)?;
    Ok(EXIT_OK)
}
