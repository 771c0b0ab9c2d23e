//! `entroute` subcommands.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage, input or config
//! error, 3 no spanning star exists.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use entroute_core::mosp::shortest_paths_from;
use entroute_core::netgen::{generate, GeneratorConfig, GraphModel};
use entroute_core::netmodel::validate_terminals;
use entroute_core::verify;
use entroute_core::{t_star_exact, MospOptions, OverlapPolicy, StarOptions};

use crate::format::{load_network, network_to_json};
use crate::report::{to_json, PathsReport, StarReport};
use crate::sweep::{run_sweep, write_csv, SweepConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "entroute", version, about = "Pareto-optimal GHZ distribution over noisy quantum networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random network file.
    Gen(GenArgs),
    /// Pareto fronts of paths from one source to every node.
    Paths(PathsArgs),
    /// Pareto-optimal stars connecting a set of terminals.
    Star(StarArgs),
    /// Run a batch experiment described by a TOML file and print CSV.
    Sweep(SweepArgs),
    /// Run the oracle and algebra verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Er,
    Rgg,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub avg_degree: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub sigma_min: Option<f64>,
    #[arg(long)]
    pub sigma_max: Option<f64>,
    #[arg(long)]
    pub f_trunc: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    pub network: PathBuf,
    #[arg(long)]
    pub source: String,
    /// Keep distinct paths with identical metrics.
    #[arg(long)]
    pub keep_ties: bool,
    /// Cap each node's front at this many paths (approximate).
    #[arg(long)]
    pub max_front: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StarArgs {
    pub network: PathBuf,
    /// Comma-separated terminal ids.
    #[arg(long, value_delimiter = ',', required = true)]
    pub terminals: Vec<String>,
    /// Drop stars that use a link in more than one branch.
    #[arg(long, conflicts_with = "keep_overlap")]
    pub disjoint: bool,
    /// Keep stars that reuse links (the default).
    #[arg(long)]
    pub keep_overlap: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub config: PathBuf,
    /// Worker threads.
    #[arg(long, env = "ENTROUTE_JOBS")]
    pub jobs: Option<usize>,
    /// Write 0 as runtime so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_CASES)]
    pub cases: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let model = match a.model {
        ModelArg::Er => GraphModel::ErdosRenyi,
        ModelArg::Rgg => GraphModel::RandomGeometric,
    };
    let mut cfg = GeneratorConfig::new(model, a.n, a.avg_degree, a.seed);
    let overrides = [
        (&mut cfg.p_min, a.p_min),
        (&mut cfg.t_min, a.t_min),
        (&mut cfg.t_max, a.t_max),
        (&mut cfg.sigma_min, a.sigma_min),
        (&mut cfg.sigma_max, a.sigma_max),
        (&mut cfg.f_trunc, a.f_trunc),
        (&mut cfg.alpha, a.alpha),
    ];
    for (field, value) in overrides {
        if let Some(v) = value {
            *field = v;
        }
    }
    let net = generate(&cfg).map_err(|e| usage(format!("invalid generator config: {e}")))?;
    emit(out, a.output.as_deref(), &network_to_json(&net))?;
    Ok(EXIT_OK)
}

fn cmd_paths(a: &PathsArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let net = load_network(&a.network).map_err(usage)?;
    let opts = MospOptions { keep_ties: a.keep_ties, front_cap: a.max_front };
    let fronts = shortest_paths_from(&net, &a.source, opts).ok_or_else(|| usage(format!("unknown source node {:?}", a.source)))?;
    emit(out, a.output.as_deref(), &to_json(&PathsReport::new(&net, &fronts)))?;
    Ok(EXIT_OK)
}

fn cmd_star(a: &StarArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Failure> {
    let net = load_network(&a.network).map_err(usage)?;
    let ts = validate_terminals(&net, &a.terminals).map_err(|e| usage(format!("invalid terminals: {e}")))?;
    let overlap = if a.disjoint { OverlapPolicy::Discard } else { OverlapPolicy::Keep };
    let search = t_star_exact(&net, &ts, StarOptions { overlap, ..StarOptions::default() });
    emit(out, a.output.as_deref(), &to_json(&StarReport::new(&net, ts.as_slice(), &search)))?;
    if search.is_feasible() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "no spanning star ({})", crate::report::status_name(search.status));
        Ok(EXIT_INFEASIBLE)
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let text = fs::read_to_string(&a.config).map_err(|e| usage(format!("cannot read {}: {e}", a.config.display())))?;
    let cfg = SweepConfig::parse(&text).map_err(usage)?;
    let result = run_sweep(&cfg, a.jobs.unwrap_or_else(default_jobs), !a.no_timing).map_err(usage)?;
    let mut buf = Vec::new();
    write_csv(&result, &mut buf).map_err(|e| usage(format!("cannot write CSV: {e}")))?;
    emit(out, a.output.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let mut reports = verify::run_all_with(entroute_core::ghz::ghz_fidelity, a.cases, a.seed);
    reports.push(verify::mosp_vs_brute(50, a.seed));
    let stars = verify::star_vs_brute(50, 3, a.seed);
    reports.push(stars.equivalence);
    reports.push(stars.front_membership);
    reports.push(stars.floors);
    let mut failed = false;
    let mut text = String::new();
    for r in &reports {
        let status = if r.passed() { "ok" } else { "FAILED" };
        text.push_str(&format!("{:<26} {:>6} cases {:>6} failures  {status}\n", r.name, r.cases, r.failures));
        if let Some(first) = &r.first_failure {
            text.push_str(&format!("    first failure: {first}\n"));
        }
        failed |= !r.passed();
    }
    emit(out, None, &text)?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Paths(a) => cmd_paths(a, out),
        Command::Star(a) => cmd_star(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
