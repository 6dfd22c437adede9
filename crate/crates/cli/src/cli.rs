//! The `swcp` command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swcp_core::{
    brute_force_solve, generate, oracle::BRUTE_FORCE_LIMIT, solve_d1, swcp_solve, zielonka_solve, DegreeSpec,
    GenConfig, ParityGame, PartialSolution, Priority,
};
use thiserror::Error;

use crate::sweep::{run_sweep, to_csv, SweepKind, SweepSpec};
use crate::{config, pgsolver, plot, solution, threshold};

/// Environment variable giving the directory for relative output paths.
pub const OUT_DIR_VAR: &str = "SWCP_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verify(_) => 2,
            CliError::Io { .. } | CliError::Input { .. } => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "swcp", version, about = "Random parity games and the SWCP solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a random game and write it in PGSolver format.
    Generate(GenerateArgs),
    /// Solve a PGSolver game file.
    Solve(SolveArgs),
    /// Cross-check SWCP against the exact solvers on one game.
    Verify(VerifyArgs),
    /// Run an experiment sweep and write CSV plus an SVG chart.
    Sweep(SweepArgs),
    /// Print the sufficient-degree table.
    Threshold(ThresholdArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// key = value file; flags given alongside it override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Integer, `ln`, `sqrt` or a fraction such as `0.5n`.
    #[arg(long)]
    pub degree: Option<DegreeSpec>,
    #[arg(long)]
    pub priorities: Option<Priority>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub self_loops: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Swcp,
    Zielonka,
    Brute,
    D1,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Swcp)]
    pub algorithm: Algorithm,
    /// Solution file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub kind: SweepKind,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid_n: Vec<usize>,
    /// Comma-separated degrees or degree functions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid_d: Vec<DegreeSpec>,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub priorities: Priority,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV path; `sweep_<kind>.csv` when absent. The chart goes next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 64)]
    pub max_d: u64,
    /// Print CSV instead of the aligned table.
    #[arg(long)]
    pub csv: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` and runs it. Help and version requests exit 0, other
/// argument errors exit 1.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swcp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Threshold(a) => cmd_threshold(a),
    }
}

/// Relative paths land under `$SWCP_OUT_DIR` when it is set.
pub fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(&output_path(p), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_game(path: &Path) -> Result<ParityGame, CliError> {
    pgsolver::parse_game(&read(path)?).map_err(|e| CliError::Input { path: path.to_path_buf(), message: e.to_string() })
}

pub fn gen_config(a: &GenerateArgs) -> Result<GenConfig, CliError> {
    let mut cfg = match &a.config {
        Some(path) => config::parse_config(&read(path)?)
            .map_err(|e| CliError::Input { path: path.clone(), message: e.to_string() })?,
        None => GenConfig::new(a.nodes.ok_or_else(|| CliError::Usage("--nodes or --config is required".into()))?, 2, 0),
    };
    if let Some(n) = a.nodes {
        cfg.node_count = n;
    }
    if let Some(d) = a.degree {
        cfg.degree = d;
    }
    if let Some(c) = a.priorities {
        cfg.priority_count = c;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.allow_self_loops |= a.self_loops;
    Ok(cfg)
}

fn cmd_generate(a: GenerateArgs) -> Result<(), CliError> {
    let cfg = gen_config(&a)?;
    let game = generate(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(a.out.as_deref(), &pgsolver::write_game(&game))
}

fn solve_with(game: &ParityGame, algorithm: Algorithm) -> Result<PartialSolution, CliError> {
    let precondition = |e: swcp_core::OracleError| CliError::Usage(e.to_string());
    Ok(match algorithm {
        Algorithm::Swcp => swcp_solve(game),
        Algorithm::Zielonka => zielonka_solve(game).map_err(precondition)?.to_partial(),
        Algorithm::Brute => brute_force_solve(game).map_err(precondition)?.to_partial(),
        Algorithm::D1 => solve_d1(game).map_err(precondition)?.to_partial(),
    })
}

fn cmd_solve(a: SolveArgs) -> Result<(), CliError> {
    let game = load_game(&a.input)?;
    let start = Instant::now();
    let sol = solve_with(&game, a.algorithm)?;
    let elapsed = start.elapsed();
    emit(a.out.as_deref(), &solution::write_solution(&sol))?;
    let status = if sol.is_fully_solved() { "complete" } else { "incomplete" };
    eprintln!(
        "{:?}: decided {}/{} ({:.4}) in {:.3} ms, {status}",
        a.algorithm,
        sol.decided_count(),
        sol.node_count(),
        sol.decided_fraction(),
        elapsed.as_secs_f64() * 1e3
    );
    Ok(())
}

/// Disagreements between SWCP's decided nodes and the exact solvers.
pub fn verify_game(game: &ParityGame) -> Result<Vec<String>, CliError> {
    let mut report = Vec::new();
    let swcp = swcp_solve(game);
    let truth = zielonka_solve(game).map_err(|e| CliError::Usage(e.to_string()))?;
    report.push(format!("swcp decided {}/{}", swcp.decided_count(), game.node_count()));
    let mut failures = Vec::new();
    if !truth.is_consistent(game) {
        failures.push("zielonka strategy inconsistent".to_string());
    }
    for v in game.nodes() {
        if swcp.value(v).is_some_and(|w| w != truth.winner(v)) {
            failures.push(format!("node {v}: swcp says {}, zielonka says {}", swcp.value(v).unwrap(), truth.winner(v)));
        }
    }
    match brute_force_solve(game) {
        Ok(brute) => {
            report.push("brute force checked".into());
            if brute.winners() != truth.winners() {
                failures.push("brute force disagrees with zielonka".into());
            }
        }
        Err(_) => report.push(format!("brute force skipped (over {BRUTE_FORCE_LIMIT} strategy pairs)")),
    }
    if game.regular_degree() == Some(1) {
        report.push("d1 solver checked".into());
        match solve_d1(game) {
            Ok(d1) if d1.winners() == truth.winners() => {}
            _ => failures.push("d1 solver disagrees with zielonka".into()),
        }
    }
    if failures.is_empty() {
        report.push("agreement on all decided nodes".into());
        Ok(report)
    } else {
        Err(CliError::Verify(failures.join("; ")))
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let game = load_game(&a.input)?;
    for line in verify_game(&game)? {
        println!("{line}");
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), CliError> {
    let spec = SweepSpec::new(a.kind, a.grid_n, a.grid_d, a.trials, a.seed).with_priorities(a.priorities);
    let workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let cells = run_sweep(&spec, workers).map_err(|e| CliError::Usage(e.to_string()))?;
    let csv_path = output_path(&a.out.unwrap_or_else(|| PathBuf::from(format!("sweep_{}.csv", spec.kind))));
    write(&csv_path, &to_csv(&spec, &cells))?;
    let svg_path = csv_path.with_extension("svg");
    write(&svg_path, &plot::sweep_svg(spec.kind, &cells))?;
    println!("{} cells -> {} and {}", cells.len(), csv_path.display(), svg_path.display());
    Ok(())
}

fn cmd_threshold(a: ThresholdArgs) -> Result<(), CliError> {
    let rows = threshold::rows(a.max_d);
    let text = if a.csv { threshold::table_csv(&rows) } else { threshold::table_text(&rows) };
    emit(a.out.as_deref(), &text)?;
    if !a.csv {
        let min = rows.iter().find(|r| r.condition_holds).map(|r| r.degree);
        let min_closed = rows.iter().find(|r| r.closed_form_holds()).map(|r| r.degree);
        let show = |d: Option<u64>| d.map_or("none".to_string(), |d| d.to_string());
        eprintln!("minimal sufficient degree: {} (closed form: {})", show(min), show(min_closed));
    }
    Ok(())
}
