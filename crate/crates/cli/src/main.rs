//! Batch front-end: scenario ingestion, pipeline execution, report and
//! CSV emission, convergence studies, and the self-check suite.

mod report;
mod scenario;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use conic_qm::linalg::{vec_norm, vec_sub};
use conic_qm::selfcheck::{run_all_with, Tolerances};
use conic_qm::{q_numeric, q_spectral, Error};

use report::build_report;
use scenario::{RouteSpec, ScenarioConfig};

#[derive(Parser)]
#[command(name = "conic-qm", version, about = "Cone-based quantum measurement pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Spectral,
    Numeric,
    Both,
}

impl From<RouteArg> for RouteSpec {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Spectral => RouteSpec::Spectral,
            RouteArg::Numeric => RouteSpec::Numeric,
            RouteArg::Both => RouteSpec::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute scenarios and emit JSON reports
    Run {
        /// Scenario JSON files
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Report file (single scenario) or directory (several)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario's route
        #[arg(long)]
        route: Option<RouteArg>,
        /// Override the scenario's quadrature node count
        #[arg(long)]
        nodes: Option<usize>,
        /// Include wall time in reports (breaks byte-identical output)
        #[arg(long)]
        timing: bool,
    },
    /// Sweep the scenario's ε list and tabulate ‖Q_ε x − Qx‖
    Converge {
        scenario: PathBuf,
        /// CSV output path (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario's quadrature node count
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Run the fixed-seed invariant suites of every module
    Selfcheck {
        /// Offset added to every suite's fixture seeds
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Exit codes: 0 success, 2 parse/validation, 3 numeric range, 4 invariant.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Range(_) => 3,
        Error::Invariant(_) => 4,
        _ => 2,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn load_scenario(path: &Path) -> Result<ScenarioConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Validation(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

/// Write-temp-then-rename so readers never observe a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::Validation(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn run_one(
    path: &Path,
    out: Option<&Path>,
    route: Option<RouteSpec>,
    nodes: Option<usize>,
    timing: bool,
) -> Result<(), Error> {
    let mut config = load_scenario(path)?;
    if let Some(r) = route {
        config.route = r;
    }
    if let Some(n) = nodes {
        config.nodes = n;
    }
    let report = build_report(&config, timing)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Invariant(format!("report serialization: {e}")))?;
    match out {
        Some(p) => write_atomic(p, &(json + "\n")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn cmd_run(
    scenarios: &[PathBuf],
    out: Option<&Path>,
    route: Option<RouteSpec>,
    nodes: Option<usize>,
    timing: bool,
) -> Result<(), Error> {
    if scenarios.len() == 1 {
        return run_one(&scenarios[0], out, route, nodes, timing);
    }
    // several scenarios: --out names a directory, one report per input
    let out_for = |p: &Path| -> Option<PathBuf> {
        out.map(|dir| {
            let stem = p.file_stem().unwrap_or_default().to_string_lossy();
            dir.join(format!("{stem}.report.json"))
        })
    };
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Validation(format!("{}: {e}", dir.display())))?;
    }
    let results: Vec<Result<(), Error>>;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        results = scenarios
            .par_iter()
            .map(|p| run_one(p, out_for(p).as_deref(), route, nodes, timing))
            .collect();
    }
    #[cfg(not(feature = "parallel"))]
    {
        results = scenarios
            .iter()
            .map(|p| run_one(p, out_for(p).as_deref(), route, nodes, timing))
            .collect();
    }
    results.into_iter().collect()
}

fn cmd_converge(path: &Path, out: Option<&Path>, nodes: Option<usize>) -> Result<(), Error> {
    let mut config = load_scenario(path)?;
    if let Some(n) = nodes {
        config.nodes = n;
    }
    let resolved = config.resolve()?;
    let reference = q_spectral(&resolved.quantity, &resolved.state)?;
    let mut csv = String::from("epsilon,error_norm,nodes,wall_time_ms\n");
    for &eps in &resolved.epsilons {
        let start = Instant::now();
        let y = q_numeric(&resolved.quantity, &resolved.state, eps, resolved.nodes)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let err = vec_norm(&vec_sub(y.coords(), reference.coords()));
        writeln!(csv, "{eps},{err},{},{ms}", resolved.nodes)
            .expect("string write is infallible");
    }
    match out {
        Some(p) => write_atomic(p, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_selfcheck(seed: u64) -> Result<(), Error> {
    let tol = Tolerances { seed_offset: seed, ..Default::default() };
    let results = run_all_with(&tol);
    let mut failed = Vec::new();
    for c in &results {
        let status = if c.passed() { "ok  " } else { "FAIL" };
        println!("{status} {:<40} {:>4} cases, {} failures — {}", c.name, c.cases, c.failures, c.detail);
        if !c.passed() {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        println!("all {} suites passed", results.len());
        Ok(())
    } else {
        Err(Error::Invariant(format!("failed suites: {}", failed.join(", "))))
    }
}

fn init_thread_pool() {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("CONIC_QM_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        } else {
            eprintln!("warning: ignoring unparsable CONIC_QM_THREADS={v:?}");
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenarios, out, route, nodes, timing } => cmd_run(
            scenarios,
            out.as_deref(),
            route.map(RouteSpec::from),
            *nodes,
            *timing,
        ),
        Command::Converge { scenario, out, nodes } => {
            cmd_converge(scenario, out.as_deref(), *nodes)
        }
        Command::Selfcheck { seed } => cmd_selfcheck(*seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
