//! `pslr` command-line front end: problem generation, single solves,
//! benchmark sweeps and eigenvalue scatter output.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use pslr::bench::{
    emit_spectrum, run_bench, run_sweep, spectrum_matrix, write_csv, write_markdown, BenchConfig, BenchRow,
    InitialGuess, Method, Problem, PslrSide, SpectrumTarget, System, DEFAULT_SPECTRUM_CAP,
};
use pslr::linalg::mm_write;
use pslr::pslr::AtaSolver;
use pslr::Error;

const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "pslr", version, about = "Saddle-point solvers with power-series low-rank preconditioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a test problem as Matrix Market files.
    Gen(GenArgs),
    /// Run one solver on one problem and print the report.
    Solve(SolveArgs),
    /// Sweep methods, m, r_k and initial guesses; write CSV and Markdown.
    Bench(BenchArgs),
    /// Write the eigenvalues of a densified operator as `re,im` CSV.
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for every random quantity (right-hand sides, random blocks, random x0).
    #[arg(long, env = "PSLR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    maxit: usize,
    /// Apply reverse Cuthill-McKee ordering before solving.
    #[arg(long)]
    reorder: bool,
    /// How the PSLR/Pinv inverse enters GMRES: warm (initial guess only) or right.
    #[arg(long, default_value = "warm", value_parser = parse_side)]
    pslr_side: PslrSide,
    /// Solver for the AᵀA block: auto, ilu0, ic0, lu, cholesky.
    #[arg(long, default_value = "auto", value_parser = parse_ata)]
    ata_solver: AtaSolver,
    /// Shift of the HSS splitting iteration.
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    /// Accept m above 5.
    #[arg(long)]
    allow_large_m: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_parser = parse_problem)]
    problem: Problem,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "gmres", value_parser = parse_method)]
    method: Method,
    #[arg(long, env = "PSLR_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_parser = parse_problem)]
    problem: Problem,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long = "rk", default_value_t = 15)]
    r_k: usize,
    /// pre, zero, random or random:<seed>; defaults to pre for pslr_gmres/pinv and zero otherwise.
    #[arg(long, value_parser = parse_guess)]
    x0: Option<InitialGuess>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Problem; repeat the flag for several.
    #[arg(long, value_parser = parse_problem, required = true)]
    problem: Vec<Problem>,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',', value_parser = parse_method, required = true)]
    method: Vec<Method>,
    /// Range `a..b` (inclusive) or comma list.
    #[arg(long, default_value = "5", value_parser = parse_counts)]
    m: Counts,
    /// Range `a..b` (inclusive) or comma list.
    #[arg(long = "rk", default_value = "15", value_parser = parse_counts)]
    r_k: Counts,
    /// Comma-separated initial guesses; omitted means the per-method default.
    /// Guesses a method cannot use (pre without an approximate inverse,
    /// anything but zero for adi) are skipped for that method.
    #[arg(long, value_delimiter = ',', value_parser = parse_guess)]
    x0: Vec<InitialGuess>,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a Markdown table here.
    #[arg(long)]
    markdown: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, value_parser = parse_problem)]
    problem: Problem,
    /// matrix, schur-series or schur-pslr.
    #[arg(long, default_value = "matrix", value_parser = parse_target)]
    target: SpectrumTarget,
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long = "rk", default_value_t = 15)]
    r_k: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SPECTRUM_CAP)]
    cap: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone)]
struct Counts(Vec<usize>);

fn parse_counts(s: &str) -> Result<Counts, String> {
    let bad = |_| format!("invalid count list {s:?}");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(bad)?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(bad)?;
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        return Ok(Counts((a..=b).collect()));
    }
    s.split(',').map(|t| t.trim().parse().map_err(bad)).collect::<Result<_, _>>().map(Counts)
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_guess(s: &str) -> Result<InitialGuess, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_side(s: &str) -> Result<PslrSide, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ata(s: &str) -> Result<AtaSolver, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> Result<SpectrumTarget, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn config(&self, problem: Problem, method: Method, m: usize, r_k: usize, x0: Option<InitialGuess>) -> BenchConfig {
        BenchConfig {
            m,
            r_k,
            tol: self.tol,
            maxit: self.maxit,
            x0,
            reorder: self.reorder,
            seed: self.seed,
            side: self.pslr_side,
            ata_solver: self.ata_solver,
            alpha: self.alpha,
            allow_large_m: self.allow_large_m,
            ..BenchConfig::new(problem, method)
        }
    }
}

fn status_code(rows: &[BenchRow]) -> ExitCode {
    if rows.iter().all(BenchRow::converged) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NOT_CONVERGED)
    }
}

fn gen(args: GenArgs) -> pslr::Result<ExitCode> {
    fs::create_dir_all(&args.out)?;
    let inst = args.problem.instance(args.method, args.seed)?;
    match &inst.system {
        System::Saddle(s) => {
            mm_write(s.ata(), args.out.join("ata.mtx"))?;
            mm_write(s.b_block(), args.out.join("b.mtx"))?;
            mm_write(s.c_block(), args.out.join("c.mtx"))?;
        }
        System::Matrix(a) => mm_write(a, args.out.join("a.mtx"))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn solve(args: SolveArgs) -> pslr::Result<ExitCode> {
    let cfg = args.common.config(args.problem, args.method, args.m, args.r_k, args.x0);
    let row = run_bench(&cfg)?;
    let r = &row.report;
    let mut out = io::stdout().lock();
    writeln!(out, "problem: {}", row.problem)?;
    writeln!(out, "method: {}", row.method)?;
    if let (Some(m), Some(r_k)) = (row.m, row.r_k) {
        writeln!(out, "m: {m}")?;
        writeln!(out, "r_k: {r_k}")?;
    }
    writeln!(out, "x0: {}", row.x0)?;
    writeln!(out, "n-iter: {}", row.n_iter())?;
    writeln!(out, "error: {:.6e}", row.error())?;
    writeln!(out, "status: {:?}", r.status)?;
    writeln!(out, "o-t: {:.6}", r.time_order)?;
    writeln!(out, "p-t: {:.6}", r.time_precond)?;
    writeln!(out, "i-t: {:.6}", r.time_iterate)?;
    writeln!(out, "t-t: {:.6}", r.time_total)?;
    Ok(status_code(&[row]))
}

fn applies(method: Method, x0: Option<InitialGuess>) -> bool {
    match x0 {
        None => true,
        Some(InitialGuess::Pre) => method.has_pre_guess(),
        Some(_) if method == Method::Adi => x0 == Some(InitialGuess::Zero),
        Some(_) => true,
    }
}

fn bench(args: BenchArgs) -> pslr::Result<ExitCode> {
    let guesses: Vec<Option<InitialGuess>> =
        if args.x0.is_empty() { vec![None] } else { args.x0.iter().copied().map(Some).collect() };
    let mut cfgs = Vec::new();
    for problem in &args.problem {
        for &method in &args.method {
            // m and r_k only vary for the series-based methods
            let (ms, rks) = if method.uses_series() {
                (args.m.0.clone(), args.r_k.0.clone())
            } else {
                (vec![args.m.0[0]], vec![args.r_k.0[0]])
            };
            for &m in &ms {
                for &r_k in &rks {
                    for &x0 in guesses.iter().filter(|g| applies(method, **g)) {
                        cfgs.push(args.common.config(problem.clone(), method, m, r_k, x0));
                    }
                }
            }
        }
    }
    for cfg in &cfgs {
        cfg.validate()?;
    }

    let mut rows = Vec::with_capacity(cfgs.len());
    let mut failed = false;
    for (cfg, res) in cfgs.iter().zip(run_sweep(&cfgs, args.jobs)) {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => {
                eprintln!("error: {} / {}: {e}", cfg.problem, cfg.method);
                failed = true;
            }
        }
    }

    match &args.out {
        Some(path) => write_csv(&rows, BufWriter::new(File::create(path)?))?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if let Some(path) = &args.markdown {
        let mut w = BufWriter::new(File::create(path)?);
        write_markdown(&rows, &mut w)?;
        w.flush()?;
    }
    if failed {
        return Ok(ExitCode::FAILURE);
    }
    Ok(status_code(&rows))
}

fn spectrum(args: SpectrumArgs) -> pslr::Result<ExitCode> {
    let cfg = args.common.config(args.problem, Method::PslrGmres, args.m, args.r_k, None);
    cfg.validate()?;
    let dense = spectrum_matrix(&cfg, args.target, args.cap)?;
    emit_spectrum(&dense, &args.out, args.cap)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Spectrum(a) => spectrum(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}
