use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cdt_topo::bench::{
    checkerboard_metric, problem_cantilever, problem_mbb, write_density_csv, write_density_image, write_history_csv,
};
use cdt_topo::knapsack::CDInnerConfig;
use cdt_topo::{run_cdt_with, run_simp_with, CDTConfig, CostWeighting, HistoryEntry, RunResult, SIMPConfig};

#[derive(Parser)]
#[command(name = "cdt-topo", version, about = "Binary topology optimization benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one benchmark and write the design, history and densities.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Mbb,
    Cantilever,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cdt,
    Simp,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "mbb")]
    problem: ProblemKind,
    #[arg(long, value_enum, default_value = "cdt")]
    method: Method,
    #[arg(long, default_value_t = 180)]
    nx: usize,
    #[arg(long, default_value_t = 60)]
    ny: usize,
    #[arg(long, default_value_t = 0.6)]
    volfrac: f64,
    /// Perturbation parameter of the knapsack dual (cdt).
    #[arg(long, default_value_t = 100.0)]
    beta: f64,
    /// Volume decrease factor per outer step (cdt).
    #[arg(long, default_value_t = 0.975)]
    mu: f64,
    /// Use full-stiffness energies for void elements too (cdt).
    #[arg(long)]
    solid_costs: bool,
    /// Penalization exponent (simp).
    #[arg(long, default_value_t = 3.0)]
    penal: f64,
    /// Sensitivity filter radius, 0 for none (simp).
    #[arg(long, default_value_t = 1.5)]
    rmin: f64,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Log every K-th iteration; 0 disables progress output.
    #[arg(long, default_value_t = 1)]
    log_every: usize,
}

impl ProblemKind {
    fn name(self) -> &'static str {
        match self {
            ProblemKind::Mbb => "mbb",
            ProblemKind::Cantilever => "cantilever",
        }
    }
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Cdt => "cdt",
            Method::Simp => "simp",
        }
    }
}

fn write_outputs(dir: &Path, stem: &str, result: &RunResult, mesh: &cdt_topo::fem::Mesh) -> cdt_topo::Result<()> {
    fs::create_dir_all(dir)?;
    let rho = result.final_rho.as_slice();
    write_density_image(rho, mesh, dir.join(format!("{stem}.pgm")))?;
    write_history_csv(result, dir.join(format!("{stem}_history.csv")))?;
    write_density_csv(rho, mesh, dir.join(format!("{stem}_density.csv")))?;
    Ok(())
}

fn run(args: &RunArgs) -> cdt_topo::Result<bool> {
    let problem = match args.problem {
        ProblemKind::Mbb => problem_mbb(args.nx, args.ny, args.volfrac)?,
        ProblemKind::Cantilever => problem_cantilever(args.nx, args.ny, args.volfrac)?,
    };
    let every = args.log_every;
    let progress = |h: &HistoryEntry| {
        if every > 0 && h.iter % every == 0 {
            log::info!(
                "iter {:>4}  compliance {:.6}  volume {:.2}  grayness {:.4}{}",
                h.iter,
                h.compliance,
                h.volume,
                h.grayness,
                if h.flagged { "  (rounded)" } else { "" }
            );
        }
    };

    let result = match args.method {
        Method::Cdt => {
            let defaults = CDTConfig::default();
            let config = CDTConfig {
                inner: CDInnerConfig {
                    beta: args.beta,
                    ..Default::default()
                },
                mu: args.mu,
                costs: if args.solid_costs {
                    CostWeighting::Solid
                } else {
                    CostWeighting::Effective
                },
                max_outer_iters: args.max_iters.unwrap_or(defaults.max_outer_iters),
                ..defaults
            };
            run_cdt_with(&problem, &config, progress)?
        }
        Method::Simp => {
            let defaults = SIMPConfig::default();
            let config = SIMPConfig {
                penal: args.penal,
                rmin: args.rmin,
                max_iters: args.max_iters.unwrap_or(defaults.max_iters),
                ..defaults
            };
            run_simp_with(&problem, &config, progress)?
        }
    };

    let stem = format!("{}_{}", args.method.name(), args.problem.name());
    write_outputs(&args.out, &stem, &result, &problem.mesh)?;
    let last = result.history.last().expect("history is never empty");
    println!(
        "{} {} {} {} {:.6} {} {:.6} {:.6}",
        args.method.name(),
        args.problem.name(),
        args.nx,
        args.ny,
        last.compliance,
        result.outer_iterations,
        last.grayness,
        checkerboard_metric(&problem.mesh, result.final_rho.as_slice())
    );
    Ok(result.converged)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Run(args) => match run(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(2),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
    }
}
