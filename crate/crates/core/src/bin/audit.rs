use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use repro_interval::audit::{emit_report, run_audit, Fault, InputData, Kernel, ReportFormat, TrialConfig};
use repro_interval::fp::{probe_rounding_support, RoundingBackend};
use repro_interval::io::{read_intervals, read_vector};
use repro_interval::Result;

/// Audits the reproducibility and enclosure guarantees of the library's kernels.
#[derive(Parser)]
#[command(name = "audit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit a summation kernel.
    Sum {
        #[arg(long, value_enum, default_value = "prerounded")]
        method: SumMethod,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Chunk or slice count.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1e8)]
        cond: f64,
        /// Summands file: hex-float text, binary (.bin), or intervals for --method interval.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Audit a matrix product.
    Matmul {
        #[arg(long, value_enum, default_value = "imm4")]
        algo: MatmulAlgo,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Audit the verified linear solver.
    Linsolve {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1e6)]
        cond: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Report whether the hardware rounding-mode backend is trustworthy here.
    Probe,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,8")]
    workers: Vec<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Inject a fault to check that violations are reported.
    #[arg(long, value_enum)]
    fault: Option<FaultArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SumMethod {
    Naive,
    Kahan,
    Chunked,
    Prerounded,
    Interval,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatmulAlgo {
    Gemm,
    Imm3,
    Imm4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Displace,
    Jitter,
}

fn backend_from_env() -> Result<RoundingBackend> {
    match std::env::var("AUDIT_BACKEND").as_deref() {
        Ok("fenv") => RoundingBackend::hardware(),
        Ok("eft") | Err(_) => Ok(RoundingBackend::eft()),
        Ok(other) => Err(repro_interval::Error::Parse(format!("AUDIT_BACKEND must be eft or fenv, got {other:?}"))),
    }
}

fn config(kernel: Kernel, n: usize, common: &Common) -> TrialConfig {
    let mut cfg = TrialConfig::new(kernel, n);
    cfg.trials = common.trials;
    cfg.seed = common.seed;
    cfg.workers = common.workers.clone();
    cfg.fault = common.fault.map(|f| match f {
        FaultArg::Displace => Fault::DisplaceIntervals,
        FaultArg::Jitter => Fault::Jitter,
    });
    cfg
}

fn run(cli: Cli) -> Result<bool> {
    let (cfg, common) = match &cli.command {
        Command::Probe => {
            let p = probe_rounding_support();
            println!("division_respects_rd_ru: {}", p.division_respects_rd_ru);
            println!("mode_survives_library_call: {}", p.mode_survives_library_call);
            println!("per_thread_isolation: {}", p.per_thread_isolation);
            println!("no_fenv: {}", p.no_fenv);
            let backend = RoundingBackend::from_probe(p).map(|b| b.kind()).ok();
            println!("hardware backend usable: {}", backend.is_some());
            return Ok(true);
        }
        Command::Sum { method, n, k, cond, input, common } => {
            let kernel = match method {
                SumMethod::Naive => Kernel::SumNaive,
                SumMethod::Kahan => Kernel::SumKahan,
                SumMethod::Chunked => Kernel::SumChunked,
                SumMethod::Prerounded => Kernel::SumPrerounded,
                SumMethod::Interval => Kernel::SumIntervals,
            };
            let mut cfg = config(kernel, *n, common);
            cfg.k = *k;
            cfg.cond = *cond;
            cfg.backend = backend_from_env()?;
            if let Some(path) = input {
                cfg.input = if kernel == Kernel::SumIntervals {
                    InputData::Intervals(read_intervals(path)?)
                } else {
                    InputData::Values(read_vector(path)?)
                };
            }
            (cfg, common)
        }
        Command::Matmul { algo, n, common } => {
            let kernel = match algo {
                MatmulAlgo::Gemm => Kernel::Gemm,
                MatmulAlgo::Imm3 => Kernel::Imm3,
                MatmulAlgo::Imm4 => Kernel::Imm4,
            };
            (config(kernel, *n, common), common)
        }
        Command::Linsolve { n, cond, common } => {
            let mut cfg = config(Kernel::LinSolve, *n, common);
            cfg.cond = *cond;
            (cfg, common)
        }
    };
    let report = run_audit(&cfg)?;
    let format = match common.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    let text = emit_report(&report, format)?;
    match &common.output {
        Some(path) => std::fs::write(path, &text).map_err(|source| repro_interval::Error::Io {
            path: Some(path.clone()),
            source,
        })?,
        None => println!("{text}"),
    }
    Ok(report.contract_held())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit status 2 is reserved for contract violations.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("audit: contract violated");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("audit: {e}");
            ExitCode::from(1)
        }
    }
}
