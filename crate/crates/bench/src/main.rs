use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cev_bench::{emit_error_surface, run_sweep, write_sweep_csv, BenchError, ExponentArg, SweepConfig};
use cev_core::{price, Engine, EngineConfig, PriceQuote, PricingRequest};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cevbench",
    version,
    about = "Price CEV calls, run sweeps and build error surfaces"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    quote: QuoteArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a parameter sweep from a JSON config and write the CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the config's worker count.
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the config's Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        exponent_mode: Option<ModeArg>,
        /// Also write the error surface next to the sweep.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Turn a sweep CSV into a long-format error surface.
    Surface {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct QuoteArgs {
    #[arg(long)]
    engine: Option<Engine>,
    #[arg(long, default_value_t = 100.0)]
    spot: f64,
    #[arg(long, default_value_t = 110.0)]
    strike: f64,
    #[arg(long, default_value_t = 0.05)]
    rate: f64,
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    /// Elasticity; 2 is geometric Brownian motion.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    maturity: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    warmup: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Consistent)]
    exponent_mode: ModeArg,
    /// Monte Carlo path count.
    #[arg(long)]
    paths: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Human,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Consistent,
    Literal,
}

impl From<ModeArg> for ExponentArg {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Consistent => ExponentArg::Consistent,
            ModeArg::Literal => ExponentArg::Literal,
        }
    }
}

fn set_global_jobs(jobs: Option<usize>) -> Result<(), BenchError> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(BenchError::Config("jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| BenchError::Config(e.to_string()))?;
    }
    Ok(())
}

fn print_quote(q: &PriceQuote, median_ns: u64, format: Format) -> Result<(), BenchError> {
    match format {
        Format::Human => {
            let diag = if q.diagnostics.is_empty() {
                String::new()
            } else {
                format!(" [{}]", q.diagnostics)
            };
            println!(
                "{} price={} time={:.3}ms{}",
                q.engine,
                q.price,
                median_ns as f64 / 1e6,
                diag
            );
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record([
                q.engine.to_string(),
                q.price.to_string(),
                median_ns.to_string(),
                q.diagnostics.to_string(),
            ])?;
            w.flush().map_err(|e| BenchError::io("stdout", e))?;
        }
    }
    Ok(())
}

fn run_quote(args: &QuoteArgs) -> Result<(), BenchError> {
    let engine = args
        .engine
        .ok_or_else(|| BenchError::Config("--engine is required (bs, semiclassical, ncx2, mc)".into()))?;
    if args.reps <= args.warmup {
        return Err(BenchError::Config("--reps must exceed --warmup".into()));
    }
    set_global_jobs(args.jobs)?;
    let mut cfg = EngineConfig::default();
    cfg.semiclassical.exponent_mode = ExponentArg::from(args.exponent_mode).into();
    if let Some(seed) = args.seed {
        cfg.mc.seed = seed;
    }
    if let Some(paths) = args.paths {
        cfg.mc.paths = paths;
    }
    let req = PricingRequest::call(args.spot, args.strike, args.rate, args.sigma, args.alpha, args.maturity);
    let (q, stats) = cev_bench::measure(args.reps, args.warmup, || {
        price(&req, engine, &cfg).map(|q| {
            let ns = q.wall_time;
            (q, ns)
        })
    })?;
    print_quote(&q, stats.median, args.format)
}

fn run_sweep_command(
    config: &Path,
    out: &Path,
    jobs: Option<usize>,
    seed: Option<u64>,
    mode: Option<ModeArg>,
    surface: Option<&Path>,
) -> Result<(), BenchError> {
    let mut cfg = SweepConfig::load(config)?;
    if jobs.is_some() {
        cfg.jobs = jobs;
    }
    if seed.is_some() {
        cfg.seed = seed;
    }
    if let Some(m) = mode {
        cfg.exponent_mode = Some(m.into());
    }
    let report = run_sweep(&cfg)?;
    let file = std::fs::File::create(out).map_err(|e| BenchError::io(out.display().to_string(), e))?;
    write_sweep_csv(&report, file)?;
    print!("{}", report.summary());
    if let Some(path) = surface {
        emit_error_surface(out, path, None)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        None => run_quote(&cli.quote),
        Some(Command::Sweep {
            config,
            out,
            jobs,
            seed,
            exponent_mode,
            surface,
        }) => run_sweep_command(config, out, *jobs, *seed, *exponent_mode, surface.as_deref()),
        Some(Command::Surface { input, out, svg }) => emit_error_surface(input, out, svg.as_deref()).map(|_| ()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
