//! Experiment runner for the determinant-identity and width-distribution
//! library: every verification and evaluation is a subcommand emitting a
//! CSV table plus a JSON manifest. Exit codes: 0 success, 1 numeric result
//! beyond tolerance (or a computation that failed mid-run), 2 bad
//! configuration.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{
    LppIdentityParams, LppTwParams, PoissonParams, TwTableParams, VerifyHankelParams,
    VerifyToeplitzParams, WidthParams, WidthProcess,
};
use config::{load_file, resolve_threads, CliError, CliResult, FileConfig};
use output::{persist, CommandOutcome};

const DEFAULT_SEED: u64 = 20260814;

#[derive(Parser)]
#[command(
    name = "detwidth",
    version,
    about = "Determinant identities, exact width distributions, and corner-growth experiments",
    after_help = "Configuration can also come from a TOML file (--config): one section per \
subcommand plus [common] for seed/threads/output. Command-line flags override file values. \
The DETWIDTH_THREADS environment variable caps the worker pool. Each run writes <output>.csv \
and <output>.manifest.json."
)]
struct Cli {
    /// TOML config file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output stem: artifacts land in <stem>.csv and <stem>.manifest.json.
    #[arg(long, global = true, value_name = "STEM")]
    output: Option<String>,
    /// Master seed; each subcommand draws from fixed substreams of it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores, capped by DETWIDTH_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct VerifyToeplitzArgs {
    /// Comma-separated circle symbols: constant[:c], exp_cosh:t, binom:T.
    #[arg(long, value_delimiter = ',')]
    symbols: Option<Vec<String>>,
    /// Smallest determinant order n.
    #[arg(long)]
    n_min: Option<usize>,
    /// Largest determinant order n; node counts m run over n-1..=2n+4.
    #[arg(long)]
    n_max: Option<usize>,
    /// Residual tolerance deciding the exit code.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Default)]
struct VerifyHankelArgs {
    /// Smallest determinant order n.
    #[arg(long)]
    n_min: Option<usize>,
    /// Largest determinant order n.
    #[arg(long)]
    n_max: Option<usize>,
    /// Lattice density: nodes sit on (k - s)/d.
    #[arg(long)]
    d: Option<f64>,
    /// Vertical separation of the paired integration lines.
    #[arg(long)]
    delta: Option<f64>,
    /// Gaussian decay rate (default: tied to n).
    #[arg(long)]
    a: Option<f64>,
    /// Comma-separated lattice shifts s.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    s_values: Option<Vec<f64>>,
    /// Residual tolerance deciding the exit code.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Default)]
struct WidthArgs {
    /// Ensemble: bb (Brownian bridges), ct (continuous-time walks), dt
    /// (discrete-time walks).
    #[arg(long)]
    process: Option<String>,
    /// Number of non-intersecting paths.
    #[arg(long)]
    n: Option<usize>,
    /// Duration T (ct: real > 0; dt: integer step count, width over 2T
    /// steps).
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated thresholds in native units (bb: real M; ct: integer
    /// m with CDF = P(width < m); dt: integer m with CDF = P(width < 2m)).
    #[arg(long, value_delimiter = ',')]
    m_values: Option<Vec<f64>>,
    /// Comma-separated scaled coordinates x; thresholds come from the
    /// ensemble's edge scaling law and a reference-law comparison column
    /// is added. Default grid: -2,-1,0,1,2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x_values: Option<Vec<f64>>,
    /// Offset-average quadrature order (defaults: bb 32, ct 16, dt exact).
    #[arg(long)]
    s_quad: Option<usize>,
}

#[derive(Args, Default)]
struct TwTableArgs {
    /// Left end of the x grid.
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    /// Right end of the x grid.
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    /// Grid step.
    #[arg(long)]
    step: Option<f64>,
    /// Quadrature order of the Airy-kernel route.
    #[arg(long)]
    order: Option<usize>,
    /// Quadrature order of the contour route.
    #[arg(long)]
    contour_order: Option<usize>,
    /// Cross-route gap tolerance deciding the exit code.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Default)]
struct LppTwArgs {
    /// Field side length (needs n >= 8).
    #[arg(long)]
    n: Option<usize>,
    /// Geometric weight parameter in (0,1).
    #[arg(long)]
    q: Option<f64>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Quadrature order of the reference CDF.
    #[arg(long)]
    tw_order: Option<usize>,
    /// KS-distance tolerance deciding the exit code.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Default)]
struct LppIdentityArgs {
    /// Aspect of the first field (alpha * n is floored to the lattice).
    #[arg(long)]
    alpha: Option<f64>,
    /// Aspect of the second field.
    #[arg(long)]
    beta: Option<f64>,
    /// Base size (needs n >= 8).
    #[arg(long)]
    n: Option<usize>,
    /// Geometric weight parameter in (0,1).
    #[arg(long)]
    q: Option<f64>,
    /// Monte-Carlo sample count for the two-field maximum.
    #[arg(long)]
    samples: Option<usize>,
    /// Scan half-width in scaled units (0 = corner only).
    #[arg(long)]
    tau_window: Option<f64>,
    /// Scan the whole shared antidiagonal instead of the window.
    #[arg(long)]
    full_scan: bool,
    /// Number of cut-decomposition audit fields.
    #[arg(long)]
    cut_trials: Option<usize>,
    /// Side length of the audit fields (default: alpha*n + beta*n).
    #[arg(long)]
    cut_size: Option<usize>,
    /// Quadrature order of the reference CDF.
    #[arg(long)]
    tw_order: Option<usize>,
    /// KS-distance tolerance deciding the exit code.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Default)]
struct PoissonArgs {
    /// Number of random (x, theta, period) triples.
    #[arg(long)]
    triples: Option<usize>,
    /// Identity-gap tolerance deciding the exit code.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the circle conversion identity over a symbol/size grid.
    VerifyToeplitz(VerifyToeplitzArgs),
    /// Check the line conversion identity on the shifted-lattice instance.
    VerifyHankel(VerifyHankelArgs),
    /// Tabulate an exact width CDF, optionally on a scaled grid.
    Width(WidthArgs),
    /// Tabulate the limiting edge CDF by two independent routes.
    TwTable(TwTableArgs),
    /// Monte-Carlo corner-growth fluctuations against the limiting law.
    LppTw(LppTwArgs),
    /// Two-field antidiagonal maximum plus the exact cut-identity audit.
    LppIdentity(LppIdentityArgs),
    /// Verify the Gaussian periodization identity at random parameters.
    PoissonCheck(PoissonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyToeplitz(_) => "verify-toeplitz",
            Command::VerifyHankel(_) => "verify-hankel",
            Command::Width(_) => "width",
            Command::TwTable(_) => "tw-table",
            Command::LppTw(_) => "lpp-tw",
            Command::LppIdentity(_) => "lpp-identity",
            Command::PoissonCheck(_) => "poisson-check",
        }
    }
}

fn run(cli: &Cli) -> CliResult<(CommandOutcome, String, u64)> {
    let file = match &cli.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.common.seed).unwrap_or(DEFAULT_SEED);
    let threads = resolve_threads(cli.threads.or(file.common.threads))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.effective)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size the thread pool: {e}")))?;
    let stem = cli
        .output
        .clone()
        .or_else(|| file.common.output.clone())
        .unwrap_or_else(|| format!("detwidth-{}", cli.command.name()));

    let started = Instant::now();
    let outcome = match &cli.command {
        Command::VerifyToeplitz(a) => {
            let s = &file.verify_toeplitz;
            commands::verify_toeplitz(&VerifyToeplitzParams {
                symbols: a.symbols.clone().or_else(|| s.symbols.clone()).unwrap_or_else(|| {
                    vec!["constant:1".into(), "exp_cosh:0.5".into(), "exp_cosh:2".into()]
                }),
                n_min: a.n_min.or(s.n_min).unwrap_or(2),
                n_max: a.n_max.or(s.n_max).unwrap_or(6),
                tol: a.tol.or(s.tol).unwrap_or(1e-7),
            })?
        }
        Command::VerifyHankel(a) => {
            let s = &file.verify_hankel;
            commands::verify_hankel(&VerifyHankelParams {
                n_min: a.n_min.or(s.n_min).unwrap_or(2),
                n_max: a.n_max.or(s.n_max).unwrap_or(4),
                d: a.d.or(s.d).unwrap_or(1.2),
                delta: a.delta.or(s.delta).unwrap_or(0.5),
                a: a.a.or(s.a),
                s_values: a
                    .s_values
                    .clone()
                    .or_else(|| s.s_values.clone())
                    .unwrap_or_else(|| vec![0.0, 0.3, 0.5]),
                tol: a.tol.or(s.tol).unwrap_or(1e-6),
            })?
        }
        Command::Width(a) => {
            let s = &file.width;
            let process_raw = a
                .process
                .clone()
                .or_else(|| s.process.clone())
                .ok_or_else(|| CliError::Config("width needs --process (bb | ct | dt)".into()))?;
            commands::width(&WidthParams {
                process: WidthProcess::parse(&process_raw)?,
                n: a
                    .n
                    .or(s.n)
                    .ok_or_else(|| CliError::Config("width needs --n (path count)".into()))?,
                t: a.t.or(s.t),
                m_values: a.m_values.clone().or_else(|| s.m_values.clone()),
                x_values: a.x_values.clone().or_else(|| s.x_values.clone()),
                s_quad: a.s_quad.or(s.s_quad),
            })?
        }
        Command::TwTable(a) => {
            let s = &file.tw_table;
            commands::tw_table(&TwTableParams {
                x_min: a.x_min.or(s.x_min).unwrap_or(-5.0),
                x_max: a.x_max.or(s.x_max).unwrap_or(2.0),
                step: a.step.or(s.step).unwrap_or(0.5),
                order: a.order.or(s.order).unwrap_or(40),
                contour_order: a
                    .contour_order
                    .or(s.contour_order)
                    .unwrap_or_else(|| detwidth::fredholm::airy::SoftEdgeParams::default().order),
                tol: a.tol.or(s.tol).unwrap_or(1e-4),
            })?
        }
        Command::LppTw(a) => {
            let s = &file.lpp_tw;
            commands::lpp_tw(&LppTwParams {
                n: a.n.or(s.n).unwrap_or(500),
                q: a.q.or(s.q).unwrap_or(0.25),
                samples: a.samples.or(s.samples).unwrap_or(10_000),
                tw_order: a.tw_order.or(s.tw_order).unwrap_or(40),
                tol: a.tol.or(s.tol).unwrap_or(0.05),
                seed,
            })?
        }
        Command::LppIdentity(a) => {
            let s = &file.lpp_identity;
            commands::lpp_identity(&LppIdentityParams {
                alpha: a.alpha.or(s.alpha).unwrap_or(1.0),
                beta: a.beta.or(s.beta).unwrap_or(1.0),
                n: a.n.or(s.n).unwrap_or(200),
                q: a.q.or(s.q).unwrap_or(0.25),
                samples: a.samples.or(s.samples).unwrap_or(10_000),
                tau_window: a.tau_window.or(s.tau_window).unwrap_or(3.0),
                full_scan: a.full_scan || s.full_scan.unwrap_or(false),
                cut_trials: a.cut_trials.or(s.cut_trials).unwrap_or(1000),
                cut_size: a.cut_size.or(s.cut_size),
                tw_order: a.tw_order.or(s.tw_order).unwrap_or(40),
                tol: a.tol.or(s.tol).unwrap_or(0.08),
                seed,
            })?
        }
        Command::PoissonCheck(a) => {
            let s = &file.poisson_check;
            commands::poisson(&PoissonParams {
                triples: a.triples.or(s.triples).unwrap_or(100),
                tol: a.tol.or(s.tol).unwrap_or(1e-10),
                seed,
            })?
        }
    };
    let wall = started.elapsed().as_secs_f64();
    let paths = persist(&stem, cli.command.name(), seed, &threads, wall, &outcome)?;
    println!("{}", outcome.status_line);
    println!(
        "wrote {} and {} in {wall:.2}s ({} threads)",
        paths.csv.display(),
        paths.manifest.display(),
        threads.effective
    );
    Ok((outcome, stem, seed))
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((outcome, _, _)) => {
            if !outcome.numeric_ok {
                eprintln!("numeric check failed (see the manifest's results block)");
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
