//! `ymgap`: verification runs for the sharp trilinear inequality, the basic
//! instanton, and the L2 gap threshold.
//!
//! Every subcommand emits a single JSON report (stdout or `--out`) and
//! exits 0 only if all contracted checks pass; assertion failures exit 1
//! with the failing check named in the report, usage errors exit 2.
//! Reports are byte-reproducible for a fixed configuration regardless of
//! `--workers`.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ymgap_core::{AlgebraContext, Duality};

#[derive(Parser)]
#[command(
    name = "ymgap",
    version,
    about = "Numerical verification of sharp trilinear inequalities, the basic instanton, \
             and L2 gap thresholds on flat R^4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DualityArg {
    Sd,
    Asd,
}

impl From<DualityArg> for Duality {
    fn from(d: DualityArg) -> Self {
        match d {
            DualityArg::Sd => Duality::SelfDual,
            DualityArg::Asd => Duality::AntiSelfDual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SampleDualityArg {
    Sd,
    Asd,
    Both,
}

#[derive(Args)]
struct CommonOpts {
    /// Matrix dimension N of so(N)
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Inner-product scale c in <A, B> = -c tr(AB)
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Master seed for all derived random streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per core); output does not depend on this
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the JSON report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the basic instanton: anti-self-duality, the finite-difference
    /// curvature oracle, the Yang-Mills residual, and the pointwise
    /// quaternion structure
    VerifyInstanton {
        #[command(flatten)]
        common: CommonOpts,
        /// Finite-difference stencil width
        #[arg(long, default_value_t = 1e-3)]
        grid_h: f64,
        /// Tolerance for the pointwise structure magnitudes
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Margin statistics of the sharp trilinear inequality over random
    /// (anti-)self-dual forms
    Lemma3Sample {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of random forms
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Which duality eigenspace to sample
        #[arg(long, value_enum, default_value_t = SampleDualityArg::Both)]
        duality: SampleDualityArg,
    },
    /// Maximize |T(w)| over unit-norm (anti-)self-dual forms and classify
    /// the maximizer
    Extremize {
        #[command(flatten)]
        common: CommonOpts,
        /// Independent restarts
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        /// Iteration cap per restart
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// Duality eigenspace to search
        #[arg(long, value_enum, default_value_t = DualityArg::Sd)]
        duality: DualityArg,
        /// Write per-restart convergence traces as CSV rows
        /// (restart, iter, ratio, grad_norm)
        #[arg(long)]
        trace_csv: Option<PathBuf>,
    },
    /// Instanton energy by radial and 4D grid quadrature, against the gap
    /// threshold
    Energy {
        #[command(flatten)]
        common: CommonOpts,
        /// Half-width R of the grid quadrature box [-R, R]^4
        #[arg(long, default_value_t = 20.0)]
        truncation_r: f64,
        /// Relative tolerance for the radial quadrature
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Residual table of the flat-space equality PDE over a radius grid
    Bochner {
        #[command(flatten)]
        common: CommonOpts,
        /// Finite-difference stencil width
        #[arg(long, default_value_t = 1e-3)]
        grid_h: f64,
    },
    /// Full gap report: the sharpness chain of the basic instanton
    GapReport {
        #[command(flatten)]
        common: CommonOpts,
        /// Step recorded in the report config
        #[arg(long, default_value_t = 1e-3)]
        grid_h: f64,
        /// Relative tolerance for the equality-chain checks
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn with_workers<T>(workers: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    if workers == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool construction cannot fail")
            .install(f)
    }
}

/// Serializes the finished document and hands back its pass/fail state.
fn emit<C: Serialize, R: Serialize>(
    doc: &report::Document<C, R>,
    out: Option<&PathBuf>,
) -> Result<bool, String> {
    let json = doc.to_json();
    match out {
        None => print!("{json}"),
        Some(path) => std::fs::write(path, json)
            .map_err(|e| format!("cannot write report to {}: {e}", path.display()))?,
    }
    Ok(doc.pass)
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyInstanton {
            common,
            grid_h,
            tol,
        } => {
            if grid_h.is_nan() || grid_h <= 0.0 || tol.is_nan() || tol <= 0.0 {
                return Err("grid-h and tol must be positive".to_string());
            }
            let ctx = context(&common)?;
            let cfg = commands::VerifyConfig {
                n: common.n,
                c: common.c,
                seed: common.seed,
                grid_h,
                tol,
            };
            let doc = with_workers(common.workers, || commands::verify_instanton(ctx, cfg))
                .map_err(|e| e.to_string())?;
            emit(&doc, common.out.as_ref())
        }
        Command::Lemma3Sample {
            common,
            samples,
            duality,
        } => {
            let ctx = context(&common)?;
            let cfg = commands::SampleConfig {
                n: common.n,
                c: common.c,
                seed: common.seed,
                samples,
                duality: match duality {
                    SampleDualityArg::Sd => commands::SampleDuality::Sd,
                    SampleDualityArg::Asd => commands::SampleDuality::Asd,
                    SampleDualityArg::Both => commands::SampleDuality::Both,
                },
            };
            let doc = with_workers(common.workers, || commands::lemma3_sample(ctx, cfg))
                .map_err(|e| e.to_string())?;
            emit(&doc, common.out.as_ref())
        }
        Command::Extremize {
            common,
            restarts,
            max_iters,
            duality,
            trace_csv,
        } => {
            let ctx = context(&common)?;
            let cfg = commands::ExtremizeConfig {
                n: common.n,
                c: common.c,
                seed: common.seed,
                restarts,
                max_iters,
                duality: match duality {
                    DualityArg::Sd => "sd",
                    DualityArg::Asd => "asd",
                },
            };
            let doc = with_workers(common.workers, || {
                commands::extremize(ctx, cfg, duality.into(), trace_csv.as_deref())
            })
            .map_err(|e| e.to_string())?;
            emit(&doc, common.out.as_ref())
        }
        Command::Energy {
            common,
            truncation_r,
            tol,
        } => {
            if truncation_r.is_nan() || truncation_r <= 0.0 || tol.is_nan() || tol <= 0.0 {
                return Err("truncation-r and tol must be positive".to_string());
            }
            let ctx = context(&common)?;
            let cfg = commands::EnergyConfig {
                n: common.n,
                c: common.c,
                truncation_r,
                tol,
                // The graded panel family resolves the box integral to the
                // tail-bound scale; refining past 1e-4 relative buys nothing.
                grid_tol: tol.max(1e-4),
            };
            let doc = with_workers(common.workers, || commands::energy(ctx, cfg))
                .map_err(|e| e.to_string())?;
            emit(&doc, common.out.as_ref())
        }
        Command::Bochner { common, grid_h } => {
            if grid_h.is_nan() || grid_h <= 0.0 {
                return Err("grid-h must be positive".to_string());
            }
            let ctx = context(&common)?;
            let cfg = commands::BochnerConfig {
                n: common.n,
                c: common.c,
                grid_h,
            };
            let doc = commands::bochner(ctx, cfg).map_err(|e| e.to_string())?;
            emit(&doc, common.out.as_ref())
        }
        Command::GapReport {
            common,
            grid_h,
            tol,
        } => {
            let ctx = context(&common)?;
            let cfg = commands::GapConfig {
                n: common.n,
                c: common.c,
                seed: common.seed,
                grid_h,
                tol,
            };
            let doc = commands::gap_report(ctx, cfg).map_err(|e| e.to_string())?;
            emit(&doc, common.out.as_ref())
        }
    }
}

fn context(common: &CommonOpts) -> Result<AlgebraContext, String> {
    AlgebraContext::new(common.n, common.c).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
