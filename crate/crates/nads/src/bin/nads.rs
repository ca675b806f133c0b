//! Thin command-line front end: parse arguments, load the config, dispatch
//! to the library, write the report and CSV artifacts, exit with the
//! documented code (0 positive evidence, 2 evidence absent, 1 error).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use nads::config::{load_config, Analysis};
use nads::run::run;

#[derive(Parser)]
#[command(
    name = "nads",
    about = "Witness searches and chaos-evidence pipelines for non-autonomous map sequences",
    version
)]
struct Cli {
    #[command(subcommand)]
    analysis: AnalysisCmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json and CSV artifacts; when omitted the
    /// report prints to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's rng_seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum AnalysisCmd {
    /// Compute a trajectory and dump it as CSV.
    Orbit(CommonArgs),
    /// Detect a periodic point and check orbit invariance.
    Periodic(CommonArgs),
    /// Estimate a sensitivity constant by witness search.
    Sensitivity(CommonArgs),
    /// Search for an n-point collective sensitivity witness.
    Collective(CommonArgs),
    /// Search for an n-point synchronous sensitivity witness.
    Synchronous(CommonArgs),
    /// Check that sensitivity survives k-th iterate systems.
    IterateCheck(CommonArgs),
    /// Grid-ball transitivity evidence scan.
    Transitivity(CommonArgs),
    /// Full certificate: transitivity + dense periodic points + invariant
    /// orbit pair, with constructed constants delta and eta.
    Banks(CommonArgs),
    /// Three-flag chaos evidence report.
    Devaney(CommonArgs),
    /// Constructive collective witness for a commutative linear system.
    LinearCollective(CommonArgs),
    /// Constructive synchronous witness for a commutative linear system.
    LinearSynchronous(CommonArgs),
}

impl AnalysisCmd {
    fn split(&self) -> (Analysis, &CommonArgs) {
        match self {
            AnalysisCmd::Orbit(a) => (Analysis::Orbit, a),
            AnalysisCmd::Periodic(a) => (Analysis::Periodic, a),
            AnalysisCmd::Sensitivity(a) => (Analysis::Sensitivity, a),
            AnalysisCmd::Collective(a) => (Analysis::Collective, a),
            AnalysisCmd::Synchronous(a) => (Analysis::Synchronous, a),
            AnalysisCmd::IterateCheck(a) => (Analysis::IterateCheck, a),
            AnalysisCmd::Transitivity(a) => (Analysis::Transitivity, a),
            AnalysisCmd::Banks(a) => (Analysis::Banks, a),
            AnalysisCmd::Devaney(a) => (Analysis::Devaney, a),
            AnalysisCmd::LinearCollective(a) => (Analysis::LinearCollective, a),
            AnalysisCmd::LinearSynchronous(a) => (Analysis::LinearSynchronous, a),
        }
    }
}

fn init_thread_pool() {
    if let Ok(threads) = std::env::var("NADS_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    match try_main() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn try_main() -> anyhow::Result<i32> {
    init_thread_pool();
    let cli = Cli::parse();
    let (analysis, args) = cli.analysis.split();
    let config = load_config(&args.config, Some(analysis), args.seed)
        .with_context(|| format!("loading {}", args.config.display()))?;
    let outcome = run(&config)?;

    let json = outcome.report.to_json_pretty()?;
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))?;
            std::fs::write(dir.join("report.json"), &json)?;
            for (name, contents) in &outcome.artifacts {
                std::fs::write(dir.join(name), contents)?;
            }
            println!(
                "{}: {} (exit {}), report in {}",
                analysis.name(),
                outcome.report.verdict,
                outcome.exit_code,
                dir.display()
            );
        }
        None => {
            print!("{json}");
        }
    }
    Ok(outcome.exit_code)
}
