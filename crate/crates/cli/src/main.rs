use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kerrsim::{run, Command, Result, RunError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "kerrsim", version, about = "Fiber Kerr shutter and heralded g2 scans")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Efficiency against pump delay
    DelayScan(RunArgs),
    /// Efficiency and noise against pump energy
    EnergyScan(RunArgs),
    /// Monte Carlo heralded g2 against pump energy
    G2Scan(RunArgs),
    /// Check a config without running it
    Validate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides output.directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides scan.seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(verb: Verb) -> Result<()> {
    let (command, args) = match verb {
        Verb::DelayScan(a) => (Some(Command::DelayScan), a),
        Verb::EnergyScan(a) => (Some(Command::EnergyScan), a),
        Verb::G2Scan(a) => (Some(Command::G2Scan), a),
        Verb::Validate(a) => (None, a),
    };
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(RunError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
    }
    let mut config = ScenarioConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.set_seed(seed);
    }

    let Some(command) = command else {
        let resolved = config.validate()?;
        println!(
            "ok: {} scan, {} points, walk-off {:.4} ps, n2 scale {:.6}",
            config.scan.kind(),
            config.scan.grid()?.len(),
            resolved.walkoff_ps,
            resolved.n2_scale
        );
        if let Some(mu) = resolved.mean_pairs {
            println!("mean pairs per pulse {mu:.6e}");
        }
        return Ok(());
    };

    let outcome = run(command, &config, args.out.as_deref())?;
    for out in &outcome.manifest.outputs {
        println!("wrote {} ({} rows)", outcome.directory.join(&out.file).display(), out.rows);
    }
    for (k, v) in &outcome.manifest.diagnostics {
        println!("  {k} = {v}");
    }
    if outcome.flagged > 0 {
        return Err(RunError::FlaggedRows(outcome.flagged));
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse().verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
