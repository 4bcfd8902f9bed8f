use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// First-passage laws of dependent spectrally positive Lévy processes.
#[derive(Debug, Parser)]
#[command(name = "levyruin", version)]
struct Args {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. `--set model.drift=5` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed; overrides `params.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads. Affects speed only, never results.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    match levyruin_std::execute(&args.config, &args.set, args.out.as_deref(), args.seed) {
        Ok(dir) => {
            println!("{}", dir.join(levyruin_std::output::MANIFEST_FILE).display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
