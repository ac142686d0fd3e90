use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use nfconst::experiments::{self, ExperimentConfig, EXPERIMENTS};
use nfconst::Error;

/// Run prime-constellation experiments in number fields.
#[derive(Parser, Debug)]
#[command(name = "nfconst", version, after_help = after_help())]
struct Cli {
    /// JSON config file; key=value arguments override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// report path (stdout when absent)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// worker threads
    #[arg(long, env = experiments::WORKERS_ENV)]
    workers: Option<usize>,
    /// print the merged config and exit
    #[arg(long)]
    dry_run: bool,
    /// experiment name, optional when the config file names one
    experiment: Option<String>,
    /// key=value settings, e.g. field=quadratic d=-1 L=1000000
    args: Vec<String>,
}

fn after_help() -> String {
    format!(
        "Experiments: {}\nExit codes: 0 success, 2 config error, 3 infeasible scale, 4 internal error.",
        EXPERIMENTS.join(", ")
    )
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 3,
        Error::Internal(_) | Error::Overflow(_) => 4,
        _ => 2,
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    let mut args = cli.args.clone();
    match &cli.experiment {
        // an experiment-looking positional that is really key=value
        Some(e) if e.contains('=') => args.insert(0, e.clone()),
        Some(e) => cfg.experiment = e.clone(),
        None => {}
    }
    if cfg.experiment.is_empty() {
        return Err(Error::Invalid(format!("no experiment given (one of: {})", EXPERIMENTS.join(", "))));
    }
    let mut cfg = cfg.apply_args(&args)?;
    if let Some(o) = &cli.output {
        cfg.output = Some(o.display().to_string());
    }
    if let Some(f) = &cli.format {
        cfg.format = Some(f.clone());
    }
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<(), Error> {
        let cfg = build_config(&cli)?;
        let format = cfg.format_spec()?;
        if cli.dry_run {
            println!("{}", cfg.to_json()?);
            return Ok(());
        }
        eprintln!("running {} with {} workers", cfg.experiment, cfg.worker_count());
        let report = experiments::run(&cfg)?;
        report.emit(format, cfg.output.as_deref().map(std::path::Path::new))?;
        eprintln!("done in {:.3} s", report.meta.seconds);
        Ok(())
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
