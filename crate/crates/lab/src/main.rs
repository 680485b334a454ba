use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirichlet_lab::config::{load_config, Command as ConfigCommand};
use dirichlet_lab::runner::{self, RunError, RunOptions, EXIT_INTERNAL, EXIT_PRECONDITION};
use dirichlet_lab::validate::{validate_file, Severity};

#[derive(Parser)]
#[command(name = "dirichlet-lab", version, about = "Boundary behaviour of general Dirichlet series")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "DIRICHLET_LAB_THREADS")]
    threads: Option<usize>,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output prefix; writes <prefix>.report.json and <prefix>.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with code 3 when a critical outcome is undecided.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    Eval(RunArgs),
    Scan(RunArgs),
    Theorem1(RunArgs),
    Theorem2(RunArgs),
    Theorem3(RunArgs),
    Corollary6(RunArgs),
    Counterexample(RunArgs),
    Potential(RunArgs),
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cmd: ConfigCommand, args: &RunArgs) -> Result<i32, RunError> {
    let cfg = load_config(&args.config)?;
    if cfg.command != cmd {
        return Err(RunError::Config(dirichlet_lab::config::ConfigError::Semantic {
            path: args.config.display().to_string(),
            message: format!("config is for `{}`, not `{cmd}`", cfg.command),
        }));
    }
    let opts = RunOptions {
        strict: args.strict,
        seed: args.seed,
    };
    let artifacts = runner::execute(&cfg, &opts)?;
    let prefix = runner::output_prefix(&cfg, args.out.as_deref());
    let (report, csv) = runner::write_artifacts(&prefix, &artifacts)?;
    eprintln!("wrote {} and {}", report.display(), csv.display());
    if let Some(reason) = artifacts.report["aborted"].as_str() {
        eprintln!("aborted: {reason}");
    } else if artifacts.critical_undecided {
        eprintln!("outcome undecided");
    }
    Ok(artifacts.exit_code(args.strict))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_INTERNAL as u8);
        }
    }
    let (cmd, args) = match &cli.command {
        Cmd::Validate { config } => {
            let diags = validate_file(config);
            for d in &diags {
                eprintln!("{d}");
            }
            let failed = diags.iter().any(|d| d.severity == Severity::Error);
            if !failed {
                eprintln!("ok");
            }
            return ExitCode::from(if failed { EXIT_PRECONDITION as u8 } else { 0 });
        }
        Cmd::Eval(a) => (ConfigCommand::Eval, a),
        Cmd::Scan(a) => (ConfigCommand::Scan, a),
        Cmd::Theorem1(a) => (ConfigCommand::Theorem1, a),
        Cmd::Theorem2(a) => (ConfigCommand::Theorem2, a),
        Cmd::Theorem3(a) => (ConfigCommand::Theorem3, a),
        Cmd::Corollary6(a) => (ConfigCommand::Corollary6, a),
        Cmd::Counterexample(a) => (ConfigCommand::Counterexample, a),
        Cmd::Potential(a) => (ConfigCommand::Potential, a),
    };
    match run(cmd, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
