use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use plasticwalk_cli::commands::parse_seeds;
use plasticwalk_cli::{
    cmd_analyze, cmd_compare, cmd_eval, cmd_train, AnalyzeOptions, CompareOptions, EvalOptions, HarnessError,
    TrainOptions,
};

/// Train, evaluate and analyse Hebbian-plastic walking controllers.
#[derive(Parser)]
#[command(name = "plasticwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run evolution strategies and write the generation log and checkpoints.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Resume from this checkpoint.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Evaluate a checkpoint's best genome.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        checkpoint: PathBuf,
        /// flat, uneven, blocks:H, or a terrain CSV file.
        #[arg(long)]
        terrain: Option<String>,
        /// none, or leg names joined by `_` (lf, rh, lf_rf, ...).
        #[arg(long)]
        damage: Option<String>,
        /// Seeds and ranges, e.g. `0..5` or `1,4,9`.
        #[arg(long, default_value = "0")]
        seeds: String,
        /// Write an episode trace per seed.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PCA, attractor classes and PC spread of recorded traces.
    Analyze {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        q: usize,
        #[arg(long, default_value_t = 100)]
        skip: usize,
        #[arg(long, default_value_t = 100)]
        window: usize,
        #[arg(long, default_value = "analysis")]
        out: PathBuf,
    },
    /// Train or load several configs and evaluate them on a shared battery.
    Compare {
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "0..5")]
        seeds: String,
        #[arg(long, default_value = "compare")]
        out: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Train { config, checkpoint, out, quiet } => {
            let s = cmd_train(&config, &TrainOptions { resume: checkpoint, out_dir: out, quiet })?;
            match s.checkpoint.best_fitness {
                Some(f) => println!("trained {} generations; best evaluation fitness {f:.4}", s.checkpoint.generation),
                None => println!("trained {} generations", s.checkpoint.generation),
            }
            println!("log: {}", s.log_path.display());
            println!("checkpoint: {}", s.checkpoint_path.display());
        }
        Command::Eval { config, checkpoint, terrain, damage, seeds, trace, out } => {
            let options = EvalOptions { checkpoint, terrain, damage, seeds: parse_seeds(&seeds)?, trace, out_dir: out };
            let r = cmd_eval(&config, &options)?;
            println!("seed  fitness  x_displacement  upright_violations  yaw_violations");
            for m in &r.seeds {
                println!(
                    "{:>4}  {:>8.4}  {:>14.4}  {:>17}  {:>14}{}",
                    m.seed,
                    m.fitness,
                    m.x_displacement,
                    m.upright_violations,
                    m.yaw_violations,
                    m.fault.as_deref().map(|f| format!("  fault: {f}")).unwrap_or_default()
                );
            }
            println!("mean fitness {:.4}, mean x displacement {:.4}", r.mean_fitness, r.mean_x_displacement);
            for p in &r.trace_paths {
                println!("trace: {}", p.display());
            }
        }
        Command::Analyze { traces, q, skip, window, out } => {
            let results = cmd_analyze(&AnalyzeOptions { traces, q, skip, window, out_dir: out })?;
            for r in &results {
                let spread: Vec<String> = r.pc_spread.iter().map(|s| format!("{s:.4}")).collect();
                println!("{}: {} (PC spread {})", r.name, r.attractor.as_str(), spread.join(" "));
            }
        }
        Command::Compare { configs, seeds, out, quiet } => {
            let t = cmd_compare(&CompareOptions { configs, seeds: parse_seeds(&seeds)?, out_dir: out, quiet })?;
            println!("{} rows written to {}", t.rows.len(), t.path.display());
            if t.failures > 0 {
                return Err(HarnessError::Runtime(format!("{} rows failed", t.failures)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
