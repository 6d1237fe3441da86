use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use multicut::cli::{
    baseline_command, bench_command, eval_command, exit_code, gen_synth_inclusion, gen_synth_potts,
    load_modularity, parse_rounding, save_model, solve_command,
};
use multicut::engine::SolveOptions;
use multicut::Result;

#[derive(Parser)]
#[command(name = "multicut", version, about = "Exact MAP inference for label-permutation-invariant models via multicuts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SolveFlags {
    /// Separation schedule, e.g. MC-CFB-I-CIF.
    #[arg(long)]
    schedule: Option<String>,
    /// nearest, derand, pseudo or components.
    #[arg(long)]
    rounding: Option<String>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Comma-separated thresholds for derandomized rounding.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    /// Soft limit in seconds, checked between LP solves.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Separate integer candidates inside branch-and-bound.
    #[arg(long)]
    lazy: bool,
}

impl SolveFlags {
    fn options(&self, export_lp: Option<PathBuf>) -> Result<SolveOptions> {
        Ok(SolveOptions {
            rounding: parse_rounding(self.rounding.as_deref(), self.kappa, self.thresholds.as_deref())?,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            lazy_callback: self.lazy,
            export_lp,
            ..SolveOptions::default()
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a model (JSON, or an edge list read as a modularity problem).
    Solve {
        model: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
        /// Write the final program in LP format.
        #[arg(long)]
        export_lp: Option<PathBuf>,
        /// Result file; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a model file.
    #[command(subcommand)]
    Gen(Gen),
    /// Energy of a labeling, and VI/RI/PA against a reference.
    Eval {
        model: PathBuf,
        labeling: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Run schedules over a directory of models and write a CSV.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        schedules: Vec<String>,
        #[command(flatten)]
        flags: SolveFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Local search: icm, lf or kl.
    Baseline {
        model: PathBuf,
        #[arg(long, default_value = "icm")]
        method: String,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Grid Potts model with random unaries and couplings.
    Potts {
        #[arg(long, default_value_t = 32)]
        width: usize,
        #[arg(long, default_value_t = 32)]
        height: usize,
        #[arg(long, default_value_t = 10)]
        labels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Nested-rectangle segmentation with a junction prior.
    Inclusion {
        #[arg(long, default_value_t = 32)]
        width: usize,
        #[arg(long, default_value_t = 32)]
        height: usize,
        #[arg(long, default_value_t = 4)]
        labels: usize,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.3)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Modularity model from an edge list.
    Modularity {
        edges: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { model, flags, export_lp, out } => {
            let record = solve_command(&model, flags.schedule.as_deref(), &flags.options(export_lp)?, out.as_deref())?;
            if out.is_none() {
                print!("{}", record.to_json()?);
            } else {
                let show = |x: Option<f64>| x.map_or("none".to_string(), |v| v.to_string());
                println!("{} value {} bound {}", record.status, show(record.value), show(record.bound));
            }
        }
        Command::Gen(g) => {
            let (fg, out) = match g {
                Gen::Potts { width, height, labels, seed, out } => (gen_synth_potts(width, height, labels, seed)?, out),
                Gen::Inclusion { width, height, labels, lambda, noise, seed, out } => {
                    (gen_synth_inclusion(width, height, labels, lambda, noise, seed)?, out)
                }
                Gen::Modularity { edges, out } => (load_modularity(&std::fs::read_to_string(edges)?)?, out),
            };
            save_model(&fg, &out)?;
        }
        Command::Eval { model, labeling, truth } => {
            let r = eval_command(&model, &labeling, truth.as_deref())?;
            println!("energy {}", r.energy);
            if let Some((vi, ri, pa)) = r.against_truth {
                println!("vi {vi}\nri {ri}\npa {pa}");
            }
        }
        Command::Bench { corpus, schedules, flags, out } => {
            bench_command(&corpus, &schedules, &flags.options(None)?, &out)?;
        }
        Command::Baseline { model, method } => {
            let (x, e) = baseline_command(&model, &method)?;
            println!("energy {e}\nlabeling {:?}", x.0);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
