use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use codetutor_core::bank::load_bank;
use codetutor_core::gateway::{Gateway, MockProvider, PricingTable, RetryPolicy, DEFAULT_MODEL};
use codetutor_core::review::PromptProfile;
use codetutor_eval::{
    cost_bench, evaluate_submissions, failure_rate, latency_bench, render_report, Format, RecordFailure, Report,
    RunOptions,
};

#[derive(Parser)]
#[command(name = "eval", about = "Measure judge failure rates, review latency and cost")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-error-type failure rates of the correctness judge.
    FailureRate {
        #[command(flatten)]
        common: Common,
        /// Profile used for judging.
        #[arg(long, default_value = "improved")]
        profile: String,
    },
    /// Review latency per profile.
    Latency {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "initial,improved", value_delimiter = ',')]
        profiles: Vec<String>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Mean review cost per profile.
    Cost {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "initial,improved", value_delimiter = ',')]
        profiles: Vec<String>,
        /// JSON map of model id to per-1k-token prices.
        #[arg(long)]
        pricing: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    bank: PathBuf,
    /// Mock script; without it the gateway is configured from LLM_* variables.
    #[arg(long)]
    mock: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    workers: usize,
}

impl Common {
    fn gateway(&self) -> Result<Gateway, String> {
        match &self.mock {
            Some(path) => {
                let mock = MockProvider::from_path(path).map_err(|e| e.to_string())?;
                let model = std::env::var("LLM_MODEL").unwrap_or_else(|_| DEFAULT_MODEL.to_string());
                Ok(Gateway::new(Arc::new(mock), model).with_retry(RetryPolicy::no_delay()))
            }
            None => Gateway::from_env().map_err(|e| e.to_string()),
        }
    }
}

fn profiles(names: &[String]) -> Result<Vec<PromptProfile>, String> {
    names
        .iter()
        .map(|s| PromptProfile::resolve(s.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn report_failures(failures: &[RecordFailure]) {
    for f in failures {
        eprintln!("record {} ({}) failed: {}", f.record_id, f.ex_id, f.message);
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let (common, report) = match cli.command {
        Command::FailureRate { common, profile } => {
            let bank = load_bank(&common.bank).map_err(|e| e.to_string())?;
            let profile = PromptProfile::resolve(&profile).map_err(|e| e.to_string())?;
            let gateway = common.gateway()?;
            let (records, failures) =
                evaluate_submissions(&bank, &profile, &gateway, common.workers).map_err(|e| e.to_string())?;
            report_failures(&failures);
            let report = failure_rate(&records).map_err(|e| e.to_string())?;
            (common, Report::FailureRate(report))
        }
        Command::Latency {
            common,
            profiles: names,
            trials,
        } => {
            let bank = load_bank(&common.bank).map_err(|e| e.to_string())?;
            let gateway = common.gateway()?;
            let opts = RunOptions {
                workers: common.workers,
                trials,
            };
            let report = latency_bench(&bank, &profiles(&names)?, &gateway, opts).map_err(|e| e.to_string())?;
            (common, Report::Latency(report))
        }
        Command::Cost {
            common,
            profiles: names,
            pricing,
        } => {
            let bank = load_bank(&common.bank).map_err(|e| e.to_string())?;
            let pricing = PricingTable::load(&pricing).map_err(|e| e.to_string())?;
            let gateway = common.gateway()?;
            let opts = RunOptions {
                workers: common.workers,
                trials: 1,
            };
            let report = cost_bench(&bank, &profiles(&names)?, &gateway, &pricing, opts).map_err(|e| e.to_string())?;
            (common, Report::Cost(report))
        }
    };

    let text = render_report(&report, common.format).map_err(|e| e.to_string())?;
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
