use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lora_icn::sim::{emit, from_kv, parse_kv, parse_seeds, run, sweep, ConfigError, EnergyModel, Format, MeanCi, Summary};

#[derive(Parser)]
#[command(name = "sim", about = "Delay-tolerant ICN over DSME-LoRa experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write CSV/JSON reports.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Report directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Both)]
        format: OutFormat,
    },
    /// Battery lifetime per protocol.
    Energy {
        /// One protocol; all when omitted.
        #[arg(long)]
        protocol: Option<String>,
        /// Battery voltage.
        #[arg(long, default_value_t = 3.3)]
        voltage: f64,
    },
    /// Run a scenario over many seeds and report mean ± 95% CI.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// `1..20` (inclusive), `1,5,9`, or one seed.
        #[arg(long)]
        seeds: String,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// vanilla1 | vanilla2 | vanilla3 | delay_tolerant | reflexive_push
    #[arg(long)]
    scenario: Option<String>,
    /// inr | cr
    #[arg(long)]
    retx: Option<String>,
    /// Per-direction loss probability on the Internet hops.
    #[arg(long)]
    loss: Option<f64>,
    /// Content items to request or push.
    #[arg(long)]
    requests: Option<usize>,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
    Both,
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl ScenarioArgs {
    fn settings(&self, seed: Option<u64>) -> Result<BTreeMap<String, String>, Failure> {
        let mut kv = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                parse_kv(&text)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("scenario", self.scenario.clone()),
            ("retx", self.retx.clone()),
            ("loss", self.loss.map(|v| v.to_string())),
            ("requests", self.requests.map(|v| v.to_string())),
            ("seed", seed.map(|v| v.to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                kv.insert(k.to_string(), v);
            }
        }
        Ok(kv)
    }
}

fn fmt_ci(c: Option<MeanCi>) -> String {
    c.map_or_else(|| "n/a".to_string(), |c| format!("{:.4} ± {:.4} (n={})", c.mean, c.half_width, c.n))
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { scenario, seed, out, format } => {
            let cfg = from_kv(&scenario.settings(seed)?)?;
            let report = run(cfg)?;
            let formats = match format {
                OutFormat::Csv => vec![Format::Csv],
                OutFormat::Json => vec![Format::Json],
                OutFormat::Both => vec![Format::Csv, Format::Json],
            };
            for f in formats {
                emit(&report, f, &out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
            }
            let s = Summary::of(&report);
            println!(
                "{} retx={} loss={} seed={} requests={} success_rate={} tx_per_content={:.3} lora_tx_per_content={:.3}",
                s.scenario,
                s.retx,
                s.loss,
                s.seed,
                s.requests,
                s.success_rate.map_or_else(|| "null".into(), |v| format!("{v:.4}")),
                s.tx_per_content.total,
                s.lora_tx_per_content
            );
        }
        Command::Energy { protocol, voltage } => {
            if !(voltage.is_finite() && voltage > 0.0) {
                return Err(Failure::Config(format!("voltage must be positive, got {voltage}")));
            }
            let model = EnergyModel { battery_voltage: voltage, ..EnergyModel::default() };
            let protocols: Vec<String> = match protocol {
                Some(p) => vec![p],
                None => model.protocols().map(str::to_string).collect(),
            };
            for p in protocols {
                let days = model.lifetime_days(&p).map_err(|e| Failure::Config(e.to_string()))?;
                println!("{p}: {days:.1} days");
            }
        }
        Command::Sweep { scenario, seeds } => {
            let seeds = parse_seeds(&seeds)?;
            let cfg = from_kv(&scenario.settings(None)?)?;
            let r = sweep(&cfg, &seeds)?;
            println!("seeds: {}", seeds.len());
            println!("success_rate: {}", fmt_ci(r.success_rate));
            println!("mean_completion_s: {}", fmt_ci(r.mean_completion_s));
            println!("tx_per_content: {}", fmt_ci(r.tx_per_content));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
