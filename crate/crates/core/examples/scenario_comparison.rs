//! Runs all five scenarios with and without loss and prints the headline metrics.
//!
//! cargo run --release --example scenario_comparison -- [requests] [seed]

use lora_icn::endpoints::Outcome;
use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{retx_str, run, Scenario, ScenarioConfig};

pub fn compare(requests: usize, seed: u64) -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:<15} {:<4} {:>5} {:>8} {:>9} {:>8} {:>8} {:>8} {:>7} {:>6}",
        "scenario", "retx", "loss", "success", "abandoned", "p50 s", "max s", "tx/item", "lora", "<3s"
    );
    for scenario in Scenario::ALL {
        for retx in [RetxMode::Inr, RetxMode::Cr] {
            if retx == RetxMode::Cr && matches!(scenario, Scenario::DelayTolerant | Scenario::ReflexivePush) {
                continue;
            }
            for loss in [0.0, 0.05] {
                let cfg = ScenarioConfig::preset(scenario, retx).with_loss(loss).with_requests(requests).with_seed(seed);
                let r = run(cfg)?;
                let q = r.quantiles();
                let fast = r.completion_times().iter().filter(|t| **t < 3.0).count() as f64 / r.transactions.len().max(1) as f64;
                println!(
                    "{:<15} {:<4} {:>5.2} {:>7.1}% {:>8.1}% {:>8.2} {:>8.2} {:>8.2} {:>7.2} {:>5.1}%",
                    scenario.as_str(),
                    retx_str(retx),
                    loss,
                    100.0 * r.success_rate().unwrap_or(0.0),
                    100.0 * r.fraction(Outcome::Abandoned).unwrap_or(0.0),
                    q.p50.unwrap_or(f64::NAN),
                    q.max.unwrap_or(f64::NAN),
                    r.tx_per_content().total,
                    r.lora_tx_per_content(),
                    100.0 * fast,
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let requests = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    compare(requests, seed).expect("presets are valid");
}
