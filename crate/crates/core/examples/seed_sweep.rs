//! The same scenario over many seeds, in parallel, summarised as mean ± 95% CI.

use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{sweep, Scenario, ScenarioConfig};

pub fn run_example(seeds: u64, requests: usize) -> Result<(), Box<dyn std::error::Error>> {
    let seeds: Vec<u64> = (1..=seeds).collect();
    for (scenario, retx) in [(Scenario::Vanilla3, RetxMode::Inr), (Scenario::Vanilla3, RetxMode::Cr)] {
        let base = ScenarioConfig::preset(scenario, retx).with_loss(0.05).with_requests(requests);
        let r = sweep(&base, &seeds)?;
        let s = r.success_rate.ok_or("empty sweep")?;
        let t = r.tx_per_content.ok_or("empty sweep")?;
        println!(
            "{scenario} {retx:?}: success {:.3} ± {:.3}, tx/item {:.2} ± {:.2} over {} seeds",
            s.mean, s.half_width, t.mean, t.half_width, s.n
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example(20, 500).expect("presets are valid");
}
