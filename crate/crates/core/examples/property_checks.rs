//! Traced runs of every scenario checked for flow balance, aggregation, retransmission
//! bounds, cache hygiene, temporary-route cleanup and per-link packet conservation.

use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{check_properties, Scenario, ScenarioConfig, Simulation};

pub fn run_example(seeds: u64, requests: usize) -> Result<bool, Box<dyn std::error::Error>> {
    let mut clean = true;
    for scenario in Scenario::ALL {
        for seed in 1..=seeds {
            let cfg = ScenarioConfig::preset(scenario, RetxMode::Inr).with_loss(0.05).with_requests(requests).with_seed(seed).with_trace();
            let mut sim = Simulation::new(cfg)?;
            sim.run_to_end();
            let p = check_properties(&sim);
            for (property, violations) in p.all().filter(|(_, v)| !v.is_empty()) {
                clean = false;
                println!("{scenario} seed {seed}: {property}: {}", violations[0]);
            }
        }
        println!("{scenario}: checked {seeds} seeds");
    }
    Ok(clean)
}

#[allow(dead_code)]
fn main() {
    let clean = run_example(5, 200).expect("presets are valid");
    println!("{}", if clean { "all properties hold" } else { "violations found" });
}
