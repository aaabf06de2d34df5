//! Delay-tolerant retrieval: the gateway answers with WAIT, fetches over LoRa in
//! the meantime, and serves the consumer's re-request from its cache.

use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{Scenario, ScenarioConfig, Simulation, TraceEvent};

pub fn run_example(requests: usize) -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::preset(Scenario::DelayTolerant, RetxMode::Inr).with_requests(requests).with_seed(3).with_trace();
    let mut sim = Simulation::new(cfg)?;
    sim.run_to_end();

    let first = sim.ledger().iter().next().ok_or("no transactions")?.name.clone();
    println!("packet trace for {first}:");
    for rec in sim.trace() {
        let (what, name) = match &rec.event {
            TraceEvent::Send { kind, name, cause, control, .. } => (format!("send {kind:?} ({cause:?}{})", if *control { ", control" } else { "" }), name),
            TraceEvent::Receive { kind, name, .. } => (format!("recv {kind:?}"), name),
            _ => continue,
        };
        if *name == first {
            println!("  {:>12}  {:<9} {what}", rec.time.to_string(), sim.nodes()[rec.node].label);
        }
    }

    let r = sim.report();
    let q = r.quantiles();
    println!("wait hint {}, success {:.1}%", r.wait_estimate, 100.0 * r.success_rate().unwrap_or(0.0));
    println!("completion min {:?} max {:?}, {:.2} transmissions per item", q.min, q.max, r.tx_per_content().total);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example(200).expect("preset is valid");
}
