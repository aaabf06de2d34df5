//! Reflexive push: the node sends unsolicited Data, the gateway caches it and
//! phones home, the consumer pulls it back through temporary routes and ACKs.

use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{Scenario, ScenarioConfig, Simulation, TraceEvent};

pub fn run_example(requests: usize, loss: f64) -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::preset(Scenario::ReflexivePush, RetxMode::Inr)
        .with_requests(requests)
        .with_loss(loss)
        .with_seed(5)
        .with_trace();
    let mut sim = Simulation::new(cfg)?;
    sim.run_to_end();

    let first = sim.ledger().iter().next().ok_or("no transactions")?.name.to_string();
    println!("first item {first}:");
    for rec in sim.trace() {
        let line = match &rec.event {
            TraceEvent::Send { kind, name, cause, .. } if name.to_string().ends_with(&first) => format!("send {kind:?} {name} ({cause:?})"),
            TraceEvent::TempFib { prefix, face } if prefix.to_string() == first => format!("temporary route {prefix} -> {face:?}"),
            _ => continue,
        };
        println!("  {:>12}  {:<9} {line}", rec.time.to_string(), sim.nodes()[rec.node].label);
    }

    let r = sim.report();
    let t = r.tx_per_content();
    println!(
        "loss {loss}: success {:.1}%, mean completion {:.2} s",
        100.0 * r.success_rate().unwrap_or(0.0),
        r.quantiles().mean.unwrap_or(f64::NAN)
    );
    println!(
        "per item: consumer {:.2}, forwarder {:.2}, gateway {:.2}, node {:.2}, total {:.2} (LoRa {:.2})",
        t.consumer, t.forwarder, t.gateway, t.node, t.total, r.lora_tx_per_content()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example(200, 0.0).expect("preset is valid");
    run_example(200, 0.05).expect("preset is valid");
}
