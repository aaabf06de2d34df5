//! Builds a scenario from a flat `key = value` file and runs it.

use lora_icn::sim::{parse_config, run};

pub const EXAMPLE: &str = "\
# halved multi-superframe with a matching WAIT hint
scenario = delay_tolerant
retx = inr
loss = 0.0
mo = 4
bo = 4
wait_estimate_s = 16.64
requests = 50
seed = 11
";

pub fn run_example(text: &str) -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(text)?;
    println!("{} / {:?}, {} requests, seed {}, wait hint {:?}", cfg.scenario, cfg.retx, cfg.workload.requests, cfg.seed, cfg.wait_estimate);
    let r = run(cfg)?;
    println!("success {:?}, completion {:?}", r.success_rate(), r.quantiles());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable config file"),
        None => EXAMPLE.to_string(),
    };
    if let Err(e) = run_example(&text) {
        eprintln!("{e}");
        std::process::exit(2);
    }
}
