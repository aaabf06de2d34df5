//! Writes the CSV and JSON reports of one run into a directory.
//!
//! cargo run --example emit_reports -- [out_dir]

use std::path::{Path, PathBuf};

use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{emit, run, Format, Scenario, ScenarioConfig};

pub fn run_example(dir: &Path, requests: usize) -> Result<Vec<PathBuf>, Box<dyn std::error::Error>> {
    let cfg = ScenarioConfig::preset(Scenario::Vanilla2, RetxMode::Cr).with_requests(requests).with_seed(42);
    let report = run(cfg)?;
    let mut files = emit(&report, Format::Csv, dir)?;
    files.extend(emit(&report, Format::Json, dir)?);
    for f in &files {
        println!("{}", f.display());
    }
    println!("{}", std::fs::read_to_string(dir.join("summary.csv"))?);
    Ok(files)
}

#[allow(dead_code)]
fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("lora-icn-report"));
    run_example(&dir, 200).expect("report written");
}
