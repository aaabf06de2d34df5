// Each runnable example, driven at a small size.

#[allow(dead_code)]
#[path = "../examples/dsme_timing.rs"]
mod dsme_timing;
#[allow(dead_code)]
#[path = "../examples/forwarder_pipeline.rs"]
mod forwarder_pipeline;
#[allow(dead_code)]
#[path = "../examples/delay_tolerant_retrieval.rs"]
mod delay_tolerant_retrieval;
#[allow(dead_code)]
#[path = "../examples/reflexive_push.rs"]
mod reflexive_push;
#[allow(dead_code)]
#[path = "../examples/scenario_comparison.rs"]
mod scenario_comparison;
#[allow(dead_code)]
#[path = "../examples/energy_lifetime.rs"]
mod energy_lifetime;
#[allow(dead_code)]
#[path = "../examples/emit_reports.rs"]
mod emit_reports;
#[allow(dead_code)]
#[path = "../examples/seed_sweep.rs"]
mod seed_sweep;
#[allow(dead_code)]
#[path = "../examples/property_checks.rs"]
mod property_checks;
#[allow(dead_code)]
#[path = "../examples/config_file.rs"]
mod config_file;

#[test]
fn examples_run() {
    dsme_timing::run_example().unwrap();
    forwarder_pipeline::run_example().unwrap();
    delay_tolerant_retrieval::run_example(20).unwrap();
    reflexive_push::run_example(20, 0.05).unwrap();
    scenario_comparison::compare(20, 1).unwrap();
    energy_lifetime::run_example().unwrap();
    seed_sweep::run_example(3, 30).unwrap();
    assert!(property_checks::run_example(2, 30).unwrap());
    config_file::run_example("scenario = vanilla2\nretx = cr\nrequests = 10\n").unwrap();
}

#[test]
fn emit_example_writes_seven_files() {
    let dir = tempfile::tempdir().unwrap();
    let files = emit_reports::run_example(dir.path(), 20).unwrap();
    assert_eq!(files.len(), 7);
    assert!(files.iter().all(|f| f.is_file()));
}

#[test]
fn bundled_config_parses() {
    config_file::run_example(config_file::EXAMPLE).unwrap();
}
