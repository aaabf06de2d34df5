//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported, not asserted; the process only aborts on a
//! simulator error. `cargo test --test acceptance -- --strict` turns FAILs into a
//! non-zero exit.

use std::process::ExitCode;

use lora_icn::dsme::{derive_timing, DsmeConfig};
use lora_icn::endpoints::Outcome;
use lora_icn::forwarder::RetxMode;
use lora_icn::sim::{check_properties, emit, run, EnergyModel, Format, MetricsReport, Radio, Scenario, ScenarioConfig, Simulation};

const N: usize = 2000;
const SEED: u64 = 42;

struct Verdict {
    id: u8,
    pass: bool,
    what: &'static str,
    measured: String,
}

fn sim(scenario: Scenario, retx: RetxMode, loss: f64) -> MetricsReport {
    run(ScenarioConfig::preset(scenario, retx).with_loss(loss).with_requests(N).with_seed(SEED)).expect("preset is valid")
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol + 1e-9
}

fn success(r: &MetricsReport) -> f64 {
    r.success_rate().unwrap_or(0.0)
}

fn dsme_constants() -> Verdict {
    let t = derive_timing(&DsmeConfig::default()).expect("defaults are valid");
    let msf = t.multisuperframe_duration.as_micros();
    Verdict {
        id: 1,
        pass: msf == 30_720_000 && t.total_cells == 448,
        what: "default DSME: 30.72 s multi-superframe, 448 cells",
        measured: format!("{} , {} cells", t.multisuperframe_duration, t.total_cells),
    }
}

fn vanilla1_success() -> Verdict {
    let r = sim(Scenario::Vanilla1, RetxMode::Inr, 0.0);
    let p = success(&r);
    let p0 = 4.0 / 30.72;
    let half = 2.5758 * (p0 * (1.0 - p0) / r.transactions.len() as f64).sqrt();
    Verdict {
        id: 2,
        pass: (0.10..=0.16).contains(&p) && (p - p0).abs() <= half,
        what: "vanilla1: success in [10%,16%] and inside 99% CI of 4/30.72",
        measured: format!("{:.2}% (CI {:.2}%..{:.2}%)", 100.0 * p, 100.0 * (p0 - half), 100.0 * (p0 + half)),
    }
}

/// Point masses in the completion-time distribution: 0.5 s windows holding at
/// least 3% of all transactions.
fn steps(times: &[f64], total: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < times.len() {
        let j = times[i..].iter().take_while(|t| **t <= times[i] + 0.5).count();
        if j as f64 >= 0.03 * total as f64 {
            out.push(times[i]);
            i += j;
        } else {
            i += 1;
        }
    }
    out
}

fn vanilla2_cr_steps() -> Verdict {
    let r = sim(Scenario::Vanilla2, RetxMode::Cr, 0.0);
    let times = r.completion_times();
    let s = steps(&times, r.transactions.len());
    let on_grid = |t: f64| within(t, 15.0 * (t / 15.0).round(), 0.5) && t > 1.0;
    let max = times.last().copied().unwrap_or(f64::INFINITY);
    Verdict {
        id: 3,
        pass: !s.is_empty() && s.iter().all(|t| on_grid(*t)) && s.iter().any(|t| within(*t, 15.0, 0.5)) && max <= 60.0,
        what: "vanilla2 CR: CDF steps at multiples of 15 s, all completions <= 60 s",
        measured: format!("steps at {:?} s, max {max:.2} s", s.iter().map(|t| (t * 100.0).round() / 100.0).collect::<Vec<_>>()),
    }
}

fn vanilla3() -> Verdict {
    let clean = sim(Scenario::Vanilla3, RetxMode::Inr, 0.0);
    let max = clean.quantiles().max.unwrap_or(f64::INFINITY);
    let cr = success(&sim(Scenario::Vanilla3, RetxMode::Cr, 0.05));
    let inr = success(&sim(Scenario::Vanilla3, RetxMode::Inr, 0.05));
    Verdict {
        id: 4,
        pass: success(&clean) == 1.0 && max <= 32.0 && within(cr, 0.80, 0.03) && within(inr, 0.94, 0.03),
        what: "vanilla3: 100% and <= 32 s lossless; 5% loss CR 80±3, INR 94±3",
        measured: format!("{:.1}% max {max:.2} s; CR {:.2}%, INR {:.2}%", 100.0 * success(&clean), 100.0 * cr, 100.0 * inr),
    }
}

fn delay_tolerant() -> Verdict {
    let clean = sim(Scenario::DelayTolerant, RetxMode::Inr, 0.0);
    let t = clean.completion_times();
    let at32 = t.iter().filter(|x| within(**x, 32.0, 0.5)).count() as f64 / t.len().max(1) as f64;
    let lossy = sim(Scenario::DelayTolerant, RetxMode::Inr, 0.05);
    let n = lossy.transactions.len() as f64;
    let fast = lossy.completion_times().iter().filter(|x| **x < 3.0).count() as f64 / n;
    let abandoned = lossy.count(Outcome::Abandoned) as f64 / n;
    Verdict {
        id: 5,
        pass: at32 >= 0.99 && within(fast, 0.05, 0.03) && within(abandoned, 0.08, 0.03),
        what: "delay-tolerant: >=99% at 32±0.5 s; 5% loss ~5% under 3 s, ~8% abandoned",
        measured: format!("{:.1}% at 32 s; <3 s {:.1}%, abandoned {:.1}%", 100.0 * at32, 100.0 * fast, 100.0 * abandoned),
    }
}

fn reflexive_push() -> Verdict {
    let clean = sim(Scenario::ReflexivePush, RetxMode::Inr, 0.0);
    let lossy = sim(Scenario::ReflexivePush, RetxMode::Inr, 0.05);
    let (qc, ql) = (clean.quantiles(), lossy.quantiles());
    let max = qc.max.unwrap_or(f64::INFINITY);
    let delta = ql.mean.unwrap_or(f64::INFINITY) - qc.mean.unwrap_or(0.0);
    Verdict {
        id: 6,
        pass: success(&clean) == 1.0 && max <= 32.0 && success(&lossy) == 1.0 && delta < 2.0,
        what: "reflexive push: 100% and <= 32 s; 5% loss 100% with mean +<2 s",
        measured: format!(
            "{:.1}% max {max:.2} s; lossy {:.2}%, mean +{delta:.2} s",
            100.0 * success(&clean),
            100.0 * success(&lossy)
        ),
    }
}

fn transmissions() -> Verdict {
    let mut baseline = ScenarioConfig::preset(Scenario::Vanilla1, RetxMode::Inr).with_requests(N).with_seed(SEED);
    baseline.radio = Radio::Ideal;
    let b = run(baseline).expect("preset is valid");
    let dt = sim(Scenario::DelayTolerant, RetxMode::Inr, 0.0);
    let push = sim(Scenario::ReflexivePush, RetxMode::Inr, 0.0);
    let (tb, td, tp) = (b.tx_per_content().total, dt.tx_per_content().total, push.tx_per_content().total);
    let (ld, lp) = (dt.lora_tx_per_content(), push.lora_tx_per_content());
    Verdict {
        id: 7,
        pass: tb == 6.0 && td == 10.0 && tp == 9.0 && ld == 2.0 && lp == 1.0,
        what: "tx per item: baseline 6, delay-tolerant 10, push 9; LoRa 2 vs 1",
        measured: format!("{tb:.3}, {td:.3}, {tp:.3}; LoRa {ld:.3} vs {lp:.3}"),
    }
}

fn overhead() -> Verdict {
    let mut all = Vec::new();
    for s in Scenario::ALL {
        for retx in [RetxMode::Inr, RetxMode::Cr] {
            if retx == RetxMode::Cr && matches!(s, Scenario::DelayTolerant | Scenario::ReflexivePush) {
                continue;
            }
            all.push((s, retx, sim(s, retx, 0.05).tx_per_content().total));
        }
    }
    let (_, _, v2) = *all.iter().find(|(s, r, _)| *s == Scenario::Vanilla2 && *r == RetxMode::Inr).expect("included");
    let (hs, hr, hv) = all.iter().copied().fold((Scenario::Vanilla1, RetxMode::Inr, f64::MIN), |a, b| if b.2 > a.2 { b } else { a });
    Verdict {
        id: 8,
        pass: within(v2, 15.0, 1.5) && hs == Scenario::Vanilla2 && hr == RetxMode::Inr,
        what: "vanilla2 INR 5% loss: highest overhead, 15±1.5 tx per item",
        measured: format!("{v2:.2}; highest {hs} {hr:?} {hv:.2}"),
    }
}

fn energy() -> Verdict {
    let m = EnergyModel::default();
    let expect = [("vanilla_no_mac", 10.0), ("vanilla_mac", 230.0), ("delay_tolerant", 230.0), ("reflexive_push", 384.0)];
    let got: Vec<f64> = expect.iter().map(|(p, _)| m.lifetime_days(p).expect("built-in protocol")).collect();
    Verdict {
        id: 9,
        pass: expect.iter().zip(&got).all(|((_, d), g)| within(*g, *d, 1.0)) && m.battery_voltage == 3.3,
        what: "lifetimes ~10/230/230/384 days ±1 at 3.3 V",
        measured: format!("{:.1}/{:.1}/{:.1}/{:.1} days", got[0], got[1], got[2], got[3]),
    }
}

fn property_suite() -> Verdict {
    let mut runs = 0;
    let mut bad = Vec::new();
    for scenario in Scenario::ALL {
        for seed in 1..=20u64 {
            let cfg = ScenarioConfig::preset(scenario, RetxMode::Inr).with_loss(0.05).with_requests(300).with_seed(seed).with_trace();
            let mut sim = Simulation::new(cfg.clone()).expect("preset is valid");
            sim.run_to_end();
            let p = check_properties(&sim);
            for (name, v) in p.all().filter(|(_, v)| !v.is_empty()) {
                bad.push(format!("{scenario}/{seed} {name}: {}", v[0]));
            }
            let again = run(cfg).expect("preset is valid");
            if again != sim.report() {
                bad.push(format!("{scenario}/{seed}: reports differ between runs"));
            }
            runs += 1;
        }
    }
    // Byte-identical files as well as equal structures.
    let cfg = ScenarioConfig::preset(Scenario::Vanilla2, RetxMode::Cr).with_loss(0.05).with_requests(300).with_seed(9);
    let (a, b) = (tempfile::tempdir().expect("tempdir"), tempfile::tempdir().expect("tempdir"));
    for dir in [&a, &b] {
        let r = run(cfg.clone()).expect("preset is valid");
        emit(&r, Format::Csv, dir.path()).expect("writable");
        emit(&r, Format::Json, dir.path()).expect("writable");
    }
    for f in ["transactions.csv", "nodes.csv", "summary.csv", "cdf.csv", "transactions.json", "nodes.json", "summary.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap_or_default();
        let y = std::fs::read(b.path().join(f)).unwrap_or_default();
        if x != y || x.is_empty() {
            bad.push(format!("{f} differs between identical runs"));
        }
    }
    Verdict {
        id: 10,
        pass: bad.is_empty(),
        what: "properties + determinism over 20 seeds x 5 scenarios",
        measured: if bad.is_empty() { format!("{runs} runs clean") } else { format!("{} violations, first: {}", bad.len(), bad[0]) },
    }
}

fn main() -> ExitCode {
    let strict = std::env::args().any(|a| a == "--strict");
    let checks: [fn() -> Verdict; 10] = [
        dsme_constants,
        vanilla1_success,
        vanilla2_cr_steps,
        vanilla3,
        delay_tolerant,
        reflexive_push,
        transmissions,
        overhead,
        energy,
        property_suite,
    ];
    let mut failed = 0;
    for check in checks {
        let v = check();
        println!("{} {:>2}  {:<72} {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.what, v.measured);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if strict && failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
