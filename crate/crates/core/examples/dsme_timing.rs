//! DSME-LoRa slotframe arithmetic: durations, cell counts, and when a queued frame leaves.

use lora_icn::dsme::{derive_timing, next_data_tx, next_interest_tx, next_push_tx, DsmeConfig, SlotAssignment};
use lora_icn::SimTime;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let t = derive_timing(&DsmeConfig::default())?;
    println!("superframe       {}", t.superframe_duration);
    println!("slot             {}", t.slot_duration);
    println!("multi-superframe {} ({} superframes)", t.multisuperframe_duration, t.superframes_per_msf);
    println!("cells            {}", t.total_cells);

    for mo in 3..=6 {
        let c = DsmeConfig { multisuperframe_order: mo, beacon_order: mo, ..DsmeConfig::default() };
        println!("MO={mo}: multi-superframe {}", derive_timing(&c)?.multisuperframe_duration);
    }

    // CFP slot 2 of superframe 1 for Interests, the next slot for the answer.
    let a = SlotAssignment::at(1, &t, 1, 2, 4);
    let queued = SimTime::from_secs_f64(40.0);
    let dep = next_interest_tx(queued, &a, &t);
    let rx = dep + t.slot_duration;
    let back = next_data_tx(rx, &a, &t)?;
    println!("Interest queued at {queued}: departs {dep}, node has it at {rx}");
    println!("answer departs {back}, gateway has it at {}", back + t.slot_duration);
    println!("pushed item generated at {queued} departs {}", next_push_tx(queued, &a, &t));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("default DSME configuration is valid");
}
