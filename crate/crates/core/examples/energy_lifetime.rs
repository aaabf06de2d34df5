//! Node battery lifetime per protocol on a 2800 mAh AA cell.

use lora_icn::sim::EnergyModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = EnergyModel::default();
    println!("battery {:.0} J at {} V", m.battery_joules(), m.battery_voltage);
    for p in m.protocols() {
        println!("{p:<16} {:>9.2} mJ/msf {:>8.1} J/day {:>7.1} days", m.energy_per_msf_mj[p], m.joules_per_day(p)?, m.lifetime_days(p)?);
    }
    let push = m.lifetime_days("reflexive_push")?;
    let pull = m.lifetime_days("delay_tolerant")?;
    println!("push over pull: {:.0}% longer", 100.0 * (push / pull - 1.0));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("built-in protocols");
}
