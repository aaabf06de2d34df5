use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsme::{next_opportunity, DsmeTiming, SlotAssignment};
use crate::packet::Packet;
use crate::time::{SimDuration, SimTime};

/// Fixed-delay Internet hop with independent per-packet loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternetLink {
    pub delay: SimDuration,
    pub loss: f64,
}

impl InternetLink {
    /// Arrival time, or `None` when the packet is lost.
    pub fn transmit<R: Rng + ?Sized>(&self, now: SimTime, rng: &mut R) -> Option<SimTime> {
        let lost = self.loss > 0.0 && rng.gen_bool(self.loss);
        (!lost).then_some(now + self.delay)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotClass {
    Interest,
    Data,
    Push,
    CapUp,
    CapDown,
}

/// Gateway-node DSME link: exclusive CFP slots, lossless, one frame per slot occurrence.
#[derive(Debug, Clone)]
pub struct LoraLink {
    pub assignment: SlotAssignment,
    pub timing: DsmeTiming,
    pub push: bool,
    next_free: BTreeMap<SlotClass, SimTime>,
}

impl LoraLink {
    pub fn new(assignment: SlotAssignment, timing: DsmeTiming, push: bool) -> Self {
        LoraLink { assignment, timing, push, next_free: BTreeMap::new() }
    }

    /// Slot class a packet uses. Registration traffic and replies to it go through the CAP.
    pub fn class_of(&self, downlink: bool, packet: &Packet) -> SlotClass {
        match (downlink, packet) {
            (true, Packet::Interest(i)) if !i.registration => SlotClass::Interest,
            (true, _) => SlotClass::CapDown,
            (false, Packet::Data(_)) if self.push => SlotClass::Push,
            (false, Packet::Data(_)) => SlotClass::Data,
            (false, _) => SlotClass::CapUp,
        }
    }

    fn offset(&self, class: SlotClass) -> SimDuration {
        let a = &self.assignment;
        match class {
            SlotClass::Interest => a.interest_slot_offset,
            SlotClass::Data => a.data_slot_offset,
            SlotClass::Push => a.push_slot_offset,
            SlotClass::CapUp => a.cap_offset,
            SlotClass::CapDown => a.cap_offset + self.timing.slot_duration,
        }
    }

    /// Departure and arrival of a frame handed to the MAC at `now`.
    pub fn transmit(&mut self, now: SimTime, downlink: bool, packet: &Packet) -> (SimTime, SimTime) {
        let class = self.class_of(downlink, packet);
        let earliest = self.next_free.get(&class).copied().unwrap_or(SimTime::ZERO).max(now);
        let departure = next_opportunity(earliest, self.offset(class), &self.timing);
        self.next_free.insert(class, departure + SimDuration::from_micros(1));
        (departure, departure + self.timing.slot_duration)
    }
}

#[derive(Debug, Clone)]
pub enum LinkModel {
    Internet(InternetLink),
    Lora(LoraLink),
    /// Fixed delay, never loses.
    Ideal(SimDuration),
}

/// Per-direction packet accounting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionLedger {
    pub departed: u64,
    pub lost: u64,
    pub delivered: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub name: String,
    pub kind: String,
    /// `[a -> b, b -> a]`.
    pub directions: [DirectionLedger; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsme::{derive_timing, DsmeConfig};
    use crate::name::Name;
    use crate::packet::{Data, Interest, Nonce};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lora(push: bool) -> LoraLink {
        let t = derive_timing(&DsmeConfig::default()).unwrap();
        LoraLink::new(SlotAssignment::at(1, &t, 0, 0, 3), t, push)
    }

    fn interest() -> Packet {
        Interest::new("/n1/1".parse::<Name>().unwrap(), Nonce(0), SimDuration::from_secs(60)).into()
    }

    fn data() -> Packet {
        Data::value("/n1/1".parse().unwrap(), 1).into()
    }

    #[test]
    fn internet_loss_rate() {
        let l = InternetLink { delay: SimDuration::from_millis(20), loss: 0.05 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let lost = (0..n).filter(|_| l.transmit(SimTime::ZERO, &mut rng).is_none()).count();
        let rate = lost as f64 / n as f64;
        assert!((rate - 0.05).abs() < 0.003, "{rate}");
        let lossless = InternetLink { loss: 0.0, ..l };
        assert_eq!(lossless.transmit(SimTime::ZERO, &mut rng), Some(SimTime::from_micros(20_000)));
    }

    #[test]
    fn pull_round_trip_uses_adjacent_slots() {
        let mut l = lora(false);
        // slot 9 of superframe 0 starts at 4.32 s
        let (dep, arr) = l.transmit(SimTime::ZERO, true, &interest());
        assert_eq!(dep, SimTime::from_secs_f64(4.32));
        assert_eq!(arr, SimTime::from_secs_f64(4.80));
        let (dep, arr) = l.transmit(arr, false, &data());
        assert_eq!(dep, SimTime::from_secs_f64(4.80));
        assert_eq!(arr, SimTime::from_secs_f64(5.28));
    }

    #[test]
    fn one_frame_per_slot_occurrence() {
        let mut l = lora(false);
        let (a, _) = l.transmit(SimTime::ZERO, true, &interest());
        let (b, _) = l.transmit(SimTime::ZERO, true, &interest());
        assert_eq!(b.since(a), l.timing.multisuperframe_duration);
    }

    #[test]
    fn push_data_uses_push_slot() {
        let mut l = lora(true);
        let (dep, _) = l.transmit(SimTime::ZERO, false, &data());
        assert_eq!(dep, SimTime::from_secs_f64(0.48 * 12.0));
    }

    #[test]
    fn registration_goes_through_cap() {
        let mut l = lora(false);
        let reg: Packet = Interest::registration("/n1".parse().unwrap(), Nonce(0), SimDuration::from_secs(60)).into();
        assert_eq!(l.class_of(false, &reg), SlotClass::CapUp);
        assert_eq!(l.class_of(true, &Data::new("/n1".parse().unwrap(), crate::packet::Payload::Ack).into()), SlotClass::CapDown);
        let (_, arr) = l.transmit(SimTime::ZERO, false, &reg);
        assert_eq!(arr, SimTime::from_secs_f64(0.96));
    }
}
