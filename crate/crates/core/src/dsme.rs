//! DSME-LoRa slotframe timing.
//!
//! Derives superframe, multi-superframe, and slot durations from the MAC orders and
//! answers "when is this node's next transmission opportunity" for the gateway link.
//! The multi-superframe length is anchored so that SO=3/MO=5 at a 1.024 ms symbol
//! gives exactly 30.72 s; other configurations scale from that point by `2^MO` and
//! by symbol time.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::{SimDuration, SimTime};

/// Time slots per superframe, beacon slot included.
pub const SLOTS_PER_SUPERFRAME: u64 = 16;

// 960 base symbols per superframe, scaled by 1000/1024 to hit the 30.72 s anchor.
const BASE_SYMBOLS_NUM: u128 = 960 * 1000;
const BASE_SYMBOLS_DEN: u128 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DsmeError {
    #[error("superframe order {so} exceeds multi-superframe order {mo}")]
    SoAboveMo { so: u8, mo: u8 },
    #[error("multi-superframe order {mo} exceeds beacon order {bo}")]
    MoAboveBo { mo: u8, bo: u8 },
    #[error("order {0} outside 0..=15")]
    OrderOutOfRange(u8),
    #[error("channel count must be positive")]
    NoChannels,
    #[error("CFP slots per superframe must be in 2..=15, got {0}")]
    BadCfpSlots(u32),
    #[error("symbol time must be positive")]
    ZeroSymbolTime,
    #[error("{at} is not the end of this node's Interest slot")]
    NotInterestSlot { at: SimTime },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsmeConfig {
    pub symbol_time: SimDuration,
    pub superframe_order: u8,
    pub multisuperframe_order: u8,
    pub beacon_order: u8,
    pub channels: u32,
    pub cfp_slots_per_superframe: u32,
}

impl Default for DsmeConfig {
    fn default() -> Self {
        DsmeConfig {
            symbol_time: SimDuration::from_micros(1024),
            superframe_order: 3,
            multisuperframe_order: 5,
            beacon_order: 5,
            channels: 16,
            cfp_slots_per_superframe: 7,
        }
    }
}

impl DsmeConfig {
    pub fn validate(&self) -> Result<(), DsmeError> {
        for order in [self.superframe_order, self.multisuperframe_order, self.beacon_order] {
            if order > 15 {
                return Err(DsmeError::OrderOutOfRange(order));
            }
        }
        if self.superframe_order > self.multisuperframe_order {
            return Err(DsmeError::SoAboveMo { so: self.superframe_order, mo: self.multisuperframe_order });
        }
        if self.multisuperframe_order > self.beacon_order {
            return Err(DsmeError::MoAboveBo { mo: self.multisuperframe_order, bo: self.beacon_order });
        }
        if self.channels == 0 {
            return Err(DsmeError::NoChannels);
        }
        if !(2..SLOTS_PER_SUPERFRAME as u32).contains(&self.cfp_slots_per_superframe) {
            return Err(DsmeError::BadCfpSlots(self.cfp_slots_per_superframe));
        }
        if self.symbol_time.is_zero() {
            return Err(DsmeError::ZeroSymbolTime);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsmeTiming {
    pub superframe_duration: SimDuration,
    pub multisuperframe_duration: SimDuration,
    pub beacon_interval: SimDuration,
    pub superframes_per_msf: u64,
    pub slot_duration: SimDuration,
    pub total_cells: u64,
    pub cfp_slots_per_superframe: u64,
}

fn order_duration(symbol_time: SimDuration, order: u8) -> SimDuration {
    let us = BASE_SYMBOLS_NUM * (1u128 << order) * symbol_time.as_micros() as u128 / BASE_SYMBOLS_DEN;
    SimDuration::from_micros(us as u64)
}

pub fn derive_timing(c: &DsmeConfig) -> Result<DsmeTiming, DsmeError> {
    c.validate()?;
    let superframes_per_msf = 1u64 << (c.multisuperframe_order - c.superframe_order);
    let multisuperframe_duration = order_duration(c.symbol_time, c.multisuperframe_order);
    let superframe_duration = multisuperframe_duration / superframes_per_msf;
    Ok(DsmeTiming {
        superframe_duration,
        multisuperframe_duration,
        beacon_interval: order_duration(c.symbol_time, c.beacon_order),
        superframes_per_msf,
        slot_duration: superframe_duration / SLOTS_PER_SUPERFRAME,
        total_cells: superframes_per_msf * c.cfp_slots_per_superframe as u64 * c.channels as u64,
        cfp_slots_per_superframe: c.cfp_slots_per_superframe as u64,
    })
}

/// Static per-node schedule, as offsets from the start of a multi-superframe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotAssignment {
    pub node_id: u32,
    pub interest_slot_offset: SimDuration,
    pub data_slot_offset: SimDuration,
    pub push_slot_offset: SimDuration,
    /// Contention access period opportunity used for registration only.
    pub cap_offset: SimDuration,
}

impl SlotAssignment {
    /// Interest slot `cfp_index` (0-based within the CFP) of superframe `superframe`, followed by its data slot.
    pub fn at(node_id: u32, t: &DsmeTiming, superframe: u64, cfp_index: u64, push_cfp_index: u64) -> Self {
        let first_cfp = SLOTS_PER_SUPERFRAME - t.cfp_slots_per_superframe;
        let sf_start = t.superframe_duration * (superframe % t.superframes_per_msf);
        let interest_slot = first_cfp + cfp_index.min(t.cfp_slots_per_superframe - 2);
        let push_slot = first_cfp + push_cfp_index.min(t.cfp_slots_per_superframe - 1);
        let interest_slot_offset = sf_start + t.slot_duration * interest_slot;
        SlotAssignment {
            node_id,
            interest_slot_offset,
            data_slot_offset: interest_slot_offset + t.slot_duration,
            push_slot_offset: sf_start + t.slot_duration * push_slot,
            cap_offset: t.slot_duration,
        }
    }

    /// Uniformly random superframe and CFP slot.
    pub fn random<R: Rng + ?Sized>(node_id: u32, t: &DsmeTiming, rng: &mut R) -> Self {
        let superframe = rng.gen_range(0..t.superframes_per_msf);
        let cfp_index = rng.gen_range(0..t.cfp_slots_per_superframe - 1);
        let push_cfp_index = rng.gen_range(0..t.cfp_slots_per_superframe);
        SlotAssignment::at(node_id, t, superframe, cfp_index, push_cfp_index)
    }
}

/// Smallest `s >= now` with `s ≡ offset (mod multisuperframe_duration)`.
pub fn next_opportunity(now: SimTime, offset: SimDuration, t: &DsmeTiming) -> SimTime {
    let period = t.multisuperframe_duration.as_micros();
    let offset = offset.as_micros() % period;
    let now_us = now.as_micros();
    let phase = now_us % period;
    let wait = if phase <= offset { offset - phase } else { period - phase + offset };
    SimTime::from_micros(now_us + wait)
}

/// Departure time of a gateway-to-node frame queued at `now`.
pub fn next_interest_tx(now: SimTime, a: &SlotAssignment, t: &DsmeTiming) -> SimTime {
    next_opportunity(now, a.interest_slot_offset, t)
}

/// Departure of the answer to an Interest delivered at `interest_rx_time`, which must be
/// the end of the node's Interest slot (the start of its data slot).
pub fn next_data_tx(interest_rx_time: SimTime, a: &SlotAssignment, t: &DsmeTiming) -> Result<SimTime, DsmeError> {
    let departure = next_opportunity(interest_rx_time, a.data_slot_offset, t);
    if departure != interest_rx_time {
        return Err(DsmeError::NotInterestSlot { at: interest_rx_time });
    }
    Ok(departure)
}

/// Departure of node-originated unsolicited data generated at `now`.
pub fn next_push_tx(now: SimTime, a: &SlotAssignment, t: &DsmeTiming) -> SimTime {
    next_opportunity(now, a.push_slot_offset, t)
}
