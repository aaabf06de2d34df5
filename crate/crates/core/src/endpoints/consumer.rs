use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AppOutput, Initiator, Ledger, RetryRing};
use crate::forwarder::{RetxMode, TimerConfig};
use crate::name::Name;
use crate::packet::{Data, Interest, Nonce, Payload};
use crate::time::{SimDuration, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsumerConfig {
    pub timers: TimerConfig,
    pub ring_capacity: usize,
    pub ring_timeout: Option<SimDuration>,
}

impl ConsumerConfig {
    pub fn new(timers: TimerConfig) -> Self {
        ConsumerConfig { timers, ring_capacity: 8, ring_timeout: None }
    }
}

#[derive(Debug, Clone)]
struct Outstanding {
    deadline: SimTime,
    next_retx: Option<SimTime>,
    retx_left: u32,
}

/// Consumer application: requests content, retransmits in CR mode, follows WAIT hints
/// and answers reflexive indications.
#[derive(Debug, Clone)]
pub struct ConsumerApp {
    config: ConsumerConfig,
    outstanding: BTreeMap<Name, Outstanding>,
    ring: RetryRing,
    pending_acks: BTreeMap<Name, Name>,
    nonces: ChaCha8Rng,
    abandoned: u64,
}

impl ConsumerApp {
    pub fn new(config: ConsumerConfig, nonce_seed: u64) -> Self {
        ConsumerApp {
            config,
            outstanding: BTreeMap::new(),
            ring: RetryRing::new(config.ring_capacity, config.ring_timeout),
            pending_acks: BTreeMap::new(),
            nonces: ChaCha8Rng::seed_from_u64(nonce_seed),
            abandoned: 0,
        }
    }

    pub fn ring(&self) -> &RetryRing {
        &self.ring
    }

    pub fn abandoned(&self) -> u64 {
        self.abandoned
    }

    pub fn outstanding(&self) -> usize {
        self.outstanding.len()
    }

    /// Whether an Interest for `name` is currently in flight.
    pub fn is_fetching(&self, name: &Name) -> bool {
        self.outstanding.contains_key(name)
    }

    fn app_retransmits(&self) -> bool {
        self.config.timers.mode == RetxMode::Cr && self.config.timers.retx_attempts > 0
    }

    fn interest(&mut self, name: Name) -> Interest {
        Interest::new(name, Nonce(self.nonces.gen()), self.config.timers.pit_timeout)
    }

    // Issues a fresh request for `name` and tracks its lifetime.
    fn express(&mut self, name: Name, now: SimTime, ledger: &mut Ledger) -> AppOutput {
        let t = self.config.timers;
        let retx = self.app_retransmits();
        self.outstanding.insert(
            name.clone(),
            Outstanding {
                deadline: now + t.pit_timeout,
                next_retx: retx.then(|| now + t.retx_interval),
                retx_left: if retx { t.retx_attempts } else { 0 },
            },
        );
        ledger.record_attempt(&name);
        AppOutput::Express(self.interest(name))
    }

    /// Starts a consumer-initiated transaction for `name`.
    pub fn request(&mut self, name: Name, now: SimTime, ledger: &mut Ledger) -> Vec<AppOutput> {
        if !ledger.start(name.clone(), Initiator::Consumer, now) {
            return Vec::new();
        }
        vec![self.express(name, now, ledger)]
    }

    fn settle(&mut self, name: &Name) {
        self.outstanding.remove(name);
        self.ring.remove(name);
    }

    pub fn on_data(&mut self, d: Data, now: SimTime, ledger: &mut Ledger) -> Vec<AppOutput> {
        match d.payload {
            Payload::Value(_) => {
                ledger.complete(&d.name, now);
                self.settle(&d.name);
                match self.pending_acks.remove(&d.name) {
                    Some(indication) => vec![AppOutput::Reply(Data::new(indication, Payload::Ack))],
                    None => Vec::new(),
                }
            }
            Payload::Wait(hint) => {
                if !ledger.is_pending(&d.name) {
                    return Vec::new();
                }
                self.outstanding.remove(&d.name);
                if let Some(victim) = self.ring.insert(d.name, now + hint, now) {
                    if ledger.abandon(&victim) {
                        self.abandoned += 1;
                    }
                    self.outstanding.remove(&victim);
                }
                Vec::new()
            }
            Payload::Nack => {
                ledger.fail(&d.name);
                self.settle(&d.name);
                self.pending_acks.remove(&d.name);
                Vec::new()
            }
            Payload::Ack => Vec::new(),
        }
    }

    /// Reflexive indication: fetch the announced content, or re-ACK if it is already here.
    pub fn on_interest(&mut self, i: Interest, now: SimTime, ledger: &mut Ledger) -> Vec<AppOutput> {
        let Some(content) = i.reflexive else { return Vec::new() };
        if ledger.is_completed(&content) {
            return vec![AppOutput::Reply(Data::new(i.name, Payload::Ack))];
        }
        if !ledger.is_pending(&content) {
            ledger.start(content.clone(), Initiator::Producer, now);
        }
        if !ledger.is_pending(&content) {
            return Vec::new();
        }
        self.pending_acks.insert(content.clone(), i.name);
        if self.outstanding.contains_key(&content) {
            return Vec::new();
        }
        vec![self.express(content, now, ledger)]
    }

    pub fn tick(&mut self, now: SimTime, ledger: &mut Ledger) -> Vec<AppOutput> {
        let mut out = Vec::new();
        let interval = self.config.timers.retx_interval;
        let expired: Vec<Name> =
            self.outstanding.iter().filter(|(_, o)| o.deadline <= now).map(|(n, _)| n.clone()).collect();
        for name in expired {
            self.outstanding.remove(&name);
            self.ring.remove(&name);
            self.pending_acks.remove(&name);
            ledger.fail(&name);
        }
        let mut retx = Vec::new();
        for (name, o) in self.outstanding.iter_mut() {
            let Some(at) = o.next_retx else { continue };
            if at > now || o.retx_left == 0 {
                continue;
            }
            o.retx_left -= 1;
            o.next_retx = (o.retx_left > 0).then_some(at + interval);
            retx.push(name.clone());
        }
        for name in retx {
            ledger.record_attempt(&name);
            out.push(AppOutput::Express(self.interest(name)));
        }
        for name in self.ring.take_due(now) {
            if ledger.is_pending(&name) {
                out.push(self.express(name, now, ledger));
            }
        }
        out
    }

    pub fn next_deadline(&self) -> Option<SimTime> {
        self.outstanding
            .values()
            .flat_map(|o| [Some(o.deadline), o.next_retx.filter(|_| o.retx_left > 0)])
            .flatten()
            .chain(self.ring.next_due())
            .min()
    }
}
