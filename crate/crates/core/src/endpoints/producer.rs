use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AppOutput, Initiator, Ledger};
use crate::name::Name;
use crate::packet::{Data, FaceId, Interest, Nonce, Payload};
use crate::time::{SimDuration, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProducerMode {
    /// Answers Interests delivered in the node's slot.
    Pull,
    /// Generates content on its own and sends it unsolicited.
    Push,
}

/// Sensor application on a LoRa node.
#[derive(Debug, Clone)]
pub struct ProducerApp {
    prefix: Name,
    lora_face: FaceId,
    mode: ProducerMode,
    registered: bool,
    values: ChaCha8Rng,
    produced: u64,
}

impl ProducerApp {
    pub fn new(prefix: Name, lora_face: FaceId, mode: ProducerMode, seed: u64) -> Self {
        ProducerApp { prefix, lora_face, mode, registered: false, values: ChaCha8Rng::seed_from_u64(seed), produced: 0 }
    }

    pub fn prefix(&self) -> &Name {
        &self.prefix
    }

    pub fn is_registered(&self) -> bool {
        self.registered
    }

    pub fn produced(&self) -> u64 {
        self.produced
    }

    /// Registration request for the node prefix, sent on the LoRa face.
    pub fn register(&mut self, lifetime: SimDuration) -> AppOutput {
        let i = Interest::registration(self.prefix.clone(), Nonce(self.values.gen()), lifetime);
        AppOutput::Direct { face: self.lora_face, packet: i.into() }
    }

    fn sample(&mut self, name: Name) -> Data {
        self.produced += 1;
        Data::value(name, self.values.gen_range(0..1000))
    }

    pub fn on_interest(&mut self, i: Interest, _now: SimTime) -> Vec<AppOutput> {
        if self.mode != ProducerMode::Pull || !self.prefix.is_prefix_of(&i.name) || i.registration {
            return Vec::new();
        }
        vec![AppOutput::Reply(self.sample(i.name))]
    }

    pub fn on_data(&mut self, d: Data, _now: SimTime) -> Vec<AppOutput> {
        if d.name == self.prefix {
            match d.payload {
                Payload::Ack => self.registered = true,
                Payload::Nack => self.registered = false,
                _ => {}
            }
        }
        Vec::new()
    }

    /// Push mode: produce `name` now and hand it to the LoRa face as unsolicited Data.
    pub fn generate(&mut self, name: Name, now: SimTime, ledger: &mut Ledger) -> Vec<AppOutput> {
        if self.mode != ProducerMode::Push || !ledger.start(name.clone(), Initiator::Producer, now) {
            return Vec::new();
        }
        let d = self.sample(name);
        vec![AppOutput::Direct { face: self.lora_face, packet: d.into() }]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::Packet;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn pull_answers_one_data_per_interest() {
        let mut p = ProducerApp::new(n("/n1"), FaceId(9), ProducerMode::Pull, 1);
        let i = Interest::new(n("/n1/4"), Nonce(0), SimDuration::from_secs(60));
        let out = p.on_interest(i.clone(), SimTime::ZERO);
        assert!(matches!(&out[..], [AppOutput::Reply(d)] if d.name == n("/n1/4") && matches!(d.payload, Payload::Value(_))));
        assert_eq!(p.on_interest(i, SimTime::ZERO).len(), 1);
        assert_eq!(p.produced(), 2);
        assert!(p.on_interest(Interest::new(n("/n2/4"), Nonce(0), SimDuration::from_secs(1)), SimTime::ZERO).is_empty());
    }

    #[test]
    fn push_generates_unsolicited_on_lora_face() {
        let mut p = ProducerApp::new(n("/n1"), FaceId(9), ProducerMode::Push, 1);
        let mut l = Ledger::new();
        let out = p.generate(n("/n1/1"), SimTime::ZERO, &mut l);
        assert!(matches!(&out[..], [AppOutput::Direct { face: FaceId(9), packet: Packet::Data(_) }]));
        assert_eq!(l.len(), 1);
        assert!(p.on_interest(Interest::new(n("/n1/1"), Nonce(0), SimDuration::from_secs(1)), SimTime::ZERO).is_empty());
    }

    #[test]
    fn registration_ack_marks_registered() {
        let mut p = ProducerApp::new(n("/n1"), FaceId(9), ProducerMode::Pull, 1);
        let AppOutput::Direct { packet: Packet::Interest(i), .. } = p.register(SimDuration::from_secs(60)) else { panic!() };
        assert!(i.registration);
        assert!(!p.is_registered());
        p.on_data(Data::new(n("/n1"), Payload::Ack), SimTime::ZERO);
        assert!(p.is_registered());
    }
}
