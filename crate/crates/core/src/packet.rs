//! Interest and Data packets plus the fixed frame sizes used for accounting.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::name::Name;
use crate::time::SimDuration;

/// Frame size of every Interest on the air or the wire, in bytes.
pub const INTEREST_WIRE_SIZE: usize = 31;
/// Frame size of every Data packet, in bytes, regardless of payload kind.
pub const DATA_WIRE_SIZE: usize = 36;

/// Per-emission Interest nonce drawn from a seeded stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Nonce(pub u32);

/// Opaque face handle. Each face belongs to one node and points at one link (or the local application).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId(pub u32);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "face{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interest {
    pub name: Name,
    pub nonce: Nonce,
    pub lifetime: SimDuration,
    /// Set on phone-home indications: the announced content name. Each forwarder
    /// that sees it installs a temporary FIB entry for this name toward the incoming face.
    pub reflexive: Option<Name>,
    /// Overloaded Interest by which a LoRa node announces its prefix (`name`).
    pub registration: bool,
}

impl Interest {
    pub fn new(name: Name, nonce: Nonce, lifetime: SimDuration) -> Self {
        Interest { name, nonce, lifetime, reflexive: None, registration: false }
    }

    pub fn indication(name: Name, announced: Name, nonce: Nonce, lifetime: SimDuration) -> Self {
        Interest { name, nonce, lifetime, reflexive: Some(announced), registration: false }
    }

    pub fn registration(prefix: Name, nonce: Nonce, lifetime: SimDuration) -> Self {
        Interest { name: prefix, nonce, lifetime, reflexive: None, registration: true }
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexive.is_some()
    }

    /// Same Interest with a fresh nonce, as emitted by a retransmission.
    pub fn with_nonce(&self, nonce: Nonce) -> Self {
        Interest { nonce, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Payload {
    Value(i64),
    Ack,
    Nack,
    /// Deferred answer: retry after the estimated data arrival time.
    Wait(SimDuration),
}

impl Payload {
    /// Control payloads never enter a content store.
    pub fn is_control(&self) -> bool {
        !matches!(self, Payload::Value(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Data {
    pub name: Name,
    pub payload: Payload,
    pub no_cache: bool,
}

impl Data {
    /// Builds a Data packet. Ack, Nack, and Wait payloads are always marked `no_cache`.
    pub fn new(name: Name, payload: Payload) -> Self {
        let no_cache = payload.is_control();
        Data { name, payload, no_cache }
    }

    pub fn value(name: Name, v: i64) -> Self {
        Data::new(name, Payload::Value(v))
    }

    pub fn is_cacheable(&self) -> bool {
        !self.no_cache && !self.payload.is_control()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PacketKind {
    Interest,
    Data,
}

impl Packet {
    pub fn name(&self) -> &Name {
        match self {
            Packet::Interest(i) => &i.name,
            Packet::Data(d) => &d.name,
        }
    }

    pub fn kind(&self) -> PacketKind {
        match self {
            Packet::Interest(_) => PacketKind::Interest,
            Packet::Data(_) => PacketKind::Data,
        }
    }
}

impl From<Interest> for Packet {
    fn from(i: Interest) -> Self {
        Packet::Interest(i)
    }
}

impl From<Data> for Packet {
    fn from(d: Data) -> Self {
        Packet::Data(d)
    }
}

/// Accounted frame size; depends only on the packet kind.
pub fn wire_size(p: &Packet) -> usize {
    match p.kind() {
        PacketKind::Interest => INTEREST_WIRE_SIZE,
        PacketKind::Data => DATA_WIRE_SIZE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn frame_sizes() {
        let i = Interest::new(n("/n1/7"), Nonce(1), SimDuration::from_secs(4));
        assert_eq!(wire_size(&i.into()), 31);
        assert_eq!(wire_size(&Data::value(n("/n1/7"), 5).into()), 36);
        let wait = Data::new(n("/n1/7"), Payload::Wait(SimDuration::from_secs(32)));
        assert_eq!(wire_size(&wait.into()), 36);
    }

    #[test]
    fn control_payloads_are_not_cacheable() {
        for p in [Payload::Ack, Payload::Nack, Payload::Wait(SimDuration::from_secs(1))] {
            let d = Data::new(n("/a"), p);
            assert!(d.no_cache);
            assert!(!d.is_cacheable());
        }
        assert!(Data::value(n("/a"), 1).is_cacheable());
    }

    fn arb_packet() -> impl Strategy<Value = Packet> {
        let name = prop::collection::vec("[a-z]{1,8}", 1..6)
            .prop_map(|c| Name::from_components(c).unwrap());
        let payload = prop_oneof![
            any::<i64>().prop_map(Payload::Value),
            Just(Payload::Ack),
            Just(Payload::Nack),
            (1u64..100_000_000).prop_map(|us| Payload::Wait(SimDuration::from_micros(us))),
        ];
        prop_oneof![
            (name.clone(), any::<u32>(), any::<bool>()).prop_map(|(name, nonce, refl)| {
                let mut i = Interest::new(name.clone(), Nonce(nonce), SimDuration::from_secs(4));
                if refl {
                    i.reflexive = Some(name);
                }
                Packet::Interest(i)
            }),
            (name, payload).prop_map(|(name, p)| Packet::Data(Data::new(name, p))),
        ]
    }

    proptest! {
        #[test]
        fn size_depends_only_on_kind(p in arb_packet()) {
            let expected = match p { Packet::Interest(_) => 31, Packet::Data(_) => 36 };
            prop_assert_eq!(wire_size(&p), expected);
        }
    }
}
