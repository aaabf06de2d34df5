//! Delay-tolerant Information-Centric Networking over DSME-LoRa: protocol
//! building blocks and a deterministic discrete-event simulator.

pub mod dsme;
pub mod endpoints;
pub mod forwarder;
pub mod gateway;
pub mod name;
pub mod packet;
pub mod sim;
pub mod time;

pub use name::Name;
pub use packet::{Data, FaceId, Interest, Nonce, Packet, Payload};
pub use time::{SimDuration, SimTime};
