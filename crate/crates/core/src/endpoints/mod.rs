//! Application behaviour at the edges: the Internet consumer, the LoRa producer,
//! workload generation and transaction bookkeeping.

mod consumer;
mod ledger;
mod producer;
mod ring;
mod workload;

pub use consumer::{ConsumerApp, ConsumerConfig};
pub use ledger::{Initiator, Ledger, Outcome, Transaction};
pub use producer::{ProducerApp, ProducerMode};
pub use ring::{RetryRing, RingEntry};
pub use workload::{Workload, WorkloadError};

use crate::packet::{Data, FaceId, Interest, Packet};

/// What an application hands to its local forwarder.
#[derive(Debug, Clone, PartialEq)]
pub enum AppOutput {
    /// Interest into the forwarding pipeline from the application face.
    Express(Interest),
    /// Data answering a pending Interest, into the pipeline from the application face.
    Reply(Data),
    /// Packet sent straight out of `face`, bypassing the FIB.
    Direct { face: FaceId, packet: Packet },
}
