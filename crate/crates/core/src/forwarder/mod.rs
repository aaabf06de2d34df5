//! The ICN forwarding engine shared by every node.
//!
//! A [`Forwarder`] owns a PIT, FIB and CS and turns incoming packets and timer
//! ticks into a list of [`Action`]s. It never touches links or clocks itself; the
//! simulation engine applies the actions.

mod cs;
mod fib;
mod pit;

pub use cs::{ContentStore, CsEntry, DEFAULT_CS_CAPACITY};
pub use fib::{Fib, FibEntry, FibError};
pub use pit::{Pit, PitEntry};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::name::Name;
use crate::packet::{Data, FaceId, Interest, Nonce, Packet};
use crate::time::{SimDuration, SimTime};

/// Who retransmits unanswered Interests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RetxMode {
    /// In-network: the forwarder re-sends pending Interests upstream.
    Inr,
    /// Consumer: only the consuming application re-sends; forwarders never do.
    Cr,
    Off,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimerError {
    #[error("PIT timeout must be positive")]
    ZeroPitTimeout,
    #[error("retransmission interval must be positive when attempts > 0")]
    ZeroRetxInterval,
    #[error("mode OFF requires zero retransmission attempts, got {0}")]
    OffWithAttempts(u32),
}

/// One node's PIT lifetime and retransmission schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimerConfig {
    pub pit_timeout: SimDuration,
    pub retx_attempts: u32,
    pub retx_interval: SimDuration,
    pub mode: RetxMode,
}

impl TimerConfig {
    pub fn new(pit_timeout: SimDuration, retx_attempts: u32, retx_interval: SimDuration, mode: RetxMode) -> Result<Self, TimerError> {
        if pit_timeout.is_zero() {
            return Err(TimerError::ZeroPitTimeout);
        }
        if mode == RetxMode::Off && retx_attempts != 0 {
            return Err(TimerError::OffWithAttempts(retx_attempts));
        }
        if retx_attempts > 0 && retx_interval.is_zero() {
            return Err(TimerError::ZeroRetxInterval);
        }
        Ok(TimerConfig { pit_timeout, retx_attempts, retx_interval, mode })
    }

    /// Shorthand for whole-second settings, e.g. `secs(4, 3, 1, Inr)` for "4 s, 3:1".
    pub fn secs(pit: u64, attempts: u32, interval: u64, mode: RetxMode) -> Self {
        TimerConfig::new(SimDuration::from_secs(pit), attempts, SimDuration::from_secs(interval), mode)
            .expect("valid whole-second timer config")
    }

    /// PIT lifetime only, no retransmissions.
    pub fn pit_only(pit: u64) -> Self {
        TimerConfig::secs(pit, 0, 0, RetxMode::Off)
    }

    fn forwarder_retransmits(&self) -> bool {
        self.mode == RetxMode::Inr && self.retx_attempts > 0
    }
}

/// Why a packet was sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SendCause {
    /// First upstream forward of a new PIT entry.
    Forward,
    /// In-network or consumer retransmission of a pending Interest.
    Retransmit,
    CacheHit,
    /// Data fanned out to a PIT entry's downstream faces.
    PitSatisfied,
    /// Originated outside the pipeline (gateway replies, registrations).
    Origin,
    /// Data pushed without any Interest asking for it.
    Unsolicited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DropReason {
    NoRoute,
    Unsolicited,
    Unauthorized,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Send { face: FaceId, packet: Packet, cause: SendCause },
    InstallTempFib { prefix: Name, face: FaceId },
    DeliverToApp(Packet),
    Drop { name: Name, reason: DropReason },
}

#[derive(Debug, Clone)]
pub struct Forwarder {
    app_face: FaceId,
    timers: TimerConfig,
    pit: Pit,
    fib: Fib,
    cs: ContentStore,
    nonces: ChaCha8Rng,
    expired: u64,
}

impl Forwarder {
    pub fn new(app_face: FaceId, timers: TimerConfig, nonce_seed: u64) -> Self {
        Forwarder {
            app_face,
            timers,
            pit: Pit::default(),
            fib: Fib::default(),
            cs: ContentStore::default(),
            nonces: ChaCha8Rng::seed_from_u64(nonce_seed),
            expired: 0,
        }
    }

    pub fn app_face(&self) -> FaceId {
        self.app_face
    }

    pub fn timers(&self) -> &TimerConfig {
        &self.timers
    }

    pub fn configure(&mut self, timers: TimerConfig) {
        self.timers = timers;
    }

    pub fn fib_add(&mut self, prefix: Name, face: FaceId, temporary: bool, ttl: Option<SimDuration>, now: SimTime) -> Result<(), FibError> {
        self.fib.add(prefix, face, temporary, ttl.map(|d| now + d))
    }

    pub fn cs_capacity(&mut self, n: usize) {
        self.cs.set_capacity(n);
    }

    pub fn pit(&self) -> &Pit {
        &self.pit
    }

    pub fn pit_mut(&mut self) -> &mut Pit {
        &mut self.pit
    }

    pub fn fib(&self) -> &Fib {
        &self.fib
    }

    pub fn fib_mut(&mut self) -> &mut Fib {
        &mut self.fib
    }

    pub fn cs(&self) -> &ContentStore {
        &self.cs
    }

    pub fn cs_mut(&mut self) -> &mut ContentStore {
        &mut self.cs
    }

    /// PIT entries that timed out without Data.
    pub fn expired_count(&self) -> u64 {
        self.expired
    }

    pub fn fresh_nonce(&mut self) -> Nonce {
        Nonce(self.nonces.gen())
    }

    fn emit(&self, face: FaceId, packet: Packet, cause: SendCause) -> Action {
        if face == self.app_face {
            Action::DeliverToApp(packet)
        } else {
            Action::Send { face, packet, cause }
        }
    }

    /// Interest pipeline: CS, then PIT aggregation, then FIB.
    pub fn on_interest(&mut self, face: FaceId, interest: Interest, now: SimTime) -> Vec<Action> {
        if let Some(data) = self.cs.lookup(&interest.name, now) {
            return vec![self.emit(face, data.into(), SendCause::CacheHit)];
        }

        if let Some(entry) = self.pit.get_mut(&interest.name) {
            // The local consumer re-expressing its own pending Interest is a consumer
            // retransmission: it goes upstream instead of being aggregated.
            if face == self.app_face && entry.downstream_faces.contains(&face) {
                if let Some(up) = entry.upstream_face.filter(|f| *f != self.app_face) {
                    return vec![Action::Send { face: up, packet: interest.into(), cause: SendCause::Retransmit }];
                }
            }
            entry.downstream_faces.insert(face);
            return Vec::new();
        }

        let mut actions = Vec::new();
        if let Some(announced) = interest.reflexive.clone() {
            if face != self.app_face {
                self.fib.install_temporary(announced.clone(), face, now + interest.lifetime);
                actions.push(Action::InstallTempFib { prefix: announced, face });
            }
        }

        let Some(out) = self.fib.lookup(&interest.name) else {
            actions.push(Action::Drop { name: interest.name, reason: DropReason::NoRoute });
            return actions;
        };

        let expires_at = now + self.timers.pit_timeout;
        let app_face = self.app_face;
        let timers = self.timers;
        let entry = self.pit.create(&interest, Some(face), now, expires_at);
        entry.upstream_face = Some(out);
        if timers.forwarder_retransmits() && out != app_face {
            entry.retx_remaining = timers.retx_attempts;
            entry.next_retx_at = Some(now + timers.retx_interval);
        }
        actions.push(self.emit(out, interest.into(), SendCause::Forward));
        actions
    }

    /// Creates PIT state for `interest` and sends it on `face`, bypassing the FIB.
    pub fn send_interest_on(&mut self, face: FaceId, interest: Interest, now: SimTime) -> Vec<Action> {
        let expires_at = now + self.timers.pit_timeout;
        let app_face = self.app_face;
        let timers = self.timers;
        let entry = self.pit.create(&interest, Some(app_face), now, expires_at);
        entry.upstream_face = Some(face);
        if timers.forwarder_retransmits() && face != app_face {
            entry.retx_remaining = timers.retx_attempts;
            entry.next_retx_at = Some(now + timers.retx_interval);
        }
        vec![self.emit(face, interest.into(), SendCause::Origin)]
    }

    /// Sends Data that no PIT entry asked for (local unsolicited data).
    pub fn send_unsolicited(&self, face: FaceId, data: Data) -> Action {
        self.emit(face, data.into(), SendCause::Unsolicited)
    }

    /// Data pipeline: fan out to the PIT entry's downstream faces, cache, drop temporary FIB state.
    pub fn on_data(&mut self, face: FaceId, data: Data, now: SimTime) -> Vec<Action> {
        let Some(entry) = self.pit.remove(&data.name) else {
            return vec![Action::Drop { name: data.name, reason: DropReason::Unsolicited }];
        };
        let mut actions: Vec<Action> = entry
            .downstream_faces
            .iter()
            .filter(|f| **f != face)
            .map(|f| self.emit(*f, data.clone().into(), SendCause::PitSatisfied))
            .collect();
        self.fib.remove_temporary(&data.name);
        if data.is_cacheable() {
            let _ = self.cs.insert(data, now);
        }
        // keep deliveries to the application last so remote sends go out first
        actions.sort_by_key(|a| matches!(a, Action::DeliverToApp(_)));
        actions
    }

    /// Expires PIT and temporary FIB state and performs due in-network retransmissions.
    pub fn tick(&mut self, now: SimTime) -> Vec<Action> {
        self.expired += self.pit.expire(now).len() as u64;
        self.fib.expire(now);

        let interval = self.timers.retx_interval;
        let mut due = Vec::new();
        for entry in self.pit.iter_mut() {
            let Some(at) = entry.next_retx_at else { continue };
            if at > now || entry.retx_remaining == 0 {
                continue;
            }
            entry.retx_remaining -= 1;
            entry.next_retx_at = (entry.retx_remaining > 0).then_some(at + interval);
            if let Some(up) = entry.upstream_face {
                due.push((up, entry.interest.clone()));
            }
        }
        due.into_iter()
            .map(|(up, interest)| {
                let nonce = self.fresh_nonce();
                Action::Send { face: up, packet: interest.with_nonce(nonce).into(), cause: SendCause::Retransmit }
            })
            .collect()
    }

    /// Earliest time at which [`Forwarder::tick`] has work to do.
    pub fn next_deadline(&self) -> Option<SimTime> {
        match (self.pit.next_deadline(), self.fib.next_expiry()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}
