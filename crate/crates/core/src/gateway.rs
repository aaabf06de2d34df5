//! Gateway behaviours layered on a forwarder: node registration, delay-tolerant
//! retrieval (WAIT/NACK), custodial caching of unsolicited LoRa data, and
//! phone-home indications for reflexive push.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsme::DsmeTiming;
use crate::forwarder::{Action, DropReason, Forwarder, SendCause};
use crate::name::Name;
use crate::packet::{Data, FaceId, Interest, Packet, Payload};
use crate::time::{SimDuration, SimTime};

/// Slack added on top of the LoRa worst case when estimating the WAIT hint.
pub const DEFAULT_INTERNET_ALLOWANCE: SimDuration = SimDuration::from_micros(320_000);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GatewayMode {
    Vanilla,
    DelayTolerant,
    ReflexivePush,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Registration {
    pub prefix: Name,
    pub lora_face: FaceId,
    pub registered_at: SimTime,
    pub expires_at: Option<SimTime>,
}

/// Retry hint carried in a WAIT payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WaitEstimate(SimDuration);

impl WaitEstimate {
    /// Static worst case: one full multi-superframe, the Interest and data slots, and an Internet allowance.
    pub fn worst_case(t: &DsmeTiming, internet_allowance: SimDuration) -> Self {
        WaitEstimate(t.multisuperframe_duration + t.slot_duration * 2 + internet_allowance)
    }

    /// Explicit override; zero is rejected.
    pub fn fixed(d: SimDuration) -> Option<Self> {
        (!d.is_zero()).then_some(WaitEstimate(d))
    }

    pub fn duration(self) -> SimDuration {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("{0} is not in the content store")]
    NotCached(Name),
    #[error("no phone-home destination provisioned for {0}")]
    NoPhoneHomeTarget(Name),
}

/// Things the gateway reports to whoever drives it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GatewayEvent {
    Registered { prefix: Name, face: FaceId },
    RegistrationRejected { prefix: Name, face: FaceId },
    IndicationAcked { content: Name },
    IndicationFailed { content: Name },
}

#[derive(Debug, Clone)]
struct PendingIndication {
    indication: Name,
    deadline: SimTime,
}

#[derive(Debug, Clone)]
pub struct Gateway {
    fwd: Forwarder,
    mode: GatewayMode,
    lora_faces: BTreeSet<FaceId>,
    registrations: BTreeMap<Name, Registration>,
    registration_ttl: Option<SimDuration>,
    wait: WaitEstimate,
    phone_home: BTreeMap<Name, Name>,
    pending_indications: BTreeMap<Name, PendingIndication>,
    events: Vec<GatewayEvent>,
}

impl Gateway {
    pub fn new(fwd: Forwarder, mode: GatewayMode, wait: WaitEstimate) -> Self {
        Gateway {
            fwd,
            mode,
            lora_faces: BTreeSet::new(),
            registrations: BTreeMap::new(),
            registration_ttl: None,
            wait,
            phone_home: BTreeMap::new(),
            pending_indications: BTreeMap::new(),
            events: Vec::new(),
        }
    }

    pub fn add_lora_face(&mut self, face: FaceId) {
        self.lora_faces.insert(face);
    }

    pub fn set_registration_ttl(&mut self, ttl: Option<SimDuration>) {
        self.registration_ttl = ttl;
    }

    /// Provisions the phone-home destination for content under `node_prefix`.
    pub fn set_phone_home_target(&mut self, node_prefix: Name, target: Name) {
        self.phone_home.insert(node_prefix, target);
    }

    pub fn mode(&self) -> GatewayMode {
        self.mode
    }

    pub fn forwarder(&self) -> &Forwarder {
        &self.fwd
    }

    pub fn forwarder_mut(&mut self) -> &mut Forwarder {
        &mut self.fwd
    }

    pub fn registrations(&self) -> impl Iterator<Item = &Registration> {
        self.registrations.values()
    }

    pub fn drain_events(&mut self) -> Vec<GatewayEvent> {
        std::mem::take(&mut self.events)
    }

    pub fn estimate_wait(&self, _now: SimTime) -> WaitEstimate {
        self.wait
    }

    fn covering_registration(&self, name: &Name) -> Option<&Registration> {
        self.registrations.values().filter(|r| r.prefix.is_prefix_of(name)).max_by_key(|r| r.prefix.len())
    }

    /// Entry point for every packet arriving at the gateway.
    pub fn on_packet(&mut self, face: FaceId, packet: Packet, now: SimTime) -> Vec<Action> {
        let from_lora = self.lora_faces.contains(&face);
        let actions = match packet {
            Packet::Interest(i) if from_lora && i.registration => vec![self.handle_registration(face, &i, now)],
            Packet::Interest(i) if !from_lora && self.mode == GatewayMode::DelayTolerant => {
                self.on_consumer_interest(face, i, now)
            }
            Packet::Interest(i) => self.fwd.on_interest(face, i, now),
            Packet::Data(d) if from_lora && !self.fwd.pit().contains(&d.name) => self.on_unsolicited_data(face, d, now),
            Packet::Data(d) => self.fwd.on_data(face, d, now),
        };
        self.absorb(actions)
    }

    // Handles deliveries addressed to the gateway itself (indication ACKs).
    fn absorb(&mut self, actions: Vec<Action>) -> Vec<Action> {
        actions
            .into_iter()
            .filter(|a| match a {
                Action::DeliverToApp(Packet::Data(d)) => {
                    if let Some(content) = self
                        .pending_indications
                        .iter()
                        .find(|(_, p)| p.indication == d.name)
                        .map(|(c, _)| c.clone())
                    {
                        self.pending_indications.remove(&content);
                        self.events.push(GatewayEvent::IndicationAcked { content });
                    }
                    false
                }
                Action::DeliverToApp(Packet::Interest(_)) => false,
                _ => true,
            })
            .collect()
    }

    /// Registers the prefix named by an overloaded Interest from a LoRa node.
    pub fn handle_registration(&mut self, face: FaceId, i: &Interest, now: SimTime) -> Action {
        let prefix = i.name.clone();
        let expires_at = self.registration_ttl.map(|ttl| now + ttl);
        let payload = match self.registrations.get_mut(&prefix) {
            Some(r) if r.lora_face != face => {
                self.events.push(GatewayEvent::RegistrationRejected { prefix: prefix.clone(), face });
                Payload::Nack
            }
            Some(r) => {
                r.expires_at = expires_at;
                Payload::Ack
            }
            None => {
                self.registrations.insert(
                    prefix.clone(),
                    Registration { prefix: prefix.clone(), lora_face: face, registered_at: now, expires_at },
                );
                let _ = self.fwd.fib_add(prefix.clone(), face, false, None, now);
                self.lora_faces.insert(face);
                self.events.push(GatewayEvent::Registered { prefix: prefix.clone(), face });
                Payload::Ack
            }
        };
        Action::Send { face, packet: Data::new(prefix, payload).into(), cause: SendCause::Origin }
    }

    /// Delay-tolerant retrieval server logic for Interests from the Internet side.
    pub fn on_consumer_interest(&mut self, face: FaceId, i: Interest, now: SimTime) -> Vec<Action> {
        if let Some(data) = self.fwd.cs_mut().lookup(&i.name, now) {
            return vec![Action::Send { face, packet: data.into(), cause: SendCause::CacheHit }];
        }
        let Some(lora_face) = self.covering_registration(&i.name).map(|r| r.lora_face) else {
            return vec![Action::Send { face, packet: Data::new(i.name, Payload::Nack).into(), cause: SendCause::Origin }];
        };
        let wait = Data::new(i.name.clone(), Payload::Wait(self.estimate_wait(now).duration()));
        let mut actions = Vec::with_capacity(2);
        if !self.fwd.pit().contains(&i.name) {
            let expires_at = now + self.fwd.timers().pit_timeout;
            // The WAIT answers the downstream side, so the entry keeps no downstream faces.
            let entry = self.fwd.pit_mut().create(&i, None, now, expires_at);
            entry.upstream_face = Some(lora_face);
            actions.push(Action::Send { face: lora_face, packet: i.into(), cause: SendCause::Forward });
        }
        actions.push(Action::Send { face, packet: wait.into(), cause: SendCause::Origin });
        actions
    }

    /// Custodial acceptance of Data pushed by a registered node.
    pub fn on_unsolicited_data(&mut self, face: FaceId, d: Data, now: SimTime) -> Vec<Action> {
        let authorized = self.covering_registration(&d.name).is_some_and(|r| r.lora_face == face);
        if !authorized || !d.is_cacheable() {
            return vec![Action::Drop { name: d.name, reason: DropReason::Unauthorized }];
        }
        let name = d.name.clone();
        let _ = self.fwd.cs_mut().insert(d, now);
        if self.mode == GatewayMode::ReflexivePush {
            match self.init_phone_home(&name, now) {
                Ok(actions) => return actions,
                Err(_) => self.events.push(GatewayEvent::IndicationFailed { content: name }),
            }
        }
        Vec::new()
    }

    /// Announces cached `content` to its provisioned phone-home destination with a reflexive indication.
    pub fn init_phone_home(&mut self, content: &Name, now: SimTime) -> Result<Vec<Action>, GatewayError> {
        if !self.fwd.cs().contains(content) {
            return Err(GatewayError::NotCached(content.clone()));
        }
        let target = self
            .phone_home
            .iter()
            .filter(|(prefix, _)| prefix.is_prefix_of(content))
            .max_by_key(|(prefix, _)| prefix.len())
            .map(|(_, t)| t.clone())
            .ok_or_else(|| GatewayError::NoPhoneHomeTarget(content.clone()))?;
        let indication_name = target.join(content);
        let lifetime = self.fwd.timers().pit_timeout;
        let nonce = self.fwd.fresh_nonce();
        let indication = Interest::indication(indication_name.clone(), content.clone(), nonce, lifetime);
        let app = self.fwd.app_face();
        let actions = self.fwd.on_interest(app, indication, now);
        self.pending_indications
            .insert(content.clone(), PendingIndication { indication: indication_name, deadline: now + lifetime });
        Ok(self.absorb(actions))
    }

    pub fn tick(&mut self, now: SimTime) -> Vec<Action> {
        let actions = self.fwd.tick(now);
        let failed: Vec<Name> =
            self.pending_indications.iter().filter(|(_, p)| p.deadline <= now).map(|(c, _)| c.clone()).collect();
        for content in failed {
            self.pending_indications.remove(&content);
            self.events.push(GatewayEvent::IndicationFailed { content });
        }
        let expired: Vec<Registration> = self
            .registrations
            .values()
            .filter(|r| r.expires_at.is_some_and(|t| t <= now))
            .cloned()
            .collect();
        for r in expired {
            self.registrations.remove(&r.prefix);
            self.fwd.fib_mut().remove_face_prefix(&r.prefix, r.lora_face);
        }
        self.absorb(actions)
    }

    pub fn next_deadline(&self) -> Option<SimTime> {
        let own = self
            .pending_indications
            .values()
            .map(|p| p.deadline)
            .chain(self.registrations.values().filter_map(|r| r.expires_at))
            .min();
        match (self.fwd.next_deadline(), own) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}
