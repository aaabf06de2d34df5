//! Packet-level trace of a run and the protocol properties checked against it.

use std::collections::BTreeMap;

use super::engine::{Simulation, CONSUMER, FORWARDER, GATEWAY};
use crate::forwarder::{DropReason, SendCause};
use crate::name::Name;
use crate::packet::{FaceId, PacketKind};
use crate::time::SimTime;

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    Send { face: FaceId, kind: PacketKind, name: Name, cause: SendCause, control: bool },
    Receive { face: FaceId, kind: PacketKind, name: Name },
    Lost { link: usize, name: Name },
    TempFib { prefix: Name, face: FaceId },
    Drop { name: Name, reason: DropReason },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub time: SimTime,
    pub node: usize,
    pub event: TraceEvent,
}

/// Violations found by [`check_properties`], grouped by property.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyReport {
    pub flow_balance: Vec<String>,
    pub aggregation: Vec<String>,
    pub retransmission_bound: Vec<String>,
    pub control_in_cs: Vec<String>,
    pub temporary_fib_leak: Vec<String>,
    pub conservation: Vec<String>,
    pub custodian: Vec<String>,
}

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.all().all(|(_, v)| v.is_empty())
    }

    pub fn all(&self) -> impl Iterator<Item = (&'static str, &Vec<String>)> {
        [
            ("flow_balance", &self.flow_balance),
            ("aggregation", &self.aggregation),
            ("retransmission_bound", &self.retransmission_bound),
            ("control_in_cs", &self.control_in_cs),
            ("temporary_fib_leak", &self.temporary_fib_leak),
            ("conservation", &self.conservation),
            ("custodian", &self.custodian),
        ]
        .into_iter()
    }
}

/// Checks a finished traced run. Trace-based checks are skipped when tracing was off.
pub fn check_properties(sim: &Simulation) -> PropertyReport {
    let mut r = PropertyReport::default();
    let timers = sim.config().timers;
    let role_timers = |n: usize| match n {
        CONSUMER => timers.consumer,
        FORWARDER => timers.forwarder,
        GATEWAY => timers.gateway,
        _ => timers.node,
    };

    // Data leaves a face only against an Interest that came in on it.
    let mut credit: BTreeMap<(usize, FaceId, &Name), u32> = BTreeMap::new();
    // Upstream sends while the node's PIT entry for the name is alive.
    let mut pending: BTreeMap<(usize, &Name), (SimTime, u32)> = BTreeMap::new();
    for rec in sim.trace() {
        let n = rec.node;
        match &rec.event {
            TraceEvent::Receive { face, kind: PacketKind::Interest, name } => {
                *credit.entry((n, *face, name)).or_default() += 1;
            }
            TraceEvent::Receive { kind: PacketKind::Data, name, .. } => {
                pending.remove(&(n, name));
            }
            TraceEvent::Send { face, kind: PacketKind::Data, name, cause, .. } if *cause != SendCause::Unsolicited => {
                match credit.get_mut(&(n, *face, name)) {
                    Some(c) if *c > 0 => *c = 0,
                    _ => r.flow_balance.push(format!("{}: node {n} sent Data {name} on {face:?} without a pending Interest", rec.time)),
                }
            }
            TraceEvent::Send { kind: PacketKind::Interest, name, cause: SendCause::Forward, .. } => {
                let t = role_timers(n);
                if let Some((until, _)) = pending.get(&(n, name)) {
                    if *until > rec.time {
                        r.aggregation.push(format!("{}: node {n} forwarded {name} again while its PIT entry was alive", rec.time));
                    }
                }
                pending.insert((n, name), (rec.time + t.pit_timeout, 0));
            }
            TraceEvent::Send { kind: PacketKind::Interest, name, cause: SendCause::Retransmit, .. } => {
                let t = role_timers(n);
                if let Some((until, count)) = pending.get_mut(&(n, name)) {
                    if *until > rec.time {
                        *count += 1;
                        if *count > t.retx_attempts {
                            r.retransmission_bound.push(format!("{}: node {n} retransmitted {name} {count} times", rec.time));
                        }
                    }
                }
            }
            _ => {}
        }
    }

    for (i, node) in sim.nodes().iter().enumerate() {
        let fwd = node.forwarder();
        for (name, e) in fwd.cs().iter() {
            if e.data.payload.is_control() {
                r.control_in_cs.push(format!("node {i} caches control data {name}"));
            }
        }
        for e in fwd.fib().entries().iter().filter(|e| e.temporary) {
            if e.expires_at.is_none_or(|t| t <= sim.now()) {
                r.temporary_fib_leak.push(format!("node {i} keeps temporary route {} past its lifetime", e.prefix));
            }
        }
    }

    if let Some(g) = sim.nodes()[GATEWAY].gateway() {
        let prefixes: Vec<&Name> = g.registrations().map(|r| &r.prefix).collect();
        for (name, _) in g.forwarder().cs().iter() {
            if !prefixes.iter().any(|p| p.is_prefix_of(name)) {
                r.custodian.push(format!("gateway caches {name} outside every registered prefix"));
            }
        }
    }

    let in_flight = sim.in_flight();
    for (l, link) in sim.link_reports().iter().enumerate() {
        for (d, led) in link.directions.iter().enumerate() {
            if led.departed != led.lost + led.delivered + in_flight[l][d] {
                r.conservation.push(format!(
                    "{} dir {d}: departed {} != lost {} + delivered {} + in flight {}",
                    link.name, led.departed, led.lost, led.delivered, in_flight[l][d]
                ));
            }
        }
    }
    r
}
