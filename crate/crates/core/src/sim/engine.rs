use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::link::{DirectionLedger, InternetLink, LinkModel, LinkReport, LoraLink};
use super::metrics::{MetricsReport, NodeCounters, NodeRole};
use super::scenario::{ConfigError, LossScope, Radio, ScenarioConfig};
use super::trace::{TraceEvent, TraceRecord};
use crate::dsme::{derive_timing, DsmeTiming, SlotAssignment};
use crate::endpoints::{AppOutput, ConsumerApp, ConsumerConfig, Ledger, ProducerApp, ProducerMode};
use crate::forwarder::{Action, DropReason, Forwarder, SendCause};
use crate::gateway::{Gateway, GatewayEvent, WaitEstimate, DEFAULT_INTERNET_ALLOWANCE};
use crate::name::Name;
use crate::packet::{FaceId, Packet};
use crate::time::SimTime;

pub const CONSUMER: usize = 0;
pub const FORWARDER: usize = 1;
pub const GATEWAY: usize = 2;
pub const NODE: usize = 3;

const APP: FaceId = FaceId(0);

// Independent random streams derived from the master seed.
const STREAM_WORKLOAD: u64 = 1;
const STREAM_SLOTS: u64 = 2;
const STREAM_NONCES: u64 = 3;
const STREAM_LOSS: u64 = 4;
const STREAM_VALUES: u64 = 5;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone)]
enum Behavior {
    Consumer { fwd: Forwarder, app: ConsumerApp },
    Relay(Forwarder),
    Gateway(Gateway),
    Producer { fwd: Forwarder, app: ProducerApp },
}

#[derive(Debug, Clone)]
pub struct SimNode {
    pub label: &'static str,
    pub role: NodeRole,
    behavior: Behavior,
}

impl SimNode {
    pub fn forwarder(&self) -> &Forwarder {
        match &self.behavior {
            Behavior::Consumer { fwd, .. } | Behavior::Producer { fwd, .. } | Behavior::Relay(fwd) => fwd,
            Behavior::Gateway(g) => g.forwarder(),
        }
    }

    fn forwarder_mut(&mut self) -> &mut Forwarder {
        match &mut self.behavior {
            Behavior::Consumer { fwd, .. } | Behavior::Producer { fwd, .. } | Behavior::Relay(fwd) => fwd,
            Behavior::Gateway(g) => g.forwarder_mut(),
        }
    }

    pub fn gateway(&self) -> Option<&Gateway> {
        match &self.behavior {
            Behavior::Gateway(g) => Some(g),
            _ => None,
        }
    }

    pub fn consumer(&self) -> Option<&ConsumerApp> {
        match &self.behavior {
            Behavior::Consumer { app, .. } => Some(app),
            _ => None,
        }
    }

    pub fn producer(&self) -> Option<&ProducerApp> {
        match &self.behavior {
            Behavior::Producer { app, .. } => Some(app),
            _ => None,
        }
    }

    fn next_deadline(&self) -> Option<SimTime> {
        let (a, b) = match &self.behavior {
            Behavior::Consumer { fwd, app } => (fwd.next_deadline(), app.next_deadline()),
            Behavior::Relay(fwd) | Behavior::Producer { fwd, .. } => (fwd.next_deadline(), None),
            Behavior::Gateway(g) => (g.next_deadline(), None),
        };
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

#[derive(Debug, Clone)]
enum EventKind {
    Deliver { link: usize, dir: usize, packet: Packet },
    Tick(usize),
    Workload(usize),
}

#[derive(Debug, Clone)]
struct Event {
    time: SimTime,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        (self.time, self.seq) == (other.time, other.seq)
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.time, self.seq).cmp(&(other.time, other.seq))
    }
}

#[derive(Debug, Clone, Copy)]
struct Endpoint {
    node: usize,
    face: FaceId,
}

#[derive(Debug, Clone)]
struct LinkState {
    label: &'static str,
    ends: [Endpoint; 2],
    model: LinkModel,
    ledger: [DirectionLedger; 2],
}

/// One deterministic run of the consumer - forwarder - gateway - LoRa node line.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: ScenarioConfig,
    timing: DsmeTiming,
    assignment: SlotAssignment,
    wait: WaitEstimate,
    now: SimTime,
    seq: u64,
    queue: BinaryHeap<Reverse<Event>>,
    nodes: Vec<SimNode>,
    links: Vec<LinkState>,
    face_link: BTreeMap<(usize, FaceId), (usize, usize)>,
    scheduled: Vec<BTreeSet<SimTime>>,
    ledger: Ledger,
    counters: Vec<NodeCounters>,
    loss_rng: ChaCha8Rng,
    workload_rng: ChaCha8Rng,
    workload: Vec<Name>,
    drops: BTreeMap<DropReason, u64>,
    trace: Vec<TraceRecord>,
    registration_tx: u64,
    indication_failures: u64,
    measurement_start: SimTime,
    end: SimTime,
    finished: bool,
}

impl Simulation {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let timing = derive_timing(&cfg.dsme)?;
        let assignment = SlotAssignment::random(1, &timing, &mut stream(cfg.seed, STREAM_SLOTS));
        let wait = cfg
            .wait_estimate
            .and_then(WaitEstimate::fixed)
            .unwrap_or_else(|| WaitEstimate::worst_case(&timing, DEFAULT_INTERNET_ALLOWANCE));
        let mut nonces = stream(cfg.seed, STREAM_NONCES);
        let mut values = stream(cfg.seed, STREAM_VALUES);
        let t = cfg.timers;
        let prefix = cfg.node_prefix.clone();
        let inbox = cfg.phone_home_target.clone();
        let zero = SimTime::ZERO;

        let mut forwarder = |timers, routes: &[(&Name, u32)]| {
            let mut f = Forwarder::new(APP, timers, nonces.gen());
            f.cs_capacity(cfg.cs_capacity);
            for (p, face) in routes {
                f.fib_add((*p).clone(), FaceId(*face), false, None, zero).expect("distinct routes");
            }
            f
        };
        let c_fwd = forwarder(t.consumer, &[(&prefix, 1), (&inbox, 0)]);
        let f_fwd = forwarder(t.forwarder, &[(&prefix, 2), (&inbox, 1)]);
        let g_fwd = forwarder(t.gateway, &[(&inbox, 1)]);
        let n_fwd = forwarder(t.node, &[(&prefix, 0)]);

        let consumer = ConsumerApp::new(
            ConsumerConfig { timers: t.consumer, ring_capacity: cfg.ring_capacity, ring_timeout: cfg.ring_timeout },
            nonces.gen(),
        );
        let mut gateway = Gateway::new(g_fwd, cfg.scenario.gateway_mode(), wait);
        gateway.add_lora_face(FaceId(2));
        gateway.set_phone_home_target(prefix.clone(), inbox.clone());
        let mode = if cfg.scenario.is_push() { ProducerMode::Push } else { ProducerMode::Pull };
        let producer = ProducerApp::new(prefix, FaceId(1), mode, values.gen());

        let nodes = vec![
            SimNode { label: "consumer", role: NodeRole::Consumer, behavior: Behavior::Consumer { fwd: c_fwd, app: consumer } },
            SimNode { label: "forwarder", role: NodeRole::Forwarder, behavior: Behavior::Relay(f_fwd) },
            SimNode { label: "gateway", role: NodeRole::Gateway, behavior: Behavior::Gateway(gateway) },
            SimNode { label: "node", role: NodeRole::Node, behavior: Behavior::Producer { fwd: n_fwd, app: producer } },
        ];

        let internet = |lossy: bool| {
            LinkModel::Internet(InternetLink { delay: cfg.internet_delay, loss: if lossy { cfg.loss } else { 0.0 } })
        };
        let radio = match cfg.radio {
            Radio::Dsme => LinkModel::Lora(LoraLink::new(assignment, timing, cfg.scenario.is_push())),
            Radio::Ideal => LinkModel::Ideal(cfg.internet_delay),
        };
        let ep = |node, face| Endpoint { node, face: FaceId(face) };
        let links = vec![
            LinkState { label: "consumer-forwarder", ends: [ep(CONSUMER, 1), ep(FORWARDER, 1)], model: internet(true), ledger: Default::default() },
            LinkState {
                label: "forwarder-gateway",
                ends: [ep(FORWARDER, 2), ep(GATEWAY, 1)],
                model: internet(cfg.loss_scope == LossScope::AllHops),
                ledger: Default::default(),
            },
            LinkState { label: "gateway-node", ends: [ep(GATEWAY, 2), ep(NODE, 1)], model: radio, ledger: Default::default() },
        ];
        let mut face_link = BTreeMap::new();
        for (i, l) in links.iter().enumerate() {
            face_link.insert((l.ends[0].node, l.ends[0].face), (i, 0));
            face_link.insert((l.ends[1].node, l.ends[1].face), (i, 1));
        }
        let counters = nodes
            .iter()
            .map(|n| NodeCounters { node: n.label.to_string(), role: n.role, interests_tx: 0, data_tx: 0, lora_tx: 0 })
            .collect();

        Ok(Simulation {
            timing,
            assignment,
            wait,
            now: SimTime::ZERO,
            seq: 0,
            queue: BinaryHeap::new(),
            scheduled: vec![BTreeSet::new(); nodes.len()],
            nodes,
            links,
            face_link,
            ledger: Ledger::new(),
            counters,
            loss_rng: stream(cfg.seed, STREAM_LOSS),
            workload_rng: stream(cfg.seed, STREAM_WORKLOAD),
            workload: Vec::new(),
            drops: BTreeMap::new(),
            trace: Vec::new(),
            registration_tx: 0,
            indication_failures: 0,
            measurement_start: SimTime::ZERO,
            end: SimTime::ZERO,
            finished: false,
            cfg,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn timing(&self) -> &DsmeTiming {
        &self.timing
    }

    pub fn slot_assignment(&self) -> &SlotAssignment {
        &self.assignment
    }

    pub fn wait_estimate(&self) -> WaitEstimate {
        self.wait
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn nodes(&self) -> &[SimNode] {
        &self.nodes
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn end_time(&self) -> SimTime {
        self.end
    }

    /// Registration, workload, drain. Idempotent.
    pub fn run_to_end(&mut self) {
        if self.finished {
            return;
        }
        self.register();
        self.start_workload();
        self.process(Some(self.end));
        self.ledger.close_pending();
        self.finished = true;
    }

    fn register(&mut self) {
        let lifetime = self.cfg.timers.node.pit_timeout;
        let out = match &mut self.nodes[NODE].behavior {
            Behavior::Producer { app, .. } => app.register(lifetime),
            _ => unreachable!("node slot holds the producer"),
        };
        let actions = self.feed(NODE, out);
        self.apply(NODE, actions);
        self.reschedule(NODE);
        self.process(None);
        self.registration_tx = self.counters.iter().map(|c| c.interests_tx + c.data_tx).sum();
        for c in &mut self.counters {
            c.interests_tx = 0;
            c.data_tx = 0;
            c.lora_tx = 0;
        }
        for l in &mut self.links {
            l.ledger = Default::default();
        }
    }

    fn start_workload(&mut self) {
        self.measurement_start = self.now.max(SimTime::ZERO + self.timing.multisuperframe_duration * 2);
        let times = self.cfg.workload.schedule(self.measurement_start, &mut self.workload_rng);
        self.workload = self.cfg.workload.names(&self.cfg.node_prefix);
        for (i, &t) in times.iter().enumerate() {
            self.push(t, EventKind::Workload(i));
        }
        self.end = times.last().copied().unwrap_or(self.measurement_start) + self.cfg.drain;
    }

    fn push(&mut self, time: SimTime, kind: EventKind) {
        debug_assert!(time >= self.now);
        self.seq += 1;
        self.queue.push(Reverse(Event { time, seq: self.seq, kind }));
    }

    fn process(&mut self, until: Option<SimTime>) {
        while let Some(Reverse(top)) = self.queue.peek() {
            if until.is_some_and(|u| top.time > u) {
                break;
            }
            let Reverse(ev) = self.queue.pop().expect("peeked");
            self.now = ev.time;
            match ev.kind {
                EventKind::Deliver { link, dir, packet } => self.deliver(link, dir, packet),
                EventKind::Tick(n) => {
                    self.scheduled[n].remove(&self.now);
                    self.tick(n);
                }
                EventKind::Workload(i) => self.trigger(i),
            }
        }
    }

    fn record(&mut self, node: usize, event: TraceEvent) {
        if self.cfg.trace {
            self.trace.push(TraceRecord { time: self.now, node, event });
        }
    }

    fn deliver(&mut self, link: usize, dir: usize, packet: Packet) {
        let l = &mut self.links[link];
        l.ledger[dir].delivered += 1;
        let to = l.ends[1 - dir];
        self.record(to.node, TraceEvent::Receive { face: to.face, kind: packet.kind(), name: packet.name().clone() });
        let now = self.now;
        let actions = match &mut self.nodes[to.node].behavior {
            Behavior::Gateway(g) => g.on_packet(to.face, packet, now),
            b => {
                let fwd = match b {
                    Behavior::Consumer { fwd, .. } | Behavior::Producer { fwd, .. } | Behavior::Relay(fwd) => fwd,
                    Behavior::Gateway(_) => unreachable!(),
                };
                match packet {
                    Packet::Interest(i) => fwd.on_interest(to.face, i, now),
                    Packet::Data(d) => fwd.on_data(to.face, d, now),
                }
            }
        };
        self.apply(to.node, actions);
        self.reschedule(to.node);
    }

    fn tick(&mut self, n: usize) {
        let now = self.now;
        let (mut actions, outputs) = match &mut self.nodes[n].behavior {
            Behavior::Consumer { fwd, app } => (fwd.tick(now), app.tick(now, &mut self.ledger)),
            Behavior::Relay(fwd) | Behavior::Producer { fwd, .. } => (fwd.tick(now), Vec::new()),
            Behavior::Gateway(g) => (g.tick(now), Vec::new()),
        };
        for o in outputs {
            actions.extend(self.feed(n, o));
        }
        self.apply(n, actions);
        self.reschedule(n);
    }

    fn trigger(&mut self, i: usize) {
        let name = self.workload[i].clone();
        let now = self.now;
        let (n, outputs) = if self.cfg.scenario.is_push() {
            match &mut self.nodes[NODE].behavior {
                Behavior::Producer { app, .. } => (NODE, app.generate(name, now, &mut self.ledger)),
                _ => unreachable!(),
            }
        } else {
            match &mut self.nodes[CONSUMER].behavior {
                Behavior::Consumer { app, .. } => (CONSUMER, app.request(name, now, &mut self.ledger)),
                _ => unreachable!(),
            }
        };
        let mut actions = Vec::new();
        for o in outputs {
            actions.extend(self.feed(n, o));
        }
        self.apply(n, actions);
        self.reschedule(n);
    }

    fn reschedule(&mut self, n: usize) {
        if let Some(d) = self.nodes[n].next_deadline() {
            let d = d.max(self.now);
            if self.scheduled[n].insert(d) {
                self.push(d, EventKind::Tick(n));
            }
        }
    }

    // Hands an application output to the node's forwarder.
    fn feed(&mut self, n: usize, out: AppOutput) -> Vec<Action> {
        let now = self.now;
        let fwd = self.nodes[n].forwarder_mut();
        match out {
            AppOutput::Express(i) => fwd.on_interest(APP, i, now),
            AppOutput::Reply(d) => fwd.on_data(APP, d, now),
            AppOutput::Direct { face, packet: Packet::Interest(i) } => fwd.send_interest_on(face, i, now),
            AppOutput::Direct { face, packet: Packet::Data(d) } => vec![fwd.send_unsolicited(face, d)],
        }
    }

    fn apply(&mut self, n: usize, actions: Vec<Action>) {
        let mut work: VecDeque<Action> = actions.into();
        while let Some(a) = work.pop_front() {
            match a {
                Action::Send { face, packet, cause } => self.transmit(n, face, packet, cause),
                Action::InstallTempFib { prefix, face } => self.record(n, TraceEvent::TempFib { prefix, face }),
                Action::Drop { name, reason } => {
                    *self.drops.entry(reason).or_default() += 1;
                    self.record(n, TraceEvent::Drop { name, reason });
                }
                Action::DeliverToApp(p) => {
                    let now = self.now;
                    let outputs = match (&mut self.nodes[n].behavior, p) {
                        (Behavior::Consumer { app, .. }, Packet::Interest(i)) => app.on_interest(i, now, &mut self.ledger),
                        (Behavior::Consumer { app, .. }, Packet::Data(d)) => app.on_data(d, now, &mut self.ledger),
                        (Behavior::Producer { app, .. }, Packet::Interest(i)) => app.on_interest(i, now),
                        (Behavior::Producer { app, .. }, Packet::Data(d)) => app.on_data(d, now),
                        _ => Vec::new(),
                    };
                    for o in outputs {
                        work.extend(self.feed(n, o));
                    }
                }
            }
        }
        if n == GATEWAY {
            self.gateway_events();
        }
    }

    fn gateway_events(&mut self) {
        let Behavior::Gateway(g) = &mut self.nodes[GATEWAY].behavior else { return };
        for ev in g.drain_events() {
            if let GatewayEvent::IndicationFailed { content } = ev {
                self.indication_failures += 1;
                let fetching = self.nodes[CONSUMER].consumer().is_some_and(|c| c.is_fetching(&content));
                if !fetching {
                    self.ledger.fail(&content);
                }
            }
        }
    }

    fn transmit(&mut self, n: usize, face: FaceId, packet: Packet, cause: SendCause) {
        let &(link, dir) = self.face_link.get(&(n, face)).expect("every non-application face has a link");
        let c = &mut self.counters[n];
        match packet {
            Packet::Interest(_) => c.interests_tx += 1,
            Packet::Data(_) => c.data_tx += 1,
        }
        let control = matches!(&packet, Packet::Data(d) if d.payload.is_control());
        self.record(n, TraceEvent::Send { face, kind: packet.kind(), name: packet.name().clone(), cause, control });
        let now = self.now;
        let l = &mut self.links[link];
        l.ledger[dir].departed += 1;
        let arrival = match &mut l.model {
            LinkModel::Internet(m) => m.transmit(now, &mut self.loss_rng),
            LinkModel::Lora(m) => {
                self.counters[n].lora_tx += 1;
                Some(m.transmit(now, n == GATEWAY, &packet).1)
            }
            LinkModel::Ideal(d) => {
                self.counters[n].lora_tx += 1;
                Some(now + *d)
            }
        };
        match arrival {
            Some(t) => self.push(t, EventKind::Deliver { link, dir, packet }),
            None => {
                self.links[link].ledger[dir].lost += 1;
                self.record(n, TraceEvent::Lost { link, name: packet.name().clone() });
            }
        }
    }

    /// Deliveries still queued, per `[link][direction]`.
    pub fn in_flight(&self) -> Vec<[u64; 2]> {
        let mut v = vec![[0u64; 2]; self.links.len()];
        for Reverse(e) in &self.queue {
            if let EventKind::Deliver { link, dir, .. } = e.kind {
                v[link][dir] += 1;
            }
        }
        v
    }

    pub fn link_reports(&self) -> Vec<LinkReport> {
        self.links
            .iter()
            .map(|l| LinkReport {
                name: l.label.to_string(),
                kind: match l.model {
                    LinkModel::Internet(_) => "internet",
                    LinkModel::Lora(_) => "dsme_lora",
                    LinkModel::Ideal(_) => "ideal",
                }
                .to_string(),
                directions: l.ledger,
            })
            .collect()
    }

    pub fn report(&self) -> MetricsReport {
        MetricsReport {
            scenario: self.cfg.scenario,
            retx: self.cfg.retx,
            loss: self.cfg.loss,
            seed: self.cfg.seed,
            requests: self.cfg.workload.requests,
            wait_estimate: self.wait.duration(),
            measurement_start: self.measurement_start,
            end: self.end,
            transactions: self.ledger.iter().cloned().collect(),
            nodes: self.counters.clone(),
            links: self.link_reports(),
            drops: self.drops.iter().map(|(r, n)| (format!("{r:?}").to_lowercase(), *n)).collect(),
            registration_tx: self.registration_tx,
            indication_failures: self.indication_failures,
            abandoned_by_ring: self.nodes[CONSUMER].consumer().map_or(0, |c| c.abandoned()),
        }
    }
}

/// Runs a scenario to completion and returns its report.
pub fn run(cfg: ScenarioConfig) -> Result<MetricsReport, ConfigError> {
    let mut sim = Simulation::new(cfg)?;
    sim.run_to_end();
    Ok(sim.report())
}
