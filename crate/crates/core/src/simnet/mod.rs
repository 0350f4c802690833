//! Deterministic discrete-event simulation of consumer, router and producer
//! nodes.
//!
//! Time is integer ticks. Events run in `(tick, node index, arrival order)`
//! order. Consumers send each scheduled Interest from their application
//! face and retransmit with a fresh nonce when it is unanswered after its
//! lifetime, up to `max_attempts` sends in total. Producers answer
//! Interests under their prefix with signed Data whose key locator is
//! `<prefix>/KEY`. Every node with verification on trusts each producer key
//! under that locator.

pub mod config;
pub mod trace;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::naming::Name;
use crate::node::{FaceId, APP_FACE};
use crate::sigcore::{self, keygen, KeyPair, SchemeId, SchemeParams};
use crate::wire::{Data, Interest, Packet};

pub use config::{build_topology, load, load_pair, Producer, Role, SimNode, Topology};
pub use trace::{Delivery, EventKind, Trace, TraceRecord};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),
    #[error("tick limit {limit} exceeded")]
    TickLimitExceeded { limit: u64 },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("signing failed: {0}")]
    Signing(#[from] sigcore::SigError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub tick: u64,
    pub consumer: String,
    pub name: Name,
}

/// A forged Data packet planted in a node's CS at `tick`. It carries the
/// covering producer's key locator but is signed under `key`; a fresh key
/// of the producer's scheme is drawn from the run's RNG when `key` is
/// `None`.
#[derive(Debug, Clone)]
pub struct Attack {
    pub tick: u64,
    pub node: String,
    pub name: Name,
    pub content: Vec<u8>,
    pub key: Option<KeyPair>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub seed: u64,
    pub requests: Vec<Request>,
    pub attacks: Vec<Attack>,
    pub tick_limit: u64,
    pub interest_lifetime: u64,
    pub max_attempts: u32,
}

impl Scenario {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            requests: Vec::new(),
            attacks: Vec::new(),
            tick_limit: config::DEFAULT_TICK_LIMIT,
            interest_lifetime: config::DEFAULT_LIFETIME,
            max_attempts: config::DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn request(mut self, tick: u64, consumer: &str, name: Name) -> Self {
        self.requests.push(Request {
            tick,
            consumer: consumer.to_string(),
            name,
        });
        self
    }
}

pub fn inject_poison(
    topology: &Topology,
    mut scenario: Scenario,
    tick: u64,
    node: &str,
    name: Name,
    forged_key: Option<KeyPair>,
) -> Result<Scenario, SimError> {
    if topology.node(node).is_none() {
        return Err(SimError::UnknownNode(node.to_string()));
    }
    scenario.attacks.push(Attack {
        tick,
        node: node.to_string(),
        name,
        content: Attack::default_content(),
        key: forged_key,
    });
    Ok(scenario)
}

#[derive(Debug, Clone)]
enum Event {
    Arrival { face: FaceId, packet: Packet, hops: u32 },
    Send { request: usize, attempt: u32 },
    Timeout { request: usize, attempt: u32 },
    Poison { attack: usize },
}

struct Sim<'a> {
    topology: &'a Topology,
    scenario: &'a Scenario,
    nodes: Vec<crate::node::Node>,
    queue: BTreeMap<(u64, usize, u64), Event>,
    seq: u64,
    rng: ChaCha20Rng,
    trace: Trace,
    // satisfied request indices
    done: BTreeSet<usize>,
    // attempt number of the latest send per request
    attempts: BTreeMap<usize, u32>,
    // unsatisfied requests per (consumer, name)
    waiting: BTreeMap<(usize, Name), Vec<usize>>,
}

impl Sim<'_> {
    fn push(&mut self, tick: u64, node: usize, event: Event) {
        self.seq += 1;
        self.queue.insert((tick, node, self.seq), event);
    }

    fn record(&mut self, tick: u64, node: usize, event: EventKind, name: &Name, face: FaceId) {
        self.trace.records.push(TraceRecord {
            tick,
            node: self.topology.nodes[node].id.clone(),
            event,
            name: name.to_string(),
            face,
        });
    }

    fn step(&mut self, tick: u64, node: usize, event: Event) -> Result<(), SimError> {
        match event {
            Event::Arrival { face, packet, hops } => {
                let kind = match &packet {
                    Packet::Interest(_) => EventKind::RecvInterest,
                    Packet::Data(_) => EventKind::RecvData,
                };
                self.record(tick, node, kind, packet.name(), face);
                let data_hops = if matches!(packet, Packet::Data(_)) { hops } else { 0 };
                let out = self.nodes[node].process(face, packet, tick);
                self.emit(tick, node, out, data_hops)?;
            }
            Event::Send { request, attempt } => {
                if self.done.contains(&request) {
                    return Ok(());
                }
                let name = self.scenario.requests[request].name.clone();
                if attempt == 1 {
                    self.waiting.entry((node, name.clone())).or_default().push(request);
                }
                self.attempts.insert(request, attempt);
                let kind = if attempt == 1 { EventKind::Request } else { EventKind::Retransmit };
                self.record(tick, node, kind, &name, APP_FACE);
                let lifetime = self.scenario.interest_lifetime;
                let interest = Interest {
                    name: name.clone(),
                    nonce: self.rng.gen(),
                    lifetime_ms: lifetime as u32,
                };
                let out = self.nodes[node].process_interest(APP_FACE, interest, tick);
                self.emit(tick, node, out, 0)?;
                self.push(tick + lifetime, node, Event::Timeout { request, attempt });
            }
            Event::Timeout { request, attempt } => {
                if self.done.contains(&request) || self.attempts.get(&request) != Some(&attempt) {
                    return Ok(());
                }
                if attempt < self.scenario.max_attempts {
                    self.step(tick, node, Event::Send { request, attempt: attempt + 1 })?;
                } else {
                    let name = self.scenario.requests[request].name.clone();
                    self.record(tick, node, EventKind::GiveUp, &name, APP_FACE);
                }
            }
            Event::Poison { attack } => {
                let a = &self.scenario.attacks[attack];
                let producer = self.topology.producer_for(&a.name);
                let key = match (&a.key, producer) {
                    (Some(k), _) => k.clone(),
                    (None, Some(p)) => keygen(&SchemeParams::new(p.key.scheme()), &mut self.rng)?,
                    (None, None) => keygen(&SchemeParams::new(SchemeId::Ecdsa), &mut self.rng)?,
                };
                let key_locator = match producer {
                    Some(p) => p.key_locator.clone(),
                    None => a.name.prefix(1).child("KEY").expect("non-empty component"),
                };
                let mut data = Data {
                    name: a.name.clone(),
                    content: a.content.clone(),
                    key_locator,
                    scheme_id: 0,
                    signature: Vec::new(),
                };
                sigcore::sign_data(&key, &mut data, &mut self.rng)?;
                let name = a.name.clone();
                self.nodes[node].plant(data, tick);
                self.record(tick, node, EventKind::Poison, &name, APP_FACE);
            }
        }
        Ok(())
    }

    fn emit(&mut self, tick: u64, node: usize, out: Vec<(FaceId, Packet)>, data_hops: u32) -> Result<(), SimError> {
        for (face, packet) in out {
            let hops = match packet {
                Packet::Data(_) => data_hops,
                Packet::Interest(_) => 0,
            };
            if face == APP_FACE {
                self.hand_to_app(tick, node, packet, hops)?;
                continue;
            }
            let Some(end) = self.topology.links.get(&(node, face)).copied() else {
                continue;
            };
            let kind = match &packet {
                Packet::Interest(_) => EventKind::SendInterest,
                Packet::Data(_) => EventKind::SendData,
            };
            self.record(tick, node, kind, packet.name(), face);
            self.push(
                tick + end.latency,
                end.node,
                Event::Arrival {
                    face: end.face,
                    packet,
                    hops: hops + 1,
                },
            );
        }
        Ok(())
    }

    fn hand_to_app(&mut self, tick: u64, node: usize, packet: Packet, hops: u32) -> Result<(), SimError> {
        match packet {
            Packet::Data(data) => {
                let satisfied = self.waiting.remove(&(node, data.name.clone())).unwrap_or_default();
                let attempt = satisfied.iter().filter_map(|r| self.attempts.get(r)).copied().max().unwrap_or(0);
                self.record(tick, node, EventKind::Deliver, &data.name, APP_FACE);
                self.trace.deliveries.push(Delivery {
                    tick,
                    consumer: self.topology.nodes[node].id.clone(),
                    name: data.name.to_string(),
                    content: data.content,
                    hops,
                    attempt,
                });
                self.done.extend(satisfied);
            }
            Packet::Interest(interest) => {
                let Some(p) = self
                    .topology
                    .producer_for(&interest.name)
                    .filter(|p| p.node == node)
                else {
                    return Ok(());
                };
                let mut data = Data {
                    name: interest.name.clone(),
                    content: p.content_for(&interest.name),
                    key_locator: p.key_locator.clone(),
                    scheme_id: 0,
                    signature: Vec::new(),
                };
                sigcore::sign_data(&p.key, &mut data, &mut self.rng)?;
                self.record(tick, node, EventKind::Produce, &interest.name, APP_FACE);
                let out = self.nodes[node].process_data(APP_FACE, data, tick);
                self.emit(tick, node, out, 0)?;
            }
        }
        Ok(())
    }
}

/// Runs the scenario to completion on a copy of the topology's nodes.
pub fn run(topology: &Topology, scenario: &Scenario) -> Result<Trace, SimError> {
    let mut sim = Sim {
        topology,
        scenario,
        nodes: topology.nodes.iter().map(|n| n.node.clone()).collect(),
        queue: BTreeMap::new(),
        seq: 0,
        rng: ChaCha20Rng::seed_from_u64(scenario.seed),
        trace: Trace::default(),
        done: BTreeSet::new(),
        attempts: BTreeMap::new(),
        waiting: BTreeMap::new(),
    };
    for (request, r) in scenario.requests.iter().enumerate() {
        let node = topology
            .index_of(&r.consumer)
            .ok_or_else(|| SimError::UnknownNode(r.consumer.clone()))?;
        sim.push(
            r.tick,
            node,
            Event::Send { request, attempt: 1 },
        );
    }
    for (i, a) in scenario.attacks.iter().enumerate() {
        let node = topology.index_of(&a.node).ok_or_else(|| SimError::UnknownNode(a.node.clone()))?;
        sim.push(a.tick, node, Event::Poison { attack: i });
    }
    while let Some(((tick, node, _), event)) = sim.queue.pop_first() {
        if tick > scenario.tick_limit {
            return Err(SimError::TickLimitExceeded {
                limit: scenario.tick_limit,
            });
        }
        sim.step(tick, node, event)?;
    }
    sim.trace.counters = topology
        .nodes
        .iter()
        .zip(&sim.nodes)
        .map(|(spec, n)| (spec.id.clone(), n.counters))
        .collect();
    Ok(sim.trace)
}
