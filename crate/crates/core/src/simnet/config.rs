//! Topology and scenario files.
//!
//! ```toml
//! seed = 7
//!
//! [[nodes]]
//! id = "C"
//! role = "consumer"      # consumer | router | producer
//! verify = true
//!
//! [[nodes]]
//! id = "R"
//! role = "router"
//! cs_capacity = 16
//!
//! [[nodes]]
//! id = "P"
//! role = "producer"
//!
//! [[links]]
//! a = "C"
//! b = "R"
//! latency = 5            # ticks; faces are numbered from 1 when omitted
//!
//! [[links]]
//! a = "R"
//! b = "P"
//!
//! [[producers]]
//! prefix = "/snnu/images"
//! node = "P"
//! scheme = "ecdsa"
//!
//! [[schedule]]
//! tick = 0
//! consumer = "C"
//! name = "/snnu/images/a.jpg/v1/s1"
//!
//! [[attacks]]
//! tick = 0
//! node = "R"
//! name = "/snnu/images/a.jpg/v1/s1"
//! ```

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::naming::Name;
use crate::node::{FaceId, Node, NodeConfig, TrustKey, TrustStore, APP_FACE, DEFAULT_FRESHNESS};
use crate::sigcore::{keygen, KeyPair, SchemeId, SchemeParams};

use super::{Attack, Request, Scenario, SimError};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TICK_LIMIT: u64 = 1_000_000;
pub const DEFAULT_LIFETIME: u64 = 4000;
pub const DEFAULT_MAX_ATTEMPTS: u32 = 3;
pub const DEFAULT_CONTENT_SIZE: usize = 64;
const ROUTER_CS_CAPACITY: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Consumer,
    Router,
    Producer,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeSpec {
    id: String,
    role: Role,
    #[serde(default)]
    verify: bool,
    cs_capacity: Option<usize>,
    freshness: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSpec {
    a: String,
    b: String,
    a_face: Option<FaceId>,
    b_face: Option<FaceId>,
    #[serde(default = "one")]
    latency: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProducerSpec {
    prefix: String,
    node: String,
    #[serde(default = "default_scheme")]
    scheme: String,
    content_size: Option<usize>,
}

fn default_scheme() -> String {
    "ecdsa".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestSpec {
    tick: u64,
    consumer: String,
    name: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttackSpec {
    tick: u64,
    node: String,
    name: String,
    content: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimFile {
    #[serde(default = "default_seed")]
    seed: u64,
    tick_limit: Option<u64>,
    interest_lifetime: Option<u64>,
    max_attempts: Option<u32>,
    #[serde(default)]
    nodes: Vec<NodeSpec>,
    #[serde(default)]
    links: Vec<LinkSpec>,
    #[serde(default)]
    producers: Vec<ProducerSpec>,
    #[serde(default)]
    schedule: Vec<RequestSpec>,
    #[serde(default)]
    attacks: Vec<AttackSpec>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkEnd {
    pub node: usize,
    pub face: FaceId,
    pub latency: u64,
}

#[derive(Debug, Clone)]
pub struct SimNode {
    pub id: String,
    pub role: Role,
    pub node: Node,
}

#[derive(Debug, Clone)]
pub struct Producer {
    pub prefix: Name,
    pub node: usize,
    pub key: KeyPair,
    pub key_locator: Name,
    pub content_size: usize,
}

impl Producer {
    /// The bytes this producer publishes under `name`: SHA-256 of the name
    /// text, repeated to the configured size.
    pub fn content_for(&self, name: &Name) -> Vec<u8> {
        use sha2::{Digest, Sha256};
        let seed = Sha256::digest(name.to_string().as_bytes());
        seed.iter().copied().cycle().take(self.content_size).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Topology {
    pub nodes: Vec<SimNode>,
    /// `(node, face)` to the far end of its link.
    pub links: BTreeMap<(usize, FaceId), LinkEnd>,
    pub producers: Vec<Producer>,
}

impl Topology {
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn node(&self, id: &str) -> Option<&SimNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// The producer with the longest prefix covering `name`.
    pub fn producer_for(&self, name: &Name) -> Option<&Producer> {
        self.producers
            .iter()
            .filter(|p| p.prefix.is_prefix_of(name))
            .max_by_key(|p| p.prefix.len())
    }

    pub fn link_count(&self) -> usize {
        self.links.len() / 2
    }
}

fn config_err(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

fn parse_name(text: &str, what: &str) -> Result<Name, SimError> {
    text.parse().map_err(|e| config_err(format!("{what} {text:?}: {e}")))
}

fn parse_file(text: &str) -> Result<SimFile, SimError> {
    toml::from_str(text).map_err(|e| config_err(e.to_string()))
}

/// Parses the topology half of a config file: nodes, links and producer
/// bindings. FIBs are filled with every equal-cost next hop toward each
/// producer.
pub fn build_topology(text: &str) -> Result<Topology, SimError> {
    topology_from(&parse_file(text)?)
}

/// Parses the whole file.
pub fn load(text: &str) -> Result<(Topology, Scenario), SimError> {
    let file = parse_file(text)?;
    let topology = topology_from(&file)?;
    let scenario = scenario_from(&file, &topology)?;
    Ok((topology, scenario))
}

/// Loads a topology file and a separate scenario file. Top-level keys in
/// the scenario file (seed, schedule, attacks, limits) replace those of
/// the topology file.
pub fn load_pair(topology: &str, scenario: &str) -> Result<(Topology, Scenario), SimError> {
    let mut merged: toml::Table = toml::from_str(topology).map_err(|e| config_err(format!("topology: {e}")))?;
    let extra: toml::Table = toml::from_str(scenario).map_err(|e| config_err(format!("scenario: {e}")))?;
    merged.extend(extra);
    let file: SimFile = toml::Value::Table(merged)
        .try_into()
        .map_err(|e: toml::de::Error| config_err(e.to_string()))?;
    let topology = topology_from(&file)?;
    let scenario = scenario_from(&file, &topology)?;
    Ok((topology, scenario))
}

fn topology_from(file: &SimFile) -> Result<Topology, SimError> {
    let mut nodes: Vec<SimNode> = Vec::with_capacity(file.nodes.len());
    for spec in &file.nodes {
        if spec.id.is_empty() {
            return Err(config_err("empty node id"));
        }
        if nodes.iter().any(|n| n.id == spec.id) {
            return Err(config_err(format!("duplicate node {:?}", spec.id)));
        }
        let default_capacity = if spec.role == Role::Consumer { 0 } else { ROUTER_CS_CAPACITY };
        let config = NodeConfig {
            cs_capacity: spec.cs_capacity.unwrap_or(default_capacity),
            freshness: spec.freshness.unwrap_or(DEFAULT_FRESHNESS),
            verify: spec.verify,
        };
        nodes.push(SimNode {
            id: spec.id.clone(),
            role: spec.role,
            node: Node::new(config),
        });
    }
    let index = |id: &str| -> Result<usize, SimError> {
        nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| config_err(format!("link or binding refers to undeclared node {id:?}")))
    };

    let mut links = BTreeMap::new();
    let mut next_face: HashMap<usize, FaceId> = HashMap::new();
    for spec in &file.links {
        let (a, b) = (index(&spec.a)?, index(&spec.b)?);
        if a == b {
            return Err(config_err(format!("self link on {:?}", spec.a)));
        }
        if spec.latency == 0 {
            return Err(config_err(format!("link {}-{}: latency must be at least 1", spec.a, spec.b)));
        }
        let mut face_for = |node: usize, given: Option<FaceId>| -> FaceId {
            let counter = next_face.entry(node).or_insert(1);
            let f = given.unwrap_or(*counter);
            *counter = (*counter).max(f + 1);
            f
        };
        let fa = face_for(a, spec.a_face);
        let fb = face_for(b, spec.b_face);
        for (node, face, id) in [(a, fa, &spec.a), (b, fb, &spec.b)] {
            if face == APP_FACE {
                return Err(config_err(format!("{id}: face 0 is reserved for the application")));
            }
            if links.contains_key(&(node, face)) {
                return Err(config_err(format!("{id}: duplicate face {face}")));
            }
        }
        links.insert((a, fa), LinkEnd { node: b, face: fb, latency: spec.latency });
        links.insert((b, fb), LinkEnd { node: a, face: fa, latency: spec.latency });
    }

    let key_seed = file.seed ^ 0x6b65_7973_6565_6421;
    let mut rng = ChaCha20Rng::seed_from_u64(key_seed);
    let mut producers = Vec::with_capacity(file.producers.len());
    for spec in &file.producers {
        let node = index(&spec.node)?;
        if nodes[node].role != Role::Producer {
            return Err(config_err(format!("binding node {:?} is not a producer", spec.node)));
        }
        let prefix = parse_name(&spec.prefix, "producer prefix")?;
        if prefix.is_empty() {
            return Err(config_err("producer prefix must not be the root"));
        }
        let scheme: SchemeId = spec.scheme.parse().map_err(|e| config_err(format!("producer {}: {e}", spec.prefix)))?;
        let key = keygen(&SchemeParams::new(scheme), &mut rng).map_err(|e| config_err(e.to_string()))?;
        let key_locator = prefix.child("KEY").expect("non-empty component");
        producers.push(Producer {
            prefix,
            node,
            key,
            key_locator,
            content_size: spec.content_size.unwrap_or(DEFAULT_CONTENT_SIZE),
        });
    }

    let mut topology = Topology { nodes, links, producers };
    install_routes(&mut topology)?;
    install_trust(&mut topology);
    Ok(topology)
}

fn shortest_distances(topology: &Topology, target: usize) -> Vec<Option<u64>> {
    let mut dist = vec![None; topology.nodes.len()];
    let mut heap = BinaryHeap::new();
    dist[target] = Some(0);
    heap.push(Reverse((0u64, target)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for (_, end) in topology.links.range((u, 0)..=(u, FaceId::MAX)) {
            let nd = d + end.latency;
            if dist[end.node].is_none_or(|cur| nd < cur) {
                dist[end.node] = Some(nd);
                heap.push(Reverse((nd, end.node)));
            }
        }
    }
    dist
}

fn install_routes(topology: &mut Topology) -> Result<(), SimError> {
    let bindings: Vec<(Name, usize)> = topology.producers.iter().map(|p| (p.prefix.clone(), p.node)).collect();
    for (prefix, target) in bindings {
        let dist = shortest_distances(topology, target);
        for u in 0..topology.nodes.len() {
            if u == target {
                topology.nodes[u].node.fib_add_route(prefix.clone(), APP_FACE);
                continue;
            }
            let Some(du) = dist[u] else {
                if topology.nodes[u].role == Role::Consumer {
                    return Err(config_err(format!(
                        "{} is unroutable from consumer {:?}",
                        prefix, topology.nodes[u].id
                    )));
                }
                continue;
            };
            let next_hops: BTreeSet<FaceId> = topology
                .links
                .range((u, 0)..=(u, FaceId::MAX))
                .filter(|(_, end)| dist[end.node].is_some_and(|dv| dv + end.latency == du))
                .map(|((_, face), _)| *face)
                .collect();
            for face in next_hops {
                topology.nodes[u].node.fib_add_route(prefix.clone(), face);
            }
        }
    }
    Ok(())
}

fn install_trust(topology: &mut Topology) {
    let mut store = TrustStore::new();
    for p in &topology.producers {
        store.add(p.key_locator.clone(), TrustKey::Sig(p.key.public()));
    }
    for n in &mut topology.nodes {
        n.node.trust = store.clone();
    }
}

fn scenario_from(file: &SimFile, topology: &Topology) -> Result<Scenario, SimError> {
    let mut requests = Vec::with_capacity(file.schedule.len());
    for r in &file.schedule {
        let consumer = topology
            .node(&r.consumer)
            .ok_or_else(|| config_err(format!("schedule refers to undeclared node {:?}", r.consumer)))?;
        if consumer.role != Role::Consumer {
            return Err(config_err(format!("{:?} is not a consumer", r.consumer)));
        }
        let name = parse_name(&r.name, "requested name")?;
        if name.is_empty() {
            return Err(config_err("requested name must not be the root"));
        }
        requests.push(Request {
            tick: r.tick,
            consumer: r.consumer.clone(),
            name,
        });
    }
    let mut scenario = Scenario {
        seed: file.seed,
        requests,
        attacks: Vec::new(),
        tick_limit: file.tick_limit.unwrap_or(DEFAULT_TICK_LIMIT),
        interest_lifetime: file.interest_lifetime.unwrap_or(DEFAULT_LIFETIME),
        max_attempts: file.max_attempts.unwrap_or(DEFAULT_MAX_ATTEMPTS),
    };
    if scenario.interest_lifetime == 0 || scenario.interest_lifetime > u64::from(u32::MAX) {
        return Err(config_err("interest_lifetime must be in 1..=4294967295"));
    }
    if scenario.max_attempts == 0 {
        return Err(config_err("max_attempts must be at least 1"));
    }
    for a in &file.attacks {
        let name = parse_name(&a.name, "attack name")?;
        scenario = super::inject_poison(topology, scenario, a.tick, &a.node, name, None)?;
        if let Some(content) = &a.content {
            scenario.attacks.last_mut().expect("just pushed").content = content.as_bytes().to_vec();
        }
    }
    Ok(scenario)
}

impl Attack {
    pub(crate) fn default_content() -> Vec<u8> {
        b"poisoned content".to_vec()
    }
}
