//! One NDN forwarder.
//!
//! Interests: CS hit, else PIT aggregation, else FIB forwarding, else drop.
//! Data: PIT-gated, optionally verified against the trust store, then sent
//! to every waiting face and cached. A node is a plain state machine: each
//! call takes the arrival face and the current tick and returns the packets
//! to emit.

pub mod cs;
pub mod fib;
pub mod pit;
pub mod trust;

use std::collections::{BTreeMap, HashMap};

use crate::naming::Name;
use crate::wire::{Data, Interest, Packet};

pub use cs::ContentStore;
pub use fib::Fib;
pub use pit::{Pit, PitEntry};
pub use trust::{TrustAnchor, TrustError, TrustKey, TrustStore};

pub type FaceId = u32;

/// Face 0 is the local application by convention.
pub const APP_FACE: FaceId = 0;
pub const DEFAULT_CS_CAPACITY: usize = 100;
pub const DEFAULT_FRESHNESS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeConfig {
    pub cs_capacity: usize,
    /// Ticks a cached Data packet stays servable.
    pub freshness: u64,
    pub verify: bool,
}

impl Default for NodeConfig {
    fn default() -> Self {
        Self {
            cs_capacity: DEFAULT_CS_CAPACITY,
            freshness: DEFAULT_FRESHNESS,
            verify: false,
        }
    }
}

/// `forwarded` counts Interests sent upstream plus Data sent downstream
/// from a satisfied PIT entry; CS answers count as `cs_hits` only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub cs_hits: u64,
    pub cs_misses: u64,
    pub forwarded: u64,
    pub dropped_unsolicited: u64,
    pub dropped_bogus: u64,
    pub dropped_loop: u64,
    pub no_route: u64,
}

impl Counters {
    pub const NAMES: [&'static str; 7] = [
        "cs_hits",
        "cs_misses",
        "forwarded",
        "dropped_unsolicited",
        "dropped_bogus",
        "dropped_loop",
        "no_route",
    ];

    pub fn to_map(&self) -> BTreeMap<&'static str, u64> {
        let values = [
            self.cs_hits,
            self.cs_misses,
            self.forwarded,
            self.dropped_unsolicited,
            self.dropped_bogus,
            self.dropped_loop,
            self.no_route,
        ];
        Self::NAMES.into_iter().zip(values).collect()
    }
}

pub type Emission = (FaceId, Packet);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub config: NodeConfig,
    pub cs: ContentStore,
    pub pit: Pit,
    pub fib: Fib,
    pub trust: TrustStore,
    pub counters: Counters,
    // (name, nonce) -> tick after which the pair may be seen again
    seen: HashMap<(Name, u32), u64>,
}

impl Default for Node {
    fn default() -> Self {
        Self::new(NodeConfig::default())
    }
}

impl Node {
    pub fn new(config: NodeConfig) -> Self {
        Self {
            cs: ContentStore::new(config.cs_capacity),
            config,
            pit: Pit::default(),
            fib: Fib::default(),
            trust: TrustStore::default(),
            counters: Counters::default(),
            seen: HashMap::new(),
        }
    }

    pub fn with_trust(mut self, trust: TrustStore) -> Self {
        self.trust = trust;
        self
    }

    pub fn fib_add_route(&mut self, prefix: Name, face: FaceId) {
        self.fib.add_route(prefix, face);
    }

    pub fn cs_evict(&mut self, now: u64) -> Vec<Name> {
        self.cs.evict(now)
    }

    /// Places `data` straight into the CS, bypassing the pipeline.
    pub fn plant(&mut self, data: Data, now: u64) {
        self.cs.insert(data, now, self.config.freshness);
    }

    /// Drops expired PIT entries and loop-suppression records.
    pub fn sweep(&mut self, now: u64) {
        self.pit.sweep(now);
        self.seen.retain(|_, until| *until > now);
    }

    pub fn process(&mut self, face: FaceId, packet: Packet, now: u64) -> Vec<Emission> {
        match packet {
            Packet::Interest(i) => self.process_interest(face, i, now),
            Packet::Data(d) => self.process_data(face, d, now),
        }
    }

    pub fn process_interest(&mut self, face: FaceId, interest: Interest, now: u64) -> Vec<Emission> {
        let lifetime = u64::from(interest.lifetime_ms);
        let key = (interest.name.clone(), interest.nonce);
        if self.seen.get(&key).is_some_and(|until| *until > now) {
            self.counters.dropped_loop += 1;
            return Vec::new();
        }
        if self.seen.len() > 4096 {
            self.seen.retain(|_, until| *until > now);
        }
        self.seen.insert(key, now.saturating_add(lifetime));

        if let Some(data) = self.cs.lookup(&interest.name, now) {
            self.counters.cs_hits += 1;
            return vec![(face, Packet::Data(data.clone()))];
        }
        self.counters.cs_misses += 1;

        if self.pit.aggregate(&interest.name, face, now, lifetime) {
            return Vec::new();
        }

        let out: Vec<FaceId> = match self.fib.lookup(&interest.name) {
            Some((_, faces)) => faces.iter().copied().filter(|f| *f != face).collect(),
            None => Vec::new(),
        };
        if out.is_empty() {
            self.counters.no_route += 1;
            return Vec::new();
        }
        self.pit.create(interest.name.clone(), face, now, lifetime);
        self.counters.forwarded += out.len() as u64;
        out.into_iter()
            .map(|f| (f, Packet::Interest(interest.clone())))
            .collect()
    }

    pub fn process_data(&mut self, face: FaceId, data: Data, now: u64) -> Vec<Emission> {
        if self.pit.get(&data.name, now).is_none() {
            self.counters.dropped_unsolicited += 1;
            return Vec::new();
        }
        if self.config.verify && !self.trust.verify(&data) {
            self.counters.dropped_bogus += 1;
            return Vec::new();
        }
        let entry = self.pit.take(&data.name, now).expect("checked live above");
        let out: Vec<Emission> = entry
            .faces
            .iter()
            .filter(|f| **f != face)
            .map(|f| (*f, Packet::Data(data.clone())))
            .collect();
        self.counters.forwarded += out.len() as u64;
        self.cs.insert(data, now, self.config.freshness);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigcore::{keygen, sign_data, SchemeId, SchemeParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::BTreeSet;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    fn data(name: &str) -> Data {
        Data {
            name: n(name),
            content: b"jpeg bytes".to_vec(),
            key_locator: n("/snnu/KEY"),
            scheme_id: 1,
            signature: vec![1, 2, 3],
        }
    }

    const SEG: &str = "/snnu/images/a.jpg/v1/s1";

    #[test]
    fn cs_hit_answers_on_incoming_face() {
        let mut node = Node::default();
        node.plant(data(SEG), 0);
        let out = node.process_interest(2, Interest::new(n(SEG), 1), 1);
        assert_eq!(out, vec![(2, Packet::Data(data(SEG)))]);
        assert!(node.pit.is_empty());
        assert_eq!(node.counters.cs_hits, 1);
    }

    #[test]
    fn pit_hit_aggregates_face() {
        let mut node = Node::default();
        node.fib_add_route(n("/snnu"), 7);
        assert_eq!(node.process_interest(1, Interest::new(n(SEG), 1), 0).len(), 1);
        let out = node.process_interest(3, Interest::new(n(SEG), 2), 1);
        assert!(out.is_empty());
        assert_eq!(node.pit.get(&n(SEG), 1).unwrap().faces, BTreeSet::from([1, 3]));
    }

    #[test]
    fn fib_hit_forwards_and_records() {
        let mut node = Node::default();
        node.fib_add_route(n("/snnu"), 7);
        let i = Interest::new(n(SEG), 9);
        assert_eq!(node.process_interest(2, i.clone(), 0), vec![(7, Packet::Interest(i))]);
        assert!(node.pit.get(&n(SEG), 0).is_some());
        assert_eq!(node.counters.forwarded, 1);
    }

    #[test]
    fn no_route_drops() {
        let mut node = Node::default();
        assert!(node.process_interest(2, Interest::new(n(SEG), 9), 0).is_empty());
        assert_eq!(node.counters.no_route, 1);
        assert!(node.pit.is_empty());
    }

    #[test]
    fn unsolicited_data_dropped() {
        let mut node = Node::default();
        assert!(node.process_data(4, data(SEG), 0).is_empty());
        assert_eq!(node.counters.dropped_unsolicited, 1);
        assert!(node.cs.is_empty());
    }

    #[test]
    fn data_fans_out_and_is_cached() {
        let mut node = Node::default();
        node.fib_add_route(n("/snnu"), 7);
        node.process_interest(2, Interest::new(n(SEG), 1), 0);
        node.process_interest(5, Interest::new(n(SEG), 2), 0);
        let out = node.process_data(7, data(SEG), 1);
        let faces: Vec<FaceId> = out.iter().map(|(f, _)| *f).collect();
        assert_eq!(faces, vec![2, 5]);
        assert!(node.pit.is_empty());
        assert!(node.cs.contains(&n(SEG)));
    }

    #[test]
    fn repeated_nonce_is_a_loop() {
        let mut node = Node::default();
        node.fib_add_route(n("/snnu"), 7);
        node.process_interest(2, Interest::new(n(SEG), 1), 0);
        assert!(node.process_interest(3, Interest::new(n(SEG), 1), 1).is_empty());
        assert_eq!(node.counters.dropped_loop, 1);
        assert_eq!(node.pit.get(&n(SEG), 1).unwrap().faces, BTreeSet::from([2]));
    }

    #[test]
    fn verification_drops_bogus_and_keeps_pit() {
        let mut rng = ChaCha20Rng::seed_from_u64(171);
        let good = keygen(&SchemeParams::new(SchemeId::Ecdsa), &mut rng).unwrap();
        let forged = keygen(&SchemeParams::new(SchemeId::Ecdsa), &mut rng).unwrap();
        let mut trust = TrustStore::new();
        trust.add(n("/snnu/KEY"), TrustKey::Sig(good.public()));
        let mut node = Node::new(NodeConfig {
            verify: true,
            ..NodeConfig::default()
        })
        .with_trust(trust);
        node.fib_add_route(n("/snnu"), 7);
        node.process_interest(2, Interest::new(n(SEG), 1), 0);

        let mut bad = data(SEG);
        sign_data(&forged, &mut bad, &mut rng).unwrap();
        assert!(node.process_data(7, bad, 1).is_empty());
        assert_eq!(node.counters.dropped_bogus, 1);
        assert!(node.pit.get(&n(SEG), 1).is_some());
        assert!(node.cs.is_empty());

        let mut ok = data(SEG);
        sign_data(&good, &mut ok, &mut rng).unwrap();
        assert_eq!(node.process_data(7, ok, 2).len(), 1);
    }

    #[test]
    fn counters_map_is_flat() {
        let m = Counters::default().to_map();
        assert_eq!(m.len(), 7);
        assert!(m.values().all(|v| *v == 0));
    }
}
