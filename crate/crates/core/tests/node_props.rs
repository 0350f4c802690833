//! Random operation sequences against one forwarder.

use std::collections::BTreeSet;

use proptest::prelude::*;

use ndnsec::naming::Name;
use ndnsec::node::{FaceId, Node, NodeConfig};
use ndnsec::wire::{Data, Interest, Packet};

#[derive(Debug, Clone)]
enum Op {
    Interest { face: FaceId, name: usize, nonce: u32, lifetime: u32 },
    Data { face: FaceId, name: usize },
    Route { prefix: usize, face: FaceId },
    Plant { name: usize },
    Evict,
    Sweep,
    Advance(u64),
}

const NAMES: [&str; 8] = [
    "/a/1", "/a/2", "/a/3", "/a/b/1", "/a/b/2", "/c/1", "/c/2", "/d/1",
];
const PREFIXES: [&str; 5] = ["/a", "/a/b", "/c", "/", "/d/1"];

fn n(i: usize) -> Name {
    NAMES[i].parse().unwrap()
}

fn data(i: usize) -> Data {
    Data {
        name: n(i),
        content: vec![i as u8; 4],
        key_locator: "/a/KEY".parse().unwrap(),
        scheme_id: 1,
        signature: vec![],
    }
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        6 => (1u32..6, 0..NAMES.len(), 0u32..4, 1u32..60)
            .prop_map(|(face, name, nonce, lifetime)| Op::Interest { face, name, nonce, lifetime }),
        5 => (1u32..6, 0..NAMES.len()).prop_map(|(face, name)| Op::Data { face, name }),
        1 => (0..PREFIXES.len(), 1u32..6).prop_map(|(prefix, face)| Op::Route { prefix, face }),
        1 => (0..NAMES.len()).prop_map(|name| Op::Plant { name }),
        1 => Just(Op::Evict),
        1 => Just(Op::Sweep),
        2 => (0u64..20).prop_map(Op::Advance),
    ]
}

fn apply(node: &mut Node, op: &Op, now: &mut u64) -> Vec<(FaceId, Packet)> {
    match op {
        Op::Interest { face, name, nonce, lifetime } => {
            let i = Interest {
                name: n(*name),
                nonce: *nonce,
                lifetime_ms: *lifetime,
            };
            node.process_interest(*face, i, *now)
        }
        Op::Data { face, name } => node.process_data(*face, data(*name), *now),
        Op::Route { prefix, face } => {
            node.fib_add_route(PREFIXES[*prefix].parse().unwrap(), *face);
            vec![]
        }
        Op::Plant { name } => {
            node.plant(data(*name), *now);
            vec![]
        }
        Op::Evict => {
            node.cs_evict(*now);
            vec![]
        }
        Op::Sweep => {
            node.sweep(*now);
            vec![]
        }
        Op::Advance(dt) => {
            *now += dt;
            vec![]
        }
    }
}

fn config(capacity: usize) -> NodeConfig {
    NodeConfig {
        cs_capacity: capacity,
        freshness: 40,
        verify: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// 64 cases of 200 operations each: 12,800 operations.
    #[test]
    fn invariants_hold(capacity in 0usize..5, ops in prop::collection::vec(op(), 200)) {
        let mut node = Node::new(config(capacity));
        let mut twin = Node::new(config(capacity));
        let mut now = 0u64;
        let mut twin_now = 0u64;
        for op in &ops {
            // Data may leave only toward faces the PIT recorded for it
            let waiting: Option<BTreeSet<FaceId>> = match op {
                Op::Data { name, .. } => {
                    let mut probe = node.pit.clone();
                    probe.get(&n(*name), now).map(|e| e.faces.clone())
                }
                _ => None,
            };
            let cached_before = match op {
                Op::Interest { name, .. } => node.cs.peek(&n(*name)).is_some_and(|e| e.fresh_until > now),
                _ => false,
            };
            let out = apply(&mut node, op, &mut now);
            let twin_out = apply(&mut twin, op, &mut twin_now);

            prop_assert!(node.cs.len() <= capacity);
            prop_assert_eq!(&out, &twin_out);
            prop_assert_eq!(&node, &twin);

            for (face, p) in &out {
                match (op, p) {
                    (Op::Data { face: inface, .. }, Packet::Data(_)) => {
                        let faces = waiting.as_ref();
                        prop_assert!(faces.is_some_and(|f| f.contains(face)), "Data without PIT entry");
                        prop_assert_ne!(face, inface);
                    }
                    (Op::Interest { face: inface, .. }, Packet::Data(_)) => {
                        prop_assert!(cached_before);
                        prop_assert_eq!(face, inface);
                    }
                    (Op::Interest { face: inface, .. }, Packet::Interest(_)) => {
                        prop_assert_ne!(face, inface);
                    }
                    _ => prop_assert!(false, "unexpected emission {:?} after {:?}", p, op),
                }
            }
            // a satisfied entry is gone: the same Data again is unsolicited
            if let (Op::Data { name, .. }, false) = (op, out.is_empty()) {
                prop_assert!(node.pit.clone().get(&n(*name), now).is_none());
            }
        }
    }
}
