use std::collections::BTreeMap;

use serde::Serialize;

use crate::node::{Counters, FaceId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Request,
    Retransmit,
    GiveUp,
    SendInterest,
    SendData,
    RecvInterest,
    RecvData,
    Produce,
    Deliver,
    Poison,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub tick: u64,
    pub node: String,
    pub event: EventKind,
    pub name: String,
    pub face: FaceId,
}

/// Content handed to a consumer application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Delivery {
    pub tick: u64,
    pub consumer: String,
    pub name: String,
    #[serde(with = "hex_bytes")]
    pub content: Vec<u8>,
    /// Links the Data packet crossed to reach the consumer.
    pub hops: u32,
    pub attempt: u32,
}

mod hex_bytes {
    pub fn serialize<S: serde::Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(v))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub deliveries: Vec<Delivery>,
    /// Final counters, keyed by node id.
    pub counters: BTreeMap<String, Counters>,
}

impl Trace {
    pub fn count(&self, kind: EventKind) -> usize {
        self.records.iter().filter(|r| r.event == kind).count()
    }

    pub fn deliveries_of<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Delivery> {
        self.deliveries.iter().filter(move |d| d.name == name)
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("plain record"));
            out.push('\n');
        }
        out
    }

    pub fn deliveries_jsonl(&self) -> String {
        let mut out = String::new();
        for d in &self.deliveries {
            out.push_str(&serde_json::to_string(d).expect("plain record"));
            out.push('\n');
        }
        out
    }

    /// `node,cs_hits,...` with one row per node.
    pub fn counters_csv(&self) -> String {
        let mut out = String::from("node");
        for name in Counters::NAMES {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (node, c) in &self.counters {
            out.push_str(node);
            let values = c.to_map();
            for name in Counters::NAMES {
                out.push_str(&format!(",{}", values[name]));
            }
            out.push('\n');
        }
        out
    }
}
