//! Content Store: exact-name cache with freshness expiry and LRU
//! replacement.

use std::collections::{BTreeMap, HashMap};

use crate::naming::Name;
use crate::wire::Data;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsEntry {
    pub data: Data,
    pub inserted: u64,
    pub last_access: u64,
    pub fresh_until: u64,
    // LRU rank; larger is more recent
    seq: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContentStore {
    capacity: usize,
    entries: HashMap<Name, CsEntry>,
    order: BTreeMap<u64, Name>,
    next_seq: u64,
}

impl ContentStore {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            ..Self::default()
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.entries.contains_key(name)
    }

    pub fn peek(&self, name: &Name) -> Option<&CsEntry> {
        self.entries.get(name)
    }

    fn bump(&mut self) -> u64 {
        self.next_seq += 1;
        self.next_seq
    }

    /// A fresh entry for `name`, marked as most recently used. Expired
    /// entries are removed and never returned.
    pub fn lookup(&mut self, name: &Name, now: u64) -> Option<&Data> {
        let expired = self.entries.get(name)?.fresh_until <= now;
        if expired {
            self.remove(name);
            return None;
        }
        let seq = self.bump();
        let e = self.entries.get_mut(name).expect("checked above");
        self.order.remove(&e.seq);
        self.order.insert(seq, name.clone());
        e.seq = seq;
        e.last_access = now;
        Some(&e.data)
    }

    /// Inserts or overwrites, then evicts down to capacity. Returns the
    /// evicted names.
    pub fn insert(&mut self, data: Data, now: u64, freshness: u64) -> Vec<Name> {
        if self.capacity == 0 {
            return Vec::new();
        }
        let name = data.name.clone();
        self.remove(&name);
        let seq = self.bump();
        self.order.insert(seq, name.clone());
        self.entries.insert(
            name,
            CsEntry {
                data,
                inserted: now,
                last_access: now,
                fresh_until: now.saturating_add(freshness),
                seq,
            },
        );
        self.evict(now)
    }

    pub fn remove(&mut self, name: &Name) -> Option<CsEntry> {
        let e = self.entries.remove(name)?;
        self.order.remove(&e.seq);
        Some(e)
    }

    /// Drops every expired entry, then least-recently-used entries until
    /// the store fits its capacity.
    pub fn evict(&mut self, now: u64) -> Vec<Name> {
        let expired: Vec<Name> = self
            .order
            .values()
            .filter(|n| self.entries[*n].fresh_until <= now)
            .cloned()
            .collect();
        for n in &expired {
            self.remove(n);
        }
        let mut evicted = expired;
        while self.entries.len() > self.capacity {
            let (_, victim) = self.order.pop_first().expect("order tracks entries");
            self.entries.remove(&victim);
            evicted.push(victim);
        }
        evicted
    }

    /// Names from least to most recently used.
    pub fn names_by_recency(&self) -> Vec<Name> {
        self.order.values().cloned().collect()
    }
}
