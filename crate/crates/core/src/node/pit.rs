use std::collections::{BTreeSet, HashMap};

use crate::naming::Name;

use super::FaceId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitEntry {
    pub faces: BTreeSet<FaceId>,
    pub expires: u64,
}

/// Pending Interest Table. Expired entries are treated as absent and
/// removed when touched or swept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pit {
    entries: HashMap<Name, PitEntry>,
}

impl Pit {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&mut self, name: &Name, now: u64) -> Option<&PitEntry> {
        self.live(name, now)?;
        self.entries.get(name)
    }

    fn live(&mut self, name: &Name, now: u64) -> Option<()> {
        if self.entries.get(name)?.expires <= now {
            self.entries.remove(name);
            return None;
        }
        Some(())
    }

    /// Adds `face` to a live entry, extending its lifetime. False when no
    /// live entry exists.
    pub fn aggregate(&mut self, name: &Name, face: FaceId, now: u64, lifetime: u64) -> bool {
        if self.live(name, now).is_none() {
            return false;
        }
        let e = self.entries.get_mut(name).expect("live");
        e.faces.insert(face);
        e.expires = e.expires.max(now.saturating_add(lifetime));
        true
    }

    pub fn create(&mut self, name: Name, face: FaceId, now: u64, lifetime: u64) {
        self.entries.insert(
            name,
            PitEntry {
                faces: BTreeSet::from([face]),
                expires: now.saturating_add(lifetime),
            },
        );
    }

    /// Removes and returns a live entry.
    pub fn take(&mut self, name: &Name, now: u64) -> Option<PitEntry> {
        self.live(name, now)?;
        self.entries.remove(name)
    }

    pub fn sweep(&mut self, now: u64) -> usize {
        let before = self.entries.len();
        self.entries.retain(|_, e| e.expires > now);
        before - self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &PitEntry)> {
        self.entries.iter()
    }
}
