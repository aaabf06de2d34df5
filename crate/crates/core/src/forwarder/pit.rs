//! Pending interest table.

use std::collections::{BTreeMap, BTreeSet};

use crate::name::Name;
use crate::packet::{FaceId, Interest};
use crate::time::SimTime;

#[derive(Debug, Clone, PartialEq)]
pub struct PitEntry {
    /// Unique per node for the lifetime of the run.
    pub id: u64,
    pub name: Name,
    pub downstream_faces: BTreeSet<FaceId>,
    pub created_at: SimTime,
    pub expires_at: SimTime,
    pub retx_remaining: u32,
    pub next_retx_at: Option<SimTime>,
    pub upstream_face: Option<FaceId>,
    /// The Interest as first forwarded; retransmissions copy it with a fresh nonce.
    pub interest: Interest,
}

#[derive(Debug, Clone, Default)]
pub struct Pit {
    entries: BTreeMap<Name, PitEntry>,
    next_id: u64,
}

impl Pit {
    pub fn get(&self, name: &Name) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    pub fn get_mut(&mut self, name: &Name) -> Option<&mut PitEntry> {
        self.entries.get_mut(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.entries.contains_key(name)
    }

    /// Creates a fresh entry. Any previous entry for the name is replaced.
    pub fn create(&mut self, interest: &Interest, downstream: Option<FaceId>, now: SimTime, expires_at: SimTime) -> &mut PitEntry {
        let id = self.next_id;
        self.next_id += 1;
        let entry = PitEntry {
            id,
            name: interest.name.clone(),
            downstream_faces: downstream.into_iter().collect(),
            created_at: now,
            expires_at,
            retx_remaining: 0,
            next_retx_at: None,
            upstream_face: None,
            interest: interest.clone(),
        };
        self.entries.insert(interest.name.clone(), entry);
        self.entries.get_mut(&interest.name).expect("just inserted")
    }

    pub fn remove(&mut self, name: &Name) -> Option<PitEntry> {
        self.entries.remove(name)
    }

    /// Removes and returns every entry with `expires_at <= now`.
    pub fn expire(&mut self, now: SimTime) -> Vec<PitEntry> {
        let expired: Vec<Name> = self.entries.values().filter(|e| e.expires_at <= now).map(|e| e.name.clone()).collect();
        expired.iter().filter_map(|n| self.entries.remove(n)).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PitEntry> {
        self.entries.values()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut PitEntry> {
        self.entries.values_mut()
    }

    pub fn next_deadline(&self) -> Option<SimTime> {
        self.entries
            .values()
            .flat_map(|e| {
                let retx = e.next_retx_at.filter(|_| e.retx_remaining > 0);
                std::iter::once(e.expires_at).chain(retx)
            })
            .min()
    }
}
