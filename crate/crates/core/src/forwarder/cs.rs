//! Content store with least-recently-used eviction.

use std::collections::BTreeMap;

use crate::name::Name;
use crate::packet::Data;
use crate::time::SimTime;

pub const DEFAULT_CS_CAPACITY: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct CsEntry {
    pub data: Data,
    pub inserted_at: SimTime,
    pub last_used_at: SimTime,
    use_seq: u64,
}

#[derive(Debug, Clone)]
pub struct ContentStore {
    capacity: usize,
    entries: BTreeMap<Name, CsEntry>,
    // use sequence -> name, oldest first
    recency: BTreeMap<u64, Name>,
    next_seq: u64,
}

impl Default for ContentStore {
    fn default() -> Self {
        ContentStore::with_capacity(DEFAULT_CS_CAPACITY)
    }
}

impl ContentStore {
    pub fn with_capacity(capacity: usize) -> Self {
        ContentStore { capacity, entries: BTreeMap::new(), recency: BTreeMap::new(), next_seq: 0 }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Shrinks or grows the store, evicting least recently used entries as needed.
    pub fn set_capacity(&mut self, capacity: usize) {
        self.capacity = capacity;
        while self.entries.len() > self.capacity {
            self.evict_one();
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn touch(&mut self, name: &Name) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.recency.insert(seq, name.clone());
        seq
    }

    fn evict_one(&mut self) -> Option<Name> {
        let (_, victim) = self.recency.pop_first()?;
        self.entries.remove(&victim);
        Some(victim)
    }

    /// Stores `data` unless it is marked `no_cache` or carries a control payload.
    /// Returns the evicted name, if the insert pushed one out.
    pub fn insert(&mut self, data: Data, now: SimTime) -> Result<Option<Name>, Data> {
        if !data.is_cacheable() || self.capacity == 0 {
            return Err(data);
        }
        let name = data.name.clone();
        if let Some(old) = self.entries.remove(&name) {
            self.recency.remove(&old.use_seq);
        }
        let evicted = if self.entries.len() >= self.capacity { self.evict_one() } else { None };
        let use_seq = self.touch(&name);
        self.entries.insert(name, CsEntry { data, inserted_at: now, last_used_at: now, use_seq });
        Ok(evicted)
    }

    /// Exact-name lookup; a hit refreshes the entry's recency.
    pub fn lookup(&mut self, name: &Name, now: SimTime) -> Option<Data> {
        let old_seq = self.entries.get(name)?.use_seq;
        self.recency.remove(&old_seq);
        let seq = self.touch(name);
        let entry = self.entries.get_mut(name).expect("entry checked above");
        entry.use_seq = seq;
        entry.last_used_at = now;
        Some(entry.data.clone())
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.entries.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &CsEntry)> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::Payload;
    use crate::time::SimDuration;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn capacity_one_evicts_first() {
        let mut cs = ContentStore::with_capacity(1);
        cs.insert(Data::value(n("/a/1"), 1), SimTime::ZERO).unwrap();
        let evicted = cs.insert(Data::value(n("/a/2"), 2), SimTime::ZERO).unwrap();
        assert_eq!(evicted, Some(n("/a/1")));
        assert!(!cs.contains(&n("/a/1")));
        assert!(cs.contains(&n("/a/2")));
    }

    #[test]
    fn lookup_refreshes_recency() {
        let mut cs = ContentStore::with_capacity(2);
        cs.insert(Data::value(n("/a/1"), 1), SimTime::ZERO).unwrap();
        cs.insert(Data::value(n("/a/2"), 2), SimTime::ZERO).unwrap();
        assert!(cs.lookup(&n("/a/1"), SimTime::from_micros(5)).is_some());
        let evicted = cs.insert(Data::value(n("/a/3"), 3), SimTime::ZERO).unwrap();
        assert_eq!(evicted, Some(n("/a/2")));
        assert_eq!(cs.iter().find(|(k, _)| **k == n("/a/1")).unwrap().1.last_used_at, SimTime::from_micros(5));
    }

    #[test]
    fn control_data_rejected() {
        let mut cs = ContentStore::default();
        for p in [Payload::Ack, Payload::Nack, Payload::Wait(SimDuration::from_secs(32))] {
            assert!(cs.insert(Data::new(n("/a/1"), p), SimTime::ZERO).is_err());
        }
        let mut forced = Data::value(n("/a/2"), 1);
        forced.no_cache = true;
        assert!(cs.insert(forced, SimTime::ZERO).is_err());
        assert!(cs.is_empty());
    }

    #[test]
    fn reinsert_same_name_keeps_single_entry() {
        let mut cs = ContentStore::with_capacity(2);
        cs.insert(Data::value(n("/a/1"), 1), SimTime::ZERO).unwrap();
        cs.insert(Data::value(n("/a/1"), 2), SimTime::ZERO).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.lookup(&n("/a/1"), SimTime::ZERO).unwrap().payload, Payload::Value(2));
    }
}
