use serde::Serialize;

use crate::name::Name;
use crate::time::{SimDuration, SimTime};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingEntry {
    pub name: Name,
    pub due_at: SimTime,
    pub issued: bool,
}

/// Short circular list of future re-requests. Writing always lands on the cursor slot,
/// so a still-live occupant is overwritten and its request is abandoned.
#[derive(Debug, Clone)]
pub struct RetryRing {
    slots: Vec<Option<RingEntry>>,
    cursor: usize,
    entry_timeout: Option<SimDuration>,
}

impl RetryRing {
    /// `capacity` is clamped to at least one slot.
    pub fn new(capacity: usize, entry_timeout: Option<SimDuration>) -> Self {
        RetryRing { slots: vec![None; capacity.max(1)], cursor: 0, entry_timeout }
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn len(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.slots.iter().flatten().any(|e| &e.name == name)
    }

    /// Schedules `name` for `due_at`. Returns the name of an overwritten live entry.
    pub fn insert(&mut self, name: Name, due_at: SimTime, now: SimTime) -> Option<Name> {
        if let Some(e) = self.slots.iter_mut().flatten().find(|e| e.name == name) {
            e.due_at = due_at;
            e.issued = false;
            return None;
        }
        if let Some(timeout) = self.entry_timeout {
            for slot in &mut self.slots {
                if slot.as_ref().is_some_and(|e| e.due_at + timeout <= now) {
                    *slot = None;
                }
            }
            if self.slots[self.cursor].is_some() {
                if let Some(free) = self.slots.iter().position(Option::is_none) {
                    self.cursor = free;
                }
            }
        }
        let victim = self.slots[self.cursor].replace(RingEntry { name, due_at, issued: false });
        self.cursor = (self.cursor + 1) % self.slots.len();
        victim.map(|e| e.name)
    }

    /// Marks and returns entries that are due and not yet re-issued, in due order.
    pub fn take_due(&mut self, now: SimTime) -> Vec<Name> {
        let mut due: Vec<&mut RingEntry> =
            self.slots.iter_mut().flatten().filter(|e| !e.issued && e.due_at <= now).collect();
        due.sort_by(|a, b| (a.due_at, &a.name).cmp(&(b.due_at, &b.name)));
        due.into_iter()
            .map(|e| {
                e.issued = true;
                e.name.clone()
            })
            .collect()
    }

    pub fn remove(&mut self, name: &Name) -> bool {
        match self.slots.iter_mut().find(|s| s.as_ref().is_some_and(|e| &e.name == name)) {
            Some(slot) => {
                *slot = None;
                true
            }
            None => false,
        }
    }

    pub fn next_due(&self) -> Option<SimTime> {
        self.slots.iter().flatten().filter(|e| !e.issued).map(|e| e.due_at).min()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RingEntry> {
        self.slots.iter().flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(k: u32) -> Name {
        format!("/n1/{k}").parse().unwrap()
    }

    fn t(s: f64) -> SimTime {
        SimTime::from_secs_f64(s)
    }

    #[test]
    fn overwrite_reports_victim() {
        let mut r = RetryRing::new(2, None);
        assert_eq!(r.insert(n(1), t(32.0), t(0.0)), None);
        assert_eq!(r.insert(n(2), t(33.0), t(1.0)), None);
        assert_eq!(r.insert(n(3), t(34.0), t(2.0)), Some(n(1)));
        assert!(!r.contains(&n(1)));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn overwrite_even_when_another_slot_is_free() {
        let mut r = RetryRing::new(2, None);
        r.insert(n(1), t(1.0), t(0.0));
        r.insert(n(2), t(1.0), t(0.0));
        r.remove(&n(2));
        assert_eq!(r.insert(n(3), t(1.0), t(0.0)), Some(n(1)));
    }

    #[test]
    fn timeout_purges_stale_entries_first() {
        let mut r = RetryRing::new(2, Some(SimDuration::from_secs(10)));
        r.insert(n(1), t(5.0), t(0.0));
        r.insert(n(2), t(50.0), t(0.0));
        assert_eq!(r.insert(n(3), t(60.0), t(20.0)), None);
        assert!(r.contains(&n(2)) && r.contains(&n(3)));
    }

    #[test]
    fn due_entries_issue_once() {
        let mut r = RetryRing::new(8, None);
        r.insert(n(2), t(40.0), t(0.0));
        r.insert(n(1), t(32.0), t(0.0));
        assert!(r.take_due(t(31.0)).is_empty());
        assert_eq!(r.next_due(), Some(t(32.0)));
        assert_eq!(r.take_due(t(45.0)), vec![n(1), n(2)]);
        assert!(r.take_due(t(46.0)).is_empty());
        assert_eq!(r.next_due(), None);
        // a fresh WAIT re-arms the same entry
        assert_eq!(r.insert(n(1), t(80.0), t(46.0)), None);
        assert_eq!(r.len(), 2);
        assert_eq!(r.take_due(t(80.0)), vec![n(1)]);
    }

    proptest! {
        #[test]
        fn size_bounded_and_victims_accounted(cap in 1usize..10, ops in prop::collection::vec((0u32..30, 0u64..100), 0..200)) {
            let mut r = RetryRing::new(cap, None);
            let mut live = std::collections::BTreeSet::new();
            for (k, due) in ops {
                let victim = r.insert(n(k), SimTime::from_micros(due), SimTime::ZERO);
                live.insert(n(k));
                if let Some(v) = victim {
                    prop_assert!(live.remove(&v));
                }
                prop_assert!(r.len() <= cap);
                prop_assert_eq!(r.len(), live.len());
            }
        }
    }
}
