use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::name::Name;
use crate::time::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pending,
    Completed,
    Failed,
    Abandoned,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pending => "pending",
            Outcome::Completed => "completed",
            Outcome::Failed => "failed",
            Outcome::Abandoned => "abandoned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Initiator {
    Consumer,
    Producer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub name: Name,
    pub initiator: Initiator,
    pub initiated_at: SimTime,
    pub completed_at: Option<SimTime>,
    pub outcome: Outcome,
    /// Interests issued by the consumer application for this name.
    pub attempts: u32,
}

impl Transaction {
    pub fn completion_time(&self) -> Option<f64> {
        self.completed_at.map(|t| t.since(self.initiated_at).as_secs_f64())
    }
}

/// All transactions of a run, in creation order. Outcomes only move out of `Pending`.
#[derive(Debug, Clone, Default)]
pub struct Ledger {
    txs: BTreeMap<Name, usize>,
    records: Vec<Transaction>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    /// Opens a transaction; returns false if the name already has one.
    pub fn start(&mut self, name: Name, initiator: Initiator, now: SimTime) -> bool {
        if self.txs.contains_key(&name) {
            return false;
        }
        self.txs.insert(name.clone(), self.records.len());
        self.records.push(Transaction {
            name,
            initiator,
            initiated_at: now,
            completed_at: None,
            outcome: Outcome::Pending,
            attempts: 0,
        });
        true
    }

    pub fn get(&self, name: &Name) -> Option<&Transaction> {
        self.txs.get(name).map(|&i| &self.records[i])
    }

    fn pending_mut(&mut self, name: &Name) -> Option<&mut Transaction> {
        let i = *self.txs.get(name)?;
        Some(&mut self.records[i]).filter(|t| t.outcome == Outcome::Pending)
    }

    pub fn is_pending(&self, name: &Name) -> bool {
        self.get(name).is_some_and(|t| t.outcome == Outcome::Pending)
    }

    pub fn is_completed(&self, name: &Name) -> bool {
        self.get(name).is_some_and(|t| t.outcome == Outcome::Completed)
    }

    pub fn record_attempt(&mut self, name: &Name) {
        if let Some(t) = self.pending_mut(name) {
            t.attempts += 1;
        }
    }

    fn finish(&mut self, name: &Name, outcome: Outcome, at: Option<SimTime>) -> bool {
        match self.pending_mut(name) {
            Some(t) => {
                t.outcome = outcome;
                t.completed_at = at;
                true
            }
            None => false,
        }
    }

    pub fn complete(&mut self, name: &Name, now: SimTime) -> bool {
        self.finish(name, Outcome::Completed, Some(now))
    }

    pub fn fail(&mut self, name: &Name) -> bool {
        self.finish(name, Outcome::Failed, None)
    }

    pub fn abandon(&mut self, name: &Name) -> bool {
        self.finish(name, Outcome::Abandoned, None)
    }

    /// Fails every transaction still pending; returns how many.
    pub fn close_pending(&mut self) -> usize {
        let mut n = 0;
        for t in self.records.iter_mut().filter(|t| t.outcome == Outcome::Pending) {
            t.outcome = Outcome::Failed;
            n += 1;
        }
        n
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transaction> {
        self.records.iter()
    }

    pub fn into_records(self) -> Vec<Transaction> {
        self.records
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn outcomes_are_terminal() {
        let mut l = Ledger::new();
        assert!(l.start(n("/n1/1"), Initiator::Consumer, SimTime::ZERO));
        assert!(!l.start(n("/n1/1"), Initiator::Consumer, SimTime::ZERO));
        assert!(l.complete(&n("/n1/1"), SimTime::from_secs_f64(2.0)));
        assert!(!l.fail(&n("/n1/1")));
        assert!(!l.abandon(&n("/n1/1")));
        assert_eq!(l.get(&n("/n1/1")).unwrap().completion_time(), Some(2.0));
        assert!(!l.complete(&n("/n1/2"), SimTime::ZERO));
    }

    #[test]
    fn close_pending_fails_the_rest() {
        let mut l = Ledger::new();
        for k in 1..=3 {
            l.start(n(&format!("/n1/{k}")), Initiator::Producer, SimTime::ZERO);
        }
        l.complete(&n("/n1/2"), SimTime::ZERO);
        assert_eq!(l.close_pending(), 2);
        let outcomes: Vec<_> = l.iter().map(|t| t.outcome).collect();
        assert_eq!(outcomes, vec![Outcome::Failed, Outcome::Completed, Outcome::Failed]);
    }
}
