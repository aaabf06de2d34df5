use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::link::LinkReport;
use super::scenario::Scenario;
use crate::endpoints::{Outcome, Transaction};
use crate::forwarder::RetxMode;
use crate::time::{SimDuration, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRole {
    Consumer,
    Forwarder,
    Gateway,
    Node,
}

impl NodeRole {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeRole::Consumer => "consumer",
            NodeRole::Forwarder => "forwarder",
            NodeRole::Gateway => "gateway",
            NodeRole::Node => "node",
        }
    }
}

/// Link departures by one node, lost packets and retransmissions included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounters {
    pub node: String,
    pub role: NodeRole,
    pub interests_tx: u64,
    pub data_tx: u64,
    /// Subset of the above sent on the gateway-node link.
    pub lora_tx: u64,
}

impl NodeCounters {
    pub fn total(&self) -> u64 {
        self.interests_tx + self.data_tx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TxPerContent {
    pub consumer: f64,
    pub forwarder: f64,
    pub gateway: f64,
    pub node: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub t_s: f64,
    pub fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: Option<f64>,
    pub p50: Option<f64>,
    pub p90: Option<f64>,
    pub p99: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

/// Outcome of one run. Plain data; everything else is derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub scenario: Scenario,
    pub retx: RetxMode,
    pub loss: f64,
    pub seed: u64,
    pub requests: usize,
    pub wait_estimate: SimDuration,
    pub measurement_start: SimTime,
    pub end: SimTime,
    pub transactions: Vec<Transaction>,
    pub nodes: Vec<NodeCounters>,
    pub links: Vec<LinkReport>,
    pub drops: BTreeMap<String, u64>,
    pub registration_tx: u64,
    pub indication_failures: u64,
    pub abandoned_by_ring: u64,
}

impl MetricsReport {
    pub fn count(&self, outcome: Outcome) -> usize {
        self.transactions.iter().filter(|t| t.outcome == outcome).count()
    }

    /// Completed / all transactions; `None` for an empty run.
    pub fn success_rate(&self) -> Option<f64> {
        let n = self.transactions.len();
        (n > 0).then(|| self.count(Outcome::Completed) as f64 / n as f64)
    }

    pub fn fraction(&self, outcome: Outcome) -> Option<f64> {
        let n = self.transactions.len();
        (n > 0).then(|| self.count(outcome) as f64 / n as f64)
    }

    /// Completion times of successful transactions in seconds, ascending.
    pub fn completion_times(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.transactions.iter().filter_map(|t| t.completion_time()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn quantiles(&self) -> Quantiles {
        let v = self.completion_times();
        let q = |p: f64| {
            (!v.is_empty()).then(|| {
                let rank = ((p * v.len() as f64).ceil() as usize).clamp(1, v.len());
                v[rank - 1]
            })
        };
        Quantiles {
            min: v.first().copied(),
            p50: q(0.5),
            p90: q(0.9),
            p99: q(0.99),
            max: v.last().copied(),
            mean: (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64),
        }
    }

    /// Fraction of all transactions completed within `t`, sampled every `resolution_s`
    /// from 0 up to the slowest completion. Ends at the success rate.
    pub fn cdf(&self, resolution_s: f64) -> Vec<CdfPoint> {
        let n = self.transactions.len();
        if n == 0 || resolution_s <= 0.0 {
            return Vec::new();
        }
        let times = self.completion_times();
        let last = times.last().copied().unwrap_or(0.0);
        let steps = (last / resolution_s).ceil() as usize;
        let mut idx = 0;
        (0..=steps)
            .map(|k| {
                let t = k as f64 * resolution_s;
                while idx < times.len() && times[idx] <= t + 1e-9 {
                    idx += 1;
                }
                CdfPoint { t_s: t, fraction: idx as f64 / n as f64 }
            })
            .collect()
    }

    fn role_total(&self, role: NodeRole) -> u64 {
        self.nodes.iter().filter(|c| c.role == role).map(NodeCounters::total).sum()
    }

    /// Interest + Data departures per content item, split by role.
    pub fn tx_per_content(&self) -> TxPerContent {
        let n = self.transactions.len();
        if n == 0 {
            return TxPerContent::default();
        }
        let per = |role| self.role_total(role) as f64 / n as f64;
        let r = TxPerContent {
            consumer: per(NodeRole::Consumer),
            forwarder: per(NodeRole::Forwarder),
            gateway: per(NodeRole::Gateway),
            node: per(NodeRole::Node),
            total: 0.0,
        };
        TxPerContent { total: self.nodes.iter().map(NodeCounters::total).sum::<u64>() as f64 / n as f64, ..r }
    }

    /// Transmissions on the gateway-node link per content item.
    pub fn lora_tx_per_content(&self) -> f64 {
        let n = self.transactions.len();
        if n == 0 {
            return 0.0;
        }
        self.nodes.iter().map(|c| c.lora_tx).sum::<u64>() as f64 / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endpoints::Initiator;

    fn tx(k: u32, done: Option<f64>) -> Transaction {
        Transaction {
            name: format!("/n1/{k}").parse().unwrap(),
            initiator: Initiator::Consumer,
            initiated_at: SimTime::from_secs_f64(100.0),
            completed_at: done.map(|d| SimTime::from_secs_f64(100.0 + d)),
            outcome: if done.is_some() { Outcome::Completed } else { Outcome::Failed },
            attempts: 1,
        }
    }

    fn report(transactions: Vec<Transaction>) -> MetricsReport {
        MetricsReport {
            scenario: Scenario::Vanilla1,
            retx: RetxMode::Inr,
            loss: 0.0,
            seed: 1,
            requests: transactions.len(),
            wait_estimate: SimDuration::from_secs(32),
            measurement_start: SimTime::ZERO,
            end: SimTime::ZERO,
            transactions,
            nodes: vec![
                NodeCounters { node: "c".into(), role: NodeRole::Consumer, interests_tx: 4, data_tx: 0, lora_tx: 0 },
                NodeCounters { node: "g".into(), role: NodeRole::Gateway, interests_tx: 2, data_tx: 2, lora_tx: 2 },
            ],
            links: Vec::new(),
            drops: BTreeMap::new(),
            registration_tx: 0,
            indication_failures: 0,
            abandoned_by_ring: 0,
        }
    }

    #[test]
    fn empty_run() {
        let r = report(Vec::new());
        assert_eq!(r.success_rate(), None);
        assert!(r.cdf(1.0).is_empty());
        assert_eq!(r.quantiles().p50, None);
        assert_eq!(r.tx_per_content(), TxPerContent::default());
    }

    #[test]
    fn cdf_monotone_and_ends_at_success_rate() {
        let r = report(vec![tx(1, Some(0.5)), tx(2, Some(2.0)), tx(3, None), tx(4, Some(2.5))]);
        let cdf = r.cdf(1.0);
        let fr: Vec<f64> = cdf.iter().map(|p| p.fraction).collect();
        assert_eq!(fr, vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(cdf.last().unwrap().fraction, r.success_rate().unwrap());
        assert_eq!(r.quantiles().max, Some(2.5));
        assert_eq!(r.quantiles().p50, Some(2.0));
    }

    #[test]
    fn per_role_overhead() {
        let r = report(vec![tx(1, Some(1.0)), tx(2, None)]);
        let t = r.tx_per_content();
        assert_eq!(t.consumer, 2.0);
        assert_eq!(t.gateway, 2.0);
        assert_eq!(t.total, 4.0);
        assert_eq!(r.lora_tx_per_content(), 1.0);
    }
}
