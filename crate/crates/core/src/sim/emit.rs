//! CSV and JSON report files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::metrics::{CdfPoint, MetricsReport, Quantiles, TxPerContent};
use super::scenario::retx_str;
use crate::endpoints::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
struct TransactionRow {
    name: String,
    initiated_at_s: f64,
    completed_at_s: Option<f64>,
    outcome: &'static str,
    attempts: u32,
}

#[derive(Debug, Serialize)]
struct NodeRow {
    node: String,
    role: &'static str,
    interests_tx: u64,
    data_tx: u64,
}

/// Aggregates written to `summary.{csv,json}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub retx: String,
    pub loss: f64,
    pub seed: u64,
    pub requests: usize,
    pub completed: usize,
    pub failed: usize,
    pub abandoned: usize,
    pub success_rate: Option<f64>,
    pub completion_s: Quantiles,
    pub tx_per_content: TxPerContent,
    pub lora_tx_per_content: f64,
    pub registration_tx: u64,
    pub cdf: Vec<CdfPoint>,
}

impl Summary {
    pub fn of(r: &MetricsReport) -> Self {
        Summary {
            scenario: r.scenario.to_string(),
            retx: retx_str(r.retx).to_string(),
            loss: r.loss,
            seed: r.seed,
            requests: r.transactions.len(),
            completed: r.count(Outcome::Completed),
            failed: r.count(Outcome::Failed),
            abandoned: r.count(Outcome::Abandoned),
            success_rate: r.success_rate(),
            completion_s: r.quantiles(),
            tx_per_content: r.tx_per_content(),
            lora_tx_per_content: r.lora_tx_per_content(),
            registration_tx: r.registration_tx,
            cdf: r.cdf(1.0),
        }
    }

    fn rows(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<f64>| v.map_or_else(|| "null".to_string(), |x| x.to_string());
        let q = &self.completion_s;
        let t = &self.tx_per_content;
        vec![
            ("scenario", self.scenario.clone()),
            ("retx", self.retx.clone()),
            ("loss", self.loss.to_string()),
            ("seed", self.seed.to_string()),
            ("requests", self.requests.to_string()),
            ("completed", self.completed.to_string()),
            ("failed", self.failed.to_string()),
            ("abandoned", self.abandoned.to_string()),
            ("success_rate", opt(self.success_rate)),
            ("completion_min_s", opt(q.min)),
            ("completion_p50_s", opt(q.p50)),
            ("completion_p90_s", opt(q.p90)),
            ("completion_p99_s", opt(q.p99)),
            ("completion_max_s", opt(q.max)),
            ("completion_mean_s", opt(q.mean)),
            ("tx_per_content_consumer", t.consumer.to_string()),
            ("tx_per_content_forwarder", t.forwarder.to_string()),
            ("tx_per_content_gateway", t.gateway.to_string()),
            ("tx_per_content_node", t.node.to_string()),
            ("tx_per_content_total", t.total.to_string()),
            ("lora_tx_per_content", self.lora_tx_per_content.to_string()),
            ("registration_tx", self.registration_tx.to_string()),
        ]
    }
}

fn transaction_rows(r: &MetricsReport) -> Vec<TransactionRow> {
    r.transactions
        .iter()
        .map(|t| TransactionRow {
            name: t.name.to_string(),
            initiated_at_s: t.initiated_at.as_secs_f64(),
            completed_at_s: t.completed_at.map(|c| c.as_secs_f64()),
            outcome: t.outcome.as_str(),
            attempts: t.attempts,
        })
        .collect()
}

fn node_rows(r: &MetricsReport) -> Vec<NodeRow> {
    r.nodes
        .iter()
        .map(|c| NodeRow { node: c.node.clone(), role: c.role.as_str(), interests_tx: c.interests_tx, data_tx: c.data_tx })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)
}

/// Writes transactions, node counters, summary and (CSV only) the CDF into `dir`.
pub fn emit(r: &MetricsReport, format: Format, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let summary = Summary::of(r);
    let p = |f: &str| dir.join(f);
    match format {
        Format::Csv => {
            write_csv(&p("transactions.csv"), &["name", "initiated_at_s", "completed_at_s", "outcome", "attempts"], &transaction_rows(r))?;
            write_csv(&p("nodes.csv"), &["node", "role", "interests_tx", "data_tx"], &node_rows(r))?;
            write_csv(&p("summary.csv"), &["key", "value"], &summary.rows())?;
            let cdf: Vec<(f64, f64)> = summary.cdf.iter().map(|c| (c.t_s, c.fraction)).collect();
            write_csv(&p("cdf.csv"), &["t_s", "fraction"], &cdf)?;
            Ok(vec![p("transactions.csv"), p("nodes.csv"), p("summary.csv"), p("cdf.csv")])
        }
        Format::Json => {
            write_json(&p("transactions.json"), &transaction_rows(r))?;
            write_json(&p("nodes.json"), &node_rows(r))?;
            write_json(&p("summary.json"), &summary)?;
            Ok(vec![p("transactions.json"), p("nodes.json"), p("summary.json")])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forwarder::RetxMode;
    use crate::sim::{run, Scenario, ScenarioConfig};

    #[test]
    fn empty_run_reports_null_success() {
        let r = run(ScenarioConfig::preset(Scenario::Vanilla3, RetxMode::Inr).with_requests(0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        emit(&r, Format::Csv, dir.path()).unwrap();
        emit(&r, Format::Json, dir.path()).unwrap();
        let csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert!(csv.lines().any(|l| l == "success_rate,null"));
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert!(json["success_rate"].is_null());
        assert_eq!(fs::read_to_string(dir.path().join("transactions.csv")).unwrap().lines().count(), 1);
    }

    #[test]
    fn transactions_csv_round_trips() {
        let r = run(ScenarioConfig::preset(Scenario::Vanilla1, RetxMode::Cr).with_requests(25).with_seed(2)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        emit(&r, Format::Csv, dir.path()).unwrap();
        let mut rd = csv::Reader::from_path(dir.path().join("transactions.csv")).unwrap();
        let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 25);
        for (row, t) in rows.iter().zip(&r.transactions) {
            assert_eq!(&row[0], t.name.to_string());
            assert_eq!(&row[3], t.outcome.as_str());
            assert_eq!(row[2].is_empty(), t.completed_at.is_none());
        }
    }
}
