//! Many seeds of one scenario, run in parallel.

use rayon::prelude::*;
use serde::Serialize;

use super::engine::run;
use super::metrics::MetricsReport;
use super::scenario::{ConfigError, ScenarioConfig};

/// Normal-approximation 95% interval.
const Z95: f64 = 1.959_964;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
    pub n: usize,
}

pub fn mean_ci(xs: &[f64]) -> Option<MeanCi> {
    let n = xs.len();
    if n == 0 {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let half_width = if n > 1 {
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Z95 * (var / n as f64).sqrt()
    } else {
        0.0
    };
    Some(MeanCi { mean, half_width, n })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub seeds: Vec<u64>,
    pub success_rate: Option<MeanCi>,
    pub mean_completion_s: Option<MeanCi>,
    pub tx_per_content: Option<MeanCi>,
    #[serde(skip)]
    pub reports: Vec<MetricsReport>,
}

/// Parses `a..b` / `a..=b` (both inclusive), `a,b,c`, or a single seed.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, ConfigError> {
    let bad = || ConfigError::invalid("seeds", s, "expected `a..b`, `a,b,c` or a single seed");
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

pub fn sweep(base: &ScenarioConfig, seeds: &[u64]) -> Result<SweepResult, ConfigError> {
    base.validate()?;
    let reports: Vec<MetricsReport> = seeds
        .par_iter()
        .map(|&seed| run(base.clone().with_seed(seed)))
        .collect::<Result<_, _>>()?;
    let collect = |f: &dyn Fn(&MetricsReport) -> Option<f64>| reports.iter().filter_map(f).collect::<Vec<f64>>();
    Ok(SweepResult {
        seeds: seeds.to_vec(),
        success_rate: mean_ci(&collect(&|r| r.success_rate())),
        mean_completion_s: mean_ci(&collect(&|r| r.quantiles().mean)),
        tx_per_content: mean_ci(&collect(&|r| (!r.transactions.is_empty()).then(|| r.tx_per_content().total))),
        reports,
    })
}
