use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::name::Name;
use crate::time::{SimDuration, SimTime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkloadError {
    #[error("interval jitter {jitter} must be below the mean {mean}")]
    JitterTooLarge { mean: SimDuration, jitter: SimDuration },
}

/// N content items spaced by Uniform(mean - jitter, mean + jitter) intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Workload {
    pub requests: usize,
    pub interval_mean: SimDuration,
    pub interval_jitter: SimDuration,
}

impl Default for Workload {
    fn default() -> Self {
        Workload { requests: 1000, interval_mean: SimDuration::from_secs(60), interval_jitter: SimDuration::from_secs(10) }
    }
}

impl Workload {
    pub fn validate(&self) -> Result<(), WorkloadError> {
        if self.interval_jitter >= self.interval_mean {
            return Err(WorkloadError::JitterTooLarge { mean: self.interval_mean, jitter: self.interval_jitter });
        }
        Ok(())
    }

    /// Trigger times; the first item comes one interval after `start`.
    pub fn schedule<R: Rng + ?Sized>(&self, start: SimTime, rng: &mut R) -> Vec<SimTime> {
        let lo = (self.interval_mean.saturating_sub(self.interval_jitter)).as_micros();
        let hi = (self.interval_mean + self.interval_jitter).as_micros();
        let mut t = start;
        (0..self.requests)
            .map(|_| {
                t += SimDuration::from_micros(rng.gen_range(lo..=hi));
                t
            })
            .collect()
    }

    /// Content names `<prefix>/1` .. `<prefix>/N`.
    pub fn names(&self, prefix: &Name) -> Vec<Name> {
        (1..=self.requests).map(|k| prefix.child(k.to_string()).expect("numeric component")).collect()
    }
}
