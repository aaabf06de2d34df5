use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsme::{derive_timing, DsmeConfig, DsmeError};
use crate::endpoints::{Workload, WorkloadError};
use crate::forwarder::{RetxMode, TimerConfig, TimerError, DEFAULT_CS_CAPACITY};
use crate::gateway::GatewayMode;
use crate::name::{Name, NameError};
use crate::time::SimDuration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Vanilla1,
    Vanilla2,
    Vanilla3,
    DelayTolerant,
    ReflexivePush,
}

impl Scenario {
    pub const ALL: [Scenario; 5] =
        [Scenario::Vanilla1, Scenario::Vanilla2, Scenario::Vanilla3, Scenario::DelayTolerant, Scenario::ReflexivePush];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Vanilla1 => "vanilla1",
            Scenario::Vanilla2 => "vanilla2",
            Scenario::Vanilla3 => "vanilla3",
            Scenario::DelayTolerant => "delay_tolerant",
            Scenario::ReflexivePush => "reflexive_push",
        }
    }

    pub fn gateway_mode(self) -> GatewayMode {
        match self {
            Scenario::DelayTolerant => GatewayMode::DelayTolerant,
            Scenario::ReflexivePush => GatewayMode::ReflexivePush,
            _ => GatewayMode::Vanilla,
        }
    }

    pub fn is_push(self) -> bool {
        self == Scenario::ReflexivePush
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "vanilla1" => Ok(Scenario::Vanilla1),
            "vanilla2" => Ok(Scenario::Vanilla2),
            "vanilla3" => Ok(Scenario::Vanilla3),
            "delay_tolerant" => Ok(Scenario::DelayTolerant),
            "reflexive_push" => Ok(Scenario::ReflexivePush),
            _ => Err(ConfigError::invalid("scenario", s, "expected vanilla1|vanilla2|vanilla3|delay_tolerant|reflexive_push")),
        }
    }
}

pub fn parse_retx(s: &str) -> Result<RetxMode, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "inr" => Ok(RetxMode::Inr),
        "cr" => Ok(RetxMode::Cr),
        _ => Err(ConfigError::invalid("retx", s, "expected inr|cr")),
    }
}

pub fn retx_str(m: RetxMode) -> &'static str {
    match m {
        RetxMode::Inr => "inr",
        RetxMode::Cr => "cr",
        RetxMode::Off => "off",
    }
}

/// Which Internet links drop packets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossScope {
    /// Both Internet hops, both directions.
    AllHops,
    /// Only the consumer-forwarder hop, both directions.
    ConsumerHop,
}

/// Physical model of the gateway-node link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radio {
    Dsme,
    /// Same fixed delay as an Internet hop, lossless. Used for the three-hop baseline.
    Ideal,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
    #[error("loss probability {0} outside [0, 1]")]
    Loss(f64),
    #[error(transparent)]
    Dsme(#[from] DsmeError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Timer(#[from] TimerError),
    #[error(transparent)]
    Name(#[from] NameError),
}

impl ConfigError {
    pub fn invalid(key: &str, value: &str, reason: impl Into<String>) -> Self {
        ConfigError::InvalidValue { key: key.to_string(), value: value.to_string(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleTimers {
    pub consumer: TimerConfig,
    pub forwarder: TimerConfig,
    pub gateway: TimerConfig,
    pub node: TimerConfig,
}

impl RoleTimers {
    /// Per-role defaults for each scenario.
    pub fn table(scenario: Scenario, retx: RetxMode) -> Self {
        let inr = retx == RetxMode::Inr;
        let short_fwd = |pit| if inr { TimerConfig::secs(pit, 3, 1, RetxMode::Inr) } else { TimerConfig::secs(pit, 0, 1, RetxMode::Cr) };
        let consumer = |pit, attempts, interval| TimerConfig::secs(pit, attempts, interval, retx);
        let gateway = TimerConfig::pit_only(60);
        let node = TimerConfig::pit_only(60);
        match scenario {
            Scenario::Vanilla1 => RoleTimers { consumer: consumer(4, 3, 1), forwarder: short_fwd(4), gateway, node },
            Scenario::Vanilla2 => RoleTimers { consumer: consumer(60, 3, 15), forwarder: short_fwd(4), gateway, node },
            Scenario::Vanilla3 => RoleTimers { consumer: consumer(60, 3, 15), forwarder: short_fwd(60), gateway, node },
            Scenario::DelayTolerant => RoleTimers { consumer: consumer(4, 3, 1), forwarder: short_fwd(4), gateway, node },
            Scenario::ReflexivePush => RoleTimers {
                consumer: consumer(4, 3, 1),
                forwarder: short_fwd(4),
                gateway: TimerConfig::secs(4, 3, 1, RetxMode::Inr),
                node,
            },
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub retx: RetxMode,
    pub loss: f64,
    pub loss_scope: LossScope,
    pub internet_delay: SimDuration,
    pub radio: Radio,
    pub timers: RoleTimers,
    pub workload: Workload,
    pub dsme: DsmeConfig,
    pub seed: u64,
    pub node_prefix: Name,
    pub phone_home_target: Name,
    pub wait_estimate: Option<SimDuration>,
    pub ring_capacity: usize,
    pub ring_timeout: Option<SimDuration>,
    pub cs_capacity: usize,
    pub drain: SimDuration,
    pub trace: bool,
}

impl ScenarioConfig {
    pub fn preset(scenario: Scenario, retx: RetxMode) -> Self {
        ScenarioConfig {
            scenario,
            retx,
            loss: 0.0,
            loss_scope: LossScope::AllHops,
            internet_delay: SimDuration::from_millis(20),
            radio: Radio::Dsme,
            timers: RoleTimers::table(scenario, retx),
            workload: Workload::default(),
            dsme: DsmeConfig::default(),
            seed: 1,
            node_prefix: "/n1".parse().expect("static name"),
            phone_home_target: "/consumer/inbox".parse().expect("static name"),
            wait_estimate: None,
            ring_capacity: 8,
            ring_timeout: None,
            cs_capacity: DEFAULT_CS_CAPACITY,
            drain: SimDuration::from_secs(300),
            trace: false,
        }
    }

    pub fn with_loss(mut self, loss: f64) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_requests(mut self, n: usize) -> Self {
        self.workload.requests = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.loss) {
            return Err(ConfigError::Loss(self.loss));
        }
        derive_timing(&self.dsme)?;
        self.workload.validate()?;
        for t in [self.timers.consumer, self.timers.forwarder, self.timers.gateway, self.timers.node] {
            TimerConfig::new(t.pit_timeout, t.retx_attempts, t.retx_interval, t.mode)?;
        }
        if self.ring_capacity == 0 {
            return Err(ConfigError::invalid("ring_capacity", "0", "must be positive"));
        }
        if self.cs_capacity == 0 {
            return Err(ConfigError::invalid("cs_capacity", "0", "must be positive"));
        }
        if self.node_prefix.is_empty() || self.phone_home_target.is_empty() {
            return Err(ConfigError::invalid("phone_home_target", "/", "names must be non-empty"));
        }
        if self.wait_estimate.is_some_and(|w| w.is_zero()) {
            return Err(ConfigError::invalid("wait_estimate_s", "0", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_defaults() {
        let t = RoleTimers::table(Scenario::Vanilla2, RetxMode::Cr);
        assert_eq!(t.consumer, TimerConfig::secs(60, 3, 15, RetxMode::Cr));
        assert_eq!(t.forwarder.retx_attempts, 0);
        assert_eq!(t.forwarder.pit_timeout, SimDuration::from_secs(4));
        let t = RoleTimers::table(Scenario::Vanilla3, RetxMode::Inr);
        assert_eq!(t.forwarder, TimerConfig::secs(60, 3, 1, RetxMode::Inr));
        assert_eq!(t.gateway, TimerConfig::pit_only(60));
        let t = RoleTimers::table(Scenario::ReflexivePush, RetxMode::Inr);
        assert_eq!(t.gateway, TimerConfig::secs(4, 3, 1, RetxMode::Inr));
        assert_eq!(t.node.retx_attempts, 0);
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.as_str().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("delay-tolerant".parse::<Scenario>().unwrap(), Scenario::DelayTolerant);
        assert!("vanilla4".parse::<Scenario>().is_err());
    }

    #[test]
    fn validation() {
        let ok = ScenarioConfig::preset(Scenario::Vanilla1, RetxMode::Inr);
        assert!(ok.validate().is_ok());
        assert!(matches!(ok.clone().with_loss(1.5).validate(), Err(ConfigError::Loss(_))));
        let mut bad = ok.clone();
        bad.dsme.superframe_order = 6;
        assert!(matches!(bad.validate(), Err(ConfigError::Dsme(_))));
        let mut bad = ok;
        bad.ring_capacity = 0;
        assert!(bad.validate().is_err());
    }
}
