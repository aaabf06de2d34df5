//! Flat `key = value` scenario files.

use std::collections::BTreeMap;

use super::scenario::{parse_retx, ConfigError, LossScope, Radio, Scenario, ScenarioConfig};
use crate::forwarder::{RetxMode, TimerConfig};
use crate::gateway::GatewayMode;
use crate::time::SimDuration;

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: idx + 1, message: format!("expected `key = value`, got `{line}`") });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1, message: "empty key".into() });
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConfigError::Syntax { line: idx + 1, message: format!("duplicate key `{k}`") });
        }
    }
    Ok(map)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError::invalid(key, v, "not a number"))
}

fn secs(key: &str, v: &str) -> Result<SimDuration, ConfigError> {
    let s: f64 = num(key, v)?;
    if !s.is_finite() || s < 0.0 {
        return Err(ConfigError::invalid(key, v, "must be a non-negative number of seconds"));
    }
    Ok(SimDuration::from_secs_f64(s))
}

// "<pit_s>,<attempts>:<interval_s>", e.g. "4,3:1" or "60,0:0".
fn timers(key: &str, v: &str, retx: RetxMode) -> Result<TimerConfig, ConfigError> {
    let bad = || ConfigError::invalid(key, v, "expected `<pit_s>,<attempts>:<interval_s>`");
    let (pit, rest) = v.split_once(',').ok_or_else(bad)?;
    let (attempts, interval) = rest.split_once(':').ok_or_else(bad)?;
    let attempts: u32 = attempts.trim().parse().map_err(|_| bad())?;
    let mode = if attempts == 0 { RetxMode::Off } else { retx };
    Ok(TimerConfig::new(secs(key, pit.trim())?, attempts, secs(key, interval.trim())?, mode)?)
}

/// Builds a validated config from a key-value map: the `scenario`/`retx` preset first,
/// then every other key applied on top.
pub fn from_kv(map: &BTreeMap<String, String>) -> Result<ScenarioConfig, ConfigError> {
    let scenario: Scenario = map.get("scenario").ok_or(ConfigError::Missing("scenario"))?.parse()?;
    let retx = map.get("retx").map(|s| parse_retx(s)).transpose()?.unwrap_or(RetxMode::Inr);
    let mut c = ScenarioConfig::preset(scenario, retx);
    for (k, v) in map {
        let k = k.as_str();
        match k {
            "scenario" | "retx" => {}
            "mode" => {
                let want = match v.as_str() {
                    "vanilla" => GatewayMode::Vanilla,
                    "delay_tolerant" => GatewayMode::DelayTolerant,
                    "reflexive_push" => GatewayMode::ReflexivePush,
                    _ => return Err(ConfigError::invalid(k, v, "expected vanilla|delay_tolerant|reflexive_push")),
                };
                if want != scenario.gateway_mode() {
                    return Err(ConfigError::invalid(k, v, format!("conflicts with scenario {scenario}")));
                }
            }
            "loss" => c.loss = num(k, v)?,
            "loss_scope" => {
                c.loss_scope = match v.as_str() {
                    "all_hops" => LossScope::AllHops,
                    "consumer_hop" => LossScope::ConsumerHop,
                    _ => return Err(ConfigError::invalid(k, v, "expected all_hops|consumer_hop")),
                }
            }
            "internet_delay_ms" => c.internet_delay = secs(k, v)? / 1000,
            "radio" => {
                c.radio = match v.as_str() {
                    "dsme" => Radio::Dsme,
                    "ideal" => Radio::Ideal,
                    _ => return Err(ConfigError::invalid(k, v, "expected dsme|ideal")),
                }
            }
            "symbol_time_ms" => c.dsme.symbol_time = secs(k, v)? / 1000,
            "so" => c.dsme.superframe_order = num(k, v)?,
            "mo" => c.dsme.multisuperframe_order = num(k, v)?,
            "bo" => c.dsme.beacon_order = num(k, v)?,
            "channels" => c.dsme.channels = num(k, v)?,
            "cfp_slots" => c.dsme.cfp_slots_per_superframe = num(k, v)?,
            "phone_home_target" => c.phone_home_target = v.parse()?,
            "node_prefix" => c.node_prefix = v.parse()?,
            "wait_estimate_s" => c.wait_estimate = Some(secs(k, v)?),
            "requests" => c.workload.requests = num(k, v)?,
            "interval_mean_s" => c.workload.interval_mean = secs(k, v)?,
            "interval_jitter_s" => c.workload.interval_jitter = secs(k, v)?,
            "seed" => c.seed = num(k, v)?,
            "ring_capacity" => c.ring_capacity = num(k, v)?,
            "ring_timeout_s" => c.ring_timeout = Some(secs(k, v)?),
            "cs_capacity" => c.cs_capacity = num(k, v)?,
            "drain_s" => c.drain = secs(k, v)?,
            "consumer_timers" => c.timers.consumer = timers(k, v, retx)?,
            "forwarder_timers" => c.timers.forwarder = timers(k, v, retx)?,
            "gateway_timers" => c.timers.gateway = timers(k, v, RetxMode::Inr)?,
            "node_timers" => c.timers.node = timers(k, v, RetxMode::Inr)?,
            "trace" => c.trace = num(k, v)?,
            _ => return Err(ConfigError::UnknownKey(k.to_string())),
        }
    }
    c.validate()?;
    Ok(c)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    from_kv(&parse_kv(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::SimDuration;

    #[test]
    fn full_file() {
        let text = "# experiment\nscenario = delay-tolerant\nretx = inr\nloss = 0.05   # per hop\n\nrequests = 20\nseed = 7\nwait_estimate_s = 16.4\nphone_home_target = /home/box\nforwarder_timers = 4,3:1\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.scenario, Scenario::DelayTolerant);
        assert_eq!(c.loss, 0.05);
        assert_eq!(c.workload.requests, 20);
        assert_eq!(c.seed, 7);
        assert_eq!(c.wait_estimate, Some(SimDuration::from_micros(16_400_000)));
        assert_eq!(c.phone_home_target.to_string(), "/home/box");
    }

    #[test]
    fn dsme_keys() {
        let c = parse_config("scenario = vanilla3\nmo = 4\nbo = 4\nsymbol_time_ms = 1.024\ncfp_slots = 7\nchannels = 1").unwrap();
        assert_eq!(c.dsme.multisuperframe_order, 4);
        assert_eq!(c.dsme.symbol_time, SimDuration::from_micros(1024));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_config("retx = cr"), Err(ConfigError::Missing("scenario"))));
        assert!(matches!(parse_config("scenario = vanilla1\nfoo = 1"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(parse_config("scenario = vanilla1\nloss"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(matches!(parse_config("scenario = vanilla1\nloss = 2"), Err(ConfigError::Loss(_))));
        assert!(matches!(parse_config("scenario = vanilla1\nso = 9"), Err(ConfigError::Dsme(_))));
        assert!(parse_config("scenario = vanilla1\nmode = reflexive_push").is_err());
        assert!(parse_config("scenario = vanilla1\nseed = 1\nseed = 2").is_err());
        assert!(parse_config("scenario = vanilla1\nconsumer_timers = 4").is_err());
        assert!(parse_config("scenario = vanilla1\nphone_home_target = nope").is_err());
    }
}
