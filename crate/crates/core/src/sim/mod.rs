//! Discrete-event simulation of the four-node line topology, the scenario presets,
//! metrics, reports and the energy model.

mod config;
mod emit;
mod energy;
mod engine;
mod link;
mod metrics;
mod scenario;
mod sweep;
mod trace;

pub use config::{from_kv, parse_config, parse_kv};
pub use emit::{emit, Format, Summary};
pub use energy::{EnergyError, EnergyModel};
pub use engine::{run, SimNode, Simulation, CONSUMER, FORWARDER, GATEWAY, NODE};
pub use link::{DirectionLedger, InternetLink, LinkModel, LinkReport, LoraLink, SlotClass};
pub use metrics::{CdfPoint, MetricsReport, NodeCounters, NodeRole, Quantiles, TxPerContent};
pub use scenario::{parse_retx, retx_str, ConfigError, LossScope, Radio, RoleTimers, Scenario, ScenarioConfig};
pub use sweep::{mean_ci, parse_seeds, sweep, MeanCi, SweepResult};
pub use trace::{check_properties, PropertyReport, TraceEvent, TraceRecord};
