//! Configuration files: a single JSON document with the simulation
//! parameters, optional defaults, and an optional suite selection.
//!
//! Parsing is strict: unknown keys are rejected, duplicate keys are a
//! parse error (plain JSON parsers silently keep the last occurrence,
//! which would make typos unreproducible), and out-of-range values get
//! field-level messages.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::de::{DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};

use dyson_edge_core::verify::TestSelection;
use dyson_edge_core::SimConfig;

use crate::CliError;

/// One entry of the suite selection: a bare name or a name with
/// overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Name(String),
    Full(TestSelection),
}

impl SuiteEntry {
    pub fn into_selection(self) -> TestSelection {
        match self {
            SuiteEntry::Name(name) => TestSelection { name, n_samples: None, threshold: None },
            SuiteEntry::Full(sel) => sel,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    beta: f64,
    t0: f64,
    n: usize,
    k: usize,
    seed: u64,
    dt: Option<f64>,
    horizon: Option<f64>,
    n_samples: Option<usize>,
    /// Observation times for trajectory commands, relative to the warm
    /// start; defaults to `[0, horizon]`.
    obs_times: Option<Vec<f64>>,
    /// Suite selection for the verify command; omitted = full suite.
    suite: Option<Vec<SuiteEntry>>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub sim: SimConfig,
    pub obs_times: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Vec<TestSelection>>,
}

/// Parse and validate a configuration file, applying the documented
/// defaults (`dt = 1e-4`, `horizon = 1`, `n_samples = 1000`).
pub fn parse_config(path: &Path) -> Result<ResolvedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ResolvedConfig, CliError> {
    reject_duplicate_keys(text)?;
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("schema violation: {e}")))?;
    let sim = SimConfig {
        beta: raw.beta,
        t0: raw.t0,
        n: raw.n,
        k: raw.k,
        dt: raw.dt.unwrap_or(1e-4),
        horizon: raw.horizon.unwrap_or(1.0),
        n_samples: raw.n_samples.unwrap_or(1000),
        seed: raw.seed,
    };
    sim.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let obs_times = match raw.obs_times {
        Some(ts) => {
            if ts.windows(2).any(|w| w[0] > w[1]) || ts.first().is_some_and(|t| *t < 0.0) {
                return Err(CliError::Config(
                    "obs_times must be nondecreasing and start at >= 0".into(),
                ));
            }
            ts
        }
        None => vec![0.0, sim.horizon],
    };
    Ok(ResolvedConfig {
        sim,
        obs_times,
        suite: raw.suite.map(|v| v.into_iter().map(SuiteEntry::into_selection).collect()),
    })
}

/// Walk the raw JSON token stream and fail on the first duplicate key
/// inside any object.
fn reject_duplicate_keys(text: &str) -> Result<(), CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    DupCheck
        .deserialize(&mut de)
        .map_err(|e| CliError::Config(format!("parse error: {e}")))?;
    Ok(())
}

struct DupCheck;

impl<'de> DeserializeSeed<'de> for DupCheck {
    type Value = ();

    fn deserialize<D>(self, deserializer: D) -> Result<(), D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        deserializer.deserialize_any(DupVisitor)
    }
}

struct DupVisitor;

impl<'de> Visitor<'de> for DupVisitor {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("any JSON value")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<(), A::Error> {
        let mut seen = HashSet::new();
        while let Some(key) = map.next_key::<String>()? {
            if !seen.insert(key.clone()) {
                return Err(serde::de::Error::custom(format!("duplicate key '{key}'")));
            }
            map.next_value_seed(DupCheck)?;
        }
        Ok(())
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        while seq.next_element_seed(DupCheck)?.is_some() {}
        Ok(())
    }

    fn visit_bool<E>(self, _: bool) -> Result<(), E> {
        Ok(())
    }
    fn visit_i64<E>(self, _: i64) -> Result<(), E> {
        Ok(())
    }
    fn visit_u64<E>(self, _: u64) -> Result<(), E> {
        Ok(())
    }
    fn visit_f64<E>(self, _: f64) -> Result<(), E> {
        Ok(())
    }
    fn visit_str<E>(self, _: &str) -> Result<(), E> {
        Ok(())
    }
    fn visit_none<E>(self) -> Result<(), E> {
        Ok(())
    }
    fn visit_unit<E>(self) -> Result<(), E> {
        Ok(())
    }
}
