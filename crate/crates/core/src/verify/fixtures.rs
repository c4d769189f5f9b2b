//! Threshold files: `harness.model.seed = value` lines with `#` comments.
//! Lookups fall back to less specific keys (`harness.model`, `harness`).

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Fixtures {
    values: BTreeMap<String, f64>,
}

impl Fixtures {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
            let key = k.trim();
            if key.is_empty() {
                return Err(Error::Parse(format!("line {}: empty key", i + 1)));
            }
            let value = v
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            if values.insert(key.to_string(), value).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(Fixtures { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Most specific threshold for a harness run.
    pub fn threshold(&self, harness: &str, model: Option<&str>, seed: Option<u64>) -> Option<f64> {
        let mut keys = Vec::new();
        if let (Some(m), Some(s)) = (model, seed) {
            keys.push(format!("{harness}.{m}.{s}"));
        }
        if let Some(m) = model {
            keys.push(format!("{harness}.{m}"));
        }
        keys.push(harness.to_string());
        keys.iter().find_map(|k| self.get(k))
    }
}
