//! Golden-value regression store.
//!
//! A single versioned JSON file maps a job key to the oracle-computed
//! `{lhs, rhs, tolerance}` for that evaluation. Oracle numbers are computed
//! once (by brute-force or dense-grid code independent of the evaluators),
//! frozen here, and asserted thereafter; the schema is stable across
//! releases.
//!
//! ```json
//! {
//!   "version": 1,
//!   "entries": { "<job key>": { "lhs": 0.0, "rhs": 0.0, "tolerance": 1e-6 } }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub lhs: f64,
    pub rhs: f64,
    /// Relative tolerance the implementation must meet against these values.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenStore {
    pub version: u32,
    pub entries: BTreeMap<String, GoldenEntry>,
}

impl Default for GoldenStore {
    fn default() -> Self {
        GoldenStore {
            version: 1,
            entries: BTreeMap::new(),
        }
    }
}

impl GoldenStore {
    /// The store shipped with the crate.
    pub fn bundled() -> Result<Self> {
        serde_json::from_str(include_str!("../data/golden.json"))
            .map_err(|e| Error::computation(format!("bundled golden store: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::domain(format!("golden store {:?}: {e}", path.as_ref())))?;
        serde_json::from_str(&text).map_err(|e| Error::domain(format!("golden store: {e}")))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::computation(format!("golden store: {e}")))?;
        std::fs::write(path.as_ref(), text + "\n")
            .map_err(|e| Error::domain(format!("golden store {:?}: {e}", path.as_ref())))
    }

    pub fn entry(&self, key: &str) -> Option<&GoldenEntry> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, key: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) {
        self.entries.insert(key.into(), GoldenEntry { lhs, rhs, tolerance });
    }

    /// Assert a computed (lhs, rhs) against a stored entry.
    pub fn matches(&self, key: &str, lhs: f64, rhs: f64) -> Result<()> {
        let entry = self
            .entry(key)
            .ok_or_else(|| Error::domain(format!("no golden entry for '{key}'")))?;
        let ok = |got: f64, want: f64| {
            (got - want).abs() <= entry.tolerance * want.abs().max(1e-300)
        };
        if !ok(lhs, entry.lhs) || !ok(rhs, entry.rhs) {
            return Err(Error::computation(format!(
                "golden mismatch for '{key}': got ({lhs}, {rhs}), stored ({}, {}) at tolerance {}",
                entry.lhs, entry.rhs, entry.tolerance
            )));
        }
        Ok(())
    }
}
