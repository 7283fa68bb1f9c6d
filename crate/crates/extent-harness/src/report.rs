//! The suite report: structured, with a stable key order, so that reruns
//! with the same seed and configuration are byte-identical. Timings are
//! reported on the side, never in the file.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::checks::InstanceReport;
use crate::config::SuiteConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub violations: usize,
    pub size_skips: usize,
    /// per check: how many instances ran it
    pub checked: BTreeMap<String, usize>,
    /// per check: how many instances skipped it (data not applicable)
    pub skipped: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub summary: Summary,
    pub instances: Vec<InstanceReport>,
}

impl SuiteReport {
    pub fn passed(&self, max_size_skips: usize) -> bool {
        self.summary.violations == 0 && self.summary.size_skips <= max_size_skips
    }

    /// Deterministic serialization of the report body.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
