//! Report documents emitted by the CLI.
//!
//! Every document embeds a [`RunManifest`] carrying the resolved flag set,
//! so a report can be reproduced without the shell history that created it.

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use textarena::bench::{BenchmarkResult, ComparisonRow};
use textarena::memory::{MemoryReport, MetadataRatio};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Resolved `key=value` flags, including defaults and environment
    /// overrides, in a fixed order.
    pub flags: Vec<String>,
    pub timestamp: String,
    pub host: String,
}

impl RunManifest {
    pub fn new(command: &str, flags: Vec<String>) -> Self {
        let cpus = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        RunManifest {
            command: command.to_string(),
            flags,
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            host: format!(
                "{} {} ({cpus} cpus)",
                std::env::consts::OS,
                std::env::consts::ARCH
            ),
        }
    }

    /// One-line `key=value` rendering of the flag set.
    pub fn flags_line(&self) -> String {
        self.flags.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchDocument {
    pub manifest: RunManifest,
    pub results: Vec<BenchmarkResult>,
    pub comparisons: Vec<ComparisonRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub numerator: u64,
    pub denominator: u64,
    pub rendered: String,
}

impl From<MetadataRatio> for RatioReport {
    fn from(ratio: MetadataRatio) -> Self {
        RatioReport {
            numerator: ratio.numerator,
            denominator: ratio.denominator,
            rendered: ratio.render_2dp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemDocument {
    pub manifest: RunManifest,
    pub reports: Vec<MemoryReport>,
    /// Boxed metadata over uniform metadata.
    pub metadata_ratio: RatioReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoDocument {
    pub manifest: RunManifest,
    pub operation: String,
    pub values: Vec<String>,
}
