//! CSV and JSON rendering of memory reports and benchmark results.
//!
//! CSV layouts are fixed: column order never changes, the header row is
//! always present, and numeric fields use a dot decimal separator regardless
//! of locale.

use crate::bench::{BenchmarkResult, ComparisonRow};
use crate::memory::MemoryReport;

pub const MEMORY_CSV_HEADER: &str = "kind,mode,n,totalBytes,rawBytes,metadataBytes";
pub const BENCH_CSV_HEADER: &str = "name,iterations,mean_ns,stddev_ns,allocs";
pub const COMPARISON_CSV_HEADER: &str = "baseline,candidate,speedup";

pub fn memory_csv_row(report: &MemoryReport) -> String {
    format!(
        "{},{},{},{},{},{}",
        report.kind.as_str(),
        report.mode.as_str(),
        report.element_count,
        report.total_bytes,
        report.raw_bytes,
        report.metadata_bytes
    )
}

/// The `allocs` column totals the container-attributed allocation events of
/// the instrumented run; workloads without allocation data leave it empty.
pub fn bench_csv_row(result: &BenchmarkResult) -> String {
    let allocs = result
        .alloc_stats
        .map(|s| s.container_events().to_string())
        .unwrap_or_default();
    format!(
        "{},{},{:.3},{:.3},{}",
        result.name, result.iterations, result.mean_ns_per_iter, result.stddev_ns_per_iter, allocs
    )
}

pub fn comparison_csv_row(row: &ComparisonRow) -> String {
    format!(
        "{},{},{}",
        row.baseline_name,
        row.candidate_name,
        row.speedup_2dp()
    )
}

pub fn memory_report_json(report: &MemoryReport) -> String {
    serde_json::to_string(report).expect("report serializes")
}

pub fn bench_result_json(result: &BenchmarkResult) -> String {
    serde_json::to_string(result).expect("result serializes")
}
