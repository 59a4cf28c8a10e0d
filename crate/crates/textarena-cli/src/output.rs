//! Rendering of CLI documents as markdown, CSV, or JSON.
//!
//! CSV keeps a stable schema: manifest lines are `#` comments, the header
//! row is always present, and numeric fields use dot decimals. JSON output
//! is pretty-printed `serde_json`; parsing it back and re-serializing
//! reproduces the bytes exactly.

use serde::Serialize;
use textarena::report::{
    bench_csv_row, comparison_csv_row, memory_csv_row, BENCH_CSV_HEADER, COMPARISON_CSV_HEADER,
    MEMORY_CSV_HEADER,
};

use crate::docs::{BenchDocument, DemoDocument, MemDocument, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Md,
    Csv,
    Json,
}

pub fn render_json<T: Serialize>(document: &T) -> String {
    let mut out = serde_json::to_string_pretty(document).expect("documents serialize");
    out.push('\n');
    out
}

fn manifest_comment_lines(manifest: &RunManifest) -> String {
    format!(
        "# textarena {} {}\n# timestamp={} host={}\n",
        manifest.command,
        manifest.flags_line(),
        manifest.timestamp,
        manifest.host
    )
}

fn manifest_md_lines(manifest: &RunManifest) -> String {
    format!(
        "Run: `textarena {} {}`\nHost: {} at {}\n",
        manifest.command,
        manifest.flags_line(),
        manifest.host,
        manifest.timestamp
    )
}

pub fn render_bench(document: &BenchDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(document),
        OutputFormat::Csv => {
            let mut out = manifest_comment_lines(&document.manifest);
            out.push_str(BENCH_CSV_HEADER);
            out.push('\n');
            for result in &document.results {
                out.push_str(&bench_csv_row(result));
                out.push('\n');
            }
            if !document.comparisons.is_empty() {
                out.push_str(COMPARISON_CSV_HEADER);
                out.push('\n');
                for row in &document.comparisons {
                    out.push_str(&comparison_csv_row(row));
                    out.push('\n');
                }
            }
            out
        }
        OutputFormat::Md => {
            let mut out = manifest_md_lines(&document.manifest);
            out.push_str("\n| Workload | Iterations | Mean (ns/iter) | Std dev (ns) | Allocs |\n");
            out.push_str("|---|---|---|---|---|\n");
            for r in &document.results {
                let allocs = r
                    .alloc_stats
                    .map(|s| s.container_events().to_string())
                    .unwrap_or_else(|| "-".to_string());
                out.push_str(&format!(
                    "| {} | {} | {:.1} | {:.1} | {} |\n",
                    r.name, r.iterations, r.mean_ns_per_iter, r.stddev_ns_per_iter, allocs
                ));
            }
            if !document.comparisons.is_empty() {
                out.push_str("\n| Baseline | Candidate | Speedup |\n|---|---|---|\n");
                for c in &document.comparisons {
                    out.push_str(&format!(
                        "| {} | {} | {}x |\n",
                        c.baseline_name,
                        c.candidate_name,
                        c.speedup_2dp()
                    ));
                }
            }
            out
        }
    }
}

pub fn render_mem(document: &MemDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(document),
        OutputFormat::Csv => {
            let mut out = manifest_comment_lines(&document.manifest);
            out.push_str(MEMORY_CSV_HEADER);
            out.push('\n');
            for report in &document.reports {
                out.push_str(&memory_csv_row(report));
                out.push('\n');
            }
            let r = &document.metadata_ratio;
            out.push_str(&format!(
                "# metadataRatio {}/{} = {}\n",
                r.numerator, r.denominator, r.rendered
            ));
            out
        }
        OutputFormat::Md => {
            let mut out = manifest_md_lines(&document.manifest);
            out.push_str(
                "\n| Container | Total bytes | Raw data bytes | Metadata (total - raw) |\n",
            );
            out.push_str("|---|---|---|---|\n");
            for r in &document.reports {
                out.push_str(&format!(
                    "| {} ({}) | {} | {} | {} |\n",
                    r.kind.as_str(),
                    r.mode.as_str(),
                    r.total_bytes,
                    r.raw_bytes,
                    r.metadata_bytes
                ));
            }
            let r = &document.metadata_ratio;
            out.push_str(&format!(
                "\nMetadata ratio (boxed/uniform): {}/{} = {}\n",
                r.numerator, r.denominator, r.rendered
            ));
            out
        }
    }
}

pub fn render_demo(document: &DemoDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(document),
        OutputFormat::Csv => {
            let mut out = manifest_comment_lines(&document.manifest);
            out.push_str("index,value\n");
            for (i, value) in document.values.iter().enumerate() {
                out.push_str(&format!("{i},{value}\n"));
            }
            out
        }
        OutputFormat::Md => {
            let mut out = manifest_md_lines(&document.manifest);
            out.push('\n');
            for value in &document.values {
                out.push_str(&format!("\"{value}\"\n"));
            }
            out
        }
    }
}
