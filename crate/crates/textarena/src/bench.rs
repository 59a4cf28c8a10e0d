//! Statistically stabilizing micro-benchmark harness.
//!
//! Each repetition doubles the iteration count from 1 until the measured
//! block has run for at least the configured minimum time, so short
//! workloads are amortized over enough iterations to be observable on the
//! monotonic clock. The reported per-iteration mean is the median across
//! repetitions, which resists scheduler outliers; the standard deviation
//! across repetitions is reported alongside.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::containers::{build_boxed_per_element, build_uniform_broadcast, BoxedTextArray};
use crate::format::{sprintf, FormatArg};
use crate::memory::{allocation_stats_of, AllocationStats, MemoryError};
use crate::ops::{concat_brackets, plus_chain, Operand};
use crate::text::{num_to_text, TextScalar};

/// An optimizer barrier: returns its argument while forcing the compiler to
/// treat the value as observed, so benchmarked work cannot be eliminated as
/// dead code.
#[inline]
pub fn black_box<T>(value: T) -> T {
    std::hint::black_box(value)
}

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("invalid benchmark config: {0}")]
    InvalidConfig(&'static str),
    #[error("workload '{name}' panicked: {message}")]
    WorkloadPanicked { name: String, message: String },
    #[error("duplicate workload name '{0}'")]
    DuplicateWorkload(String),
    #[error("unknown baseline '{0}'")]
    UnknownBaseline(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkConfig {
    /// Minimum measured time per repetition; iteration doubling stops once a
    /// repetition has run at least this long.
    pub min_time_per_rep: Duration,
    pub repetitions: usize,
    pub warmup_iterations: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            min_time_per_rep: Duration::from_millis(500),
            repetitions: 5,
            warmup_iterations: 100,
        }
    }
}

impl BenchmarkConfig {
    fn validate(&self) -> Result<(), BenchError> {
        if self.min_time_per_rep.is_zero() {
            return Err(BenchError::InvalidConfig(
                "min_time_per_rep must be positive",
            ));
        }
        if self.repetitions == 0 {
            return Err(BenchError::InvalidConfig("repetitions must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub name: String,
    /// Final per-repetition iteration count; always a power of two.
    pub iterations: u64,
    /// Median across repetitions of elapsed/iterations, in nanoseconds.
    #[serde(rename = "mean_ns")]
    pub mean_ns_per_iter: f64,
    /// Standard deviation of the per-repetition means, in nanoseconds.
    #[serde(rename = "stddev_ns")]
    pub stddev_ns_per_iter: f64,
    #[serde(rename = "allocs")]
    pub alloc_stats: Option<AllocationStats>,
    pub warnings: Vec<String>,
}

/// Speedup of a candidate relative to a baseline: baseline mean divided by
/// candidate mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonRow {
    pub baseline_name: String,
    pub candidate_name: String,
    pub speedup_ratio: f64,
}

impl ComparisonRow {
    /// Ratio rendered to two decimals.
    pub fn speedup_2dp(&self) -> String {
        format!("{:.2}", self.speedup_ratio)
    }
}

fn timed_batch(
    name: &str,
    workload: &mut dyn FnMut(),
    iterations: u64,
) -> Result<Duration, BenchError> {
    catch_unwind(AssertUnwindSafe(|| {
        let start = Instant::now();
        for _ in 0..iterations {
            workload();
        }
        start.elapsed()
    }))
    .map_err(|payload| BenchError::WorkloadPanicked {
        name: name.to_string(),
        message: panic_message(&*payload),
    })
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

/// Smallest observable step of the monotonic clock.
fn clock_resolution() -> Duration {
    let mut best = Duration::from_secs(1);
    for _ in 0..8 {
        let start = Instant::now();
        let mut tick = start.elapsed();
        while tick.is_zero() {
            tick = start.elapsed();
        }
        best = best.min(tick);
    }
    best
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Runs `workload` under the doubling schedule and reports per-iteration
/// statistics. The workload must be side-effect-free apart from
/// [`black_box`] sinks; a panicking workload aborts the benchmark with the
/// panic attached.
pub fn run_benchmark(
    name: &str,
    mut workload: impl FnMut(),
    config: &BenchmarkConfig,
) -> Result<BenchmarkResult, BenchError> {
    config.validate()?;
    let mut warnings = Vec::new();

    let resolution = clock_resolution();
    if resolution > Duration::from_micros(1) {
        warnings.push(format!(
            "clock resolution {}ns is coarser than 1us; short timings are quantized",
            resolution.as_nanos()
        ));
    }

    timed_batch(name, &mut workload, config.warmup_iterations)?;

    // First repetition searches for the iteration count.
    let mut iterations = 1u64;
    let mut elapsed = timed_batch(name, &mut workload, iterations)?;
    while elapsed < config.min_time_per_rep {
        iterations = iterations
            .checked_mul(2)
            .ok_or(BenchError::InvalidConfig("iteration count overflow"))?;
        elapsed = timed_batch(name, &mut workload, iterations)?;
    }

    let mut per_iter_ns = Vec::with_capacity(config.repetitions);
    per_iter_ns.push(elapsed.as_nanos() as f64 / iterations as f64);
    for _ in 1..config.repetitions {
        let elapsed = timed_batch(name, &mut workload, iterations)?;
        per_iter_ns.push(elapsed.as_nanos() as f64 / iterations as f64);
    }

    let mut sorted = per_iter_ns.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    let mean = median(&sorted);
    let count = per_iter_ns.len() as f64;
    let average = per_iter_ns.iter().sum::<f64>() / count;
    let variance = per_iter_ns
        .iter()
        .map(|v| (v - average) * (v - average))
        .sum::<f64>()
        / count;

    Ok(BenchmarkResult {
        name: name.to_string(),
        iterations,
        mean_ns_per_iter: mean,
        stddev_ns_per_iter: variance.sqrt(),
        alloc_stats: None,
        warnings,
    })
}

/// Speedup rows of every non-baseline result against `baseline`.
pub fn compare(
    results: &[BenchmarkResult],
    baseline: &str,
) -> Result<Vec<ComparisonRow>, BenchError> {
    let base = results
        .iter()
        .find(|r| r.name == baseline)
        .ok_or_else(|| BenchError::UnknownBaseline(baseline.to_string()))?;
    Ok(results
        .iter()
        .filter(|r| r.name != baseline)
        .map(|candidate| ComparisonRow {
            baseline_name: base.name.clone(),
            candidate_name: candidate.name.clone(),
            speedup_ratio: base.mean_ns_per_iter / candidate.mean_ns_per_iter,
        })
        .collect())
}

/// Single-pass strategy: preallocate `count` copies of the prefix, then
/// append each element's decimal index in place.
pub fn loop_builder(prefix: &TextScalar, count: usize) -> BoxedTextArray {
    let mut texts = vec![prefix.clone(); count];
    for (i, text) in texts.iter_mut().enumerate() {
        text.append(&num_to_text((i + 1) as f64));
    }
    BoxedTextArray::from_texts(texts)
}

/// Two-pass strategy: materialize the index sequence first, then map it over
/// the preallocated prefixes. Visits each element once per pass, so it does
/// strictly more traversal work than [`loop_builder`].
pub fn algorithmic_builder(prefix: &TextScalar, count: usize) -> BoxedTextArray {
    let mut texts = vec![prefix.clone(); count];
    let indices: Vec<f64> = (1..=count).map(|i| i as f64).collect();
    for (text, index) in texts.iter_mut().zip(&indices) {
        text.append(&num_to_text(*index));
    }
    BoxedTextArray::from_texts(texts)
}

type AllocProbe = Box<dyn Fn() -> Result<AllocationStats, MemoryError>>;

/// A named, ready-to-run benchmark body. Every body ends by passing its
/// product through [`black_box`].
pub struct Workload {
    name: String,
    body: Box<dyn FnMut()>,
    alloc_probe: Option<AllocProbe>,
}

impl Workload {
    pub fn new(name: &str, body: impl FnMut() + 'static) -> Self {
        Workload {
            name: name.to_string(),
            body: Box::new(body),
            alloc_probe: None,
        }
    }

    fn with_alloc_probe(
        mut self,
        probe: impl Fn() -> Result<AllocationStats, MemoryError> + 'static,
    ) -> Self {
        self.alloc_probe = Some(Box::new(probe));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Measures the workload, attaching allocation statistics from one
    /// untimed instrumented run when the workload supports it.
    pub fn measure(&mut self, config: &BenchmarkConfig) -> Result<BenchmarkResult, BenchError> {
        let body = &mut self.body;
        let mut result = run_benchmark(&self.name, body, config)?;
        if let Some(probe) = &self.alloc_probe {
            match probe() {
                Ok(stats) => result.alloc_stats = Some(stats),
                Err(e) => result
                    .warnings
                    .push(format!("allocation stats unavailable: {e}")),
            }
        }
        Ok(result)
    }
}

impl std::fmt::Debug for Workload {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Workload")
            .field("name", &self.name)
            .finish()
    }
}

/// An ordered set of uniquely named workloads.
#[derive(Debug, Default)]
pub struct WorkloadSuite {
    workloads: Vec<Workload>,
}

impl WorkloadSuite {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, workload: Workload) -> Result<(), BenchError> {
        if self.workloads.iter().any(|w| w.name == workload.name) {
            return Err(BenchError::DuplicateWorkload(workload.name));
        }
        self.workloads.push(workload);
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.workloads.iter().map(Workload::name).collect()
    }

    pub fn len(&self) -> usize {
        self.workloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.workloads.is_empty()
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Workload> {
        self.workloads.iter_mut().find(|w| w.name == name)
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Workload> {
        self.workloads.iter_mut()
    }
}

/// Number of elements the build-style workloads produce.
pub const BUILD_WORKLOAD_ELEMENTS: usize = 1000;

/// The named workload set: the two container builders, the single-pass and
/// two-pass element builders, and the three short-concatenation routes.
pub fn register_workloads() -> WorkloadSuite {
    let mut suite = WorkloadSuite::new();
    let n = BUILD_WORKLOAD_ELEMENTS;
    let prefix = TextScalar::from("TestResult");

    let p = prefix.clone();
    suite
        .register(
            Workload::new("boxedBuild", move || {
                black_box(build_boxed_per_element(&p, n));
            })
            .with_alloc_probe({
                let p = prefix.clone();
                move || allocation_stats_of(|| build_boxed_per_element(&p, n)).map(|(_, s)| s)
            }),
        )
        .expect("fresh suite");

    let p = prefix.clone();
    suite
        .register(
            Workload::new("uniformBuild", move || {
                black_box(build_uniform_broadcast(&p, 1..=n as u64));
            })
            .with_alloc_probe({
                let p = prefix.clone();
                move || {
                    allocation_stats_of(|| build_uniform_broadcast(&p, 1..=n as u64))
                        .map(|(_, s)| s)
                }
            }),
        )
        .expect("fresh suite");

    let p = prefix.clone();
    suite
        .register(
            Workload::new("loopBuilder", move || {
                black_box(loop_builder(&p, n));
            })
            .with_alloc_probe({
                let p = prefix.clone();
                move || allocation_stats_of(|| loop_builder(&p, n)).map(|(_, s)| s)
            }),
        )
        .expect("fresh suite");

    let p = prefix.clone();
    suite
        .register(
            Workload::new("algorithmicBuilder", move || {
                black_box(algorithmic_builder(&p, n));
            })
            .with_alloc_probe({
                let p = prefix;
                move || allocation_stats_of(|| algorithmic_builder(&p, n)).map(|(_, s)| s)
            }),
        )
        .expect("fresh suite");

    let format = TextScalar::from("%d %s");
    suite
        .register(Workload::new("formatterConcat", move || {
            let args = [FormatArg::Int(1), FormatArg::from("a")];
            black_box(sprintf(&format, &args).expect("workload format is valid"));
        }))
        .expect("fresh suite");

    let space = TextScalar::from(" ");
    let a = TextScalar::from("a");
    suite
        .register(Workload::new("bracketConcat", move || {
            let parts = [
                Operand::CharText(num_to_text(1.0)),
                Operand::CharText(space.clone()),
                Operand::CharText(a.clone()),
            ];
            black_box(concat_brackets(&parts).expect("textual parts"));
        }))
        .expect("fresh suite");

    let space = TextScalar::from(" ");
    let a = TextScalar::from("a");
    suite
        .register(Workload::new("plusConcat", move || {
            let chain = [
                Operand::Number(1.0),
                Operand::Text(space.clone()),
                Operand::CharText(a.clone()),
            ];
            black_box(plus_chain(&chain).expect("compatible shapes"));
        }))
        .expect("fresh suite");

    suite
}
