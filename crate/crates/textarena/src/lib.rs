//! Side-by-side text containers and the machinery to compare them.
//!
//! The crate implements a boxed per-element text container and a contiguous
//! uniform string array, vectorized string operations over them, a
//! printf-style formatter, an exact byte-accounting model for both layouts,
//! and a statistically stabilizing micro-benchmark harness with named
//! workloads.

pub mod bench;
pub mod containers;
pub mod format;
pub mod instrument;
pub mod memory;
pub mod ops;
#[cfg(feature = "printf-oracle")]
pub mod oracle;
pub mod report;
pub mod text;

pub use bench::{
    black_box, compare, register_workloads, run_benchmark, BenchError, BenchmarkConfig,
    BenchmarkResult, ComparisonRow, Workload, WorkloadSuite,
};
pub use containers::{
    boxed_to_uniform, build_boxed_per_element, build_uniform_broadcast, content_equals, join_all,
    uniform_to_boxed, BoxedTextArray, ContainerError, ElementHeader, Orientation, TextCollection,
    UniformStringArray,
};
pub use format::{
    parse_format, render, sprintf, Conversion, ConversionSpec, FormatArg, FormatError,
    FormatString, FormatToken, ParseError, RenderError,
};
pub use memory::{
    allocation_stats_of, measure, metadata_ratio, raw_bytes_of, suffix_digit_buckets,
    AccountingMode, AllocationProfile, AllocationStats, ContainerKind, ContainerMemory,
    MemoryError, MemoryReport, MetadataRatio, SuffixBucket,
};
pub use ops::{
    concat_brackets, extract_after, extract_before, plus_broadcast, plus_chain, Operand, OpsError,
};
pub use text::{
    column_major_readout, is_uniform, num_to_text, pad_to_char_matrix, CharMatrix, CodeUnit,
    DataType, TextError, TextScalar, TypedValue,
};
