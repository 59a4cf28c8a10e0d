//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (visible with `--nocapture`).
//!
//! Run with: cargo test -p textarena-cli --test acceptance -- --nocapture

use std::process::{Command, Output};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use textarena::bench::{
    algorithmic_builder, black_box, loop_builder, run_benchmark, BenchmarkConfig,
};
use textarena::containers::{
    boxed_to_uniform, build_boxed_per_element, build_uniform_broadcast, content_equals, join_all,
    uniform_to_boxed, BoxedTextArray, TextCollection, UniformStringArray,
};
use textarena::format::{sprintf, FormatArg};
use textarena::memory::{
    allocation_stats_of, measure, metadata_ratio, suffix_digit_buckets, AccountingMode,
};
use textarena::ops::{concat_brackets, extract_before, plus_chain, Operand};
use textarena::oracle;
use textarena::text::{num_to_text, TextScalar};

/// Criteria run one at a time: the wall-clock-sensitive ones must not read
/// the CPU-heavy ones' scheduler noise, so every test takes this lock.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial_lock() -> std::sync::MutexGuard<'static, ()> {
    SERIAL
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn textarena(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textarena"))
        .args(args)
        .env_remove("TEXTARENA_MIN_TIME_MS")
        .output()
        .expect("binary runs")
}

fn stdout_lines(output: &Output) -> Vec<String> {
    String::from_utf8(output.stdout.clone())
        .expect("stdout is UTF-8")
        .lines()
        .map(str::to_string)
        .collect()
}

fn text(s: &str) -> TextScalar {
    TextScalar::from(s)
}

#[test]
fn acceptance_01_memory_table_exact_reproduction() {
    let _guard = serial_lock();
    let started = Instant::now();
    let output = textarena(&[
        "mem",
        "--n",
        "1000",
        "--prefix",
        "TestResult",
        "--mode",
        "paper",
        "--format",
        "csv",
    ]);
    let elapsed = started.elapsed();
    assert_eq!(output.status.code(), Some(0));
    let lines = stdout_lines(&output);
    let data: Vec<&String> = lines.iter().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[1], "boxed,paper,1000,129786,25786,104000");
    assert_eq!(data[2], "uniform,paper,1000,70096,25786,44310");
    assert!(
        elapsed < Duration::from_secs(1),
        "mem command took {elapsed:?}, expected under 1s"
    );
    println!(
        "criterion 01 PASS: boxed 129786 B / uniform 70096 B / raw 25786 B / metadata 104000 vs 44310 B in {elapsed:?}"
    );
}

#[test]
fn acceptance_02_raw_data_ledger() {
    let _guard = serial_lock();
    let uniform = build_uniform_broadcast(&text("TestResult"), 1..=1000);
    let joined = join_all(&uniform, &TextScalar::new());
    assert_eq!(joined.len(), 12_893);
    assert_eq!(joined.raw_bytes(), 25_786);

    let buckets = suffix_digit_buckets(1000);
    let ledger: Vec<(u32, u64, u64)> = buckets
        .iter()
        .map(|b| (b.digits, b.count, b.bytes))
        .collect();
    assert_eq!(
        ledger,
        [(1, 9, 18), (2, 90, 360), (3, 900, 5400), (4, 1, 8)]
    );
    let suffix_bytes: u64 = buckets.iter().map(|b| b.bytes).sum();
    let prefix_bytes = 10 * 2 * 1000;
    assert_eq!(prefix_bytes + suffix_bytes as usize, 25_786);
    println!(
        "criterion 02 PASS: join is 1x12893 (25786 B); suffix ledger 18 + 360 + 5400 + 8 B reproduced"
    );
}

#[test]
fn acceptance_03_single_element_husk() {
    let _guard = serial_lock();
    let mut boxed = BoxedTextArray::new();
    boxed.push(TextScalar::new());
    let report = measure(&boxed, AccountingMode::PaperModel);
    assert_eq!(report.total_bytes, 104);
    assert_eq!(report.raw_bytes, 0);
    println!("criterion 03 PASS: 1-element boxed husk reports exactly 104 B, raw 0 B");
}

#[test]
fn acceptance_04_metadata_ratio_exact_rational() {
    let _guard = serial_lock();
    let boxed = build_boxed_per_element(&text("TestResult"), 1000);
    let uniform = build_uniform_broadcast(&text("TestResult"), 1..=1000);
    let ratio = metadata_ratio(
        &measure(&boxed, AccountingMode::PaperModel),
        &measure(&uniform, AccountingMode::PaperModel),
    )
    .unwrap();
    assert_eq!((ratio.numerator, ratio.denominator), (104_000, 44_310));
    assert_eq!(ratio.render_2dp(), "2.35");
    // The commonly printed 2.34 comes from truncating the same rational.
    assert_eq!(ratio.truncate_2dp(), "2.34");
    println!(
        "criterion 04 PASS: exact rational 104000/44310 exposed; rounds to 2.35, truncation gives the often-printed 2.34"
    );
}

#[test]
fn acceptance_05_extract_before() {
    let _guard = serial_lock();
    let array = UniformStringArray::from_texts(&[text("10_img.jpg"), text("11_img.jpg")]);
    let extracted = extract_before(&array, &text("_")).unwrap();
    let values: Vec<String> = extracted.to_texts().iter().map(|t| t.to_string()).collect();
    assert_eq!(values, ["10", "11"]);

    let output = textarena(&[
        "demo",
        "extract",
        "--delim",
        "_",
        "10_img.jpg",
        "11_img.jpg",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let body = String::from_utf8(output.stdout).unwrap();
    assert!(body.contains("\"10\"\n\"11\"\n"));
    println!("criterion 05 PASS: extractBefore yields [\"10\", \"11\"] in library and CLI");
}

#[test]
fn acceptance_06_concat_route_equivalence() {
    let _guard = serial_lock();
    let formatted = sprintf(&text("%d %s"), &[FormatArg::Int(1), FormatArg::from("a")]).unwrap();
    let bracketed = concat_brackets(&[
        Operand::CharText(num_to_text(1.0)),
        Operand::char_text(" "),
        Operand::char_text("a"),
    ])
    .unwrap();
    let plussed = match plus_chain(&[
        Operand::Number(1.0),
        Operand::text(" "),
        Operand::char_text("a"),
    ])
    .unwrap()
    {
        Operand::Text(t) => t,
        other => panic!("expected scalar text, got {other:?}"),
    };
    assert_eq!(
        formatted.units(),
        bracketed.units(),
        "formatter vs brackets"
    );
    assert_eq!(bracketed.units(), plussed.units(), "brackets vs plus");
    assert_eq!(formatted.to_string(), "1 a");
    println!(
        "criterion 06 PASS: formatter, bracket, and plus routes all produce byte-identical \"1 a\""
    );
}

#[test]
fn acceptance_07_allocation_counts() {
    let _guard = serial_lock();
    let (boxed, boxed_stats) =
        allocation_stats_of(|| build_boxed_per_element(&text("TestResult"), 1000)).unwrap();
    assert_eq!(boxed.len(), 1000);
    assert_eq!(boxed_stats.element_allocations, 1000);
    assert!(boxed_stats.element_allocations >= 1000);

    let (uniform, uniform_stats) =
        allocation_stats_of(|| build_uniform_broadcast(&text("TestResult"), 1..=1000)).unwrap();
    assert_eq!(uniform.len(), 1000);
    assert!(uniform_stats.buffer_reallocations > 0);
    assert!(
        uniform_stats.buffer_reallocations <= 16,
        "uniform build made {} buffer reallocations",
        uniform_stats.buffer_reallocations
    );
    println!(
        "criterion 07 PASS: boxed build = {} element allocations (>= 1000); uniform build = {} buffer reallocations (<= 16)",
        boxed_stats.element_allocations, uniform_stats.buffer_reallocations
    );
}

#[test]
fn acceptance_08_performance_ordering_under_assert() {
    let _guard = serial_lock();
    let started = Instant::now();
    // Default min time (0.5s per repetition); --assert compares the median
    // of 3 harness runs per container builder and exits 2 on violation.
    let output = textarena(&["bench", "--suite", "build", "--assert", "--format", "csv"]);
    let elapsed = started.elapsed();
    let stderr = String::from_utf8(output.stderr.clone()).unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "assert run failed; stderr:\n{stderr}"
    );
    assert!(
        elapsed < Duration::from_secs(30),
        "assert run took {elapsed:?}, expected under 30s"
    );
    assert!(stderr.contains("performance assertion passed"));
    println!(
        "criterion 08 PASS: uniformBuild <= 0.5 x boxedBuild held under --assert (median of 3 runs, default min-time) in {elapsed:?}"
    );
}

#[test]
fn acceptance_09_soft_ordering_is_warn_only() {
    let _guard = serial_lock();
    let config = BenchmarkConfig {
        min_time_per_rep: Duration::from_millis(100),
        repetitions: 3,
        warmup_iterations: 10,
    };
    let prefix = text("TestResult");
    let loop_result = {
        let p = prefix.clone();
        run_benchmark(
            "loopBuilder",
            move || {
                black_box(loop_builder(&p, 1000));
            },
            &config,
        )
        .unwrap()
    };
    let algo_result = {
        let p = prefix.clone();
        run_benchmark(
            "algorithmicBuilder",
            move || {
                black_box(algorithmic_builder(&p, 1000));
            },
            &config,
        )
        .unwrap()
    };
    let bound = 1.10 * algo_result.mean_ns_per_iter;
    let verdict = if loop_result.mean_ns_per_iter <= bound {
        "held"
    } else {
        "violated (warn only)"
    };
    // Reference figures for these two strategies are documented, never
    // asserted; hardware decides the actual numbers.
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md"))
        .expect("workspace README present");
    assert!(readme.contains("20,647") && readme.contains("31,495"));
    println!(
        "criterion 09 PASS: loopBuilder {:.0} ns vs algorithmicBuilder {:.0} ns, soft bound {verdict}; reference points documented",
        loop_result.mean_ns_per_iter, algo_result.mean_ns_per_iter
    );
}

mod differential {
    use super::*;

    pub struct Case {
        pub format: String,
        pub c_format: String,
        pub arg: Arg,
    }

    #[derive(Debug, Clone, Copy)]
    pub enum Arg {
        Signed(i64),
        Unsigned(u64),
        Double(f64),
    }

    fn literal(rng: &mut ChaCha8Rng) -> String {
        const POOL: &[u8] = b"ab XY.:=<>#0-";
        let len = rng.gen_range(0..6);
        let mut out: String = (0..len)
            .map(|_| POOL[rng.gen_range(0..POOL.len())] as char)
            .collect();
        if rng.gen_bool(0.15) {
            out.push_str("%%");
        }
        out
    }

    fn finite_double(rng: &mut ChaCha8Rng) -> f64 {
        match rng.gen_range(0..5) {
            0 => loop {
                let candidate = f64::from_bits(rng.gen::<u64>());
                if candidate.is_finite() {
                    break candidate;
                }
            },
            1 => rng.gen_range(-1.0e6..1.0e6),
            2 => (rng.gen_range(-20_000i64..20_000) as f64) / 4.0,
            3 => {
                let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                sign * 10f64.powi(rng.gen_range(-14..14))
            }
            _ => {
                if rng.gen_bool(0.1) {
                    -0.0
                } else {
                    rng.gen_range(-1000i64..1000) as f64
                }
            }
        }
    }

    pub fn generate(rng: &mut ChaCha8Rng, conversion: char) -> Case {
        let mut flags = String::new();
        for flag in ['-', '+', ' ', '0', '#'] {
            if rng.gen_bool(0.2) {
                flags.push(flag);
            }
        }
        let width = rng.gen_bool(0.5).then(|| rng.gen_range(0..30u32));
        let precision = rng.gen_bool(0.4).then(|| rng.gen_range(0..22u32));

        let mut spec = format!("%{flags}");
        if let Some(w) = width {
            spec.push_str(&w.to_string());
        }
        if let Some(p) = precision {
            spec.push('.');
            spec.push_str(&p.to_string());
        }
        let c_spec = match conversion {
            'd' | 'x' | 'o' => format!("{spec}ll{conversion}"),
            _ => format!("{spec}{conversion}"),
        };
        spec.push(conversion);

        let arg = match conversion {
            'd' => Arg::Signed(match rng.gen_range(0..3) {
                0 => rng.gen::<i64>(),
                1 => rng.gen_range(-1_000_000i64..=1_000_000),
                _ => [i64::MIN, i64::MAX, 0, -1][rng.gen_range(0..4)],
            }),
            'x' | 'o' => Arg::Unsigned(match rng.gen_range(0..3) {
                0 => rng.gen::<u64>() >> 1,
                1 => rng.gen_range(0..1_000_000),
                _ => [0, 1, i64::MAX as u64, 0xdead_beef][rng.gen_range(0..4)],
            }),
            _ => Arg::Double(finite_double(rng)),
        };

        let prefix = literal(rng);
        let suffix = literal(rng);
        Case {
            format: format!("{prefix}{spec}{suffix}"),
            c_format: format!("{prefix}{c_spec}{suffix}"),
            arg,
        }
    }

    pub fn check(case: &Case) -> Result<(), String> {
        let (mine, reference) = match case.arg {
            Arg::Signed(v) => (
                sprintf(
                    &TextScalar::from(case.format.as_str()),
                    &[FormatArg::Int(v)],
                ),
                oracle::sprintf_i64(&case.c_format, v),
            ),
            Arg::Unsigned(v) => (
                sprintf(
                    &TextScalar::from(case.format.as_str()),
                    &[FormatArg::Int(
                        i64::try_from(v).expect("generator keeps i64 range"),
                    )],
                ),
                oracle::sprintf_u64(&case.c_format, v),
            ),
            Arg::Double(v) => (
                sprintf(
                    &TextScalar::from(case.format.as_str()),
                    &[FormatArg::Float(v)],
                ),
                oracle::sprintf_f64(&case.c_format, v),
            ),
        };
        let mine = mine
            .map_err(|e| format!("{:?} {:?}: renderer error {e}", case.format, case.arg))?
            .to_string();
        if mine != reference {
            return Err(format!(
                "{:?} {:?}: mine {mine:?} != c {reference:?}",
                case.format, case.arg
            ));
        }
        Ok(())
    }
}

#[test]
fn acceptance_10_formatter_differential_suite() {
    let _guard = serial_lock();
    use differential::{check, generate};

    let conversions = ['d', 'x', 'o', 'f', 'e', 'E', 'g'];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e97_a9e4_a001);
    let mut mismatches = Vec::new();
    let mut executed = 0u64;
    for _ in 0..1_500 {
        for conversion in conversions {
            let case = generate(&mut rng, conversion);
            executed += 1;
            if let Err(report) = check(&case) {
                mismatches.push(report);
            }
        }
    }
    assert!(executed >= 10_000, "only {executed} cases executed");
    assert!(
        mismatches.is_empty(),
        "{} of {executed} cases mismatched; first few:\n{}",
        mismatches.len(),
        mismatches
            .iter()
            .take(10)
            .cloned()
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!(
        "criterion 10 PASS: {executed} randomized formatter cases match C snprintf byte-for-byte (0 mismatches)"
    );
}

#[test]
fn acceptance_11_container_equivalence() {
    let _guard = serial_lock();
    let prefix = text("TestResult");
    for n in 0..=64usize {
        let boxed = build_boxed_per_element(&prefix, n);
        let uniform = build_uniform_broadcast(&prefix, 1..=n as u64);
        assert!(
            content_equals(&boxed, &uniform),
            "builders diverged at n={n}"
        );
        assert!(
            content_equals(&boxed, &uniform_to_boxed(&boxed_to_uniform(&boxed))),
            "round trip diverged at n={n}"
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x0ffb_e875);
    for _ in 0..200 {
        let n = rng.gen_range(0..=2000usize);
        let boxed = build_boxed_per_element(&prefix, n);
        let uniform = build_uniform_broadcast(&prefix, 1..=n as u64);
        assert!(
            content_equals(&boxed, &uniform),
            "builders diverged at n={n}"
        );
        let round = boxed_to_uniform(&uniform_to_boxed(&uniform));
        assert!(
            content_equals(&uniform, &round),
            "round trip diverged at n={n}"
        );
    }
    println!(
        "criterion 11 PASS: builders contentEquals and conversions round-trip for n in 0..=64 exhaustively and 200 random n <= 2000"
    );
}

#[test]
fn acceptance_12_harness_sanity() {
    let _guard = serial_lock();

    // One 1ms sleep per repetition; the median across repetitions must land
    // within +/-20% of the nominal sleep. Sleep wakeups on a loaded host can
    // overshoot in bursts, so one retry is allowed: a systematic measurement
    // error fails both attempts.
    let config = BenchmarkConfig {
        min_time_per_rep: Duration::from_millis(1),
        repetitions: 25,
        warmup_iterations: 1,
    };
    let nominal = 1_000_000.0;
    let measure_sleep = || {
        run_benchmark(
            "sleeper",
            || std::thread::sleep(Duration::from_millis(1)),
            &config,
        )
        .unwrap()
        .mean_ns_per_iter
    };
    let mut sleep_mean = measure_sleep();
    if (sleep_mean - nominal).abs() > 0.2 * nominal {
        std::thread::sleep(Duration::from_millis(200));
        sleep_mean = measure_sleep();
    }
    assert!(
        (sleep_mean - nominal).abs() <= 0.2 * nominal,
        "1ms sleep measured as {sleep_mean} ns on both attempts"
    );

    // The sink barrier keeps the summing loop alive while the empty loop is
    // free to vanish; timing must show at least a 10x gap.
    const TRIPS: u64 = 50_000_000;
    let timed_best = |f: &dyn Fn() -> u64| {
        (0..3)
            .map(|_| {
                let start = Instant::now();
                black_box(f());
                start.elapsed().as_nanos() as f64
            })
            .fold(f64::INFINITY, f64::min)
    };
    let sink_loop = timed_best(&|| {
        let mut acc = 0u64;
        for i in 0..TRIPS {
            acc = acc.wrapping_add(black_box(i));
        }
        acc
    });
    let empty_loop = timed_best(&|| {
        for _ in 0..TRIPS {}
        0
    });
    assert!(
        sink_loop >= 10.0 * empty_loop.max(1.0),
        "sink loop {sink_loop} ns vs empty loop {empty_loop} ns"
    );
    println!(
        "criterion 12 PASS: 1ms sleep measured {:.0} ns (within 20%); sink loop {:.1e} ns vs empty loop {:.1e} ns (>= 10x)",
        sleep_mean, sink_loop, empty_loop
    );
}
