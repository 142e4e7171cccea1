//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rallycut::cutlist::{parse_cutlist, render_cutlist, CutlistFormat};
use rallycut::detections::write_detection_stream;
use rallycut::report::rounded_percentages;
use rallycut_core::sim::{
    brute_force_segments, corrupt_labels, generate_ground_truth, run_cell, SimParams, StudyCell,
};
use rallycut_core::{
    evaluate, fuse_box_frame, merge_segments, segment_decisions, FrameDecision, FrameRecord, Fps,
    Label, LabeledDetection, PipelineConfig, TimeSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PROPERTY_CASES: u32 = 256;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_rallycut")
}

fn fps25() -> Fps {
    Fps::integer(25).unwrap()
}

fn random_decisions(rng: &mut ChaCha8Rng, n: usize) -> Vec<FrameDecision> {
    // Two-state Markov chain so streams have runs of both classes.
    let stay = rng.random_range(0.5..0.99);
    let mut state = rng.random_bool(0.5);
    (0..n)
        .map(|i| {
            if !rng.random_bool(stay) {
                state = !state;
            }
            FrameDecision::new(i as u64, state)
        })
        .collect()
}

fn assert_disjoint(seq: &TimeSequence) {
    assert!(TimeSequence::new(seq.segments().to_vec()).is_ok(), "sequence not ordered/disjoint");
}

// 1. Table rows reproduced through the CLI.
fn metric_reproduction() -> String {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["eval", "--counts", "17,17,17", "--counts", "91,94,94", "--counts", "88,92,91"])
        .output()
        .expect("run rallycut eval");
    let elapsed = start.elapsed();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = stdout
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().rev().take(3).collect::<Vec<_>>())
        .collect();
    let expected = [
        ["100%", "100%", "100%"],
        ["97%", "97%", "97%"],
        ["96%", "97%", "96%"],
    ];
    for (row, want) in rows.iter().zip(expected) {
        let got: Vec<&str> = row.iter().rev().copied().collect();
        assert_eq!(got, want.to_vec(), "cli output:\n{stdout}");
    }
    for ((cd, d, a), want) in [((17, 17, 17), (100, 100, 100)), ((91, 94, 94), (97, 97, 97)), ((88, 92, 91), (96, 97, 96))] {
        assert_eq!(rounded_percentages(&evaluate(cd, d, a).unwrap()), want);
    }
    assert!(elapsed < Duration::from_secs(1), "eval took {elapsed:?}");
    format!("eval reproduced 3 rows in {elapsed:?}")
}

// 2. Production voting + merging equals the naive oracle.
fn oracle_equivalence() -> String {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_201);
    let rates = [fps25(), Fps::integer(30).unwrap(), Fps::new(30000, 1001).unwrap()];
    let thresholds = [0.3, 0.5, 0.7];
    let instances = 1000;
    let mut non_empty = 0;
    for i in 0..instances {
        let n = rng.random_range(1..=500);
        let decisions = random_decisions(&mut rng, n);
        let config = PipelineConfig {
            fps: rates[i % rates.len()],
            window_k: rng.random_range(1..=50),
            vote_threshold: thresholds[rng.random_range(0..thresholds.len())],
            merge_gap_s: rng.random_range(0.0..=5.0),
            ..PipelineConfig::default()
        };
        let (initial, merged) = segment_decisions(&decisions, &config);
        let oracle = brute_force_segments(&decisions, &config);
        assert_eq!(merged, oracle, "instance {i}: {config:?}");
        assert_disjoint(&initial);
        non_empty += usize::from(!merged.is_empty());
    }
    let elapsed = start.elapsed();
    assert!(non_empty > instances / 4, "too few informative instances: {non_empty}");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    format!("{instances} instances identical ({non_empty} non-empty) in {elapsed:?}")
}

// 3. Frame noise of 20% is absorbed by voting and merging.
fn noise_amplification() -> String {
    let start = Instant::now();
    let params = SimParams {
        rally_len_s: (3.0, 15.0),
        break_len_s: (5.0, 30.0),
        fps: fps25(),
        ..SimParams::default()
    };
    let full = run_cell(&params, &StudyCell::symmetric(0.2, 25, 0.5, 1.0), 100, 0.5).unwrap();
    let ablation = run_cell(&params, &StudyCell::symmetric(0.2, 1, 0.5, 0.0), 100, 0.5).unwrap();
    let elapsed = start.elapsed();
    assert!((full.frame_accuracy_mean - 0.8).abs() < 0.01, "frame accuracy {}", full.frame_accuracy_mean);
    assert!(full.combined_mean >= 0.95, "mean C = {}", full.combined_mean);
    assert!(ablation.combined_mean < full.combined_mean, "ablation C = {}", ablation.combined_mean);
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    format!(
        "frame acc {:.1}% -> mean C {:.2}% (k=1, dt=0 ablation {:.2}%) in {elapsed:?}",
        100.0 * full.frame_accuracy_mean,
        100.0 * full.combined_mean,
        100.0 * ablation.combined_mean
    )
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    if let Err(e) = runner.run(&strategy, test) {
        panic!("property `{name}` failed: {e}");
    }
}

fn detection() -> impl Strategy<Value = LabeledDetection> {
    (any::<bool>(), 0.0f64..=1.0).prop_map(|(p, c)| {
        LabeledDetection::new(if p { Label::Playing } else { Label::NonPlaying }, c).unwrap()
    })
}

fn sequence() -> impl Strategy<Value = TimeSequence> {
    prop::collection::vec((0u32..300, 1u32..300), 0..60).prop_map(|raw| {
        let mut t = 0;
        let pairs: Vec<(f64, f64)> = raw
            .into_iter()
            .map(|(g, l)| {
                let s = t + g;
                t = s + l;
                (s as f64 / 100.0, t as f64 / 100.0)
            })
            .collect();
        TimeSequence::from_pairs(&pairs).unwrap()
    })
}

// 4. Property suites, each with PROPERTY_CASES generated cases.
fn property_suites() -> String {
    run_property(
        "fusion scale invariance",
        (prop::collection::vec(detection(), 0..12), 0.001f64..=10.0),
        |(dets, c)| {
            let p: f64 = dets.iter().filter(|d| d.label == Label::Playing).map(|d| d.confidence).sum();
            let np: f64 = dets.iter().filter(|d| d.label == Label::NonPlaying).map(|d| d.confidence).sum();
            prop_assume!((p - np).abs() > 1e-9);
            let scaled: Vec<_> = dets.iter().map(|d| LabeledDetection { confidence: d.confidence * c, ..*d }).collect();
            prop_assert_eq!(fuse_box_frame(&dets), fuse_box_frame(&scaled));
            Ok(())
        },
    );
    run_property("fusion tie is non-playing", prop::collection::vec(0.0f64..=1.0, 0..8), |confs| {
        let mut dets = Vec::new();
        for &c in &confs {
            dets.push(LabeledDetection::new(Label::Playing, c).unwrap());
            dets.push(LabeledDetection::new(Label::NonPlaying, c).unwrap());
        }
        // Same multiset on both sides, summed in the same order.
        dets.sort_by_key(|d| d.label == Label::NonPlaying);
        prop_assert!(!fuse_box_frame(&dets));
        Ok(())
    });
    run_property(
        "voting threshold monotonicity",
        (prop::collection::vec(any::<bool>(), 1..400), 1usize..50, 0.0f64..=1.0, 0.0f64..=1.0),
        |(bits, k, a, b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let d: Vec<_> = bits.iter().enumerate().map(|(i, &x)| FrameDecision::new(i as u64, x)).collect();
            let n = d.len() as u64;
            let vl = rallycut_core::voting::vote_stream(&d, k, lo);
            let vh = rallycut_core::voting::vote_stream(&d, k, hi);
            prop_assert!(vl.iter().zip(&vh).all(|(l, h)| *l || !*h));
            let sl = rallycut_core::extract_segments(&vl, k, fps25(), n);
            let sh = rallycut_core::extract_segments(&vh, k, fps25(), n);
            assert_disjoint(&sl);
            assert_disjoint(&sh);
            prop_assert!(rallycut_core::total_duration(&sh) <= rallycut_core::total_duration(&sl));
            Ok(())
        },
    );
    run_property("merge idempotence and gap guarantee", (sequence(), 0u32..500), |(s, g)| {
        let gap = g as f64 / 100.0;
        let once = merge_segments(&s, gap);
        assert_disjoint(&once);
        prop_assert_eq!(merge_segments(&once, gap), once.clone());
        for w in once.segments().windows(2) {
            prop_assert!(w[1].start_s() - w[0].end_s() >= gap);
        }
        Ok(())
    });
    run_property("merge coarsening in gap", (sequence(), 0u32..500, 0u32..500), |(s, a, b)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let fine = merge_segments(&s, lo as f64 / 100.0);
        let coarse = merge_segments(&s, hi as f64 / 100.0);
        assert_disjoint(&coarse);
        for seg in &fine {
            prop_assert!(coarse.iter().any(|c| c.contains(seg)));
        }
        Ok(())
    });
    run_property(
        "pipeline outputs are disjoint",
        (prop::collection::vec(any::<bool>(), 1..500), 1usize..50, 0.0f64..=1.0, 0.0f64..5.0),
        |(bits, k, t, g)| {
            let d: Vec<_> = bits.iter().enumerate().map(|(i, &x)| FrameDecision::new(i as u64, x)).collect();
            let cfg = PipelineConfig { window_k: k, vote_threshold: t, merge_gap_s: g, ..PipelineConfig::default() };
            let (initial, merged) = segment_decisions(&d, &cfg);
            assert_disjoint(&initial);
            assert_disjoint(&merged);
            Ok(())
        },
    );

    let mut checked = 0usize;
    for a in 0..=50usize {
        for d in 0..=50usize {
            for cd in 0..=a.min(d) {
                let r = evaluate(cd, d, a).unwrap();
                let (lo, hi) = (r.precision.min(r.recall), r.precision.max(r.recall));
                assert!(r.precision + r.recall == 0.0 || (lo - 1e-12 <= r.combined && r.combined <= hi + 1e-12));
                checked += 1;
            }
        }
    }
    format!("6 suites x {PROPERTY_CASES} cases, harmonic bound on {checked} count triples")
}

fn random_result_sequence(rng: &mut ChaCha8Rng) -> (TimeSequence, Fps) {
    let rates = [fps25(), Fps::integer(30).unwrap(), Fps::new(30000, 1001).unwrap(), Fps::new(2997, 100).unwrap()];
    let fps = rates[rng.random_range(0..rates.len())];
    let n = rng.random_range(1..5000);
    let decisions = random_decisions(rng, n);
    let cfg = PipelineConfig {
        fps,
        window_k: rng.random_range(1..40),
        vote_threshold: 0.5,
        merge_gap_s: rng.random_range(0.0..3.0),
        ..PipelineConfig::default()
    };
    (segment_decisions(&decisions, &cfg).1, fps)
}

// 5. Byte-identical cut lists and exact write/read round trips.
fn determinism_and_round_trip() -> String {
    let dir = tempfile::tempdir().unwrap();
    let params = SimParams { n_rallies: 8, seed: 77, ..SimParams::default() };
    let (_, labels) = generate_ground_truth(&params).unwrap();
    let noisy = corrupt_labels(&labels, 0.2, 0.2, 78);
    let frames: Vec<FrameRecord> = noisy
        .iter()
        .map(|d| {
            let label = if d.playing { Label::Playing } else { Label::NonPlaying };
            FrameRecord::boxes(d.frame_index, vec![LabeledDetection::new(label, 0.8).unwrap()])
        })
        .collect();
    let input = dir.path().join("match.jsonl");
    write_detection_stream(std::fs::File::create(&input).unwrap(), &frames).unwrap();

    let run = |out: &Path, format: &str| {
        let status = Command::new(bin())
            .args(["clip", "--fps", "25", "--format", format, "--emit-cutlist"])
            .arg(out)
            .arg(&input)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(out).unwrap()
    };
    for format in ["tabular", "structured"] {
        let a = run(&dir.path().join(format!("a.{format}")), format);
        let b = run(&dir.path().join(format!("b.{format}")), format);
        assert_eq!(a, b, "{format} cut lists differ between runs");
        assert!(a.len() > 40);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut segments = 0;
    for _ in 0..100 {
        let (seq, fps) = random_result_sequence(&mut rng);
        segments += seq.len();
        for format in [CutlistFormat::Tabular, CutlistFormat::Structured] {
            let text = render_cutlist(&seq, fps, format);
            let (back, rate) = parse_cutlist(&text, Some(fps)).unwrap();
            assert_eq!(rate, fps);
            assert_eq!(back, seq);
            assert_eq!(render_cutlist(&back, fps, format), text);
        }
    }
    format!("2 formats byte-identical across runs, 100 random results ({segments} segments) round-trip")
}

// 6. Noise-free streams recover every rally within one window.
fn noiseless_recovery() -> String {
    let cfg = PipelineConfig::default();
    let bound = cfg.window_k as f64 / cfg.fps.as_f64();
    let mut worst: f64 = 0.0;
    let mut rallies = 0;
    for trial in 0..50u64 {
        let params = SimParams { seed: 1000 + trial, fps: cfg.fps, ..SimParams::default() };
        let (truth, labels) = generate_ground_truth(&params).unwrap();
        let decisions = corrupt_labels(&labels, 0.0, 0.0, trial);
        let (_, merged) = segment_decisions(&decisions, &cfg);
        assert_eq!(merged.len(), truth.rallies.len(), "trial {trial}");
        for (got, want) in merged.iter().zip(&truth.rallies) {
            let err = (got.start_s() - want.start_s()).abs().max((got.end_s() - want.end_s()).abs());
            worst = worst.max(err);
            assert!(err <= bound, "trial {trial}: {got:?} vs {want:?}");
        }
        rallies += truth.rallies.len();
    }
    format!("50 trials, {rallies} rallies, worst boundary error {worst:.3} s <= {bound:.3} s")
}

type Criterion = (&'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 metric reproduction", metric_reproduction),
        ("2 oracle equivalence", oracle_equivalence),
        ("3 noise amplification", noise_amplification),
        ("4 property suites", property_suites),
        ("5 determinism and round-trip", determinism_and_round_trip),
        ("6 noiseless recovery", noiseless_recovery),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    let _ = panic::take_hook();
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
