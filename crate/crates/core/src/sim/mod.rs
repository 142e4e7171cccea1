//! Seeded synthetic matches and frame-level label noise.
//!
//! All randomness comes from [`ChaCha8Rng`], whose output stream is fixed by
//! its specification, so a seed reproduces the same match on every platform.
//! Rally and break lengths are uniform over their ranges and rounded to whole
//! frames, which keeps the ground-truth intervals and per-frame labels exactly
//! consistent.

mod oracle;
mod study;

pub use oracle::brute_force_segments;
pub use study::{grid, run_cell, run_noise_study, run_trial, CellSummary, StudyCell, TrialOutcome};

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::GroundTruth;
use crate::model::{FrameDecision, Fps, TimeSegment, TimeSequence};

/// Parameters of one synthetic match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub n_rallies: usize,
    /// Inclusive `(min, max)` rally length in seconds.
    pub rally_len_s: (f64, f64),
    /// Inclusive `(min, max)` break length in seconds.
    pub break_len_s: (f64, f64),
    pub fps: Fps,
    /// Probability a playing frame is reported as non-playing.
    pub false_negative_rate: f64,
    /// Probability a non-playing frame is reported as playing.
    pub false_positive_rate: f64,
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            n_rallies: 20,
            rally_len_s: (3.0, 15.0),
            break_len_s: (5.0, 30.0),
            fps: Fps::integer(25).expect("25 fps is valid"),
            false_negative_rate: 0.2,
            false_positive_rate: 0.2,
            seed: 0x5EED,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.rally_len_s, self.break_len_s] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(Error::InvalidConfig("length ranges need 0 < min <= max"));
            }
        }
        for rate in [self.false_negative_rate, self.false_positive_rate] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidConfig("error rates must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_frames(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64), fps: Fps) -> u64 {
    let seconds = if lo == hi { lo } else { rng.random_range(lo..=hi) };
    fps.seconds_to_frame(seconds).max(1)
}

/// Lays out break, rally, break, ..., rally, break and returns the rallies
/// with one label per frame (`true` inside a rally).
pub fn generate_ground_truth(params: &SimParams) -> Result<(GroundTruth, Vec<bool>)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut labels = Vec::new();
    let mut rallies = Vec::with_capacity(params.n_rallies);
    let push = |labels: &mut Vec<bool>, frames: u64, value: bool| {
        labels.extend(core::iter::repeat_n(value, frames as usize));
    };
    for _ in 0..params.n_rallies {
        let pause = draw_frames(&mut rng, params.break_len_s, params.fps);
        push(&mut labels, pause, false);
        let rally = draw_frames(&mut rng, params.rally_len_s, params.fps);
        let start = labels.len() as u64;
        push(&mut labels, rally, true);
        rallies.push(TimeSegment::new(
            params.fps.frames_to_seconds(start),
            params.fps.frames_to_seconds(start + rally),
        )?);
    }
    let pause = draw_frames(&mut rng, params.break_len_s, params.fps);
    push(&mut labels, pause, false);
    Ok((GroundTruth::new(TimeSequence::new(rallies)?), labels))
}

/// Flips each label independently: `true -> false` with probability
/// `false_negative_rate`, `false -> true` with `false_positive_rate`.
///
/// # Panics
///
/// Panics if either rate is outside `[0, 1]`.
pub fn corrupt_labels(
    labels: &[bool],
    false_negative_rate: f64,
    false_positive_rate: f64,
    seed: u64,
) -> Vec<FrameDecision> {
    assert!((0.0..=1.0).contains(&false_negative_rate), "rate out of range");
    assert!((0.0..=1.0).contains(&false_positive_rate), "rate out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels
        .iter()
        .enumerate()
        .map(|(i, &truth)| {
            let flip_p = if truth {
                false_negative_rate
            } else {
                false_positive_rate
            };
            let flipped = rng.random_bool(flip_p);
            FrameDecision::new(i as u64, truth ^ flipped)
        })
        .collect()
}

/// Fraction of `decisions` that agree with `labels`.
pub fn frame_accuracy(labels: &[bool], decisions: &[FrameDecision]) -> f64 {
    if labels.is_empty() {
        return 1.0;
    }
    let agree = labels
        .iter()
        .zip(decisions)
        .filter(|(l, d)| **l == d.playing)
        .count();
    agree as f64 / labels.len() as f64
}
