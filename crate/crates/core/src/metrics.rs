//! Rally-level evaluation: matching detections to ground truth, precision,
//! recall and the combined (harmonic-mean) score.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{EvalReport, TimeSegment, TimeSequence};

/// Default fraction of a ground-truth rally a detection must cover.
pub const DEFAULT_MIN_COVERAGE: f64 = 0.5;

/// Reference rallies for one video.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub rallies: TimeSequence,
}

impl GroundTruth {
    pub fn new(rallies: TimeSequence) -> Self {
        Self { rallies }
    }
}

/// A detected segment paired with the rally it was credited for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RallyMatch {
    pub detected: usize,
    pub actual: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchOutcome {
    pub matches: Vec<RallyMatch>,
}

impl MatchOutcome {
    pub fn correctly_detected(&self) -> usize {
        self.matches.len()
    }
}

fn covers(detected: &TimeSegment, rally: &TimeSegment, min_coverage: f64) -> bool {
    detected.overlap(rally) >= min_coverage * rally.duration()
}

/// Greedy one-to-one matching in time order: each detected segment takes the
/// earliest unmatched rally it covers by at least `min_coverage` of the
/// rally's duration.
pub fn match_rallies(
    detected: &TimeSequence,
    actual: &GroundTruth,
    min_coverage: f64,
) -> Result<MatchOutcome> {
    if !(min_coverage > 0.0 && min_coverage <= 1.0) {
        return Err(Error::InvalidConfig("min coverage must lie in (0, 1]"));
    }
    let rallies = actual.rallies.segments();
    let mut taken = alloc::vec![false; rallies.len()];
    let mut matches = Vec::new();
    for (di, det) in detected.iter().enumerate() {
        let hit = rallies
            .iter()
            .enumerate()
            .find(|(ai, rally)| !taken[*ai] && covers(det, rally, min_coverage));
        if let Some((ai, _)) = hit {
            taken[ai] = true;
            matches.push(RallyMatch {
                detected: di,
                actual: ai,
            });
        }
    }
    Ok(MatchOutcome { matches })
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision `R_cd / R_d`, recall `R_cd / R_a` and their harmonic mean.
/// Zero denominators yield zero.
pub fn evaluate(correctly_detected: usize, detected: usize, actual: usize) -> Result<EvalReport> {
    if correctly_detected > detected || correctly_detected > actual {
        return Err(Error::CountInconsistency {
            correct: correctly_detected,
            detected,
            actual,
        });
    }
    let precision = ratio(correctly_detected, detected);
    let recall = ratio(correctly_detected, actual);
    let combined = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(EvalReport {
        correctly_detected,
        detected,
        actual,
        precision,
        recall,
        combined,
    })
}

/// Matches `detected` against `actual` and scores the result.
pub fn evaluate_sequences(
    detected: &TimeSequence,
    actual: &GroundTruth,
    min_coverage: f64,
) -> Result<EvalReport> {
    let outcome = match_rallies(detected, actual, min_coverage)?;
    evaluate(
        outcome.correctly_detected(),
        detected.len(),
        actual.rallies.len(),
    )
}

/// Fraction of the original footage kept after clipping.
pub fn compression_ratio(before_s: f64, after_s: f64) -> Result<f64> {
    if !before_s.is_finite() || before_s <= 0.0 {
        return Err(Error::InvalidDuration(before_s));
    }
    Ok(after_s / before_s)
}
