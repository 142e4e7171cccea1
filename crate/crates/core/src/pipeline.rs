//! End-to-end composition: fusion, voting, merging and optional scoring.

use crate::error::{Error, Result};
use crate::fusion::fuse_stream;
use crate::merge::{merge_segments, total_duration};
use crate::metrics::{evaluate_sequences, GroundTruth};
use crate::model::{EvalReport, FrameDecision, PipelineConfig, TimeSequence, ValidatedStream};
use crate::voting::{extract_segments_from, vote_stream};

/// Everything one pipeline run produces for a single video.
#[derive(Debug, Clone, PartialEq)]
pub struct HighlightResult {
    pub config: PipelineConfig,
    /// Segments straight out of window voting.
    pub initial_sequence: TimeSequence,
    /// `initial_sequence` after gap merging.
    pub final_sequence: TimeSequence,
    pub first_frame: u64,
    pub total_frames: u64,
    pub playing_frames: u64,
    /// Frame slots absent from the input, counted as non-playing.
    pub missing_frames: u64,
    pub duration_before_s: f64,
    pub duration_after_s: f64,
    pub report: Option<EvalReport>,
}

impl HighlightResult {
    /// Re-derives the merged sequence and duration and compares them.
    pub fn check_consistency(&self) -> Result<()> {
        if merge_segments(&self.initial_sequence, self.config.merge_gap_s) != self.final_sequence {
            return Err(Error::Invariant("final sequence is not the merge of the initial one"));
        }
        if total_duration(&self.final_sequence) != self.duration_after_s {
            return Err(Error::Invariant("after-duration disagrees with the final sequence"));
        }
        if TimeSequence::new(self.final_sequence.segments().to_vec()).is_err() {
            return Err(Error::Invariant("final sequence is not ordered and disjoint"));
        }
        Ok(())
    }
}

/// Voting and merging over already-fused decisions. Timestamps are measured
/// from frame 0 of the video, using the first decision's `frame_index` as the
/// stream origin.
pub fn segment_decisions(
    decisions: &[FrameDecision],
    config: &PipelineConfig,
) -> (TimeSequence, TimeSequence) {
    let first = decisions.first().map_or(0, |d| d.frame_index);
    let votes = vote_stream(decisions, config.window_k, config.vote_threshold);
    let initial = extract_segments_from(
        &votes,
        config.window_k,
        config.fps,
        first,
        decisions.len() as u64,
    );
    let merged = merge_segments(&initial, config.merge_gap_s);
    (initial, merged)
}

/// Runs the full pipeline on a validated stream, scoring against `truth`
/// when it is supplied.
pub fn run_pipeline(
    stream: &ValidatedStream,
    config: &PipelineConfig,
    truth: Option<&GroundTruth>,
    min_coverage: f64,
) -> Result<HighlightResult> {
    config.validate()?;
    if stream.mode() != config.mode {
        return Err(Error::InvalidConfig("stream mode differs from configured mode"));
    }
    let decisions = fuse_stream(stream, config)?;
    let (initial, merged) = segment_decisions(&decisions, config);
    let report = truth
        .map(|t| evaluate_sequences(&merged, t, min_coverage))
        .transpose()?;
    let total_frames = decisions.len() as u64;
    let result = HighlightResult {
        config: *config,
        duration_after_s: total_duration(&merged),
        duration_before_s: config.fps.frames_to_seconds(total_frames),
        initial_sequence: initial,
        final_sequence: merged,
        first_frame: stream.first_index(),
        total_frames,
        playing_frames: decisions.iter().filter(|d| d.playing).count() as u64,
        missing_frames: stream.warnings().iter().map(|w| w.missing).sum(),
        report,
    };
    result.check_consistency()?;
    Ok(result)
}
