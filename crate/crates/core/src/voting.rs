//! Window-level voting over frame decisions and extraction of the initial
//! playing time sequence.
//!
//! Windows tile the stream without overlap (stride `k`). The trailing window
//! may be shorter than `k`; its ratio uses its own length.

use alloc::vec::Vec;

use crate::model::{FrameDecision, Fps, TimeSegment, TimeSequence};

/// Splits `decisions` into consecutive windows of `k` frames.
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn partition_windows(decisions: &[FrameDecision], k: usize) -> Vec<&[FrameDecision]> {
    assert!(k >= 1, "window length must be at least 1");
    decisions.chunks(k).collect()
}

/// Fraction of playing decisions in `window`.
pub fn playing_ratio(window: &[FrameDecision]) -> f64 {
    let playing = window.iter().filter(|d| d.playing).count();
    playing as f64 / window.len() as f64
}

/// `true` iff the window's playing ratio strictly exceeds `threshold`.
/// An empty window never votes playing.
pub fn vote_window(window: &[FrameDecision], threshold: f64) -> bool {
    !window.is_empty() && playing_ratio(window) > threshold
}

/// Votes every window of a stream in order.
pub fn vote_stream(decisions: &[FrameDecision], k: usize, threshold: f64) -> Vec<bool> {
    partition_windows(decisions, k)
        .into_iter()
        .map(|w| vote_window(w, threshold))
        .collect()
}

/// Maximal runs of `true` votes as half-open frame ranges relative to the
/// first frame, clipped to `total_frames`.
pub(crate) fn vote_runs(votes: &[bool], k: usize, total_frames: u64) -> Vec<(u64, u64)> {
    let k = k as u64;
    let mut runs = Vec::new();
    let mut open: Option<u64> = None;
    for (i, &v) in votes.iter().enumerate() {
        let i = i as u64;
        match (v, open) {
            (true, None) => open = Some(i),
            (false, Some(a)) => {
                runs.push((a * k, (i * k).min(total_frames)));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(a) = open {
        runs.push((a * k, (votes.len() as u64 * k).min(total_frames)));
    }
    runs.retain(|&(s, e)| s < e);
    runs
}

/// Initial time sequence for a stream whose first decision is frame 0.
pub fn extract_segments(votes: &[bool], k: usize, fps: Fps, total_frames: u64) -> TimeSequence {
    extract_segments_from(votes, k, fps, 0, total_frames)
}

/// Like [`extract_segments`], with timestamps offset by `first_frame`.
pub fn extract_segments_from(
    votes: &[bool],
    k: usize,
    fps: Fps,
    first_frame: u64,
    total_frames: u64,
) -> TimeSequence {
    let segments = vote_runs(votes, k, total_frames)
        .into_iter()
        .map(|(s, e)| {
            TimeSegment::new(
                fps.frames_to_seconds(first_frame + s),
                fps.frames_to_seconds(first_frame + e),
            )
            .expect("frame runs are non-empty and ordered")
        })
        .collect();
    TimeSequence::from_ordered(segments)
}
