//! Gap-based merging of playing segments.

use alloc::vec::Vec;

use crate::model::{TimeSegment, TimeSequence};

/// Coalesces consecutive segments whose gap (next start minus current end)
/// is strictly shorter than `merge_gap_s`. One left-to-right pass; chains of
/// short gaps collapse transitively. A gap of exactly `merge_gap_s` is kept.
pub fn merge_segments(seq: &TimeSequence, merge_gap_s: f64) -> TimeSequence {
    let mut out: Vec<TimeSegment> = Vec::with_capacity(seq.len());
    for seg in seq {
        match out.last_mut() {
            Some(last) if seg.start_s() - last.end_s() < merge_gap_s => {
                *last = TimeSegment::new(last.start_s(), seg.end_s())
                    .expect("ordered segments merge into a valid segment");
            }
            _ => out.push(*seg),
        }
    }
    TimeSequence::from_ordered(out)
}

/// Sum of segment durations in seconds.
pub fn total_duration(seq: &TimeSequence) -> f64 {
    seq.iter().map(TimeSegment::duration).sum()
}
