//! Per-frame fusion of player-level detections into one Boolean decision.

use alloc::vec::Vec;

use crate::error::{Error, FusionError, Result};
use crate::model::{
    FrameDecision, Label, LabeledDetection, Mode, PipelineConfig, PoseObservation, PoseOrdering,
    ValidatedStream,
};

/// A box frame is playing iff the playing confidences outweigh the
/// non-playing ones. Empty frames and exact ties are non-playing.
///
/// Conflicting labels on the same player are expected input; nothing is
/// deduplicated before summing.
pub fn fuse_box_frame(detections: &[LabeledDetection]) -> bool {
    let (playing, non_playing) =
        detections
            .iter()
            .fold((0.0, 0.0), |(p, np), det| match det.label {
                Label::Playing => (p + det.confidence, np),
                Label::NonPlaying => (p, np + det.confidence),
            });
    playing > non_playing
}

/// A pose frame is playing iff any of the first `player_count` people,
/// ordered per `pose_ordering`, is in a playing state.
pub fn fuse_pose_frame(
    poses: &[PoseObservation],
    config: &PipelineConfig,
) -> Result<bool, FusionError> {
    let mut ordered: Vec<&PoseObservation> = poses.iter().collect();
    match config.pose_ordering {
        PoseOrdering::InputOrder => ordered.sort_by_key(|p| p.person_index),
        PoseOrdering::AreaDescending => {
            if let Some(p) = poses.iter().find(|p| p.skeleton_area.is_none()) {
                return Err(FusionError::MissingArea {
                    person_index: p.person_index,
                });
            }
            ordered.sort_by(|a, b| {
                let (aa, ba) = (a.skeleton_area.unwrap_or(0.0), b.skeleton_area.unwrap_or(0.0));
                ba.total_cmp(&aa).then(a.person_index.cmp(&b.person_index))
            });
        }
    }
    Ok(ordered
        .iter()
        .take(config.player_count)
        .any(|p| p.playing))
}

/// Fuses a validated stream into one decision per frame slot between the
/// first and last index; missing indices become non-playing decisions.
pub fn fuse_stream(stream: &ValidatedStream, config: &PipelineConfig) -> Result<Vec<FrameDecision>> {
    let mut decisions = Vec::with_capacity(stream.span_len() as usize);
    let mut next = stream.first_index();
    for frame in stream.frames() {
        while next < frame.frame_index {
            decisions.push(FrameDecision::new(next, false));
            next += 1;
        }
        let playing = match stream.mode() {
            Mode::Box => fuse_box_frame(&frame.boxes),
            Mode::Pose => fuse_pose_frame(&frame.poses, config).map_err(|source| Error::Fusion {
                frame_index: frame.frame_index,
                source,
            })?,
        };
        decisions.push(FrameDecision::new(frame.frame_index, playing));
        next = frame.frame_index + 1;
    }
    Ok(decisions)
}
