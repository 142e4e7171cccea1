//! Deterministic highlight segmentation for racquet-sport broadcast video.
//!
//! The engine consumes per-frame detector output and produces playing
//! intervals in three stages:
//!
//! 1. [`fusion`] collapses every frame's detections into one Boolean decision
//!    (confidence-sum comparison for box detectors, first-N-players existence
//!    test for pose detectors).
//! 2. [`voting`] tiles the decision stream into fixed windows of `k` frames and
//!    keeps windows whose playing ratio exceeds a threshold, producing the
//!    initial time sequence.
//! 3. [`merge`] coalesces neighbouring segments whose gap is shorter than a
//!    configured interval.
//!
//! [`metrics`] scores the result against ground-truth rallies and [`sim`]
//! provides seeded synthetic streams, label noise, a naive reference
//! implementation and the noise-amplification study.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line live in the `rallycut` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod fusion;
pub mod merge;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod sim;
pub mod voting;

pub use error::{Error, FusionError, Result};
pub use fusion::{fuse_box_frame, fuse_pose_frame, fuse_stream};
pub use merge::{merge_segments, total_duration};
pub use metrics::{compression_ratio, evaluate, match_rallies, GroundTruth, RallyMatch};
pub use model::{
    validate_stream, BBox, EvalReport, FrameDecision, FrameRecord, Fps, GapWarning, Label,
    LabeledDetection, Mode, PipelineConfig, PoseObservation, PoseOrdering, TimeSegment,
    TimeSequence, ValidatedStream,
};
pub use pipeline::{run_pipeline, segment_decisions, HighlightResult};
pub use voting::{extract_segments, partition_windows, vote_window};
