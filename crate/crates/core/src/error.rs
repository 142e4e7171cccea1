use thiserror::Error;

use crate::model::Mode;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Per-frame failure raised while fusing a single frame.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("pose {person_index} has no skeleton area but area ordering is configured")]
    MissingArea { person_index: u32 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("detection stream is empty")]
    EmptyStream,

    #[error("frame {frame_index} carries both box and pose detections")]
    MixedMode { frame_index: u64 },

    #[error("frame {frame_index} carries {found} data in a {expected} stream")]
    ModeMismatch {
        frame_index: u64,
        expected: Mode,
        found: Mode,
    },

    #[error("frame index {found} does not follow {previous}")]
    NonMonotonicIndex { previous: u64, found: u64 },

    #[error("frame {frame_index} lists person {person_index} more than once")]
    DuplicatePerson { frame_index: u64, person_index: u32 },

    #[error("confidence {0} is outside [0, 1]")]
    InvalidConfidence(f64),

    #[error("bounding box has negative or non-finite extent")]
    InvalidBBox,

    #[error("skeleton area {0} is negative or non-finite")]
    InvalidArea(f64),

    #[error("segment [{start_s}, {end_s}) is empty, inverted or negative")]
    InvalidSegment { start_s: f64, end_s: f64 },

    #[error("segment {index} overlaps or precedes its predecessor")]
    UnorderedSegments { index: usize },

    #[error("invalid frame rate {num}/{den}")]
    InvalidFps { num: u32, den: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("frame {frame_index}: {source}")]
    Fusion {
        frame_index: u64,
        source: FusionError,
    },

    #[error("inconsistent rally counts: correct={correct}, detected={detected}, actual={actual}")]
    CountInconsistency {
        correct: usize,
        detected: usize,
        actual: usize,
    },

    #[error("duration {0} must be positive")]
    InvalidDuration(f64),

    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
}
