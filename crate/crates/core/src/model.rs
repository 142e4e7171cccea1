//! Domain types shared by every stage, and ingestion-time validation.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Class predicted for one detected person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Playing,
    NonPlaying,
}

/// Pixel-space box `(x, y, w, h)`. Carried for provenance, never used in decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl BBox {
    fn is_valid(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.w.is_finite()
            && self.h.is_finite()
            && self.w >= 0.0
            && self.h >= 0.0
    }
}

/// One box-detector output: a label with its confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledDetection {
    pub label: Label,
    pub confidence: f64,
    pub bbox: Option<BBox>,
}

impl LabeledDetection {
    pub fn new(label: Label, confidence: f64) -> Result<Self> {
        let det = Self {
            label,
            confidence,
            bbox: None,
        };
        det.check()?;
        Ok(det)
    }

    pub fn with_bbox(mut self, bbox: BBox) -> Result<Self> {
        self.bbox = Some(bbox);
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(Error::InvalidConfidence(self.confidence));
        }
        if let Some(b) = &self.bbox {
            if !b.is_valid() {
                return Err(Error::InvalidBBox);
            }
        }
        Ok(())
    }
}

/// One pose-detector output. `person_index` is the detector's output position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseObservation {
    pub person_index: u32,
    pub playing: bool,
    pub skeleton_area: Option<f64>,
}

impl PoseObservation {
    pub fn new(person_index: u32, playing: bool) -> Self {
        Self {
            person_index,
            playing,
            skeleton_area: None,
        }
    }

    pub fn with_area(mut self, area: f64) -> Self {
        self.skeleton_area = Some(area);
        self
    }
}

/// Detector output for a single video frame.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrameRecord {
    pub frame_index: u64,
    pub boxes: Vec<LabeledDetection>,
    pub poses: Vec<PoseObservation>,
}

impl FrameRecord {
    pub fn boxes(frame_index: u64, boxes: Vec<LabeledDetection>) -> Self {
        Self {
            frame_index,
            boxes,
            poses: Vec::new(),
        }
    }

    pub fn poses(frame_index: u64, poses: Vec<PoseObservation>) -> Self {
        Self {
            frame_index,
            boxes: Vec::new(),
            poses,
        }
    }
}

/// Fused per-frame verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameDecision {
    pub frame_index: u64,
    pub playing: bool,
}

impl FrameDecision {
    pub fn new(frame_index: u64, playing: bool) -> Self {
        Self {
            frame_index,
            playing,
        }
    }
}

/// Which detector family produced a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Box,
    Pose,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Box => f.write_str("box"),
            Mode::Pose => f.write_str("pose"),
        }
    }
}

/// How the "first N players" of a pose frame are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PoseOrdering {
    /// Ascending `person_index`, i.e. the detector's own ordering.
    #[default]
    InputOrder,
    /// Largest skeleton area first, ties broken by `person_index`.
    AreaDescending,
}

/// Exact rational frame rate, e.g. `30000/1001`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fps {
    num: u32,
    den: u32,
}

impl Fps {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidFps { num, den });
        }
        Ok(Self { num, den })
    }

    pub fn integer(fps: u32) -> Result<Self> {
        Self::new(fps, 1)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Timestamp of the start of frame `frame`.
    pub fn frames_to_seconds(&self, frame: u64) -> f64 {
        frame as f64 * self.den as f64 / self.num as f64
    }

    /// Nearest frame boundary to `seconds` (clamped at zero).
    pub fn seconds_to_frame(&self, seconds: f64) -> u64 {
        let exact = seconds * self.num as f64 / self.den as f64;
        if exact <= 0.0 {
            0
        } else {
            (exact + 0.5) as u64
        }
    }
}

impl fmt::Display for Fps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Half-open playing interval `[start_s, end_s)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSegment {
    start_s: f64,
    end_s: f64,
}

impl TimeSegment {
    pub fn new(start_s: f64, end_s: f64) -> Result<Self> {
        if !start_s.is_finite() || !end_s.is_finite() || start_s < 0.0 || start_s >= end_s {
            return Err(Error::InvalidSegment { start_s, end_s });
        }
        Ok(Self { start_s, end_s })
    }

    pub fn start_s(&self) -> f64 {
        self.start_s
    }

    pub fn end_s(&self) -> f64 {
        self.end_s
    }

    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }

    /// Length of the intersection with `other`, zero when disjoint.
    pub fn overlap(&self, other: &TimeSegment) -> f64 {
        let lo = if self.start_s > other.start_s {
            self.start_s
        } else {
            other.start_s
        };
        let hi = if self.end_s < other.end_s {
            self.end_s
        } else {
            other.end_s
        };
        if hi > lo {
            hi - lo
        } else {
            0.0
        }
    }

    pub fn contains(&self, other: &TimeSegment) -> bool {
        self.start_s <= other.start_s && other.end_s <= self.end_s
    }
}

/// Ordered, pairwise-disjoint list of segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSequence {
    segments: Vec<TimeSegment>,
}

impl TimeSequence {
    pub fn new(segments: Vec<TimeSegment>) -> Result<Self> {
        for (i, pair) in segments.windows(2).enumerate() {
            if pair[0].end_s > pair[1].start_s {
                return Err(Error::UnorderedSegments { index: i + 1 });
            }
        }
        Ok(Self { segments })
    }

    /// Builds a sequence from `(start, end)` pairs, validating every segment.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let segments = pairs
            .iter()
            .map(|&(s, e)| TimeSegment::new(s, e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(segments)
    }

    pub(crate) fn from_ordered(segments: Vec<TimeSegment>) -> Self {
        debug_assert!(Self::new(segments.clone()).is_ok());
        Self { segments }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn segments(&self) -> &[TimeSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, TimeSegment> {
        self.segments.iter()
    }

    pub fn into_vec(self) -> Vec<TimeSegment> {
        self.segments
    }

    pub fn to_pairs(&self) -> Vec<(f64, f64)> {
        self.segments.iter().map(|s| (s.start_s, s.end_s)).collect()
    }
}

impl<'a> IntoIterator for &'a TimeSequence {
    type Item = &'a TimeSegment;
    type IntoIter = core::slice::Iter<'a, TimeSegment>;

    fn into_iter(self) -> Self::IntoIter {
        self.segments.iter()
    }
}

/// Tunable parameters of the full pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub mode: Mode,
    pub fps: Fps,
    /// Window length in frames.
    pub window_k: usize,
    /// Playing ratio a window must strictly exceed.
    pub vote_threshold: f64,
    /// Gaps strictly shorter than this (seconds) are absorbed.
    pub merge_gap_s: f64,
    pub player_count: usize,
    pub pose_ordering: PoseOrdering,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Box,
            fps: Fps { num: 25, den: 1 },
            window_k: 25,
            vote_threshold: 0.5,
            merge_gap_s: 1.0,
            player_count: 2,
            pose_ordering: PoseOrdering::InputOrder,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_k == 0 {
            return Err(Error::InvalidConfig("window length must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.vote_threshold) {
            return Err(Error::InvalidConfig("vote threshold must lie in [0, 1]"));
        }
        if !self.merge_gap_s.is_finite() || self.merge_gap_s < 0.0 {
            return Err(Error::InvalidConfig("merge gap must be finite and non-negative"));
        }
        if self.player_count == 0 {
            return Err(Error::InvalidConfig("player count must be at least 1"));
        }
        Ok(())
    }
}

/// Rally-level precision, recall and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub correctly_detected: usize,
    pub detected: usize,
    pub actual: usize,
    pub precision: f64,
    pub recall: f64,
    pub combined: f64,
}

/// A run of missing frame indices; those frames are treated as non-playing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapWarning {
    pub first_missing: u64,
    pub missing: u64,
}

/// A stream that passed [`validate_stream`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedStream {
    mode: Mode,
    frames: Vec<FrameRecord>,
    warnings: Vec<GapWarning>,
}

impl ValidatedStream {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn frames(&self) -> &[FrameRecord] {
        &self.frames
    }

    pub fn warnings(&self) -> &[GapWarning] {
        &self.warnings
    }

    pub fn first_index(&self) -> u64 {
        self.frames[0].frame_index
    }

    pub fn last_index(&self) -> u64 {
        self.frames[self.frames.len() - 1].frame_index
    }

    /// Number of frame slots between the first and last index, gaps included.
    pub fn span_len(&self) -> u64 {
        self.last_index() - self.first_index() + 1
    }
}

/// Checks mode consistency, detection ranges and strictly increasing indices.
pub fn validate_stream(frames: Vec<FrameRecord>, mode: Mode) -> Result<ValidatedStream> {
    if frames.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut warnings = Vec::new();
    let mut previous: Option<u64> = None;
    for frame in &frames {
        let idx = frame.frame_index;
        if let Some(prev) = previous {
            if idx <= prev {
                return Err(Error::NonMonotonicIndex {
                    previous: prev,
                    found: idx,
                });
            }
            if idx > prev + 1 {
                warnings.push(GapWarning {
                    first_missing: prev + 1,
                    missing: idx - prev - 1,
                });
            }
        }
        previous = Some(idx);

        if !frame.boxes.is_empty() && !frame.poses.is_empty() {
            return Err(Error::MixedMode { frame_index: idx });
        }
        match mode {
            Mode::Box if !frame.poses.is_empty() => {
                return Err(Error::ModeMismatch {
                    frame_index: idx,
                    expected: Mode::Box,
                    found: Mode::Pose,
                })
            }
            Mode::Pose if !frame.boxes.is_empty() => {
                return Err(Error::ModeMismatch {
                    frame_index: idx,
                    expected: Mode::Pose,
                    found: Mode::Box,
                })
            }
            _ => {}
        }
        for det in &frame.boxes {
            det.check()?;
        }
        for (i, pose) in frame.poses.iter().enumerate() {
            if let Some(area) = pose.skeleton_area {
                if !area.is_finite() || area < 0.0 {
                    return Err(Error::InvalidArea(area));
                }
            }
            if frame.poses[..i]
                .iter()
                .any(|p| p.person_index == pose.person_index)
            {
                return Err(Error::DuplicatePerson {
                    frame_index: idx,
                    person_index: pose.person_index,
                });
            }
        }
    }
    Ok(ValidatedStream {
        mode,
        frames,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn playing(conf: f64) -> LabeledDetection {
        LabeledDetection::new(Label::Playing, conf).unwrap()
    }

    #[test]
    fn well_formed_box_stream_has_no_warnings() {
        let frames = (0..3).map(|i| FrameRecord::boxes(i, vec![playing(0.9)])).collect();
        let stream = validate_stream(frames, Mode::Box).unwrap();
        assert_eq!(stream.frames().len(), 3);
        assert!(stream.warnings().is_empty());
    }

    #[test]
    fn gap_yields_one_warning() {
        let frames = vec![FrameRecord::boxes(0, vec![]), FrameRecord::boxes(2, vec![])];
        let stream = validate_stream(frames, Mode::Box).unwrap();
        assert_eq!(
            stream.warnings(),
            &[GapWarning {
                first_missing: 1,
                missing: 1
            }]
        );
        assert_eq!(stream.span_len(), 3);
    }

    #[test]
    fn mixed_frame_is_rejected() {
        let frame = FrameRecord {
            frame_index: 0,
            boxes: vec![playing(0.5)],
            poses: vec![PoseObservation::new(0, true)],
        };
        assert_eq!(
            validate_stream(vec![frame], Mode::Box),
            Err(Error::MixedMode { frame_index: 0 })
        );
    }

    #[test]
    fn wrong_mode_and_order_errors() {
        let pose = FrameRecord::poses(4, vec![PoseObservation::new(0, true)]);
        assert!(matches!(
            validate_stream(vec![pose], Mode::Box),
            Err(Error::ModeMismatch { frame_index: 4, .. })
        ));
        let frames = vec![FrameRecord::boxes(3, vec![]), FrameRecord::boxes(3, vec![])];
        assert_eq!(
            validate_stream(frames, Mode::Box),
            Err(Error::NonMonotonicIndex {
                previous: 3,
                found: 3
            })
        );
        assert_eq!(validate_stream(vec![], Mode::Pose), Err(Error::EmptyStream));
    }

    #[test]
    fn duplicate_person_is_rejected() {
        let frame = FrameRecord::poses(
            0,
            vec![PoseObservation::new(1, true), PoseObservation::new(1, false)],
        );
        assert!(matches!(
            validate_stream(vec![frame], Mode::Pose),
            Err(Error::DuplicatePerson { person_index: 1, .. })
        ));
    }

    #[test]
    fn detection_ranges() {
        assert!(LabeledDetection::new(Label::Playing, 1.7).is_err());
        assert!(LabeledDetection::new(Label::Playing, -0.1).is_err());
        assert!(LabeledDetection::new(Label::Playing, f64::NAN).is_err());
        let bad = BBox {
            x: 0.0,
            y: 0.0,
            w: -1.0,
            h: 2.0,
        };
        assert_eq!(playing(0.3).with_bbox(bad), Err(Error::InvalidBBox));
    }

    #[test]
    fn segment_and_fps_basics() {
        assert!(TimeSegment::new(1.0, 1.0).is_err());
        assert!(TimeSegment::new(-1.0, 1.0).is_err());
        let fps = Fps::new(30000, 1001).unwrap();
        assert_eq!(fps.seconds_to_frame(fps.frames_to_seconds(107_892)), 107_892);
        assert!(Fps::new(0, 1).is_err());
        assert_eq!(Fps::integer(25).unwrap().frames_to_seconds(30), 1.2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn sequence_constructor_rejects_overlaps(
            raw in prop::collection::vec((0.0f64..100.0, 0.01f64..10.0), 0..20)
        ) {
            let segs: Vec<TimeSegment> = raw
                .iter()
                .map(|&(s, d)| TimeSegment::new(s, s + d).unwrap())
                .collect();
            let ordered_disjoint = segs
                .windows(2)
                .all(|w| w[0].end_s() <= w[1].start_s());
            let built = TimeSequence::new(segs.clone());
            prop_assert_eq!(built.is_ok(), ordered_disjoint);
            if let Ok(seq) = built {
                for w in seq.segments().windows(2) {
                    prop_assert!(w[0].end_s() <= w[1].start_s());
                }
            }
        }

        #[test]
        fn frame_round_trip(num in 1u32..120_000, den in 1u32..2000, frame in 0u64..10_000_000) {
            let fps = Fps::new(num, den).unwrap();
            prop_assert_eq!(fps.seconds_to_frame(fps.frames_to_seconds(frame)), frame);
        }
    }
}
