//! Line-delimited detector records, one JSON object per frame:
//!
//! ```text
//! {"frame": 0, "boxes": [{"label": "playing", "conf": 0.91, "bbox": [12, 40, 80, 200]}]}
//! {"frame": 0, "poses": [{"idx": 0, "playing": true, "area": 5120.0}]}
//! ```
//!
//! An optional `"v"` field carries the record format version (currently 1).
//! Unknown fields are ignored. Blank lines are skipped.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rallycut_core::{
    validate_stream, BBox, Error, FrameRecord, Label, LabeledDetection, Mode, PoseObservation,
    ValidatedStream,
};
use serde::{Deserialize, Serialize};

use crate::error::FormatError;

pub const RECORD_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum LabelField {
    Playing,
    NonPlaying,
}

#[derive(Debug, Serialize, Deserialize)]
struct BoxField {
    label: LabelField,
    conf: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bbox: Option<[f64; 4]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PoseField {
    idx: u32,
    playing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    area: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RecordLine {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<u32>,
    frame: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boxes: Option<Vec<BoxField>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poses: Option<Vec<PoseField>>,
}

fn decode(line: usize, rec: RecordLine) -> Result<FrameRecord, FormatError> {
    if let Some(v) = rec.v {
        if v != RECORD_VERSION {
            return Err(FormatError::parse(line, format!("unsupported record version {v}")));
        }
    }
    let mut boxes = Vec::new();
    for (i, b) in rec.boxes.unwrap_or_default().into_iter().enumerate() {
        if !(0.0..=1.0).contains(&b.conf) {
            return Err(FormatError::parse(
                line,
                format!("field `boxes[{i}].conf`: {} is outside [0, 1]", b.conf),
            ));
        }
        let label = match b.label {
            LabelField::Playing => Label::Playing,
            LabelField::NonPlaying => Label::NonPlaying,
        };
        let mut det = LabeledDetection::new(label, b.conf).map_err(|source| FormatError::Record {
            line,
            source,
        })?;
        if let Some([x, y, w, h]) = b.bbox {
            det = det.with_bbox(BBox { x, y, w, h }).map_err(|_| {
                FormatError::parse(line, format!("field `boxes[{i}].bbox`: negative extent"))
            })?;
        }
        boxes.push(det);
    }
    let mut poses = Vec::new();
    for (i, p) in rec.poses.unwrap_or_default().into_iter().enumerate() {
        let mut obs = PoseObservation::new(p.idx, p.playing);
        if let Some(area) = p.area {
            if !area.is_finite() || area < 0.0 {
                return Err(FormatError::parse(
                    line,
                    format!("field `poses[{i}].area`: {area} must be non-negative"),
                ));
            }
            obs = obs.with_area(area);
        }
        poses.push(obs);
    }
    Ok(FrameRecord {
        frame_index: rec.frame,
        boxes,
        poses,
    })
}

/// Parses and validates a stream from any buffered reader.
pub fn read_detection_stream<R: BufRead>(reader: R, mode: Mode) -> Result<ValidatedStream, FormatError> {
    let mut frames: Vec<FrameRecord> = Vec::new();
    for (i, text) in reader.lines().enumerate() {
        let line = i + 1;
        let text = text.map_err(|e| FormatError::parse(line, e.to_string()))?;
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let rec: RecordLine =
            serde_json::from_str(text).map_err(|e| FormatError::parse(line, e.to_string()))?;
        let frame = decode(line, rec)?;
        if let Some(prev) = frames.last() {
            if frame.frame_index <= prev.frame_index {
                return Err(FormatError::Record {
                    line,
                    source: Error::NonMonotonicIndex {
                        previous: prev.frame_index,
                        found: frame.frame_index,
                    },
                });
            }
        }
        // Single-record validation attaches the line number to mode errors.
        validate_stream(vec![frame.clone()], mode)
            .map_err(|source| FormatError::Record { line, source })?;
        frames.push(frame);
    }
    Ok(validate_stream(frames, mode)?)
}

pub fn load_detection_stream(path: &Path, mode: Mode) -> Result<ValidatedStream, FormatError> {
    let file = File::open(path).map_err(|e| FormatError::io(path, e))?;
    read_detection_stream(BufReader::new(file), mode)
}

/// Serializes frames in the same line format.
pub fn write_detection_stream<W: Write>(mut out: W, frames: &[FrameRecord]) -> std::io::Result<()> {
    for f in frames {
        let rec = RecordLine {
            v: None,
            frame: f.frame_index,
            boxes: (!f.boxes.is_empty()).then(|| {
                f.boxes
                    .iter()
                    .map(|d| BoxField {
                        label: match d.label {
                            Label::Playing => LabelField::Playing,
                            Label::NonPlaying => LabelField::NonPlaying,
                        },
                        conf: d.confidence,
                        bbox: d.bbox.map(|b| [b.x, b.y, b.w, b.h]),
                    })
                    .collect()
            }),
            poses: (!f.poses.is_empty()).then(|| {
                f.poses
                    .iter()
                    .map(|p| PoseField {
                        idx: p.person_index,
                        playing: p.playing,
                        area: p.skeleton_area,
                    })
                    .collect()
            }),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
