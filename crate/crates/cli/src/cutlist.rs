//! Cut lists: the final segments in seconds (millisecond precision) and in
//! frames.
//!
//! The tabular form is CSV with the fixed v1 header
//! `start_s,end_s,start_frame,end_frame`. The structured form is JSON with
//! explicit `format`, `version` and `fps` fields. Readers rebuild timestamps
//! from the frame columns, so a write/read cycle reproduces frame-aligned
//! sequences exactly.

use std::str::FromStr;

use rallycut_core::{Fps, TimeSegment, TimeSequence};
use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::fps::parse_fps;

pub const TABULAR_HEADER: &str = "start_s,end_s,start_frame,end_frame";
pub const STRUCTURED_FORMAT: &str = "rallycut-cutlist";
pub const STRUCTURED_VERSION: u32 = 1;

/// Half a millisecond, plus slack for decimal printing.
const SECONDS_TOLERANCE: f64 = 0.000_501;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutlistFormat {
    Structured,
    #[default]
    Tabular,
}

impl FromStr for CutlistFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structured" | "json" => Ok(Self::Structured),
            "tabular" | "csv" => Ok(Self::Tabular),
            other => Err(format!("unknown cut-list format `{other}`")),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StructuredCutlist {
    format: String,
    version: u32,
    fps: String,
    segments: Vec<StructuredSegment>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructuredSegment {
    start_s: f64,
    end_s: f64,
    start_frame: u64,
    end_frame: u64,
}

fn millis(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

pub fn render_cutlist(seq: &TimeSequence, fps: Fps, format: CutlistFormat) -> String {
    match format {
        CutlistFormat::Tabular => {
            let mut out = String::from(TABULAR_HEADER);
            out.push('\n');
            for seg in seq {
                out.push_str(&format!(
                    "{:.3},{:.3},{},{}\n",
                    seg.start_s(),
                    seg.end_s(),
                    fps.seconds_to_frame(seg.start_s()),
                    fps.seconds_to_frame(seg.end_s())
                ));
            }
            out
        }
        CutlistFormat::Structured => {
            let doc = StructuredCutlist {
                format: STRUCTURED_FORMAT.to_string(),
                version: STRUCTURED_VERSION,
                fps: fps.to_string(),
                segments: seq
                    .iter()
                    .map(|seg| StructuredSegment {
                        start_s: millis(seg.start_s()),
                        end_s: millis(seg.end_s()),
                        start_frame: fps.seconds_to_frame(seg.start_s()),
                        end_frame: fps.seconds_to_frame(seg.end_s()),
                    })
                    .collect(),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("cut list serializes");
            out.push('\n');
            out
        }
    }
}

fn rebuild(
    line: usize,
    fps: Fps,
    (start_s, end_s, start_frame, end_frame): (f64, f64, u64, u64),
) -> Result<TimeSegment, FormatError> {
    let start = fps.frames_to_seconds(start_frame);
    let end = fps.frames_to_seconds(end_frame);
    if (start - start_s).abs() > SECONDS_TOLERANCE || (end - end_s).abs() > SECONDS_TOLERANCE {
        return Err(FormatError::parse(
            line,
            format!("seconds {start_s}..{end_s} disagree with frames {start_frame}..{end_frame} at {fps} fps"),
        ));
    }
    TimeSegment::new(start, end).map_err(|source| FormatError::Record { line, source })
}

/// Reads either form. `fps` is required for tabular input; structured input
/// carries its own rate. Returns the sequence and the rate used.
pub fn parse_cutlist(text: &str, fps: Option<Fps>) -> Result<(TimeSequence, Fps), FormatError> {
    if text.trim_start().starts_with('{') {
        let doc: StructuredCutlist =
            serde_json::from_str(text).map_err(|e| FormatError::parse(e.line(), e.to_string()))?;
        if doc.format != STRUCTURED_FORMAT || doc.version != STRUCTURED_VERSION {
            return Err(FormatError::parse(
                1,
                format!("unsupported cut list {} v{}", doc.format, doc.version),
            ));
        }
        let rate = parse_fps(&doc.fps).map_err(|m| FormatError::parse(1, m))?;
        let segments = doc
            .segments
            .iter()
            .enumerate()
            .map(|(i, s)| rebuild(i + 1, rate, (s.start_s, s.end_s, s.start_frame, s.end_frame)))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok((TimeSequence::new(segments)?, rate));
    }

    let rate = fps.ok_or_else(|| FormatError::parse(1, "tabular cut lists need an explicit fps"))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TABULAR_HEADER => {}
        _ => return Err(FormatError::parse(1, format!("expected header `{TABULAR_HEADER}`"))),
    }
    let mut segments = Vec::new();
    for (i, row) in lines {
        let line = i + 1;
        let row = row.trim();
        if row.is_empty() {
            continue;
        }
        let cols: Vec<&str> = row.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(FormatError::parse(line, "expected 4 columns"));
        }
        let num = |j: usize| -> Result<f64, FormatError> {
            cols[j]
                .parse()
                .map_err(|_| FormatError::parse(line, format!("bad number `{}`", cols[j])))
        };
        let frame = |j: usize| -> Result<u64, FormatError> {
            cols[j]
                .parse()
                .map_err(|_| FormatError::parse(line, format!("bad frame `{}`", cols[j])))
        };
        segments.push(rebuild(line, rate, (num(0)?, num(1)?, frame(2)?, frame(3)?))?);
    }
    let seq = TimeSequence::new(segments)?;
    Ok((seq, rate))
}
