//! Ground-truth rally lists: one `start_s,end_s` pair per line.
//!
//! Lines starting with `#` are comments (a `# rallycut-gt v1` marker is
//! conventional), blank lines are skipped and a literal `start_s,end_s`
//! header is accepted.

use std::path::Path;

use rallycut_core::{GroundTruth, TimeSegment, TimeSequence};

use crate::error::FormatError;

pub fn parse_ground_truth(text: &str) -> Result<GroundTruth, FormatError> {
    let mut segments: Vec<TimeSegment> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') || row == "start_s,end_s" {
            continue;
        }
        let (s, e) = row
            .split_once(',')
            .ok_or_else(|| FormatError::parse(line, "expected `start_s,end_s`"))?;
        let start: f64 = s
            .trim()
            .parse()
            .map_err(|_| FormatError::parse(line, format!("bad start `{}`", s.trim())))?;
        let end: f64 = e
            .trim()
            .parse()
            .map_err(|_| FormatError::parse(line, format!("bad end `{}`", e.trim())))?;
        let seg =
            TimeSegment::new(start, end).map_err(|source| FormatError::Record { line, source })?;
        if let Some(prev) = segments.last() {
            if prev.end_s() > seg.start_s() {
                return Err(FormatError::parse(line, "rally overlaps or precedes the previous one"));
            }
        }
        segments.push(seg);
    }
    Ok(GroundTruth::new(TimeSequence::new(segments)?))
}

pub fn load_ground_truth(path: &Path) -> Result<GroundTruth, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_ground_truth(&text)
}

pub fn render_ground_truth(truth: &GroundTruth) -> String {
    let mut out = String::from("# rallycut-gt v1\nstart_s,end_s\n");
    for r in &truth.rallies {
        out.push_str(&format!("{:.3},{:.3}\n", r.start_s(), r.end_s()));
    }
    out
}
