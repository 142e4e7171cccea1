//! Evaluation reports laid out like a per-video results table: durations,
//! frame count, rally counts and P/R/C as integer percentages.

use rallycut_core::EvalReport;
use serde::Serialize;

/// `round_half_up(100 * num / den)` in exact integer arithmetic; 0 when `den == 0`.
pub fn percent_half_up(num: usize, den: usize) -> u32 {
    if den == 0 {
        return 0;
    }
    let (num, den) = (num as u128, den as u128);
    ((200 * num + den) / (2 * den)) as u32
}

/// Integer percentages for precision, recall and the combined score.
///
/// Uses the count form of the harmonic mean, `2 R_cd / (R_d + R_a)`, so
/// values on a .5 boundary round up regardless of binary floating point.
pub fn rounded_percentages(r: &EvalReport) -> (u32, u32, u32) {
    let p = percent_half_up(r.correctly_detected, r.detected);
    let rc = percent_half_up(r.correctly_detected, r.actual);
    let c = if r.correctly_detected == 0 {
        0
    } else {
        percent_half_up(2 * r.correctly_detected, r.detected + r.actual)
    };
    (p, rc, c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub name: String,
    pub duration_before_s: Option<f64>,
    pub duration_after_s: Option<f64>,
    pub frames: Option<u64>,
    pub report: EvalReport,
}

impl ReportRow {
    pub fn counts_only(name: impl Into<String>, report: EvalReport) -> Self {
        Self {
            name: name.into(),
            duration_before_s: None,
            duration_after_s: None,
            frames: None,
            report,
        }
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    name: &'a str,
    duration_before_s: Option<f64>,
    duration_after_s: Option<f64>,
    frames: Option<u64>,
    correctly_detected: usize,
    detected: usize,
    actual: usize,
    precision: f64,
    recall: f64,
    combined: f64,
    precision_pct: u32,
    recall_pct: u32,
    combined_pct: u32,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    format: &'static str,
    version: u32,
    rows: Vec<JsonRow<'a>>,
}

pub fn render_json(rows: &[ReportRow]) -> String {
    let doc = JsonReport {
        format: "rallycut-eval",
        version: 1,
        rows: rows
            .iter()
            .map(|r| {
                let (p, rc, c) = rounded_percentages(&r.report);
                JsonRow {
                    name: &r.name,
                    duration_before_s: r.duration_before_s,
                    duration_after_s: r.duration_after_s,
                    frames: r.frames,
                    correctly_detected: r.report.correctly_detected,
                    detected: r.report.detected,
                    actual: r.report.actual,
                    precision: r.report.precision,
                    recall: r.report.recall,
                    combined: r.report.combined,
                    precision_pct: p,
                    recall_pct: rc,
                    combined_pct: c,
                }
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Column-aligned plain-text table.
pub fn render_table(rows: &[ReportRow]) -> String {
    let header = [
        "video", "before_s", "after_s", "frames", "R_cd", "R_d", "R_a", "P", "R", "C",
    ];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
    for r in rows {
        let (p, rc, c) = rounded_percentages(&r.report);
        cells.push(vec![
            r.name.clone(),
            opt(r.duration_before_s.map(|d| format!("{d:.3}"))),
            opt(r.duration_after_s.map(|d| format!("{d:.3}"))),
            opt(r.frames),
            r.report.correctly_detected.to_string(),
            r.report.detected.to_string(),
            r.report.actual.to_string(),
            format!("{p}%"),
            format!("{rc}%"),
            format!("{c}%"),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|j| cells.iter().map(|row| row[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == 0 {
                    format!("{c:<w$}", w = widths[j])
                } else {
                    format!("{c:>w$}", w = widths[j])
                }
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
