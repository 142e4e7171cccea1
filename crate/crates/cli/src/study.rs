//! Noise-study tables: a `# rallycut-study v1` marker, a CSV header, then
//! one row per grid cell.

use std::thread;

use rallycut_core::sim::{run_cell, CellSummary, SimParams, StudyCell};

use crate::error::FormatError;

pub const STUDY_MARKER: &str = "# rallycut-study v1";
pub const STUDY_HEADER: &str = "false_negative_rate,false_positive_rate,window_k,vote_threshold,merge_gap_s,trials,frame_accuracy_mean,precision_mean,precision_min,recall_mean,recall_min,combined_mean,combined_min";

/// Runs cells on scoped threads; output order follows `cells`.
pub fn run_study_parallel(
    params: &SimParams,
    cells: &[StudyCell],
    trials: usize,
    min_coverage: f64,
) -> Result<Vec<CellSummary>, rallycut_core::Error> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(cells.len().max(1));
    let mut results: Vec<Option<Result<CellSummary, rallycut_core::Error>>> =
        (0..cells.len()).map(|_| None).collect();
    thread::scope(|scope| {
        let chunk = cells.len().div_ceil(workers).max(1);
        for (cells, slots) in cells.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (cell, slot) in cells.iter().zip(slots) {
                    *slot = Some(run_cell(params, cell, trials, min_coverage));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every cell is filled"))
        .collect()
}

pub fn render_study(rows: &[CellSummary]) -> String {
    let mut out = format!("{STUDY_MARKER}\n{STUDY_HEADER}\n");
    for r in rows {
        let c = &r.cell;
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            c.false_negative_rate,
            c.false_positive_rate,
            c.window_k,
            c.vote_threshold,
            c.merge_gap_s,
            r.trials,
            r.frame_accuracy_mean,
            r.precision_mean,
            r.precision_min,
            r.recall_mean,
            r.recall_min,
            r.combined_mean,
            r.combined_min
        ));
    }
    out
}

pub fn parse_study(text: &str) -> Result<Vec<CellSummary>, FormatError> {
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        if row.starts_with('#') {
            if row.starts_with("# rallycut-study") && row != STUDY_MARKER {
                return Err(FormatError::parse(line, format!("unsupported study version `{row}`")));
            }
            continue;
        }
        if !seen_header {
            if row != STUDY_HEADER {
                return Err(FormatError::parse(line, "unexpected study header"));
            }
            seen_header = true;
            continue;
        }
        let cols: Vec<&str> = row.split(',').collect();
        if cols.len() != 13 {
            return Err(FormatError::parse(line, format!("expected 13 columns, found {}", cols.len())));
        }
        let f = |j: usize| -> Result<f64, FormatError> {
            cols[j]
                .trim()
                .parse()
                .map_err(|_| FormatError::parse(line, format!("bad number `{}`", cols[j])))
        };
        let u = |j: usize| -> Result<usize, FormatError> {
            cols[j]
                .trim()
                .parse()
                .map_err(|_| FormatError::parse(line, format!("bad integer `{}`", cols[j])))
        };
        rows.push(CellSummary {
            cell: StudyCell {
                false_negative_rate: f(0)?,
                false_positive_rate: f(1)?,
                window_k: u(2)?,
                vote_threshold: f(3)?,
                merge_gap_s: f(4)?,
            },
            trials: u(5)?,
            frame_accuracy_mean: f(6)?,
            precision_mean: f(7)?,
            precision_min: f(8)?,
            recall_mean: f(9)?,
            recall_min: f(10)?,
            combined_mean: f(11)?,
            combined_min: f(12)?,
        });
    }
    if !seen_header {
        return Err(FormatError::parse(1, "missing study header"));
    }
    Ok(rows)
}

/// Aligned summary of a study, one line per cell.
pub fn render_study_table(rows: &[CellSummary]) -> String {
    let mut out = format!(
        "{:>6} {:>6} {:>5} {:>6} {:>6} {:>6} {:>9} {:>7} {:>7} {:>7} {:>7}\n",
        "e_fn", "e_fp", "k", "Pr_c", "dt_s", "trials", "frame_acc", "P", "R", "C", "C_min"
    );
    for r in rows {
        let c = &r.cell;
        out.push_str(&format!(
            "{:>6.3} {:>6.3} {:>5} {:>6.2} {:>6.2} {:>6} {:>8.1}% {:>6.1}% {:>6.1}% {:>6.1}% {:>6.1}%\n",
            c.false_negative_rate,
            c.false_positive_rate,
            c.window_k,
            c.vote_threshold,
            c.merge_gap_s,
            r.trials,
            100.0 * r.frame_accuracy_mean,
            100.0 * r.precision_mean,
            100.0 * r.recall_mean,
            100.0 * r.combined_mean,
            100.0 * r.combined_min
        ));
    }
    out
}
