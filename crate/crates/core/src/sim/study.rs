//! Monte-Carlo noise study: how window voting and merging turn noisy frame
//! decisions into accurate rally detections.

use alloc::vec::Vec;

use super::{corrupt_labels, derive_seed, frame_accuracy, generate_ground_truth, SimParams};
use crate::error::Result;
use crate::metrics::evaluate_sequences;
use crate::model::{EvalReport, PipelineConfig};
use crate::pipeline::segment_decisions;

/// One grid point of the study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyCell {
    pub false_negative_rate: f64,
    pub false_positive_rate: f64,
    pub window_k: usize,
    pub vote_threshold: f64,
    pub merge_gap_s: f64,
}

impl StudyCell {
    pub fn symmetric(noise: f64, window_k: usize, vote_threshold: f64, merge_gap_s: f64) -> Self {
        Self {
            false_negative_rate: noise,
            false_positive_rate: noise,
            window_k,
            vote_threshold,
            merge_gap_s,
        }
    }

    fn pipeline_config(&self, params: &SimParams) -> PipelineConfig {
        PipelineConfig {
            fps: params.fps,
            window_k: self.window_k,
            vote_threshold: self.vote_threshold,
            merge_gap_s: self.merge_gap_s,
            ..PipelineConfig::default()
        }
    }
}

/// Cartesian product of symmetric noise levels and pipeline parameters, in
/// row-major order (noise outermost).
pub fn grid(noise: &[f64], windows: &[usize], thresholds: &[f64], gaps: &[f64]) -> Vec<StudyCell> {
    let mut cells = Vec::new();
    for &e in noise {
        for &k in windows {
            for &t in thresholds {
                for &g in gaps {
                    cells.push(StudyCell::symmetric(e, k, t, g));
                }
            }
        }
    }
    cells
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub frame_accuracy: f64,
    pub report: EvalReport,
}

/// Aggregate over all trials of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSummary {
    pub cell: StudyCell,
    pub trials: usize,
    pub frame_accuracy_mean: f64,
    pub precision_mean: f64,
    pub precision_min: f64,
    pub recall_mean: f64,
    pub recall_min: f64,
    pub combined_mean: f64,
    pub combined_min: f64,
}

/// Trial `trial` of `cell`. The match layout depends only on `params.seed`
/// and `trial`, so every cell sees the same matches.
pub fn run_trial(
    params: &SimParams,
    cell: &StudyCell,
    trial: u64,
    min_coverage: f64,
) -> Result<TrialOutcome> {
    let trial_seed = derive_seed(params.seed, trial);
    let p = SimParams {
        seed: derive_seed(trial_seed, 0),
        false_negative_rate: cell.false_negative_rate,
        false_positive_rate: cell.false_positive_rate,
        ..*params
    };
    p.validate()?;
    let config = cell.pipeline_config(&p);
    config.validate()?;
    let (truth, labels) = generate_ground_truth(&p)?;
    let noisy = corrupt_labels(
        &labels,
        p.false_negative_rate,
        p.false_positive_rate,
        derive_seed(trial_seed, 1),
    );
    let (_, merged) = segment_decisions(&noisy, &config);
    Ok(TrialOutcome {
        frame_accuracy: frame_accuracy(&labels, &noisy),
        report: evaluate_sequences(&merged, &truth, min_coverage)?,
    })
}

pub fn run_cell(
    params: &SimParams,
    cell: &StudyCell,
    trials: usize,
    min_coverage: f64,
) -> Result<CellSummary> {
    let trials = trials.max(1);
    let mut acc = 0.0;
    let (mut p_sum, mut r_sum, mut c_sum) = (0.0, 0.0, 0.0);
    let (mut p_min, mut r_min, mut c_min) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for t in 0..trials {
        let out = run_trial(params, cell, t as u64, min_coverage)?;
        acc += out.frame_accuracy;
        p_sum += out.report.precision;
        r_sum += out.report.recall;
        c_sum += out.report.combined;
        p_min = p_min.min(out.report.precision);
        r_min = r_min.min(out.report.recall);
        c_min = c_min.min(out.report.combined);
    }
    let n = trials as f64;
    Ok(CellSummary {
        cell: *cell,
        trials,
        frame_accuracy_mean: acc / n,
        precision_mean: p_sum / n,
        precision_min: p_min,
        recall_mean: r_sum / n,
        recall_min: r_min,
        combined_mean: c_sum / n,
        combined_min: c_min,
    })
}

/// Runs every cell sequentially, preserving cell order.
pub fn run_noise_study(
    params: &SimParams,
    cells: &[StudyCell],
    trials: usize,
    min_coverage: f64,
) -> Result<Vec<CellSummary>> {
    cells
        .iter()
        .map(|c| run_cell(params, c, trials, min_coverage))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_cell_is_perfect() {
        let params = SimParams::default();
        for k in [1, 5, 25] {
            let s = run_cell(&params, &StudyCell::symmetric(0.0, k, 0.5, 1.0), 10, 0.5).unwrap();
            assert_eq!(s.combined_min, 1.0, "k = {k}");
            assert_eq!(s.frame_accuracy_mean, 1.0);
        }
    }

    #[test]
    fn grid_order_and_size() {
        let g = grid(&[0.1, 0.2], &[1, 25], &[0.5], &[0.0, 1.0]);
        assert_eq!(g.len(), 8);
        assert_eq!(g[0], StudyCell::symmetric(0.1, 1, 0.5, 0.0));
        assert_eq!(g[7], StudyCell::symmetric(0.2, 25, 0.5, 1.0));
    }

    #[test]
    fn study_is_deterministic() {
        let params = SimParams::default();
        let cells = grid(&[0.2], &[10], &[0.5], &[1.0]);
        assert_eq!(
            run_noise_study(&params, &cells, 5, 0.5).unwrap(),
            run_noise_study(&params, &cells, 5, 0.5).unwrap()
        );
    }
}
