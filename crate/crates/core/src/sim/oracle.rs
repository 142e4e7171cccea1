//! Naive reference for voting plus merging, used to cross-check the
//! production path. Shares no code with `voting` or `merge`.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{FrameDecision, PipelineConfig, TimeSegment, TimeSequence};

/// Direct translation of the window vote and gap-merge rules: explicit
/// window lists, a per-frame coverage mask, then fixpoint merging that
/// always joins the closest qualifying pair first.
pub fn brute_force_segments(decisions: &[FrameDecision], config: &PipelineConfig) -> TimeSequence {
    let n = decisions.len();
    if n == 0 {
        return TimeSequence::empty();
    }
    let k = config.window_k;

    let mut windows: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < n {
        let end = if start + k < n { start + k } else { n };
        windows.push((start..end).collect());
        start += k;
    }

    let mut covered = vec![false; n];
    for window in &windows {
        let mut playing = 0usize;
        for &i in window {
            if decisions[i].playing {
                playing += 1;
            }
        }
        let share = playing as f64 / window.len() as f64;
        if share > config.vote_threshold {
            for &i in window {
                covered[i] = true;
            }
        }
    }

    let origin = decisions[0].frame_index;
    let mut spans: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < n {
        if covered[i] {
            let mut j = i;
            while j < n && covered[j] {
                j += 1;
            }
            spans.push((
                config.fps.frames_to_seconds(origin + i as u64),
                config.fps.frames_to_seconds(origin + j as u64),
            ));
            i = j;
        } else {
            i += 1;
        }
    }

    loop {
        let mut closest: Option<usize> = None;
        for p in 0..spans.len().saturating_sub(1) {
            let gap = spans[p + 1].0 - spans[p].1;
            if gap < config.merge_gap_s {
                let better = match closest {
                    None => true,
                    Some(q) => gap < spans[q + 1].0 - spans[q].1,
                };
                if better {
                    closest = Some(p);
                }
            }
        }
        match closest {
            Some(p) => {
                let right = spans.remove(p + 1);
                spans[p].1 = right.1;
            }
            None => break,
        }
    }

    let segments = spans
        .into_iter()
        .map(|(s, e)| TimeSegment::new(s, e).expect("non-empty span"))
        .collect();
    TimeSequence::new(segments).expect("spans are ordered")
}
