//! POSIX shell scripts that cut each highlight out of the source video with
//! ffmpeg and concatenate the pieces. Only text is generated here.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rallycut_core::TimeSequence;

pub const SCRIPT_VERSION: u32 = 1;

/// Single-quotes `s` for `/bin/sh`.
pub fn shell_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if c == '\'' {
            out.push_str("'\\''");
        } else {
            out.push(c);
        }
    }
    out.push('\'');
    out
}

/// `<dir>/<stem>_highlights.<ext>` next to the source.
pub fn default_output(source: &Path) -> PathBuf {
    let stem = source.file_stem().map_or_else(|| "video".into(), |s| s.to_string_lossy());
    let ext = source.extension().map_or_else(|| "mp4".into(), |s| s.to_string_lossy());
    source.with_file_name(format!("{stem}_highlights.{ext}"))
}

pub fn render_trim_script(seq: &TimeSequence, source: &Path, output: &Path) -> String {
    let mut s = String::new();
    s.push_str("#!/bin/sh\n");
    let _ = writeln!(s, "# rallycut trim script v{SCRIPT_VERSION}");
    let _ = writeln!(s, "# {} segment(s)", seq.len());
    s.push_str("set -eu\n");
    if seq.is_empty() {
        s.push_str("echo 'rallycut: no playing segments detected, nothing to trim'\n");
        return s;
    }
    let _ = writeln!(s, "SRC={}", shell_quote(&source.to_string_lossy()));
    let _ = writeln!(s, "OUT={}", shell_quote(&output.to_string_lossy()));
    s.push_str("WORK=$(mktemp -d)\n");
    s.push_str("trap 'rm -rf \"$WORK\"' EXIT\n");
    let ext = source.extension().map_or_else(|| "mp4".into(), |e| e.to_string_lossy());
    for (i, seg) in seq.iter().enumerate() {
        let _ = writeln!(
            s,
            "ffmpeg -hide_banner -loglevel error -y -ss {:.3} -i \"$SRC\" -t {:.3} -c copy \"$WORK/seg_{i:05}.{ext}\"",
            seg.start_s(),
            seg.duration()
        );
        let _ = writeln!(
            s,
            "printf \"file '%s'\\n\" \"$WORK/seg_{i:05}.{ext}\" >> \"$WORK/list.txt\""
        );
    }
    s.push_str(
        "ffmpeg -hide_banner -loglevel error -y -f concat -safe 0 -i \"$WORK/list.txt\" -c copy \"$OUT\"\n",
    );
    s
}
