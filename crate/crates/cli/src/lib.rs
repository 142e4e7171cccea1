//! File formats and command-line plumbing around `rallycut-core`.
//!
//! * [`detections`]: line-delimited JSON detector records.
//! * [`ground_truth`]: `start_s,end_s` rally lists.
//! * [`cutlist`]: tabular and structured cut lists.
//! * [`script`]: shell scripts that trim and concatenate with ffmpeg.
//! * [`report`]: evaluation tables (plain text and JSON).
//! * [`study`]: delimited noise-study tables.

pub mod cutlist;
pub mod detections;
pub mod error;
pub mod fps;
pub mod ground_truth;
pub mod report;
pub mod script;
pub mod study;

pub use error::FormatError;
