use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rallycut::cutlist::{parse_cutlist, render_cutlist, CutlistFormat};
use rallycut::detections::load_detection_stream;
use rallycut::fps::parse_fps;
use rallycut::ground_truth::load_ground_truth;
use rallycut::report::{render_json, render_table, ReportRow};
use rallycut::script::{default_output, render_trim_script};
use rallycut::study::{parse_study, render_study, render_study_table, run_study_parallel};
use rallycut_core::metrics::{evaluate_sequences, DEFAULT_MIN_COVERAGE};
use rallycut_core::sim::{grid, SimParams};
use rallycut_core::{
    compression_ratio, evaluate, run_pipeline, Fps, GroundTruth, HighlightResult, Mode,
    PipelineConfig, PoseOrdering,
};

#[derive(Parser, Debug)]
#[command(name = "rallycut", version, about = "Clip rally highlights from per-frame detector output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Box,
    Pose,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PoseOrderArg {
    Input,
    Area,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Structured,
    Tabular,
}

impl From<FormatArg> for CutlistFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Structured => CutlistFormat::Structured,
            FormatArg::Tabular => CutlistFormat::Tabular,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run fusion, voting and merging on one or more detection streams.
    Clip(ClipArgs),
    /// Score rally counts or a cut list against ground truth.
    Eval(EvalArgs),
    /// Run the synthetic noise study.
    Simulate(SimulateArgs),
    /// Print a study table written by `simulate`.
    Report { path: PathBuf },
}

#[derive(clap::Args, Debug)]
struct ClipArgs {
    /// Line-delimited detection files, one per video.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "box")]
    mode: ModeArg,
    /// Frame rate, e.g. 25, 30000/1001 or 29.97.
    #[arg(long, value_parser = parse_fps)]
    fps: Fps,
    #[arg(long, default_value_t = 25)]
    window: usize,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Gaps shorter than this many seconds are merged.
    #[arg(long, default_value_t = 1.0)]
    merge_gap: f64,
    #[arg(long, value_enum, default_value = "input")]
    pose_order: PoseOrderArg,
    #[arg(long, default_value_t = 2)]
    players: usize,
    /// Ground-truth rallies; give once per input, in the same order.
    #[arg(long)]
    gt: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MIN_COVERAGE)]
    min_coverage: f64,
    #[arg(long)]
    emit_cutlist: Option<PathBuf>,
    #[arg(long)]
    emit_script: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tabular")]
    format: FormatArg,
    /// Source video referenced by the trim script; once per input.
    #[arg(long)]
    source_video: Vec<PathBuf>,
    /// Write the evaluation report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct EvalArgs {
    /// Rally counts `R_cd,R_d,R_a`; repeatable.
    #[arg(long, value_parser = parse_counts)]
    counts: Vec<(usize, usize, usize)>,
    /// Cut list to score (requires --gt).
    #[arg(long, requires = "gt")]
    detected: Option<PathBuf>,
    #[arg(long)]
    gt: Option<PathBuf>,
    /// Needed for tabular cut lists.
    #[arg(long, value_parser = parse_fps)]
    fps: Option<Fps>,
    #[arg(long, default_value_t = DEFAULT_MIN_COVERAGE)]
    min_coverage: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.3")]
    noise: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,25")]
    window: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    threshold: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    merge_gap: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 20)]
    rallies: usize,
    #[arg(long, value_parser = parse_range, default_value = "3,15")]
    rally_len: (f64, f64),
    #[arg(long, value_parser = parse_range, default_value = "5,30")]
    break_len: (f64, f64),
    #[arg(long, value_parser = parse_fps, default_value = "25")]
    fps: Fps,
    #[arg(long, default_value_t = 0x5EED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_COVERAGE)]
    min_coverage: f64,
    /// Write the study table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_counts(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b, c] => {
            let p = |x: &str| x.parse::<usize>().map_err(|_| format!("bad count `{x}`"));
            Ok((p(a)?, p(b)?, p(c)?))
        }
        _ => Err(format!("expected R_cd,R_d,R_a, got `{s}`")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected MIN,MAX, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number `{x}`"));
    Ok((p(a)?, p(b)?))
}

/// With several inputs, `cut.csv` becomes `cut.<stem>.csv`.
fn per_video_path(base: &Path, input: &Path, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    let stem = input.file_stem().map_or_else(|| "video".into(), |s| s.to_string_lossy());
    let base_stem = base.file_stem().map_or_else(|| "out".into(), |s| s.to_string_lossy());
    let name = match base.extension() {
        Some(ext) => format!("{base_stem}.{stem}.{}", ext.to_string_lossy()),
        None => format!("{base_stem}.{stem}"),
    };
    base.with_file_name(name)
}

fn clip_one(input: &Path, gt: Option<&Path>, config: &PipelineConfig, min_coverage: f64) -> Result<HighlightResult> {
    let stream = load_detection_stream(input, config.mode)
        .with_context(|| format!("reading {}", input.display()))?;
    for w in stream.warnings() {
        eprintln!(
            "warning: {}: {} missing frame(s) from index {}, treated as non-playing",
            input.display(),
            w.missing,
            w.first_missing
        );
    }
    let truth: Option<GroundTruth> = gt
        .map(|p| load_ground_truth(p).with_context(|| format!("reading {}", p.display())))
        .transpose()?;
    let result = run_pipeline(&stream, config, truth.as_ref(), min_coverage)?;
    Ok(result)
}

fn cmd_clip(args: ClipArgs) -> Result<()> {
    let config = PipelineConfig {
        mode: match args.mode {
            ModeArg::Box => Mode::Box,
            ModeArg::Pose => Mode::Pose,
        },
        fps: args.fps,
        window_k: args.window,
        vote_threshold: args.threshold,
        merge_gap_s: args.merge_gap,
        player_count: args.players,
        pose_ordering: match args.pose_order {
            PoseOrderArg::Input => PoseOrdering::InputOrder,
            PoseOrderArg::Area => PoseOrdering::AreaDescending,
        },
    };
    config.validate()?;
    ensure!(
        args.gt.is_empty() || args.gt.len() == args.inputs.len(),
        "--gt must be given once per input ({} inputs, {} --gt)",
        args.inputs.len(),
        args.gt.len()
    );
    ensure!(
        args.source_video.len() <= 1 || args.source_video.len() == args.inputs.len(),
        "--source-video must be given once or once per input"
    );
    let multi = args.inputs.len() > 1;

    let results: Vec<Result<HighlightResult>> = thread::scope(|scope| {
        let handles: Vec<_> = args
            .inputs
            .iter()
            .enumerate()
            .map(|(i, input)| {
                let gt = args.gt.get(i).map(PathBuf::as_path);
                let config = &config;
                scope.spawn(move || clip_one(input, gt, config, args.min_coverage))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("clip worker panicked"))
            .collect()
    });

    let mut rows = Vec::new();
    for (i, (input, result)) in args.inputs.iter().zip(results).enumerate() {
        let result = result?;
        let name = input.file_stem().map_or_else(|| format!("video {}", i + 1), |s| s.to_string_lossy().into_owned());
        let kept = compression_ratio(result.duration_before_s, result.duration_after_s).unwrap_or(0.0);
        println!(
            "{name}: {} frames ({} playing), {} initial -> {} final segment(s), {:.3} s -> {:.3} s ({:.1}% kept)",
            result.total_frames,
            result.playing_frames,
            result.initial_sequence.len(),
            result.final_sequence.len(),
            result.duration_before_s,
            result.duration_after_s,
            100.0 * kept
        );
        if let Some(path) = &args.emit_cutlist {
            let path = per_video_path(path, input, multi);
            fs::write(&path, render_cutlist(&result.final_sequence, config.fps, args.format.into()))
                .with_context(|| format!("writing {}", path.display()))?;
        }
        if let Some(path) = &args.emit_script {
            let path = per_video_path(path, input, multi);
            let source = match args.source_video.as_slice() {
                [] => input.with_extension("mp4"),
                [one] if !multi => one.clone(),
                many => many[i].clone(),
            };
            let script = render_trim_script(&result.final_sequence, &source, &default_output(&source));
            fs::write(&path, script).with_context(|| format!("writing {}", path.display()))?;
        }
        if let Some(report) = result.report {
            rows.push(ReportRow {
                name,
                duration_before_s: Some(result.duration_before_s),
                duration_after_s: Some(result.duration_after_s),
                frames: Some(result.total_frames),
                report,
            });
        }
    }
    if !rows.is_empty() {
        print!("{}", render_table(&rows));
    }
    if let Some(path) = &args.report {
        fs::write(path, render_json(&rows)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let mut rows = Vec::new();
    for (i, &(cd, d, a)) in args.counts.iter().enumerate() {
        rows.push(ReportRow::counts_only(format!("counts {}", i + 1), evaluate(cd, d, a)?));
    }
    if let (Some(det), Some(gt)) = (&args.detected, &args.gt) {
        let text = fs::read_to_string(det).with_context(|| format!("reading {}", det.display()))?;
        let (seq, _) = parse_cutlist(&text, args.fps).with_context(|| format!("reading {}", det.display()))?;
        let truth = load_ground_truth(gt).with_context(|| format!("reading {}", gt.display()))?;
        let report = evaluate_sequences(&seq, &truth, args.min_coverage)?;
        let name = det.file_stem().map_or_else(|| "detected".into(), |s| s.to_string_lossy().into_owned());
        rows.push(ReportRow::counts_only(name, report));
    }
    if rows.is_empty() {
        bail!("nothing to evaluate: pass --counts or --detected with --gt");
    }
    print!("{}", render_table(&rows));
    if let Some(path) = &args.report {
        fs::write(path, render_json(&rows)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let params = SimParams {
        n_rallies: args.rallies,
        rally_len_s: args.rally_len,
        break_len_s: args.break_len,
        fps: args.fps,
        seed: args.seed,
        ..SimParams::default()
    };
    params.validate()?;
    ensure!(args.trials >= 1, "--trials must be at least 1");
    let cells = grid(&args.noise, &args.window, &args.threshold, &args.merge_gap);
    let rows = run_study_parallel(&params, &cells, args.trials, args.min_coverage)?;
    let table = render_study(&rows);
    match &args.out {
        Some(path) => {
            fs::write(path, &table).with_context(|| format!("writing {}", path.display()))?;
            print!("{}", render_study_table(&rows));
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn cmd_report(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows = parse_study(&text).with_context(|| format!("reading {}", path.display()))?;
    print!("{}", render_study_table(&rows));
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let invariant = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<rallycut_core::Error>(), Some(rallycut_core::Error::Invariant(_))));
    if invariant {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Clip(a) => cmd_clip(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Report { path } => cmd_report(&path),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
