mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::FileConfig;
use scanpath_core::harness::{
    analyze_visits, emit, generate_fixture, load_manifest, read_scanpath_csv, run_sweep, write_scanpath_csv,
    DtwScale, OutputFormat, Partition, SweepAxis, SweepOptions, ViewerReduction,
};
use scanpath_core::metrics::evaluate_pair;
use scanpath_core::saliency::{itti_koch_saliency, load_density_map, resize, resize_map, save_density_map};
use scanpath_core::{
    rollout_with_trace, validate_scanpath, DecayKind, EvalConfig, GuiImage, ImageDims, RecurrenceConfig,
    RolloutConfig, SaliencyBackend, Scanpath,
};

/// Saliency-driven scanpath prediction, evaluation and parameter sweeps.
#[derive(Parser)]
#[command(name = "scanpath", version)]
struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a saliency map for a screenshot.
    Saliency(SaliencyArgs),
    /// Predict a scanpath from a saliency map.
    Rollout(RolloutArgs),
    /// Compare a predicted scanpath with ground-truth scanpaths.
    Eval(EvalArgs),
    /// Run a one-axis parameter sweep over a dataset.
    Sweep(SweepArgs),
    /// Dataset analyses.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Write the bundled synthetic dataset.
    Fixture {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SaliencyArgs {
    /// Screenshot, or a density map with `--backend file`.
    input: PathBuf,
    /// ittikoch | file
    #[arg(long)]
    backend: Option<String>,
    /// Output map; `.png` writes 16-bit grayscale, anything else text.
    #[arg(long)]
    out: PathBuf,
    /// Output resolution WxH; defaults to the input size.
    #[arg(long)]
    size: Option<String>,
}

#[derive(Args)]
struct RolloutArgs {
    /// Saliency map (text or 16-bit PNG).
    map: PathBuf,
    /// Number of fixations to predict.
    #[arg(long)]
    n: Option<usize>,
    /// linear | gamma | full
    #[arg(long)]
    decay: Option<String>,
    /// Decay base for the gamma decay.
    #[arg(long)]
    gamma: Option<f64>,
    /// Masking radius as a fraction of the image side.
    #[arg(long)]
    radius: Option<f64>,
    /// Grid side the map is resampled to.
    #[arg(long)]
    side: Option<usize>,
    /// Scanpath CSV; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted scanpath CSV; its first viewer is used.
    pred: PathBuf,
    /// Ground-truth scanpath CSVs.
    #[arg(required = true)]
    truth: Vec<PathBuf>,
    /// Recurrence radius in normalized coordinates.
    #[arg(long)]
    rho: Option<f64>,
    /// Minimum diagonal or line length for DET and LAM.
    #[arg(long)]
    min_line_len: Option<usize>,
    /// Factor applied to DTW distances; 1 keeps normalized units.
    #[arg(long)]
    dtw_scale: Option<f64>,
    /// Pixel space of the ground truth, WxH.
    #[arg(long)]
    dims: Option<String>,
    /// Pixel space of the prediction; defaults to `--dims`.
    #[arg(long)]
    pred_dims: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Dataset manifest (JSON).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// size | aspect | gamma | radius | nfix | ior_compare
    #[arg(long)]
    axis: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Run on one thread.
    #[arg(long)]
    serial: bool,
    /// ittikoch | file
    #[arg(long)]
    backend: Option<String>,
    /// mean | min over viewers
    #[arg(long)]
    reduction: Option<String>,
    /// train | test
    #[arg(long)]
    partition: Option<String>,
    /// Recurrence radius in normalized coordinates.
    #[arg(long)]
    rho: Option<f64>,
    /// Factor applied to DTW distances; defaults to the grid side / 100.
    #[arg(long)]
    dtw_scale: Option<f64>,
    /// Number of fixations to predict.
    #[arg(long)]
    n: Option<usize>,
    /// linear | gamma | full
    #[arg(long)]
    decay: Option<String>,
    /// Decay base for the gamma decay.
    #[arg(long)]
    gamma: Option<f64>,
    /// Masking radius as a fraction of the image side.
    #[arg(long)]
    radius: Option<f64>,
    /// Grid side the map is resampled to.
    #[arg(long)]
    side: Option<usize>,
    /// Square sides for the size axis, comma separated.
    #[arg(long, value_delimiter = ',')]
    sides: Option<Vec<usize>>,
    /// Widths for the aspect axis, comma separated.
    #[arg(long, value_delimiter = ',')]
    widths: Option<Vec<usize>>,
    /// Values for the gamma axis.
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,
    /// Values for the radius axis.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Values for the fixation-count axis.
    #[arg(long, value_delimiter = ',')]
    nfix: Option<Vec<usize>>,
    /// Decay kinds compared by ior_compare.
    #[arg(long, value_delimiter = ',')]
    decay_kinds: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Visit and revisit ratios per element category.
    Visits {
        /// Dataset manifest (JSON).
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Read element boxes from `<DIR>/<image_id>.json` instead of the
        /// manifest entries.
        #[arg(long, num_args = 0..=1)]
        boxes: Option<Option<PathBuf>>,
        /// Add rows for model rollouts.
        #[arg(long)]
        predict: bool,
        /// ittikoch | file
        #[arg(long)]
        backend: Option<String>,
        /// train | test
        #[arg(long)]
        partition: Option<String>,
        /// CSV output; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Run outcome mapped to the process exit code.
enum Outcome {
    Clean,
    /// Finished, but some images failed; see the diagnostics.
    Partial,
}

fn parse<T: std::str::FromStr>(s: &str) -> anyhow::Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    Ok(s.parse::<T>()?)
}

fn parse_backend(name: &str) -> anyhow::Result<SaliencyBackend> {
    match name {
        "ittikoch" => Ok(SaliencyBackend::default()),
        "file" => Ok(SaliencyBackend::DensityFile),
        other => bail!("unknown backend {other:?} (expected ittikoch or file)"),
    }
}

fn rollout_config(
    cfg: &FileConfig,
    n: Option<usize>,
    decay: Option<&String>,
    gamma: Option<f64>,
    radius: Option<f64>,
    side: Option<usize>,
) -> anyhow::Result<RolloutConfig> {
    let d = RolloutConfig::default();
    let decay = match decay.or(cfg.decay.as_ref()) {
        Some(s) => parse::<DecayKind>(s)?,
        None => d.decay,
    };
    Ok(RolloutConfig::new(
        n.or(cfg.n).unwrap_or(d.n_fixations),
        decay,
        gamma.or(cfg.gamma).unwrap_or(d.gamma),
        radius.or(cfg.radius).unwrap_or(d.mask_radius_frac),
        side.or(cfg.side).unwrap_or(d.image_side),
    )?)
}

fn eval_config(cfg: &FileConfig, rho: Option<f64>, min_line_len: Option<usize>, dtw_scale: Option<f64>) -> anyhow::Result<EvalConfig> {
    let d = EvalConfig::default();
    Ok(EvalConfig {
        recurrence: RecurrenceConfig::new(
            rho.or(cfg.rho).unwrap_or(d.recurrence.rho),
            min_line_len.or(cfg.min_line_len).unwrap_or(d.recurrence.min_line_len),
        )?,
        dtw_scale: dtw_scale.or(cfg.dtw_scale).unwrap_or(d.dtw_scale),
    })
}

fn required<T: Clone>(flag: Option<T>, file: &Option<T>, name: &str) -> anyhow::Result<T> {
    flag.or_else(|| file.clone())
        .with_context(|| format!("--{name} is required (flag or config file)"))
}

fn cmd_saliency(a: SaliencyArgs, cfg: &FileConfig) -> anyhow::Result<Outcome> {
    let backend = parse_backend(a.backend.as_deref().or(cfg.backend.as_deref()).unwrap_or("ittikoch"))?;
    let size = a.size.or_else(|| cfg.size.clone()).map(|s| parse::<ImageDims>(&s)).transpose()?;
    let map = match backend {
        SaliencyBackend::IttiKoch(_) => {
            let mut img = GuiImage::open(&a.input)?;
            if let Some(d) = size {
                img = resize(&img, d.width, d.height)?;
            }
            itti_koch_saliency(&img)?
        }
        SaliencyBackend::DensityFile => {
            let map = load_density_map(&a.input, None, false)?;
            match size {
                Some(d) => resize_map(&map, d.width, d.height)?,
                None => map,
            }
        }
    };
    save_density_map(&map, &a.out)?;
    log::info!("wrote {}x{} map to {}", map.width(), map.height(), a.out.display());
    Ok(Outcome::Clean)
}

fn cmd_rollout(a: RolloutArgs, cfg: &FileConfig) -> anyhow::Result<Outcome> {
    let rc = rollout_config(cfg, a.n, a.decay.as_ref(), a.gamma, a.radius, a.side)?;
    let map = load_density_map(&a.map, Some((rc.image_side, rc.image_side)), true)?;
    let trace = rollout_with_trace(&map, &rc)?;
    if trace.fallback_steps > 0 {
        log::warn!("{} steps fell back to the unsuppressed map", trace.fallback_steps);
    }
    let dims = ImageDims::new(map.width(), map.height())?;
    match a.out {
        Some(path) => {
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_scanpath_csv(file, &[trace.scanpath], dims)?;
        }
        None => write_scanpath_csv(std::io::stdout().lock(), &[trace.scanpath], dims)?,
    }
    Ok(Outcome::Clean)
}

fn read_scanpaths(path: &Path, dims: ImageDims) -> anyhow::Result<Vec<Scanpath>> {
    let mut out = Vec::new();
    for (viewer, raw) in read_scanpath_csv(path)? {
        let v = validate_scanpath(&raw, dims)?;
        if v.clamped > 0 {
            log::warn!("{}: clamped {} fixations of viewer {viewer}", path.display(), v.clamped);
        }
        out.push(v.scanpath.with_ids("", Some(viewer)));
    }
    if out.is_empty() {
        bail!("{} contains no fixations", path.display());
    }
    Ok(out)
}

#[derive(Serialize)]
struct EvalLine<'a> {
    truth: String,
    viewer: Option<&'a str>,
    #[serde(flatten)]
    report: scanpath_core::MetricReport,
}

fn cmd_eval(a: EvalArgs, cfg: &FileConfig) -> anyhow::Result<Outcome> {
    let ec = eval_config(cfg, a.rho, a.min_line_len, a.dtw_scale)?;
    let dims: ImageDims = parse(&required(a.dims, &cfg.dims, "dims")?)?;
    let pred_dims = match a.pred_dims.or_else(|| cfg.pred_dims.clone()) {
        Some(s) => parse(&s)?,
        None => dims,
    };
    let pred = read_scanpaths(&a.pred, pred_dims)?.remove(0);
    let truths: Vec<(String, Vec<Scanpath>)> = a
        .truth
        .iter()
        .map(|p| Ok((p.display().to_string(), read_scanpaths(p, dims)?)))
        .collect::<anyhow::Result<_>>()?;
    let mut lines = Vec::new();
    for (name, sps) in &truths {
        for sp in sps {
            lines.push(EvalLine {
                truth: name.clone(),
                viewer: sp.viewer_id(),
                report: evaluate_pair(&pred, sp, &ec)?,
            });
        }
    }
    for l in &lines {
        println!("{}", serde_json::to_string(l)?);
    }
    Ok(Outcome::Clean)
}

fn cmd_sweep(a: SweepArgs, cfg: &FileConfig) -> anyhow::Result<Outcome> {
    let manifest = load_manifest(required(a.manifest, &cfg.manifest, "manifest")?)?;
    let axis: SweepAxis = parse(&required(a.axis, &cfg.axis, "axis")?)?;
    let out = required(a.out, &cfg.out, "out")?;
    let format: OutputFormat = parse(a.format.as_deref().or(cfg.format.as_deref()).unwrap_or("csv"))?;

    let mut grid = cfg.grid.clone().unwrap_or_default();
    if let Some(v) = a.sides {
        grid.image_sides = v;
    }
    if let Some(v) = a.widths {
        grid.widths_for_aspect_study = v;
    }
    if let Some(v) = a.gammas {
        grid.gammas = v;
    }
    if let Some(v) = a.radii {
        grid.radii = v;
    }
    if let Some(v) = a.nfix {
        grid.fixation_counts = v;
    }
    if let Some(v) = a.decay_kinds {
        grid.decay_kinds = v.iter().map(|s| parse(s)).collect::<anyhow::Result<_>>()?;
    }

    let opts = SweepOptions {
        base: rollout_config(cfg, a.n, a.decay.as_ref(), a.gamma, a.radius, a.side)?,
        backend: parse_backend(a.backend.as_deref().or(cfg.backend.as_deref()).unwrap_or("ittikoch"))?,
        recurrence: eval_config(cfg, a.rho, None, None)?.recurrence,
        dtw_scale: a.dtw_scale.or(cfg.dtw_scale).map_or(DtwScale::GridPercent, DtwScale::Factor),
        reduction: a
            .reduction
            .or_else(|| cfg.reduction.clone())
            .map(|s| parse::<ViewerReduction>(&s))
            .transpose()?
            .unwrap_or_default(),
        partition: a
            .partition
            .or_else(|| cfg.partition.clone())
            .map(|s| parse::<Partition>(&s))
            .transpose()?,
        parallel: !(a.serial || cfg.serial.unwrap_or(false)),
    };
    let result = run_sweep(&manifest, &grid, axis, &opts)?;
    for path in emit(&result, format, &out)? {
        log::info!("wrote {}", path.display());
    }
    let failed = result.failed_images();
    if failed > 0 {
        eprintln!("{failed} image evaluations failed; see diagnostics in {}", out.display());
        return Ok(Outcome::Partial);
    }
    Ok(Outcome::Clean)
}

fn cmd_visits(
    manifest: Option<PathBuf>,
    boxes: Option<Option<PathBuf>>,
    predict: bool,
    backend: Option<String>,
    partition: Option<String>,
    out: Option<PathBuf>,
    cfg: &FileConfig,
) -> anyhow::Result<Outcome> {
    let mut manifest = load_manifest(required(manifest, &cfg.manifest, "manifest")?)?;
    if let Some(Some(dir)) = boxes {
        for e in &mut manifest.entries {
            e.element_box_path = Some(dir.join(format!("{}.json", e.image_id)));
        }
    }
    let opts = SweepOptions {
        base: rollout_config(cfg, None, None, None, None, None)?,
        backend: parse_backend(backend.as_deref().or(cfg.backend.as_deref()).unwrap_or("ittikoch"))?,
        partition: partition
            .or_else(|| cfg.partition.clone())
            .map(|s| parse::<Partition>(&s))
            .transpose()?,
        ..SweepOptions::default()
    };
    let report = analyze_visits(&manifest, &opts, predict || cfg.predict.unwrap_or(false))?;
    let csv = report.to_csv();
    match out.or_else(|| cfg.out.clone()) {
        Some(p) => fs::write(&p, csv).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{csv}"),
    }
    let failed: Vec<_> = report
        .diagnostics
        .iter()
        .filter(|d| d.status == scanpath_core::harness::ImageStatus::Failed)
        .collect();
    for d in &failed {
        eprintln!("{}: {}", d.image_id, d.message);
    }
    Ok(if failed.is_empty() { Outcome::Clean } else { Outcome::Partial })
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Saliency(a) => cmd_saliency(a, &cfg),
        Command::Rollout(a) => cmd_rollout(a, &cfg),
        Command::Eval(a) => cmd_eval(a, &cfg),
        Command::Sweep(a) => cmd_sweep(a, &cfg),
        Command::Analyze(AnalyzeCommand::Visits {
            manifest,
            boxes,
            predict,
            backend,
            partition,
            out,
        }) => cmd_visits(manifest, boxes, predict, backend, partition, out, &cfg),
        Command::Fixture { out } => {
            let m = generate_fixture(&out)?;
            println!("{}", m.display());
            Ok(Outcome::Clean)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
