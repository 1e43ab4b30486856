//! `sonartex`: generate synthetic sonar datasets, score texture, export
//! spectrograms and self-similarity matrices.
//!
//! Exit codes: 0 success, 1 invalid arguments/config/input schema,
//! 2 runtime or I/O failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use log::{info, warn};

use sonar_texture::dsp::{log_mel, resample, SpectrogramConfig};
use sonar_texture::parallel::run_with_workers;
use sonar_texture::store::{
    config_to_toml, merge_scores, read_config, read_manifest, read_scores, read_wav, report_to_csv,
    report_to_json, summary_csv, summary_table, write_matrix_csv, write_png, ReportFormat, WavFormat,
};
use sonar_texture::synth::generate_dataset;
use sonar_texture::texture::{batch_score, score_files, self_similarity, ScoreOptions, StaTSParams};
use sonar_texture::{Error, CONFIG_SCHEMA_VERSION};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (config schema 1)");

#[derive(Parser, Debug)]
#[command(name = "sonartex", version = VERSION, about = "Synthetic sonar texture toolkit")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SONARTEX_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a dataset from a config file.
    Generate(GenerateArgs),
    /// Compute StaTS and StrTS for files or a manifest.
    Score(ScoreArgs),
    /// Export a frame self-similarity matrix.
    Ssm(SsmArgs),
    /// Export a log-mel spectrogram.
    Spectrogram(SpectrogramArgs),
    /// Merge score CSVs into a per-dataset summary.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Dataset config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples_per_class: Option<usize>,
    #[arg(long)]
    duration: Option<f64>,
    /// pcm16 or float32.
    #[arg(long)]
    wav_format: Option<String>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct ScoreArgs {
    #[arg(long, group = "source")]
    manifest: Option<PathBuf>,
    #[arg(long, group = "source", num_args = 1..)]
    input: Vec<PathBuf>,
    /// Dataset label for --input files.
    #[arg(long, default_value = "input")]
    dataset: String,
    /// Class label for --input files.
    #[arg(long, default_value = "unlabeled")]
    class: String,
    #[arg(long, default_value_t = StaTSParams::default().frame_len)]
    frame_len: usize,
    #[arg(long, default_value_t = StaTSParams::default().hop)]
    hop: usize,
    #[arg(long, default_value_t = StaTSParams::default().n_bins)]
    bins: usize,
    #[arg(long, default_value_t = StaTSParams::default().convergence_eps)]
    eps: f64,
    /// Tail mass excluded on each side when placing histogram edges.
    #[arg(long, default_value_t = StaTSParams::default().edge_quantile)]
    edge_quantile: f64,
    /// Rate inputs are resampled to before scoring.
    #[arg(long, default_value_t = 32_000)]
    sample_rate: u32,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv: one row per file; json: group means, std and counts.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args, Debug)]
struct SsmArgs {
    #[arg(long)]
    input: PathBuf,
    /// One or more outputs; `.png` writes an image, anything else CSV.
    #[arg(long, required = true, num_args = 1..)]
    out: Vec<PathBuf>,
    #[arg(long, default_value_t = 2048)]
    frame_len: usize,
    #[arg(long, default_value_t = 512)]
    hop: usize,
}

#[derive(Args, Debug)]
struct SpectrogramArgs {
    #[arg(long)]
    input: PathBuf,
    /// One or more outputs; `.png` writes an image, anything else CSV.
    /// Rows are mel bands from lowest frequency, columns are frames.
    #[arg(long, required = true, num_args = 1..)]
    out: Vec<PathBuf>,
    #[arg(long, default_value_t = SpectrogramConfig::default().window_len)]
    window_len: usize,
    #[arg(long, default_value_t = SpectrogramConfig::default().hop)]
    hop: usize,
    #[arg(long, default_value_t = SpectrogramConfig::default().n_mels)]
    n_mels: usize,
    #[arg(long, default_value_t = SpectrogramConfig::default().sample_rate_hz)]
    sample_rate: u32,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Score CSVs written by `score`.
    #[arg(long, required = true, num_args = 1..)]
    scores: Vec<PathBuf>,
    /// Also write the summary as CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_validation() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage_failure(subcommand: &str, message: String) -> Failure {
    let mut cmd = Cli::command();
    let usage = cmd
        .find_subcommand_mut(subcommand)
        .map(|c| c.render_usage().to_string())
        .unwrap_or_default();
    Failure {
        code: 1,
        message: format!("{message}\n\n{usage}"),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    if !args.config.is_file() {
        return Err(usage_failure(
            "generate",
            format!("config file `{}` not found", args.config.display()),
        ));
    }
    let loaded = read_config(&args.config)?;
    for w in &loaded.warnings {
        warn!("{w}");
    }
    let mut spec = loaded.spec;
    // flags > config file > built-in defaults
    if let Some(seed) = args.seed {
        spec.master_seed = seed;
    }
    if let Some(n) = args.samples_per_class {
        spec.samples_per_class = n;
    }
    if let Some(d) = args.duration {
        spec.duration_s = d;
    }
    if let Some(f) = &args.wav_format {
        spec.wav_format = f.parse::<WavFormat>()?;
    }
    spec.validate()?;
    info!(
        "resolved config (flags > {} > defaults):\n{}",
        args.config.display(),
        config_to_toml(&spec)
    );
    info!("writing {} files to {}", spec.total_samples(), args.out.display());
    let manifest = generate_dataset(&spec, &args.out)?;
    let text = format!(
        "files={}\nclasses={}\nsamples_per_class={}\nduration_s={}\nsample_rate_hz={}\nseed={}\nout={}\n",
        manifest.len(),
        spec.classes.len(),
        spec.samples_per_class,
        spec.duration_s,
        spec.sample_rate_hz,
        spec.master_seed,
        args.out.display()
    );
    emit(None, &text)
}

fn score(args: ScoreArgs) -> Result<(), Failure> {
    let format: ReportFormat = args.format.parse()?;
    let opts = ScoreOptions {
        stats: StaTSParams {
            frame_len: args.frame_len,
            hop: args.hop,
            n_bins: args.bins,
            convergence_eps: args.eps,
            edge_quantile: args.edge_quantile,
        },
        target_rate_hz: Some(args.sample_rate),
    };
    opts.stats.validate()?;
    if args.sample_rate == 0 {
        return Err(usage_failure("score", "--sample-rate must be positive".into()));
    }
    info!("score options: {opts:?}");
    let report = match &args.manifest {
        Some(path) => {
            let manifest = read_manifest(path)?;
            let base = path.parent().unwrap_or(Path::new("."));
            info!("scoring {} files from {}", manifest.len(), path.display());
            batch_score(&manifest, base, &opts)
        }
        None => {
            info!("scoring {} files", args.input.len());
            score_files(&args.input, &args.dataset, &args.class, &opts)
        }
    };
    for f in &report.files {
        if let Some(e) = &f.error {
            warn!("{}: {e}", f.file);
        }
    }
    let text = match format {
        ReportFormat::Csv => report_to_csv(&report)?,
        ReportFormat::Json => report_to_json(&report)?,
    };
    emit(args.out.as_deref(), &text)?;
    eprint!("{}", summary_table(&report.groups));
    if !report.files.is_empty() && report.n_failed() == report.files.len() {
        return Err(Failure {
            code: 2,
            message: format!("all {} files failed to score", report.files.len()),
        });
    }
    Ok(())
}

fn write_outputs(values: ndarray::ArrayView2<f64>, outs: &[PathBuf]) -> Result<(), Failure> {
    for out in outs {
        if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
            write_png(values, out)?;
        } else {
            write_matrix_csv(values, out)?;
        }
        info!("wrote {}", out.display());
    }
    Ok(())
}

fn ssm(args: SsmArgs) -> Result<(), Failure> {
    let signal = read_wav(&args.input)?;
    let m = self_similarity(&signal, args.frame_len, args.hop)?;
    if !m.silent_frames.is_empty() {
        warn!("{} silent frames have zero similarity", m.silent_frames.len());
    }
    write_outputs(m.values.view(), &args.out)?;
    emit(None, &format!("width={}\nheight={}\n", m.size(), m.size()))
}

fn spectrogram(args: SpectrogramArgs) -> Result<(), Failure> {
    let cfg = SpectrogramConfig {
        window_len: args.window_len,
        hop: args.hop,
        n_mels: args.n_mels,
        sample_rate_hz: args.sample_rate,
        ..SpectrogramConfig::default()
    };
    cfg.validate()?;
    let mut signal = read_wav(&args.input)?;
    if signal.sample_rate_hz() != cfg.sample_rate_hz {
        info!("resampling {} Hz -> {} Hz", signal.sample_rate_hz(), cfg.sample_rate_hz);
        signal = resample(&signal, cfg.sample_rate_hz);
    }
    let mel = log_mel(&signal, &cfg)?;
    if mel.empty_filters > 0 {
        warn!("{} mel filters cover no FFT bin", mel.empty_filters);
    }
    // image rows are mel bands from the lowest, columns are frames
    let image = mel.values.t();
    write_outputs(image, &args.out)?;
    emit(None, &format!("width={}\nheight={}\n", image.ncols(), image.nrows()))
}

fn report(args: ReportArgs) -> Result<(), Failure> {
    let tables = args
        .scores
        .iter()
        .map(|p| read_scores(p))
        .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_scores(tables);
    if merged.files.is_empty() {
        return Err(Failure {
            code: 1,
            message: "score files contain no rows".into(),
        });
    }
    if let Some(out) = &args.out {
        emit(Some(out), &summary_csv(&merged.groups)?)?;
    }
    emit(None, &summary_table(&merged.groups))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    debug_assert!(VERSION.ends_with(&format!("schema {CONFIG_SCHEMA_VERSION})")));
    if cli.workers == Some(0) {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(1);
    }
    info!("workers: {}", cli.workers.map_or("all cores".to_string(), |n| n.to_string()));
    let result = run_with_workers(cli.workers, || match cli.command {
        Command::Generate(a) => generate(a),
        Command::Score(a) => score(a),
        Command::Ssm(a) => ssm(a),
        Command::Spectrogram(a) => spectrogram(a),
        Command::Report(a) => report(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
