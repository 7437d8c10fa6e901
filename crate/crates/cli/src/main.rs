mod commands;
mod config;
mod genspec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{BitDepthArg, NyquistArg, RunConfig};

/// Frequency warping of audio signals via the analytic signal.
#[derive(Debug, Parser)]
#[command(name = "specwarp", version, about)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic test signal to a WAV file.
    Gen(GenArgs),
    /// Remap the frequency content of a WAV file.
    Warp(WarpArgs),
    /// Export the Welch power spectrum as CSV.
    Psd(PsdArgs),
    /// Export a short-time power spectrogram as CSV.
    Spectrogram(SpectrogramArgs),
    /// Warp, de-warp and compare against the original; writes a JSON report.
    Validate(ValidateArgs),
    /// Run the reference tone and sweep experiments and print a pass/fail table.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Tone,
    Sweep,
    Multitone,
    Noise,
}

#[derive(Debug, Args)]
struct GenArgs {
    kind: GenKind,
    output: PathBuf,
    /// Tone frequency in Hz.
    #[arg(long, default_value_t = 300.0)]
    freq: f64,
    /// Sweep start frequency in Hz.
    #[arg(long, default_value_t = 21.0)]
    start: f64,
    /// Sweep end frequency in Hz.
    #[arg(long, default_value_t = 480.0)]
    end: f64,
    /// Multitone component as FREQ@AMPLITUDE; repeat for more.
    #[arg(long = "tone", value_name = "F@A")]
    tones: Vec<String>,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    duration: f64,
    #[arg(long, default_value_t = 16_000.0)]
    rate: f64,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Amplitude modulation as RATE@DEPTH.
    #[arg(long, value_name = "RATE@DEPTH")]
    am: Option<String>,
    #[arg(long, value_enum, default_value = "pcm16")]
    bit_depth: BitDepthArg,
}

/// Settings shared by `warp` and `validate`.
#[derive(Debug, Args)]
struct RunArgs {
    /// Read defaults from a TOML file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generate the input instead of reading a file, e.g. "sweep:start=21,end=480".
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Sample rate for generated input, or to reinterpret a file's samples.
    #[arg(long)]
    rate: Option<f64>,
    /// Process in independent chunks of this many samples.
    #[arg(long)]
    chunk: Option<usize>,
    /// What to do with warped frequencies beyond Nyquist.
    #[arg(long, value_enum)]
    nyquist: Option<NyquistArg>,
}

#[derive(Debug, Args)]
struct WarpArgs {
    /// Warp expression in `f`, e.g. "2/3*f".
    #[arg(long)]
    warp: Option<String>,
    /// [INPUT] OUTPUT
    #[arg(num_args = 0..=2, value_name = "PATH")]
    paths: Vec<PathBuf>,
    /// Output encoding; defaults to the input's.
    #[arg(long, value_enum)]
    bit_depth: Option<BitDepthArg>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct PsdArgs {
    input: PathBuf,
    output: PathBuf,
    /// Welch segment length (power of two); default min(4096, signal length).
    #[arg(long)]
    segment: Option<usize>,
    #[arg(long, default_value_t = specwarp::spectrum::DEFAULT_OVERLAP)]
    overlap: f64,
    #[arg(long, default_value_t = 0)]
    channel: usize,
}

#[derive(Debug, Args)]
struct SpectrogramArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, default_value_t = 1024)]
    window: usize,
    #[arg(long, default_value_t = 256)]
    hop: usize,
    #[arg(long, default_value_t = 0)]
    channel: usize,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Forward warp expression, e.g. "2/3*f".
    #[arg(long)]
    warp: Option<String>,
    /// Inverse warp expression, e.g. "3/2*f".
    #[arg(long)]
    dewarp: Option<String>,
    /// [INPUT] REPORT
    #[arg(num_args = 0..=2, value_name = "PATH")]
    paths: Vec<PathBuf>,
    /// Welch segment length (power of two).
    #[arg(long)]
    segment: Option<usize>,
    /// Welch segment overlap in [0, 1).
    #[arg(long)]
    overlap: Option<f64>,
    /// Fraction of peak power bounding the reported frequency band.
    #[arg(long)]
    threshold: Option<f64>,
    /// Channel to analyse in a multichannel file.
    #[arg(long)]
    channel: Option<usize>,
    /// Also write the warped signal here.
    #[arg(long)]
    save_warped: Option<PathBuf>,
    /// Also write the de-warped signal here.
    #[arg(long)]
    save_dewarped: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct DemoArgs {
    /// Also write the results as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Split up to two positional paths into (input, output).
fn split_paths(paths: &[PathBuf]) -> (Option<PathBuf>, Option<PathBuf>) {
    match paths {
        [] => (None, None),
        [out] => (None, Some(out.clone())),
        [input, out, ..] => (Some(input.clone()), Some(out.clone())),
    }
}

impl RunArgs {
    fn into_config(self, warp: Option<String>, paths: &[PathBuf]) -> (RunConfig, Option<PathBuf>) {
        let (input, output) = split_paths(paths);
        let cfg = RunConfig {
            warp,
            input,
            gen: self.gen,
            output,
            rate: self.rate,
            chunk: self.chunk,
            nyquist: self.nyquist,
            ..Default::default()
        };
        (cfg, self.config)
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => commands::gen(args).map(|_| ExitCode::SUCCESS),
        Command::Warp(args) => {
            let (mut flags, config) = args.run.into_config(args.warp, &args.paths);
            flags.bit_depth = args.bit_depth;
            let cfg = RunConfig::resolve(flags, config.as_deref())?;
            commands::warp(&cfg).map(|_| ExitCode::SUCCESS)
        }
        Command::Psd(args) => commands::psd(args).map(|_| ExitCode::SUCCESS),
        Command::Spectrogram(args) => commands::spectrogram(args).map(|_| ExitCode::SUCCESS),
        Command::Validate(args) => {
            let (mut flags, config) = args.run.into_config(args.warp, &args.paths);
            flags.dewarp = args.dewarp;
            flags.segment = args.segment;
            flags.overlap = args.overlap;
            flags.threshold = args.threshold;
            flags.channel = args.channel;
            let cfg = RunConfig::resolve(flags, config.as_deref())?;
            commands::validate(&cfg, args.save_warped, args.save_dewarped)
                .map(|_| ExitCode::SUCCESS)
        }
        Command::Demo(args) => commands::demo(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", commands::describe(&err));
            ExitCode::FAILURE
        }
    }
}
