use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use specwarp::validation::{demo_checks, DEFAULT_SUPPORT_THRESHOLD};
use specwarp::{
    power_spectrum, read_wav_file, round_trip, spectrogram as stft, write_wav, BitDepth, Signal,
    ValidationOptions, WarpFunction,
};

use crate::config::{RunConfig, Source};
use crate::genspec::{parse_pair, GenSpec, Shape};
use crate::{DemoArgs, GenArgs, GenKind, PsdArgs, SpectrogramArgs};

/// Render an error chain on one line. Core errors already include their
/// stage annotations, so the walk stops at the first one.
pub fn describe(err: &anyhow::Error) -> String {
    let mut parts = Vec::new();
    for cause in err.chain() {
        parts.push(cause.to_string());
        if cause.is::<specwarp::Error>() {
            break;
        }
    }
    parts.join(": ")
}

struct Loaded {
    channels: Vec<Signal>,
    bit_depth: Option<BitDepth>,
    description: String,
}

fn load(cfg: &RunConfig) -> Result<Loaded> {
    match cfg.source()? {
        Source::File(path) => {
            let wav =
                read_wav_file(&path).with_context(|| format!("reading {}", path.display()))?;
            let channels = match cfg.rate {
                Some(rate) => wav
                    .channels
                    .into_iter()
                    .map(|c| c.with_sample_rate(rate))
                    .collect::<specwarp::Result<_>>()?,
                None => wav.channels,
            };
            Ok(Loaded {
                channels,
                bit_depth: Some(wav.bit_depth),
                description: path.display().to_string(),
            })
        }
        Source::Generated(spec) => Ok(Loaded {
            channels: vec![spec.build().context("generating input")?],
            bit_depth: None,
            description: format!("gen:{spec}"),
        }),
    }
}

fn read_channel(path: &Path, channel: usize) -> Result<Signal> {
    let mut wav = read_wav_file(path).with_context(|| format!("reading {}", path.display()))?;
    let count = wav.channels.len();
    if channel >= count {
        bail!(
            "channel {channel} requested but {} has {count}",
            path.display()
        );
    }
    Ok(wav.channels.swap_remove(channel))
}

fn parse_warp(text: &str, flag: &str) -> Result<WarpFunction> {
    WarpFunction::parse(text).with_context(|| format!("parsing {flag} expression `{text}`"))
}

fn write_csv<const N: usize>(
    path: &Path,
    header: [&str; N],
    rows: impl Iterator<Item = [f64; N]>,
) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn gen(args: GenArgs) -> Result<()> {
    let shape = match args.kind {
        GenKind::Tone => Shape::Tone { freq_hz: args.freq },
        GenKind::Sweep => Shape::Sweep {
            start_hz: args.start,
            end_hz: args.end,
        },
        GenKind::Multitone => {
            if args.tones.is_empty() {
                bail!("multitone needs at least one --tone F@A");
            }
            Shape::Multitone {
                components: args
                    .tones
                    .iter()
                    .map(|t| parse_pair(t))
                    .collect::<Result<_>>()?,
            }
        }
        GenKind::Noise => Shape::Noise { seed: args.seed },
    };
    let spec = GenSpec {
        shape,
        duration_s: args.duration,
        rate_hz: args.rate,
        amplitude: args.amplitude,
        am: args.am.as_deref().map(parse_pair).transpose()?,
    };
    let x = spec.build()?;
    write_wav(
        &args.output,
        std::slice::from_ref(&x),
        args.bit_depth.into(),
    )
    .with_context(|| format!("writing {}", args.output.display()))?;
    println!(
        "wrote {} ({} samples at {} Hz, {})",
        args.output.display(),
        x.len(),
        x.sample_rate_hz(),
        spec
    );
    Ok(())
}

pub fn warp(cfg: &RunConfig) -> Result<()> {
    let warp = parse_warp(cfg.require_warp()?, "--warp")?;
    let output = cfg.require_output()?;
    let input = load(cfg)?;
    let options = ValidationOptions {
        nyquist: cfg.nyquist_policy(),
        chunk_len: cfg.chunk,
        ..Default::default()
    };

    let mut out = Vec::with_capacity(input.channels.len());
    let mut clamped = 0;
    for (i, x) in input.channels.iter().enumerate() {
        let y = options
            .remap(x, &warp)
            .with_context(|| format!("warping channel {i} of {}", input.description))?;
        clamped += y.nyquist_clamped;
        out.push(y.signal);
    }
    let depth = cfg
        .bit_depth
        .map(Into::into)
        .or(input.bit_depth)
        .unwrap_or_default();
    write_wav(output, &out, depth).with_context(|| format!("writing {}", output.display()))?;

    println!(
        "wrote {} ({} channel(s), {} samples at {} Hz, warp {})",
        output.display(),
        out.len(),
        out[0].len(),
        out[0].sample_rate_hz(),
        warp
    );
    if clamped > 0 {
        eprintln!("warning: {clamped} warped frequency sample(s) clamped at Nyquist");
    }
    Ok(())
}

pub fn psd(args: PsdArgs) -> Result<()> {
    let x = read_channel(&args.input, args.channel)?;
    let segment = args
        .segment
        .unwrap_or_else(|| specwarp::spectrum::default_segment_len(x.len()));
    let ps = power_spectrum(&x, segment, args.overlap)?;
    write_csv(
        &args.output,
        ["frequency_hz", "power"],
        ps.frequencies_hz()
            .iter()
            .zip(ps.power())
            .map(|(f, p)| [*f, *p]),
    )?;
    println!(
        "wrote {} ({} bins, {} Hz spacing)",
        args.output.display(),
        ps.len(),
        ps.bin_width_hz()
    );
    Ok(())
}

pub fn spectrogram(args: SpectrogramArgs) -> Result<()> {
    let x = read_channel(&args.input, args.channel)?;
    let sg = stft(&x, args.window, args.hop)?;
    let freqs = sg.frequencies_hz();
    let rows = sg
        .times_s()
        .iter()
        .zip(sg.power())
        .flat_map(|(t, row)| freqs.iter().zip(row).map(move |(f, p)| [*t, *f, *p]));
    write_csv(&args.output, ["time_s", "frequency_hz", "power"], rows)?;
    println!(
        "wrote {} ({} frames x {} bins)",
        args.output.display(),
        sg.times_s().len(),
        freqs.len()
    );
    Ok(())
}

fn fmt_band(band: Option<(f64, f64)>) -> String {
    match band {
        Some((lo, hi)) => format!("{lo:.2} to {hi:.2} Hz"),
        None => "-".into(),
    }
}

pub fn validate(
    cfg: &RunConfig,
    save_warped: Option<PathBuf>,
    save_dewarped: Option<PathBuf>,
) -> Result<()> {
    let warp = parse_warp(cfg.require_warp()?, "--warp")?;
    let dewarp = parse_warp(
        cfg.dewarp
            .as_deref()
            .context("no de-warp expression: pass --dewarp")?,
        "--dewarp",
    )?;
    let output = cfg.require_output()?;
    let input = load(cfg)?;
    let channel = cfg.channel.unwrap_or(0);
    let Some(x) = input.channels.get(channel) else {
        bail!(
            "channel {channel} requested but {} has {}",
            input.description,
            input.channels.len()
        );
    };
    let defaults = ValidationOptions::default();
    let options = ValidationOptions {
        nyquist: cfg.nyquist_policy(),
        chunk_len: cfg.chunk,
        segment_len: cfg.segment,
        overlap: cfg.overlap.unwrap_or(defaults.overlap),
        support_threshold: cfg.threshold.unwrap_or(DEFAULT_SUPPORT_THRESHOLD),
    };

    let mut rt = round_trip(x, &warp, &dewarp, &options)?;
    rt.report.input.source = Some(input.description.clone());
    rt.report.input.channel = (input.channels.len() > 1).then_some(channel);

    for (path, signal) in [(&save_warped, &rt.warped), (&save_dewarped, &rt.dewarped)] {
        if let Some(path) = path {
            write_wav(path, std::slice::from_ref(signal), BitDepth::Float32)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let json = serde_json::to_string_pretty(&rt.report)?;
    std::fs::write(output, json + "\n").with_context(|| format!("writing {}", output.display()))?;

    let r = &rt.report;
    println!(
        "{:<10} {:>12}  band (>{} of peak)",
        "stage", "peak", options.support_threshold
    );
    for s in &r.stages {
        println!(
            "{:<10} {:>9.2} Hz  {}",
            s.stage,
            s.peak_hz,
            fmt_band(s.band_hz)
        );
    }
    println!("signal r   {:.6}", r.signal_r);
    println!("psd r      {:.6}", r.psd_r);
    if r.warnings.nyquist_clamped > 0 || r.warnings.clipped > 0 {
        eprintln!(
            "warning: {} Nyquist-clamped frequency sample(s), {} out-of-range output sample(s)",
            r.warnings.nyquist_clamped, r.warnings.clipped
        );
    }
    println!("report written to {}", output.display());
    Ok(())
}

pub fn demo(args: DemoArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let checks = demo_checks()?;
    let elapsed = started.elapsed().as_secs_f64();

    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    println!(
        "{:<width$}  {:>14}  {:<16}  result",
        "check", "measured", "target"
    );
    for c in &checks {
        println!(
            "{:<width$}  {:>14}  {:<16}  {}",
            c.name,
            c.measured,
            c.target,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!(
        "{} of {} checks passed in {elapsed:.2} s",
        checks.len() - failed,
        checks.len()
    );
    if let Some(path) = args.json {
        let json = serde_json::to_string_pretty(&checks)?;
        std::fs::write(&path, json + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
