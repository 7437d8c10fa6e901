//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Deserialize;
use specwarp::{BitDepth, NyquistPolicy, MIN_CHUNK_LEN};

use crate::genspec::GenSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NyquistArg {
    Clamp,
    Strict,
}

impl From<NyquistArg> for NyquistPolicy {
    fn from(arg: NyquistArg) -> Self {
        match arg {
            NyquistArg::Clamp => NyquistPolicy::ClampWarn,
            NyquistArg::Strict => NyquistPolicy::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitDepthArg {
    Pcm16,
    Float32,
}

impl From<BitDepthArg> for BitDepth {
    fn from(arg: BitDepthArg) -> Self {
        match arg {
            BitDepthArg::Pcm16 => BitDepth::Pcm16,
            BitDepthArg::Float32 => BitDepth::Float32,
        }
    }
}

/// Every setting a run can take. Keys match the long flag names.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub warp: Option<String>,
    pub dewarp: Option<String>,
    pub input: Option<PathBuf>,
    pub gen: Option<String>,
    pub output: Option<PathBuf>,
    pub rate: Option<f64>,
    pub chunk: Option<usize>,
    pub nyquist: Option<NyquistArg>,
    pub segment: Option<usize>,
    pub overlap: Option<f64>,
    pub threshold: Option<f64>,
    pub channel: Option<usize>,
    pub bit_depth: Option<BitDepthArg>,
}

/// Where the signal comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Generated(GenSpec),
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Start from `base` (if any) and let every field set in `self` win.
    pub fn over(self, base: Option<RunConfig>) -> RunConfig {
        let Some(base) = base else { return self };
        RunConfig {
            warp: self.warp.or(base.warp),
            dewarp: self.dewarp.or(base.dewarp),
            input: self.input.or(base.input),
            gen: self.gen.or(base.gen),
            output: self.output.or(base.output),
            rate: self.rate.or(base.rate),
            chunk: self.chunk.or(base.chunk),
            nyquist: self.nyquist.or(base.nyquist),
            segment: self.segment.or(base.segment),
            overlap: self.overlap.or(base.overlap),
            threshold: self.threshold.or(base.threshold),
            channel: self.channel.or(base.channel),
            bit_depth: self.bit_depth.or(base.bit_depth),
        }
    }

    /// Flags win over the file named by `--config`, when given.
    pub fn resolve(flags: RunConfig, config_path: Option<&Path>) -> Result<RunConfig> {
        let base = config_path.map(RunConfig::load).transpose()?;
        let cfg = flags.over(base);
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        if let Some(chunk) = self.chunk {
            if chunk < MIN_CHUNK_LEN {
                bail!("chunk length must be at least {MIN_CHUNK_LEN}, got {chunk}");
            }
        }
        if let Some(rate) = self.rate {
            if !(rate.is_finite() && rate > 0.0) {
                bail!("sample rate must be positive, got {rate}");
            }
        }
        Ok(())
    }

    pub fn source(&self) -> Result<Source> {
        match (&self.input, &self.gen) {
            (Some(path), None) => Ok(Source::File(path.clone())),
            (None, Some(spec)) => {
                let mut spec: GenSpec = spec
                    .parse()
                    .with_context(|| format!("invalid generator `{spec}`"))?;
                if let Some(rate) = self.rate {
                    spec.rate_hz = rate;
                }
                Ok(Source::Generated(spec))
            }
            (Some(_), Some(_)) => bail!("give either an input file or --gen, not both"),
            (None, None) => bail!("no input: give an input file or --gen"),
        }
    }

    pub fn require_output(&self) -> Result<&Path> {
        self.output.as_deref().context("no output path given")
    }

    pub fn require_warp(&self) -> Result<&str> {
        self.warp
            .as_deref()
            .context("no warp expression: pass --warp")
    }

    pub fn nyquist_policy(&self) -> NyquistPolicy {
        self.nyquist.map(Into::into).unwrap_or_default()
    }
}
