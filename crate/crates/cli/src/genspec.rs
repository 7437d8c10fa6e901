//! Compact generator descriptions such as `tone:freq=300,duration=1`.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use specwarp::{generate, Signal};

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Tone { freq_hz: f64 },
    Sweep { start_hz: f64, end_hz: f64 },
    Multitone { components: Vec<(f64, f64)> },
    Noise { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub shape: Shape,
    pub duration_s: f64,
    pub rate_hz: f64,
    pub amplitude: f64,
    /// Amplitude modulation as `(rate_hz, depth)`.
    pub am: Option<(f64, f64)>,
}

impl GenSpec {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            duration_s: 1.0,
            rate_hz: 16_000.0,
            amplitude: 1.0,
            am: None,
        }
    }

    pub fn build(&self) -> Result<Signal> {
        let (d, fs, a) = (self.duration_s, self.rate_hz, self.amplitude);
        let x = match &self.shape {
            Shape::Tone { freq_hz } => generate::tone(*freq_hz, d, fs, a)?,
            Shape::Sweep { start_hz, end_hz } => {
                let unit = generate::log_sweep(*start_hz, *end_hz, d, fs)?;
                scale(unit, a)?
            }
            Shape::Multitone { components } => {
                let scaled: Vec<(f64, f64)> = components.iter().map(|(f, c)| (*f, c * a)).collect();
                generate::multitone(&scaled, d, fs)?
            }
            Shape::Noise { seed } => generate::uniform_noise(d, fs, a, *seed)?,
        };
        Ok(match self.am {
            Some((rate, depth)) => generate::amplitude_modulate(&x, rate, depth)?,
            None => x,
        })
    }
}

fn scale(x: Signal, a: f64) -> Result<Signal> {
    if a == 1.0 {
        return Ok(x);
    }
    let fs = x.sample_rate_hz();
    Ok(Signal::new(
        x.into_samples().into_iter().map(|v| v * a).collect(),
        fs,
    )?)
}

/// Parse `F@A`, e.g. `300@0.5`.
pub fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let (f, a) = text
        .split_once('@')
        .ok_or_else(|| anyhow!("expected FREQ@VALUE, got `{text}`"))?;
    Ok((parse_num(f)?, parse_num(a)?))
}

fn parse_num(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .with_context(|| format!("`{text}` is not a number"))
}

impl FromStr for GenSpec {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut shape = match kind.trim() {
            "tone" => Shape::Tone { freq_hz: 300.0 },
            "sweep" => Shape::Sweep {
                start_hz: 21.0,
                end_hz: 480.0,
            },
            "multitone" => Shape::Multitone {
                components: Vec::new(),
            },
            "noise" => Shape::Noise { seed: 0 },
            other => {
                bail!("unknown generator `{other}` (expected tone, sweep, multitone or noise)")
            }
        };
        let mut spec = GenSpec::new(shape.clone());
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value, got `{item}`"))?;
            let value = value.trim();
            match (key.trim(), &mut shape) {
                ("duration", _) => spec.duration_s = parse_num(value)?,
                ("rate", _) => spec.rate_hz = parse_num(value)?,
                ("amplitude", _) => spec.amplitude = parse_num(value)?,
                ("am", _) => spec.am = Some(parse_pair(value)?),
                ("freq", Shape::Tone { freq_hz }) => *freq_hz = parse_num(value)?,
                ("start", Shape::Sweep { start_hz, .. }) => *start_hz = parse_num(value)?,
                ("end", Shape::Sweep { end_hz, .. }) => *end_hz = parse_num(value)?,
                ("tones", Shape::Multitone { components }) => {
                    *components = value.split('+').map(parse_pair).collect::<Result<_>>()?;
                }
                ("seed", Shape::Noise { seed }) => {
                    *seed = value
                        .parse()
                        .with_context(|| format!("`{value}` is not a valid seed"))?;
                }
                (key, _) => bail!("unknown key `{key}` for generator `{kind}`"),
            }
        }
        spec.shape = shape;
        Ok(spec)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Tone { freq_hz } => write!(f, "tone:freq={freq_hz}")?,
            Shape::Sweep { start_hz, end_hz } => write!(f, "sweep:start={start_hz},end={end_hz}")?,
            Shape::Multitone { components } => {
                f.write_str("multitone:tones=")?;
                for (i, (freq, amp)) in components.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{freq}@{amp}")?;
                }
            }
            Shape::Noise { seed } => write!(f, "noise:seed={seed}")?,
        }
        write!(
            f,
            ",duration={},rate={},amplitude={}",
            self.duration_s, self.rate_hz, self.amplitude
        )?;
        if let Some((rate, depth)) = self.am {
            write!(f, ",am={rate}@{depth}")?;
        }
        Ok(())
    }
}
