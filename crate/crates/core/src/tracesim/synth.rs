use std::fs;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::record::{PacketRecord, Trace, FRAME_HEADER_BYTES};
use crate::error::{Error, Result};
use crate::segcore::DEFAULT_MTU;

/// A weighted frame length (bytes, header included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeBin {
    pub size: u32,
    pub weight: f64,
}

/// Frame-size histograms per direction. The share of each direction is
/// proportional to its total weight.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SizeDistribution {
    #[serde(default)]
    pub incoming: Vec<SizeBin>,
    #[serde(default)]
    pub outgoing: Vec<SizeBin>,
}

/// A span of time in which the packet rate is multiplied by `multiplier`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpan {
    /// Seconds from trace start.
    pub start: f64,
    pub end: f64,
    pub multiplier: f64,
}

/// Parameters for a synthetic device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub name: String,
    /// Packets per second outside any mode span.
    pub mean_rate: f64,
    pub size_distribution: SizeDistribution,
    #[serde(default)]
    pub mode_schedule: Vec<ModeSpan>,
    #[serde(default = "default_header")]
    pub header_bytes: u32,
}

fn default_header() -> u32 {
    FRAME_HEADER_BYTES
}

impl DeviceProfile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let profile: DeviceProfile = serde_json::from_str(&fs::read_to_string(path)?)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        let bins = || {
            self.size_distribution
                .incoming
                .iter()
                .chain(&self.size_distribution.outgoing)
        };
        if bins().next().is_none() {
            return Err(Error::config(format!("profile `{}` has an empty size distribution", self.name)));
        }
        let ceiling = DEFAULT_MTU + self.header_bytes;
        for b in bins() {
            if !(b.weight.is_finite() && b.weight > 0.0) {
                return Err(Error::config(format!(
                    "profile `{}`: weight {} must be positive and finite",
                    self.name, b.weight
                )));
            }
            if b.size == 0 || b.size > ceiling {
                return Err(Error::config(format!(
                    "profile `{}`: size {} outside [1, {ceiling}]",
                    self.name, b.size
                )));
            }
        }
        if !(self.mean_rate.is_finite() && self.mean_rate >= 0.0) {
            return Err(Error::config(format!("profile `{}`: bad rate {}", self.name, self.mean_rate)));
        }
        for span in &self.mode_schedule {
            if !(span.start < span.end && span.multiplier >= 0.0 && span.multiplier.is_finite()) {
                return Err(Error::config(format!("profile `{}`: bad mode span {span:?}", self.name)));
            }
        }
        Ok(())
    }

    fn multiplier_at(&self, t: f64) -> f64 {
        self.mode_schedule
            .iter()
            .find(|s| s.start <= t && t < s.end)
            .map_or(1.0, |s| s.multiplier)
    }

    /// Next instant after `t` where the rate may change.
    fn next_breakpoint(&self, t: f64) -> f64 {
        self.mode_schedule
            .iter()
            .flat_map(|s| [s.start, s.end])
            .filter(|&b| b > t)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Draws a trace from a piecewise-constant Poisson process.
///
/// Inter-arrival gaps are exponential at the rate in force; when a gap would
/// cross a mode boundary the clock moves to the boundary and redraws, which
/// is exact because the exponential is memoryless.
pub fn synthesize_trace<R: Rng + ?Sized>(
    profile: &DeviceProfile,
    duration_s: f64,
    rng: &mut R,
) -> Result<Trace> {
    if !(duration_s > 0.0) {
        return Err(Error::invalid("duration must be positive"));
    }
    profile.validate()?;
    let dist = &profile.size_distribution;
    let sizes: Vec<i32> = dist
        .incoming
        .iter()
        .map(|b| b.size as i32)
        .chain(dist.outgoing.iter().map(|b| -(b.size as i32)))
        .collect();
    let weights = dist.incoming.iter().chain(&dist.outgoing).map(|b| b.weight);
    let picker = WeightedIndex::new(weights).map_err(|e| Error::config(e.to_string()))?;

    let mut records = Vec::new();
    let mut t = 0.0f64;
    loop {
        let rate = profile.mean_rate * profile.multiplier_at(t);
        let boundary = profile.next_breakpoint(t).min(duration_s);
        if rate <= 0.0 {
            if boundary >= duration_s {
                break;
            }
            t = boundary;
            continue;
        }
        let gap = -(1.0 - rng.random::<f64>()).ln() / rate;
        if t + gap >= boundary {
            if boundary >= duration_s {
                break;
            }
            t = boundary;
            continue;
        }
        t += gap;
        let size = sizes[picker.sample(rng)];
        records.push(PacketRecord::new((t * 1e6) as u64, size, profile.name.clone()));
    }
    Trace::new(profile.name.clone(), profile.header_bytes, records)
}
