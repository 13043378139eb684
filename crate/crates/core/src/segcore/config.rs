use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// IPv4 + TCP headers without options.
pub const TCP_IP_HEADER_BYTES: u32 = 40;
pub const DEFAULT_MTU: u32 = 1500;
pub const DEFAULT_MSS: u32 = DEFAULT_MTU - TCP_IP_HEADER_BYTES;
pub const DEFAULT_PROB: f64 = 0.8;

/// One segmentation level: messages up to `upper_threshold` bytes are cut into
/// chunks drawn uniformly from `[min_seg, max_seg]`.
///
/// `upper_threshold == None` marks the catch-all level and must be last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBand {
    pub upper_threshold: Option<u32>,
    pub min_seg: u32,
    pub max_seg: u32,
}

impl LevelBand {
    pub fn new(upper_threshold: Option<u32>, min_seg: u32, max_seg: u32) -> Self {
        LevelBand {
            upper_threshold,
            min_seg,
            max_seg,
        }
    }

    pub fn catch_all(min_seg: u32, max_seg: u32) -> Self {
        Self::new(None, min_seg, max_seg)
    }

    pub fn contains(&self, msg_len: usize) -> bool {
        match self.upper_threshold {
            Some(t) => msg_len <= t as usize,
            None => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationConfig {
    #[serde(default = "default_prob")]
    pub prob: f64,
    pub bands: Vec<LevelBand>,
    #[serde(default = "default_mss")]
    pub mss: u32,
    #[serde(default = "default_mtu")]
    pub mtu: u32,
    #[serde(default)]
    pub seed: u64,
}

fn default_prob() -> f64 {
    DEFAULT_PROB
}

fn default_mss() -> u32 {
    DEFAULT_MSS
}

fn default_mtu() -> u32 {
    DEFAULT_MTU
}

impl SegmentationConfig {
    /// Builds and validates a config with the default MSS/MTU and seed 0.
    pub fn new(prob: f64, bands: Vec<LevelBand>) -> Result<Self> {
        let cfg = SegmentationConfig {
            prob,
            bands,
            mss: DEFAULT_MSS,
            mtu: DEFAULT_MTU,
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_prob(mut self, prob: f64) -> Result<Self> {
        self.prob = prob;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Largest payload one IP packet carries without fragmentation.
    pub fn payload_capacity(&self) -> u32 {
        self.mtu.saturating_sub(TCP_IP_HEADER_BYTES)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.prob) {
            return Err(Error::config(format!(
                "segmentation probability {} outside [0, 1]",
                self.prob
            )));
        }
        if self.bands.is_empty() {
            return Err(Error::config("at least one level band is required"));
        }
        let cap = self.payload_capacity();
        if self.mss == 0 || self.mss > cap {
            return Err(Error::config(format!(
                "mss {} must be in [1, {cap}] for mtu {}",
                self.mss, self.mtu
            )));
        }
        let last = self.bands.len() - 1;
        let mut prev: Option<u32> = None;
        for (i, band) in self.bands.iter().enumerate() {
            if band.min_seg == 0 || band.min_seg > band.max_seg {
                return Err(Error::config(format!(
                    "band {i}: need 0 < min_seg <= max_seg, got [{}, {}]",
                    band.min_seg, band.max_seg
                )));
            }
            if band.max_seg > cap {
                return Err(Error::config(format!(
                    "band {i}: max_seg {} exceeds payload capacity {cap}",
                    band.max_seg
                )));
            }
            match (band.upper_threshold, i == last) {
                (None, true) => {}
                (None, false) => {
                    return Err(Error::config(format!(
                        "band {i}: only the last band may omit upper_threshold"
                    )))
                }
                (Some(_), true) => {
                    return Err(Error::config(
                        "the last band must be the catch-all (upper_threshold = null)",
                    ))
                }
                (Some(t), false) => {
                    if prev.is_some_and(|p| t <= p) {
                        return Err(Error::config(format!(
                            "band {i}: upper_threshold {t} not strictly increasing"
                        )));
                    }
                    prev = Some(t);
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SegmentationConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Named presets.
///
/// `low-bandwidth` and `high-bandwidth` are the device-class settings used for
/// trace simulation (one band of 5..=20 bytes; three levels for heavy
/// devices). `rand-low` and `rand-high` are the two file-transfer intensities,
/// sharing a 1400-byte ceiling and always segmenting.
pub mod profiles {
    use super::*;

    pub const NAMES: [&str; 4] = ["low-bandwidth", "high-bandwidth", "rand-low", "rand-high"];

    pub fn low_bandwidth() -> SegmentationConfig {
        SegmentationConfig::new(DEFAULT_PROB, vec![LevelBand::catch_all(5, 20)])
            .expect("preset is valid")
    }

    pub fn high_bandwidth() -> SegmentationConfig {
        SegmentationConfig::new(
            DEFAULT_PROB,
            vec![
                LevelBand::new(Some(200), 20, 40),
                LevelBand::new(Some(500), 100, 300),
                LevelBand::catch_all(500, 1000),
            ],
        )
        .expect("preset is valid")
    }

    pub fn rand_low() -> SegmentationConfig {
        SegmentationConfig::new(1.0, vec![LevelBand::catch_all(1200, 1400)]).expect("preset is valid")
    }

    pub fn rand_high() -> SegmentationConfig {
        SegmentationConfig::new(1.0, vec![LevelBand::catch_all(100, 1400)]).expect("preset is valid")
    }

    pub fn by_name(name: &str) -> Option<SegmentationConfig> {
        match name {
            "low-bandwidth" => Some(low_bandwidth()),
            "high-bandwidth" => Some(high_bandwidth()),
            "rand-low" => Some(rand_low()),
            "rand-high" => Some(rand_high()),
            _ => None,
        }
    }

    /// Resolves a preset name, falling back to reading `name` as a JSON file.
    pub fn resolve(name: &str) -> Result<SegmentationConfig> {
        match by_name(name) {
            Some(cfg) => Ok(cfg),
            None if Path::new(name).exists() => SegmentationConfig::load(name),
            None => Err(Error::config(format!(
                "unknown profile `{name}` (expected one of {} or a JSON file)",
                NAMES.join(", ")
            ))),
        }
    }
}
