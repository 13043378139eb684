use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segcore::DEFAULT_MTU;

/// MAC-level framing overhead observed on the captured WiFi traces.
pub const FRAME_HEADER_BYTES: u32 = 82;
/// IPv4 + TCP + Ethernet overhead used for IP-level byte accounting.
pub const PACKET_HEADER_BYTES: u32 = 54;
pub const DEFAULT_MTU_FRAME: u32 = DEFAULT_MTU + FRAME_HEADER_BYTES;

/// One observed packet. Positive sizes are incoming, negative outgoing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketRecord {
    pub timestamp_us: u64,
    pub signed_size: i32,
    #[serde(default)]
    pub covered: bool,
    pub device: String,
}

impl PacketRecord {
    pub fn new(timestamp_us: u64, signed_size: i32, device: impl Into<String>) -> Self {
        PacketRecord {
            timestamp_us,
            signed_size,
            covered: false,
            device: device.into(),
        }
    }

    pub fn size(&self) -> u32 {
        self.signed_size.unsigned_abs()
    }

    pub fn is_incoming(&self) -> bool {
        self.signed_size > 0
    }
}

/// Applies `sign` of `like` to a magnitude.
pub(crate) fn with_sign(magnitude: u32, like: i32) -> i32 {
    let m = magnitude as i32;
    if like < 0 {
        -m
    } else {
        m
    }
}

/// A device's packets in time order, plus the per-packet header size of the
/// layer they were observed at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub device: String,
    pub header_bytes: u32,
    pub records: Vec<PacketRecord>,
}

impl Trace {
    pub fn new(device: impl Into<String>, header_bytes: u32, records: Vec<PacketRecord>) -> Result<Self> {
        let trace = Trace {
            device: device.into(),
            header_bytes,
            records,
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn empty(device: impl Into<String>, header_bytes: u32) -> Self {
        Trace {
            device: device.into(),
            header_bytes,
            records: Vec::new(),
        }
    }

    pub fn frame_ceiling(&self) -> u32 {
        DEFAULT_MTU + self.header_bytes
    }

    pub fn validate(&self) -> Result<()> {
        let ceiling = self.frame_ceiling();
        let mut last = 0u64;
        for (i, r) in self.records.iter().enumerate() {
            if r.signed_size == 0 {
                return Err(Error::Validation(format!("record {i} has zero size")));
            }
            if r.size() > ceiling {
                return Err(Error::Validation(format!(
                    "record {i}: size {} exceeds frame ceiling {ceiling}",
                    r.size()
                )));
            }
            if r.timestamp_us < last {
                return Err(Error::Validation(format!(
                    "record {i}: timestamp {} precedes {last}",
                    r.timestamp_us
                )));
            }
            if r.device != self.device {
                return Err(Error::Validation(format!(
                    "record {i} belongs to `{}`, trace is `{}`",
                    r.device, self.device
                )));
            }
            last = r.timestamp_us;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Sum of frame sizes, cover included.
    pub fn total_bytes(&self) -> u64 {
        self.records.iter().map(|r| u64::from(r.size())).sum()
    }

    pub fn cover_bytes(&self) -> u64 {
        self.records
            .iter()
            .filter(|r| r.covered)
            .map(|r| u64::from(r.size()))
            .sum()
    }

    /// Frame bytes of real (non-cover) records.
    pub fn real_bytes(&self) -> u64 {
        self.total_bytes() - self.cover_bytes()
    }

    /// Payload bytes: frame size less the header, for non-cover records.
    pub fn payload_bytes(&self) -> u64 {
        self.records
            .iter()
            .filter(|r| !r.covered)
            .map(|r| u64::from(r.size().saturating_sub(self.header_bytes).max(1)))
            .sum()
    }

    /// Cover bytes as a fraction of real bytes (0 when there is no real traffic).
    pub fn cover_fraction(&self) -> f64 {
        let real = self.real_bytes();
        if real == 0 {
            0.0
        } else {
            self.cover_bytes() as f64 / real as f64
        }
    }

    /// The trace with cover records removed.
    pub fn strip_cover(&self) -> Trace {
        Trace {
            device: self.device.clone(),
            header_bytes: self.header_bytes,
            records: self.records.iter().filter(|r| !r.covered).cloned().collect(),
        }
    }

    pub fn duration_us(&self) -> u64 {
        self.records.last().map_or(0, |r| r.timestamp_us)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: u64, s: i32) -> PacketRecord {
        PacketRecord::new(t, s, "plug")
    }

    #[test]
    fn validation_catches_each_defect() {
        assert!(Trace::new("plug", 82, vec![rec(0, 130), rec(5, -66)]).is_ok());
        assert!(Trace::new("plug", 82, vec![rec(0, 0)]).is_err());
        assert!(Trace::new("plug", 82, vec![rec(5, 130), rec(4, 130)]).is_err());
        assert!(Trace::new("plug", 82, vec![rec(0, 1583)]).is_err());
        assert!(Trace::new("plug", 82, vec![rec(0, -1582)]).is_ok());
        assert!(Trace::new("bulb", 82, vec![rec(0, 130)]).is_err());
    }

    #[test]
    fn byte_accounting() {
        let mut cover = rec(3, -200);
        cover.covered = true;
        let t = Trace::new("plug", 82, vec![rec(0, 130), rec(1, -100), cover]).unwrap();
        assert_eq!(t.total_bytes(), 430);
        assert_eq!(t.cover_bytes(), 200);
        assert_eq!(t.real_bytes(), 230);
        assert_eq!(t.payload_bytes(), 48 + 18);
        assert_eq!(t.strip_cover().len(), 2);
        assert!((t.cover_fraction() - 200.0 / 230.0).abs() < 1e-12);
    }

    #[test]
    fn sign_transfer() {
        assert_eq!(with_sign(10, -3), -10);
        assert_eq!(with_sign(10, 3), 10);
    }
}
