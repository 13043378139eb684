use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Accounting for one transfer, from either end of the connection.
///
/// On the sending side `segment_log` holds every write in order and
/// `packets_sent == segment_log.len()`. A receiver leaves the log empty and
/// reports the bytes it drained in `bytes_sent`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransferStats {
    pub bytes_sent: u64,
    pub packets_sent: u64,
    /// Seconds.
    pub wall_time: f64,
    pub segment_log: Vec<usize>,
    /// Hex SHA-256 of the payload.
    pub checksum: String,
}

impl TransferStats {
    pub(crate) fn record_chunk(&mut self, len: usize) {
        self.bytes_sent += len as u64;
        self.packets_sent += 1;
        self.segment_log.push(len);
    }

    pub fn is_consistent(&self) -> bool {
        self.packets_sent as usize == self.segment_log.len()
            && self.segment_log.iter().map(|&l| l as u64).sum::<u64>() == self.bytes_sent
    }
}

pub fn digest_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Mean and sample standard deviation of the wall times.
pub fn wall_time_summary(runs: &[TransferStats]) -> (f64, f64) {
    let n = runs.len() as f64;
    if runs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = runs.iter().map(|r| r.wall_time).sum::<f64>() / n;
    if runs.len() < 2 {
        return (mean, 0.0);
    }
    let var = runs.iter().map(|r| (r.wall_time - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Flags kernel coalescing: fewer packets on the wire than writes issued.
///
/// `captured_packets` comes from an external capture of the data direction.
pub fn coalescing_warning(stats: &TransferStats, captured_packets: u64) -> Option<String> {
    if captured_packets < stats.packets_sent {
        let msg = format!(
            "capture saw {captured_packets} packets for {} shaped writes; the stack merged chunks",
            stats.packets_sent
        );
        log::warn!("{msg}");
        Some(msg)
    } else {
        None
    }
}
