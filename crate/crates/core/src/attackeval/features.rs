use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tracesim::{window_us, Trace};

pub const DEFAULT_WINDOW_S: f64 = 30.0;
pub const DEFAULT_VECTOR_LEN: usize = 200;

/// Signed packet sizes seen in one observation window, in arrival order,
/// zero-padded or truncated to a fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<i32>,
    pub label: String,
    /// Packets in the window before truncation.
    pub packets: usize,
}

/// Cuts a trace into consecutive windows and turns each non-empty one into
/// a feature vector. Cover records are kept: an observer cannot tell them apart.
pub fn extract_windows(trace: &Trace, window_s: f64, vector_len: usize) -> Result<Vec<FeatureVector>> {
    if vector_len == 0 {
        return Err(Error::invalid("feature vector length must be positive"));
    }
    let window_us = window_us(window_s)?;
    let mut out: Vec<FeatureVector> = Vec::new();
    let mut current: Option<u64> = None;
    for r in &trace.records {
        let w = r.timestamp_us / window_us;
        if current != Some(w) {
            current = Some(w);
            out.push(FeatureVector {
                values: Vec::with_capacity(vector_len),
                label: trace.device.clone(),
                packets: 0,
            });
        }
        let v = out.last_mut().expect("window opened above");
        v.packets += 1;
        if v.values.len() < vector_len {
            v.values.push(r.signed_size);
        }
    }
    for v in &mut out {
        v.values.resize(vector_len, 0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracesim::PacketRecord;

    fn trace(points: &[(u64, i32)]) -> Trace {
        let records = points
            .iter()
            .map(|&(t, s)| PacketRecord::new(t * 1_000_000, s, "plug"))
            .collect();
        Trace::new("plug", 82, records).unwrap()
    }

    #[test]
    fn pads_short_windows() {
        let v = extract_windows(&trace(&[(1, 130), (2, -66)]), 30.0, 4).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].values, vec![130, -66, 0, 0]);
        assert_eq!(v[0].packets, 2);
    }

    #[test]
    fn ninety_seconds_gives_at_most_three() {
        let pts: Vec<_> = (0..90).map(|t| (t, 100)).collect();
        let v = extract_windows(&trace(&pts), 30.0, 10).unwrap();
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn empty_windows_dropped() {
        let v = extract_windows(&trace(&[(1, 100), (95, 200)]), 30.0, 3).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].values, vec![200, 0, 0]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let t = trace(&[(1, 100)]);
        assert!(extract_windows(&t, 0.0, 4).is_err());
        assert!(extract_windows(&t, -3.0, 4).is_err());
        assert!(extract_windows(&t, 30.0, 0).is_err());
    }
}
