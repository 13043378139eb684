use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative byte growth: (defended − undefended) / undefended.
pub fn byte_overhead(w_b: f64, d_b: f64) -> Result<f64> {
    relative(w_b, d_b, "undefended byte count")
}

/// Relative slowdown: (defended − undefended) / undefended. Negative means faster.
pub fn time_overhead(w_t: f64, d_t: f64) -> Result<f64> {
    relative(w_t, d_t, "undefended transfer time")
}

fn relative(base: f64, with: f64, what: &str) -> Result<f64> {
    if !(base.is_finite() && base > 0.0) {
        return Err(Error::invalid(format!("{what} must be positive, got {base}")));
    }
    if !with.is_finite() || with < 0.0 {
        return Err(Error::invalid(format!("defended value {with} is not a valid amount")));
    }
    Ok((with - base) / base)
}

fn byte_ratio(w_b: u64, d_b: u64) -> Result<f64> {
    if w_b == 0 {
        return Err(Error::invalid("undefended byte count must be positive"));
    }
    Ok((i128::from(d_b) - i128::from(w_b)) as f64 / w_b as f64)
}

/// Byte overhead of one defense on one device (or a total row).
///
/// `d_b` excludes cover bytes; `b_with_cover` counts them for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverheadResult {
    pub device: String,
    pub w_b: u64,
    pub d_b: u64,
    pub cover_bytes: u64,
    pub b: f64,
    pub b_with_cover: f64,
}

impl OverheadResult {
    pub fn new(device: impl Into<String>, w_b: u64, d_b: u64, cover_bytes: u64) -> Result<Self> {
        Ok(OverheadResult {
            device: device.into(),
            w_b,
            d_b,
            cover_bytes,
            b: byte_ratio(w_b, d_b)?,
            b_with_cover: byte_ratio(w_b, d_b + cover_bytes)?,
        })
    }

    /// Sums raw bytes over `rows` before dividing.
    pub fn total(rows: &[OverheadResult]) -> Result<Self> {
        let w = rows.iter().map(|r| r.w_b).sum();
        let d = rows.iter().map(|r| r.d_b).sum();
        let c = rows.iter().map(|r| r.cover_bytes).sum();
        Self::new("total", w, d, c)
    }
}

/// Latency overhead of one transfer configuration against the undefended baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeOverheadResult {
    pub label: String,
    pub w_t: f64,
    pub d_t: f64,
    pub t: f64,
    /// Mean payload writes per run, undefended and defended.
    pub w_packets: f64,
    pub d_packets: f64,
}

impl TimeOverheadResult {
    pub fn new(label: impl Into<String>, w_t: f64, d_t: f64, w_packets: f64, d_packets: f64) -> Result<Self> {
        Ok(TimeOverheadResult {
            label: label.into(),
            w_t,
            d_t,
            t: time_overhead(w_t, d_t)?,
            w_packets,
            d_packets,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_totals() {
        let seg = byte_overhead(704.6, 757.2).unwrap();
        assert!((seg - 0.0746).abs() < 1e-4);
        let pad = byte_overhead(704.6, 1084.7).unwrap();
        assert!((pad - 0.539).abs() < 1e-3);
        assert_eq!(byte_overhead(3.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn time_examples() {
        assert_eq!(time_overhead(7.5, 7.5).unwrap(), 0.0);
        assert!((time_overhead(100.0, 120.5).unwrap() - 0.205).abs() < 1e-12);
        assert_eq!(time_overhead(10.0, 5.0).unwrap(), -0.5);
    }

    #[test]
    fn zero_baseline_rejected() {
        assert!(byte_overhead(0.0, 5.0).is_err());
        assert!(time_overhead(0.0, 5.0).is_err());
        assert!(OverheadResult::new("x", 0, 10, 0).is_err());
    }

    #[test]
    fn cover_is_excluded_from_b() {
        let r = OverheadResult::new("doorbell", 1000, 1080, 3400).unwrap();
        assert!((r.b - 0.08).abs() < 1e-15);
        assert!((r.b_with_cover - r.b - 3.4).abs() < 1e-12);
    }

    #[test]
    fn totals_sum_bytes_not_percentages() {
        let rows = vec![
            OverheadResult::new("bulb", 100, 300, 0).unwrap(),
            OverheadResult::new("camera", 10_000, 10_700, 70).unwrap(),
        ];
        let t = OverheadResult::total(&rows).unwrap();
        assert_eq!((t.w_b, t.d_b, t.cover_bytes), (10_100, 11_000, 70));
        assert!((t.b - 900.0 / 10_100.0).abs() < 1e-15);
    }
}
