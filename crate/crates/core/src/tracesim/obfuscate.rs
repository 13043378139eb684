use rand::Rng;

use super::record::{with_sign, PacketRecord, Trace};
use crate::error::{Error, Result};
use crate::segcore::{pad_packet_random, plan_message, SegmentationConfig};

pub const DEFAULT_TIME_OVERHEAD: f64 = 0.20;

/// Re-segments every packet's payload and stretches the timeline.
///
/// Each record's payload (`|size| - header_bytes`) goes through the random
/// segmenter; each chunk becomes a record of `chunk + header_bytes` bytes in
/// the same direction and at the parent's timestamp. All timestamps are then
/// scaled by `1 + time_overhead`. Payload bytes are conserved exactly.
pub fn obfuscate_trace<R: Rng + ?Sized>(
    trace: &Trace,
    config: &SegmentationConfig,
    time_overhead: f64,
    rng: &mut R,
) -> Result<Trace> {
    config.validate()?;
    check_time_overhead(time_overhead)?;
    let header = trace.header_bytes;
    if let Some(min) = trace.records.iter().map(PacketRecord::size).min() {
        if header >= min {
            return Err(Error::config(format!(
                "header of {header} bytes leaves no payload in a {min}-byte record"
            )));
        }
    }
    let scale = 1.0 + time_overhead;
    let mut records = Vec::with_capacity(trace.len() * 2);
    for r in &trace.records {
        let payload = (r.size() - header).max(1) as usize;
        let plan = plan_message(payload, config, rng)?;
        let ts = dilate(r.timestamp_us, scale);
        for len in plan.lengths {
            records.push(PacketRecord {
                timestamp_us: ts,
                signed_size: with_sign(len as u32 + header, r.signed_size),
                covered: r.covered,
                device: r.device.clone(),
            });
        }
    }
    Ok(Trace {
        device: trace.device.clone(),
        header_bytes: header,
        records,
    })
}

/// Random-padding baseline over a whole trace: each frame grows by a uniform
/// amount up to `mtu_frame`.
pub fn pad_trace<R: Rng + ?Sized>(trace: &Trace, mtu_frame: u32, rng: &mut R) -> Result<Trace> {
    let mut records = Vec::with_capacity(trace.len());
    for (i, r) in trace.records.iter().enumerate() {
        if r.size() > mtu_frame {
            return Err(Error::invalid(format!(
                "record {i}: {} bytes exceeds the {mtu_frame}-byte frame ceiling",
                r.size()
            )));
        }
        let padded = pad_packet_random(r.size() as usize, mtu_frame as usize, rng)?;
        records.push(PacketRecord {
            signed_size: with_sign(padded as u32, r.signed_size),
            ..r.clone()
        });
    }
    Ok(Trace {
        device: trace.device.clone(),
        header_bytes: trace.header_bytes,
        records,
    })
}

/// Scales all timestamps by `1 + time_overhead`.
pub fn dilate_trace(trace: &Trace, time_overhead: f64) -> Result<Trace> {
    check_time_overhead(time_overhead)?;
    let scale = 1.0 + time_overhead;
    let mut out = trace.clone();
    for r in &mut out.records {
        r.timestamp_us = dilate(r.timestamp_us, scale);
    }
    Ok(out)
}

fn check_time_overhead(time_overhead: f64) -> Result<()> {
    if !(time_overhead.is_finite() && time_overhead > -1.0) {
        return Err(Error::invalid(format!(
            "time overhead {time_overhead} must be finite and > -1"
        )));
    }
    Ok(())
}

fn dilate(ts: u64, scale: f64) -> u64 {
    (ts as f64 * scale).round() as u64
}
