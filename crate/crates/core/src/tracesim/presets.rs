//! Synthetic stand-ins for four smart-home devices.
//!
//! Two light devices (a bulb and a plug) send small frames at a couple of
//! packets per second; two heavy devices (a camera and a doorbell) stream a
//! mix of near-MTU frames and small control frames.
//!
//! The light pair sends the same bytes per direction at the same rate, but
//! their frame sizes never coincide, so only packet sizes separate them. The
//! heavy pair differs in volume as well, which is what cover traffic is for.

use super::synth::{DeviceProfile, ModeSpan, SizeBin, SizeDistribution};
use super::record::FRAME_HEADER_BYTES;

fn bins(pairs: &[(u32, f64)]) -> Vec<SizeBin> {
    pairs
        .iter()
        .map(|&(size, weight)| SizeBin { size, weight })
        .collect()
}

fn profile(name: &str, rate: f64, incoming: &[(u32, f64)], outgoing: &[(u32, f64)]) -> DeviceProfile {
    DeviceProfile {
        name: name.into(),
        mean_rate: rate,
        size_distribution: SizeDistribution {
            incoming: bins(incoming),
            outgoing: bins(outgoing),
        },
        mode_schedule: Vec::new(),
        header_bytes: FRAME_HEADER_BYTES,
    }
}

/// Small frames at a steady rate. Incoming frames are a fixed 150 bytes.
pub fn plug() -> DeviceProfile {
    profile("plug", 2.0, &[(150, 2.0)], &[(110, 1.0), (130, 1.0)])
}

/// Same bytes per direction as the plug, carried in differently sized frames,
/// with periodic bursts of activity.
pub fn bulb() -> DeviceProfile {
    let mut p = profile("bulb", 2.0, &[(130, 1.0), (170, 1.0)], &[(120, 2.0)]);
    p.mode_schedule = (0..6)
        .map(|i| {
            let start = 300.0 + 600.0 * f64::from(i);
            ModeSpan {
                start,
                end: start + 120.0,
                multiplier: 1.5,
            }
        })
        .collect();
    p
}

/// Video frames near the MTU plus small acknowledgements.
pub fn camera() -> DeviceProfile {
    profile(
        "camera",
        12.0,
        &[(140, 2.0), (1582, 1.0)],
        &[(1582, 5.0), (1450, 1.0), (130, 1.0)],
    )
}

/// Lower-resolution video: smaller large frames, fewer of them.
pub fn doorbell() -> DeviceProfile {
    profile(
        "doorbell",
        12.0,
        &[(110, 2.0), (1100, 1.0)],
        &[(1200, 4.0), (980, 1.0), (96, 2.0)],
    )
}

pub fn low_bandwidth_pair() -> [DeviceProfile; 2] {
    [bulb(), plug()]
}

pub fn high_bandwidth_pair() -> [DeviceProfile; 2] {
    [doorbell(), camera()]
}

pub fn by_name(name: &str) -> Option<DeviceProfile> {
    match name {
        "bulb" => Some(bulb()),
        "plug" => Some(plug()),
        "camera" => Some(camera()),
        "doorbell" => Some(doorbell()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in low_bandwidth_pair().into_iter().chain(high_bandwidth_pair()) {
            p.validate().unwrap();
            assert_eq!(by_name(&p.name).unwrap(), p);
        }
    }
}
