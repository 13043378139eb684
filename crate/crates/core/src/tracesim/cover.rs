use std::collections::BTreeMap;

use rand::Rng;

use super::record::{PacketRecord, Trace};
use crate::error::{Error, Result};

/// Pads `target`'s per-window byte volume up to `reference`'s with cover
/// records (`covered = true`).
///
/// Cover sizes are drawn from the target's own non-cover records, direction
/// included, so the cover carries the target's shape rather than the
/// reference's. In each window records are added while the next draw still
/// fits in the deficit, which leaves the volumes within one packet of each
/// other. Windows where the target already carries more are left alone.
pub fn inject_cover_traffic<R: Rng + ?Sized>(
    target: &Trace,
    reference: &Trace,
    window_s: f64,
    rng: &mut R,
) -> Result<Trace> {
    let window_us = window_us(window_s)?;
    let ref_volume = window_volumes(reference, window_us);
    let own_volume = window_volumes(target, window_us);
    let pool: Vec<i32> = target
        .records
        .iter()
        .filter(|r| !r.covered)
        .map(|r| r.signed_size)
        .collect();

    let mut cover = Vec::new();
    for (&w, &want) in &ref_volume {
        let have = own_volume.get(&w).copied().unwrap_or(0);
        if want <= have {
            continue;
        }
        if pool.is_empty() {
            return Err(Error::config(format!(
                "`{}` has no traffic to draw cover sizes from",
                target.device
            )));
        }
        let mut deficit = want - have;
        let start = w * window_us;
        loop {
            let size = pool[rng.random_range(0..pool.len())];
            let mag = u64::from(size.unsigned_abs());
            if mag > deficit {
                break;
            }
            deficit -= mag;
            cover.push(PacketRecord {
                timestamp_us: start + rng.random_range(0..window_us),
                signed_size: size,
                covered: true,
                device: target.device.clone(),
            });
        }
    }
    cover.sort_by_key(|r| r.timestamp_us);

    Ok(Trace {
        device: target.device.clone(),
        header_bytes: target.header_bytes,
        records: merge(&target.records, cover),
    })
}

/// Injects cover into both traces, each against the other's original, so
/// every window ends up at the larger of the two volumes.
pub fn match_cover_traffic<R: Rng + ?Sized>(
    a: &Trace,
    b: &Trace,
    window_s: f64,
    rng: &mut R,
) -> Result<(Trace, Trace)> {
    let a2 = inject_cover_traffic(a, b, window_s, rng)?;
    let b2 = inject_cover_traffic(b, a, window_s, rng)?;
    Ok((a2, b2))
}

/// Total frame bytes per window index, cover included.
pub fn window_volumes(trace: &Trace, window_us: u64) -> BTreeMap<u64, u64> {
    let mut out = BTreeMap::new();
    for r in &trace.records {
        *out.entry(r.timestamp_us / window_us).or_insert(0) += u64::from(r.size());
    }
    out
}

pub(crate) fn window_us(window_s: f64) -> Result<u64> {
    let us = (window_s * 1e6).round();
    if !(us.is_finite() && us >= 1.0) {
        return Err(Error::invalid(format!("window of {window_s} s is not positive")));
    }
    Ok(us as u64)
}

// Stable merge: on equal timestamps original records stay ahead of cover.
fn merge(original: &[PacketRecord], cover: Vec<PacketRecord>) -> Vec<PacketRecord> {
    let mut out = Vec::with_capacity(original.len() + cover.len());
    let mut cover = cover.into_iter().peekable();
    for r in original {
        while cover.peek().is_some_and(|c| c.timestamp_us < r.timestamp_us) {
            out.push(cover.next().expect("peeked"));
        }
        out.push(r.clone());
    }
    out.extend(cover);
    out
}
