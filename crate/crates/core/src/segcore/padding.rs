use rand::Rng;

use crate::error::{Error, Result};

/// Random-padding baseline: grows a packet by a uniform 1..=(space left) bytes.
///
/// A packet already at `mtu_payload` has no space and comes back unchanged.
pub fn pad_packet_random<R: Rng + ?Sized>(
    payload_len: usize,
    mtu_payload: usize,
    rng: &mut R,
) -> Result<usize> {
    if payload_len == 0 {
        return Err(Error::invalid("payload length must be at least 1 byte"));
    }
    if payload_len > mtu_payload {
        return Err(Error::invalid(format!(
            "payload {payload_len} exceeds the {mtu_payload}-byte ceiling"
        )));
    }
    let space = mtu_payload - payload_len;
    if space == 0 {
        return Ok(payload_len);
    }
    Ok(payload_len + rng.random_range(1..=space))
}
