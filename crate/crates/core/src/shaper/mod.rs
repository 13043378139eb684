//! Live shaped transport over TCP.
//!
//! The sender disables Nagle's algorithm and shrinks its send buffer so each
//! planned chunk leaves as its own segment, then writes chunks one send call
//! at a time. After closing its write half it waits for a 40-byte
//! acknowledgement from the receiver: the byte count (big-endian `u64`)
//! followed by the SHA-256 of everything received.

mod bench;
mod connection;
mod receiver;
mod stats;
mod tuning;

pub use bench::{
    payload, run_transfer_benchmark, spawn_loopback_receiver, BenchmarkSpec, DEFAULT_FILE_BYTES,
    DEFAULT_REPETITIONS,
};
pub use connection::{open_shaped_connection, ShapedConnection};
pub use receiver::{run_receiver, Receiver, DEFAULT_ACCEPT_TIMEOUT};
pub use stats::{coalescing_warning, digest_hex, wall_time_summary, TransferStats};
pub use tuning::{SocketTuning, DEFAULT_RECEIVE_BUFFER, DEFAULT_SEND_BUFFER};

pub(crate) const ACK_LEN: usize = 8 + 32;

pub(crate) fn encode_ack(count: u64, digest: &[u8]) -> [u8; ACK_LEN] {
    let mut ack = [0u8; ACK_LEN];
    ack[..8].copy_from_slice(&count.to_be_bytes());
    ack[8..].copy_from_slice(digest);
    ack
}

pub(crate) fn decode_ack(ack: &[u8; ACK_LEN]) -> (u64, String) {
    let count = u64::from_be_bytes(ack[..8].try_into().expect("8-byte prefix"));
    (count, hex::encode(&ack[8..]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ack_round_trips() {
        let digest = [7u8; 32];
        let (count, hex_digest) = decode_ack(&encode_ack(12345, &digest));
        assert_eq!(count, 12345);
        assert_eq!(hex_digest, hex::encode(digest));
    }
}
