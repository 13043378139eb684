use std::net::{SocketAddr, ToSocketAddrs};
use std::thread::{self, JoinHandle};
use std::time::Duration;

use rand::RngCore;

use super::connection::open_shaped_connection;
use super::receiver::Receiver;
use super::stats::{digest_hex, TransferStats};
use super::tuning::SocketTuning;
use crate::error::{Error, Result};
use crate::rng::{derive_index, seeded};
use crate::segcore::SegmentationConfig;

pub const DEFAULT_FILE_BYTES: usize = 10 * 1024 * 1024;
pub const DEFAULT_REPETITIONS: usize = 10;

/// One side of a latency comparison: a payload size, an optional defense and
/// the socket settings to run it with.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub file_bytes: usize,
    pub config: Option<SegmentationConfig>,
    pub tuning: SocketTuning,
    pub repetitions: usize,
    pub payload_seed: u64,
    /// Application message size; `None` hands the whole file over as one message.
    pub message_bytes: Option<usize>,
}

impl BenchmarkSpec {
    pub fn new(config: Option<SegmentationConfig>, tuning: SocketTuning) -> Self {
        BenchmarkSpec {
            file_bytes: DEFAULT_FILE_BYTES,
            config,
            tuning,
            repetitions: DEFAULT_REPETITIONS,
            payload_seed: 0,
            message_bytes: None,
        }
    }
}

/// Seeded pseudo-random bytes (incompressible, reproducible).
pub fn payload(size: usize, seed: u64) -> Vec<u8> {
    let mut buf = vec![0u8; size];
    seeded(seed).fill_bytes(&mut buf);
    buf
}

/// Sends the payload `spec.repetitions` times to a running receiver.
///
/// Run `i` reseeds the segmenter with a value derived from the config seed
/// and `i`, so runs differ from each other but the whole series is
/// reproducible.
pub fn run_transfer_benchmark(
    addr: impl ToSocketAddrs,
    spec: &BenchmarkSpec,
) -> Result<Vec<TransferStats>> {
    if spec.repetitions == 0 {
        return Err(Error::invalid("repetitions must be at least 1"));
    }
    if spec.file_bytes == 0 {
        return Err(Error::invalid("payload must be at least 1 byte"));
    }
    let addr: SocketAddr = addr
        .to_socket_addrs()?
        .next()
        .ok_or_else(|| Error::invalid("address resolved to nothing"))?;
    let data = payload(spec.file_bytes, spec.payload_seed);
    let expected = digest_hex(&data);
    let message_bytes = spec.message_bytes.unwrap_or(data.len()).max(1);

    let mut runs = Vec::with_capacity(spec.repetitions);
    for run in 0..spec.repetitions {
        let config = spec.config.clone().map(|c| {
            let seed = derive_index(c.seed, run as u64);
            c.with_seed(seed)
        });
        let mut conn = open_shaped_connection(addr, config, spec.tuning)?;
        for message in data.chunks(message_bytes) {
            conn.shaped_send(message)?;
        }
        let stats = conn.finish().map_err(|e| match e {
            Error::Integrity(msg) => Error::Integrity(format!("run {run} discarded: {msg}")),
            other => other,
        })?;
        debug_assert_eq!(stats.checksum, expected);
        log::debug!(
            "run {run}: {} bytes in {} writes, {:.4}s",
            stats.bytes_sent,
            stats.packets_sent,
            stats.wall_time
        );
        runs.push(stats);
    }
    Ok(runs)
}

/// Binds an ephemeral loopback port and serves `connections` transfers on a
/// background thread.
pub fn spawn_loopback_receiver(
    connections: usize,
    recv_buffer: Option<usize>,
    expected_checksum: Option<String>,
) -> Result<(SocketAddr, JoinHandle<Result<Vec<TransferStats>>>)> {
    let receiver = Receiver::bind("127.0.0.1:0", recv_buffer)?;
    let addr = receiver.local_addr()?;
    let handle = thread::spawn(move || {
        (0..connections)
            .map(|_| receiver.accept_one(expected_checksum.as_deref(), Duration::from_secs(60)))
            .collect()
    });
    Ok((addr, handle))
}
