use std::io::{self, Read, Write};
use std::net::{Shutdown, SocketAddr, TcpStream, ToSocketAddrs};
use std::time::Instant;

use sha2::{Digest, Sha256};
use socket2::{Domain, Protocol, SockRef, Socket, Type};

use super::stats::TransferStats;
use super::tuning::SocketTuning;
use super::ACK_LEN;
use crate::error::{Error, Result};
use crate::rng::{seeded, SimRng};
use crate::segcore::{plan_message, SegmentationConfig};

/// A connected stream that routes every message through the segmenter.
///
/// With `config == None` messages are written whole and the kernel
/// segments them as usual.
#[derive(Debug)]
pub struct ShapedConnection {
    stream: TcpStream,
    config: Option<SegmentationConfig>,
    rng: SimRng,
    stats: TransferStats,
    hasher: Sha256,
    started: Option<Instant>,
}

/// Connects to `addr` with `tuning` applied to this socket only.
pub fn open_shaped_connection(
    addr: impl ToSocketAddrs,
    config: Option<SegmentationConfig>,
    tuning: SocketTuning,
) -> Result<ShapedConnection> {
    if let Some(cfg) = &config {
        cfg.validate()?;
    }
    tuning.validate(config.is_some())?;
    let addr = resolve(addr)?;
    let socket = Socket::new(Domain::for_address(addr), Type::STREAM, Some(Protocol::TCP))
        .map_err(|e| Error::transport(0, e))?;
    apply_tuning(&socket, &tuning)?;
    socket
        .connect(&addr.into())
        .map_err(|e| Error::transport(0, e))?;
    let stream: TcpStream = socket.into();
    let seed = config.as_ref().map_or(0, |c| c.seed);
    Ok(ShapedConnection {
        stream,
        config,
        rng: seeded(seed),
        stats: TransferStats::default(),
        hasher: Sha256::new(),
        started: None,
    })
}

fn resolve(addr: impl ToSocketAddrs) -> Result<SocketAddr> {
    addr.to_socket_addrs()
        .map_err(|e| Error::transport(0, e))?
        .next()
        .ok_or_else(|| Error::invalid("address resolved to nothing"))
}

pub(crate) fn apply_tuning(socket: &Socket, tuning: &SocketTuning) -> Result<()> {
    socket.set_tcp_nodelay(tuning.no_delay)?;
    if let Some(size) = tuning.send_buffer_bytes {
        socket.set_send_buffer_size(size)?;
        check_effective("SO_SNDBUF", size, socket.send_buffer_size()?)?;
    }
    if let Some(size) = tuning.receive_buffer_bytes {
        socket.set_recv_buffer_size(size)?;
        check_effective("SO_RCVBUF", size, socket.recv_buffer_size()?)?;
    }
    Ok(())
}

// Linux reports double the requested value to account for bookkeeping.
fn check_effective(option: &'static str, requested: usize, effective: usize) -> Result<()> {
    if effective < requested {
        return Err(Error::BufferRejected {
            option,
            requested,
            effective,
        });
    }
    Ok(())
}

impl ShapedConnection {
    pub fn config(&self) -> Option<&SegmentationConfig> {
        self.config.as_ref()
    }

    pub fn stats(&self) -> &TransferStats {
        &self.stats
    }

    pub fn no_delay(&self) -> Result<bool> {
        Ok(self.stream.nodelay()?)
    }

    pub fn send_buffer_size(&self) -> Result<usize> {
        Ok(SockRef::from(&self.stream).send_buffer_size()?)
    }

    pub fn recv_buffer_size(&self) -> Result<usize> {
        Ok(SockRef::from(&self.stream).recv_buffer_size()?)
    }

    /// Plans `message` and writes each chunk with its own send call.
    ///
    /// Returns the accounting for this message alone; the connection keeps
    /// the running total.
    pub fn shaped_send(&mut self, message: &[u8]) -> Result<TransferStats> {
        if message.is_empty() {
            return Err(Error::invalid("cannot send an empty message"));
        }
        let started = Instant::now();
        self.started.get_or_insert(started);
        let lengths = match &self.config {
            Some(cfg) => plan_message(message.len(), cfg, &mut self.rng)?.lengths,
            None => vec![message.len()],
        };
        let mut delta = TransferStats::default();
        let mut offset = 0;
        for len in lengths {
            let chunk = &message[offset..offset + len];
            if let Err(e) = self.stream.write_all(chunk) {
                return Err(Error::transport(self.stats.segment_log.len(), e));
            }
            self.stats.record_chunk(len);
            delta.record_chunk(len);
            offset += len;
        }
        self.hasher.update(message);
        delta.checksum = super::stats::digest_hex(message);
        delta.wall_time = started.elapsed().as_secs_f64();
        Ok(delta)
    }

    /// Closes the write side and waits for the receiver's acknowledgement.
    ///
    /// Wall time runs from the first send to the moment the receiver confirms
    /// it has drained everything. A digest mismatch is an integrity error.
    pub fn finish(mut self) -> Result<TransferStats> {
        let chunks = self.stats.segment_log.len();
        self.stream
            .shutdown(Shutdown::Write)
            .map_err(|e| Error::transport(chunks, e))?;
        let mut ack = [0u8; ACK_LEN];
        self.stream
            .read_exact(&mut ack)
            .map_err(|e| Error::transport(chunks, e))?;
        let elapsed = self.started.map_or(0.0, |s| s.elapsed().as_secs_f64());

        let mut stats = self.stats;
        stats.wall_time = elapsed;
        stats.checksum = hex::encode(self.hasher.finalize());
        let (count, digest) = super::decode_ack(&ack);
        if count != stats.bytes_sent || digest != stats.checksum {
            return Err(Error::Integrity(format!(
                "receiver got {count} bytes with digest {digest}, sent {} bytes with digest {}",
                stats.bytes_sent, stats.checksum
            )));
        }
        Ok(stats)
    }
}

impl Write for ShapedConnection {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        if buf.is_empty() {
            return Ok(0);
        }
        self.shaped_send(buf)
            .map(|_| buf.len())
            .map_err(|e| io::Error::other(e.to_string()))
    }

    fn flush(&mut self) -> io::Result<()> {
        self.stream.flush()
    }
}
