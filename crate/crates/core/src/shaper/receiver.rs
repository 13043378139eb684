use std::io::{ErrorKind, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::thread;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use socket2::{Domain, Protocol, Socket, Type};

use super::stats::TransferStats;
use crate::error::{Error, Result};

pub const DEFAULT_ACCEPT_TIMEOUT: Duration = Duration::from_secs(30);

/// Drains connections, hashes what arrives and acknowledges each transfer.
///
/// The receiver knows nothing about shaping: a segmented stream and a plain
/// one look identical at this layer.
#[derive(Debug)]
pub struct Receiver {
    listener: TcpListener,
}

impl Receiver {
    pub fn bind(addr: impl ToSocketAddrs, recv_buffer: Option<usize>) -> Result<Self> {
        let addr: SocketAddr = addr
            .to_socket_addrs()?
            .next()
            .ok_or_else(|| Error::invalid("address resolved to nothing"))?;
        let socket = Socket::new(Domain::for_address(addr), Type::STREAM, Some(Protocol::TCP))?;
        socket.set_reuse_address(true)?;
        // accepted sockets inherit the listener's receive buffer
        if let Some(size) = recv_buffer {
            socket.set_recv_buffer_size(size)?;
        }
        socket.bind(&addr.into())?;
        socket.listen(16)?;
        Ok(Receiver {
            listener: socket.into(),
        })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        Ok(self.listener.local_addr()?)
    }

    /// Accepts one connection and drains it to end-of-stream.
    pub fn accept_one(&self, expected: Option<&str>, timeout: Duration) -> Result<TransferStats> {
        let mut stream = self.accept_within(timeout)?;
        let started = Instant::now();
        let mut hasher = Sha256::new();
        let mut buf = vec![0u8; 1 << 16];
        let mut total = 0u64;
        loop {
            match stream.read(&mut buf) {
                Ok(0) => break,
                Ok(n) => {
                    hasher.update(&buf[..n]);
                    total += n as u64;
                }
                Err(e) if e.kind() == ErrorKind::Interrupted => continue,
                Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {
                    return Err(Error::Timeout("the sender to finish".into()))
                }
                Err(e) => return Err(Error::transport(0, e)),
            }
        }
        let wall_time = started.elapsed().as_secs_f64();
        let digest = hasher.finalize();
        stream
            .write_all(&super::encode_ack(total, &digest))
            .map_err(|e| Error::transport(0, e))?;
        let checksum = hex::encode(digest);
        if let Some(want) = expected {
            if !want.eq_ignore_ascii_case(&checksum) {
                return Err(Error::Integrity(format!(
                    "received digest {checksum}, expected {want}"
                )));
            }
        }
        Ok(TransferStats {
            bytes_sent: total,
            packets_sent: 0,
            wall_time,
            segment_log: Vec::new(),
            checksum,
        })
    }

    fn accept_within(&self, timeout: Duration) -> Result<TcpStream> {
        let deadline = Instant::now() + timeout;
        self.listener.set_nonblocking(true)?;
        let stream = loop {
            match self.listener.accept() {
                Ok((stream, _)) => break stream,
                Err(e) if e.kind() == ErrorKind::WouldBlock => {
                    if Instant::now() >= deadline {
                        return Err(Error::Timeout("an incoming connection".into()));
                    }
                    thread::sleep(Duration::from_millis(1));
                }
                Err(e) => return Err(e.into()),
            }
        };
        stream.set_nonblocking(false)?;
        stream.set_read_timeout(Some(timeout))?;
        Ok(stream)
    }
}

/// Binds `addr`, serves exactly one transfer and returns its accounting.
pub fn run_receiver(
    addr: impl ToSocketAddrs,
    expected_checksum: Option<&str>,
    timeout: Duration,
) -> Result<TransferStats> {
    Receiver::bind(addr, None)?.accept_one(expected_checksum, timeout)
}
