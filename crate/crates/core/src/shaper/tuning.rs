use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SEND_BUFFER: usize = 1 << 16;
pub const DEFAULT_RECEIVE_BUFFER: usize = 1 << 17;

/// Per-socket knobs that keep the kernel from merging planned chunks.
///
/// `None` leaves the OS default in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocketTuning {
    pub no_delay: bool,
    pub send_buffer_bytes: Option<usize>,
    pub receive_buffer_bytes: Option<usize>,
}

impl SocketTuning {
    pub fn shaped(send_buffer_bytes: usize, receive_buffer_bytes: usize) -> Self {
        SocketTuning {
            no_delay: true,
            send_buffer_bytes: Some(send_buffer_bytes),
            receive_buffer_bytes: Some(receive_buffer_bytes),
        }
    }

    /// System defaults everywhere: the undefended baseline.
    pub fn untuned() -> Self {
        SocketTuning {
            no_delay: false,
            send_buffer_bytes: None,
            receive_buffer_bytes: None,
        }
    }

    /// Shaping needs no-delay and a send buffer smaller than the receive buffer.
    pub fn validate(&self, shaping: bool) -> Result<()> {
        if !shaping {
            return Ok(());
        }
        if !self.no_delay {
            return Err(Error::config(
                "shaping requires no_delay; otherwise the stack coalesces planned chunks",
            ));
        }
        match (self.send_buffer_bytes, self.receive_buffer_bytes) {
            (Some(s), Some(r)) if s < r => Ok(()),
            (Some(s), Some(r)) => Err(Error::config(format!(
                "send buffer ({s}) must be smaller than receive buffer ({r}) when shaping"
            ))),
            _ => Err(Error::config(
                "shaping requires explicit send and receive buffer sizes",
            )),
        }
    }
}

impl Default for SocketTuning {
    fn default() -> Self {
        Self::shaped(DEFAULT_SEND_BUFFER, DEFAULT_RECEIVE_BUFFER)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shaping_requires_no_delay() {
        let mut t = SocketTuning::default();
        t.validate(true).unwrap();
        t.no_delay = false;
        assert!(matches!(t.validate(true), Err(Error::Config(_))));
        assert!(t.validate(false).is_ok());
    }

    #[test]
    fn shaping_requires_smaller_send_buffer() {
        assert!(SocketTuning::shaped(1 << 17, 1 << 17).validate(true).is_err());
        assert!(SocketTuning::shaped(1 << 15, 1 << 17).validate(true).is_ok());
        assert!(SocketTuning::untuned().validate(true).is_err());
    }
}
