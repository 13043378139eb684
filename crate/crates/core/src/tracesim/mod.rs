//! Offline defense simulation over labelled packet traces.
//!
//! Traces are read from (or written to) line-delimited files, or synthesized
//! from a device profile. The defenses then rewrite them: random
//! segmentation of each packet's payload, the random-padding baseline, and
//! cover traffic that evens out data rates between devices.

mod cover;
mod io;
mod obfuscate;
mod record;
mod synth;

pub mod presets;

pub use cover::{inject_cover_traffic, match_cover_traffic, window_volumes};
pub use io::{ingest_trace, ingest_trace_with_header, write_trace, TraceFormat};
pub use obfuscate::{dilate_trace, obfuscate_trace, pad_trace, DEFAULT_TIME_OVERHEAD};
pub use record::{
    PacketRecord, Trace, DEFAULT_MTU_FRAME, FRAME_HEADER_BYTES, PACKET_HEADER_BYTES,
};
pub use synth::{synthesize_trace, DeviceProfile, ModeSpan, SizeBin, SizeDistribution};

pub(crate) use cover::window_us;
