//! Message segmentation: the random splitter, its level bands, and the two
//! reference behaviors it is compared against (plain MSS segmentation and
//! random padding).
//!
//! Everything here is a pure function of its inputs and an explicitly passed
//! random source.

mod config;
mod padding;
mod plan;

pub use config::{
    profiles, LevelBand, SegmentationConfig, DEFAULT_MSS, DEFAULT_MTU, DEFAULT_PROB,
    TCP_IP_HEADER_BYTES,
};
pub use padding::pad_packet_random;
pub use plan::{plan_default_segments, plan_message, segment_message, select_band, SegmentPlan};
