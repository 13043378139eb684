//! Packet-size obfuscation by random segmentation.
//!
//! Messages are cut into randomly sized transport segments before they reach
//! the TCP stack, so observed packet lengths stop identifying the sender. The
//! crate covers the whole loop: planning ([`segcore`]), live sockets
//! ([`shaper`]), offline trace simulation ([`tracesim`]), a random-forest
//! fingerprinting attack ([`attackeval`]) and overhead reporting
//! ([`report`]).
//!
//! ```
//! use segshield::rng::seeded;
//! use segshield::segcore::{segment_message, profiles};
//!
//! let data = vec![0u8; 4096];
//! let plan = segment_message(&data, &profiles::rand_high(), &mut seeded(1)).unwrap();
//! assert_eq!(plan.chunks(&data).map(<[u8]>::len).sum::<usize>(), 4096);
//! ```
//!
//! The guide in `book/` walks through each part; its code blocks run as
//! doc-tests of this crate.

pub mod attackeval;
pub mod error;
pub mod report;
pub mod rng;
pub mod segcore;
pub mod shaper;
pub mod tracesim;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/padding.md")]
    mod padding {}
    #[doc = include_str!("../../../book/src/live-shaping.md")]
    mod live_shaping {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/attack.md")]
    mod attack {}
    #[doc = include_str!("../../../book/src/overheads.md")]
    mod overheads {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
