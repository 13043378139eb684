use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{LevelBand, SegmentationConfig};
use crate::error::{Error, Result};

/// Chunk lengths for one application message, in send order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentPlan {
    pub lengths: Vec<usize>,
    /// `true` when the random split fired, `false` when the message passed through.
    pub segmented: bool,
}

impl SegmentPlan {
    fn whole(n: usize) -> Self {
        SegmentPlan {
            lengths: vec![n],
            segmented: false,
        }
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Slices `data` according to the plan. `data.len()` must equal [`Self::total`].
    pub fn chunks<'a>(&'a self, data: &'a [u8]) -> impl Iterator<Item = &'a [u8]> + 'a {
        debug_assert_eq!(data.len(), self.total());
        self.lengths.iter().scan(0usize, move |start, &len| {
            let chunk = &data[*start..*start + len];
            *start += len;
            Some(chunk)
        })
    }
}

/// What the transport does on its own: full MSS segments, remainder last.
pub fn plan_default_segments(n: usize, mss: usize) -> Result<SegmentPlan> {
    if n == 0 {
        return Err(Error::invalid("message length must be at least 1 byte"));
    }
    if mss == 0 {
        return Err(Error::invalid("mss must be at least 1 byte"));
    }
    let full = n / mss;
    let mut lengths = vec![mss; full];
    if n % mss > 0 {
        lengths.push(n % mss);
    }
    Ok(SegmentPlan {
        lengths,
        segmented: false,
    })
}

/// First band whose threshold admits `msg_len`; the catch-all band takes the rest.
pub fn select_band(msg_len: usize, config: &SegmentationConfig) -> LevelBand {
    *config
        .bands
        .iter()
        .find(|b| b.contains(msg_len))
        .or(config.bands.last())
        .expect("config has at least one band")
}

/// Randomly segments a message of `n` bytes.
///
/// A message is eligible when it is at least as long as its band's `min_seg`;
/// an eligible message is split with probability `config.prob`. Each chunk
/// length is drawn uniformly from `[min_seg, max_seg]`; once a draw reaches or
/// passes the remaining byte count, the remainder goes out as the final chunk,
/// so the final chunk lies in `[1, max_seg]`.
pub fn plan_message<R: Rng + ?Sized>(
    n: usize,
    config: &SegmentationConfig,
    rng: &mut R,
) -> Result<SegmentPlan> {
    if n == 0 {
        return Err(Error::invalid("cannot segment an empty message"));
    }
    let band = select_band(n, config);
    let (min, max) = (band.min_seg as usize, band.max_seg as usize);
    // draw < prob keeps prob = 0 and prob = 1 exact
    if n < min || rng.random::<f64>() >= config.prob {
        return Ok(SegmentPlan::whole(n));
    }
    let mut lengths = Vec::with_capacity(n / min + 1);
    let mut remaining = n;
    while remaining > 0 {
        let draw = rng.random_range(min..=max);
        let len = draw.min(remaining);
        lengths.push(len);
        remaining -= len;
    }
    Ok(SegmentPlan {
        lengths,
        segmented: true,
    })
}

pub fn segment_message<R: Rng + ?Sized>(
    data: &[u8],
    config: &SegmentationConfig,
    rng: &mut R,
) -> Result<SegmentPlan> {
    plan_message(data.len(), config, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::segcore::profiles;
    use crate::segcore::LevelBand;

    #[test]
    fn default_segments_follow_mss() {
        assert_eq!(
            plan_default_segments(3500, 1500).unwrap().lengths,
            vec![1500, 1500, 500]
        );
        assert_eq!(plan_default_segments(1500, 1500).unwrap().lengths, vec![1500]);
        assert_eq!(plan_default_segments(1, 1500).unwrap().lengths, vec![1]);
        assert!(!plan_default_segments(3000, 1500).unwrap().segmented);
    }

    #[test]
    fn default_segments_reject_zero() {
        assert!(matches!(
            plan_default_segments(0, 1500),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            plan_default_segments(10, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn band_selection_is_inclusive_at_thresholds() {
        let cfg = profiles::high_bandwidth();
        let b = select_band(150, &cfg);
        assert_eq!((b.min_seg, b.max_seg), (20, 40));
        let b = select_band(200, &cfg);
        assert_eq!((b.min_seg, b.max_seg), (20, 40));
        let b = select_band(201, &cfg);
        assert_eq!((b.min_seg, b.max_seg), (100, 300));
        let b = select_band(400, &cfg);
        assert_eq!((b.min_seg, b.max_seg), (100, 300));
        let b = select_band(500, &cfg);
        assert_eq!((b.min_seg, b.max_seg), (100, 300));
        let b = select_band(1_000_000, &cfg);
        assert_eq!((b.min_seg, b.max_seg), (500, 1000));
    }

    #[test]
    fn zero_probability_passes_through() {
        let cfg = profiles::low_bandwidth().with_prob(0.0).unwrap();
        let mut rng = seeded(3);
        for n in [1, 5, 48, 1400] {
            let plan = plan_message(n, &cfg, &mut rng).unwrap();
            assert_eq!(plan.lengths, vec![n]);
            assert!(!plan.segmented);
        }
    }

    #[test]
    fn short_messages_are_not_eligible() {
        // 10 bytes is below the 20-byte floor of the first high-bandwidth level
        let cfg = profiles::high_bandwidth().with_prob(1.0).unwrap();
        let plan = plan_message(10, &cfg, &mut seeded(1)).unwrap();
        assert_eq!(plan, SegmentPlan::whole(10));
    }

    #[test]
    fn degenerate_band_hand_trace() {
        // Stepping through by hand: 350 -> 100 (250 left) -> 100 (150) -> 100 (50)
        // -> draw 100 >= 50 so the tail goes out whole.
        let cfg = SegmentationConfig::new(1.0, vec![LevelBand::catch_all(100, 100)]).unwrap();
        let plan = plan_message(350, &cfg, &mut seeded(0)).unwrap();
        assert_eq!(plan.lengths, vec![100, 100, 100, 50]);
        assert!(plan.segmented);
    }

    #[test]
    fn exact_multiple_has_full_final_chunk() {
        let cfg = SegmentationConfig::new(1.0, vec![LevelBand::catch_all(100, 100)]).unwrap();
        let plan = plan_message(300, &cfg, &mut seeded(0)).unwrap();
        assert_eq!(plan.lengths, vec![100, 100, 100]);
    }

    #[test]
    fn empty_message_rejected() {
        let cfg = profiles::low_bandwidth();
        assert!(matches!(
            segment_message(&[], &cfg, &mut seeded(0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn chunks_slice_in_order() {
        let data: Vec<u8> = (0..=255).collect();
        let cfg = profiles::low_bandwidth().with_prob(1.0).unwrap();
        let plan = segment_message(&data, &cfg, &mut seeded(9)).unwrap();
        let joined: Vec<u8> = plan.chunks(&data).flatten().copied().collect();
        assert_eq!(joined, data);
    }
}
