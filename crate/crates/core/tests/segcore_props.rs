use proptest::prelude::*;
use segshield::rng::seeded;
use segshield::segcore::{
    pad_packet_random, plan_default_segments, plan_message, profiles, select_band, LevelBand,
    SegmentationConfig,
};

fn config() -> impl Strategy<Value = SegmentationConfig> {
    (0.0..=1.0f64, 1u32..100, 0u32..1300, any::<u64>()).prop_map(|(prob, min, span, seed)| {
        let max = (min + span).min(1460);
        SegmentationConfig::new(prob, vec![LevelBand::new(Some(300), min.min(20), 40), LevelBand::catch_all(min, max)])
            .unwrap()
            .with_seed(seed)
    })
}

proptest! {
    #[test]
    fn chunks_rebuild_the_message(data in prop::collection::vec(any::<u8>(), 1..4000), cfg in config()) {
        let plan = plan_message(data.len(), &cfg, &mut seeded(cfg.seed)).unwrap();
        let rebuilt: Vec<u8> = plan.chunks(&data).flatten().copied().collect();
        prop_assert_eq!(rebuilt, data);
        prop_assert!(plan.lengths.iter().all(|&l| l > 0));
    }

    #[test]
    fn chunks_respect_their_band(n in 1usize..6000, cfg in config()) {
        let plan = plan_message(n, &cfg, &mut seeded(cfg.seed)).unwrap();
        let band = select_band(n, &cfg);
        let (min, max) = (band.min_seg as usize, band.max_seg as usize);
        if plan.segmented {
            let (last, rest) = plan.lengths.split_last().unwrap();
            prop_assert!(rest.iter().all(|l| (min..=max).contains(l)));
            prop_assert!((1..=max).contains(last));
        } else {
            prop_assert_eq!(plan.lengths, vec![n]);
        }
    }

    #[test]
    fn same_seed_same_plan(n in 1usize..6000, cfg in config()) {
        let a = plan_message(n, &cfg, &mut seeded(cfg.seed)).unwrap();
        let b = plan_message(n, &cfg, &mut seeded(cfg.seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn default_segment_count(n in 1usize..200_000, mss in 1usize..9000) {
        let plan = plan_default_segments(n, mss).unwrap();
        prop_assert_eq!(plan.len(), n.div_ceil(mss));
        prop_assert_eq!(plan.total(), n);
        prop_assert!(plan.lengths.iter().all(|&l| l <= mss));
    }

    #[test]
    fn padding_stays_under_the_ceiling(len in 1usize..=1460, seed in any::<u64>()) {
        let padded = pad_packet_random(len, 1460, &mut seeded(seed)).unwrap();
        if len == 1460 {
            prop_assert_eq!(padded, len);
        } else {
            prop_assert!(padded > len && padded <= 1460);
        }
    }
}

#[test]
fn pass_through_rate_matches_prob() {
    // Messages of 1000 bytes always fall in the catch-all band, min 5.
    let cfg = profiles::low_bandwidth().with_prob(0.3).unwrap();
    let mut rng = seeded(42);
    let trials = 20_000;
    let segmented = (0..trials)
        .filter(|_| plan_message(1000, &cfg, &mut rng).unwrap().segmented)
        .count();
    let p = segmented as f64 / trials as f64;
    let se = (0.3f64 * 0.7 / trials as f64).sqrt();
    assert!((p - 0.3).abs() < 3.0 * se, "observed rate {p}");
}

#[test]
fn prob_extremes_are_exact() {
    let mut rng = seeded(9);
    let never = profiles::rand_low().with_prob(0.0).unwrap();
    let always = profiles::rand_low();
    for _ in 0..1000 {
        assert!(!plan_message(5000, &never, &mut rng).unwrap().segmented);
        assert!(plan_message(5000, &always, &mut rng).unwrap().segmented);
    }
}

#[test]
fn short_messages_pass_through() {
    // 3 bytes is below every band minimum of the low-bandwidth profile.
    let plan = plan_message(3, &profiles::low_bandwidth().with_prob(1.0).unwrap(), &mut seeded(0)).unwrap();
    assert_eq!(plan.lengths, vec![3]);
    assert!(!plan.segmented);
}

#[test]
fn config_json_round_trip() {
    for name in profiles::NAMES {
        let cfg = profiles::by_name(name).unwrap();
        assert_eq!(SegmentationConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
