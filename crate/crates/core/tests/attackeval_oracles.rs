use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segshield::attackeval::{
    evaluate_dataset, extract_windows, f1, precision, recall, run_attack, split_dataset, train_forest,
    AttackParams, Dataset, FeatureVector, ForestParams, Metrics,
};
use segshield::rng::seeded;
use segshield::tracesim::{PacketRecord, Trace};

proptest! {
    #[test]
    fn macro_metrics_are_class_means(cells in prop::collection::vec(0u64..30, 9)) {
        let confusion: Vec<Vec<u64>> = cells.chunks(3).map(<[u64]>::to_vec).collect();
        let classes: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let m = Metrics::from_confusion(&classes, confusion.clone());
        for c in 0..3 {
            let tp = confusion[c][c];
            let fp: u64 = (0..3).map(|r| confusion[r][c]).sum::<u64>() - tp;
            let fn_: u64 = confusion[c].iter().sum::<u64>() - tp;
            let pc = &m.per_class[c];
            prop_assert_eq!(pc.precision, precision(tp, fp));
            prop_assert_eq!(pc.recall, recall(tp, fn_));
            prop_assert_eq!(pc.f1, f1(pc.precision, pc.recall));
        }
        let mean = m.per_class.iter().map(|p| p.f1).sum::<f64>() / 3.0;
        prop_assert!((m.f1 - mean).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&m.accuracy));
    }

    #[test]
    fn window_vectors_account_for_every_packet(
        points in prop::collection::vec((0u64..600, 1i32..1500), 1..300),
        len in 1usize..50,
    ) {
        let mut points = points;
        points.sort();
        let records = points.iter().map(|&(t, s)| PacketRecord::new(t * 1_000_000, s, "d")).collect();
        let trace = Trace::new("d", 0, records).unwrap();
        let v = extract_windows(&trace, 30.0, len).unwrap();
        prop_assert_eq!(v.iter().map(|f| f.packets).sum::<usize>(), points.len());
        prop_assert!(v.len() <= 20);
        for f in &v {
            prop_assert_eq!(f.values.len(), len);
            prop_assert_eq!(f.values.iter().filter(|&&x| x != 0).count(), f.packets.min(len));
        }
    }
}

#[test]
fn truncation_keeps_the_first_packets() {
    let records = (1..=10).map(|i| PacketRecord::new(i, i as i32 * 10, "d")).collect();
    let v = extract_windows(&Trace::new("d", 0, records).unwrap(), 30.0, 4).unwrap();
    assert_eq!(v[0].values, vec![10, 20, 30, 40]);
    assert_eq!(v[0].packets, 10);
}

#[test]
fn stratified_split_keeps_class_shares() {
    let vectors: Vec<FeatureVector> = (0..100)
        .map(|i| FeatureVector {
            values: vec![i],
            label: if i < 80 { "a" } else { "b" }.into(),
            packets: 1,
        })
        .collect();
    let (train, test) = split_dataset(&vectors, 0.7, &mut seeded(0)).unwrap();
    let count = |v: &[FeatureVector], l: &str| v.iter().filter(|f| f.label == l).count();
    assert_eq!((count(&train, "a"), count(&train, "b")), (56, 14));
    assert_eq!((count(&test, "a"), count(&test, "b")), (24, 6));
}

fn noisy_dataset(rng: &mut ChaCha8Rng, noise: f64) -> Dataset {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..400 {
        let class = rng.random_range(0..2);
        let centre = if class == 0 { -1.0 } else { 1.0 };
        features.push(vec![centre + rng.random_range(-0.5..0.5), rng.random_range(-1.0..1.0)]);
        labels.push(if rng.random::<f64>() < noise { 1 - class } else { class });
    }
    Dataset { classes: vec!["x".into(), "y".into()], features, labels }
}

#[test]
fn label_noise_lowers_accuracy() {
    let params = ForestParams { n_trees: 30, seed: 1, ..Default::default() };
    let mut accuracies = Vec::new();
    for noise in [0.0, 0.2, 0.45] {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let train = noisy_dataset(&mut rng, noise);
        // Score against clean labels drawn from the same generator.
        let test = noisy_dataset(&mut rng, 0.0);
        let m = evaluate_dataset(&train_forest(&train, &params).unwrap(), &test);
        accuracies.push(m.accuracy);
    }
    assert!(accuracies[0] >= accuracies[1] && accuracies[1] > accuracies[2], "{accuracies:?}");
    assert!(accuracies[0] > 0.95);
}

#[test]
fn indistinguishable_classes_score_near_chance() {
    let mk = |name: &str, seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let records = (0..3600)
            .map(|t| PacketRecord::new(t * 1_000_000, rng.random_range(100..200), name))
            .collect();
        Trace::new(name, 0, records).unwrap()
    };
    let traces = [mk("a", 1), mk("b", 2)];
    let params = AttackParams { forest: ForestParams { n_trees: 50, ..Default::default() }, ..Default::default() };
    let mut total = 0.0;
    for seed in 0..5 {
        total += run_attack(&traces, &params, &mut seeded(seed)).unwrap().accuracy;
    }
    let mean = total / 5.0;
    assert!((mean - 0.5).abs() < 0.2, "mean accuracy {mean}");
}

#[test]
fn training_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data = noisy_dataset(&mut rng, 0.1);
    let params = ForestParams { n_trees: 20, seed: 99, ..Default::default() };
    assert_eq!(train_forest(&data, &params).unwrap(), train_forest(&data, &params).unwrap());
}
