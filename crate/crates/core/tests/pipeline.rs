use lvs_core::augment::{edit_segment, region_contours, AugmentParams, MasAssignment};
use lvs_core::metrics::{confusion_counts, low_salience_subset, lsrecall_curve};
use lvs_core::salience::{compute_lvs, compute_lvs_map, LvsParams};
use lvs_core::synthetic;
use lvs_core::topology::{build_graph, GraphParams};
use lvs_core::{BinaryMask, GrayImage, Pixel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mean(image: &GrayImage, pixels: &[Pixel]) -> f64 {
    pixels.iter().map(|&p| image.get(p)).sum::<f64>() / pixels.len() as f64
}

#[test]
fn synthetic_gap_looks_like_background() {
    let mask = synthetic::bar_mask(160, 60, 5, 10);
    let image = synthetic::paint(&mask, 200.0, 50.0);
    let graph = build_graph(&mask, &GraphParams::default());
    assert_eq!(graph.edges.len(), 1);
    let path = &graph.edges[0].path;
    let pc = path.len() / 2;
    let assignment = MasAssignment::new(&graph, &mask);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let edit = edit_segment(
        &image,
        &mask,
        &graph,
        &assignment,
        0,
        pc,
        60.0,
        20.0,
        5.0,
        &mut rng,
    )
    .unwrap();

    assert_eq!(edit.background_mean, 50.0);
    let gap = edit.field.zero_region();
    assert!(!gap.is_empty());
    assert!(gap.iter().all(|&p| edit.attenuated.get(p) == 50.0));
    let patch = edit.patch.expect("uniform background always matches");
    assert!(patch.difference < 5.0);

    let rim = region_contours(&edit.field.zero_mask(), &mask);
    assert!((mean(&edit.image, &gap) - mean(&edit.image, &rim.outer)).abs() < 5.0);

    let params = LvsParams {
        smoothing: 0,
        ..LvsParams::default()
    };
    let lvs = compute_lvs_map(&edit.image, &mask, &params).unwrap();
    for &p in &gap {
        assert!(lvs.get(p).unwrap() <= 0.05, "{p:?}");
    }
    // Outside the faded stretch nothing moved.
    for p in mask.pixels() {
        if edit.field.factor(p) == 1.0 {
            assert_eq!(edit.image.get(p), image.get(p));
        }
    }
}

#[test]
fn ramp_ends_are_untouched_without_gap() {
    let mask = synthetic::bar_mask(160, 60, 5, 10);
    let image = synthetic::paint(&mask, 200.0, 50.0);
    let graph = build_graph(&mask, &GraphParams::default());
    let path = &graph.edges[0].path;
    let assignment = MasAssignment::new(&graph, &mask);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pc = path.len() / 2;
    let edit = edit_segment(
        &image,
        &mask,
        &graph,
        &assignment,
        0,
        pc,
        50.0,
        0.0,
        5.0,
        &mut rng,
    )
    .unwrap();
    let w = edit.waypoints;
    assert_eq!(edit.attenuated.get(path[w.p1]), image.get(path[w.p1]));
    assert_eq!(edit.attenuated.get(path[w.p2]), image.get(path[w.p2]));
    assert_eq!(w.pd1, w.pc);
    assert_eq!(edit.attenuated.get(path[w.pc]), 50.0);
}

#[test]
fn recomputed_salience_ramps_into_gap() {
    let mask = synthetic::bar_mask(200, 60, 5, 10);
    let image = synthetic::paint(&mask, 200.0, 50.0);
    let graph = build_graph(&mask, &GraphParams::default());
    let path = graph.edges[0].path.clone();
    let assignment = MasAssignment::new(&graph, &mask);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pc = path.len() / 2;
    let edit = edit_segment(
        &image,
        &mask,
        &graph,
        &assignment,
        0,
        pc,
        80.0,
        20.0,
        5.0,
        &mut rng,
    )
    .unwrap();
    let lvs = compute_lvs(&edit.image, &mask, &LvsParams::default()).unwrap();
    let values: Vec<f64> = lvs.per_edge[0].lvs.iter().map(|v| v.unwrap()).collect();
    let w = edit.waypoints;
    for i in w.p1.saturating_sub(10)..w.pc {
        assert!(values[i + 1] <= values[i] + 1e-9, "index {i}");
    }
    for i in w.pc..w.p2 + 10 {
        assert!(values[i + 1] + 1e-9 >= values[i], "index {i}");
    }
    assert!(values[w.pc] < 0.1);
}

#[test]
fn missed_faint_half_hides_from_recall() {
    let (image, mask) = synthetic::fading_bar(200, 40, 5, 100, 130, 200.0, 50.0);
    let lvs = compute_lvs_map(&image, &mask, &LvsParams::default()).unwrap();
    let faint = low_salience_subset(&lvs, 0.2);
    assert!(!faint.is_empty());
    let pred = BinaryMask::from_fn(200, 40, |p| mask.get(p) && !faint.get(p));
    let recall = confusion_counts(&mask, &pred).unwrap().recall().unwrap();
    let curve = lsrecall_curve(&lvs, &pred, &[0.2, 1.0]).unwrap();
    assert_eq!(curve[0].value, Some(0.0));
    assert_eq!(curve[1].value, Some(recall));
    assert!(recall > 0.5);
}

#[test]
fn augmentation_keeps_mask_and_background() {
    let (image, mask) = synthetic::bar_grid(3, 3, 130, 5, 180.0, 40.0);
    let graph = build_graph(&mask, &GraphParams::default());
    let params = AugmentParams {
        n_range: (5, 5),
        ..AugmentParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (out, log) =
        lvs_core::augment::augment_image(&image, &mask, &graph, &params, &mut rng).unwrap();
    assert_eq!(log.edited(), 5);
    for p in mask.inverted().pixels() {
        assert_eq!(out.get(p), image.get(p));
    }
    for e in &log.edits {
        assert!(e.l_d < e.l);
    }
}

#[test]
fn default_parameters_on_a_large_grid() {
    let (image, mask) = synthetic::bar_grid(10, 20, 120, 5, 190.0, 45.0);
    let graph = build_graph(&mask, &GraphParams::default());
    assert_eq!(graph.edges.len(), 200);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let start = std::time::Instant::now();
    let (out, log) = lvs_core::augment::augment_image(
        &image,
        &mask,
        &graph,
        &AugmentParams::default(),
        &mut rng,
    )
    .unwrap();
    let elapsed = start.elapsed();
    assert!((50..=100).contains(&log.target));
    assert_eq!(log.edited(), log.target);
    for e in &log.edits {
        assert!((20.0..100.0).contains(&e.l));
        assert!(e.l_d < 30.0 && e.l_d < e.l);
    }
    for p in mask.inverted().pixels() {
        assert_eq!(out.get(p), image.get(p));
    }
    assert!(elapsed.as_secs() < 20, "{elapsed:?}");
}
