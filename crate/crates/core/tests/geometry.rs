use bcseq::geometry::{union_measure, wrap_dist, Arc, ArcUnion, CirclePoint, Window};
use proptest::prelude::*;

/// Fraction of grid midpoints covered by at least one arc, by direct membership.
fn midpoint_count(arcs: &[(f64, f64)], window: Option<(f64, f64)>, g: usize) -> f64 {
    let hit = (0..g)
        .filter(|&k| {
            let m = (k as f64 + 0.5) / g as f64;
            let inside = window.is_none_or(|(l, len)| (m - l).rem_euclid(1.0) < len);
            inside
                && arcs.iter().any(|&(c, r)| {
                    let d = (m - c).rem_euclid(1.0);
                    d.min(1.0 - d) < r
                })
        })
        .count();
    hit as f64 / g as f64
}

fn arcs_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, 0.001..0.3f64), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_matches_midpoint_count(arcs in arcs_strategy(), l in 0.0..1.0f64, len in 0.01..1.0f64) {
        let g = 20_000;
        let union = ArcUnion::from_arcs(arcs.iter().map(|&(c, r)| Arc::new(c, r)));
        // each arc boundary can misclassify at most one cell on each side
        let slack = (4 * arcs.len() + 4) as f64 / g as f64;
        prop_assert!((union.total_measure() - midpoint_count(&arcs, None, g)).abs() <= slack);
        let w = Window::new(l, len).unwrap();
        prop_assert!((union.measure_in(&w) - midpoint_count(&arcs, Some((l, len)), g)).abs() <= slack);
    }

    #[test]
    fn union_bounds(arcs in arcs_strategy()) {
        let list: Vec<Arc> = arcs.iter().map(|&(c, r)| Arc::new(c, r)).collect();
        let total = union_measure(&list);
        let sum: f64 = list.iter().map(Arc::measure).sum();
        let largest = list.iter().map(Arc::measure).fold(0.0, f64::max);
        prop_assert!(total <= sum.min(1.0) + 1e-12);
        prop_assert!(total >= largest - 1e-12);
    }

    #[test]
    fn union_is_rotation_invariant(arcs in arcs_strategy(), shift in 0.0..1.0f64) {
        let a = union_measure(&arcs.iter().map(|&(c, r)| Arc::new(c, r)).collect::<Vec<_>>());
        let b = union_measure(&arcs.iter().map(|&(c, r)| Arc::new(CirclePoint::new(c).rotate(shift), r)).collect::<Vec<_>>());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn window_measures_add_up(arcs in arcs_strategy(), l in 0.0..1.0f64, len in 0.01..0.99f64) {
        let union = ArcUnion::from_arcs(arcs.iter().map(|&(c, r)| Arc::new(c, r)));
        let w = Window::new(l, len).unwrap();
        let rest = Window::new(l + len, 1.0 - len).unwrap();
        prop_assert!((union.measure_in(&w) + union.measure_in(&rest) - union.total_measure()).abs() <= 1e-12);
    }

    #[test]
    fn wrap_dist_is_a_metric(x in 0.0..1.0f64, y in 0.0..1.0f64, z in 0.0..1.0f64) {
        let (x, y, z) = (CirclePoint::new(x), CirclePoint::new(y), CirclePoint::new(z));
        prop_assert!(wrap_dist(x, y) <= 0.5);
        prop_assert_eq!(wrap_dist(x, y), wrap_dist(y, x));
        prop_assert!(wrap_dist(x, z) <= wrap_dist(x, y) + wrap_dist(y, z) + 1e-15);
    }

    #[test]
    fn union_contains_its_centers(arcs in arcs_strategy()) {
        let union = ArcUnion::from_arcs(arcs.iter().map(|&(c, r)| Arc::new(c, r)));
        for &(c, _) in &arcs {
            prop_assert!(union.contains(CirclePoint::new(c)));
        }
    }
}

#[test]
fn arc_wider_than_circle_covers_everything() {
    let u = ArcUnion::from_arcs([Arc::new(0.3, 0.7)]);
    assert_eq!(u.total_measure(), 1.0);
}

#[test]
fn wrapping_arc_is_split() {
    let u = ArcUnion::from_arcs([Arc::new(0.95, 0.1)]);
    assert!((u.total_measure() - 0.2).abs() < 1e-15);
    assert!((u.measure_in(&Window::span(0.0, 0.5).unwrap()) - 0.05).abs() < 1e-15);
    assert!(u.contains(CirclePoint::new(0.02)));
    assert!(!u.contains(CirclePoint::new(0.5)));
}

#[test]
fn dyadic_windows_tile_the_circle() {
    let ws = Window::dyadic(8);
    let total: f64 = ws.iter().map(|w| w.length).sum();
    assert!((total - 1.0).abs() < 1e-15);
}
