use bcseq::cantor::{cantor_ball_measure, cantor_cdf, cantor_interval_measure, DEFAULT_DEPTH};
use bcseq::geometry::CirclePoint;
use bcseq::rigidity::rotation_rigidity_grid;
use bcseq::sequences::{delete_subsequence, generate, io, Alpha, Distribution, RotationNumber, SequenceSpec};
use proptest::prelude::*;

fn values(spec: &SequenceSpec, n: usize) -> Vec<f64> {
    generate(spec, n).unwrap().iter().map(|p| p.value()).collect()
}

#[test]
fn farey_order() {
    let v = values(&SequenceSpec::Farey, 11);
    let want = [0.0, 0.0, 0.5, 1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75, 0.2, 0.4, 0.6, 0.8];
    for (a, b) in v.iter().zip(want) {
        assert!((a - b).abs() < 1e-15, "{v:?}");
    }
}

#[test]
fn rational_rotation_is_exact() {
    let v = values(&SequenceSpec::kronecker(Alpha::Ratio { p: 3, q: 7 }), 700);
    for (i, x) in v.iter().enumerate() {
        let n = i as u64 + 1;
        assert_eq!(*x, ((3 * n) % 7) as f64 / 7.0);
    }
}

#[test]
fn golden_rotation_matches_high_precision_oracle() {
    // n φ mod 1 with φ − 1 = 0.6180339887498948482045868343656381177203...
    let frac: u128 = 6_180_339_887_498_948_482_045_868;
    let scale: u128 = 10u128.pow(25);
    let v = values(&SequenceSpec::golden(), 1_000_000);
    for n in [1u128, 2, 10, 999, 123_456, 1_000_000] {
        let want = ((n * frac) % scale) as f64 / scale as f64;
        assert!((v[n as usize - 1] - want).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn power_sequence_uses_exact_integer_powers() {
    let spec = SequenceSpec::Power { alpha: Alpha::Ratio { p: 1, q: 1000 }, k: 2 };
    let v = values(&spec, 5000);
    for (i, x) in v.iter().enumerate() {
        let n = i as u64 + 1;
        assert_eq!(*x, ((n * n) % 1000) as f64 / 1000.0);
    }
}

#[test]
fn sqrt_and_lnln_closed_forms() {
    let s = values(&SequenceSpec::Sqrt, 1000);
    let l = values(&SequenceSpec::LnLn, 1000);
    for n in [1usize, 2, 17, 400, 1000] {
        assert!((s[n - 1] - (n as f64).sqrt().fract()).abs() < 1e-12);
        assert!((l[n - 1] - (3.0 + n as f64).ln().ln().rem_euclid(1.0)).abs() < 1e-12);
    }
}

#[test]
fn iid_streams_are_seeded() {
    let a = values(&SequenceSpec::Iid { distribution: Distribution::Uniform, seed: 7 }, 10_000);
    let b = values(&SequenceSpec::Iid { distribution: Distribution::Uniform, seed: 7 }, 10_000);
    let c = values(&SequenceSpec::Iid { distribution: Distribution::Uniform, seed: 8 }, 10_000);
    assert_eq!(a, b);
    assert_ne!(a, c);
    // prefix property: generating fewer points gives a prefix
    let short = values(&SequenceSpec::Iid { distribution: Distribution::Uniform, seed: 7 }, 1234);
    assert_eq!(short, a[..1234]);
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    assert!((mean - 0.5).abs() < 0.02);
}

#[test]
fn text_and_binary_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = generate(&SequenceSpec::golden(), 2000).unwrap();
    for name in ["pts.txt", "pts.bin"] {
        let path = dir.path().join(name);
        io::write_points(&path, &p).unwrap();
        assert_eq!(io::read_points(&path).unwrap(), p);
        let spec = SequenceSpec::Imported { path: path.to_string_lossy().into_owned() };
        assert_eq!(generate(&spec, 2000).unwrap(), p);
        assert!(generate(&spec, 2001).is_err());
    }
}

#[test]
fn deletion_keeps_order() {
    let p: Vec<CirclePoint> = (0..100).map(|k| CirclePoint::new(k as f64 / 100.0)).collect();
    let kept = delete_subsequence(&p, |i| i % 2 == 1);
    assert_eq!(kept.len(), 50);
    assert_eq!(kept[1].value(), 0.02);
}

#[test]
fn rigidity_grid_for_rationals_vanishes_at_the_denominator() {
    let a = RotationNumber::ratio(2, 5).unwrap();
    // 2/5 is stored to 128 bits, so 5α is within 2^-126 of an integer
    assert!(rotation_rigidity_grid(a, 5, 1000) < 1e-12);
    assert!(rotation_rigidity_grid(a, 3, 1000) > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cantor_cdf_is_monotone(a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (fa, fb) = (cantor_cdf(lo, DEFAULT_DEPTH).unwrap(), cantor_cdf(hi, DEFAULT_DEPTH).unwrap());
        prop_assert!(fa <= fb);
        prop_assert!((0.0..=1.0).contains(&fa));
        prop_assert!((cantor_interval_measure(lo, hi, DEFAULT_DEPTH).unwrap() - (fb - fa)).abs() < 1e-12);
    }

    #[test]
    fn cantor_cdf_self_similar(x in 0.0..1.0f64) {
        let f = cantor_cdf(x, DEFAULT_DEPTH).unwrap();
        prop_assert!((cantor_cdf(x / 3.0, DEFAULT_DEPTH).unwrap() - f / 2.0).abs() < 1e-12);
        prop_assert!((cantor_cdf(2.0 / 3.0 + x / 3.0, DEFAULT_DEPTH).unwrap() - (0.5 + f / 2.0)).abs() < 1e-12);
        prop_assert!((f + cantor_cdf(1.0 - x, DEFAULT_DEPTH).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cantor_gap_has_no_mass(x in (1.0 / 3.0)..(2.0 / 3.0)) {
        prop_assert_eq!(cantor_cdf(x, DEFAULT_DEPTH).unwrap(), 0.5);
        prop_assert_eq!(cantor_ball_measure(0.5, (x - 0.5).abs().min(1.0 / 6.0), DEFAULT_DEPTH).unwrap(), 0.0);
    }

    #[test]
    fn rotation_points_stay_in_unit_interval(a in 0.0..1.0f64, n in 1usize..2000) {
        let spec = SequenceSpec::kronecker(Alpha::Value { value: a });
        for x in values(&spec, n) {
            prop_assert!((0.0..1.0).contains(&x));
        }
    }
}
