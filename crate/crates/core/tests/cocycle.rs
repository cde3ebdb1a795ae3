use torus_ap::{compensated_sum, Cocycle, Cocycle32, FixedAngle, TorusPoint};

fn grid_mean(p: &Cocycle, g: u64) -> f64 {
    compensated_sum((0..g).map(|i| p.h_at(FixedAngle::from_ratio(i as i64, g)))) / g as f64
}

#[test]
fn grid_mean_of_h_vanishes() {
    let p = Cocycle::default();
    assert!(grid_mean(&p, 1 << 16).abs() <= 1e-8);
    // uniform grids integrate every unaliased mode exactly, so the error sits at
    // roundoff and can only be compared above an absolute floor
    let floor = 1e-15;
    let mut prev = grid_mean(&p, 16).abs();
    for k in 5..=14 {
        let err = grid_mean(&p, 1 << k).abs();
        assert!(err <= (10.0 * prev / 2.0).max(floor), "grid 2^{k}: {err:e} after {prev:e}");
        prev = err;
    }
}

#[test]
fn aliased_grid_sees_the_constant_term() {
    // a grid of 10 points aliases every default frequency to 0
    let p = Cocycle::new(FixedAngle::GOLDEN, 1.0, FixedAngle::ZERO, vec![10, 100]).unwrap();
    let mean = grid_mean(&p, 10);
    let h0 = p.h_at(FixedAngle::ZERO);
    assert!(h0.abs() > 0.1);
    assert!((mean - h0).abs() < 1e-12, "{mean} vs {h0}");
}

#[test]
fn coefficient_magnitudes_of_default_schedule() {
    let p = Cocycle::default();
    let c = p.coefficient_magnitudes();
    assert_eq!(c.len(), 4);
    assert!(c.iter().all(|v| v.is_finite()));
    assert!(c[0] > c[1] && c[1] > c[2]);
    // n_4 = 2 n_3, so |e(n_4 alpha) - 1| doubles while the weight only drops to 1/4
    assert!(c[3] > c[2]);
    assert!(c[2] < 1e-17 && c[3] < 1e-17);
}

#[test]
fn two_paths_agree_on_a_thousand_points() {
    let p = Cocycle::default();
    for i in 0..1000u64 {
        let t = FixedAngle::from_raw((i as u128).wrapping_mul(FixedAngle::SQRT2_MINUS_ONE.raw()));
        let diff = p.primitive_at(t + p.alpha()) - p.primitive_at(t);
        assert!((p.h_at(t) - diff).abs() <= 1e-10);
    }
}

#[test]
fn empty_truncation_and_zero_coupling() {
    let empty = Cocycle::new(FixedAngle::LIOUVILLE, 1.0, FixedAngle::ZERO, vec![]).unwrap();
    assert_eq!(empty.h(0.3), 0.0);
    let still = Cocycle::default().with_lambda(0.0).unwrap();
    assert!(still.birkhoff_deviation(0.4, 500).unwrap().iter().all(|&s| s == 0.0));
    let report = still.unbounded_motion_scan(16, 100, 1e-12).unwrap();
    assert!(report.evidence.is_none());
    // lambda = 0 freezes the second coordinate, so the average is constant
    let w = TorusPoint::from_f64s(&[0.3, 0.2]).unwrap();
    let s = still.circle_extension_average(&[1, 10, 100], &w).unwrap();
    let c = (std::f64::consts::TAU * 0.2).cos();
    assert!(s.values().iter().all(|v| (v - c).abs() < 1e-12));
}

#[test]
fn single_precision_tracks_double() {
    let p64 = Cocycle::default();
    let p32 = Cocycle32::default();
    for i in 0..100u64 {
        let t = FixedAngle::from_ratio(i as i64, 100);
        assert!((p64.h_at(t) - p32.h_at(t) as f64).abs() < 1e-5);
    }
}
