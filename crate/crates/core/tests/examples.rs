//! Worked examples for relations, averages and system descriptions.

use torus_ap::averages::{birkhoff_average, multiple_ergodic_average, multiple_recurrence_frequency, BoxSet, Observable};
use torus_ap::relations::*;
use torus_ap::{Cocycle, FixedAngle, System, SystemDescription, TorusPoint};

fn pt(c: &[f64]) -> TorusPoint {
    TorusPoint::from_f64s(c).unwrap()
}

#[test]
fn rotation_pairs_keep_their_distance() {
    let sys = System::rotation(FixedAngle::GOLDEN);
    let q = RelationQuery::new(pt(&[0.1]), pt(&[0.4]), 2, 0.01, 10_000, 1).unwrap();
    let prox = detect_proximal(&sys, &q).unwrap();
    assert_eq!(prox.status, Status::RefutedAtBudget);
    assert!((prox.residual - 0.3).abs() < 1e-15);
    let rp = detect_rp(&sys, &RelationQuery { ball_grid: 5, ..q }).unwrap();
    assert_eq!(rp.status, Status::RefutedAtBudget);
    // perturbations move each point by less than delta
    assert!(rp.residual > 0.3 - 2.0 * 0.01);
}

#[test]
fn weyl_fiber_gap_is_invariant() {
    let sys = System::weyl(FixedAngle::GOLDEN);
    let q = RelationQuery::new(pt(&[0.0, 0.0]), pt(&[0.0, 0.5]), 1, 0.05, 100_000, 1).unwrap();
    let v = detect_proximal(&sys, &q).unwrap();
    assert_eq!(v.status, Status::RefutedAtBudget);
    assert_eq!(v.residual, 0.5);
}

#[test]
fn equal_points_are_related_at_time_one() {
    let sys = System::weyl(FixedAngle::GOLDEN);
    let x = pt(&[0.3, 0.8]);
    let q = RelationQuery::new(x, x, 3, 0.01, 10, 1).unwrap();
    let v = detect_ap(&sys, &q).unwrap();
    assert_eq!(v.witness, Some(Witness::Pair { x, y: x, times: vec![1] }));
    assert_eq!(detect_proximal(&sys, &q).unwrap().witness, Some(Witness::Time { n: 0 }));
}

#[test]
fn rotation_has_no_independence_pairs() {
    let sys = System::rotation(FixedAngle::GOLDEN);
    let q = RelationQuery::new(pt(&[0.1]), pt(&[0.6]), 2, 0.05, 10_000, 1).unwrap();
    let v = detect_ind_ap(&sys, &q, 1 << 12).unwrap();
    assert_eq!(v.status, Status::RefutedAtBudget);
    // T^{-n}U_1 ∩ T^{-2n}U_2 needs ||n alpha + 0.5|| < 0.1 and ||n alpha|| < 0.1 at once
    assert!(v.residual >= 0.25);
}

#[test]
fn counterexample_at_half_resolution() {
    let v = weyl_ap1_orbit_check(FixedAngle::GOLDEN, FixedAngle::from_f64(0.37), 0.5, 10).unwrap();
    assert_eq!(v.witness, Some(Witness::Time { n: 1 }));
}

#[test]
fn transitivity_probe_on_a_fiber() {
    let sys = System::weyl(FixedAngle::GOLDEN);
    let template = RelationQuery::new(pt(&[0.0, 0.0]), pt(&[0.0, 0.0]), 2, 0.05, 500, 3).unwrap();
    let probe = probe_transitivity(&sys, [pt(&[0.2, 0.1]), pt(&[0.2, 0.15]), pt(&[0.2, 0.5])], &template).unwrap();
    assert!(probe.ab.is_witnessed());
    // fiber gaps above 3 delta cannot close
    assert!(!probe.bc.is_witnessed());
    assert!(!probe.ac.is_witnessed());
    assert!(!probe.is_counterexample_candidate());
}

#[test]
fn birkhoff_average_of_a_character_decays() {
    let sys = System::rotation(FixedAngle::GOLDEN);
    let x = pt(&[0.0]);
    let s = birkhoff_average(&sys, &Observable::cosine(0, 1), &x, &[1, 100_000]).unwrap();
    assert_eq!(s.checkpoints[0].value, 1.0);
    // |A_N| <= 2 / (N |1 - e(alpha)|)
    let bound = 2.0 / (100_000.0 * 2.0 * (std::f64::consts::PI * 0.618_033_988_749_895).sin());
    assert!(s.final_value.abs() <= bound + 1e-12);
    assert!(s.final_value.abs() < 0.01);
    let ones = birkhoff_average(&sys, &Observable::one(), &x, &[1, 10, 1000]).unwrap();
    assert!(ones.values().iter().all(|&v| v == 1.0));
}

#[test]
fn double_recurrence_average_of_characters_decays() {
    let sys = System::rotation(FixedAngle::GOLDEN);
    let fs = [Observable::cosine(0, 1), Observable::cosine(0, 1)];
    let s = multiple_ergodic_average(&sys, &fs, &pt(&[0.0]), &[100_000]).unwrap();
    // cos(a)cos(2a) = (cos(a) + cos(3a)) / 2, both geometric sums
    let a = 0.618_033_988_749_895f64;
    let geo = |m: f64| 1.0 / (std::f64::consts::PI * m * a).sin().abs();
    assert!(s.final_value.abs() <= (geo(1.0) + geo(3.0)) / 2.0 / 100_000.0 + 1e-12);
    assert!(s.final_value.abs() < 0.01);
}

#[test]
fn recurrence_of_the_whole_space_is_one() {
    let sys = System::weyl(FixedAngle::GOLDEN);
    let all = Observable::indicator(BoxSet::full(2).unwrap());
    let s = multiple_recurrence_frequency(&sys, &all, 4, 50, 32).unwrap();
    assert!(s.values().iter().all(|&v| v == 1.0));
    let tiny = Observable::indicator(BoxSet::new(&[0.0, 0.0], &[0.05, 0.05]).unwrap());
    assert!(multiple_recurrence_frequency(&sys, &tiny, 2, 50, 32).is_err());
    assert!(multiple_recurrence_frequency(&sys, &all, 5, 50, 32).is_err());
}

#[test]
fn descriptions_round_trip() {
    let systems = [
        System::rotation(FixedAngle::GOLDEN),
        System::weyl(FixedAngle::SQRT2_MINUS_ONE).power(3).unwrap(),
        System::cocycle(Cocycle::default()),
        System::cocycle(Cocycle::new(FixedAngle::GOLDEN, -0.25, FixedAngle::HALF, vec![2, 9]).unwrap()),
    ];
    for s in systems {
        let text = s.to_text();
        assert_eq!(System::from_text(&text).unwrap(), s, "{text}");
        let json = serde_json::to_string(&s.describe()).unwrap();
        let back: SystemDescription = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build::<f64>().unwrap(), s);
    }
    assert!(System::from_text("variant = \"rotation\"\nalpha = \"golden\"\nlambda = 1\n").is_err());
    assert!(System::from_text("variant = \"mobius\"\nalpha = \"golden\"\n").is_err());
    assert!(System::from_text("alpha = \"golden\"\n").is_err());
}

#[test]
fn guards_reject_out_of_range_requests() {
    let sys = System::weyl(FixedAngle::GOLDEN);
    let p = pt(&[0.1, 0.2]);
    assert!(sys.orbit_point(&p, i64::MAX).is_err());
    assert!(sys.orbit_point(&pt(&[0.1]), 1).is_err());
    assert!(RelationQuery::new(p, p, 0, 0.1, 10, 1).is_err());
    assert!(RelationQuery::new(p, p, 1, 0.0, 10, 1).is_err());
    assert!(RelationQuery::new(p, pt(&[0.1]), 1, 0.1, 10, 1).is_err());
    let q = RelationQuery::new(p, p, 5, 0.1, 10, 1).unwrap();
    assert!(detect_rp(&sys, &q).is_err());
    assert!(detect_ind_ap(&sys, &q, 8).is_err());
}
