mod oracles;

use std::f64::consts::PI;

use rodstab_core::critical::*;
use rodstab_core::rod::second_variation_matrix;
use rodstab_core::BoundaryCondition;

#[test]
fn eigenvalue_changes_sign_at_analytic_value() {
    let c = oracles::reference_coeffs(0.6, 6.0);
    for bc in [BoundaryCondition::clamped_identity(), BoundaryCondition::WeakClamped] {
        let br = f_crit_analytic(&c, &bc).unwrap();
        let scale = force_scale(&c, br.f_crit);
        let sv = second_variation_matrix(&c, &bc, 400).unwrap();
        assert!(sv.at(br.f_crit + 1e-2 * scale).smallest_eigenvalue(1e-12) > 0.0);
        assert!(sv.at(br.f_crit - 1e-2 * scale).smallest_eigenvalue(1e-12) < 0.0);
    }
}

#[test]
fn reference_regime_regression_values() {
    let c = oracles::reference_coeffs(0.6, 6.0);
    let wc = f_crit_analytic(&c, &BoundaryCondition::WeakClamped).unwrap();
    let cc = f_crit_analytic(&c, &BoundaryCondition::clamped_identity()).unwrap();
    assert!((wc.f_crit - 53.3026).abs() < 1e-3, "{}", wc.f_crit);
    assert!((cc.f_crit - 48.1656).abs() < 1e-3, "{}", cc.f_crit);
    assert_eq!(cc.branch, Branch::TwoPi);
    for (bc, ana) in [(BoundaryCondition::WeakClamped, &wc), (BoundaryCondition::clamped_identity(), &cc)] {
        let num = f_crit_numeric(&c, &bc, 400, None).unwrap();
        assert!((num - ana.f_crit).abs() / ana.f_crit < 5e-3);
    }
}

#[test]
fn zero_curvature_numeric() {
    for w_z in [0.4, 0.6] {
        let c = oracles::reference_coeffs(w_z, 0.0);
        let want = -PI * PI * c.c12.min(c.c13) / (c.length * c.length);
        for bc in [BoundaryCondition::clamped_identity(), BoundaryCondition::WeakClamped] {
            let num = f_crit_numeric(&c, &bc, 400, Some(blind_bracket(&c))).unwrap();
            assert!((num - want).abs() / want.abs() < 5e-3, "w_z={w_z} {}: {num} vs {want}", bc.name());
        }
    }
}

#[test]
fn monotone_in_curvature() {
    let base = oracles::reference_coeffs(0.6, 1.0);
    for bc in [BoundaryCondition::clamped_identity(), BoundaryCondition::WeakClamped] {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..60 {
            let c = base.with_k(0.5 * i as f64);
            let f = f_crit_analytic(&c, &bc).unwrap().f_crit;
            assert!(f >= prev - 1e-12, "{} k={}", bc.name(), c.k);
            prev = f;
        }
    }
}

#[test]
fn x_star_tends_to_two_pi() {
    let ac = 1.0 / (4.0 * PI * PI);
    let mut prev = 0.0;
    for e in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let x = find_x_star(ac * (1.0 + e)).unwrap().unwrap();
        assert!(x > prev);
        prev = x;
    }
    assert!(2.0 * PI - prev < 1e-2);
}

#[test]
fn x_star_branch_continuous_at_threshold() {
    // on both sides of (c13 k L)^2 = 4 pi^2 c12 c23 the clamped f1 agrees
    let c = oracles::reference_coeffs(0.6, 1.0);
    let kc = (4.0 * PI * PI * c.c12 * c.c23).sqrt() / (c.c13 * c.length);
    let bc = BoundaryCondition::clamped_identity();
    let lo = f_crit_analytic(&c.with_k(kc * (1.0 - 1e-7)), &bc).unwrap();
    let hi = f_crit_analytic(&c.with_k(kc * (1.0 + 1e-7)), &bc).unwrap();
    assert_eq!(lo.f1_branch, Branch::XStar);
    assert_eq!(hi.f1_branch, Branch::TwoPi);
    assert!((lo.f1_crit - hi.f1_crit).abs() < 1e-3 * c.c12);
}

#[test]
fn report_json_roundtrip() {
    let c = oracles::reference_coeffs(0.6, 1.0);
    let br = f_crit_with_numeric(&c, &BoundaryCondition::clamped_identity(), 200).unwrap();
    let s = serde_json::to_string(&br).unwrap();
    assert!(s.contains("\"branch\":\"x_star\"") && s.contains("\"x_star\"") && s.contains("\"N\":200"));
    let back: CriticalForceBreakdown = serde_json::from_str(&s).unwrap();
    assert_eq!(back, br);
}
