use bargwig::geometry::{
    check_b_independence, check_identity_crossb, identity_convergence, PhysicalCoherent,
};
use bargwig::phase::{wirtinger_coefficients, BasisParams, PhasePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reference() -> PhysicalCoherent<f64> {
    PhysicalCoherent::new(0.7, -0.4, 1.5, 1.0).unwrap()
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

#[test]
fn identity_holds_over_scan() {
    let s = reference();
    for b in [0.8, 1.5, 2.2] {
        let basis = BasisParams::with_width(b).unwrap();
        for q in linspace(-1.3, 2.7, 5) {
            for p in linspace(-2.4, 1.6, 5) {
                let point = PhasePoint::new(q, p, basis);
                let r = check_identity_crossb(s.label(), s.width, &point, 1e-4).unwrap();
                assert!(r.passed, "{r:?}");
                assert!(r.diagnostic.is_none(), "{r:?}");
            }
        }
    }
}

#[test]
fn identity_residual_is_second_order() {
    let s = reference();
    let mut checked = 0;
    for b in [0.8, 1.5, 2.2] {
        let basis = BasisParams::with_width(b).unwrap();
        for q in linspace(-1.3, 2.7, 5) {
            for p in linspace(-2.4, 1.6, 5) {
                let point = PhasePoint::new(q, p, basis);
                let (coarse, fine, ratio) =
                    identity_convergence(s.label(), s.width, &point, 0.02).unwrap();
                // below the floor the difference is roundoff, not truncation
                if fine > 1e-9 {
                    assert!(
                        (ratio - 4.0).abs() <= 0.5,
                        "({q},{p},{b}): {coarse} -> {fine}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked == 75, "only {checked} points above the floor");
}

#[test]
fn wirtinger_and_qp_assemblies_agree() {
    let s = reference();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let b = rng.gen_range(0.4..3.0);
        let basis = BasisParams::with_width(b).unwrap();
        let (q, p) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let point = PhasePoint::new(q, p, basis);
        let (dq, dp) = s.gradient(q, p);
        let w = wirtinger_coefficients(&basis);
        let z = point.z();
        let rhs_z = (z.conj() * w.d_dz(dq, dp) + z * w.d_dzbar(dq, dp)).re;
        assert!((rhs_z - (q * dq - p * dp)).abs() <= 1e-10);
    }
}

#[test]
fn directional_form_matches_unit_vector_projection() {
    let s = reference();
    let basis = BasisParams::with_width(1.2).unwrap();
    for (q, p) in [(1.0, 1.0), (-0.5, 2.0), (2.2, -0.1)] {
        let r =
            check_identity_crossb(s.label(), s.width, &PhasePoint::new(q, p, basis), 1e-3).unwrap();
        let radius = f64::hypot(q, p);
        let (dq, dp) = s.gradient(q, p);
        let projection = (q * dq - p * dp) / radius;
        assert!((r.rhs_qp / radius - projection).abs() <= 1e-14);
        assert!((r.rhs_directional - r.rhs_qp).abs() <= 1e-14);
    }
}

#[test]
fn wigner_is_independent_of_basis_width() {
    let s = reference();
    assert!(check_b_independence(&s, 1.0, 1.0, 1.0, 2.0).unwrap() <= 1e-12);
    assert_eq!(check_b_independence(&s, 1.0, 1.0, 1.3, 1.3).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..100 {
        let (q, p) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let (b1, b2) = (rng.gen_range(0.3..3.0), rng.gen_range(0.3..3.0));
        assert!(check_b_independence(&s, q, p, b1, b2).unwrap() <= 1e-11);
    }
}

#[test]
fn oversized_step_is_flagged() {
    let s = reference();
    let point = PhasePoint::new(1.9, 0.6, BasisParams::with_width(1.0).unwrap());
    assert!(check_identity_crossb(s.label(), s.width, &point, 1.5).is_err());
    let r = check_identity_crossb(s.label(), s.width, &point, 0.9).unwrap();
    assert!(!r.passed);
}
