use super::*;
use crate::analytic;
use crate::ensemble::{SystemSpec, Target};
use crate::qmath::DeformationParam;
use alloc::vec;
use core::f64::consts::PI;
use proptest::prelude::*;

fn dq(q: f64) -> DeformationParam {
    DeformationParam::new(q).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn figure_polynomial_shapes() {
    let p = build_z_polynomial(5, dq(2.0), 0.0, false).unwrap();
    let powers: Vec<f64> = p.terms().iter().map(|t| t.0).collect();
    assert_eq!(powers, vec![0.0, 1.0, 3.0, 7.0, 15.0, 31.0]);
    assert!(p.terms().iter().all(|t| t.1 == 1.0));
    assert_eq!(p.shift(), 0.0);

    let p = build_z_polynomial(5, dq(2.0), 0.0, true).unwrap();
    assert_eq!(p.shift(), 1.0);
    assert_eq!(
        p.terms(),
        &[(0.0, 15.0), (2.0, 21.0), (6.0, 21.0), (14.0, 15.0)]
    );
}

#[test]
fn power_collision_is_merged() {
    let p = build_z_polynomial(1, dq(1.7), 1.0, false).unwrap();
    assert_eq!(p.terms(), &[(0.0, 2.0)]);
    assert_eq!(p.shift(), 1.0);
    assert!(matches!(p.dense(), Err(Error::Precondition(_))));
    assert!(roots_integer_powers(&p).is_err());
}

#[test]
fn weighted_single_particle_is_identically_zero() {
    let err = build_z_polynomial(1, dq(2.0), 0.0, true).unwrap_err();
    assert_eq!(
        err,
        Error::IdenticallyZero("correlation function identically zero".into())
    );
    assert!(build_z_polynomial(0, dq(2.0), 0.0, false).is_err());
    assert!(build_z_polynomial(3, dq(2.0), f64::INFINITY, false).is_err());
}

#[test]
fn quadratic_and_linear_roots() {
    let p = SparsePolynomial::new(vec![(0.0, 1.0), (2.0, 1.0)]).unwrap();
    let set = roots_integer_powers(&p).unwrap();
    assert_eq!(set.len(), 2);
    assert!(set.zeros.iter().any(|z| (z - c(0.0, 1.0)).norm() < 1e-14));
    assert!(set.zeros.iter().any(|z| (z - c(0.0, -1.0)).norm() < 1e-14));

    let p = SparsePolynomial::new(vec![(0.0, 1.0), (1.0, 1.0)]).unwrap();
    let set = roots_integer_powers(&p).unwrap();
    assert_eq!(set.len(), 1);
    assert!((set.zeros[0] - c(-1.0, 0.0)).norm() < 1e-14);
    assert!((set.zeros[0].norm() - 1.0).abs() < 1e-14);
}

fn assert_figure_set(set: &ZeroSet, degree: usize) {
    assert_eq!(set.len(), degree);
    assert!(set.worst_residual() <= RESIDUAL_BOUND);
    assert!(is_conjugate_closed(&set.zeros, 1e-9));
    assert!(!set.zeros.iter().any(|z| z.im.abs() <= 1e-9 && z.re > 0.0));
}

#[test]
fn figure_roots() {
    for (n, fisher, corr) in [(5usize, 31usize, 14usize), (7, 127, 62)] {
        let p = build_z_polynomial(n, dq(2.0), 0.0, false).unwrap();
        assert_figure_set(&roots_integer_powers(&p).unwrap(), fisher);
        let p = build_z_polynomial(n, dq(2.0), 0.0, true).unwrap();
        let set = roots_integer_powers(&p).unwrap();
        assert_figure_set(&set, corr);
        assert_eq!(set.meta.zero_root_multiplicity, 1.0);
    }
}

#[test]
fn residuals_are_verified_independently() {
    // Re-evaluate through the expanded dense form rather than the sparse terms.
    let p = build_z_polynomial(5, dq(2.0), 0.0, true).unwrap();
    let dense = p.dense().unwrap();
    for z in roots_integer_powers(&p).unwrap().zeros {
        let mut v = c(0.0, 0.0);
        let mut scale = 0.0f64;
        for (k, &ck) in dense.iter().enumerate() {
            v += z.powi(k as i32) * ck;
            scale = scale.max((ck * z.norm().powi(k as i32)).abs());
        }
        assert!(v.norm() / scale <= 1e-10);
    }
}

#[test]
fn rational_powers_use_principal_branch() {
    // q = 2, N = 2, ε₂/ε₁ = 1/2: 2z^{3/2} + z^3 → shift 3/2, 2 + z^{3/2}.
    let p = build_z_polynomial(2, dq(2.0), 0.5, false).unwrap();
    assert_eq!(p.shift(), 1.5);
    assert_eq!(p.terms(), &[(0.0, 2.0), (1.5, 1.0)]);
    assert_eq!(p.branch_denominator(64), Some(2));
    let set = roots_z_plane(&p).unwrap();
    assert_eq!(set.meta.branch_denominator, 2);
    assert_eq!(set.len(), 2);
    let r = 2f64.powf(2.0 / 3.0);
    for want in [
        Complex64::from_polar(r, 2.0 * PI / 3.0),
        Complex64::from_polar(r, -2.0 * PI / 3.0),
    ] {
        assert!(
            set.zeros.iter().any(|z| (z - want).norm() < 1e-12),
            "{want}"
        );
    }
    assert!(roots_integer_powers(&p).is_err());

    let p = build_z_polynomial(3, dq(2.0), PI, false).unwrap();
    assert!(matches!(roots_z_plane(&p), Err(Error::Precondition(_))));
}

#[test]
fn period_detection() {
    assert!((commensurate_period(&[0.0, 1.0]).unwrap() - 2.0 * PI).abs() < 1e-15);
    assert!((commensurate_period(&[0.0, 1.0, 3.0, 7.0]).unwrap() - 2.0 * PI).abs() < 1e-15);
    assert!((commensurate_period(&[0.5, 1.5, 2.0]).unwrap() - 4.0 * PI).abs() < 1e-14);
    assert!((commensurate_period(&[0.0, 2.0, 3.0]).unwrap() - 2.0 * PI).abs() < 1e-14);
    assert_eq!(commensurate_period(&[0.0, 1.0, PI]), None);
    assert_eq!(commensurate_period(&[1.0]), None);
}

#[test]
fn single_particle_zeros_in_beta_plane() {
    let spec = SystemSpec::two_level(0.0, 1.0, 1, dq(2.0)).unwrap();
    let region = Region::new((-0.5, 0.5), (0.0, 10.0)).unwrap();
    let set = zeros_beta_plane(&spec, Target::Partition, &region, Grid { m: 16, k: 40 }).unwrap();
    assert_eq!(set.len(), 2, "{:?}", set.zeros);
    for (z, want) in set.zeros.iter().zip([PI, 3.0 * PI]) {
        assert!(z.re.abs() < 1e-8 && (z.im - want).abs() < 1e-8, "{z}");
    }
    assert!(set.worst_residual() <= RESIDUAL_BOUND);
    assert_eq!(set.meta.unresolved_cells, 0);
    assert!((set.meta.period.unwrap() - 2.0 * PI).abs() < 1e-14);
}

#[test]
fn three_particle_correlation_zeros_match_closed_form() {
    let eps = (0.0, 1.0);
    let q = dq(2.0);
    let spec = SystemSpec::two_level(eps.0, eps.1, 3, q).unwrap();
    let region = Region::new((-0.6, 0.7), (-7.3, 7.1)).unwrap();
    let set = zeros_beta_plane(&spec, Target::Correlation, &region, Grid { m: 16, k: 64 }).unwrap();
    let fam = analytic::zeros_correlation_n3(eps, q, -5..=4).unwrap();
    let expected: Vec<f64> = fam
        .members()
        .into_iter()
        .map(|(_, bt)| bt.beta1)
        .filter(|b| *b > -7.3 && *b < 7.1)
        .collect();
    assert_eq!(set.len(), expected.len());
    for (z, want) in set.zeros.iter().zip(expected) {
        assert!(
            z.re.abs() < 1e-8 && (z.im - want).abs() < 1e-8,
            "{z} vs {want}"
        );
    }
}

#[test]
fn undeformed_gas_has_no_zeros_at_positive_beta() {
    for n in 1..=4 {
        let spec = SystemSpec::two_level(0.3, 1.1, n, dq(1.0)).unwrap();
        let region = Region::new((0.05, 2.0), (-10.0, 10.0)).unwrap();
        let set =
            zeros_beta_plane(&spec, Target::Partition, &region, Grid { m: 16, k: 64 }).unwrap();
        assert!(set.is_empty(), "N={n}: {:?}", set.zeros);
    }
}

#[test]
fn beta_plane_agrees_with_z_plane() {
    // ε₁ = 1, ε₂ = 0: z = e^{−β̃} and each β̃-zero maps onto a polynomial root.
    let spec = SystemSpec::two_level(1.0, 0.0, 5, dq(2.0)).unwrap();
    let region = default_region(&spec, Target::Partition);
    let grid = default_grid(&spec, Target::Partition, &region);
    let plane = zeros_beta_plane(&spec, Target::Partition, &region, grid).unwrap();
    let poly = build_z_polynomial(5, dq(2.0), 0.0, false).unwrap();
    let roots = roots_integer_powers(&poly).unwrap();
    assert_eq!(plane.len(), roots.len());
    for bt in &plane.zeros {
        let z = (-bt).exp();
        let nearest = roots
            .zeros
            .iter()
            .map(|r| (r - z).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest <= 1e-8, "{bt} → {z}: {nearest}");
    }
}

#[test]
fn region_and_grid_validation() {
    let spec = SystemSpec::two_level(0.0, 1.0, 2, dq(2.0)).unwrap();
    assert!(Region::new((1.0, 1.0), (0.0, 1.0)).is_err());
    let bad = Region {
        beta: (0.0, 1.0),
        beta1: (2.0, -2.0),
    };
    assert!(zeros_beta_plane(&spec, Target::Partition, &bad, Grid { m: 8, k: 8 }).is_err());
    let region = Region::new((-1.0, 1.0), (0.0, 1.0)).unwrap();
    assert!(zeros_beta_plane(&spec, Target::Partition, &region, Grid { m: 4, k: 8 }).is_err());
    let spec = SystemSpec::two_level(0.0, 1.0, 1, dq(2.0)).unwrap();
    assert!(matches!(
        zeros_beta_plane(&spec, Target::Correlation, &region, Grid { m: 8, k: 8 }),
        Err(Error::IdenticallyZero(_))
    ));
}

#[test]
fn unit_circle_report() {
    let p = build_z_polynomial(5, dq(2.0), 0.0, false).unwrap();
    let set = roots_integer_powers(&p).unwrap();
    let (max, mean) = set.unit_circle_deviation();
    assert!(max > 1e-6 && mean <= max);
}

#[test]
fn conjugate_closure_helper() {
    assert!(is_conjugate_closed(
        &[c(1.0, 2.0), c(-3.0, 0.0), c(1.0, -2.0)],
        1e-12
    ));
    assert!(!is_conjugate_closed(&[c(1.0, 2.0), c(1.0, 2.0)], 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_polynomials_roots(
        powers in proptest::collection::btree_set(1u32..40, 1..6),
        coeffs in proptest::collection::vec(0.1f64..10.0, 6),
    ) {
        let mut raw = vec![(0.0, 1.0)];
        raw.extend(powers.iter().zip(&coeffs).map(|(&p, &c)| (p as f64, c)));
        let poly = SparsePolynomial::new(raw).unwrap();
        let set = roots_integer_powers(&poly).unwrap();
        prop_assert_eq!(set.len(), poly.integer_degree().unwrap());
        prop_assert!(set.worst_residual() <= RESIDUAL_BOUND);
        prop_assert!(is_conjugate_closed(&set.zeros, 1e-9));
        prop_assert!(!set.zeros.iter().any(|z| z.im.abs() <= 1e-9 && z.re > 0.0));
    }
}
