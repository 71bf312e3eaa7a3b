//! Cross-module oracle checks: explicit matrix traces against the composition
//! sums, closed forms against enumeration, and the two zero-finding routes
//! against each other.

use std::f64::consts::PI;

use num_complex::Complex64;
use qgas_core::analytic;
use qgas_core::ensemble::{self, correlator, Spectrum, SystemSpec, Target};
use qgas_core::fock_oracle::{self, brute_correlator, SECTOR_CAP};
use qgas_core::zerofinder::{self, Grid, Region};
use qgas_core::{ComplexTemperature, DeformationParam};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dq(q: f64) -> DeformationParam {
    DeformationParam::new(q).unwrap()
}

#[test]
fn brute_trace_matches_composition_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in 1..=3 {
        for n in 0..=4 {
            for q in [0.5, 1.0, 2.0] {
                let eps: Vec<f64> = (0..s).map(|_| rng.random_range(-1.5..1.5)).collect();
                let spec = SystemSpec::new(eps, n, dq(q), 1.0).unwrap();
                for _ in 0..5 {
                    let beta = rng.random_range(0.05..2.0);
                    let t1 = rng.random_range(-6.0..6.0);
                    let t2 = rng.random_range(-6.0..6.0);
                    let b = brute_correlator(&spec, beta, t1, t2, SECTOR_CAP).unwrap();
                    let e = correlator(&spec, beta, t1, t2).unwrap().value;
                    let scale = e.norm().max(f64::MIN_POSITIVE);
                    assert!(
                        (b - e).norm() <= 1e-10 * scale || (e.norm() == 0.0 && b.norm() <= 1e-14),
                        "s={s} N={n} q={q}: {b} vs {e}"
                    );
                }
            }
        }
    }
}

#[test]
fn correlator_vanishes_exactly_with_zc() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let eps = (0.0, 1.0);
    for q in [1.5, 2.0, 3.0] {
        let spec = SystemSpec::two_level(eps.0, eps.1, 3, dq(q)).unwrap();
        let times = analytic::zero_times_n3(eps, dq(q), 1.0, -1..=1).unwrap();
        let mut points: Vec<(f64, f64)> = times.iter().map(|&t| (0.0, t)).collect();
        points.extend((0..20).map(|_| (rng.random_range(0.0..1.0), rng.random_range(-10.0..10.0))));
        for (beta, tau) in points {
            let c = correlator(&spec, beta, tau, 0.0).unwrap();
            let z_beta = ensemble::partition(&spec, &ComplexTemperature::real(beta))
                .unwrap()
                .re;
            let small_c = c.value.norm() <= 1e-10;
            let small_zc = c.zc.norm() <= 1e-10 * z_beta;
            assert_eq!(small_c, small_zc, "q={q} β={beta} τ={tau}");
        }
    }
}

#[test]
fn closed_forms_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let eps = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let q = dq(rng.random_range(0.3..3.0));
        let bt =
            ComplexTemperature::new(rng.random_range(-1.0..1.0), rng.random_range(-10.0..10.0));
        let z1 =
            ensemble::partition(&SystemSpec::two_level(eps.0, eps.1, 1, q).unwrap(), &bt).unwrap();
        assert!((z1 - analytic::partition_closed_n1(&bt, eps)).norm() <= 1e-13 * z1.norm());
        let z3 = ensemble::zc(&SystemSpec::two_level(eps.0, eps.1, 3, q).unwrap(), &bt).unwrap();
        assert!((z3 - analytic::zc_closed_n3(&bt, eps, q)).norm() <= 1e-13 * z3.norm());
    }
}

#[test]
fn heisenberg_identity_over_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let dim = rng.random_range(2..=16);
        let q = rng.random_range(0.5..2.0);
        let eps = rng.random_range(-2.0..2.0);
        let t = rng.random_range(-10.0..10.0);
        let rep = fock_oracle::build_rep(dim, dq(q)).unwrap();
        worst = worst.max(fock_oracle::heisenberg_residual(&rep, eps, t, 1.0));
    }
    assert!(worst <= 1e-12, "worst heisenberg residual {worst:e}");
}

#[test]
fn argument_principle_counts_figure_zeros() {
    // One period of Z(β̃) for q = 2, ε = (1, 0) holds one zero per polynomial root.
    for (n, expected) in [(5usize, 31usize), (7, 127)] {
        let spec = SystemSpec::two_level(1.0, 0.0, n, dq(2.0)).unwrap();
        let region = zerofinder::default_region(&spec, Target::Partition);
        let grid = zerofinder::default_grid(&spec, Target::Partition, &region);
        let set = zerofinder::zeros_beta_plane(&spec, Target::Partition, &region, grid).unwrap();
        assert_eq!(set.len(), expected);
        assert!(set.worst_residual() <= 1e-10);
    }
}

#[test]
fn spectrum_derivative_matches_finite_difference() {
    let spec = SystemSpec::new(vec![0.4, 1.3, -0.2], 3, dq(1.7), 1.0).unwrap();
    let sp = Spectrum::of(&spec, Target::Correlation);
    let b = Complex64::new(0.3, 1.1);
    let (_, df) = sp.eval_with_derivative(b).unwrap();
    let h = 1e-6;
    let fd = (sp.eval(b + h).unwrap() - sp.eval(b - h).unwrap()) / (2.0 * h);
    assert!((df - fd).norm() <= 1e-7 * df.norm());
}

#[test]
fn single_particle_family_over_gaps() {
    for de in [0.5, 1.0, 2.0] {
        let spec = SystemSpec::two_level(0.0, de, 1, dq(2.0)).unwrap();
        let lo = -4.0 * PI / de;
        let hi = 5.7 * PI / de;
        let region = Region::new((-0.5, 0.5), (lo, hi)).unwrap();
        let set =
            zerofinder::zeros_beta_plane(&spec, Target::Partition, &region, Grid { m: 16, k: 96 })
                .unwrap();
        let fam = analytic::zeros_partition_n1((0.0, de), -2..=2).unwrap();
        for (_, bt) in fam.members() {
            assert!(set
                .zeros
                .iter()
                .any(|z| (z.re - bt.beta).abs() <= 1e-8 && (z.im - bt.beta1).abs() <= 1e-8));
        }
    }
}
