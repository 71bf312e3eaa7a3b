//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qgas::suite;
use qgas_core::analytic::{self, ZeroFamily};
use qgas_core::ensemble::{correlator, Spectrum};
use qgas_core::qmath::complex_beta;
use qgas_core::zerofinder::{
    build_z_polynomial, find_roots_z_plane, is_conjugate_closed, zeros_beta_plane, Grid, Region,
    ZeroSet,
};
use qgas_core::{ComplexTemperature, DeformationParam, SystemSpec, Target};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_241;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn dq(q: f64) -> DeformationParam {
    DeformationParam::new(q).unwrap()
}

fn within(t: Duration, limit: f64) -> Result<(), String> {
    if t.as_secs_f64() <= limit {
        Ok(())
    } else {
        Err(format!("took {:.2} s, limit {limit} s", t.as_secs_f64()))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn figure_sets(n: usize) -> Result<(ZeroSet, ZeroSet), String> {
    let solve = |weighted| {
        build_z_polynomial(n, dq(2.0), 0.0, weighted)
            .and_then(|p| find_roots_z_plane(&p))
            .map_err(|e| e.to_string())
    };
    Ok((solve(false)?, solve(true)?))
}

/// Figure reproduction at q = 2, ε = (1, 0).
fn figure_counts() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (n, fisher, corr) in [(5, 31, 14), (7, 127, 62)] {
        let (f, c) = figure_sets(n)?;
        ensure(f.len() == fisher && c.len() == corr, || {
            format!(
                "N={n}: {} + {} zeros, expected {fisher} + {corr}",
                f.len(),
                c.len()
            )
        })?;
        ensure(
            c.meta.zero_root_multiplicity == 1.0 && f.meta.zero_root_multiplicity == 0.0,
            || format!("N={n}: unexpected z=0 multiplicity"),
        )?;
        let worst = f.worst_residual().max(c.worst_residual());
        ensure(worst <= 1e-10, || format!("N={n}: residual {worst:.2e}"))?;
        ensure(
            is_conjugate_closed(&f.zeros, 1e-9) && is_conjugate_closed(&c.zeros, 1e-9),
            || format!("N={n}: not conjugate-closed"),
        )?;
        parts.push(format!("N={n}: {fisher}+{corr}+z=0, residual {worst:.1e}"));
    }
    let t = start.elapsed();
    within(t, 10.0)?;
    Ok(format!("{}; {:.2} s", parts.join("; "), t.as_secs_f64()))
}

/// More Fisher zeros than particles.
fn count_exceeds_n() -> Outcome {
    let mut parts = Vec::new();
    for n in [5, 7] {
        let (f, _) = figure_sets(n)?;
        ensure(f.len() > n, || format!("N={n}: {} Fisher zeros", f.len()))?;
        parts.push(format!("{} > {n}", f.len()));
    }
    Ok(parts.join(", "))
}

/// Zeros off the unit circle and the figure SVG.
fn off_unit_circle() -> Outcome {
    let mut parts = Vec::new();
    for n in [5, 7] {
        let (f, c) = figure_sets(n)?;
        let all: Vec<f64> = f
            .zeros
            .iter()
            .chain(&c.zeros)
            .map(|z| (z.norm() - 1.0).abs())
            .collect();
        let max = all.iter().copied().fold(0.0, f64::max);
        let mean = all.iter().sum::<f64>() / all.len() as f64;
        ensure(max > 1e-6, || {
            format!("N={n}: all zeros within 1e-6 of |z|=1")
        })?;
        parts.push(format!("N={n}: max {max:.3} mean {mean:.3}"));
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_qgas"))
        .args(["figure1", "--out"])
        .arg(dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("figure1 exited {:?}", out.status.code())
    })?;
    for (panel, fisher, corr) in [("a", 31, 14), ("b", 127, 62)] {
        let svg = fs::read_to_string(dir.path().join(format!("figure1_{panel}.svg")))
            .map_err(|e| e.to_string())?;
        let circles = svg.matches("<circle cx=").count();
        let crosses = svg.matches("<path d=").count();
        ensure(svg.contains("<circle class=\"unit-circle\""), || {
            format!("panel {panel}: no unit circle")
        })?;
        ensure(circles == fisher && crosses == corr, || {
            format!("panel {panel}: {circles} circles, {crosses} crosses")
        })?;
    }
    Ok(parts.join("; ") + "; SVG unit circle and markers present")
}

fn family_check(
    spec: &SystemSpec,
    target: Target,
    family: &ZeroFamily,
    region: Region,
    expected: usize,
) -> Result<(), String> {
    let set = zeros_beta_plane(spec, target, &region, Grid { m: 16, k: 128 })
        .map_err(|e| e.to_string())?;
    ensure(set.len() == expected, || {
        format!(
            "found {} zeros, expected {expected}: {:?}",
            set.len(),
            set.zeros
        )
    })?;
    for (n, member) in family.members() {
        let z = member.as_complex();
        ensure(set.zeros.iter().any(|w| (w - z).norm() <= 1e-8), || {
            format!("member n={n} at {z} missing")
        })?;
    }
    for w in &set.zeros {
        ensure(
            family.contains(&ComplexTemperature::from_complex(*w), 1e-8),
            || format!("zero {w} outside the family"),
        )?;
    }
    Ok(())
}

/// One-particle Fisher zeros in the β̃ plane.
fn single_particle_zeros() -> Outcome {
    let start = Instant::now();
    for de in [0.5, 1.0, 2.0] {
        let eps = (0.3, 0.3 + de);
        let spec = SystemSpec::two_level(eps.0, eps.1, 1, dq(2.0)).unwrap();
        let family = analytic::zeros_partition_n1(eps, -2..=2).map_err(|e| e.to_string())?;
        let region = Region::new((-0.5, 0.5), (-4.0 * PI / de, 6.0 * PI / de)).unwrap();
        family_check(&spec, Target::Partition, &family, region, 5)
            .map_err(|e| format!("Δε={de}: {e}"))?;
    }
    let t = start.elapsed();
    within(t, 5.0)?;
    Ok(format!(
        "Δε∈{{0.5,1,2}}: 5/5 members each at β=0 within 1e-8; {:.2} s",
        t.as_secs_f64()
    ))
}

/// Three-particle Z_c zeros and correlator zero times.
fn three_particle_zeros() -> Outcome {
    let eps = (0.0, 1.0);
    let mut worst_time: f64 = 0.0;
    for q in [1.5, 2.0, 3.0] {
        let spec = SystemSpec::two_level(eps.0, eps.1, 3, dq(q)).unwrap();
        let family =
            analytic::zeros_correlation_n3(eps, dq(q), -2..=2).map_err(|e| e.to_string())?;
        let period = 2.0 * PI / (q * (eps.1 - eps.0));
        let region = Region::new((-0.5, 0.5), (-2.25 * period, 2.75 * period)).unwrap();
        family_check(&spec, Target::Correlation, &family, region, 5)
            .map_err(|e| format!("q={q}: {e}"))?;

        let c0 = correlator(&spec, 0.0, 0.0, 0.0)
            .map_err(|e| e.to_string())?
            .value
            .norm();
        for tau in analytic::zero_times_n3(eps, dq(q), 1.0, -1..=1).map_err(|e| e.to_string())? {
            let c = correlator(&spec, 0.0, tau, 0.0)
                .map_err(|e| e.to_string())?
                .value
                .norm();
            worst_time = worst_time.max(c / c0);
        }
    }
    ensure(worst_time <= 1e-10, || {
        format!("|C(τₙ)|/|C(0)| = {worst_time:.2e}")
    })?;
    Ok(format!(
        "q∈{{1.5,2,3}}: Z_c zeros match the family within 1e-8; worst |C(τₙ)|/|C(0)| {worst_time:.1e} at β=0"
    ))
}

/// The undeformed gas: real temperature, no zeros, constant |C|.
fn undeformed() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    let q = dq(1.0);
    for _ in 0..50 {
        let tau = r.random_range(-50.0..50.0);
        let bt = complex_beta(r.random_range(0.0..3.0), tau, q, 1.0).map_err(|e| e.to_string())?;
        ensure(bt.beta1 == 0.0, || {
            format!("β₁ = {} at τ = {tau}", bt.beta1)
        })?;
    }
    let mut zero_sets = 0;
    let mut spread: f64 = 0.0;
    for (n, eps) in [
        (3, vec![0.0, 1.0]),
        (4, vec![0.3, 1.1, 2.0]),
        (2, vec![-0.5, 0.7]),
    ] {
        let spec = SystemSpec::new(eps, n, q, 1.0).unwrap();
        for target in [Target::Partition, Target::Correlation] {
            let region = Region::new((0.01, 3.0), (-0.1, 0.1)).unwrap();
            let set = zeros_beta_plane(&spec, target, &region, Grid { m: 32, k: 16 })
                .map_err(|e| e.to_string())?;
            zero_sets += set.len();
            let sp = Spectrum::of(&spec, target);
            for k in 1..=300 {
                let v = sp
                    .eval(Complex64::new(0.01 * k as f64, 0.0))
                    .map_err(|e| e.to_string())?;
                ensure(v.re > 0.0 && v.im == 0.0, || {
                    format!("{target:?} not positive at β = {}", 0.01 * k as f64)
                })?;
            }
        }
        for beta in [0.0, 0.7] {
            let c0 = correlator(&spec, beta, 0.0, 0.0)
                .map_err(|e| e.to_string())?
                .value
                .norm();
            for _ in 0..50 {
                let tau = r.random_range(-100.0..100.0);
                let c = correlator(&spec, beta, tau, 0.0)
                    .map_err(|e| e.to_string())?
                    .value
                    .norm();
                spread = spread.max((c - c0).abs() / c0);
            }
        }
    }
    ensure(zero_sets == 0, || {
        format!("{zero_sets} zeros found for β > 0")
    })?;
    ensure(spread <= 1e-12, || format!("|C(τ)| varies by {spread:.2e}"))?;
    Ok(format!(
        "β̃ real; no zeros for β > 0; |C(τ)| spread {spread:.1e}"
    ))
}

fn timed_check(limit: Option<f64>, f: impl FnOnce() -> qgas::CliResult<suite::Check>) -> Outcome {
    let start = Instant::now();
    let c = f().map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(c.passed, || {
        format!("{}: worst {:.2e} > {:.0e}", c.name, c.worst, c.bound)
    })?;
    if let Some(limit) = limit {
        within(t, limit)?;
    }
    Ok(format!(
        "{} samples, worst {:.1e} ≤ {:.0e}; {:.2} s",
        c.samples,
        c.worst,
        c.bound,
        t.as_secs_f64()
    ))
}

/// Explicit matrices against the composition sum.
fn brute_force() -> Outcome {
    timed_check(Some(30.0), || suite::brute_vs_ensemble(SEED, 5, false))
}

/// Mixed derivative of Z against Z_c, and its second-order convergence.
fn derivative_identity() -> Outcome {
    let id = timed_check(None, || suite::derivative_identity(SEED))?;
    let order = timed_check(None, || suite::derivative_order(SEED))?;
    Ok(format!("h=1e-4: {id}; |ratio−4| under h/2: {order}"))
}

fn heisenberg() -> Outcome {
    timed_check(None, || suite::heisenberg(SEED))
}

fn closed_forms() -> Outcome {
    timed_check(None, || suite::closed_forms(SEED))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("figure zero counts", figure_counts),
        ("zero count exceeds N", count_exceeds_n),
        ("zeros off the unit circle", off_unit_circle),
        ("one-particle zeros", single_particle_zeros),
        ("three-particle zeros", three_particle_zeros),
        ("undeformed limit", undeformed),
        ("brute force vs ensemble", brute_force),
        ("derivative identity", derivative_identity),
        ("Heisenberg evolution", heisenberg),
        ("closed forms vs enumeration", closed_forms),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
