//! Oracle suite behind `qgas oracle-check`: each check samples its own
//! parameters from a seeded stream and reports the worst residual seen.

use qgas_core::analytic;
use qgas_core::ensemble::{self, correlator, derivative_identity_residual};
use qgas_core::fock_oracle::{self, brute_correlator, build_rep, SECTOR_CAP};
use qgas_core::qmath;
use qgas_core::{ComplexTemperature, DeformationParam, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::num;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub samples: usize,
    pub worst: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, samples: usize, worst: f64, bound: f64) -> Self {
        Self {
            name,
            samples,
            worst,
            bound,
            passed: worst <= bound,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "samples": self.samples,
            "worst": num(self.worst),
            "bound": num(self.bound),
            "passed": self.passed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random (β, τ) points per brute-force equivalence case.
    pub samples: usize,
    /// Negative control: evaluate the matrix side at a perturbed q.
    pub corrupt_q: bool,
}

fn dq(q: f64) -> CliResult<DeformationParam> {
    Ok(DeformationParam::new(q)?)
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `a a⁺ − q a⁺a − 1` away from the top state. The bound scales with
/// `[dim−1]_q` past dim 6, where squaring `√[n]_q` costs an ulp of `[n]_q`.
pub fn qcommutator() -> CliResult<Check> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for q in [0.5, 1.0, 2.0, 3.0] {
        let q = dq(q)?;
        for dim in 2..=16 {
            let rep = build_rep(dim, q)?;
            let scale = if dim <= 6 {
                1.0
            } else {
                qmath::q_number((dim - 1) as f64, q)?
            };
            worst = worst.max(fock_oracle::qcommutator_residual(&rep) / scale);
            samples += 1;
        }
    }
    Ok(Check::new("qcommutator", samples, worst, 1e-13))
}

/// Shift identities with `f(x) = x²`, relative to `[dim]_q²`.
pub fn shift_identities() -> CliResult<Check> {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for q in [0.5, 1.0, 2.0, 3.0] {
        let q = dq(q)?;
        for dim in [4, 8, 12] {
            let rep = build_rep(dim, q)?;
            let scale = qmath::q_number(dim as f64, q)?.powi(2);
            worst = worst.max(fock_oracle::shift_identity_residual(&rep, |x| x * x) / scale);
            samples += 1;
        }
    }
    Ok(Check::new("shift_identities", samples, worst, 1e-12))
}

pub fn unitarity(seed: u64) -> CliResult<Check> {
    let mut r = rng(seed, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let rep = build_rep(16, dq(r.random_range(0.5..3.0))?)?;
        let u = fock_oracle::propagator(
            &rep,
            r.random_range(-2.0..2.0),
            r.random_range(-10.0..10.0),
            1.0,
        );
        worst = u
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(worst, f64::max);
    }
    Ok(Check::new("unitarity", 20, worst, 1e-14))
}

/// Heisenberg evolution by diagonal exponentials against the closed form,
/// dim ≤ 16 and `|εt/ħ| ≤ 20`. The bound is absolute and `‖a‖ = √[dim−1]_q`,
/// so q stays in `[0.5, 2]`, where `‖a‖ ≤ 181`.
pub fn heisenberg(seed: u64) -> CliResult<Check> {
    let mut r = rng(seed, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let dim = r.random_range(2..=16);
        let q = dq(r.random_range(0.5..2.0))?;
        let eps = r.random_range(-2.0..2.0);
        let t = r.random_range(-10.0..10.0);
        worst = worst.max(fock_oracle::heisenberg_residual(
            &build_rep(dim, q)?,
            eps,
            t,
            1.0,
        ));
    }
    Ok(Check::new("heisenberg", 20, worst, 1e-12))
}

/// Explicit trace on the fixed-N sector against the composition sum.
pub fn brute_vs_ensemble(seed: u64, samples: usize, corrupt_q: bool) -> CliResult<Check> {
    let mut r = rng(seed, 5);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for s in 1..=3 {
        for n in 0..=4 {
            for q in [0.5, 1.0, 2.0] {
                let eps: Vec<f64> = (0..s).map(|_| r.random_range(-1.5..1.5)).collect();
                let spec = SystemSpec::new(eps, n, dq(q)?, 1.0)?;
                let matrix_spec = if corrupt_q {
                    spec.with_q(dq(q * 1.001)?)
                } else {
                    spec.clone()
                };
                for _ in 0..samples {
                    let beta = r.random_range(0.05..2.0);
                    let t1 = r.random_range(-6.0..6.0);
                    let t2 = r.random_range(-6.0..6.0);
                    let b = brute_correlator(&matrix_spec, beta, t1, t2, SECTOR_CAP)?;
                    let e = correlator(&spec, beta, t1, t2)?.value;
                    let d = (b - e).norm();
                    let rel = if e.norm() > 0.0 {
                        d / e.norm()
                    } else if d <= 1e-14 {
                        0.0
                    } else {
                        d
                    };
                    worst = worst.max(rel);
                    count += 1;
                }
            }
        }
    }
    Ok(Check::new("brute_vs_ensemble", count, worst, 1e-10))
}

/// A two-level system and a `β̃` with `β > 0`. The stencil sees the exponent
/// through `ρ = |β̃|·[N]_q`: truncation grows like `h²ρ²` and cancellation like
/// `1/(h²ρ²)`, so `ρ` is drawn from `[1, 10]`, where both stay small at `h = 1e-4`.
fn derivative_sample(r: &mut ChaCha8Rng) -> CliResult<(SystemSpec, ComplexTemperature)> {
    let n = r.random_range(2..=5);
    let q = dq(r.random_range(0.5..2.0))?;
    let spec = SystemSpec::two_level(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), n, q)?;
    let rho = r.random_range(1.0..10.0) / qmath::q_number(n as f64, q)?;
    let theta: f64 = r.random_range(-1.4..1.4);
    let bt = ComplexTemperature::new(rho * theta.cos(), rho * theta.sin());
    Ok((spec, bt))
}

/// Derivative identity at `h = 1e-4` over 20 random two-level systems.
pub fn derivative_identity(seed: u64) -> CliResult<Check> {
    let mut r = rng(seed, 6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (spec, bt) = derivative_sample(&mut r)?;
        worst = worst.max(derivative_identity_residual(&spec, &bt, 1e-4)?);
    }
    Ok(Check::new("derivative_identity", 20, worst, 1e-6))
}

/// Worst `|ratio − 4|` of the stencil error under `h = 1e-2 → 5e-3`, where the
/// truncation error dominates cancellation for every sampled `ρ`.
pub fn derivative_order(seed: u64) -> CliResult<Check> {
    let mut r = rng(seed, 6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (spec, bt) = derivative_sample(&mut r)?;
        let coarse = derivative_identity_residual(&spec, &bt, 1e-2)?;
        let fine = derivative_identity_residual(&spec, &bt, 5e-3)?;
        worst = worst.max((coarse / fine - 4.0).abs());
    }
    Ok(Check::new("derivative_order", 20, worst, 1.0))
}

/// Closed forms for one particle and for the three-particle numerator.
pub fn closed_forms(seed: u64) -> CliResult<Check> {
    let mut r = rng(seed, 7);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let eps = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let q = dq(r.random_range(0.3..3.0))?;
        let bt = ComplexTemperature::new(r.random_range(-1.0..1.0), r.random_range(-10.0..10.0));
        let z1 = ensemble::partition(&SystemSpec::two_level(eps.0, eps.1, 1, q)?, &bt)?;
        worst = worst.max((z1 - analytic::partition_closed_n1(&bt, eps)).norm() / z1.norm());
        let z3 = ensemble::zc(&SystemSpec::two_level(eps.0, eps.1, 3, q)?, &bt)?;
        worst = worst.max((z3 - analytic::zc_closed_n3(&bt, eps, q)).norm() / z3.norm());
    }
    Ok(Check::new("closed_forms", 200, worst, 1e-13))
}

/// `|C(τₙ)| / |C(0)|` at the three-particle zero times, `β = 0`.
pub fn zero_times() -> CliResult<Check> {
    let eps = (0.0, 1.0);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for q in [1.5, 2.0, 3.0] {
        let spec = SystemSpec::two_level(eps.0, eps.1, 3, dq(q)?)?;
        let c0 = correlator(&spec, 0.0, 0.0, 0.0)?.value.norm();
        for tau in analytic::zero_times_n3(eps, dq(q)?, 1.0, -1..=1)? {
            worst = worst.max(correlator(&spec, 0.0, tau, 0.0)?.value.norm() / c0);
            count += 1;
        }
    }
    Ok(Check::new("zero_times", count, worst, 1e-10))
}

/// All checks, evaluated in parallel and returned in a fixed order.
pub fn run(opts: SuiteOptions) -> CliResult<Vec<Check>> {
    type Job = Box<dyn Fn(SuiteOptions) -> CliResult<Check> + Send + Sync>;
    let jobs: Vec<Job> = vec![
        Box::new(|_| qcommutator()),
        Box::new(|_| shift_identities()),
        Box::new(|o| unitarity(o.seed)),
        Box::new(|o| heisenberg(o.seed)),
        Box::new(|o| brute_vs_ensemble(o.seed, o.samples, o.corrupt_q)),
        Box::new(|o| derivative_identity(o.seed)),
        Box::new(|o| derivative_order(o.seed)),
        Box::new(|o| closed_forms(o.seed)),
        Box::new(|_| zero_times()),
    ];
    jobs.par_iter().map(|job| job(opts)).collect()
}

pub fn check_failures(checks: &[Check]) -> CliResult<()> {
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Oracle(format!(
            "checks out of bounds: {}",
            failed.join(", ")
        )))
    }
}
