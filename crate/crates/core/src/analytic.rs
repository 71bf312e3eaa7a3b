//! Closed forms for the two-level gas with one and three particles.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::RangeInclusive;
use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::dd;
use crate::error::{Error, Result};
use crate::qmath::{ComplexTemperature, DeformationParam};

/// Members `n = −3…3` unless a range is given.
pub const DEFAULT_N_RANGE: RangeInclusive<i64> = -3..=3;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which closed form a zero family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Fisher zeros of `Z` for one particle.
    PartitionN1,
    /// Zeros of `Z_c` for three particles.
    CorrelationN3,
}

/// Zeros on the imaginary axis, `β = 0`, `β₁(n) = π(2n+1)/spacing`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroFamily {
    pub kind: FamilyKind,
    pub beta: f64,
    /// `Δε` for one particle, `qΔε` for three.
    pub spacing: f64,
    pub n_range: RangeInclusive<i64>,
}

impl ZeroFamily {
    pub fn beta1(&self, n: i64) -> f64 {
        PI * (2 * n + 1) as f64 / self.spacing
    }

    pub fn members(&self) -> Vec<(i64, ComplexTemperature)> {
        self.n_range
            .clone()
            .map(|n| (n, ComplexTemperature::new(self.beta, self.beta1(n))))
            .collect()
    }

    /// True when `β₁·spacing ≡ π (mod 2π)`, the sign of `n` being immaterial.
    pub fn contains(&self, bt: &ComplexTemperature, tol: f64) -> bool {
        if (bt.beta - self.beta).abs() > tol {
            return false;
        }
        let x = bt.beta1 * self.spacing / PI;
        let odd = 2.0 * libm::floor(x / 2.0) + 1.0;
        (x - odd).abs() * PI / self.spacing.abs() <= tol
    }
}

fn gap(eps: (f64, f64)) -> Result<f64> {
    let d = eps.1 - eps.0;
    if d == 0.0 {
        Err(Error::DegenerateSpectrum)
    } else {
        Ok(d)
    }
}

/// `Z(β̃) = e^{−β̃ε₁}(1 + e^{−β̃Δε})` for one particle.
pub fn partition_closed_n1(bt: &ComplexTemperature, eps: (f64, f64)) -> Complex64 {
    let b = bt.as_complex();
    let de = TwoFloat::new_sub(eps.1, eps.0);
    dd::exp_neg(b, eps.0.into()) * (ONE + dd::exp_neg(b, de))
}

pub fn zeros_partition_n1(eps: (f64, f64), n_range: RangeInclusive<i64>) -> Result<ZeroFamily> {
    Ok(ZeroFamily {
        kind: FamilyKind::PartitionN1,
        beta: 0.0,
        spacing: gap(eps)?,
        n_range,
    })
}

/// `Z_c(β̃) = (1+q) e^{−β̃(ε₁(q+1)+ε₂)} (1 + e^{−β̃qΔε})` for three particles.
pub fn zc_closed_n3(bt: &ComplexTemperature, eps: (f64, f64), q: DeformationParam) -> Complex64 {
    let b = bt.as_complex();
    let q = q.get();
    let de = TwoFloat::new_sub(eps.1, eps.0);
    let lead = TwoFloat::new_add(q, 1.0) * eps.0 + eps.1;
    dd::exp_neg(b, lead) * (ONE + dd::exp_neg(b, de * q)) * (1.0 + q)
}

pub fn zeros_correlation_n3(
    eps: (f64, f64),
    q: DeformationParam,
    n_range: RangeInclusive<i64>,
) -> Result<ZeroFamily> {
    Ok(ZeroFamily {
        kind: FamilyKind::CorrelationN3,
        beta: 0.0,
        spacing: q.get() * gap(eps)?,
        n_range,
    })
}

/// Times `τ = ħπ(2n+1)/((q−1)Δε)` at which the three-particle correlator vanishes.
pub fn zero_times_n3(
    eps: (f64, f64),
    q: DeformationParam,
    hbar: f64,
    n_range: RangeInclusive<i64>,
) -> Result<Vec<f64>> {
    let de = gap(eps)?;
    if q.is_undeformed() {
        return Err(Error::Domain(
            "no finite zero times at q = 1: the zeros escape to infinity".into(),
        ));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Domain("hbar must be positive and finite".into()));
    }
    let rate = (q.get() - 1.0) * de;
    Ok(n_range
        .map(|n| hbar * PI * (2 * n + 1) as f64 / rate)
        .collect())
}
