//! Scalar kernel: q-numbers, the complex inverse temperature produced by
//! q-deformed time evolution, and the unit-modulus correlator prefactor.

use alloc::format;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this distance from one the exact limit `[x]_1 = x` is used.
pub const Q_EXACT_LIMIT: f64 = 1e-12;
/// Below this distance from one the denominator is also taken through `expm1`.
pub const Q_EXPM1_BAND: f64 = 1e-6;
/// Integer arguments up to this size are summed as a geometric series.
const GEOMETRIC_MAX: f64 = 65536.0;

/// Deformation parameter `q > 0` of the commutator `a a⁺ − q a⁺ a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeformationParam(f64);

impl DeformationParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(Self(q))
        } else {
            Err(Error::Domain(format!(
                "deformation q must be positive and finite, got {q}"
            )))
        }
    }

    /// The undeformed boson, `q = 1`.
    pub const fn undeformed() -> Self {
        Self(1.0)
    }

    pub const fn get(self) -> f64 {
        self.0
    }

    /// True when `q` is routed to the exact `q = 1` branch.
    pub fn is_undeformed(self) -> bool {
        (self.0 - 1.0).abs() < Q_EXACT_LIMIT
    }

    /// `1 − 1/q`, exactly zero on the undeformed branch.
    pub fn deformation_rate(self) -> f64 {
        if self.is_undeformed() {
            0.0
        } else {
            1.0 - 1.0 / self.0
        }
    }
}

/// The q-number `[x]_q = (qˣ − 1)/(q − 1)`, continuous through `q = 1`.
///
/// Integer arguments are summed as `Σ_{k<n} qᵏ`; real arguments go through
/// `expm1(x ln q)` so the numerator never cancels.
pub fn q_number(x: f64, q: DeformationParam) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "q-number argument must be finite and >= 0, got {x}"
        )));
    }
    let q = q.get();
    let dist = (q - 1.0).abs();
    if dist < Q_EXACT_LIMIT {
        return Ok(x);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == libm::floor(x) && x <= GEOMETRIC_MAX {
        // 1 + q + … + q^{n−1} in Horner form: no cancellation, exact for dyadic q.
        let n = x as u32;
        return Ok((1..n).fold(1.0, |acc, _| 1.0 + q * acc));
    }
    let lq = libm::log(q);
    if dist < Q_EXPM1_BAND {
        return Ok(libm::expm1(x * lq) / libm::expm1(lq));
    }
    Ok(libm::expm1(x * lq) / (q - 1.0))
}

/// Integer-argument convenience used by the occupation-number code paths.
pub(crate) fn q_int(n: usize, q: DeformationParam) -> f64 {
    // n >= 0 is guaranteed by the type, so the domain check cannot fail.
    q_number(n as f64, q).unwrap_or(f64::NAN)
}

/// Where a complex temperature came from when it was built from real time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub tau: f64,
    pub q: DeformationParam,
    pub hbar: f64,
}

/// `β̃ = β + iβ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTemperature {
    pub beta: f64,
    pub beta1: f64,
    pub provenance: Option<Provenance>,
}

impl ComplexTemperature {
    /// A bare point of the complex inverse-temperature plane.
    pub const fn new(beta: f64, beta1: f64) -> Self {
        Self {
            beta,
            beta1,
            provenance: None,
        }
    }

    pub const fn real(beta: f64) -> Self {
        Self::new(beta, 0.0)
    }

    pub fn from_complex(bt: Complex64) -> Self {
        Self::new(bt.re, bt.im)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.beta, self.beta1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.beta, -self.beta1)
    }

    /// The same temperature with the imaginary part dropped.
    pub fn real_part(&self) -> Self {
        Self::real(self.beta)
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "hbar must be positive and finite, got {hbar}"
        )))
    }
}

/// Complex temperature reached after evolving for `τ = t₁ − t₂`:
/// `β₁ = −(1 − 1/q)·τ/ħ`, identically zero at `q = 1`.
pub fn complex_beta(
    beta: f64,
    tau: f64,
    q: DeformationParam,
    hbar: f64,
) -> Result<ComplexTemperature> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Domain(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite, got {tau}")));
    }
    check_hbar(hbar)?;
    let beta1 = if q.is_undeformed() {
        0.0
    } else {
        -q.deformation_rate() * tau / hbar
    };
    Ok(ComplexTemperature {
        beta,
        beta1,
        provenance: Some(Provenance { tau, q, hbar }),
    })
}

/// `exp(i·Σⱼ εⱼ·τ/(q·ħ))`.
pub fn prefactor(eps: &[f64], tau: f64, q: DeformationParam, hbar: f64) -> Result<Complex64> {
    if eps.is_empty() {
        return Err(Error::Domain(
            "prefactor needs at least one level energy".into(),
        ));
    }
    check_hbar(hbar)?;
    let total: f64 = eps.iter().sum();
    let phase = total * tau / (q.get() * hbar);
    let (s, c) = libm::sincos(phase);
    Ok(Complex64::new(c, s))
}
