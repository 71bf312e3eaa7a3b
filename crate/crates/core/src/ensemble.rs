//! Canonical (fixed-N) ensemble of q-deformed bosons on `s` levels.
//!
//! Every trace here runs over the compositions `(n₁,…,n_s)` of the particle
//! number, so the sums never factorize over levels.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::dd;
use crate::error::{Error, Result};
use crate::qmath::{self, ComplexTemperature, DeformationParam};
use crate::sum::ComplexKahanSum;

/// Largest `|Re(β̃)·E|` accepted before `exp` leaves the `f64` range.
pub const EXP_SAFE_BOUND: f64 = 700.0;

/// Physical configuration: level energies, particle number, deformation and ħ.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    eps: Vec<f64>,
    particles: usize,
    q: DeformationParam,
    hbar: f64,
}

impl SystemSpec {
    pub fn new(eps: Vec<f64>, particles: usize, q: DeformationParam, hbar: f64) -> Result<Self> {
        if eps.is_empty() {
            return Err(Error::Domain("a system needs at least one level".into()));
        }
        if let Some(e) = eps.iter().find(|e| !e.is_finite()) {
            return Err(Error::Domain(format!(
                "level energies must be finite, got {e}"
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Domain(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        Ok(Self {
            eps,
            particles,
            q,
            hbar,
        })
    }

    /// Two levels `ε₁, ε₂` with `ħ = 1`.
    pub fn two_level(eps1: f64, eps2: f64, particles: usize, q: DeformationParam) -> Result<Self> {
        Self::new(vec![eps1, eps2], particles, q, 1.0)
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn levels(&self) -> usize {
        self.eps.len()
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn q(&self) -> DeformationParam {
        self.q
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_eps(&self, eps: Vec<f64>) -> Result<Self> {
        if eps.len() != self.eps.len() {
            return Err(Error::Domain("level count cannot change".into()));
        }
        Self::new(eps, self.particles, self.q, self.hbar)
    }

    pub fn with_q(&self, q: DeformationParam) -> Self {
        Self { q, ..self.clone() }
    }
}

/// One microstate label `(n₁,…,n_s)` with `Σ nᵢ = N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector(Vec<usize>);

impl OccupationVector {
    pub fn new(n: Vec<usize>) -> Self {
        Self(n)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl core::ops::Deref for OccupationVector {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Lexicographic iterator over the compositions of `N` into `s` ordered parts.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = OccupationVector;

    fn next(&mut self) -> Option<OccupationVector> {
        let out = self.current.take()?;
        let s = out.len();
        // Rightmost position (excluding the last) with a nonzero tail after it.
        let mut tail = out[s - 1];
        let mut pivot = None;
        for i in (0..s - 1).rev() {
            if tail > 0 {
                pivot = Some(i);
                break;
            }
            tail += out[i];
        }
        if let Some(i) = pivot {
            let mut succ = out.clone();
            succ[i] += 1;
            for slot in succ.iter_mut().skip(i + 1) {
                *slot = 0;
            }
            succ[s - 1] = tail - 1;
            self.current = Some(succ);
        }
        Some(OccupationVector(out))
    }
}

pub fn compositions(particles: usize, levels: usize) -> Compositions {
    let current = if levels == 0 {
        None
    } else {
        let mut first = vec![0; levels];
        first[levels - 1] = particles;
        Some(first)
    };
    Compositions { current }
}

/// `C(N+s−1, s−1)`, saturating at `usize::MAX`.
pub fn composition_count(particles: usize, levels: usize) -> usize {
    if levels == 0 {
        return 0;
    }
    let k = (levels - 1) as u128;
    let n = (particles + levels - 1) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = match c.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return usize::MAX,
        };
    }
    usize::try_from(c).unwrap_or(usize::MAX)
}

/// `E = Σᵢ εᵢ·[nᵢ]_q`.
pub fn energy(occ: &OccupationVector, spec: &SystemSpec) -> f64 {
    energy_dd(occ, spec).hi()
}

fn energy_dd(occ: &OccupationVector, spec: &SystemSpec) -> TwoFloat {
    occ.iter()
        .zip(&spec.eps)
        .fold(TwoFloat::from(0.0), |acc, (&n, &e)| {
            acc + dd::q_int(n, spec.q) * e
        })
}

/// `Πⱼ [nⱼ]_q`, the diagonal matrix element of `Πⱼ a⁺ⱼ aⱼ`.
pub fn weight_product(occ: &OccupationVector, q: DeformationParam) -> f64 {
    occ.iter().map(|&n| qmath::q_int(n, q)).product()
}

/// Which constrained trace to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// `Z(β̃) = Σ e^{−β̃E}`.
    Partition,
    /// `Z_c(β̃) = Σ e^{−β̃E}·Πⱼ[nⱼ]_q`.
    Correlation,
}

/// The `(energy, weight)` pairs of a constrained trace, in composition order.
///
/// Both `Z` and `Z_c` are exponential sums `Σ w·e^{−β̃E}`; this is the form
/// the β̃-plane zero search works with.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    terms: Vec<(f64, f64)>,
    /// Low parts of the energies, which are carried in double-double.
    lo: Vec<f64>,
}

impl Spectrum {
    pub fn of(spec: &SystemSpec, target: Target) -> Self {
        let terms = compositions(spec.particles, spec.levels())
            .filter_map(|occ| {
                let w = match target {
                    Target::Partition => 1.0,
                    Target::Correlation => weight_product(&occ, spec.q),
                };
                (w != 0.0).then(|| (energy_dd(&occ, spec), w))
            })
            .collect::<Vec<_>>();
        Self {
            lo: terms.iter().map(|t| t.0.lo()).collect(),
            terms: terms.into_iter().map(|(e, w)| (e.hi(), w)).collect(),
        }
    }

    pub fn from_terms(terms: Vec<(f64, f64)>) -> Self {
        Self {
            lo: vec![0.0; terms.len()],
            terms,
        }
    }

    fn exps(&self, bt: Complex64) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        self.terms
            .iter()
            .zip(&self.lo)
            .map(move |(&(e, w), &lo)| (e, w, dd::exp_neg(bt, TwoFloat::new_add(e, lo))))
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn guard(&self, bt: Complex64) -> Result<()> {
        for &(e, _) in &self.terms {
            let x = (bt.re * e).abs();
            if x > EXP_SAFE_BOUND {
                return Err(Error::Overflow {
                    exponent: x,
                    bound: EXP_SAFE_BOUND,
                });
            }
        }
        Ok(())
    }

    /// `Σ w·e^{−β̃E}` with compensated accumulation.
    pub fn eval(&self, bt: Complex64) -> Result<Complex64> {
        self.guard(bt)?;
        Ok(self
            .exps(bt)
            .map(|(_, w, x)| x * w)
            .collect::<ComplexKahanSum>()
            .value())
    }

    /// Value and `d/dβ̃` of the exponential sum.
    pub fn eval_with_derivative(&self, bt: Complex64) -> Result<(Complex64, Complex64)> {
        self.guard(bt)?;
        let mut f = ComplexKahanSum::new();
        let mut df = ComplexKahanSum::new();
        for (e, w, x) in self.exps(bt) {
            let t = x * w;
            f.add(t);
            df.add(t * (-e));
        }
        Ok((f.value(), df.value()))
    }

    /// Largest single-term magnitude at `β̃`, the natural residual scale.
    pub fn max_term(&self, bt: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|&(e, w)| (w * libm::exp(-bt.re * e)).abs())
            .fold(0.0, f64::max)
    }

    /// `Σ |w·e^{−β̃E}|`.
    pub fn abs_sum(&self, bt: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|&(e, w)| (w * libm::exp(-bt.re * e)).abs())
            .sum()
    }

    /// Distinct energies carried by nonzero terms.
    pub fn energies(&self) -> Vec<f64> {
        let mut es: Vec<f64> = self.terms.iter().map(|&(e, _)| e).collect();
        es.sort_by(f64::total_cmp);
        es.dedup();
        es
    }
}

/// `Z(β̃) = Σ_{Σn=N} e^{−β̃E(n)}`.
pub fn partition(spec: &SystemSpec, bt: &ComplexTemperature) -> Result<Complex64> {
    Spectrum::of(spec, Target::Partition).eval(bt.as_complex())
}

/// `Z_c(β̃) = Σ_{Σn=N} e^{−β̃E(n)}·Πⱼ[nⱼ]_q`.
pub fn zc(spec: &SystemSpec, bt: &ComplexTemperature) -> Result<Complex64> {
    Spectrum::of(spec, Target::Correlation).eval(bt.as_complex())
}

/// The two-time correlator `⟨Πⱼ a⁺ⱼ(t₁) aⱼ(t₂)⟩` together with its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorValue {
    pub value: Complex64,
    pub beta_tilde: ComplexTemperature,
    pub prefactor: Complex64,
    pub zc: Complex64,
    /// `Z(β)` at the real physical temperature.
    pub z_real: f64,
}

/// `e^{iΣεⱼτ/qħ}·Z_c(β̃)/Z(β)` with `τ = t₁ − t₂`.
///
/// The denominator is the partition function at the real `β`, not at `β̃`.
/// `β = 0` is accepted: `Z(0)` is the number of compositions.
pub fn correlator(spec: &SystemSpec, beta: f64, t1: f64, t2: f64) -> Result<CorrelatorValue> {
    let tau = t1 - t2;
    let bt = qmath::complex_beta(beta, tau, spec.q, spec.hbar)?;
    let pre = qmath::prefactor(&spec.eps, tau, spec.q, spec.hbar)?;
    let numerator = zc(spec, &bt)?;
    let z_real = partition(spec, &bt.real_part())?.re;
    if z_real.is_nan() || z_real <= 0.0 {
        return Err(Error::Underflow);
    }
    Ok(CorrelatorValue {
        value: pre * numerator / z_real,
        beta_tilde: bt,
        prefactor: pre,
        zc: numerator,
        z_real,
    })
}

/// Relative discrepancy of `(−1/β̃)^s·Πⱼ ∂/∂εⱼ Z(β̃)` against `Z_c(β̃)`, the
/// mixed derivative taken by nested central differences of step `h`.
///
/// The discrepancy is measured against `max(|Z_c|, max term of Z_c)`; when
/// every weight vanishes it falls back to the partition-function scale
/// divided by `|β̃|^s`.
pub fn derivative_identity_residual(
    spec: &SystemSpec,
    bt: &ComplexTemperature,
    h: f64,
) -> Result<f64> {
    let b = bt.as_complex();
    if b.norm() == 0.0 {
        return Err(Error::Domain(
            "derivative identity needs a nonzero temperature".into(),
        ));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let s = spec.levels();
    if s >= usize::BITS as usize {
        return Err(Error::Resource {
            size: s,
            cap: usize::BITS as usize - 1,
        });
    }
    let mut acc = ComplexKahanSum::new();
    let mut shifted = spec.eps.clone();
    for mask in 0usize..(1 << s) {
        let mut sign = 1.0;
        for (j, e) in shifted.iter_mut().enumerate() {
            if mask & (1 << j) != 0 {
                *e = spec.eps[j] + h;
            } else {
                *e = spec.eps[j] - h;
                sign = -sign;
            }
        }
        let z = partition(&spec.with_eps(shifted.clone())?, bt)?;
        acc.add(z * sign);
    }
    let mixed = acc.value() / libm::pow(2.0 * h, s as f64);
    let lhs = mixed * (-b.inv()).powu(s as u32);

    let zc_spec = Spectrum::of(spec, Target::Correlation);
    let target = zc_spec.eval(b)?;
    let mut scale = target.norm().max(zc_spec.max_term(b));
    if scale == 0.0 {
        scale = Spectrum::of(spec, Target::Partition).max_term(b) / libm::pow(b.norm(), s as f64);
    }
    Ok((lhs - target).norm() / scale)
}
