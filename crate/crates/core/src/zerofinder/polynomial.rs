use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::rational::{lcm, rational_approx};
use super::DENSE_DEGREE_CAP;
use crate::error::{Error, Result};
use crate::qmath::{self, DeformationParam};
use crate::sum::ComplexKahanSum;

const INTEGER_TOL: f64 = 1e-9;

fn nearest_integer(p: f64) -> Option<i64> {
    let r = libm::round(p);
    ((p - r).abs() <= INTEGER_TOL && r.abs() < i32::MAX as f64).then_some(r as i64)
}

/// `Σ c_k z^{p_k}` with real powers, strictly increasing, normalized so the
/// smallest power is zero. The factored-out power is kept in `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial {
    terms: Vec<(f64, f64)>,
    shift: f64,
}

impl SparsePolynomial {
    /// Sort, merge colliding powers, drop vanishing coefficients and normalize.
    pub fn new(mut raw: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(p, c)) = raw.iter().find(|(p, c)| !p.is_finite() || !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite term {c}·z^{p}")));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut terms: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (p, c) in raw {
            match terms.last_mut() {
                Some(last) if (p - last.0).abs() <= 1e-12 * p.abs().max(1.0) => last.1 += c,
                _ => terms.push((p, c)),
            }
        }
        terms.retain(|&(_, c)| c != 0.0);
        if terms.is_empty() {
            return Err(Error::IdenticallyZero(
                "polynomial is identically zero".into(),
            ));
        }
        let shift = terms[0].0;
        for t in &mut terms {
            t.0 -= shift;
        }
        // Snap powers that are integers up to rounding.
        for t in &mut terms {
            if let Some(k) = nearest_integer(t.0) {
                t.0 = k as f64;
            }
        }
        Ok(Self { terms, shift })
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Largest power after normalization.
    pub fn degree(&self) -> f64 {
        self.terms.last().map_or(0.0, |t| t.0)
    }

    /// Degree when every power is an integer.
    pub fn integer_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .map(|t| nearest_integer(t.0))
            .collect::<Option<Vec<_>>>()
            .map(|ks| ks.last().copied().unwrap_or(0) as usize)
    }

    /// Smallest `d ≤ max_den` making every power times `d` an integer.
    pub fn branch_denominator(&self, max_den: u64) -> Option<u64> {
        let mut d = 1u64;
        for &(p, _) in &self.terms {
            let (_, den) = rational_approx(p, max_den, 1e-12 * p.abs().max(1.0))?;
            d = lcm(d, den)?;
            if d > max_den {
                return None;
            }
        }
        Some(d)
    }

    /// The same polynomial in `w` with `z = w^factor`.
    pub fn scale_powers(&self, factor: f64) -> Result<Self> {
        Self::new(self.terms.iter().map(|&(p, c)| (p * factor, c)).collect())
    }

    /// Dense coefficient vector `[c_0, …, c_deg]` for integer powers.
    pub fn dense(&self) -> Result<Vec<f64>> {
        let deg = self
            .integer_degree()
            .ok_or_else(|| Error::Precondition("dense expansion needs integer powers".into()))?;
        if deg < 1 {
            return Err(Error::Precondition(
                "polynomial is degenerate: degree 0 after normalization".into(),
            ));
        }
        if deg > DENSE_DEGREE_CAP {
            return Err(Error::Resource {
                size: deg,
                cap: DENSE_DEGREE_CAP,
            });
        }
        let mut c = vec![0.0; deg + 1];
        for &(p, coeff) in &self.terms {
            c[p as usize] += coeff;
        }
        Ok(c)
    }

    fn term(z: Complex64, p: f64) -> Complex64 {
        if p == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        match nearest_integer(p) {
            Some(k) => z.powi(k as i32),
            // Principal branch z^p = e^{p ln z}.
            None => (z.ln() * p).exp(),
        }
    }

    /// Term-by-term evaluation with compensated accumulation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(p, c)| Self::term(z, p) * c)
            .collect::<ComplexKahanSum>()
            .value()
    }

    /// Largest single-term magnitude `|c_k z^{p_k}|`.
    pub fn max_term(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.terms
            .iter()
            .map(|&(p, c)| c.abs() * if p == 0.0 { 1.0 } else { libm::pow(r, p) })
            .fold(0.0, f64::max)
    }

    /// `|P(z)| / max_k |c_k z^{p_k}|`.
    pub fn residual(&self, z: Complex64) -> f64 {
        let scale = self.max_term(z);
        if scale == 0.0 {
            return self.eval(z).norm();
        }
        self.eval(z).norm() / scale
    }
}

/// `Σ_{n₁=0}^{N} c(n₁) z^{[n₁]_q + [N−n₁]_q·ε₂/ε₁}` with `c = 1` for the partition
/// function or `c = [n₁]_q[N−n₁]_q` for the correlation numerator.
pub fn build_z_polynomial(
    particles: usize,
    q: DeformationParam,
    eps_ratio: f64,
    weighted: bool,
) -> Result<SparsePolynomial> {
    if particles < 1 {
        return Err(Error::Precondition(
            "the z-plane polynomial needs N >= 1".into(),
        ));
    }
    if !eps_ratio.is_finite() {
        return Err(Error::Domain(format!(
            "energy ratio must be finite, got {eps_ratio}"
        )));
    }
    let raw = (0..=particles)
        .map(|n1| {
            let a = qmath::q_int(n1, q);
            let b = qmath::q_int(particles - n1, q);
            let c = if weighted { a * b } else { 1.0 };
            (a + b * eps_ratio, c)
        })
        .collect();
    SparsePolynomial::new(raw).map_err(|e| match e {
        Error::IdenticallyZero(_) => {
            Error::IdenticallyZero("correlation function identically zero".into())
        }
        other => other,
    })
}
