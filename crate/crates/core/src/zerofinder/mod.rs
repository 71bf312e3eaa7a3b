//! Zeros of the partition function and of the correlation numerator.
//!
//! Two routes are provided. In the z-plane (`z = e^{−β̃ε₁}`) the sums become
//! sparse polynomials; when every power is an integer (or a common rational
//! multiple) all roots come from Aberth–Ehrlich iteration on the dense
//! coefficients. In the β̃-plane the sums are handled directly as exponential
//! sums: a grid of cells is screened for argument winding and each flagged
//! cell is refined by Newton's method.

mod aberth;
mod plane;
mod polynomial;
mod rational;

use alloc::vec::Vec;
use num_complex::Complex64;

pub use aberth::{aberth, AberthOptions, AberthOutcome};
pub use plane::{
    commensurate_period, default_grid, default_region, zeros_beta_plane, Grid, Region,
};
pub use polynomial::{build_z_polynomial, SparsePolynomial};
pub use rational::rational_approx;

use crate::error::{Error, Result};

/// Residual bound every reported zero must satisfy.
pub const RESIDUAL_BOUND: f64 = 1e-10;
/// Largest dense degree the integer-power route will expand.
pub const DENSE_DEGREE_CAP: usize = 1 << 14;
/// Largest root-branch denominator tried for rational powers.
pub const MAX_BRANCH_DENOMINATOR: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Aberth,
    GridNewton,
    Analytic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Aberth => "aberth",
            Method::GridNewton => "grid_newton",
            Method::Analytic => "analytic",
        }
    }
}

/// Search metadata attached to a [`ZeroSet`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroMeta {
    pub iterations: usize,
    /// All roots met the residual bound.
    pub converged: bool,
    /// Power of `z` factored out of the polynomial (the `z = 0` root multiplicity).
    pub zero_root_multiplicity: f64,
    /// `d` in `w = z^{1/d}`; 1 for integer powers.
    pub branch_denominator: u64,
    pub grid: Option<(Region, Grid)>,
    pub flagged_cells: usize,
    /// Flagged cells with nonzero winding where no start converged inside the cell.
    pub unresolved_cells: usize,
    pub diverged_starts: usize,
    /// β₁-period of the target when the energies are commensurate.
    pub period: Option<f64>,
}

/// Located zeros with their normalized residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub method: Method,
    pub meta: ZeroMeta,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// `(max, mean)` of `| |z| − 1 |`.
    pub fn unit_circle_deviation(&self) -> (f64, f64) {
        if self.zeros.is_empty() {
            return (0.0, 0.0);
        }
        let devs = self.zeros.iter().map(|z| (z.norm() - 1.0).abs());
        let (max, sum) = devs.fold((0.0f64, 0.0), |(m, s), d| (m.max(d), s + d));
        (max, sum / self.zeros.len() as f64)
    }
}

/// True when the multiset of zeros equals its conjugate within `tol`.
pub fn is_conjugate_closed(zeros: &[Complex64], tol: f64) -> bool {
    let mut used = alloc::vec![false; zeros.len()];
    for (i, z) in zeros.iter().enumerate() {
        if used[i] {
            continue;
        }
        let target = z.conj();
        if (target - z).norm() <= tol {
            used[i] = true;
            continue;
        }
        let partner = (0..zeros.len())
            .filter(|&j| j != i && !used[j])
            .min_by(|&a, &b| {
                (zeros[a] - target)
                    .norm()
                    .total_cmp(&(zeros[b] - target).norm())
            });
        match partner {
            Some(j) if (zeros[j] - target).norm() <= tol => {
                used[i] = true;
                used[j] = true;
            }
            _ => return false,
        }
    }
    true
}

/// All roots of an integer-power polynomial, whether or not they converged.
///
/// Only precondition violations are errors; convergence is reported in
/// [`ZeroMeta::converged`].
pub fn find_roots_integer_powers(poly: &SparsePolynomial) -> Result<ZeroSet> {
    let coeffs = poly.dense()?;
    let outcome = aberth(&coeffs, &AberthOptions::default());
    let residuals: Vec<f64> = outcome.roots.iter().map(|&z| poly.residual(z)).collect();
    let converged = residuals.iter().all(|&r| r <= RESIDUAL_BOUND);
    Ok(ZeroSet {
        zeros: outcome.roots,
        residuals,
        method: Method::Aberth,
        meta: ZeroMeta {
            iterations: outcome.iterations,
            converged,
            zero_root_multiplicity: poly.shift(),
            branch_denominator: 1,
            ..ZeroMeta::default()
        },
    })
}

fn require_converged(set: ZeroSet) -> Result<ZeroSet> {
    if set.meta.converged {
        Ok(set)
    } else {
        Err(Error::Convergence {
            iterations: set.meta.iterations,
            worst_residual: set.worst_residual(),
        })
    }
}

/// All `deg P` roots of a polynomial whose powers are integers.
pub fn roots_integer_powers(poly: &SparsePolynomial) -> Result<ZeroSet> {
    require_converged(find_roots_integer_powers(poly)?)
}

/// Principal-branch z-plane roots of a polynomial with rational powers.
///
/// With common denominator `d`, the substitution `w = z^{1/d}` gives an
/// integer-power polynomial. Only the w-roots on the principal sector
/// `arg w ∈ (−π/d, π/d]` are kept and mapped to `z = w^d`.
pub fn find_roots_z_plane(poly: &SparsePolynomial) -> Result<ZeroSet> {
    if poly.integer_degree().is_some() {
        return find_roots_integer_powers(poly);
    }
    let d = poly
        .branch_denominator(MAX_BRANCH_DENOMINATOR)
        .ok_or_else(|| {
            Error::Precondition(
                "powers are not rational with a small denominator; use the β̃-plane search".into(),
            )
        })?;
    let in_w = poly.scale_powers(d as f64)?;
    let mut set = find_roots_integer_powers(&in_w)?;
    let half_sector = core::f64::consts::PI / d as f64;
    let mut zeros = Vec::new();
    let mut residuals = Vec::new();
    for w in set.zeros {
        let a = w.arg();
        if a > -half_sector && a <= half_sector {
            let z = w.powu(d as u32);
            zeros.push(z);
            residuals.push(poly.residual(z));
        }
    }
    set.meta.converged = residuals.iter().all(|&r| r <= RESIDUAL_BOUND);
    set.meta.branch_denominator = d;
    set.meta.zero_root_multiplicity = poly.shift();
    set.zeros = zeros;
    set.residuals = residuals;
    Ok(set)
}

pub fn roots_z_plane(poly: &SparsePolynomial) -> Result<ZeroSet> {
    require_converged(find_roots_z_plane(poly)?)
}

#[cfg(test)]
mod tests;
