//! Brute-force matrix oracle on truncated Fock spaces.
//!
//! The q-oscillator is represented on `|0⟩…|dim−1⟩` with
//! `a|n⟩ = √[n]_q |n−1⟩`. The Hamiltonian is diagonal in this basis, so
//! every exponential below is taken entrywise on the diagonal.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::dd;
use crate::ensemble::{self, SystemSpec, EXP_SAFE_BOUND};
use crate::error::{Error, Result};
use crate::qmath::{self, DeformationParam};
use crate::sum::ComplexKahanSum;

/// Default cap on the dimension of the fixed-N sector.
pub const SECTOR_CAP: usize = 10_000;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn phase(theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(c, s)
}

fn adjoint(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj()).transpose()
}

fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Apply `f` to a diagonal matrix entrywise along its diagonal.
fn diag_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    CMatrix::from_diagonal(&m.diagonal().map(|z| Complex64::new(f(z.re), 0.0)))
}

/// Single-mode q-oscillator on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockRep {
    pub dim: usize,
    pub q: DeformationParam,
    /// Lowering operator, nonzero only on the first superdiagonal.
    pub a: CMatrix,
    pub a_dag: CMatrix,
    /// `diag(0, 1, …, dim−1)`.
    pub num: CMatrix,
}

pub fn build_rep(dim: usize, q: DeformationParam) -> Result<FockRep> {
    if dim < 2 {
        return Err(Error::Precondition(format!(
            "Fock truncation needs dim >= 2, got {dim}"
        )));
    }
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new(libm::sqrt(qmath::q_int(n, q)), 0.0);
    }
    let num = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    });
    Ok(FockRep {
        dim,
        q,
        a_dag: adjoint(&a),
        a,
        num,
    })
}

impl FockRep {
    /// `a⁺a = diag([n]_q)`, exact on the truncated space.
    pub fn number_q(&self) -> CMatrix {
        &self.a_dag * &self.a
    }

    fn commutator_defect(&self) -> CMatrix {
        let q = Complex64::new(self.q.get(), 0.0);
        &self.a * &self.a_dag - (&self.a_dag * &self.a) * q - CMatrix::identity(self.dim, self.dim)
    }
}

/// Max-norm of `a a⁺ − q a⁺a − 1` on `|0⟩…|dim−2⟩`; the top state is a
/// truncation artifact and is excluded.
pub fn qcommutator_residual(rep: &FockRep) -> f64 {
    let d = rep.dim - 1;
    max_norm(&rep.commutator_defect().view((0, 0), (d, d)).into_owned())
}

/// The same defect over the whole truncated space; equals `[dim]_q` at the top state.
pub fn qcommutator_residual_full(rep: &FockRep) -> f64 {
    max_norm(&rep.commutator_defect())
}

/// Largest defect among the operator shift identities for a test function `f`:
///
/// * `a f(a⁺a) = f(q a⁺a + 1) a` (whole space),
/// * `a f(a⁺a) = f(a a⁺) a` (away from the top state, where `a a⁺` is truncated),
/// * `f(a⁺a) a = a f(a⁺a/q − 1/q)` (whole space).
pub fn shift_identity_residual(rep: &FockRep, f: impl Fn(f64) -> f64) -> f64 {
    let q = rep.q.get();
    let nq = rep.number_q();
    let lhs = &rep.a * diag_fn(&nq, &f);
    let shifted = &diag_fn(&nq, |x| f(q * x + 1.0)) * &rep.a;
    let r1 = max_norm(&(&lhs - shifted));

    let d = rep.dim - 1;
    let aad = &rep.a * &rep.a_dag;
    let via_aad = &diag_fn(&aad, &f) * &rep.a;
    let r2 = max_norm(&(&lhs - via_aad).view((0, 0), (d, d)).into_owned());

    let left = &diag_fn(&nq, &f) * &rep.a;
    let right = &rep.a * diag_fn(&nq, |x| f(x / q - 1.0 / q));
    let r3 = max_norm(&(left - right));
    r1.max(r2).max(r3)
}

/// Diagonal of `e^{−iε a⁺a t/ħ}`.
pub fn propagator(rep: &FockRep, eps: f64, t: f64, hbar: f64) -> Vec<Complex64> {
    (0..rep.dim)
        .map(|n| dd::phase(-(dd::q_int(n, rep.q) * eps * t) / hbar))
        .collect()
}

/// Max-norm of `e^{iH₁t/ħ} a e^{−iH₁t/ħ} − a e^{−iεt/qħ} e^{−i(1−1/q)ε a⁺a t/ħ}`
/// with `H₁ = ε a⁺a`.
pub fn heisenberg_residual(rep: &FockRep, eps: f64, t: f64, hbar: f64) -> f64 {
    let u = propagator(rep, eps, t, hbar);
    let forward = CMatrix::from_diagonal(&u.iter().map(|z| z.conj()).collect::<Vec<_>>().into());
    let backward = CMatrix::from_diagonal(&u.clone().into());
    let direct = &forward * &rep.a * &backward;

    let inv_q = TwoFloat::from(1.0) / rep.q.get();
    let rate = -inv_q + 1.0;
    let global = dd::phase(-(inv_q * eps * t) / hbar);
    let rotation = CMatrix::from_diagonal(
        &(0..rep.dim)
            .map(|n| dd::phase(-(rate * dd::q_int(n, rep.q) * eps * t) / hbar))
            .collect::<Vec<_>>()
            .into(),
    );
    let closed = (&rep.a * global) * rotation;
    max_norm(&(direct - closed))
}

/// Fixed-N sector of the s-mode tensor space, indexed by compositions.
struct Sector {
    basis: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl Sector {
    fn new(particles: usize, levels: usize) -> Self {
        let basis: Vec<Vec<usize>> = ensemble::compositions(particles, levels)
            .map(|o| o.to_vec())
            .collect();
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        Self { basis, index }
    }

    fn empty() -> Self {
        Self {
            basis: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `a_j(t)` from sector N to sector N−1, in the closed Heisenberg form
/// `a_j e^{−iε_j t/qħ} e^{−i(1−1/q)ε_j a⁺_j a_j t/ħ}`.
fn evolved_lowering(
    spec: &SystemSpec,
    upper: &Sector,
    lower: &Sector,
    mode: usize,
    t: f64,
) -> CMatrix {
    let q = spec.q();
    let eps = spec.eps()[mode];
    let hbar = spec.hbar();
    let rate = q.deformation_rate();
    let mut m = CMatrix::zeros(lower.dim(), upper.dim());
    for (col, occ) in upper.basis.iter().enumerate() {
        let n = occ[mode];
        if n == 0 {
            continue;
        }
        let mut target = occ.clone();
        target[mode] -= 1;
        let row = lower.index[&target];
        let nq = qmath::q_int(n, q);
        let ph = phase(-eps * t / (q.get() * hbar) - rate * eps * nq * t / hbar);
        m[(row, col)] = ph * libm::sqrt(nq);
    }
    m
}

/// `(1/Z(β)) Tr e^{−βH} a⁺₁(t₁)a₁(t₂)…a⁺_s(t₁)a_s(t₂)` by explicit matrices on
/// the fixed-N sector, with the operator product in the literal order.
pub fn brute_correlator(
    spec: &SystemSpec,
    beta: f64,
    t1: f64,
    t2: f64,
    sector_cap: usize,
) -> Result<Complex64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    let n = spec.particles();
    let s = spec.levels();
    let dim = ensemble::composition_count(n, s);
    if dim > sector_cap {
        return Err(Error::Resource {
            size: dim,
            cap: sector_cap,
        });
    }
    let upper = Sector::new(n, s);
    let lower = if n == 0 {
        Sector::empty()
    } else {
        Sector::new(n - 1, s)
    };

    let mut product = CMatrix::identity(dim, dim);
    for mode in 0..s {
        let a_t2 = evolved_lowering(spec, &upper, &lower, mode, t2);
        let a_dag_t1 = adjoint(&evolved_lowering(spec, &upper, &lower, mode, t1));
        product *= a_dag_t1 * a_t2;
    }

    let mut trace = ComplexKahanSum::new();
    let mut z = ComplexKahanSum::new();
    for (i, occ) in upper.basis.iter().enumerate() {
        let e: f64 = occ
            .iter()
            .zip(spec.eps())
            .map(|(&k, &eps)| eps * qmath::q_int(k, spec.q()))
            .sum();
        if (beta * e).abs() > EXP_SAFE_BOUND {
            return Err(Error::Overflow {
                exponent: (beta * e).abs(),
                bound: EXP_SAFE_BOUND,
            });
        }
        let rho = libm::exp(-beta * e);
        trace.add(product[(i, i)] * rho);
        z.add(ONE * rho);
    }
    let z = z.value().re;
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Underflow);
    }
    Ok(trace.value() / z)
}
