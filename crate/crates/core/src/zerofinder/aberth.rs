use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AberthOptions {
    pub max_iterations: usize,
    /// A root is frozen once its step is at most `step_tol·|z|`.
    pub step_tol: f64,
    /// Phase offset of the initial circle, breaking conjugate symmetry.
    pub phase_offset: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            step_tol: 1e-14,
            phase_offset: 0.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AberthOutcome {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    /// Every root met the step criterion before the iteration cap.
    pub converged: bool,
}

/// Newton correction `P(z)/P'(z)`, evaluated through the reversed polynomial
/// when `|z| > 1` so that high degrees do not overflow.
fn newton_correction(coeffs: &[f64], z: Complex64) -> Option<Complex64> {
    let n = coeffs.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let mut p = zero;
        let mut dp = zero;
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        if p == zero {
            return None;
        }
        Some(p / dp)
    } else {
        let w = z.inv();
        // Q(w) = Σ c_k w^{n−k} = w^n P(1/w).
        let mut qv = zero;
        let mut dq = zero;
        for &c in coeffs {
            dq = dq * w + qv;
            qv = qv * w + c;
        }
        if qv == zero {
            return None;
        }
        // P'/P = w (n − w Q'/Q).
        let log_deriv = w * (Complex64::new(n as f64, 0.0) - w * dq / qv);
        Some(log_deriv.inv())
    }
}

/// Newton-polygon starting points: for each edge `(i, j)` of the upper hull,
/// `j − i` points on the circle of radius `(|c_i|/|c_j|)^{1/(j−i)}`.
fn initial_guesses(coeffs: &[f64], phase_offset: f64) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| (k, libm::log(c.abs())))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as f64 * (p.1 - a.1) - (p.0 - a.0) as f64 * (b.1 - a.1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut roots = Vec::with_capacity(n);
    for edge in hull.windows(2) {
        let (i, li) = edge[0];
        let (j, lj) = edge[1];
        let m = j - i;
        let radius = libm::exp((li - lj) / m as f64);
        let start = 2.0 * PI * i as f64 / n as f64 + phase_offset;
        roots.extend(
            (0..m).map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / m as f64 + start)),
        );
    }
    roots
}

/// All roots of `Σ c_k z^k` by simultaneous Aberth–Ehrlich iteration.
///
/// `coeffs[0]` and the leading coefficient must be nonzero. Initial guesses sit
/// on the circles given by the upper convex hull of `(k, ln|c_k|)`.
pub fn aberth(coeffs: &[f64], opts: &AberthOptions) -> AberthOutcome {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return AberthOutcome {
            roots: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let mut roots = initial_guesses(coeffs, opts.phase_offset);
    let mut frozen = alloc::vec![false; n];
    let mut iterations = 0;
    while iterations < opts.max_iterations && frozen.iter().any(|f| !f) {
        iterations += 1;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let zk = roots[k];
            let Some(ratio) = newton_correction(coeffs, zk) else {
                frozen[k] = true;
                continue;
            };
            let repulsion: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &zj)| (zk - zj).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            roots[k] = zk - step;
            if step.norm() <= opts.step_tol * roots[k].norm() {
                frozen[k] = true;
            }
        }
    }
    AberthOutcome {
        roots,
        iterations,
        converged: frozen.iter().all(|&f| f),
    }
}
