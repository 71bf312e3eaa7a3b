//! Double-double helpers for exponents whose imaginary part reaches many
//! turns, where rounding the angle in f64 would dominate the result.

use num_complex::Complex64;
use twofloat::consts::TAU;
use twofloat::TwoFloat;

use crate::qmath::DeformationParam;

/// `e^{iθ}`, reducing the angle modulo 2π in double-double first.
pub(crate) fn phase(theta: TwoFloat) -> Complex64 {
    let turns = libm::round(theta.hi() / TAU.hi());
    let r = theta - TAU * turns;
    let (s, c) = libm::sincos(r.hi() + r.lo());
    Complex64::new(c, s)
}

/// `[n]_q = 1 + q + … + q^{n−1}`.
pub(crate) fn q_int(n: usize, q: DeformationParam) -> TwoFloat {
    let q = TwoFloat::from(q.get());
    (0..n).fold(TwoFloat::from(0.0), |acc, _| acc * q + 1.0)
}

/// `e^{−bE}` with the angle `b.im·E` formed exactly.
pub(crate) fn exp_neg(b: Complex64, e: TwoFloat) -> Complex64 {
    let modulus = libm::exp(-(b.re * e.hi() + b.re * e.lo()));
    phase(-(TwoFloat::new_mul(b.im, e.hi()) + b.im * e.lo())) * modulus
}
