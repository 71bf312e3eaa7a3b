/// Best rational approximation `p/d` with `d ≤ max_den` and `|x − p/d| ≤ tol`,
/// by continued-fraction convergents.
pub fn rational_approx(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = libm::floor(r);
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((h2 as i64, k2 as u64));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents() {
        assert_eq!(rational_approx(0.5, 64, 1e-12), Some((1, 2)));
        assert_eq!(rational_approx(3.0, 64, 1e-12), Some((3, 1)));
        assert_eq!(rational_approx(-2.0 / 3.0, 64, 1e-12), Some((-2, 3)));
        assert_eq!(rational_approx(17.0 / 64.0, 64, 1e-12), Some((17, 64)));
        assert_eq!(rational_approx(core::f64::consts::PI, 64, 1e-12), None);
        assert_eq!(rational_approx(1.0 / 65.0, 64, 1e-12), None);
    }

    #[test]
    fn gcd_lcm() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), Some(12));
    }
}
