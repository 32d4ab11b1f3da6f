//! Rising factorial (a)_k with the negative-integer termination rule.

use crate::special::ln_gamma_signed;

/// (a)_k = a(a+1)···(a+k−1), with (−n)_k = (−1)^k n!/(n−k)! for k ≤ n and
/// 0 for k > n when a is a nonpositive integer.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    if k <= 24 {
        // exact for small products (including the negative-integer zeros)
        let mut prod = 1.0f64;
        for i in 0..k {
            prod *= a + i as f64;
        }
        return prod;
    }
    let (ln, sign) = ln_pochhammer_signed(a, k);
    if ln == f64::NEG_INFINITY {
        0.0
    } else {
        sign * ln.exp()
    }
}

/// (ln |(a)_k|, sign), with ln = −∞ for an exact zero.
pub fn ln_pochhammer_signed(a: f64, k: u32) -> (f64, f64) {
    if k == 0 {
        return (0.0, 1.0);
    }
    // Negative-integer base: the product hits zero once k passes −a.
    if a <= 0.0 && (a - a.round()).abs() < 1e-12 {
        let n = (-a.round()) as u32;
        if k > n {
            return (f64::NEG_INFINITY, 1.0);
        }
        // (−n)_k = (−1)^k n!/(n−k)!
        let (lg_n1, _) = ln_gamma_signed(n as f64 + 1.0);
        let (lg_nk, _) = ln_gamma_signed((n - k) as f64 + 1.0);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        return (lg_n1 - lg_nk, sign);
    }
    if k <= 24 {
        // Direct product; cheap and keeps full precision for the common case.
        let mut ln = 0.0f64;
        let mut sign = 1.0f64;
        for i in 0..k {
            let f = a + i as f64;
            if f == 0.0 {
                return (f64::NEG_INFINITY, 1.0);
            }
            ln += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        return (ln, sign);
    }
    let (lg_ak, s_ak) = ln_gamma_signed(a + k as f64);
    let (lg_a, s_a) = ln_gamma_signed(a);
    (lg_ak - lg_a, s_ak * s_a)
}
