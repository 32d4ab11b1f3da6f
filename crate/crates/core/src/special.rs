//! Scalar special functions backing the hypergeometric layer.
//!
//! Log-gamma, regularized incomplete gamma/beta and the normal quantile are
//! delegated to `statrs`; the signed log-gamma (negative arguments) and the
//! modified Bessel function of the first kind are implemented here.

use statrs::function::beta as sbeta;
use statrs::function::gamma as sgamma;

/// ln Γ(x) for x > 0.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    sgamma::ln_gamma(x)
}

/// ln |Γ(x)| together with the sign of Γ(x), valid for any non-pole x.
///
/// Negative non-integer arguments go through the reflection formula
/// Γ(x)Γ(1−x) = π/sin(πx).
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (sgamma::ln_gamma(x), 1.0);
    }
    if x == x.floor() {
        // Pole at non-positive integers.
        return (f64::INFINITY, 1.0);
    }
    // |sin(πx)| via the fractional part for accuracy at large |x|.
    let frac = x - x.floor(); // in (0,1)
    let sin_pi = (std::f64::consts::PI * frac).sin();
    let ln_abs = std::f64::consts::PI.ln() - sin_pi.ln() - sgamma::ln_gamma(1.0 - x);
    // sign(Γ(x)) alternates between negative-integer poles.
    let k = x.floor() as i64; // x in (k, k+1), k <= -1
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    (ln_abs, sign)
}

/// Regularized lower incomplete gamma P(a, x).
#[inline]
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    sgamma::gamma_lr(a, x)
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
#[inline]
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    sgamma::gamma_ur(a, x)
}

/// Regularized incomplete beta I_x(a, b).
#[inline]
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    sbeta::beta_reg(a, b, x)
}

/// ln B(a, b).
#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    sbeta::ln_beta(a, b)
}

/// Two-sided standard-normal quantile for a confidence level (e.g. 0.95).
pub fn normal_two_sided_z(confidence: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let n = Normal::new(0.0, 1.0).expect("unit normal");
    n.inverse_cdf(0.5 + confidence / 2.0)
}

/// ln I_ν(x) for ν ≥ 0, x ≥ 0: modified Bessel function of the first kind.
///
/// Power series in log space for moderate arguments, uniform asymptotic
/// expansion for large x (the series stays accurate well past the crossover;
/// the switch is for cost).
pub fn ln_bessel_i(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "ln_bessel_i: nu={nu}, x={x}");
    if x == 0.0 {
        return if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if x > 500.0 && x > 10.0 * nu * nu {
        // I_ν(x) ~ e^x/√(2πx) · [1 − (μ−1)/(8x) + (μ−1)(μ−9)/(2(8x)²) − ...],
        // μ = 4ν².
        let mu = 4.0 * nu * nu;
        let inv8x = 1.0 / (8.0 * x);
        let corr = 1.0 - (mu - 1.0) * inv8x
            + (mu - 1.0) * (mu - 9.0) * inv8x * inv8x / 2.0
            - (mu - 1.0) * (mu - 9.0) * (mu - 25.0) * inv8x.powi(3) / 6.0;
        return x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + corr.ln();
    }
    // Σ_k (x/2)^{ν+2k} / (k! Γ(ν+k+1)), accumulated from the log of the
    // leading term with a multiplicative ratio.
    let half = 0.5 * x;
    let ln_lead = nu * half.ln() - ln_gamma(nu + 1.0);
    let q = half * half;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..20_000 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    ln_lead + sum.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_ln_gamma_reflects() {
        // Γ(-0.5) = -2√π
        let (ln, sign) = ln_gamma_signed(-0.5);
        assert!(sign < 0.0);
        assert!((ln.exp() - 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // Γ(-1.5) = 4√π/3
        let (ln, sign) = ln_gamma_signed(-1.5);
        assert!(sign > 0.0);
        assert!((ln.exp() - 4.0 * std::f64::consts::PI.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_small_order_matches_reference() {
        // I_0(1) = 1.2660658777520084, I_1(2) = 1.5906368546373291
        assert!((ln_bessel_i(0.0, 1.0).exp() - 1.2660658777520084).abs() < 1e-12);
        assert!((ln_bessel_i(1.0, 2.0).exp() - 1.5906368546373291).abs() < 1e-12);
        // I_{1/2}(x) = sqrt(2/(πx)) sinh x
        let x = 3.7;
        let exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
        assert!((ln_bessel_i(0.5, x).exp() - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn bessel_asymptotic_joins_series() {
        // d/dx ln I_ν ≈ 1 − 1/(2x) for large x: the series/asymptotic
        // crossover at x = 500 must be smooth to that slope
        for nu in [0.0, 0.5, 1.7] {
            let lo = ln_bessel_i(nu, 499.0);
            let hi = ln_bessel_i(nu, 501.0);
            let slope = (hi - lo) / 2.0;
            assert!(
                (slope - (1.0 - 1.0 / (2.0 * 500.0))).abs() < 1e-4,
                "nu={nu}: slope {slope}"
            );
        }
    }

    #[test]
    fn z_values() {
        assert!((normal_two_sided_z(0.95) - 1.959963984540054).abs() < 1e-9);
        assert!((normal_two_sided_z(0.99) - 2.5758293035489004).abs() < 1e-9);
    }
}
