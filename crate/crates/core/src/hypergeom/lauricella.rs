//! Lauricella function of the fourth kind F_D^(N).

use crate::error::{Error, Result};
use crate::hypergeom::{termination_degree, FdArgs, ShellCoeffs};
use crate::quad::tanh_sinh_ln;
use crate::series::{Kahan, SeriesConfig};
use crate::special::ln_gamma;

/// F_D^(N)[a, b; c; x] = Σ_k (a)_k S_k / (c)_k, summed over total-degree
/// shells (S_k from the shell recurrence).
///
/// Requires max|x_i| < 1, or a a nonpositive integer −n, in which case the
/// sum is exact over total degree ≤ n for any real arguments.
pub fn lauricella_fd(args: &FdArgs, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    let FdArgs { a, b, c, x } = args;
    if x.is_empty() {
        return Ok(1.0);
    }
    let terminate = termination_degree(*a);
    let xmax = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if terminate.is_none() && xmax >= 1.0 {
        return Err(Error::domain(
            "lauricella_fd",
            format!("max|x_i| = {xmax} >= 1 and a = {a} does not terminate the series"),
        ));
    }
    if xmax == 0.0 {
        return Ok(1.0);
    }

    let mut shells = ShellCoeffs::new(b, x);
    let mut ratio = 1.0f64; // (a)_k / (c)_k
    let mut sum = Kahan::new();
    let mut abs_sum = 0.0f64;
    let mut small_streak = 0u32;
    let mut shell_cap = cfg
        .max_index_per_dim
        .saturating_mul(x.len().max(1))
        .min(cfg.max_total_terms as usize);
    if let Some(n) = terminate {
        // a terminating sum is exact only if carried through degree n
        shell_cap = shell_cap.max(n);
    }
    for k in 0..=shell_cap {
        if let Some(n) = terminate {
            if k > n {
                break;
            }
        }
        let sk = shells.get(k);
        if !sk.is_finite() || sk.abs() > 1e250 {
            return Err(Error::NonConvergence {
                op: "lauricella_fd",
                terms: k as u64,
            });
        }
        let term = ratio * sk;
        sum.add(term);
        abs_sum += term.abs();
        // geometric-ish tail heuristic once shells shrink
        if k > 2 && term.abs() <= cfg.tail_target(sum.value()) {
            small_streak += 1;
            if small_streak >= 3 && terminate.is_none() {
                break;
            }
        } else {
            small_streak = 0;
        }
        if k == shell_cap && terminate.is_none() {
            return Err(Error::NonConvergence {
                op: "lauricella_fd",
                terms: k as u64,
            });
        }
        ratio *= (*a + k as f64) / (*c + k as f64);
    }
    if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
        return Err(Error::NonConvergence {
            op: "lauricella_fd",
            terms: 0,
        });
    }
    Ok(sum.value())
}

/// Independent oracle: the single Euler integral
/// F_D = Γ(c)/(Γ(a)Γ(c−a)) ∫₀¹ u^{a−1}(1−u)^{c−a−1} ∏(1−u x_i)^{−b_i} du,
/// valid for a > 0, c − a > 0 and every x_i < 1. Evaluated by tanh-sinh in
/// log space (the integrand is positive on (0,1)).
pub fn fd_integral_oracle(args: &FdArgs, quad_tol: f64) -> Result<f64> {
    Ok(fd_integral_ln(args, quad_tol)?.exp())
}

/// ln F_D by the same integral (the Hoyt closed form assembles in log space).
pub(crate) fn fd_integral_ln(args: &FdArgs, quad_tol: f64) -> Result<f64> {
    let FdArgs { a, b, c, x } = args;
    if !(*a > 0.0 && *c - *a > 0.0) {
        return Err(Error::domain(
            "fd_integral_oracle",
            format!("requires a > 0 and c − a > 0 (a={a}, c={c})"),
        ));
    }
    if x.iter().any(|&v| v >= 1.0) {
        return Err(Error::domain(
            "fd_integral_oracle",
            "requires every x_i < 1".to_string(),
        ));
    }
    let (a, c) = (*a, *c);
    let ln_int = tanh_sinh_ln(
        |u, omu| {
            let mut ln = (a - 1.0) * u.ln() + (c - a - 1.0) * omu.ln();
            for (bi, xi) in b.iter().zip(x) {
                ln -= bi * (1.0 - u * xi).ln();
            }
            ln
        },
        quad_tol,
    )?;
    Ok(ln_gamma(c) - ln_gamma(a) - ln_gamma(c - a) + ln_int)
}
