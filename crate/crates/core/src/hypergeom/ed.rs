//! The Humbert/Exton-type function ⁽¹⁾E_D^(N)[a, b; c, c'; x]:
//! a Laplace pairing of two confluent Φ₂ blocks, expressible as a single
//! sum of Lauricella F_D^(N−1) values over the first index.

use crate::error::{Error, Result};
use crate::hypergeom::{phi2_parts, EdArgs, ShellCoeffs};
use crate::quad::tanh_sinh_ln_semi_inf;
use crate::series::{Kahan, SeriesConfig};
use crate::special::ln_gamma;

/// E_D by its outer series
///   Σ_{i≥0} Γ(a+i)(b₁)_i x₁^i / (Γ(a)(c)_i i!) · F_D^(N−1)[a+i, b₂.., c'; x₂..],
/// with the inner F_D shells shared across all i (only the first parameter
/// shifts). Requires the series convergence region
/// |x₁| + max_{j≥2}|x_j| < 1.
pub fn ed_function(args: &EdArgs, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if !args.series_in_domain() {
        return Err(Error::domain(
            "ed_function",
            format!(
                "|x1| + max|x_j| = {} >= 1",
                args.x[0].abs()
                    + args.x[1..]
                        .iter()
                        .fold(0.0f64, |m, v| m.max(v.abs()))
            ),
        ));
    }
    let a = args.a;
    let c = args.c;
    let cp = args.c_prime;
    let x1 = args.x[0];
    let b1 = args.b[0];
    let b_rest = &args.b[1..];
    let x_rest = &args.x[1..];

    let mut shells = ShellCoeffs::new(b_rest, x_rest);
    let inner_cap = cfg
        .max_index_per_dim
        .saturating_mul(x_rest.len().max(1))
        .min(cfg.max_total_terms as usize);

    // inner F_D[a+i, ..] = Σ_k (a+i)_k S_k / (c')_k
    let mut inner = |ai: f64, cfg: &SeriesConfig| -> Result<f64> {
        let mut ratio = 1.0f64;
        let mut sum = Kahan::new();
        let mut abs_sum = 0.0f64;
        let mut streak = 0u32;
        for k in 0..=inner_cap {
            let term = ratio * shells.get(k);
            if !term.is_finite() {
                return Err(Error::NonConvergence {
                    op: "ed_function",
                    terms: k as u64,
                });
            }
            sum.add(term);
            abs_sum += term.abs();
            if k > 2 && term.abs() <= cfg.tail_target(sum.value()) {
                streak += 1;
                if streak >= 3 {
                    break;
                }
            } else {
                streak = 0;
            }
            if k == inner_cap {
                return Err(Error::NonConvergence {
                    op: "ed_function",
                    terms: k as u64,
                });
            }
            ratio *= (ai + k as f64) / (cp + k as f64);
        }
        if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
            return Err(Error::NonConvergence {
                op: "ed_function",
                terms: 0,
            });
        }
        Ok(sum.value())
    };

    // outer series over the c-slot index; the coefficient
    // Γ(a+i)(b1)_i x1^i / (Γ(a)(c)_i i!) is carried incrementally in
    // log-magnitude + sign form from its i=0 value of 1.
    let mut sum = Kahan::new();
    let mut abs_sum = 0.0f64;
    let mut streak = 0u32;
    let mut ln_coef = 0.0f64;
    let mut sign_coef = 1.0f64;
    for i in 0..cfg.max_index_per_dim.max(64) {
        if i > 0 {
            let im1 = (i - 1) as f64;
            // multiply by (a+i−1)(b1+i−1)x1 / ((c+i−1)·i)
            let num = (a + im1) * (b1 + im1) * x1;
            let den = (c + im1) * i as f64;
            if num == 0.0 {
                // (b1)_i hit zero: outer series terminates
                break;
            }
            ln_coef += (num.abs() / den.abs()).ln();
            sign_coef *= num.signum() * den.signum();
        }
        let fd = inner(a + i as f64, cfg)?;
        let term = sign_coef * ln_coef.exp() * fd;
        sum.add(term);
        abs_sum += term.abs();
        if i > 2 && term.abs() <= cfg.tail_target(sum.value()) {
            streak += 1;
            if streak >= 3 {
                break;
            }
        } else {
            streak = 0;
        }
        if i + 1 >= cfg.max_index_per_dim.max(64) {
            return Err(Error::NonConvergence {
                op: "ed_function",
                terms: (i + 1) as u64,
            });
        }
    }
    if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
        return Err(Error::NonConvergence {
            op: "ed_function",
            terms: 0,
        });
    }
    Ok(sum.value())
}

/// Independent oracle: the semi-infinite integral relationship
///
/// Γ(a)·E_D^(N)[a,b;c,c';x] =
///   ∫₀^∞ e^{−t} t^{a−1} Φ₂^(k)[b₁..b_k; c; x₁t..x_kt]
///                         Φ₂^(N−k)[b_{k+1}..; c'; x_{k+1}t..] dt.
pub fn ed_integral_oracle(args: &EdArgs, k: usize, quad_tol: f64) -> Result<f64> {
    Ok(ed_integral_ln(args, k, quad_tol)?.exp())
}

/// ln E_D by the same integral; the outage assembly needs the log because
/// E_D values at network scale sit far outside the f64 linear range.
pub(crate) fn ed_integral_ln(args: &EdArgs, k: usize, quad_tol: f64) -> Result<f64> {
    if args.a <= 0.0 {
        return Err(Error::domain(
            "ed_integral_oracle",
            format!("requires a > 0, got {}", args.a),
        ));
    }
    if k == 0 || k > args.x.len() {
        return Err(Error::invalid(format!(
            "ed_integral_oracle: split index k={k} out of range 1..={}",
            args.x.len()
        )));
    }
    // the integral converges when the exponential growth of the Φ₂ blocks
    // stays below e^t
    let growth: f64 = args.x.iter().cloned().fold(0.0f64, f64::max);
    if growth >= 1.0 {
        return Err(Error::domain(
            "ed_integral_oracle",
            format!("max x_i = {growth} >= 1: integrand not integrable"),
        ));
    }
    let cfg = SeriesConfig {
        abs_tol: quad_tol * 1e-2,
        rel_tol: quad_tol * 1e-2,
        ..SeriesConfig::default()
    };
    let (b1, b2) = args.b.split_at(k);
    let (x1, x2) = args.x.split_at(k);
    let a = args.a;
    // exponential decay margin of e^{−t}·Φ₂ blocks (they grow at most like
    // e^{max(x⁺)·t}); spares the Φ₂ evaluations on hopeless far-tail nodes
    let slack = 1.0 - growth.max(0.0);
    let poisoned = std::cell::Cell::new(false);
    let ln_val = tanh_sinh_ln_semi_inf(
        |t| {
            if slack * t - (a - 1.0).max(0.0) * (t + 1.0).ln() > 1500.0 {
                return f64::NEG_INFINITY;
            }
            let xs1: Vec<f64> = x1.iter().map(|v| v * t).collect();
            let xs2: Vec<f64> = x2.iter().map(|v| v * t).collect();
            let p1 = phi2_parts(b1, args.c, &xs1, &cfg);
            let p2 = if xs2.is_empty() {
                Ok((0.0, 1.0))
            } else {
                phi2_parts(b2, args.c_prime, &xs2, &cfg)
            };
            match (p1, p2) {
                (Ok((l1, s1)), Ok((l2, s2))) if s1 > 0.0 && s2 > 0.0 => {
                    -t + (a - 1.0) * t.ln() + l1 + l2
                }
                // a sign flip or an inner failure poisons the whole integral
                _ => {
                    poisoned.set(true);
                    f64::NEG_INFINITY
                }
            }
        },
        quad_tol,
    )?;
    if poisoned.get() {
        return Err(Error::QuadratureFailure {
            op: "ed_integral_oracle",
            detail: "integrand sign flip or inner series failure".into(),
        });
    }
    Ok(ln_val - ln_gamma(a))
}
