//! ₃F₂(a₁,a₂,a₃; b₁,b₂; x) by direct series. Appears in the truncation-error
//! bounds, where the argument stays well inside the unit disk.

use crate::error::{Error, Result};
use crate::hypergeom::{is_nonpositive_integer, termination_degree};
use crate::series::{Kahan, SeriesConfig};

pub fn clausen_3f2(
    a1: f64,
    a2: f64,
    a3: f64,
    b1: f64,
    b2: f64,
    x: f64,
    cfg: &SeriesConfig,
) -> Result<f64> {
    cfg.validate()?;
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return Err(Error::domain(
            "clausen_3f2",
            format!("denominator parameter is a nonpositive integer (b1={b1}, b2={b2})"),
        ));
    }
    let n_stop = [a1, a2, a3]
        .into_iter()
        .filter_map(termination_degree)
        .min();
    if n_stop.is_none() && x.abs() >= 1.0 {
        return Err(Error::domain(
            "clausen_3f2",
            format!("|x| = {} >= 1 and the series does not terminate", x.abs()),
        ));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let mut term = 1.0f64;
    let mut sum = Kahan::new();
    sum.add(1.0);
    let mut abs_sum = 1.0f64;
    let mut small_streak = 0u32;
    for k in 0..cfg.max_total_terms {
        if let Some(n) = n_stop {
            if k as usize >= n {
                break;
            }
        }
        let kf = k as f64;
        term *= (a1 + kf) * (a2 + kf) * (a3 + kf) * x
            / ((b1 + kf) * (b2 + kf) * (kf + 1.0));
        if !term.is_finite() {
            return Err(Error::NonConvergence {
                op: "clausen_3f2",
                terms: k,
            });
        }
        sum.add(term);
        abs_sum += term.abs();
        if term.abs() <= cfg.tail_target(sum.value()) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
        if k + 1 == cfg.max_total_terms {
            return Err(Error::NonConvergence {
                op: "clausen_3f2",
                terms: k + 1,
            });
        }
    }
    if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
        return Err(Error::NonConvergence {
            op: "clausen_3f2",
            terms: 0,
        });
    }
    Ok(sum.value())
}
