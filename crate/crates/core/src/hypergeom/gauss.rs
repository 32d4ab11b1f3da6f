//! Gauss hypergeometric function ₂F₁(a, b; c; x).

use crate::error::{Error, Result};
use crate::hypergeom::{is_nonpositive_integer, termination_degree};
use crate::series::{Kahan, SeriesConfig};

/// ₂F₁(a, b; c; x) for |x| < 1, or any x when the series terminates
/// (a or b a nonpositive integer).
///
/// Negative arguments go through the Pfaff transformation
/// ₂F₁(a,b;c;x) = (1−x)^{−a} ₂F₁(a, c−b; c; x/(x−1)), which maps x < 0 into
/// (0,1); for x ∈ (0.9, 1) the Euler transformation
/// (1−x)^{c−a−b} ₂F₁(c−a, c−b; c; x) is used when it reduces the parameter
/// growth of the terms.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if is_nonpositive_integer(c) {
        let c_ok = [a, b]
            .iter()
            .any(|&p| matches!(termination_degree(p), Some(n) if (n as f64) < -c.round()));
        if !c_ok {
            return Err(Error::domain(
                "gauss_2f1",
                format!("c = {c} is a nonpositive integer"),
            ));
        }
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let terminating = termination_degree(a).is_some() || termination_degree(b).is_some();
    if !terminating {
        if x < 0.0 {
            // Pfaff maps any negative argument into [0, 1)
            let y = x / (x - 1.0);
            return Ok((1.0 - x).powf(-a) * series_2f1(a, c - b, c, y, cfg)?);
        }
        if x >= 1.0 {
            return Err(Error::domain(
                "gauss_2f1",
                format!("x = {x} >= 1 and the series does not terminate"),
            ));
        }
        if x > 0.9 && c - a - b > 0.0 && (c - a) + (c - b) < a + b {
            return Ok((1.0 - x).powf(c - a - b) * series_2f1(c - a, c - b, c, x, cfg)?);
        }
    }
    series_2f1(a, b, c, x, cfg)
}

fn series_2f1(a: f64, b: f64, c: f64, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    let n_stop = [termination_degree(a), termination_degree(b)]
        .into_iter()
        .flatten()
        .min();
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
        term *= (a + kf) * (b + kf) * x / ((c + kf) * (kf + 1.0));
        if !term.is_finite() {
            return Err(Error::NonConvergence {
                op: "gauss_2f1",
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
                op: "gauss_2f1",
                terms: k + 1,
            });
        }
    }
    if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
        return Err(Error::NonConvergence {
            op: "gauss_2f1",
            terms: 0,
        });
    }
    Ok(sum.value())
}

/// ₂F₁(1, a; c; y) for 0 ≤ y < 1 by the Gauss continued fraction
/// (modified Lentz). Converges far faster than the series as y → 1⁻,
/// which is the regime the rate reduction lives in.
pub fn gauss_2f1_cf_1a(a: f64, c: f64, y: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::domain(
            "gauss_2f1_cf_1a",
            format!("requires 0 <= y < 1, got {y}"),
        ));
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    // F(a,1;c;y) = 1/D with D = 1 + d₁y/(1 + d₂y/(1 + ...)), the b=0
    // specialisation of the classical Gauss ladder for
    // F(a,b+1;c+1;y)/F(a,b;c;y):
    //   d_{2m+1} = −(a+m)(c−1+m)/((c−1+2m)(c+2m))
    //   d_{2m+2} = −(m+1)(c−a+m)/((c+2m)(c+1+2m))
    let partial = |j: usize| -> f64 {
        if j % 2 == 1 {
            let m = ((j - 1) / 2) as f64;
            -(a + m) * (c - 1.0 + m) / ((c - 1.0 + 2.0 * m) * (c + 2.0 * m))
        } else {
            let m = (j / 2 - 1) as f64;
            -((j / 2) as f64) * (c - a + m) / ((c + 2.0 * m) * (c + 1.0 + 2.0 * m))
        }
    };
    // Modified Lentz on D.
    let tiny = 1e-300;
    let mut f = 1.0f64;
    let mut cc = f;
    let mut dd = 0.0f64;
    let mut settle = 0u32;
    for j in 1..400_000usize {
        let aj = partial(j) * y;
        dd = 1.0 + aj * dd;
        if dd.abs() < tiny {
            dd = tiny;
        }
        cc = 1.0 + aj / cc;
        if cc.abs() < tiny {
            cc = tiny;
        }
        dd = 1.0 / dd;
        let delta = cc * dd;
        f *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            settle += 1;
            if settle >= 2 {
                return Ok(1.0 / f);
            }
        } else {
            settle = 0;
        }
    }
    Err(Error::NonConvergence {
        op: "gauss_2f1_cf_1a",
        terms: 400_000,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn binomial_identity() {
        // ₂F₁(a,b;b;x) = (1−x)^{−a}
        let v = gauss_2f1(1.5, 2.0, 2.0, 0.3, &cfg()).unwrap();
        assert!((v - 0.7f64.powf(-1.5)).abs() < 5e-10);
    }

    #[test]
    fn terminating_polynomial() {
        // ₂F₁(−1, b; c; x) = 1 − bx/c
        let v = gauss_2f1(-1.0, 2.0, 3.0, 0.5, &cfg()).unwrap();
        assert!((v - (1.0 - 2.0 * 0.5 / 3.0)).abs() < 1e-14);
        // terminating series are valid outside |x|<1 as well
        let v = gauss_2f1(-2.0, 1.5, 2.5, 3.0, &cfg()).unwrap();
        let exact = 1.0 + (-2.0) * 1.5 * 3.0 / 2.5
            + ((-2.0) * (-1.0) / 2.0) * (1.5 * 2.5 / (2.5 * 3.5)) * 9.0;
        assert!((v - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn log_identity() {
        // ₂F₁(1,1;2;x) = −ln(1−x)/x
        let v = gauss_2f1(1.0, 1.0, 2.0, 0.5, &cfg()).unwrap();
        assert!((v - 2.0 * 2.0f64.ln()).abs() < 5e-10);
    }

    #[test]
    fn pfaff_handles_negative_arguments() {
        // against the analytically continued closed form (1−x)^{−a} at b=b
        let v = gauss_2f1(0.7, 3.0, 3.0, -5.0, &cfg()).unwrap();
        assert!((v - 6.0f64.powf(-0.7)).abs() < 5e-10);
    }

    #[test]
    fn domain_error_outside_disk() {
        assert!(gauss_2f1(0.5, 0.7, 1.3, 1.2, &cfg()).is_err());
    }

    #[test]
    fn cf_matches_series() {
        for &(a, c, y) in &[(2.5, 4.0, 0.3), (7.0, 3.3, 0.8), (1.0, 2.0, 0.9)] {
            let cf = gauss_2f1_cf_1a(a, c, y).unwrap();
            let series = gauss_2f1(1.0, a, c, y, &cfg()).unwrap();
            assert!((cf - series).abs() < 1e-9 * series.abs(), "a={a} c={c} y={y}");
        }
        // closed form at a=1, c=2: −ln(1−y)/y, y near 1
        let y = 0.9995;
        let cf = gauss_2f1_cf_1a(1.0, 2.0, y).unwrap();
        let exact = -(1.0 - y).ln() / y;
        assert!((cf - exact).abs() < 1e-10 * exact);
    }
}
