//! Confluent multivariate hypergeometric function Φ₂^(N)(b; c; x).
//!
//! Three evaluation regimes:
//! * small arguments — direct total-degree shells S_k/(c)_k;
//! * all arguments ≤ 0 — the Gamma-mixture expansion
//!   Φ₂(b;c;−w) = Σ_m h_m/(c)_m · ₁F₁(ρ+m; c+m; −w₀), w₀ = max w_j,
//!   whose coefficients h_m come from the same shell recurrence on the
//!   ratios (1 − w_j/w₀); for c − ρ = 1 the ₁F₁ factor is a regularized
//!   lower incomplete gamma, which is the form the fading/interference
//!   cdfs consume;
//! * mixed signs with a large positive part — the exponential-scaling
//!   identity Φ₂(b;c;x) = e^{x_k}·Φ₂^{(N+1)}(b, c−Σb; c; x−x_k, −x_k) with
//!   x_k = max x_j, which lands in the all-nonpositive regime.

use crate::error::{Error, Result};
use crate::hypergeom::ShellCoeffs;
use crate::series::{Kahan, LogSum, SeriesConfig};
use crate::special::{gamma_p, ln_gamma};

/// Φ₂^(N)(b; c; x). Entire in x; errors only on parameter violations or
/// exhausted caps.
pub fn phi2_n(b: &[f64], c: f64, x: &[f64], cfg: &SeriesConfig) -> Result<f64> {
    let (ln, sign) = phi2_parts(b, c, x, cfg)?;
    Ok(sign * ln.exp())
}

/// (ln |Φ₂|, sign) — the form the quadrature oracles compose in log space.
pub fn phi2_parts(b: &[f64], c: f64, x: &[f64], cfg: &SeriesConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if b.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "phi2_n: {} parameters vs {} arguments",
            b.len(),
            x.len()
        )));
    }
    if crate::hypergeom::is_nonpositive_integer(c) {
        return Err(Error::domain(
            "phi2_n",
            format!("c = {c} is a nonpositive integer"),
        ));
    }
    // zero arguments contribute nothing: drop them (their b_j leaves the series)
    let mut bb = Vec::with_capacity(b.len());
    let mut xx = Vec::with_capacity(x.len());
    for (bi, xi) in b.iter().zip(x) {
        if *xi != 0.0 && *bi != 0.0 {
            bb.push(*bi);
            xx.push(*xi);
        }
    }
    if xx.is_empty() {
        return Ok((0.0, 1.0));
    }
    if xx.len() == 1 {
        // Φ₂ with one live slot is ₁F₁, whose evaluator already carries the
        // Kummer reflection machinery
        let m = crate::hypergeom::kummer_1f1(bb[0], c, xx[0], cfg)?;
        return Ok((m.abs().max(f64::MIN_POSITIVE).ln(), m.signum()));
    }
    let xmax = xx.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let xabs = xx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let has_neg = xx.iter().any(|&v| v < 0.0);

    // raw shell coefficients grow like x_max^k, so the direct path stays
    // inside small arguments (roundoff ~ e^{|x|}·ulp must sit below the
    // configured tolerances); larger ones go through the mixture forms
    if xabs <= 8.0 || (!has_neg && xabs <= 30.0) {
        return phi2_direct(&bb, c, &xx, cfg);
    }
    if xmax <= 0.0 {
        let w: Vec<f64> = xx.iter().map(|v| -v).collect();
        return phi2_nonpos(&bb, c, &w, cfg);
    }
    // Kummer shift by the largest argument.
    let rho: f64 = bb.iter().sum();
    let mut bs = bb.clone();
    bs.push(c - rho);
    let mut w: Vec<f64> = xx.iter().map(|v| xmax - v).collect();
    w.push(xmax);
    // shifted slots at w=0 (the maximal ones) are dropped inside
    let (ln, sign) = {
        let mut b2 = Vec::new();
        let mut w2 = Vec::new();
        for (bi, wi) in bs.iter().zip(&w) {
            if *wi != 0.0 && *bi != 0.0 {
                b2.push(*bi);
                w2.push(*wi);
            }
        }
        if w2.is_empty() {
            (0.0, 1.0)
        } else {
            phi2_nonpos(&b2, c, &w2, cfg)?
        }
    };
    Ok((xmax + ln, sign))
}

/// Direct shell summation Σ_k S_k/(c)_k with a cancellation monitor.
fn phi2_direct(b: &[f64], c: f64, x: &[f64], cfg: &SeriesConfig) -> Result<(f64, f64)> {
    let mut shells = ShellCoeffs::new(b, x);
    let mut inv_ck = 1.0f64; // 1/(c)_k
    let mut sum = Kahan::new();
    let mut abs_sum = 0.0f64;
    let mut small_streak = 0u32;
    let cap = cfg
        .max_index_per_dim
        .saturating_mul(x.len().max(1))
        .max(4 * (x.iter().fold(0.0f64, |m, v| m.max(v.abs())) as usize + 8))
        .min(cfg.max_total_terms as usize);
    for k in 0..=cap {
        let sk = shells.get(k);
        if !sk.is_finite() || sk.abs() > 1e280 {
            return Err(Error::NonConvergence {
                op: "phi2_n",
                terms: k as u64,
            });
        }
        let term = sk * inv_ck;
        sum.add(term);
        abs_sum += term.abs();
        if k > 2 && term.abs() <= cfg.tail_target(sum.value()) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
        if k == cap {
            return Err(Error::NonConvergence {
                op: "phi2_n",
                terms: k as u64,
            });
        }
        inv_ck /= c + k as f64;
    }
    if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
        return Err(Error::NonConvergence {
            op: "phi2_n",
            terms: 0,
        });
    }
    let v = sum.value();
    Ok((v.abs().ln(), if v < 0.0 { -1.0 } else { 1.0 }))
}

/// Φ₂(b; c; −w), w_j > 0, via the mixture expansion around w₀ = max w:
///
///   Φ₂(b;c;−w) = Σ_m h̃_m · (w₀^m/(c)_m) · M(ρ+m; c+m; −w₀)
///
/// with h̃_m the shell coefficients of ∏(1 − (1−w_j/w₀)ψ)^{−b_j}. For
/// ν = c−ρ = 1 (the cdf pairing) the ₁F₁ factor collapses to a regularized
/// incomplete gamma and the w₀^m cancels:
///
///   Φ₂ = Γ(c) w₀^{1−c} Σ_m h̃_m P(c+m−1, w₀).
fn phi2_nonpos(b: &[f64], c: f64, w: &[f64], cfg: &SeriesConfig) -> Result<(f64, f64)> {
    let rho: f64 = b.iter().sum();
    let nu = c - rho;
    let w0 = w.iter().cloned().fold(0.0f64, f64::max);
    let ratios: Vec<f64> = w.iter().map(|wi| 1.0 - wi / w0).collect();
    let mut shells = ShellCoeffs::new(b, &ratios);
    // Σ_m |h̃_m| ≤ exp(ln_habs); with the κ-μ pairing h̃_m ≥ 0 and this is exact.
    let ln_habs: f64 = b
        .iter()
        .zip(w)
        .map(|(bj, wj)| -bj.abs() * (wj / w0).ln())
        .sum::<f64>();
    if ln_habs > 600.0 {
        return Err(Error::NonConvergence {
            op: "phi2_n",
            terms: 0,
        });
    }
    let habs_total = ln_habs.exp();

    let gamma_form = (nu - 1.0).abs() < 1e-12;
    if nu < -1e-9 && w0 > 30.0 {
        // alternating confluent factor at a large argument: no stable path
        // (ν = 0 is fine: M(ρ+m; c+m; −w₀) collapses to e^{−w₀} exactly)
        return Err(Error::NonConvergence {
            op: "phi2_n",
            terms: 0,
        });
    }

    // ln of the m-th confluent factor (positive, decreasing in m):
    //   gamma form: P(c+m−1, w₀)                      [prefactor applied at the end]
    //   general:    w₀^m/(c)_m · e^{−w₀} M(ν; c+m; w₀)
    let mut ln_ratio = 0.0f64; // ln(w₀^m/(c)_m)
    let mut habs_seen = 0.0f64;
    let mut sum = Kahan::new();
    let mut abs_sum = 0.0f64;
    let cap = (cfg.max_total_terms as usize).min(2_000_000);
    let mut last_factor;
    let mut m = 0usize;
    loop {
        let hm = shells.get(m);
        if !hm.is_finite() || hm.abs() > 1e290 {
            return Err(Error::NonConvergence {
                op: "phi2_n",
                terms: m as u64,
            });
        }
        let ln_factor = if gamma_form {
            let p = gamma_p(c + m as f64 - 1.0, w0);
            if p > 0.0 {
                p.ln()
            } else {
                f64::NEG_INFINITY
            }
        } else {
            ln_ratio - w0 + ln_m_nu(nu, c + m as f64, w0)
        };
        let factor = ln_factor.exp();
        last_factor = factor;
        let term = hm * factor;
        sum.add(term);
        abs_sum += term.abs();
        habs_seen += hm.abs();

        if gamma_form {
            // P decreasing in m: remaining-coefficient mass bounds the tail
            let tail = (habs_total - habs_seen).max(0.0) * factor;
            if m > 2 && tail <= cfg.tail_target(sum.value()) {
                break;
            }
        } else if m as f64 > 1.2 * w0 + 8.0
            && term.abs() <= cfg.tail_target(sum.value())
            && (habs_total - habs_seen).max(0.0) * last_factor
                <= cfg.tail_target(sum.value())
        {
            break;
        }
        m += 1;
        if m >= cap {
            return Err(Error::NonConvergence {
                op: "phi2_n",
                terms: m as u64,
            });
        }
        ln_ratio += w0.ln() - (c + (m - 1) as f64).ln();
    }
    if abs_sum * 2e-16 > cfg.tail_target(sum.value()) {
        return Err(Error::NonConvergence {
            op: "phi2_n",
            terms: 0,
        });
    }
    let v = sum.value();
    let sign = if v < 0.0 { -1.0 } else { 1.0 };
    let ln_abs = if gamma_form {
        ln_gamma(c) + (1.0 - c) * w0.ln() + v.abs().ln()
    } else {
        v.abs().ln()
    };
    Ok((ln_abs, sign))
}

/// ln M(ν; β; w) for ν > 0, β > 0, w ≥ 0 (positive-term series).
fn ln_m_nu(nu: f64, beta: f64, w: f64) -> f64 {
    if w > 1e6 {
        // leading Kummer asymptotic; only tail-guard magnitudes live out here
        return w + (nu - beta) * w.ln() + ln_gamma(beta) - ln_gamma(nu);
    }
    let mut ls = LogSum::new();
    ls.add_ln(0.0);
    let mut ln_t = 0.0f64;
    let mut j = 0u64;
    loop {
        let jf = j as f64;
        let r = (nu + jf) * w / ((beta + jf) * (jf + 1.0));
        if r <= 0.0 {
            break;
        }
        ln_t += r.ln();
        ls.add_ln(ln_t);
        j += 1;
        if r < 0.5 && ls.rel_of(ln_t) < 1e-18 {
            break;
        }
        if j > 2_000_000 {
            break;
        }
    }
    ls.ln_value()
}

/// Scaled Gamma-mixture coefficients δ̃_k = C·δ_k for a sum of Gamma factors
/// with shapes `b` and scale ratios `e_j = 1 − c₀/c_j` relative to the
/// smallest scale c₀. Σ_k δ̃_k = 1; every δ̃_k ≥ 0 when the shapes pair the
/// κ-μ shadowed way (negative shape on the smaller scale of each pair).
///
/// Returned lazily through [`MixtureSeries`].
pub(crate) fn mixture_coefficients(b: &[f64], e: &[f64]) -> MixtureSeries {
    debug_assert!(e.iter().all(|&v| (0.0..1.0).contains(&v)));
    let ln_c: f64 = b
        .iter()
        .zip(e)
        .map(|(bj, ej)| bj * (1.0 - ej).ln())
        .sum();
    MixtureSeries {
        shells: ShellCoeffs::new(b, e),
        scale: ln_c.exp(),
        mass: 0.0,
        emitted: 0,
    }
}

/// Lazy stream of δ̃_k with the running emitted mass (Σ δ̃ over all k is 1).
pub(crate) struct MixtureSeries {
    shells: ShellCoeffs,
    scale: f64,
    mass: f64,
    emitted: usize,
}

impl MixtureSeries {
    /// δ̃_k; must be called with k = emitted count (sequential access).
    pub fn next_delta(&mut self) -> f64 {
        let d = self.scale * self.shells.get(self.emitted);
        self.emitted += 1;
        self.mass += d;
        d
    }

    /// Mass of all coefficients emitted so far.
    pub fn emitted_mass(&self) -> f64 {
        self.mass
    }
}
