//! Ergodic rate E[ln(1+SIR)] for integer SoI μ (the rate theorem's
//! validity condition).
//!
//! The threshold integral R = ∫ P(SIR > u)/(1+u) du is taken in the beta
//! split variable x = θ/(θ + u·s_min) (the η_t reduction's change of
//! variables), where the conditional coverage is the all-positive mixture
//! Σ_p w_p Σ_n δ̃_n I_x(ρ+n, μ+p) — for integer μ each I_x is the exact
//! terminating form x^A Σ_{k<μ+p} (A)_k(1−x)^k/k!. One tanh-sinh pass over
//! x drives the shared (n, p) recurrence sweep.

use crate::error::{Error, Result};
use crate::fading::FadingProfile;
use crate::quad::gk_adaptive;
use crate::series::SeriesConfig;
use crate::sir::outage::TermChoice;
use crate::sir::{
    coverage_at_split_cached, outage_series, InterferenceRep, KappaMuParams,
    SirProblem, SoiWeights,
};
use crate::special::gamma_p;

/// Rate in nats/s/Hz for a κ-μ shadowed SoI with integer μ.
pub fn rate_shadowed(
    problem: &SirProblem,
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let weights = SoiWeights::shadowed(&problem.soi);
    let q = 1.0 - problem.soi.theta / problem.soi.lambda;
    let p_max = match terms {
        TermChoice::Fixed(p) => p,
        TermChoice::Auto { epsilon } => nb_tail_terms(problem.soi.m, q, epsilon)?,
    };
    rate_mixture(
        problem.soi.theta,
        problem.soi.mu,
        weights,
        &InterferenceRep::from_profiles(&problem.interferers)?,
        p_max,
        cfg,
    )
}

/// Rate for a κ-μ SoI (m → ∞): Poisson weights, same machinery.
pub fn rate_kappa_mu(
    soi: &KappaMuParams,
    interferers: &[FadingProfile],
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let lam = soi.mu * soi.kappa;
    let p_max = match terms {
        TermChoice::Fixed(p) => p,
        TermChoice::Auto { epsilon } => {
            let mut p = 0u32;
            while gamma_p(p as f64 + 1.0, lam) >= epsilon {
                p += 1;
                if p > 4096 {
                    return Err(Error::NonConvergence {
                        op: "rate_kappa_mu",
                        terms: p as u64,
                    });
                }
            }
            p
        }
    };
    rate_mixture(
        soi.theta(),
        soi.mu,
        SoiWeights::Poisson {
            lam,
        },
        &InterferenceRep::from_profiles(interferers)?,
        p_max,
        cfg,
    )
}

fn nb_tail_terms(m: f64, q: f64, epsilon: f64) -> Result<u32> {
    if q <= 0.0 {
        return Ok(0);
    }
    let mut w = (1.0 - q).powf(m);
    let mut cum = 0.0;
    for p in 0..8192u32 {
        cum += w;
        if 1.0 - cum < epsilon {
            return Ok(p);
        }
        w *= (m + p as f64) * q / (p as f64 + 1.0);
    }
    Err(Error::NonConvergence {
        op: "rate terms",
        terms: 8192,
    })
}

fn rate_mixture(
    soi_theta: f64,
    soi_mu: f64,
    weights: SoiWeights,
    rep: &InterferenceRep,
    p_max: u32,
    cfg: &SeriesConfig,
) -> Result<f64> {
    cfg.validate()?;
    let mu_int = soi_mu.round();
    if (soi_mu - mu_int).abs() > 1e-9 || mu_int < 1.0 {
        return Err(Error::invalid(format!(
            "rate requires a positive integer SoI mu, got {soi_mu}"
        )));
    }
    let v = rep.s_min / soi_theta;
    let p_count = p_max as usize + 1;

    // For integer M = μ+p the conditional coverage truncates,
    //   I_x(A, M) = x^A Σ_{k<M} (A)_k (1−x)^k / k!,
    // and the threshold integral of every term reduces to beta moments, so
    //
    //   R = Σ_p w_p Σ_n δ̃_n ∫₀¹ I_x(ρ+n, μ+p) / (x·(1 − (1−v)x)) dx
    //
    // (the η_t reduction in the mixture coordinates; x = θ/(θ+u·s_min)).
    // The x-integral runs over shared tanh-sinh nodes; each node reuses the
    // O(1)-per-(n,p) incomplete-beta recurrence sweep.
    let cache = rep.cached(1e-13, 4_000_000)?;
    let node = |x: f64, omx: f64| -> Result<Vec<f64>> {
        let weight = 1.0 / (x * (1.0 - (1.0 - v) * x));
        let mut cov = coverage_at_split_cached(soi_mu, &cache, x, omx, p_count, cfg)?;
        for c in &mut cov {
            *c *= weight;
        }
        Ok(cov)
    };

    // tanh-sinh over x ∈ (0,1) with vector accumulation
    let eval_t = |t: f64, acc: &mut [f64]| -> Result<bool> {
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        if s.abs() > 300.0 {
            return Ok(false);
        }
        let e2s = (2.0 * s).exp();
        let x = e2s / (1.0 + e2s);
        let omx = 1.0 / (1.0 + e2s);
        let ln_w = (std::f64::consts::FRAC_PI_4 * t.cosh()).ln()
            - 2.0 * (s.abs() + (1.0 + (-2.0 * s.abs()).exp()).ln() - std::f64::consts::LN_2);
        let w = ln_w.exp();
        if w < 1e-290 {
            return Ok(false);
        }
        let row = node(x, omx)?;
        let mut alive = false;
        for (a, r) in acc.iter_mut().zip(&row) {
            *a += w * r;
            if w * r > 1e-18 {
                alive = true;
            }
        }
        Ok(alive)
    };

    let mut h = 0.5f64;
    let mut acc = vec![0.0f64; p_count];
    eval_t(0.0, &mut acc)?;
    let mut k = 1usize;
    loop {
        let a1 = eval_t(h * k as f64, &mut acc)?;
        let a2 = eval_t(-(h * k as f64), &mut acc)?;
        if (k as f64) * h > 6.5 && !a1 && !a2 {
            break;
        }
        k += 1;
        if k > 200 {
            break;
        }
    }
    let mut prev: Vec<f64> = acc.iter().map(|a| a * h).collect();
    let mut converged = false;
    for _ in 0..9 {
        h *= 0.5;
        let mut kk = 1usize;
        loop {
            let t = h * (2 * kk - 1) as f64;
            let a1 = eval_t(t, &mut acc)?;
            let a2 = eval_t(-t, &mut acc)?;
            if t > 6.5 && !a1 && !a2 {
                break;
            }
            kk += 1;
            if kk > 2_000_000 {
                break;
            }
        }
        let cur: Vec<f64> = acc.iter().map(|a| a * h).collect();
        let close = prev
            .iter()
            .zip(&cur)
            .all(|(p, q)| (p - q).abs() <= 1e-10 + 1e-9 * q.abs());
        prev = cur;
        if close {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::QuadratureFailure {
            op: "rate_shadowed",
            detail: "threshold integral did not settle".to_string(),
        });
    }

    let mut rate = 0.0;
    let mut w = weights.first();
    for (p, k) in prev.iter().enumerate() {
        rate += w * k;
        w = weights.step(w, p);
    }
    Ok(rate)
}

/// The rate identity oracle: R = ∫₀^∞ (1 − O_p(e^t − 1)) dt, evaluated by
/// adaptive quadrature over the outage series. Kept separate from the
/// closed-form route so the two stay independently computed.
pub fn rate_by_outage_quadrature(
    problem: &SirProblem,
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let coverage_at = |t_exp: f64| -> f64 {
        let thr = t_exp.exp_m1().max(1e-300);
        let prob = problem.with_target(thr).expect("positive threshold");
        1.0 - outage_series(&prob, terms, cfg)
            .map(|o| o.value)
            .unwrap_or(1.0)
    };
    // find a cutoff where coverage is negligible
    let mut t_hi = 2.0f64;
    while coverage_at(t_hi) > 1e-11 && t_hi < 700.0 {
        t_hi *= 1.7;
    }
    let (value, _) = gk_adaptive(coverage_at, 0.0, t_hi, 1e-9, 1e-8)?;
    Ok(value)
}
