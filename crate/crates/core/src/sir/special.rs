//! Special-case outage reductions: κ-μ SoI (m → ∞), η-μ/η-μ and the
//! Hoyt-SoI single-F_D closed form.

use crate::error::{Error, Result};
use crate::fading::{from_eta_mu, from_hoyt, EtaMuParams, FadingProfile};
use crate::hypergeom::{fd_integral_ln, lauricella_fd, FdArgs};
use crate::series::SeriesConfig;
use crate::sir::outage::TermChoice;
use crate::sir::{
    coverage_table, outage_series, InterferenceRep, OutageMethod, OutageResult,
    SirProblem, SoiWeights,
};
use crate::special::{gamma_p, ln_gamma};

/// κ-μ SoI parameters (the m → ∞ limit has no shadowing parameter).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMuParams {
    pub kappa: f64,
    pub mu: f64,
    pub mean_power: f64,
}

impl KappaMuParams {
    pub fn new(kappa: f64, mu: f64, mean_power: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !(mu > 0.0) || !(mean_power > 0.0) {
            return Err(Error::invalid(format!(
                "kappa-mu parameters out of range (kappa={kappa}, mu={mu}, mean={mean_power})"
            )));
        }
        Ok(KappaMuParams {
            kappa,
            mu,
            mean_power,
        })
    }

    pub fn theta(&self) -> f64 {
        self.mean_power / (self.mu * (1.0 + self.kappa))
    }
}

/// Outage with a κ-μ SoI: the m → ∞ limit turns the negative-binomial
/// weights into Poisson ones, (m)_p(1−θ/λ)^p → (μκ)^p and (θ/λ)^m → e^{−μκ}.
pub fn outage_soi_kappa_mu(
    soi: &KappaMuParams,
    interferers: &[FadingProfile],
    target_sir: f64,
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<OutageResult> {
    cfg.validate()?;
    let lam = soi.mu * soi.kappa;
    let p_max = match terms {
        TermChoice::Fixed(p) => p,
        TermChoice::Auto { epsilon } => {
            // Poisson weight tail P(K > P) = P(P+1, μκ); coverage ≤ 1
            let mut p = 0u32;
            while gamma_p(p as f64 + 1.0, lam) >= epsilon {
                p += 1;
                if p > 4096 {
                    return Err(Error::NonConvergence {
                        op: "outage_soi_kappa_mu",
                        terms: p as u64,
                    });
                }
            }
            p
        }
    };
    let rep = InterferenceRep::from_profiles(interferers)?;
    let weights = SoiWeights::Poisson { lam };
    let cov = coverage_table(
        soi.theta(),
        soi.mu,
        &rep,
        target_sir,
        p_max as usize + 1,
        cfg,
    )?;
    let mut acc = 0.0;
    let mut w = weights.first();
    for (p, c) in cov.iter().enumerate() {
        acc += w * c;
        w = weights.step(w, p);
    }
    Ok(OutageResult {
        value: (1.0 - acc).clamp(0.0, 1.0),
        terms_used: p_max,
        error_bound: gamma_p(p_max as f64 + 1.0, lam),
        method: OutageMethod::KappaMuSoi,
    })
}

/// Outage when SoI and all interferers are η-μ faded. Evaluates both the
/// mapped κ-μ shadowed route and the direct (h, H) → Gamma-scale
/// parameterisation; the two must agree.
pub fn outage_eta_mu(
    soi: &EtaMuParams,
    interferers: &[EtaMuParams],
    target_sir: f64,
    cfg: &SeriesConfig,
) -> Result<OutageResult> {
    cfg.validate()?;
    if interferers.is_empty() {
        return Err(Error::invalid("outage_eta_mu needs >= 1 interferer"));
    }
    // route A: the κ-μ shadowed mapping
    let soi_mapped = from_eta_mu(soi)?;
    let ints_mapped = interferers
        .iter()
        .map(from_eta_mu)
        .collect::<Result<Vec<_>>>()?;
    let problem = SirProblem::new(soi_mapped, ints_mapped, target_sir)?;
    let mapped = outage_series(&problem, TermChoice::Fixed(eta_mu_terms(soi)), cfg)?;

    // route B: Gamma scales straight from the (h, H) arithmetic
    let (a1, a2) = soi.gamma_scales();
    let (theta_b, lambda_b) = (a1.min(a2), a1.max(a2));
    let mut shapes = Vec::with_capacity(2 * interferers.len());
    let mut scales = Vec::with_capacity(2 * interferers.len());
    let mut rho = 0.0;
    for p in interferers {
        let (b1, b2) = p.gamma_scales();
        shapes.push(p.mu_bar);
        scales.push(b1);
        shapes.push(p.mu_bar);
        scales.push(b2);
        rho += 2.0 * p.mu_bar;
    }
    let rep = InterferenceRep::from_components(shapes, scales, rho)?;
    let weights = SoiWeights::NegBinomial {
        m: soi.mu_bar,
        q: 1.0 - theta_b / lambda_b,
    };
    let p_max = eta_mu_terms(soi) as usize;
    let cov = coverage_table(theta_b, 2.0 * soi.mu_bar, &rep, target_sir, p_max + 1, cfg)?;
    let mut acc = 0.0;
    let mut w = weights.first();
    for (p, c) in cov.iter().enumerate() {
        acc += w * c;
        w = weights.step(w, p);
    }
    let direct = (1.0 - acc).clamp(0.0, 1.0);

    if (mapped.value - direct).abs() > 1e-8 {
        return Err(Error::domain(
            "outage_eta_mu",
            format!(
                "mapped ({}) and direct ({}) parameterisations disagree",
                mapped.value, direct
            ),
        ));
    }
    Ok(OutageResult {
        method: OutageMethod::EtaMu,
        ..mapped
    })
}

fn eta_mu_terms(soi: &EtaMuParams) -> u32 {
    // NB weight tail with m = μ̄, q = 1−η after folding: generous fixed pick
    let eta = if soi.eta > 1.0 { 1.0 / soi.eta } else { soi.eta };
    let q = 1.0 - eta;
    if q < 1e-12 {
        0
    } else {
        let needed = (-14.0 * std::f64::consts::LN_10 / q.ln()).ceil();
        (needed as u32).clamp(8, 2048)
    }
}

/// Hoyt (Nakagami-q) SoI against η-μ interferers: the μ = 1 SoI makes
/// c' = a in the E_D form, which collapses the whole p-series into a single
/// Lauricella F_D^(2N+1) with leading parameter 1/2 and denominator 1:
///
///   coverage = K·∏_j(1−x_j)^{−b_j}·F_D^{(2N+1)}[1/2; (1, b_2..b_{2N+1});
///              1; (x₁, x₁/(1−x₂), …, x₁/(1−x_{2N+1}))]
///
/// built on the pre-transformation arguments x₁ = 1−θ/λ,
/// x_j = −θ/(T s_j), all of which land inside the unit polydisk.
pub fn outage_hoyt(
    q: f64,
    soi_mean_power: f64,
    interferers: &[EtaMuParams],
    target_sir: f64,
    cfg: &SeriesConfig,
) -> Result<OutageResult> {
    cfg.validate()?;
    let soi = from_hoyt(q, soi_mean_power)?;
    let (theta, lambda, m) = (soi.theta, soi.lambda, soi.m);
    let t = target_sir;

    let mut shapes = Vec::new();
    let mut scales = Vec::new();
    let mut rho = 0.0;
    for p in interferers {
        let (b1, b2) = p.gamma_scales();
        shapes.push(p.mu_bar);
        scales.push(b1);
        shapes.push(p.mu_bar);
        scales.push(b2);
        rho += 2.0 * p.mu_bar;
    }
    if shapes.is_empty() {
        return Err(Error::invalid("outage_hoyt needs >= 1 interferer"));
    }

    let x1 = 1.0 - theta / lambda;
    let mut fd_b = Vec::with_capacity(shapes.len() + 1);
    let mut fd_x = Vec::with_capacity(shapes.len() + 1);
    fd_b.push(1.0); // the c' − Σb_j replacement slot carries the SoI argument
    fd_x.push(x1);
    let mut ln_pref = 0.0;
    for (shape, scale) in shapes.iter().zip(&scales) {
        let one_minus_xj = 1.0 + theta / (t * scale);
        ln_pref -= shape * one_minus_xj.ln();
        fd_b.push(*shape);
        fd_x.push(x1 / one_minus_xj);
    }
    if fd_x.iter().any(|v| v.abs() >= 1.0) {
        return Err(Error::domain(
            "outage_hoyt",
            "F_D argument outside the unit polydisk".to_string(),
        ));
    }
    let args = FdArgs::new(0.5, fd_b, 1.0, fd_x)?;
    let ln_fd = if args.x.len() <= 5 {
        match lauricella_fd(&args, cfg) {
            Ok(v) if v > 0.0 => v.ln(),
            _ => fd_integral_ln(&args, 1e-11)?,
        }
    } else {
        fd_integral_ln(&args, 1e-11)?
    };

    // ln K for μ = 1 SoI
    let big_a = rho + 1.0;
    let mut ln_k = ln_gamma(big_a) - ln_gamma(1.0 + rho);
    for (shape, scale) in shapes.iter().zip(&scales) {
        ln_k -= shape * scale.ln();
    }
    ln_k += (rho + m) * theta.ln() - rho * t.ln() - m * lambda.ln();

    let coverage = (ln_k + ln_pref + ln_fd).exp();
    Ok(OutageResult {
        value: (1.0 - coverage).clamp(0.0, 1.0),
        terms_used: 0,
        error_bound: 1e-8,
        method: OutageMethod::Hoyt,
    })
}
