//! Gamma-mixture machinery shared by the outage and rate evaluators.
//!
//! Every κ-μ shadowed source factors over its Laplace transform as
//! (1+θs)^{−(μ−m)}(1+λs)^{−m}, so the aggregate interference is a sum of 2N
//! Gamma components with shapes (μ_i−m_i, m_i) on scales (θ_i, λ_i). Around
//! the smallest scale this sum expands into a single Gamma-shape mixture
//! with nonnegative coefficients δ̃_n (the pairing λ_i ≥ θ_i puts every
//! negative shape on the smaller scale of its pair, which makes the
//! generating function a product of positive-coefficient series).
//!
//! The SoI side is the negative-binomial shape mixture
//! Σ_p w_p Gamma(μ+p, θ): exactly the paper's outer p-series.

use crate::error::{Error, Result};
use crate::fading::FadingProfile;
use crate::hypergeom::{mixture_coefficients, MixtureSeries};
use crate::series::SeriesConfig;
use crate::special::{beta_reg, gamma_p, ln_beta};

/// The interference sum as 2N Gamma components (shape_j, scale_j), with the
/// mixture ratios made once and reused for every threshold T (they depend on
/// scale ratios only).
#[derive(Debug, Clone)]
pub(crate) struct InterferenceRep {
    pub shapes: Vec<f64>,
    pub scales: Vec<f64>,
    /// Σ μ_i — the total interferer cluster count.
    pub rho: f64,
    pub s_min: f64,
    ratios: Vec<f64>,
}

impl InterferenceRep {
    pub fn from_profiles(interferers: &[FadingProfile]) -> Result<Self> {
        if interferers.is_empty() {
            return Err(Error::invalid("at least one interferer is required"));
        }
        let mut shapes = Vec::with_capacity(2 * interferers.len());
        let mut scales = Vec::with_capacity(2 * interferers.len());
        let mut rho = 0.0;
        for p in interferers {
            shapes.push(p.mu - p.m);
            scales.push(p.theta);
            shapes.push(p.m);
            scales.push(p.lambda);
            rho += p.mu;
        }
        Self::from_components(shapes, scales, rho)
    }

    /// Direct construction from (shape, scale) pairs; `rho` is the shape sum
    /// (carried separately because shape pairs cancel analytically).
    pub fn from_components(shapes: Vec<f64>, scales: Vec<f64>, rho: f64) -> Result<Self> {
        if shapes.len() != scales.len() || shapes.is_empty() {
            return Err(Error::DimensionMismatch(
                "interference components".to_string(),
            ));
        }
        if scales.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::invalid("interference scales must be positive"));
        }
        if !(rho > 0.0) {
            return Err(Error::invalid("total interferer shape must be positive"));
        }
        let s_min = scales.iter().cloned().fold(f64::INFINITY, f64::min);
        let ratios = scales.iter().map(|s| 1.0 - s_min / s).collect();
        Ok(InterferenceRep {
            shapes,
            scales,
            rho,
            s_min,
            ratios,
        })
    }

    pub fn deltas(&self) -> MixtureSeries {
        mixture_coefficients(&self.shapes, &self.ratios)
    }

    /// Materialise the δ̃ coefficients through a 1−tail_tol mass coverage,
    /// for evaluation loops that revisit the mixture many times.
    pub fn cached(&self, tail_tol: f64, cap: usize) -> Result<CachedMixture> {
        let mut deltas = self.deltas();
        let mut v = Vec::with_capacity(1024);
        while deltas.emitted_mass() < 1.0 - tail_tol && v.len() < cap {
            v.push(deltas.next_delta());
        }
        if v.len() >= cap {
            return Err(Error::NonConvergence {
                op: "interference mixture",
                terms: cap as u64,
            });
        }
        let mass = deltas.emitted_mass();
        Ok(CachedMixture {
            rho: self.rho,
            s_min: self.s_min,
            deltas: v,
            mass,
        })
    }

    /// cdf of the interference sum at y:
    /// F_I(y) = Σ_n δ̃_n P(ρ+n, y/s_min), tail-bounded by the remaining
    /// coefficient mass times the current (decreasing) P factor.
    /// Production code reaches the cdf through `phi2_n`; this route stays
    /// as the independent cross-check the tests compare against.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn cdf(&self, y: f64, cfg: &SeriesConfig) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        let w = y / self.s_min;
        let mut deltas = self.deltas();
        let mut acc = 0.0f64;
        let cap = (cfg.max_total_terms as usize).min(4_000_000);
        for n in 0..cap {
            let d = deltas.next_delta();
            let p = gamma_p(self.rho + n as f64, w);
            acc += d * p;
            let tail = (1.0 - deltas.emitted_mass()).max(0.0) * p;
            if n > 2 && tail <= cfg.tail_target(acc.max(1e-12)) {
                return Ok(acc.clamp(0.0, 1.0));
            }
        }
        Err(Error::NonConvergence {
            op: "interference_cdf",
            terms: cap as u64,
        })
    }
}

/// Pre-expanded interference mixture for repeated cdf evaluation.
#[derive(Debug, Clone)]
pub(crate) struct CachedMixture {
    pub rho: f64,
    pub s_min: f64,
    deltas: Vec<f64>,
    mass: f64,
}

impl CachedMixture {
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// ln F_I(y); −∞ at y ≤ 0. P(ρ+n, w) decreases in n, which gives both
    /// the deep-tail fast path and the scan cutoffs.
    pub fn ln_cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let w = y / self.s_min;
        let last = self.rho + (self.deltas.len() - 1) as f64;
        if gamma_p(last, w) >= 1.0 - 1e-14 {
            // every retained component has saturated
            return self.mass.ln();
        }
        let mut acc = 0.0f64;
        let mut seen = 0.0f64;
        for (n, d) in self.deltas.iter().enumerate() {
            let p = gamma_p(self.rho + n as f64, w);
            if p < 1e-290 {
                break;
            }
            acc += d * p;
            seen += d;
            if (self.mass - seen).max(0.0) * p < 1e-15 * acc.max(1e-280) {
                break;
            }
        }
        acc.clamp(0.0, 1.0).ln()
    }
}

/// SoI shape-mixture weights: negative-binomial for κ-μ shadowed,
/// Poisson for the κ-μ (m → ∞) limit.
#[derive(Debug, Clone, Copy)]
pub(crate) enum SoiWeights {
    /// w_p = (1−q)^m (m)_p q^p / p!, q = 1 − θ/λ = μκ/(μκ+m)
    NegBinomial { m: f64, q: f64 },
    /// w_p = e^{−lam} lam^p / p!, lam = μκ
    Poisson { lam: f64 },
}

impl SoiWeights {
    pub fn shadowed(p: &FadingProfile) -> Self {
        SoiWeights::NegBinomial {
            m: p.m,
            q: 1.0 - p.theta / p.lambda,
        }
    }

    pub fn first(&self) -> f64 {
        match *self {
            SoiWeights::NegBinomial { m, q } => (1.0 - q).powf(m),
            SoiWeights::Poisson { lam } => (-lam).exp(),
        }
    }

    pub fn step(&self, w: f64, p: usize) -> f64 {
        let pf = p as f64;
        match *self {
            SoiWeights::NegBinomial { m, q } => w * (m + pf) * q / (pf + 1.0),
            SoiWeights::Poisson { lam } => w * lam / (pf + 1.0),
        }
    }
}

/// Conditional coverage table: cov_p = P(T·I < G) with G ~ Gamma(μ+p, θ),
/// for p = 0..p_count, all at once.
///
/// cov_p = Σ_n δ̃_n I_x(ρ+n, μ+p) with x = θ/(θ + T·s_min).
pub(crate) fn coverage_table(
    soi_theta: f64,
    soi_mu: f64,
    rep: &InterferenceRep,
    t: f64,
    p_count: usize,
    cfg: &SeriesConfig,
) -> Result<Vec<f64>> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("target SIR must be > 0, got {t}")));
    }
    let x = soi_theta / (soi_theta + t * rep.s_min);
    // 1−x from the original quantities to keep precision when x → 1
    let omx = t * rep.s_min / (soi_theta + t * rep.s_min);
    coverage_at_split(soi_mu, rep, x, omx, p_count, cfg)
}

/// The same sweep parameterised directly by the beta split point
/// (x, 1−x), expanding the coefficient cache on the fly.
pub(crate) fn coverage_at_split(
    soi_mu: f64,
    rep: &InterferenceRep,
    x: f64,
    omx: f64,
    p_count: usize,
    cfg: &SeriesConfig,
) -> Result<Vec<f64>> {
    let cache = rep.cached(1e-13, 4_000_000)?;
    coverage_at_split_cached(soi_mu, &cache, x, omx, p_count, cfg)
}

/// Coverage sweep against a pre-expanded mixture: the incomplete beta
/// values walk the recurrence I_x(a+1,b) = I_x(a,b) − x^a(1−x)^b/(a·B)
/// along the n axis, refreshed periodically against the direct evaluation.
pub(crate) fn coverage_at_split_cached(
    soi_mu: f64,
    cache: &CachedMixture,
    x: f64,
    omx: f64,
    p_count: usize,
    cfg: &SeriesConfig,
) -> Result<Vec<f64>> {
    assert!(p_count >= 1);
    if x >= 1.0 - 1e-15 {
        return Ok(vec![1.0; p_count]);
    }
    if x <= 1e-300 {
        return Ok(vec![0.0; p_count]);
    }
    let rho = cache.rho;
    let ln_x = x.ln();
    let ln_omx = omx.ln();

    let mut cov = vec![0.0f64; p_count];
    let mut ibeta = vec![0.0f64; p_count];
    let mut iterm = vec![0.0f64; p_count];
    let refresh = |n: usize, ibeta: &mut [f64], iterm: &mut [f64]| {
        let a = rho + n as f64;
        for p in 0..p_count {
            let b = soi_mu + p as f64;
            ibeta[p] = beta_reg(a, b, x);
            iterm[p] = (a * ln_x + b * ln_omx - ln_beta(a, b)).exp() / a;
        }
    };
    refresh(0, &mut ibeta, &mut iterm);

    let mut seen = 0.0f64;
    for (n, d) in cache.deltas().iter().enumerate() {
        if *d != 0.0 {
            for p in 0..p_count {
                cov[p] += d * ibeta[p];
            }
            seen += d;
        }
        // stop once the un-emitted mass cannot move any entry past
        // tolerance; I_x is largest at the largest SoI shape
        let tail = (cache.mass() - seen).max(0.0) * ibeta[p_count - 1];
        if n > 2 && tail <= 0.5 * cfg.tail_target(1.0_f64.min(cov[p_count - 1])) {
            break;
        }
        if (n + 1) % 1024 == 0 {
            refresh(n + 1, &mut ibeta, &mut iterm);
        } else {
            let a = rho + n as f64;
            for p in 0..p_count {
                let b = soi_mu + p as f64;
                ibeta[p] = (ibeta[p] - iterm[p]).max(0.0);
                iterm[p] *= x * (a + b) / (a + 1.0);
            }
        }
    }
    for c in &mut cov {
        *c = c.clamp(0.0, 1.0);
    }
    Ok(cov)
}
