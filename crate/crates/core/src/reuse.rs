//! FFR and SFR frequency-reuse evaluation: analytic rates built on the
//! outage/rate machinery, plus a load-based PRB-level simulator.
//!
//! Band layout follows the three-cell colouring: a cell's edge band is
//! reused by its 6 same-colour neighbours (the corner cells of the second
//! tier); the other 12 cells use that band at centre power. FFR serves
//! edge users on a reuse-1/3 band (6 co-band interferers) at power P; SFR
//! boosts edge-band power by β and keeps reuse 1.

use crate::error::{Error, Result};
use crate::fading::FadingProfile;
use crate::geometry::{link_budget, place_user, NetworkLayout, UserLink};
use crate::montecarlo::{batch_rng, McConfig, McEstimate};
use crate::series::SeriesConfig;
use crate::sir::{outage_series, rate_shadowed, SirProblem, TermChoice};
use crate::special::normal_two_sided_z;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Ffr,
    Sfr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReuseConfig {
    pub scheme: Scheme,
    /// Classification SIR threshold, linear.
    pub s_t: f64,
    /// SFR edge power boost factor (≥ 1).
    pub beta: f64,
    pub prbs: u32,
    pub users_per_cell: u32,
    /// A user with at least this many PRBs above S_t is a centre user.
    pub classification_prb_count: u32,
}

impl ReuseConfig {
    pub fn new(scheme: Scheme, s_t: f64, beta: f64) -> Result<Self> {
        let cfg = ReuseConfig {
            scheme,
            s_t,
            beta,
            prbs: 50,
            users_per_cell: 25,
            classification_prb_count: 25,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s_t > 0.0) {
            return Err(Error::invalid("S_t must be positive (linear)"));
        }
        if !(self.beta >= 1.0) {
            return Err(Error::invalid(format!("beta must be >= 1, got {}", self.beta)));
        }
        if self.prbs < self.users_per_cell || self.users_per_cell == 0 {
            return Err(Error::invalid(
                "prbs must cover users_per_cell (uniform sharing)".to_string(),
            ));
        }
        if self.classification_prb_count > self.prbs {
            return Err(Error::invalid("classification_prb_count exceeds prbs"));
        }
        Ok(())
    }
}

/// Centre/edge classification probabilities at threshold S_t on the reuse-1
/// SIR: (P_centre, P_edge) = (1 − O_p(S_t), O_p(S_t)).
pub fn classify(
    link: &UserLink,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    s_t: f64,
    cfg: &SeriesConfig,
) -> Result<(f64, f64)> {
    let problem = link_budget(link, soi, interferers, s_t)?;
    let outage = outage_series(&problem, TermChoice::Fixed(60), cfg)?.value;
    Ok((1.0 - outage, outage))
}

fn scale_interferers(
    interferers: &[FadingProfile],
    factor: impl Fn(usize) -> f64,
) -> Result<Vec<FadingProfile>> {
    interferers
        .iter()
        .enumerate()
        .map(|(i, p)| p.scaled_to(p.mean_power * factor(i)))
        .collect()
}

/// Interference profile selections per band. Cell indices here are
/// interferer indices (0-based over cells 1..=18).
struct Bands {
    /// same-colour cells as the serving cell (edge-band co-channels)
    own_color: Vec<usize>,
    /// the other two colours
    other_colors: [Vec<usize>; 2],
}

fn bands(layout: &NetworkLayout) -> Bands {
    let mut own_color = Vec::new();
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for cell in 1..layout.bs_positions.len() {
        match layout.color(cell) {
            0 => own_color.push(cell - 1),
            1 => c1.push(cell - 1),
            _ => c2.push(cell - 1),
        }
    }
    Bands {
        own_color,
        other_colors: [c1, c2],
    }
}

struct RateTerms {
    centre: f64,
    edge: f64,
    p_centre: f64,
}

fn ffr_terms_at(
    layout: &NetworkLayout,
    link: &UserLink,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    s_t: f64,
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<RateTerms> {
    let (p_centre, _) = classify(link, soi, interferers, s_t, cfg)?;
    let all = link_budget(link, soi, interferers, 1.0)?;
    let centre = rate_shadowed(&all, terms, cfg)?;
    // edge band: reuse 1/3 keeps only the same-colour cells (at power P)
    let b = bands(layout);
    let edge_ints: Vec<FadingProfile> = b
        .own_color
        .iter()
        .map(|&i| all.interferers[i])
        .collect();
    let edge_prob = SirProblem::new(all.soi, edge_ints, 1.0)?;
    let edge = rate_shadowed(&edge_prob, terms, cfg)?;
    Ok(RateTerms {
        centre,
        edge,
        p_centre,
    })
}

fn sfr_terms_at(
    layout: &NetworkLayout,
    link: &UserLink,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    s_t: f64,
    beta: f64,
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<RateTerms> {
    let (p_centre, _) = classify(link, soi, interferers, s_t, cfg)?;
    let b = bands(layout);
    // centre user: its band is the edge band of one other colour — those 6
    // cells arrive boosted ×β, the remaining 12 at ×1; average the two
    // centre-band choices (PRBs are shared uniformly across both).
    let mut centre = 0.0;
    for color in &b.other_colors {
        let scaled = scale_interferers(interferers, |i| {
            if color.contains(&i) {
                beta
            } else {
                1.0
            }
        })?;
        let prob = link_budget(link, soi, &scaled, 1.0)?;
        centre += 0.5 * rate_shadowed(&prob, terms, cfg)?;
    }
    // edge user: SoI boosted ×β; co-band (same-colour) cells boosted ×β
    let soi_boosted = soi.scaled_to(soi.mean_power * beta)?;
    let scaled = scale_interferers(interferers, |i| {
        if b.own_color.contains(&i) {
            beta
        } else {
            1.0
        }
    })?;
    let prob = link_budget(link, &soi_boosted, &scaled, 1.0)?;
    let edge = rate_shadowed(&prob, terms, cfg)?;
    Ok(RateTerms {
        centre,
        edge,
        p_centre,
    })
}

/// FFR mean user rate: ∫ [R_ce·P(SIR>S_t) + (1/3)·R_ed·P(SIR<S_t)]·(2r/R²) dr.
#[allow(clippy::too_many_arguments)]
pub fn ffr_rate(
    layout: &NetworkLayout,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    s_t: f64,
    azimuth: f64,
    alpha: f64,
    radial_grid: &[f64],
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<f64> {
    radial_integral(layout, radial_grid, |r| {
        let link = place_user(layout, r, azimuth, alpha)?;
        let t = ffr_terms_at(layout, &link, soi, interferers, s_t, terms, cfg)?;
        Ok(t.centre * t.p_centre + (1.0 / 3.0) * t.edge * (1.0 - t.p_centre))
    })
}

/// SFR mean user rate: ∫ [R_ce·P(SIR>S_t) + R_ed·P(SIR<S_t)]·(2r/R²) dr with
/// the β power split of the SFR band plan.
#[allow(clippy::too_many_arguments)]
pub fn sfr_rate(
    layout: &NetworkLayout,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    s_t: f64,
    beta: f64,
    azimuth: f64,
    alpha: f64,
    radial_grid: &[f64],
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<f64> {
    radial_integral(layout, radial_grid, |r| {
        let link = place_user(layout, r, azimuth, alpha)?;
        let t = sfr_terms_at(layout, &link, soi, interferers, s_t, beta, terms, cfg)?;
        Ok(t.centre * t.p_centre + t.edge * (1.0 - t.p_centre))
    })
}

fn radial_integral<F>(layout: &NetworkLayout, grid: &[f64], f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let r_cell = layout.r_cell;
    if grid.len() < 2
        || grid.windows(2).any(|w| w[1] <= w[0])
        || grid[0] < 0.0
        || (grid[grid.len() - 1] - r_cell).abs() > 1e-9 * r_cell
    {
        return Err(Error::invalid("radial grid must increase from ~0 to R"));
    }
    const GL_X: [f64; 4] = [
        -0.8611363115940526,
        -0.3399810435848563,
        0.3399810435848563,
        0.8611363115940526,
    ];
    const GL_W: [f64; 4] = [
        0.3478548451374538,
        0.6521451548625461,
        0.6521451548625461,
        0.3478548451374538,
    ];
    let segs: Vec<(f64, f64)> = grid.windows(2).map(|w| (w[0], w[1])).collect();
    let parts: Vec<Result<f64>> = segs
        .par_iter()
        .map(|&(r0, r1)| {
            let half = 0.5 * (r1 - r0);
            let mid = 0.5 * (r0 + r1);
            let mut acc = 0.0;
            for (xi, wi) in GL_X.iter().zip(&GL_W) {
                let r = mid + half * xi;
                acc += wi * f(r)? * 2.0 * r / (r_cell * r_cell);
            }
            Ok(acc * half)
        })
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok(total)
}

/// Load-based reuse simulation: users dropped area-uniformly, per-PRB
/// fading, the 25-of-50 PRB classification rule, band/power assignment per
/// scheme, per-user mean ln(1+SIR) over assigned PRBs (FFR edge users carry
/// the 1/3 bandwidth factor of reuse-1/3). One trial is one user.
pub fn simulate_reuse(
    config: &ReuseConfig,
    layout: &NetworkLayout,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    alpha: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    config.validate()?;
    mc.validate()?;
    if interferers.len() != layout.n_interferers() {
        return Err(Error::DimensionMismatch(format!(
            "{} interferer profiles vs {} cells",
            interferers.len(),
            layout.n_interferers()
        )));
    }
    let b = bands(layout);
    let means: Vec<f64> = (0..mc.batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = batch_rng(mc.seed ^ 0x5f5f, batch);
            let mut acc = 0.0;
            for _ in 0..mc.batch_size {
                acc += simulate_one_user(config, layout, soi, interferers, alpha, &b, &mut rng);
            }
            acc / mc.batch_size as f64
        })
        .collect();
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let var = means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / (n - 1.0);
    let half = normal_two_sided_z(mc.confidence) * (var / n).sqrt();
    Ok(McEstimate {
        mean,
        ci_lo: mean - half,
        ci_hi: mean + half,
        batches: mc.batches,
    })
}

fn simulate_one_user(
    config: &ReuseConfig,
    layout: &NetworkLayout,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    alpha: f64,
    b: &Bands,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> f64 {
    use rand::Rng;
    let r_cell = layout.r_cell;
    // area-uniform drop: r = R√u
    let r = (r_cell * rng.random::<f64>().sqrt()).max(1e-6 * r_cell);
    let az = rng.random::<f64>() * std::f64::consts::TAU;
    let link = place_user(layout, r, az, alpha).expect("in-cell user");
    let soi_mean = soi.mean_power * r.powf(-alpha);
    let int_means: Vec<f64> = interferers
        .iter()
        .zip(&link.d)
        .map(|(p, d)| p.mean_power * d.powf(-alpha))
        .collect();
    let soi_1 = soi.scaled_to(soi_mean).expect("soi profile");
    let soi_beta = soi
        .scaled_to(soi_mean * config.beta)
        .expect("soi profile");
    let ints_1: Vec<FadingProfile> = interferers
        .iter()
        .zip(&int_means)
        .map(|(p, m)| p.scaled_to(*m).expect("interferer profile"))
        .collect();
    let ints_beta: Vec<FadingProfile> = interferers
        .iter()
        .zip(&int_means)
        .map(|(p, m)| p.scaled_to(m * config.beta).expect("interferer profile"))
        .collect();

    // classification over `prbs` reuse-1 PRB draws
    let mut above = 0u32;
    for _ in 0..config.prbs {
        let g = soi_1.sample_power(rng);
        let mut i_total = 0.0;
        for p in &ints_1 {
            i_total += p.sample_power(rng);
        }
        if g / i_total >= config.s_t {
            above += 1;
        }
    }
    let centre = above >= config.classification_prb_count;

    // per-user PRB share under uniform sharing
    let draws = (config.prbs / config.users_per_cell).max(1);
    let mut rate_acc = 0.0;
    for k in 0..draws {
        let sir = match (config.scheme, centre) {
            (Scheme::Ffr, true) => {
                let g = soi_1.sample_power(rng);
                let mut i_total = 0.0;
                for p in &ints_1 {
                    i_total += p.sample_power(rng);
                }
                g / i_total
            }
            (Scheme::Ffr, false) => {
                let g = soi_1.sample_power(rng);
                let mut i_total = 0.0;
                for &i in &b.own_color {
                    i_total += ints_1[i].sample_power(rng);
                }
                g / i_total
            }
            (Scheme::Sfr, true) => {
                // alternate between the two centre-band colours
                let color = &b.other_colors[(k % 2) as usize];
                let g = soi_1.sample_power(rng);
                let mut i_total = 0.0;
                for i in 0..ints_1.len() {
                    i_total += if color.contains(&i) {
                        ints_beta[i].sample_power(rng)
                    } else {
                        ints_1[i].sample_power(rng)
                    };
                }
                g / i_total
            }
            (Scheme::Sfr, false) => {
                let g = soi_beta.sample_power(rng);
                let mut i_total = 0.0;
                for i in 0..ints_1.len() {
                    i_total += if b.own_color.contains(&i) {
                        ints_beta[i].sample_power(rng)
                    } else {
                        ints_1[i].sample_power(rng)
                    };
                }
                g / i_total
            }
        };
        rate_acc += sir.ln_1p();
    }
    let mut rate = rate_acc / draws as f64;
    if config.scheme == Scheme::Ffr && !centre {
        rate /= 3.0; // reuse-1/3 bandwidth share
    }
    rate
}
