//! Typical-user averaging: area-uniform user position gives the radial
//! density f_R(r) = 2r/R² on (0, R].

use crate::error::{Error, Result};
use crate::fading::FadingProfile;
use crate::geometry::{link_budget, place_user, NetworkLayout};
use crate::series::SeriesConfig;
use crate::sir::outage::TermChoice;
use crate::sir::{outage_series, rate_shadowed};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Outage,
    Rate,
}

/// ∫₀^R metric(r)·(2r/R²) dr by composite 4-point Gauss–Legendre over the
/// caller's radial grid; azimuth fixed per configuration.
#[allow(clippy::too_many_arguments)]
pub fn typical_user(
    metric: Metric,
    layout: &NetworkLayout,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    azimuth: f64,
    alpha: f64,
    target_sir: f64,
    radial_grid: &[f64],
    terms: TermChoice,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let r_cell = layout.r_cell;
    if radial_grid.len() < 2
        || radial_grid.windows(2).any(|w| w[1] <= w[0])
        || radial_grid[0] < 0.0
        || (radial_grid[radial_grid.len() - 1] - r_cell).abs() > 1e-9 * r_cell
    {
        return Err(Error::invalid(
            "radial_grid must increase from ~0 to R (covering (0, R])".to_string(),
        ));
    }
    // 4-point Gauss–Legendre nodes/weights on [-1, 1]
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

    let eval_at = |r: f64| -> Result<f64> {
        let link = place_user(layout, r, azimuth, alpha)?;
        let problem = link_budget(&link, soi, interferers, target_sir)?;
        match metric {
            Metric::Outage => Ok(outage_series(&problem, terms, cfg)?.value),
            Metric::Rate => rate_shadowed(&problem, terms, cfg),
        }
    };

    let segments: Vec<(f64, f64)> = radial_grid
        .windows(2)
        .map(|w| (w[0], w[1]))
        .collect();
    let parts: Vec<Result<f64>> = segments
        .par_iter()
        .map(|&(r0, r1)| {
            let half = 0.5 * (r1 - r0);
            let mid = 0.5 * (r0 + r1);
            let mut acc = 0.0;
            for (xi, wi) in GL_X.iter().zip(&GL_W) {
                let r = mid + half * xi;
                acc += wi * eval_at(r)? * 2.0 * r / (r_cell * r_cell);
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
