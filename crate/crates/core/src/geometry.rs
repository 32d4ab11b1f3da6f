//! Two-tier hexagonal macrocell layout and per-link path-loss budgets.
//!
//! R is the centre-to-edge distance, so the inter-site distance is 2R.
//! The 18 interferers of the two-tier layout sit at 2R (6 cells),
//! 2√3·R (6 corner cells) and 4R (6 edge-aligned cells).

use crate::error::{Error, Result};
use crate::fading::FadingProfile;
use crate::sir::SirProblem;

#[derive(Debug, Clone)]
pub struct NetworkLayout {
    /// Centre-to-edge cell radius, metres.
    pub r_cell: f64,
    pub tiers: u32,
    /// Base-station positions, metres; index 0 is the serving cell at the origin.
    pub bs_positions: Vec<[f64; 2]>,
    /// Axial lattice coordinates of each cell, used for the 3-colouring.
    lattice: Vec<(i32, i32)>,
}

/// One user's link: serving distance, azimuth, path-loss exponent and the
/// Euclidean distances to every interfering base station.
#[derive(Debug, Clone)]
pub struct UserLink {
    pub r: f64,
    pub azimuth: f64,
    pub alpha: f64,
    pub d: Vec<f64>,
}

/// The 19-cell, two-tier hexagonal layout of the serving cell and its
/// N = 18 interferers.
pub fn build_two_tier_hex(r_cell: f64) -> Result<NetworkLayout> {
    if !(r_cell > 0.0) || !r_cell.is_finite() {
        return Err(Error::invalid(format!("cell radius must be > 0, got {r_cell}")));
    }
    // axial basis: u = 2R(1,0), v = 2R(1/2, √3/2)
    let coords: [(i32, i32); 19] = [
        (0, 0),
        // first tier, inter-site distance 2R
        (1, 0),
        (0, 1),
        (-1, 1),
        (-1, 0),
        (0, -1),
        (1, -1),
        // second tier corners, 2√3 R
        (1, 1),
        (-1, 2),
        (-2, 1),
        (-1, -1),
        (1, -2),
        (2, -1),
        // second tier edge-aligned, 4R
        (2, 0),
        (0, 2),
        (-2, 2),
        (-2, 0),
        (0, -2),
        (2, -2),
    ];
    let s = 2.0 * r_cell;
    let bs_positions = coords
        .iter()
        .map(|&(i, j)| {
            [
                s * (i as f64 + 0.5 * j as f64),
                s * (3.0f64.sqrt() / 2.0 * j as f64),
            ]
        })
        .collect();
    Ok(NetworkLayout {
        r_cell,
        tiers: 2,
        bs_positions,
        lattice: coords.to_vec(),
    })
}

impl NetworkLayout {
    /// Number of interferers (cells excluding the serving one).
    pub fn n_interferers(&self) -> usize {
        self.bs_positions.len() - 1
    }

    /// Reuse-3 colour of each cell: same-colour cells form the sublattice at
    /// multiples of 2√3·R (the corner cells share the serving cell's colour).
    pub fn color(&self, cell: usize) -> u8 {
        let (i, j) = self.lattice[cell];
        (i - j).rem_euclid(3) as u8
    }

    /// Distance of each interfering BS from the serving site.
    pub fn bs_distance(&self, cell: usize) -> f64 {
        let p = self.bs_positions[cell];
        (p[0] * p[0] + p[1] * p[1]).sqrt()
    }

    /// Interferer indices (1-based cells) grouped by tier ring:
    /// group 0 = 2R, group 1 = 2√3R, group 2 = 4R.
    pub fn tier_group(&self, cell: usize) -> usize {
        let d = self.bs_distance(cell) / self.r_cell;
        if d < 2.5 {
            0
        } else if d < 3.9 {
            1
        } else {
            2
        }
    }

    /// CSV dump (bs_index, x_m, y_m) for plotting.
    pub fn layout_csv(&self) -> String {
        let mut out = String::from("bs_index,x_m,y_m\n");
        for (i, p) in self.bs_positions.iter().enumerate() {
            out.push_str(&format!("{},{:.6},{:.6}\n", i, p[0], p[1]));
        }
        out
    }
}

/// Place a user at polar position (r, azimuth) in the serving cell and
/// compute exact distances to every interfering BS.
pub fn place_user(layout: &NetworkLayout, r: f64, azimuth: f64, alpha: f64) -> Result<UserLink> {
    if !(r > 0.0 && r <= layout.r_cell) {
        return Err(Error::invalid(format!(
            "serving distance r = {r} outside (0, R = {}]",
            layout.r_cell
        )));
    }
    if !(alpha >= 2.0) {
        return Err(Error::invalid(format!(
            "path-loss exponent alpha = {alpha} must be >= 2"
        )));
    }
    let user = [r * azimuth.cos(), r * azimuth.sin()];
    let d = layout.bs_positions[1..]
        .iter()
        .map(|p| {
            let dx = p[0] - user[0];
            let dy = p[1] - user[1];
            (dx * dx + dy * dy).sqrt()
        })
        .collect();
    Ok(UserLink {
        r,
        azimuth,
        alpha,
        d,
    })
}

/// Apply the r^{−α} path-loss model: the SoI mean scales by r^{−α} and
/// interferer i by d_i^{−α}; θ and λ re-derive from the scaled means.
pub fn link_budget(
    link: &UserLink,
    soi: &FadingProfile,
    interferers: &[FadingProfile],
    target_sir: f64,
) -> Result<SirProblem> {
    if interferers.len() != link.d.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} interferer profiles vs {} link distances",
            interferers.len(),
            link.d.len()
        )));
    }
    let soi_scaled = soi.scaled_to(soi.mean_power * link.r.powf(-link.alpha))?;
    let ints = interferers
        .iter()
        .zip(&link.d)
        .map(|(p, d)| p.scaled_to(p.mean_power * d.powf(-link.alpha)))
        .collect::<Result<Vec<_>>>()?;
    SirProblem::new(soi_scaled, ints, target_sir)
}
