//! Outage probability and ergodic rate for one SIR problem: a κ-μ shadowed
//! SoI against N κ-μ shadowed interferers, interference-limited.

mod bounds;
mod mixture;
mod outage;
mod rate;
mod special;
mod typical;

pub use bounds::{auto_terms, truncation_bound};
pub use outage::{interference_cdf, outage_ed, outage_series, TermChoice};
pub use rate::{rate_by_outage_quadrature, rate_kappa_mu, rate_shadowed};
pub use special::{outage_eta_mu, outage_hoyt, outage_soi_kappa_mu, KappaMuParams};
pub use typical::{typical_user, Metric};

pub(crate) use mixture::{coverage_at_split_cached, coverage_table, InterferenceRep, SoiWeights};

use crate::error::{Error, Result};
use crate::fading::FadingProfile;

/// One SoI/interference configuration at a linear SIR threshold T.
/// Profiles carry post-path-loss mean powers (see `geometry::link_budget`).
#[derive(Debug, Clone)]
pub struct SirProblem {
    pub soi: FadingProfile,
    pub interferers: Vec<FadingProfile>,
    pub target_sir: f64,
}

impl SirProblem {
    pub fn new(
        soi: FadingProfile,
        interferers: Vec<FadingProfile>,
        target_sir: f64,
    ) -> Result<Self> {
        if interferers.is_empty() {
            return Err(Error::invalid("SirProblem requires at least one interferer"));
        }
        if !(target_sir > 0.0) || !target_sir.is_finite() {
            return Err(Error::invalid(format!(
                "target SIR must be positive and finite, got {target_sir}"
            )));
        }
        Ok(SirProblem {
            soi,
            interferers,
            target_sir,
        })
    }

    pub fn with_target(&self, target_sir: f64) -> Result<Self> {
        Self::new(self.soi, self.interferers.clone(), target_sir)
    }

    /// Σ μ_i over the interferers.
    pub fn rho(&self) -> f64 {
        self.interferers.iter().map(|p| p.mu).sum()
    }
}

/// Which analytic route produced an outage value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutageMethod {
    EdForm,
    FdSeries,
    EtaMu,
    Hoyt,
    KappaMuSoi,
}

/// Outage probability together with the truncation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct OutageResult {
    /// P(SIR < T), in [0, 1].
    pub value: f64,
    /// Number of outer series terms spent (the paper's P), where applicable.
    pub terms_used: u32,
    /// Upper bound on the truncated outer tail.
    pub error_bound: f64,
    pub method: OutageMethod,
}
