//! Outage probability and ergodic rate for interference-limited cellular
//! links where the desired signal and every interferer experience κ-μ
//! shadowed fading.
//!
//! The crate is organised around the analysis pipeline:
//!
//! * [`hypergeom`] — scalar and multivariate hypergeometric functions
//!   (₁F₁, ₂F₁, ₃F₂, Lauricella F_D, confluent Φ₂, the Humbert-type E_D)
//!   together with independent quadrature/enumeration oracles.
//! * [`fading`] — κ-μ shadowed, κ-μ, η-μ and Hoyt channel-power models:
//!   pdf/cdf evaluation and an exact composition sampler.
//! * [`geometry`] — the two-tier hexagonal macrocell layout and per-link
//!   path-loss budgets.
//! * [`sir`] — outage probability (series and E_D cross-forms, special
//!   cases, truncation bounds) and ergodic rate, plus typical-user
//!   averaging.
//! * [`montecarlo`] — the independent simulation oracle with batch-means
//!   confidence intervals.
//! * [`reuse`] — FFR/SFR frequency-reuse evaluation and a load-based
//!   reuse simulator.
//!
//! All analytic evaluators are pure over immutable inputs and safe to call
//! concurrently; simulation takes explicit seeds and is deterministic for a
//! fixed `(seed, config)` regardless of thread count.

pub mod error;
pub mod fading;
pub mod geometry;
pub mod hypergeom;
pub mod montecarlo;
pub mod quad;
pub mod reuse;
pub mod series;
pub mod sir;
pub mod special;

pub use error::{Error, Result};
pub use fading::{EtaMuParams, FadingProfile};
pub use geometry::{NetworkLayout, UserLink};
pub use montecarlo::{McConfig, McEstimate};
pub use reuse::ReuseConfig;
pub use series::SeriesConfig;
pub use sir::{OutageResult, SirProblem};
