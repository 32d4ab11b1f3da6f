//! Series-control configuration and summation helpers shared by every
//! hypergeometric evaluator.

use crate::error::{Error, Result};

/// Truncation limits and tolerances governing all hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Absolute tail tolerance.
    pub abs_tol: f64,
    /// Relative tail tolerance (against the accumulated partial sum).
    pub rel_tol: f64,
    /// Budget on the total number of terms a single evaluation may spend.
    pub max_total_terms: u64,
    /// Cap on any single summation index.
    pub max_index_per_dim: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_total_terms: 10_000_000,
            max_index_per_dim: 200,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::invalid("series tolerances must be > 0"));
        }
        if self.max_total_terms < 1 || self.max_index_per_dim < 1 {
            return Err(Error::invalid("series caps must be >= 1"));
        }
        Ok(())
    }

    /// Convergence target for a partial sum of magnitude `|sum|`.
    pub(crate) fn tail_target(&self, sum: f64) -> f64 {
        self.abs_tol + self.rel_tol * sum.abs()
    }
}

/// Compensated (Kahan) accumulator.
///
/// The series here routinely add 10^3..10^5 terms spanning many orders of
/// magnitude; plain summation costs several digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Kahan::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Incremental log-sum-exp accumulator for strictly positive terms given in
/// log magnitude. Keeps a running maximum so that `exp` never overflows.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum::default()
    }

    #[inline]
    pub fn add_ln(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term <= self.max {
            self.scaled += (ln_term - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - ln_term).exp() + 1.0;
            self.max = ln_term;
        }
    }

    /// Natural log of the accumulated sum.
    pub fn ln_value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }

    /// Ratio of a candidate term to the current sum, in linear scale.
    pub fn rel_of(&self, ln_term: f64) -> f64 {
        (ln_term - self.ln_value()).exp()
    }
}
