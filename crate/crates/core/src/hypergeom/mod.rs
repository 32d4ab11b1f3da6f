//! Scalar and multivariate hypergeometric functions.
//!
//! The multivariate series (Lauricella F_D, confluent Φ₂, the Humbert-type
//! E_D) are summed shell-by-shell in total degree: the degree-k shell
//! Σ_{|i|=k} ∏(b_j)_{i_j} x_j^{i_j}/i_j! equals the k-th Taylor coefficient
//! of ∏(1−x_j v)^{−b_j}, which the evaluators obtain from the Newton-identity
//! recurrence instead of enumerating multi-indices. Each evaluator has an
//! independent oracle (quadrature of an integral representation, or exact
//! multi-index enumeration in the tests).

mod ed;
mod gauss;
mod kummer;
mod lauricella;
mod phi2;
mod pochhammer;
mod shells;
mod threef2;

pub use ed::{ed_function, ed_integral_oracle};
pub use gauss::{gauss_2f1, gauss_2f1_cf_1a};
pub use kummer::{kummer_1f1, ln_kummer_1f1};
pub use lauricella::{fd_integral_oracle, lauricella_fd};
pub(crate) use lauricella::fd_integral_ln;
pub use phi2::{phi2_n, phi2_parts};
pub use pochhammer::{ln_pochhammer_signed, pochhammer};
pub use threef2::clausen_3f2;

pub(crate) use phi2::{mixture_coefficients, MixtureSeries};
pub(crate) use shells::ShellCoeffs;

use crate::error::{Error, Result};

/// Arguments of the Lauricella function of the fourth kind
/// F_D^(N)[a, b_1..b_N; c; x_1..x_N].
#[derive(Debug, Clone, PartialEq)]
pub struct FdArgs {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: f64,
    pub x: Vec<f64>,
}

impl FdArgs {
    pub fn new(a: f64, b: Vec<f64>, c: f64, x: Vec<f64>) -> Result<Self> {
        if b.len() != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "FdArgs: {} b parameters vs {} arguments",
                b.len(),
                x.len()
            )));
        }
        if is_nonpositive_integer(c) {
            return Err(Error::invalid(format!(
                "FdArgs: c = {c} is a nonpositive integer"
            )));
        }
        Ok(FdArgs { a, b, c, x })
    }
}

/// Arguments of ⁽¹⁾E_D^(N)[a, b_1..b_N; c, c'; x_1..x_N] — the first slot
/// pairs with denominator c, the remaining N−1 with c'.
#[derive(Debug, Clone, PartialEq)]
pub struct EdArgs {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: f64,
    pub c_prime: f64,
    pub x: Vec<f64>,
}

impl EdArgs {
    pub fn new(a: f64, b: Vec<f64>, c: f64, c_prime: f64, x: Vec<f64>) -> Result<Self> {
        if b.len() != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "EdArgs: {} b parameters vs {} arguments",
                b.len(),
                x.len()
            )));
        }
        if is_nonpositive_integer(c) || is_nonpositive_integer(c_prime) {
            return Err(Error::invalid(format!(
                "EdArgs: denominator parameter is a nonpositive integer (c={c}, c'={c_prime})"
            )));
        }
        Ok(EdArgs {
            a,
            b,
            c,
            c_prime,
            x,
        })
    }

    /// The direct series converges iff |x₁| < r and max_{j≥2}|x_j| < 1−r for
    /// some r, i.e. |x₁| + max_{j≥2}|x_j| < 1.
    pub fn series_in_domain(&self) -> bool {
        if self.x.is_empty() {
            return true;
        }
        let rest = self.x[1..]
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        self.x[0].abs() + rest < 1.0
    }
}

pub(crate) fn is_nonpositive_integer(v: f64) -> bool {
    v <= 1e-9 && (v - v.round()).abs() < 1e-9
}

/// For a nonpositive integer `a`, the termination degree n with a = −n.
pub(crate) fn termination_degree(a: f64) -> Option<usize> {
    if is_nonpositive_integer(a) {
        Some((-a.round()) as usize)
    } else {
        None
    }
}
