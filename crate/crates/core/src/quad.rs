//! Quadrature engines used by the oracle paths and the radial/rate
//! integrals: adaptive Gauss–Kronrod (G7/K15) on finite intervals and
//! tanh-sinh on (0,1) for endpoint-singular Euler-type integrands.
//!
//! Semi-infinite integrals are mapped onto (0,1) by t = u/(1−u).

use crate::error::{Error, Result};
use crate::series::{Kahan, LogSum};

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = Kahan::new();
    let mut gauss = Kahan::new();
    kronrod.add(WGK[7] * fc);
    gauss.add(WG[3] * fc);
    for j in 0..7 {
        let dx = h * XGK[j];
        let fsum = f(c - dx) + f(c + dx);
        kronrod.add(WGK[j] * fsum);
        if j % 2 == 1 {
            gauss.add(WG[j / 2] * fsum);
        }
    }
    let value = kronrod.value() * h;
    let err = ((kronrod.value() - gauss.value()) * h).abs();
    (value, err)
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Returns (value, error estimate). Bisects the interval with the largest
/// error estimate until the global estimate meets `abs_tol + rel_tol·|I|`.
pub fn gk_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    const MAX_INTERVALS: usize = 4096;
    let (v, e) = gk15(&f, a, b);
    let mut segs: Vec<(f64, f64, f64, f64)> = vec![(a, b, v, e)];
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol + rel_tol * total.abs() {
            return Ok((total, err));
        }
        if segs.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure {
                op: "gk_adaptive",
                detail: format!("error {err:.3e} after {MAX_INTERVALS} intervals"),
            });
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (sa, sb, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (sa + sb);
        let (v1, e1) = gk15(&f, sa, mid);
        let (v2, e2) = gk15(&f, mid, sb);
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
    }
}

/// Adaptive integration over [a, ∞) via t = a + u/(1−u).
pub fn gk_adaptive_semi_inf<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    gk_adaptive(
        move |u| {
            let om = 1.0 - u;
            f(a + u / om) / (om * om)
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Nodes of the tanh-sinh rule at step h: x = 1/(1+e^{∓2s}), s = (π/2)sinh(kh).
/// The closure receives (x, 1−x) so endpoint-singular factors keep full
/// precision on both sides.
struct TsNode {
    x: f64,
    one_minus_x: f64,
    ln_w: f64,
}

fn ts_node(t: f64) -> Option<TsNode> {
    let s = std::f64::consts::FRAC_PI_2 * t.sinh();
    // Past |s| ~ 350 the weight underflows every relevant integrand.
    if s.abs() > 350.0 {
        return None;
    }
    let e2s = (2.0 * s).exp();
    let x = e2s / (1.0 + e2s);
    let one_minus_x = 1.0 / (1.0 + e2s);
    // w = (π/4) cosh t / cosh²(s)  (already includes the dx/dt of the map to (0,1))
    let ln_w = (std::f64::consts::FRAC_PI_4 * t.cosh()).ln() - 2.0 * ln_cosh(s);
    Some(TsNode { x, one_minus_x, ln_w })
}

fn ln_cosh(s: f64) -> f64 {
    let a = s.abs();
    a + (1.0 + (-2.0 * a).exp()).ln() - std::f64::consts::LN_2
}

/// tanh-sinh quadrature of exp(ln_f) over (0,1), in log space.
///
/// `ln_f(x, 1−x)` must return the natural log of a **nonnegative**
/// integrand (−∞ where it vanishes). Returns ln ∫₀¹ f.
pub fn tanh_sinh_ln<F: Fn(f64, f64) -> f64>(ln_f: F, tol: f64) -> Result<f64> {
    let eval = |t: f64, acc: &mut LogSum| {
        if let Some(n) = ts_node(t) {
            let lf = ln_f(n.x, n.one_minus_x);
            if lf.is_finite() {
                acc.add_ln(lf + n.ln_w);
            }
        }
    };
    // Level 0 at h=1.
    let mut h = 1.0f64;
    let mut acc = LogSum::new();
    eval(0.0, &mut acc);
    let mut k = 1;
    loop {
        let before = acc.ln_value();
        eval(h * k as f64, &mut acc);
        eval(-h * k as f64, &mut acc);
        let grew = acc.ln_value() - before;
        if (k as f64) * h > 7.0 && (grew < 1e-16 || !grew.is_finite()) {
            break;
        }
        k += 1;
        if k > 4000 {
            break;
        }
    }
    let mut prev = acc.ln_value() + h.ln();
    // Halve h, adding the new midpoints, until two successive levels agree.
    for _level in 1..=12 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = h * (2 * k - 1) as f64;
            let before = acc.ln_value();
            eval(t, &mut acc);
            eval(-t, &mut acc);
            let grew = acc.ln_value() - before;
            if t > 7.0 && (grew < 1e-16 || !grew.is_finite()) {
                break;
            }
            k += 1;
            if k > 2_000_000 {
                break;
            }
        }
        let cur = acc.ln_value() + h.ln();
        if (cur - prev).abs() < tol.max(1e-15) {
            return Ok(cur);
        }
        prev = cur;
    }
    // Tail integrands here are smooth; failing to settle means the caller's
    // tolerance is unrealistic for f64.
    Err(Error::QuadratureFailure {
        op: "tanh_sinh_ln",
        detail: format!("levels exhausted, last delta vs tol {tol:.1e}"),
    })
}

/// tanh-sinh quadrature over (0,1) for sign-changing integrands (linear scale).
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    let eval = |t: f64, acc: &mut Kahan| -> f64 {
        if let Some(n) = ts_node(t) {
            let v = f(n.x, n.one_minus_x);
            if v.is_finite() {
                let w = n.ln_w.exp();
                acc.add(v * w);
                return (v * w).abs();
            }
        }
        0.0
    };
    let mut h = 1.0f64;
    let mut acc = Kahan::new();
    eval(0.0, &mut acc);
    for k in 1..=60 {
        let a = eval(h * k as f64, &mut acc);
        let b = eval(-h * k as f64, &mut acc);
        if (k as f64) * h > 7.0 && a + b < 1e-300 {
            break;
        }
    }
    let mut prev = acc.value() * h;
    for _level in 1..=12 {
        h *= 0.5;
        let mut k = 1usize;
        loop {
            let t = h * (2 * k - 1) as f64;
            let a = eval(t, &mut acc);
            let b = eval(-t, &mut acc);
            if t > 7.0 && a + b < 1e-300 {
                break;
            }
            k += 1;
            if k > 2_000_000 {
                break;
            }
        }
        let cur = acc.value() * h;
        if (cur - prev).abs() < tol * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure {
        op: "tanh_sinh",
        detail: format!("levels exhausted at tol {tol:.1e}"),
    })
}

/// ln ∫₀^∞ exp(ln_f(t)) dt via the map t = u/(1−u) and tanh-sinh on (0,1).
pub fn tanh_sinh_ln_semi_inf<F: Fn(f64) -> f64>(ln_f: F, tol: f64) -> Result<f64> {
    tanh_sinh_ln(
        move |u, om| {
            let t = u / om;
            ln_f(t) - 2.0 * om.ln()
        },
        tol,
    )
}
