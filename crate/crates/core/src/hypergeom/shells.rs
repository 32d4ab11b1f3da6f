//! Total-degree shell coefficients of ∏_j (1 − x_j v)^{−b_j}.
//!
//! S_k = Σ_{|i|=k} ∏_j (b_j)_{i_j} x_j^{i_j} / i_j!  =  [v^k] ∏_j (1−x_j v)^{−b_j},
//! obtained from the logarithmic-derivative (Newton identity) recurrence
//!   k·S_k = Σ_{i=1..k} q_i S_{k−i},   q_i = Σ_j b_j x_j^i.
//!
//! This is exactly the shell sum of the multivariate hypergeometric series,
//! at O(k) per shell instead of a multi-index enumeration.

#[derive(Debug, Clone)]
pub(crate) struct ShellCoeffs {
    b: Vec<f64>,
    x: Vec<f64>,
    /// powers x_j^i carried incrementally for q_i
    xpow: Vec<f64>,
    /// S_0..S_k computed so far
    s: Vec<f64>,
    /// q_1..q_k computed so far
    q: Vec<f64>,
}

impl ShellCoeffs {
    pub fn new(b: &[f64], x: &[f64]) -> Self {
        debug_assert_eq!(b.len(), x.len());
        ShellCoeffs {
            b: b.to_vec(),
            x: x.to_vec(),
            xpow: vec![1.0; x.len()],
            s: vec![1.0],
            q: Vec::new(),
        }
    }

    /// S_k, extending the recurrence as needed.
    pub fn get(&mut self, k: usize) -> f64 {
        while self.s.len() <= k {
            let kk = self.s.len(); // computing S_kk
            for (p, x) in self.xpow.iter_mut().zip(&self.x) {
                *p *= x;
            }
            let qk: f64 = self
                .b
                .iter()
                .zip(&self.xpow)
                .map(|(b, p)| b * p)
                .sum();
            self.q.push(qk);
            let mut acc = 0.0f64;
            for i in 1..=kk {
                acc += self.q[i - 1] * self.s[kk - i];
            }
            self.s.push(acc / kk as f64);
        }
        self.s[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::pochhammer;

    /// Brute-force shell sum by multi-index enumeration.
    fn enumerate_shell(b: &[f64], x: &[f64], k: usize) -> f64 {
        fn rec(b: &[f64], x: &[f64], dim: usize, left: usize) -> f64 {
            if dim == b.len() - 1 {
                let mut f = 1.0;
                for i in 1..=left {
                    f *= i as f64;
                }
                return pochhammer(b[dim], left as u32) * x[dim].powi(left as i32) / f;
            }
            let mut total = 0.0;
            for i in 0..=left {
                let mut fact = 1.0;
                for j in 1..=i {
                    fact *= j as f64;
                }
                total += pochhammer(b[dim], i as u32) * x[dim].powi(i as i32) / fact
                    * rec(b, x, dim + 1, left - i);
            }
            total
        }
        rec(b, x, 0, k)
    }

    #[test]
    fn matches_enumeration() {
        let b = [1.5, -2.3, 0.7, 4.0];
        let x = [0.3, -0.5, 0.8, 0.1];
        let mut sh = ShellCoeffs::new(&b, &x);
        for k in 0..12 {
            let fast = sh.get(k);
            let slow = enumerate_shell(&b, &x, k);
            assert!(
                (fast - slow).abs() <= 1e-12 * (1.0 + slow.abs()),
                "k={k}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn single_factor_is_binomial_series() {
        // (1−xv)^{−b}: S_k = (b)_k x^k / k!
        let mut sh = ShellCoeffs::new(&[2.5], &[0.4]);
        let mut fact = 1.0;
        for k in 0..20usize {
            if k > 0 {
                fact *= k as f64;
            }
            let expect = pochhammer(2.5, k as u32) * 0.4f64.powi(k as i32) / fact;
            assert!((sh.get(k) - expect).abs() < 1e-13 * (1.0 + expect.abs()));
        }
    }
}
