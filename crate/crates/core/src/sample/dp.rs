//! Exact dynamic program over tower vectors.
//!
//! For the edge-weighted DAG distribution with parameter `p`, the probability
//! of a tower vector `(h_1, ..., h_s)` is proportional to
//!
//! ```text
//! multinomial(n; h_1..h_s) * prod_{k>=2} (1 - q^{h_{k-1}})^{h_k} / q^{h_k * (h_1+..+h_{k-1})}
//! ```
//!
//! with `q = 1 - p`. Dropping the shared `n!` (it is absorbed by the uniform
//! label assignment downstream) leaves per-layer factors
//! `f(l_prev, l, m_prev) = (1 - q^{l_prev})^l / (q^{l * m_prev} * l!)` and a
//! first-layer factor `1/h_1!`. The table `F(m, l)` holds the total weight of
//! all completions once `m` vertices are placed and the last layer has size
//! `l`; layer sizes are then sampled sequentially by exact conditional
//! probabilities.
//!
//! Everything is computed in log space. The inner log-sum-exp skips terms
//! more than 50 nats below the row maximum: even with 10^5 terms the skipped
//! mass stays below one ulp of the result, so the table is exact at f64
//! resolution while large-`n` builds stay affordable.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::SampleError;
use crate::logweight::{ln_factorials, log_sum_exp, LogWeight};

const LSE_SKIP: f64 = 50.0;

/// The completion-weight table for a fixed `(n, p)`.
///
/// Building the table costs `O(n^3)` time and `O(n^2)` memory; it is immutable
/// afterwards and shared by every sample drawn for this `(n, p)`.
pub struct TowerVectorDp {
    n: u32,
    p: f64,
    /// ln(1 - p)
    pub(super) ln_q: f64,
    /// a[l] = ln(1 - q^l); a[0] is unused.
    pub(super) a: Vec<f64>,
    /// ln k! for k = 0..=n.
    pub(super) lnf: Vec<f64>,
    /// Row-major `(n+1) x (n+1)`: entry `m * (n+1) + l` is `F(m, l)`,
    /// defined for `1 <= l <= m <= n`.
    f: Vec<f64>,
    log_total: f64,
}

impl TowerVectorDp {
    pub fn new(n: u32, p: f64) -> Result<Self, SampleError> {
        if !(0.0..1.0).contains(&p) {
            return Err(SampleError::InvalidP { p });
        }
        assert!(n >= 1, "graphs have at least one vertex");
        let nn = n as usize;
        let stride = nn + 1;
        let ln_q = libm::log1p(-p);
        let lnf = ln_factorials(nn);
        let mut a = Vec::with_capacity(nn + 1);
        a.push(f64::NEG_INFINITY);
        for l in 1..=nn {
            // ln(1 - q^l), stable for q near 1 (p near 0).
            a.push(libm::log1p(-libm::exp(l as f64 * ln_q)));
        }

        let mut f = vec![f64::NEG_INFINITY; stride * stride];
        for l in 1..=nn {
            f[nn * stride + l] = 0.0;
        }

        // g[j] = F(m + j, j) - ln j!, shared across all l of the current row.
        let mut g = vec![0.0f64; stride];
        for m in (1..nn).rev() {
            let rem = nn - m;
            for j in 1..=rem {
                g[j] = f[(m + j) * stride + j] - lnf[j];
            }
            let mb = m as f64 * ln_q;
            for l in 1..=m {
                let c = a[l] - mb;
                let mut mx = f64::NEG_INFINITY;
                let mut jc = 0.0;
                for &gj in &g[1..=rem] {
                    jc += c;
                    let t = jc + gj;
                    if t > mx {
                        mx = t;
                    }
                }
                if mx == f64::NEG_INFINITY {
                    continue;
                }
                let thr = mx - LSE_SKIP;
                let mut sum = 0.0;
                let mut jc = 0.0;
                for &gj in &g[1..=rem] {
                    jc += c;
                    let t = jc + gj;
                    if t >= thr {
                        sum += libm::exp(t - mx);
                    }
                }
                f[m * stride + l] = mx + libm::log(sum);
            }
        }

        let first: Vec<f64> = (1..=nn).map(|h1| -lnf[h1] + f[h1 * stride + h1]).collect();
        let log_total = log_sum_exp(&first);

        Ok(TowerVectorDp {
            n,
            p,
            ln_q,
            a,
            lnf,
            f,
            log_total,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `F(m, l)`: total weight of completions given `m` vertices placed with
    /// last layer size `l`. Requires `1 <= l <= m <= n`.
    pub fn completion_weight(&self, m: u32, l: u32) -> LogWeight {
        assert!(1 <= l && l <= m && m <= self.n);
        LogWeight::from_ln(self.f[m as usize * (self.n as usize + 1) + l as usize])
    }

    /// Total weight over all tower vectors (the `1/h_1!`-weighted sum of
    /// first-layer states). Dividing per-vector weights by `n!` and summing
    /// reproduces this value.
    pub fn log_total(&self) -> LogWeight {
        LogWeight::from_ln(self.log_total)
    }

    /// Draws a tower vector by exact sequential inverse-CDF over layer sizes.
    pub fn sample_vector(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        let nn = self.n as usize;
        let stride = nn + 1;

        // First layer: weight 1/h1! * F(h1, h1).
        let mut h1 = nn;
        {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut last_valid = None;
            for cand in 1..=nn {
                let t = -self.lnf[cand] + self.f[cand * stride + cand];
                if t == f64::NEG_INFINITY {
                    continue;
                }
                last_valid = Some(cand);
                acc += libm::exp(t - self.log_total);
                if u < acc {
                    break;
                }
            }
            if let Some(v) = last_valid {
                h1 = v;
            }
        }

        let mut h = vec![h1 as u32];
        let mut m = h1;
        let mut l = h1;
        while m < nn {
            let rem = nn - m;
            let fml = self.f[m * stride + l];
            let c = self.a[l] - m as f64 * self.ln_q;
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut choice = rem;
            let mut last_valid = None;
            let mut jc = 0.0;
            for j in 1..=rem {
                jc += c;
                let t = jc - self.lnf[j] + self.f[(m + j) * stride + j];
                if t == f64::NEG_INFINITY {
                    continue;
                }
                last_valid = Some(j);
                acc += libm::exp(t - fml);
                if u < acc {
                    break;
                }
            }
            if let Some(v) = last_valid {
                choice = v;
            }
            h.push(choice as u32);
            m += choice;
            l = choice;
        }
        h
    }
}
