//! Random graph samplers, exhaustive enumerators, and count oracles.
//!
//! `D(n, p)` is the distribution over labeled DAGs that weights a graph with
//! `e` edges proportionally to `(p / (1-p))^e`; it arises from independent
//! Bernoulli(p) edges conditioned on acyclicity, and `D(n, 1/2)` is uniform.
//! Two samplers are provided: a literal rejection sampler and an exact
//! three-phase sampler driven by the tower-vector dynamic program, which stays
//! practical far beyond the rejection regime. Uniform ADMGs add independent
//! bidirected edges on top of a uniform DAG; uniform DCGs take every ordered
//! pair independently.

mod dp;
mod enumerate;

pub use dp::TowerVectorDp;
pub use enumerate::{dag_count_oracle, enumerate_graphs, GraphEnumerator};

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphKind, MixedGraph, VertexSet};
use crate::logweight::{ln_factorials, LogWeight};
use crate::seed::RngSeed;

/// Default retry cap for the rejection sampler.
pub const DEFAULT_REJECTION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SampleError {
    /// `p` outside `[0, 1)`.
    InvalidP { p: f64 },
    /// Tower vector entries must be positive and sum to `n`.
    InvalidTowerVector,
    /// The rejection sampler exhausted its retry budget.
    RejectionBudgetExceeded { budget: u64 },
    /// Exhaustive enumeration is capped well below this size.
    GraphTooLargeForOracle { n: u32, cap: u32 },
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::InvalidP { p } => write!(f, "edge probability {p} outside [0, 1)"),
            SampleError::InvalidTowerVector => {
                write!(f, "tower vector entries must be positive and sum to n")
            }
            SampleError::RejectionBudgetExceeded { budget } => {
                write!(f, "rejection sampler exceeded {budget} attempts")
            }
            SampleError::GraphTooLargeForOracle { n, cap } => {
                write!(f, "exhaustive enumeration capped at {cap} vertices, got {n}")
            }
        }
    }
}

impl core::error::Error for SampleError {}

/// Log-weight of a tower vector under `D(n, p)`:
/// `multinomial(n; h) * prod_{k>=2} (1 - q^{h_{k-1}})^{h_k} / q^{h_k * sum_{i<k} h_i}`.
pub fn tower_vector_weight(h: &[u32], n: u32, p: f64) -> Result<LogWeight, SampleError> {
    if !(0.0..1.0).contains(&p) {
        return Err(SampleError::InvalidP { p });
    }
    if h.is_empty() || h.contains(&0) || h.iter().sum::<u32>() != n {
        return Err(SampleError::InvalidTowerVector);
    }
    let lnf = ln_factorials(n as usize);
    let ln_q = libm::log1p(-p);
    let mut ln_w = lnf[n as usize];
    for &hk in h {
        ln_w -= lnf[hk as usize];
    }
    let mut placed = h[0] as f64;
    for k in 1..h.len() {
        let hk = h[k] as f64;
        let prev = h[k - 1] as f64;
        // ln(1 - q^{h_{k-1}}), stable for small p.
        let a_prev = libm::log1p(-libm::exp(prev * ln_q));
        ln_w += hk * a_prev - hk * placed * ln_q;
        placed += hk;
    }
    Ok(LogWeight::from_ln(ln_w))
}

/// Exact sampler for `D(n, p)` with a reusable dynamic-programming table.
///
/// Construction costs `O(n^3)`; each sample is then cheap, so batch drivers
/// build one sampler per `(n, p)` and draw all trials from it.
pub struct TowerSampler {
    dp: TowerVectorDp,
}

impl TowerSampler {
    pub fn new(n: u32, p: f64) -> Result<Self, SampleError> {
        Ok(TowerSampler {
            dp: TowerVectorDp::new(n, p)?,
        })
    }

    pub fn dp(&self) -> &TowerVectorDp {
        &self.dp
    }

    pub fn n(&self) -> u32 {
        self.dp.n()
    }

    pub fn p(&self) -> f64 {
        self.dp.p()
    }

    /// Draws one DAG.
    pub fn sample(&self, seed: RngSeed) -> MixedGraph {
        self.sample_with_layers(seed).0
    }

    /// Draws one DAG along with the layer assignment the sampler used. The
    /// recomputed tower decomposition of the graph equals this assignment.
    pub fn sample_with_layers(&self, seed: RngSeed) -> (MixedGraph, Vec<VertexSet>) {
        let mut rng = seed.rng();
        self.sample_rng(&mut rng)
    }

    fn sample_rng(&self, rng: &mut ChaCha8Rng) -> (MixedGraph, Vec<VertexSet>) {
        let n = self.dp.n();
        let nn = n as usize;

        // Phase 1: layer sizes.
        let h = self.dp.sample_vector(rng);

        // Phase 2: uniform assignment of labels to layer slots. Slicing a
        // uniform permutation gives each unordered partition into the given
        // sizes equal probability; slices are sorted for a stable edge order.
        let mut perm: Vec<u32> = (1..=n).collect();
        for i in 0..nn.saturating_sub(1) {
            let j = rng.gen_range(i..nn);
            perm.swap(i, j);
        }
        let mut layers: Vec<Vec<u32>> = Vec::with_capacity(h.len());
        let mut offset = 0usize;
        for &hk in &h {
            let mut slice = perm[offset..offset + hk as usize].to_vec();
            slice.sort_unstable();
            layers.push(slice);
            offset += hk as usize;
        }

        // Phase 3: parent sets. Far parents (two or more layers back) are
        // independent Bernoulli(p); the parent set within the previous layer
        // is Bernoulli(p) conditioned on being nonempty, sampled as an
        // inverse-CDF draw of its size followed by a uniform subset.
        let p = self.dp.p();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut scratch: Vec<u32> = Vec::new();
        for jl in 1..layers.len() {
            let (earlier, rest) = layers.split_at(jl);
            let wlayer = &earlier[jl - 1];
            let hw = wlayer.len();
            for &v in &rest[0] {
                for far in &earlier[..jl - 1] {
                    for &u in far {
                        if rng.gen_bool(p) {
                            edges.push((u, v));
                        }
                    }
                }
                let k = self.conditioned_binomial(hw, rng);
                scratch.clear();
                scratch.extend_from_slice(wlayer);
                for i in 0..k {
                    let t = rng.gen_range(i..hw);
                    scratch.swap(i, t);
                }
                for &u in &scratch[..k] {
                    edges.push((u, v));
                }
            }
        }

        let g = MixedGraph::new(n, &edges, &[], GraphKind::Dag)
            .expect("layered construction is acyclic");
        let layer_sets = layers
            .iter()
            .map(|l| VertexSet::from_indices(n, l))
            .collect();
        (g, layer_sets)
    }

    /// Binomial(hw, p) conditioned on being at least 1, by inverse CDF over
    /// log-space probabilities. No rejection, so runtime is bounded even when
    /// `p * hw` is tiny.
    fn conditioned_binomial(&self, hw: usize, rng: &mut ChaCha8Rng) -> usize {
        let p = self.dp.p();
        let ln_p = libm::log(p);
        let ln_q = self.dp.ln_q;
        let lnf = &self.dp.lnf;
        let ln_norm = self.dp.a[hw]; // ln(1 - q^hw)
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for k in 1..=hw {
            let ln_pk = lnf[hw] - lnf[k] - lnf[hw - k]
                + k as f64 * ln_p
                + (hw - k) as f64 * ln_q
                - ln_norm;
            acc += libm::exp(ln_pk);
            if u < acc {
                return k;
            }
        }
        hw
    }
}

/// Draws one DAG from `D(n, p)` via the tower sampler. Builds the DP table on
/// every call; use [`TowerSampler`] directly when drawing many samples.
pub fn sample_dnp_tower(n: u32, p: f64, seed: RngSeed) -> Result<MixedGraph, SampleError> {
    Ok(TowerSampler::new(n, p)?.sample(seed))
}

/// Draws one DAG from `D(n, p)` by independent Bernoulli(p) edges, rejecting
/// and retrying until the result is acyclic.
pub fn sample_dnp_rejection(n: u32, p: f64, seed: RngSeed) -> Result<MixedGraph, SampleError> {
    sample_dnp_rejection_with_budget(n, p, seed, DEFAULT_REJECTION_BUDGET)
}

/// Rejection sampler with an explicit retry cap.
pub fn sample_dnp_rejection_with_budget(
    n: u32,
    p: f64,
    seed: RngSeed,
    budget: u64,
) -> Result<MixedGraph, SampleError> {
    if !(0.0..1.0).contains(&p) {
        return Err(SampleError::InvalidP { p });
    }
    let mut rng = seed.rng();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for _ in 0..budget {
        edges.clear();
        for v in 1..=n {
            for w in 1..=n {
                if v != w && rng.gen_bool(p) {
                    edges.push((v, w));
                }
            }
        }
        if acyclic_edge_list(n, &edges) {
            let g = MixedGraph::new(n, &edges, &[], GraphKind::Dag)
                .expect("acyclicity was just checked");
            return Ok(g);
        }
    }
    Err(SampleError::RejectionBudgetExceeded { budget })
}

pub(crate) fn acyclic_edge_list(n: u32, edges: &[(u32, u32)]) -> bool {
    let n = n as usize;
    let mut indeg = alloc::vec![0u32; n];
    let mut children: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
    for &(a, b) in edges {
        indeg[b as usize - 1] += 1;
        children[a as usize - 1].push(b - 1);
    }
    let mut stack: Vec<u32> = (0..n as u32).filter(|&i| indeg[i as usize] == 0).collect();
    let mut removed = 0usize;
    while let Some(u) = stack.pop() {
        removed += 1;
        for &w in &children[u as usize] {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                stack.push(w);
            }
        }
    }
    removed == n
}

/// A uniformly random ADMG: the directed part follows `D(n, 1/2)` (uniform
/// over DAGs), then each unordered pair independently gains a bidirected edge
/// with probability 1/2.
pub fn sample_uniform_admg(n: u32, seed: RngSeed) -> MixedGraph {
    let sampler = TowerSampler::new(n, 0.5).expect("p = 1/2 is always valid");
    let mut rng = seed.rng();
    let (dag, _) = sampler.sample_rng(&mut rng);
    let mut bidirected: Vec<(u32, u32)> = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            if rng.gen_bool(0.5) {
                bidirected.push((a, b));
            }
        }
    }
    let directed: Vec<(u32, u32)> = dag
        .directed_edges()
        .iter()
        .map(|&(a, b)| (a.index(), b.index()))
        .collect();
    MixedGraph::new(n, &directed, &bidirected, GraphKind::Admg)
        .expect("directed part is a sampled DAG")
}

/// A uniformly random DCG: each ordered pair independently with probability
/// 1/2, no acyclicity conditioning.
pub fn sample_uniform_dcg(n: u32, seed: RngSeed) -> MixedGraph {
    let mut rng = seed.rng();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for v in 1..=n {
        for w in 1..=n {
            if v != w && rng.gen_bool(0.5) {
                edges.push((v, w));
            }
        }
    }
    MixedGraph::new(n, &edges, &[], GraphKind::Dcg).expect("any directed graph is a valid DCG")
}
