//! Exactness checks for the tower-vector machinery against brute-force
//! enumeration.

use std::collections::BTreeMap;

use mecsize_core::{
    enumerate_graphs, sample_dnp_rejection, tower_decomposition, tower_vector_weight, GraphKind,
    LogWeight, RngSeed, TowerSampler, TowerVectorDp,
};

/// All compositions of `n` (ordered positive tuples summing to n).
fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

/// Grouping the exact graph weights `(p/(1-p))^e` of all DAGs by tower vector
/// must reproduce the closed-form vector weights up to one shared constant,
/// to relative error 1e-9.
#[test]
fn tower_vector_masses_are_proportional_to_closed_form() {
    for n in 2..=4u32 {
        for &p in &[0.3f64, 0.5] {
            let ratio = p / (1.0 - p);
            let mut mass: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for g in enumerate_graphs(n, GraphKind::Dag).unwrap() {
                let h = tower_decomposition(&g).unwrap().vector().to_vec();
                let e = g.directed_edges().len() as i32;
                *mass.entry(h).or_insert(0.0) += ratio.powi(e);
            }
            let mut log_consts = Vec::new();
            for (h, m) in &mass {
                let w = tower_vector_weight(h, n, p).unwrap();
                log_consts.push(m.ln() - w.ln());
            }
            let (lo, hi) = log_consts
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
                    (lo.min(c), hi.max(c))
                });
            assert!(
                hi - lo <= 1e-9,
                "n={n} p={p}: shared-constant spread {} exceeds 1e-9",
                hi - lo
            );
        }
    }
}

/// The DP's total weight must equal the direct sum of `w(h)/n!` over every
/// composition of `n`.
#[test]
fn dp_total_matches_direct_summation() {
    for &(n, p) in &[
        (4u32, 0.3f64),
        (5, 0.2),
        (6, 0.5),
        (6, 0.85),
        (3, 0.0),
        (8, 0.15),
        (8, 0.6),
    ] {
        let dp = TowerVectorDp::new(n, p).unwrap();
        let ln_nfact: f64 = (1..=n as u64).map(|k| (k as f64).ln()).sum();
        let mut total = LogWeight::ZERO;
        for h in compositions(n) {
            let w = tower_vector_weight(&h, n, p).unwrap();
            total += w * LogWeight::from_ln(-ln_nfact);
        }
        let diff = (total.ln() - dp.log_total().ln()).abs();
        assert!(
            diff <= 1e-9 || (total.is_zero() && dp.log_total().is_zero()),
            "n={n} p={p} direct={} dp={}",
            total.ln(),
            dp.log_total().ln()
        );
    }
}

/// Completion weights themselves decompose correctly: F(m, l) restricted to
/// one more layer of size j times that layer's factor sums over j.
#[test]
fn dp_states_match_vector_weight_ratios() {
    // For a two-layer vector (h1, h2), w(h)/n! = (1/h1!) * factor * F-term
    // with F(h1+h2, h2) = 1, so F(h1, h1) accumulates exactly the full
    // conditional mass. Check F(h1, h1) by direct summation over completions.
    let (n, p) = (6u32, 0.35f64);
    let dp = TowerVectorDp::new(n, p).unwrap();
    let ln_q = (1.0f64 - p).ln();
    for h1 in 1..n {
        let mut expect = LogWeight::ZERO;
        for comp in compositions(n - h1) {
            // Weight of the completion given a first layer of size h1.
            let mut ln_w = 0.0;
            let mut placed = h1 as f64;
            let mut prev = h1 as f64;
            for &hk in &comp {
                let hk = hk as f64;
                let a_prev = (-((prev * ln_q).exp())).ln_1p();
                ln_w += hk * a_prev - hk * placed * ln_q;
                let mut lnf = 0.0;
                for i in 1..=(hk as u64) {
                    lnf += (i as f64).ln();
                }
                ln_w -= lnf;
                placed += hk;
                prev = hk;
            }
            expect += LogWeight::from_ln(ln_w);
        }
        let got = dp.completion_weight(h1, h1);
        assert!(
            (expect.ln() - got.ln()).abs() <= 1e-9,
            "h1={h1}: direct={} dp={}",
            expect.ln(),
            got.ln()
        );
    }
}

/// Smoke-level distributional agreement of the two samplers at n = 3 (the
/// full-scale million-draw checks live in the acceptance suite).
#[test]
fn tower_and_rejection_agree_distributionally_at_small_scale() {
    let (n, p, trials) = (3u32, 0.3f64, 60_000u64);
    let ratio = p / (1.0 - p);
    let mut exact: BTreeMap<Vec<(u32, u32)>, f64> = BTreeMap::new();
    for g in enumerate_graphs(n, GraphKind::Dag).unwrap() {
        let key: Vec<(u32, u32)> = g
            .directed_edges()
            .iter()
            .map(|&(a, b)| (a.index(), b.index()))
            .collect();
        exact.insert(key, ratio.powi(g.directed_edges().len() as i32));
    }
    let z: f64 = exact.values().sum();
    for v in exact.values_mut() {
        *v /= z;
    }

    let sampler = TowerSampler::new(n, p).unwrap();
    let seed = RngSeed::new(99);
    let mut tower_counts: BTreeMap<Vec<(u32, u32)>, u64> = BTreeMap::new();
    let mut rej_counts: BTreeMap<Vec<(u32, u32)>, u64> = BTreeMap::new();
    for t in 0..trials {
        let g = sampler.sample(seed.stream(t));
        let key: Vec<(u32, u32)> = g
            .directed_edges()
            .iter()
            .map(|&(a, b)| (a.index(), b.index()))
            .collect();
        *tower_counts.entry(key).or_insert(0) += 1;
        let g = sample_dnp_rejection(n, p, seed.stream(trials + t)).unwrap();
        let key: Vec<(u32, u32)> = g
            .directed_edges()
            .iter()
            .map(|&(a, b)| (a.index(), b.index()))
            .collect();
        *rej_counts.entry(key).or_insert(0) += 1;
    }
    let tv = |counts: &BTreeMap<Vec<(u32, u32)>, u64>| -> f64 {
        exact
            .iter()
            .map(|(k, &pk)| {
                let emp = *counts.get(k).unwrap_or(&0) as f64 / trials as f64;
                (emp - pk).abs()
            })
            .sum::<f64>()
            / 2.0
    };
    let tv_tower = tv(&tower_counts);
    let tv_rej = tv(&rej_counts);
    assert!(tv_tower <= 0.02, "tower sampler TV {tv_tower}");
    assert!(tv_rej <= 0.02, "rejection sampler TV {tv_rej}");
}
