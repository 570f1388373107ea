//! Exhaustive small-n validation of the equivalence machinery against the
//! d-separation signature ground truth.

use std::collections::BTreeMap;

use mecsize_core::{
    dsep_signature, enumerate_graphs, markov_equivalent_dag_fast, mec_enumerate,
    mec_enumerate_oracle, reversible_edges, skeleton, v_structures, DsepSignature, GraphKind,
    MixedGraph,
};

fn all_dags(n: u32) -> Vec<MixedGraph> {
    enumerate_graphs(n, GraphKind::Dag).unwrap().collect()
}

/// The parent-set reversibility criterion must match the brute-force test
/// (reversal stays acyclic and preserves the signature) on every edge of
/// every DAG with up to four vertices.
#[test]
fn reversibility_criterion_matches_signature_oracle_exhaustively() {
    for n in 2..=4u32 {
        for g in all_dags(n) {
            let sig = dsep_signature(&g).unwrap();
            let fast: Vec<(u32, u32)> = reversible_edges(&g)
                .unwrap()
                .iter()
                .map(|&(a, b)| (a.index(), b.index()))
                .collect();
            for &(v, w) in g.directed_edges() {
                let flipped: Vec<(u32, u32)> = g
                    .directed_edges()
                    .iter()
                    .map(|&(a, b)| {
                        if (a, b) == (v, w) {
                            (b.index(), a.index())
                        } else {
                            (a.index(), b.index())
                        }
                    })
                    .collect();
                let brute = match MixedGraph::new(n, &flipped, &[], GraphKind::Dag) {
                    Ok(h) => dsep_signature(&h).unwrap() == sig,
                    Err(_) => false, // reversal closed a cycle
                };
                assert_eq!(
                    fast.contains(&(v.index(), w.index())),
                    brute,
                    "edge ({v},{w}) of {:?}",
                    g.directed_edges()
                );
            }
        }
    }
}

/// The skeleton/v-structure test and the signature test induce the same
/// partition of all DAGs for n <= 5. Identical partitions mean the two tests
/// agree on every pair.
#[test]
fn fast_and_exact_tests_induce_the_same_partition() {
    type FastKey = (Vec<(u32, u32)>, Vec<(u32, u32, u32)>);
    for n in 2..=5u32 {
        let dags = all_dags(n);
        let mut sig_to_class: BTreeMap<DsepSignature, usize> = BTreeMap::new();
        let mut fast_to_class: BTreeMap<FastKey, usize> = BTreeMap::new();
        let mut pairs_seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for g in &dags {
            let sig = dsep_signature(g).unwrap();
            let sk: Vec<(u32, u32)> = skeleton(g)
                .iter()
                .map(|&(a, b)| (a.index(), b.index()))
                .collect();
            let vs: Vec<(u32, u32, u32)> = v_structures(g)
                .iter()
                .map(|v| (v.a.index(), v.c.index(), v.b.index()))
                .collect();
            let next_sig = sig_to_class.len();
            let sig_class = *sig_to_class.entry(sig).or_insert(next_sig);
            let next_fast = fast_to_class.len();
            let fast_class = *fast_to_class.entry((sk, vs)).or_insert(next_fast);
            pairs_seen.insert((sig_class, fast_class), ());
        }
        // A bijection between class labels is exactly pairwise agreement.
        assert_eq!(sig_to_class.len(), fast_to_class.len(), "n={n}");
        assert_eq!(pairs_seen.len(), sig_to_class.len(), "n={n}");
    }
}

/// On 543 four-vertex DAGs, spot-check the pairwise agreement directly.
#[test]
fn fast_test_agrees_pairwise_on_four_vertices() {
    let dags = all_dags(4);
    let sigs: Vec<DsepSignature> = dags.iter().map(|g| dsep_signature(g).unwrap()).collect();
    for i in 0..dags.len() {
        for j in (i + 1)..dags.len() {
            let fast = markov_equivalent_dag_fast(&dags[i], &dags[j]).unwrap();
            assert_eq!(fast, sigs[i] == sigs[j], "pair ({i},{j})");
        }
    }
}

/// The reversible-flip closure equals the signature-filtered class for every
/// DAG with up to four vertices.
#[test]
fn closure_enumeration_matches_oracle_exhaustively() {
    for n in 1..=4u32 {
        // Group oracle classes once per n instead of re-filtering per graph.
        let dags = all_dags(n);
        let mut class_of: BTreeMap<DsepSignature, Vec<MixedGraph>> = BTreeMap::new();
        for g in &dags {
            class_of
                .entry(dsep_signature(g).unwrap())
                .or_default()
                .push(g.clone());
        }
        for class in class_of.values_mut() {
            class.sort_unstable();
        }
        for g in &dags {
            let mec = mec_enumerate(g).unwrap();
            let class = &class_of[&dsep_signature(g).unwrap()];
            assert_eq!(mec.members(), &class[..], "n={n}");
        }
    }
}

/// Randomized closure-vs-oracle agreement at n = 5.
#[test]
fn closure_matches_oracle_on_sampled_five_vertex_dags() {
    use mecsize_core::{sample_dnp_tower, RngSeed};
    let seed = RngSeed::new(20240);
    for trial in 0..25 {
        let g = sample_dnp_tower(5, 0.4, seed.stream(trial)).unwrap();
        let mec = mec_enumerate(&g).unwrap();
        let oracle = mec_enumerate_oracle(&g).unwrap();
        assert_eq!(mec, oracle, "trial {trial}");
    }
}
