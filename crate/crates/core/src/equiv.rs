//! Markov equivalence: exact tests by d-separation signature, the fast
//! skeleton/v-structure test for DAGs, reversible edges, and exact
//! equivalence-class enumeration for small graphs.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::dsep::{dsep_signature, DsepError};
use crate::graph::{GraphKind, MixedGraph, VertexId};
use crate::sample::{enumerate_graphs, SampleError};

/// Default cap on the closure size of [`mec_enumerate`]; dense classes grow
/// factorially, so the walk errors out instead of truncating.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivError {
    NotADag,
    SizeMismatch { n1: u32, n2: u32 },
    GraphTooLarge { n: u32, cap: u32 },
    GraphTooLargeForOracle { n: u32, cap: u32 },
    EnumerationCapExceeded { cap: usize },
    InvalidQuery,
}

impl fmt::Display for EquivError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivError::NotADag => write!(f, "operation requires a DAG"),
            EquivError::SizeMismatch { n1, n2 } => {
                write!(f, "graphs have different vertex counts ({n1} vs {n2})")
            }
            EquivError::GraphTooLarge { n, cap } => {
                write!(f, "graph with {n} vertices exceeds signature cap {cap}")
            }
            EquivError::GraphTooLargeForOracle { n, cap } => {
                write!(f, "graph with {n} vertices exceeds enumeration cap {cap}")
            }
            EquivError::EnumerationCapExceeded { cap } => {
                write!(f, "equivalence class exceeds the enumeration cap {cap}")
            }
            EquivError::InvalidQuery => write!(f, "invalid d-separation query"),
        }
    }
}

impl core::error::Error for EquivError {}

impl From<DsepError> for EquivError {
    fn from(e: DsepError) -> Self {
        match e {
            DsepError::GraphTooLarge { n, cap } => EquivError::GraphTooLarge { n, cap },
            DsepError::GraphTooLargeForOracle { n, cap } => {
                EquivError::GraphTooLargeForOracle { n, cap }
            }
            DsepError::InvalidQuery => EquivError::InvalidQuery,
        }
    }
}

impl From<SampleError> for EquivError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::GraphTooLargeForOracle { n, cap } => {
                EquivError::GraphTooLargeForOracle { n, cap }
            }
            // Enumeration is the only sampler facility used here.
            _ => unreachable!("unexpected sampler error in equivalence code"),
        }
    }
}

/// An unshielded collider `a -> c <- b` with `a < b` and no edge of any type
/// between `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VStructure {
    pub a: VertexId,
    pub c: VertexId,
    pub b: VertexId,
}

/// All unordered adjacent pairs (by directed or bidirected edges), sorted.
pub fn skeleton(g: &MixedGraph) -> Vec<(VertexId, VertexId)> {
    let mut pairs: Vec<(VertexId, VertexId)> = g
        .directed_edges()
        .iter()
        .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
        .chain(g.bidirected_edges().iter().copied())
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

fn adjacent(g: &MixedGraph, a: VertexId, b: VertexId) -> bool {
    g.has_directed(a, b) || g.has_directed(b, a) || g.has_bidirected(a, b)
}

/// All v-structures of `g`, sorted by `(a, b, c)`.
pub fn v_structures(g: &MixedGraph) -> Vec<VStructure> {
    let mut out = Vec::new();
    for c in g.vertices() {
        let pa: Vec<VertexId> = g.parents(c).iter().collect();
        for i in 0..pa.len() {
            for j in (i + 1)..pa.len() {
                if !adjacent(g, pa[i], pa[j]) {
                    out.push(VStructure {
                        a: pa[i],
                        c,
                        b: pa[j],
                    });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Ground-truth Markov equivalence: equal full d-separation signatures. The
/// kinds of the two graphs may differ; signatures are comparable across
/// kinds.
pub fn markov_equivalent_exact(g1: &MixedGraph, g2: &MixedGraph) -> Result<bool, EquivError> {
    markov_equivalent_exact_with_cap(g1, g2, crate::dsep::DEFAULT_SIGNATURE_CAP)
}

/// Exact equivalence with an explicit signature cap.
pub fn markov_equivalent_exact_with_cap(
    g1: &MixedGraph,
    g2: &MixedGraph,
    cap: u32,
) -> Result<bool, EquivError> {
    if g1.n() != g2.n() {
        return Err(EquivError::SizeMismatch {
            n1: g1.n(),
            n2: g2.n(),
        });
    }
    Ok(crate::dsep::dsep_signature_with_cap(g1, cap)?
        == crate::dsep::dsep_signature_with_cap(g2, cap)?)
}

/// The classical DAG test: equal skeletons and equal v-structure sets. Agrees
/// with [`markov_equivalent_exact`] on DAGs (the signature oracle validates
/// this exhaustively in the test suites).
pub fn markov_equivalent_dag_fast(g1: &MixedGraph, g2: &MixedGraph) -> Result<bool, EquivError> {
    if g1.kind() != GraphKind::Dag || g2.kind() != GraphKind::Dag {
        return Err(EquivError::NotADag);
    }
    if g1.n() != g2.n() {
        return Err(EquivError::SizeMismatch {
            n1: g1.n(),
            n2: g2.n(),
        });
    }
    Ok(skeleton(g1) == skeleton(g2) && v_structures(g1) == v_structures(g2))
}

/// Directed edges `(v, w)` whose reversal yields a Markov-equivalent DAG:
/// exactly those with `Pa(v) = Pa(w) \ {v}`. Sorted lexicographically.
pub fn reversible_edges(g: &MixedGraph) -> Result<Vec<(VertexId, VertexId)>, EquivError> {
    if g.kind() != GraphKind::Dag {
        return Err(EquivError::NotADag);
    }
    Ok(g.directed_edges()
        .iter()
        .filter(|&&(v, w)| {
            let mut pw = g.parents(w).clone();
            pw.remove(v);
            *g.parents(v) == pw
        })
        .copied()
        .collect())
}

/// A Markov equivalence class listed explicitly: canonically sorted, pairwise
/// distinct members including the seed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecEnumeration {
    members: Vec<MixedGraph>,
}

impl MecEnumeration {
    pub fn members(&self) -> &[MixedGraph] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: &MixedGraph) -> bool {
        self.members.binary_search(g).is_ok()
    }
}

/// Enumerates the Markov equivalence class of a DAG as the closure under
/// single reversals of currently-reversible edges, capped at
/// [`DEFAULT_ENUMERATION_CAP`] members.
pub fn mec_enumerate(g: &MixedGraph) -> Result<MecEnumeration, EquivError> {
    mec_enumerate_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

/// Closure enumeration with an explicit cap. Errors out (rather than
/// truncating) when the class is larger than the cap.
pub fn mec_enumerate_with_cap(g: &MixedGraph, cap: usize) -> Result<MecEnumeration, EquivError> {
    if g.kind() != GraphKind::Dag {
        return Err(EquivError::NotADag);
    }
    let mut seen: BTreeSet<MixedGraph> = BTreeSet::new();
    let mut queue: Vec<MixedGraph> = Vec::new();
    seen.insert(g.clone());
    queue.push(g.clone());
    while let Some(cur) = queue.pop() {
        for (v, w) in reversible_edges(&cur)? {
            let flipped: Vec<(u32, u32)> = cur
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
            let next = MixedGraph::new(cur.n(), &flipped, &[], GraphKind::Dag)
                .expect("reversing a reversible edge keeps the graph acyclic");
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(EquivError::EnumerationCapExceeded { cap });
                }
                seen.insert(next.clone());
                queue.push(next);
            }
        }
    }
    Ok(MecEnumeration {
        members: seen.into_iter().collect(),
    })
}

/// Brute-force Markov equivalence class: every graph of the seed's kind on
/// `n` vertices whose full d-separation signature equals the seed's.
/// Exhaustive, so capped at 5 vertices (4 for ADMGs).
pub fn mec_enumerate_oracle(g: &MixedGraph) -> Result<MecEnumeration, EquivError> {
    let target = dsep_signature(g)?;
    let mut members = Vec::new();
    for candidate in enumerate_graphs(g.n(), g.kind())? {
        if dsep_signature(&candidate)? == target {
            members.push(candidate);
        }
    }
    members.sort_unstable();
    Ok(MecEnumeration { members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{chain3, collider3, s_graph, sbar_graph, two_layer11};

    fn dag(n: u32, edges: &[(u32, u32)]) -> MixedGraph {
        MixedGraph::new(n, edges, &[], GraphKind::Dag).unwrap()
    }

    #[test]
    fn the_three_chains_are_one_class() {
        let chains = [
            dag(3, &[(1, 2), (2, 3)]),
            dag(3, &[(2, 1), (2, 3)]),
            dag(3, &[(3, 2), (2, 1)]),
        ];
        for a in &chains {
            for b in &chains {
                assert!(markov_equivalent_dag_fast(a, b).unwrap());
                assert!(markov_equivalent_exact(a, b).unwrap());
            }
        }
    }

    #[test]
    fn collider_splits_from_chain() {
        let chain = chain3();
        let collider = collider3();
        assert!(!markov_equivalent_dag_fast(&chain, &collider).unwrap());
        assert!(!markov_equivalent_exact(&chain, &collider).unwrap());
        // Losing the v-structure by rewiring 1->2<-3 into 1->2->3 changes the
        // class even though the skeleton is unchanged.
        assert!(!markov_equivalent_dag_fast(&collider, &dag(3, &[(1, 2), (2, 3)])).unwrap());
    }

    #[test]
    fn exact_test_is_reflexive_and_crosses_kinds() {
        let s = s_graph();
        assert!(markov_equivalent_exact(&s, &s).unwrap());
        assert!(markov_equivalent_exact(&s, &sbar_graph()).unwrap());
        assert_eq!(
            markov_equivalent_exact(&s, &sample_2()).unwrap_err(),
            EquivError::SizeMismatch { n1: 3, n2: 2 }
        );
    }

    fn sample_2() -> MixedGraph {
        dag(2, &[(1, 2)])
    }

    #[test]
    fn v_structures_of_collider() {
        let vs = v_structures(&collider3());
        assert_eq!(vs.len(), 1);
        assert_eq!(
            vs[0],
            VStructure {
                a: VertexId::new(1),
                c: VertexId::new(2),
                b: VertexId::new(3)
            }
        );
        // A shielded collider is not a v-structure.
        let shielded = dag(3, &[(1, 2), (3, 2), (1, 3)]);
        assert!(v_structures(&shielded).is_empty());
    }

    #[test]
    fn reversible_edges_of_chain() {
        assert_eq!(
            reversible_edges(&chain3()).unwrap(),
            [(VertexId::new(1), VertexId::new(2))]
        );
    }

    #[test]
    fn reversible_edges_of_complete_triangle() {
        let g = dag(3, &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(
            reversible_edges(&g).unwrap(),
            [
                (VertexId::new(1), VertexId::new(2)),
                (VertexId::new(2), VertexId::new(3))
            ]
        );
    }

    #[test]
    fn reversible_edges_in_two_layer_graph() {
        let g = two_layer11();
        let rev = reversible_edges(&g).unwrap();
        let as_u32: Vec<(u32, u32)> = rev.iter().map(|&(a, b)| (a.index(), b.index())).collect();
        assert!(as_u32.contains(&(1, 7)));
        assert!(as_u32.contains(&(5, 8)));
        assert!(as_u32.contains(&(5, 11)));
        assert!(!as_u32.contains(&(1, 9)), "vertex 9 has a second parent");
        assert_eq!(as_u32.len(), 3);
    }

    #[test]
    fn mec_of_chain_has_three_members() {
        let mec = mec_enumerate(&chain3()).unwrap();
        assert_eq!(mec.size(), 3);
        assert!(mec.contains(&chain3()));
        let oracle = mec_enumerate_oracle(&chain3()).unwrap();
        assert_eq!(mec, oracle);
    }

    #[test]
    fn mec_of_empty_graph_is_singleton() {
        let g = dag(4, &[]);
        assert_eq!(mec_enumerate(&g).unwrap().size(), 1);
    }

    #[test]
    fn mec_of_complete_dag_is_all_orderings() {
        let g = dag(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(mec_enumerate(&g).unwrap().size(), 24);
    }

    #[test]
    fn enumeration_cap_errors_out() {
        let g = dag(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(
            mec_enumerate_with_cap(&g, 10).unwrap_err(),
            EquivError::EnumerationCapExceeded { cap: 10 }
        );
    }

    #[test]
    fn oracle_mec_for_admg_contains_both_shortcut_variants() {
        let mec = mec_enumerate_oracle(&sbar_graph()).unwrap();
        assert!(mec.contains(&s_graph()));
        assert!(mec.contains(&sbar_graph()));
    }

    #[test]
    fn oracle_mec_for_dcg_contains_the_reversed_cycle() {
        let fwd = MixedGraph::new(3, &[(1, 2), (2, 3), (3, 1)], &[], GraphKind::Dcg).unwrap();
        let bwd = MixedGraph::new(3, &[(2, 1), (3, 2), (1, 3)], &[], GraphKind::Dcg).unwrap();
        let mec = mec_enumerate_oracle(&fwd).unwrap();
        assert!(mec.contains(&bwd));
    }

    #[test]
    fn mec_members_share_a_skeleton() {
        let g = dag(4, &[(1, 2), (2, 3), (1, 4)]);
        let mec = mec_enumerate(&g).unwrap();
        let sk = skeleton(&g);
        for m in mec.members() {
            assert_eq!(skeleton(m), sk);
        }
    }

    #[test]
    fn non_dag_inputs_are_rejected() {
        let s = s_graph();
        assert_eq!(reversible_edges(&s).unwrap_err(), EquivError::NotADag);
        assert_eq!(mec_enumerate(&s).unwrap_err(), EquivError::NotADag);
        assert_eq!(
            markov_equivalent_dag_fast(&s, &s).unwrap_err(),
            EquivError::NotADag
        );
    }
}
