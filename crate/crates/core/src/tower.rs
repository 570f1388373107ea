//! Tower decompositions of acyclic directed parts.
//!
//! The tower decomposition of a DAG partitions the vertices into layers by
//! repeated source stripping: `H_1` is the set of sources, `H_2` the set of
//! sources once `H_1` is removed, and so on. Every directed edge goes from a
//! layer to a strictly later layer, and every vertex outside `H_1` has at
//! least one parent in the immediately preceding layer. For mixed graphs the
//! decomposition is computed on the directed part alone.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{GraphError, GraphKind, MixedGraph, VertexId, VertexSet};

/// The layer partition `(H_1, ..., H_s)` of a graph with an acyclic directed
/// part, together with the vector of layer sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerDecomposition {
    layers: Vec<VertexSet>,
    vector: Vec<u32>,
    layer_of: Vec<u32>,
}

impl TowerDecomposition {
    /// The layers `H_1, ..., H_s` in order.
    pub fn layers(&self) -> &[VertexSet] {
        &self.layers
    }

    /// The layer sizes `(h_1, ..., h_s)`.
    pub fn vector(&self) -> &[u32] {
        &self.vector
    }

    /// Number of layers `s`, which equals the number of vertices on a longest
    /// directed path.
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// 1-based index of the layer containing `v`.
    pub fn layer_of(&self, v: VertexId) -> u32 {
        self.layer_of[v.bit()]
    }
}

/// Computes the tower decomposition of the directed part of `g`.
///
/// Fails with [`GraphError::CyclicInput`] if the directed part has a cycle.
pub fn tower_decomposition(g: &MixedGraph) -> Result<TowerDecomposition, GraphError> {
    let n = g.n() as usize;
    let mut indeg: Vec<u32> = g.vertices().map(|v| g.parents(v).len()).collect();
    let mut layer_of = vec![0u32; n];
    let mut frontier: Vec<VertexId> = g.vertices().filter(|&v| indeg[v.bit()] == 0).collect();

    let mut layers = Vec::new();
    let mut placed = 0usize;
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let mut layer = VertexSet::empty(g.n());
        let mut next = Vec::new();
        for &v in &frontier {
            layer.insert(v);
            layer_of[v.bit()] = level;
            placed += 1;
        }
        for &v in &frontier {
            for w in g.children(v).iter() {
                indeg[w.bit()] -= 1;
                if indeg[w.bit()] == 0 {
                    next.push(w);
                }
            }
        }
        layers.push(layer);
        frontier = next;
    }

    if placed != n {
        return Err(GraphError::CyclicInput);
    }
    let vector = layers.iter().map(|l| l.len()).collect();
    Ok(TowerDecomposition {
        layers,
        vector,
        layer_of,
    })
}

/// The tower of `g`: same vertices, keeping exactly the directed edges that
/// go from a layer `H_i` to the adjacent layer `H_{i+1}`. Bidirected edges
/// are dropped, so the result is always a DAG.
pub fn tower_graph(g: &MixedGraph) -> Result<MixedGraph, GraphError> {
    let decomp = tower_decomposition(g)?;
    let kept: Vec<(u32, u32)> = g
        .directed_edges()
        .iter()
        .filter(|(a, b)| decomp.layer_of(*b) == decomp.layer_of(*a) + 1)
        .map(|(a, b)| (a.index(), b.index()))
        .collect();
    Ok(MixedGraph::new(g.n(), &kept, &[], GraphKind::Dag)
        .expect("adjacent-layer subgraph of an acyclic graph is a valid DAG"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{chain3, layered11, s_graph};
    use alloc::vec;

    #[test]
    fn layered11_decomposition() {
        let g = layered11();
        let t = tower_decomposition(&g).unwrap();
        assert_eq!(t.vector(), &[4, 2, 3, 2]);
        assert_eq!(t.layers()[0], VertexSet::from_indices(11, &[1, 2, 3, 4]));
        assert_eq!(t.layers()[1], VertexSet::from_indices(11, &[5, 6]));
        assert_eq!(t.layers()[2], VertexSet::from_indices(11, &[7, 8, 9]));
        assert_eq!(t.layers()[3], VertexSet::from_indices(11, &[10, 11]));
    }

    #[test]
    fn edgeless_graph_is_one_layer() {
        let g = MixedGraph::new(5, &[], &[], GraphKind::Dag).unwrap();
        let t = tower_decomposition(&g).unwrap();
        assert_eq!(t.vector(), &[5]);
    }

    #[test]
    fn chain_is_singleton_layers() {
        let t = tower_decomposition(&chain3()).unwrap();
        assert_eq!(t.vector(), &[1, 1, 1]);
    }

    #[test]
    fn cyclic_input_rejected() {
        let g = MixedGraph::new(3, &[(1, 2), (2, 3), (3, 1)], &[], GraphKind::Dcg).unwrap();
        assert_eq!(tower_decomposition(&g).unwrap_err(), GraphError::CyclicInput);
        assert_eq!(tower_graph(&g).unwrap_err(), GraphError::CyclicInput);
    }

    #[test]
    fn admg_uses_directed_part_only() {
        let t = tower_decomposition(&s_graph()).unwrap();
        assert_eq!(t.vector(), &[1, 1, 1]);
    }

    #[test]
    fn tower_graph_keeps_adjacent_layer_edges() {
        let g = layered11();
        let sigma = tower_graph(&g).unwrap();
        // Dropped: 1->7, 4->8, 4->9 (layer 1 to 3) and 2->10 (layer 1 to 4).
        let dropped: Vec<(u32, u32)> = g
            .directed_edges()
            .iter()
            .filter(|e| !sigma.directed_edges().contains(e))
            .map(|(a, b)| (a.index(), b.index()))
            .collect();
        assert_eq!(dropped, vec![(1, 7), (2, 10), (4, 8), (4, 9)]);
        assert_eq!(sigma.directed_edges().len(), 8);
    }

    #[test]
    fn tower_graph_fixes_decomposition_and_idles_on_chains() {
        let g = layered11();
        let sigma = tower_graph(&g).unwrap();
        assert_eq!(
            tower_decomposition(&sigma).unwrap(),
            tower_decomposition(&g).unwrap()
        );

        let chain = chain3();
        assert_eq!(tower_graph(&chain).unwrap(), chain);

        let empty = MixedGraph::new(4, &[], &[], GraphKind::Dag).unwrap();
        assert_eq!(tower_graph(&empty).unwrap(), empty);
    }

    #[test]
    fn decomposition_invariants() {
        let g = layered11();
        let t = tower_decomposition(&g).unwrap();
        // Layers partition the vertex set.
        let mut all = VertexSet::empty(g.n());
        let mut total = 0;
        for layer in t.layers() {
            assert!(!layer.intersects(&all));
            all.union_with(layer);
            total += layer.len();
        }
        assert_eq!(total, g.n());
        assert_eq!(all, VertexSet::full(g.n()));
        // Every edge strictly increases the layer index.
        for &(a, b) in g.directed_edges() {
            assert!(t.layer_of(b) > t.layer_of(a));
        }
        // Every non-source vertex has a parent in the previous layer.
        for v in g.vertices() {
            let l = t.layer_of(v);
            if l == 1 {
                assert!(g.parents(v).is_empty());
            } else {
                assert!(g.parents(v).intersects(&t.layers()[(l - 2) as usize]));
            }
        }
    }
}
