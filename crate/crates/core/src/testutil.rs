//! Shared graph fixtures for unit tests.

use crate::graph::{GraphKind, MixedGraph};

pub fn chain3() -> MixedGraph {
    MixedGraph::new(3, &[(1, 2), (2, 3)], &[], GraphKind::Dag).unwrap()
}

pub fn collider3() -> MixedGraph {
    MixedGraph::new(3, &[(1, 2), (3, 2)], &[], GraphKind::Dag).unwrap()
}

/// Three-vertex ADMG with edges 1->2, 2->3, 2<->3. Its optional shortcut edge
/// 1->3 is absent.
pub fn s_graph() -> MixedGraph {
    MixedGraph::new(3, &[(1, 2), (2, 3)], &[(2, 3)], GraphKind::Admg).unwrap()
}

/// Same as [`s_graph`] plus the shortcut edge 1->3.
pub fn sbar_graph() -> MixedGraph {
    MixedGraph::new(3, &[(1, 2), (2, 3), (1, 3)], &[(2, 3)], GraphKind::Admg).unwrap()
}

/// An 11-vertex DAG with twelve edges and layer sizes (4, 2, 3, 2).
pub fn layered11() -> MixedGraph {
    MixedGraph::new(
        11,
        &[
            (2, 6),
            (6, 7),
            (4, 6),
            (2, 5),
            (4, 8),
            (5, 8),
            (6, 9),
            (1, 7),
            (2, 10),
            (9, 10),
            (8, 11),
            (4, 9),
        ],
        &[],
        GraphKind::Dag,
    )
    .unwrap()
}

/// An 11-vertex DAG with two layers (6 sources, 5 layer-2 vertices) and eight
/// edges. Vertices 7, 8, 11 have exactly one parent (1, 5, 5 respectively),
/// so its maximal matchings of reversible layer-2 edges have size 2.
pub fn two_layer11() -> MixedGraph {
    MixedGraph::new(
        11,
        &[
            (5, 11),
            (1, 7),
            (1, 9),
            (2, 10),
            (4, 9),
            (4, 10),
            (5, 8),
            (6, 10),
        ],
        &[],
        GraphKind::Dag,
    )
    .unwrap()
}
