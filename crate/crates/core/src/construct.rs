//! Markov-equivalence-preserving constructions and the lower-bound
//! certificates they imply.
//!
//! Three mechanisms witness that an equivalence class is large:
//!
//! - **DAGs**: a matching of reversible layer-2 edges. Each edge runs from a
//!   source to a second-layer vertex whose only parent is that source, so
//!   reversing any subset of the matching yields `2^|matching|` distinct
//!   equivalent DAGs.
//! - **ADMGs**: triples carrying the gadget `v1 -> v2 -> v3` with
//!   `v2 <-> v3`, where the shortcut edge `v1 -> v3` is underdetermined (it
//!   can be added or deleted without changing any d-separation). Edge-disjoint
//!   copies toggle independently.
//! - **DCGs**: vertex-disjoint directed cycles of length at least 3. Each can
//!   be reversed (rewiring external in-edges one step backward along the
//!   cycle) while preserving Markov equivalence, giving `2^k` variants.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{GraphKind, MixedGraph, VertexId, VertexSet};
use crate::tower::tower_decomposition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructError {
    NotADag,
    NotAnAdmg,
    NotADcg,
    /// The matching is not a valid reversible layer-2 matching of the graph,
    /// or the flip mask addresses nonexistent edges.
    InvalidMatching,
    /// The triple does not carry the required gadget edges in the graph.
    TripleNotAnSStructure,
    /// The vertex list is not a directed cycle of the graph.
    NotACycle,
    CycleTooShort { len: usize },
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::NotADag => write!(f, "operation requires a DAG"),
            ConstructError::NotAnAdmg => write!(f, "operation requires an ADMG"),
            ConstructError::NotADcg => write!(f, "operation requires a DCG"),
            ConstructError::InvalidMatching => {
                write!(f, "not a valid reversible layer-2 matching of this graph")
            }
            ConstructError::TripleNotAnSStructure => {
                write!(f, "triple does not carry the gadget edges in this graph")
            }
            ConstructError::NotACycle => write!(f, "vertex list is not a directed cycle"),
            ConstructError::CycleTooShort { len } => {
                write!(f, "cycle reversal needs length >= 3, got {len}")
            }
        }
    }
}

impl core::error::Error for ConstructError {}

/// A matching of reversible layer-2 edges, together with the layer-2 analysis
/// sets it was built from: `source_set` holds the second-layer vertices with
/// exactly one parent, and `unique_set` those among them whose parent serves
/// no other member of `source_set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibleMatching {
    edges: Vec<(VertexId, VertexId)>,
    source_set: VertexSet,
    unique_set: VertexSet,
}

impl ReversibleMatching {
    /// Matching edges `(source, layer-2 child)`, sorted by source.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Layer-2 vertices with exactly one parent.
    pub fn source_set(&self) -> &VertexSet {
        &self.source_set
    }

    /// Members of [`source_set`](Self::source_set) whose parent is unshared.
    pub fn unique_set(&self) -> &VertexSet {
        &self.unique_set
    }
}

/// Builds a matching of reversible layer-2 edges greedily: group the
/// single-parent layer-2 vertices by their parent and keep one edge per
/// distinct parent (smallest-index child). The result always has at least
/// `|unique_set|` edges.
pub fn layer2_matching(g: &MixedGraph) -> Result<ReversibleMatching, ConstructError> {
    if g.kind() != GraphKind::Dag {
        return Err(ConstructError::NotADag);
    }
    let t = tower_decomposition(g).expect("a DAG always has a tower decomposition");
    let mut source_set = VertexSet::empty(g.n());
    let mut unique_set = VertexSet::empty(g.n());
    let mut by_parent: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    if t.layer_count() >= 2 {
        for v in t.layers()[1].iter() {
            let pa = g.parents(v);
            if pa.len() == 1 {
                source_set.insert(v);
                by_parent.entry(pa.first().expect("one parent")).or_default().push(v);
            }
        }
    }
    let mut edges = Vec::with_capacity(by_parent.len());
    for (parent, children) in &by_parent {
        edges.push((*parent, children[0]));
        if children.len() == 1 {
            unique_set.insert(children[0]);
        }
    }
    Ok(ReversibleMatching {
        edges,
        source_set,
        unique_set,
    })
}

/// Reverses exactly the masked edges of the matching (bit `i` of `mask`
/// addresses `m.edges()[i]`). The matching is revalidated against `g`; the
/// result is a DAG Markov-equivalent to `g`.
pub fn flip_matching_subset(
    g: &MixedGraph,
    m: &ReversibleMatching,
    mask: u64,
) -> Result<MixedGraph, ConstructError> {
    if g.kind() != GraphKind::Dag || (m.len() < 64 && mask >= 1u64 << m.len()) {
        return Err(ConstructError::InvalidMatching);
    }
    let t = tower_decomposition(g).expect("a DAG always has a tower decomposition");
    let mut touched = VertexSet::empty(g.n());
    for &(v, w) in m.edges() {
        // Vertex-disjointness, membership, reversibility, and the layer
        // constraint together make subsets flip independently.
        if touched.contains(v) || touched.contains(w) {
            return Err(ConstructError::InvalidMatching);
        }
        touched.insert(v);
        touched.insert(w);
        if !g.has_directed(v, w) || t.layer_of(v) != 1 || t.layer_of(w) != 2 {
            return Err(ConstructError::InvalidMatching);
        }
        let mut pw = g.parents(w).clone();
        pw.remove(v);
        if *g.parents(v) != pw {
            return Err(ConstructError::InvalidMatching);
        }
    }

    let mut flip = VertexSet::empty(g.n());
    for (i, &(v, _)) in m.edges().iter().enumerate().take(64) {
        if mask >> i & 1 == 1 {
            flip.insert(v);
        }
    }
    let edges: Vec<(u32, u32)> = g
        .directed_edges()
        .iter()
        .map(|&(a, b)| {
            if flip.contains(a) && m.edges().contains(&(a, b)) {
                (b.index(), a.index())
            } else {
                (a.index(), b.index())
            }
        })
        .collect();
    Ok(MixedGraph::new(g.n(), &edges, &[], GraphKind::Dag)
        .expect("flipping a reversible matching subset keeps the graph acyclic"))
}

/// One triple carrying the gadget, with its role labels: `v1 -> v2`,
/// `v2 -> v3`, `v2 <-> v3` are present; `present` records whether the
/// underdetermined shortcut `v1 -> v3` is currently in the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SStructureTriple {
    pub v1: VertexId,
    pub v2: VertexId,
    pub v3: VertexId,
    pub present: bool,
}

impl SStructureTriple {
    /// The three vertices in ascending index order.
    pub fn sorted_vertices(&self) -> [VertexId; 3] {
        let mut v = [self.v1, self.v2, self.v3];
        v.sort_unstable();
        v
    }

    fn shared_count(&self, other: &SStructureTriple) -> usize {
        let a = self.sorted_vertices();
        let b = other.sorted_vertices();
        a.iter().filter(|v| b.contains(v)).count()
    }
}

/// All gadget-carrying 3-subsets of an ADMG plus a greedy selection of copies
/// that pairwise share at most one vertex (hence are edge-disjoint and toggle
/// independently).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SStructureSet {
    triples: Vec<SStructureTriple>,
    selection: Vec<usize>,
}

impl SStructureSet {
    /// One record per 3-subset that carries the gadget, in ascending subset
    /// order.
    pub fn triples(&self) -> &[SStructureTriple] {
        &self.triples
    }

    /// The count `m` of gadget-carrying 3-subsets.
    pub fn m(&self) -> usize {
        self.triples.len()
    }

    /// Indices into [`triples`](Self::triples) of the greedy disjoint
    /// selection.
    pub fn selection_indices(&self) -> &[usize] {
        &self.selection
    }

    pub fn selection(&self) -> impl Iterator<Item = &SStructureTriple> {
        self.selection.iter().map(|&i| &self.triples[i])
    }

    pub fn selection_len(&self) -> usize {
        self.selection.len()
    }
}

/// Scans all 3-subsets for labeled copies of the gadget (extra induced edges
/// are permitted; the shortcut edge is optional). For each subset the six
/// role assignments are tried in lexicographic order and the first match is
/// recorded. The disjoint selection is greedy in ascending subset order,
/// skipping any triple that shares two or more vertices with a selected one.
pub fn find_s_structures(g: &MixedGraph) -> Result<SStructureSet, ConstructError> {
    if g.kind() != GraphKind::Admg {
        return Err(ConstructError::NotAnAdmg);
    }
    let n = g.n();
    let mut triples = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            for c in (b + 1)..=n {
                let (a, b, c) = (VertexId::new(a), VertexId::new(b), VertexId::new(c));
                let perms = [
                    (a, b, c),
                    (a, c, b),
                    (b, a, c),
                    (b, c, a),
                    (c, a, b),
                    (c, b, a),
                ];
                for (v1, v2, v3) in perms {
                    if g.has_directed(v1, v2)
                        && g.has_directed(v2, v3)
                        && g.has_bidirected(v2, v3)
                    {
                        triples.push(SStructureTriple {
                            v1,
                            v2,
                            v3,
                            present: g.has_directed(v1, v3),
                        });
                        break;
                    }
                }
            }
        }
    }
    let mut selection: Vec<usize> = Vec::new();
    for (i, t) in triples.iter().enumerate() {
        if selection
            .iter()
            .all(|&j| t.shared_count(&triples[j]) <= 1)
        {
            selection.push(i);
        }
    }
    Ok(SStructureSet { triples, selection })
}

/// Adds the shortcut edge `v1 -> v3` if absent, deletes it if present. The
/// triple's gadget edges must exist in `g`; the result is acyclic (the path
/// `v1 -> v2 -> v3` already exists, so the shortcut cannot close a cycle) and
/// Markov-equivalent to `g`.
pub fn toggle_underdetermined_edge(
    g: &MixedGraph,
    triple: &SStructureTriple,
) -> Result<MixedGraph, ConstructError> {
    if g.kind() != GraphKind::Admg {
        return Err(ConstructError::NotAnAdmg);
    }
    let (v1, v2, v3) = (triple.v1, triple.v2, triple.v3);
    if !(g.contains_vertex(v1)
        && g.contains_vertex(v2)
        && g.contains_vertex(v3)
        && g.has_directed(v1, v2)
        && g.has_directed(v2, v3)
        && g.has_bidirected(v2, v3))
    {
        return Err(ConstructError::TripleNotAnSStructure);
    }
    let mut directed: Vec<(u32, u32)> = g
        .directed_edges()
        .iter()
        .map(|&(a, b)| (a.index(), b.index()))
        .collect();
    let shortcut = (v1.index(), v3.index());
    if g.has_directed(v1, v3) {
        directed.retain(|&e| e != shortcut);
    } else {
        directed.push(shortcut);
    }
    let bidirected: Vec<(u32, u32)> = g
        .bidirected_edges()
        .iter()
        .map(|&(a, b)| (a.index(), b.index()))
        .collect();
    Ok(MixedGraph::new(g.n(), &directed, &bidirected, GraphKind::Admg)
        .expect("toggling the shortcut of an embedded gadget keeps the graph acyclic"))
}

/// A set of vertex-disjoint directed cycles, each of length at least 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclePacking {
    cycles: Vec<Vec<VertexId>>,
}

impl CyclePacking {
    pub fn cycles(&self) -> &[Vec<VertexId>] {
        &self.cycles
    }

    /// The packing size `k`.
    pub fn k(&self) -> usize {
        self.cycles.len()
    }
}

/// Greedy vertex-disjoint cycle packing: repeatedly take a shortest directed
/// cycle of length at least 3 (scanning start vertices in ascending order,
/// lexicographically smallest path among the shortest through that vertex)
/// and delete its vertices. A lower bound on the maximum packing, which is
/// all a certificate needs.
pub fn cycle_packing(g: &MixedGraph) -> Result<CyclePacking, ConstructError> {
    if g.kind() != GraphKind::Dcg {
        return Err(ConstructError::NotADcg);
    }
    let n = g.n();
    let mut alive = VertexSet::full(n);
    let mut cycles = Vec::new();
    loop {
        let mut best: Option<Vec<VertexId>> = None;
        for v in g.vertices().filter(|&v| alive.contains(v)) {
            if let Some(c) = shortest_cycle_through(g, v, &alive) {
                let better = match &best {
                    None => true,
                    Some(b) => c.len() < b.len(),
                };
                if better {
                    best = Some(c);
                }
            }
        }
        let Some(cycle) = best else { break };
        for &v in &cycle {
            alive.remove(v);
        }
        cycles.push(cycle);
    }
    Ok(CyclePacking { cycles })
}

/// Shortest simple directed cycle of length >= 3 through `v` inside the live
/// set, as the lexicographically smallest realizing vertex list starting at
/// `v`. A cycle through `v` closes over some in-neighbor `u`; searching for
/// `v -> .. -> u` with the direct edge `(v, u)` banned keeps 2-cycles out
/// without hiding longer cycles behind them.
fn shortest_cycle_through(g: &MixedGraph, v: VertexId, alive: &VertexSet) -> Option<Vec<VertexId>> {
    let mut best: Option<Vec<VertexId>> = None;
    for u in g.parents(v).iter().filter(|&u| alive.contains(u)) {
        let banned = if g.has_directed(v, u) { Some((v, u)) } else { None };
        // Distance of every live vertex from v, skipping the banned edge.
        let dist = {
            let mut dist = alloc::vec![u32::MAX; g.n() as usize];
            dist[v.bit()] = 0;
            let mut frontier = alloc::vec![v];
            let mut next = Vec::new();
            let mut d = 0;
            while !frontier.is_empty() {
                d += 1;
                next.clear();
                for &x in &frontier {
                    for w in g.children(x).iter() {
                        if banned == Some((x, w)) {
                            continue;
                        }
                        if alive.contains(w) && dist[w.bit()] == u32::MAX {
                            dist[w.bit()] = d;
                            next.push(w);
                        }
                    }
                }
                core::mem::swap(&mut frontier, &mut next);
            }
            dist
        };
        if dist[u.bit()] == u32::MAX {
            continue;
        }
        let len = dist[u.bit()] + 1; // always >= 3: the length-1 route is banned
        if best.as_ref().is_some_and(|b| b.len() < len as usize) {
            continue;
        }
        // Lexicographically smallest shortest v -> u path: reverse-BFS
        // distances to u, then greedy descent picking the smallest child.
        let to_u = {
            let mut to_u = alloc::vec![u32::MAX; g.n() as usize];
            to_u[u.bit()] = 0;
            let mut frontier = alloc::vec![u];
            let mut next = Vec::new();
            let mut d = 0;
            while !frontier.is_empty() {
                d += 1;
                next.clear();
                for &x in &frontier {
                    for w in g.parents(x).iter() {
                        if banned == Some((w, x)) {
                            continue;
                        }
                        if alive.contains(w) && to_u[w.bit()] == u32::MAX {
                            to_u[w.bit()] = d;
                            next.push(w);
                        }
                    }
                }
                core::mem::swap(&mut frontier, &mut next);
            }
            to_u
        };
        let mut cycle = alloc::vec![v];
        let mut cur = v;
        for need in (0..len - 1).rev() {
            let next = g
                .children(cur)
                .iter()
                .find(|&w| {
                    alive.contains(w) && to_u[w.bit()] == need && banned != Some((cur, w))
                })
                .expect("a realizing path exists for the measured distance");
            cycle.push(next);
            cur = next;
        }
        let better = match &best {
            None => true,
            Some(b) => cycle.len() < b.len() || (cycle.len() == b.len() && cycle < *b),
        };
        if better {
            best = Some(cycle);
        }
    }
    best
}

/// Reverses the directed cycle `c = (v_1, ..., v_k)` and rewires every other
/// in-edge `w -> v_i` (including chords from cycle vertices) to `w -> v_{i-1}`,
/// indices mod `k`. Out-edges from cycle vertices to non-cycle targets are
/// untouched. All rewiring reads the original graph, so the construction is
/// simultaneous; should two produced edges ever coincide they merge into one.
pub fn reverse_cycle(g: &MixedGraph, c: &[VertexId]) -> Result<MixedGraph, ConstructError> {
    if g.kind() != GraphKind::Dcg {
        return Err(ConstructError::NotADcg);
    }
    let k = c.len();
    if k < 3 {
        return Err(ConstructError::CycleTooShort { len: k });
    }
    let mut seen = VertexSet::empty(g.n());
    for &v in c {
        if !g.contains_vertex(v) || seen.contains(v) {
            return Err(ConstructError::NotACycle);
        }
        seen.insert(v);
    }
    for i in 0..k {
        if !g.has_directed(c[i], c[(i + 1) % k]) {
            return Err(ConstructError::NotACycle);
        }
    }

    let mut pred = alloc::vec![None::<VertexId>; g.n() as usize];
    for i in 0..k {
        pred[c[(i + 1) % k].bit()] = Some(c[i]);
    }
    let edges: Vec<(u32, u32)> = g
        .directed_edges()
        .iter()
        .map(|&(a, b)| match pred[b.bit()] {
            Some(p) if p == a => (b.index(), a.index()),
            Some(p) => (a.index(), p.index()),
            None => (a.index(), b.index()),
        })
        .collect();
    Ok(MixedGraph::new(g.n(), &edges, &[], GraphKind::Dcg)
        .expect("cycle reversal preserves the simple-graph invariants"))
}

/// The certificate payload, one construction per graph kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificatePayload {
    Matching(ReversibleMatching),
    SStructures(SStructureSet),
    CyclePacking(CyclePacking),
}

/// A constructive lower bound on the size of a graph's Markov equivalence
/// class: the class has at least `2^log2_bound` members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundCertificate {
    pub payload: CertificatePayload,
    pub log2_bound: u32,
}

/// Computes the kind-appropriate certificate: layer-2 matching for DAGs
/// (bound = matching size), gadget triples for ADMGs (bound = disjoint
/// selection size), cycle packing for DCGs (bound = packing size).
pub fn certificate(g: &MixedGraph) -> LowerBoundCertificate {
    match g.kind() {
        GraphKind::Dag => {
            let m = layer2_matching(g).expect("kind was checked");
            LowerBoundCertificate {
                log2_bound: m.len() as u32,
                payload: CertificatePayload::Matching(m),
            }
        }
        GraphKind::Admg => {
            let s = find_s_structures(g).expect("kind was checked");
            LowerBoundCertificate {
                log2_bound: s.selection_len() as u32,
                payload: CertificatePayload::SStructures(s),
            }
        }
        GraphKind::Dcg => {
            let c = cycle_packing(g).expect("kind was checked");
            LowerBoundCertificate {
                log2_bound: c.k() as u32,
                payload: CertificatePayload::CyclePacking(c),
            }
        }
    }
}
