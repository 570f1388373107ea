//! Immutable directed mixed graphs.
//!
//! A [`MixedGraph`] is the single representation for all three graph kinds:
//! DAGs (directed edges, acyclic), ADMGs (directed part acyclic, bidirected
//! edges allowed, and a directed and a bidirected edge may coexist on the same
//! pair), and DCGs (directed edges only, cycles allowed). All validation
//! happens at construction; afterwards a graph is immutable and safe to share
//! across threads.
//!
//! Vertices are the integers `1..=n`; [`VertexSet`] is a fixed-width bitset
//! over that range, so set operations are word-parallel for the small graphs
//! the brute-force oracles work on while still scaling to the thousands of
//! vertices the sampling experiments use.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A 1-based vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    /// Wraps a 1-based index. Panics on 0; range checks against a concrete
    /// graph happen at graph construction.
    #[inline]
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "vertex indices are 1-based");
        VertexId(index)
    }

    /// The 1-based index.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// The 0-based bit position used by [`VertexSet`].
    #[inline]
    pub(crate) fn bit(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub(crate) fn from_bit(bit: usize) -> Self {
        VertexId(bit as u32 + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of vertices of a graph on `n` vertices, backed by a bitset.
///
/// Iteration is always in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    n: u32,
    bits: Vec<u64>,
}

impl VertexSet {
    /// The empty set over `1..=n`.
    pub fn empty(n: u32) -> Self {
        VertexSet {
            n,
            bits: vec![0u64; Self::words(n)],
        }
    }

    /// The full set `{1, ..., n}`.
    pub fn full(n: u32) -> Self {
        let mut s = Self::empty(n);
        for v in 1..=n {
            s.insert(VertexId::new(v));
        }
        s
    }

    /// Builds a set from 1-based indices. Panics if any index is out of range.
    pub fn from_indices(n: u32, members: &[u32]) -> Self {
        let mut s = Self::empty(n);
        for &m in members {
            s.insert(VertexId::new(m));
        }
        s
    }

    fn words(n: u32) -> usize {
        (n as usize).div_ceil(64)
    }

    /// Size of the universe `1..=n` this set ranges over.
    #[inline]
    pub fn universe(&self) -> u32 {
        self.n
    }

    /// Inserts a vertex. Panics if the index exceeds the universe.
    #[inline]
    pub fn insert(&mut self, v: VertexId) {
        assert!(v.index() <= self.n, "vertex {} out of range 1..={}", v, self.n);
        let b = v.bit();
        self.bits[b / 64] |= 1u64 << (b % 64);
    }

    /// Removes a vertex if present.
    #[inline]
    pub fn remove(&mut self, v: VertexId) {
        if v.index() <= self.n {
            let b = v.bit();
            self.bits[b / 64] &= !(1u64 << (b % 64));
        }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        if v.index() > self.n {
            return false;
        }
        let b = v.bit();
        self.bits[b / 64] >> (b % 64) & 1 == 1
    }

    /// Number of members.
    pub fn len(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// In-place union. Panics if the universes differ.
    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.n, other.n, "vertex set universes differ");
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n, "vertex set universes differ");
        let mut s = self.clone();
        for (a, b) in s.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        s
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.n, other.n, "vertex set universes differ");
        let mut s = self.clone();
        for (a, b) in s.bits.iter_mut().zip(&other.bits) {
            *a &= !b;
        }
        s
    }

    /// True iff the sets share at least one member.
    pub fn intersects(&self, other: &VertexSet) -> bool {
        assert_eq!(self.n, other.n, "vertex set universes differ");
        self.bits.iter().zip(&other.bits).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        assert_eq!(self.n, other.n, "vertex set universes differ");
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Iterates members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(VertexId::from_bit(wi * 64 + b))
                }
            })
        })
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<VertexId> {
        self.iter().next()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The three graph kinds this crate distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphKind {
    /// Directed acyclic graph: no bidirected edges, no directed cycles.
    Dag,
    /// Acyclic directed mixed graph: the directed part is acyclic; bidirected
    /// edges are allowed, including alongside a directed edge on the same
    /// pair.
    Admg,
    /// Directed cyclic graph: directed edges only, cycles (including
    /// 2-cycles) permitted.
    Dcg,
}

impl GraphKind {
    /// Lowercase name as used by the text format (`dag`, `admg`, `dcg`).
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Dag => "dag",
            GraphKind::Admg => "admg",
            GraphKind::Dcg => "dcg",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors raised by graph construction and the layer-decomposition operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// An edge endpoint lies outside `1..=n`.
    VertexOutOfRange { vertex: u32, n: u32 },
    /// An edge connects a vertex to itself.
    SelfLoop { vertex: u32 },
    /// A directed cycle in a kind (DAG/ADMG) that requires acyclicity.
    CycleInAcyclicKind,
    /// A bidirected edge in a kind (DAG/DCG) that forbids them.
    BidirectedInWrongKind { kind: GraphKind },
    /// The directed part is cyclic but the operation needs it acyclic.
    CyclicInput,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range 1..={n}")
            }
            GraphError::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            GraphError::CycleInAcyclicKind => {
                write!(f, "directed cycle in a graph kind that requires acyclicity")
            }
            GraphError::BidirectedInWrongKind { kind } => {
                write!(f, "bidirected edge not allowed in a {kind} graph")
            }
            GraphError::CyclicInput => write!(f, "operation requires an acyclic directed part"),
        }
    }
}

impl core::error::Error for GraphError {}

/// An immutable directed mixed graph on vertices `1..=n`.
///
/// Directed edges are stored as ordered pairs `(tail, head)` and bidirected
/// edges as unordered pairs with the smaller index first; both lists are
/// sorted and deduplicated, which is the canonical form used for equality,
/// ordering, and serialization.
#[derive(Debug, Clone)]
pub struct MixedGraph {
    n: u32,
    kind: GraphKind,
    directed: Vec<(VertexId, VertexId)>,
    bidirected: Vec<(VertexId, VertexId)>,
    parents: Vec<VertexSet>,
    children: Vec<VertexSet>,
    spouses: Vec<VertexSet>,
}

impl PartialEq for MixedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.kind == other.kind
            && self.directed == other.directed
            && self.bidirected == other.bidirected
    }
}

impl Eq for MixedGraph {}

impl PartialOrd for MixedGraph {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by `n`, kind, then the directed and bidirected edge lists
/// lexicographically. Used to deduplicate and sort enumeration output.
impl Ord for MixedGraph {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.n, self.kind, &self.directed, &self.bidirected).cmp(&(
            other.n,
            other.kind,
            &other.directed,
            &other.bidirected,
        ))
    }
}

impl MixedGraph {
    /// Builds a validated graph from 1-based edge lists.
    ///
    /// Duplicate edge entries collapse to one; bidirected pairs are stored
    /// with the smaller endpoint first.
    pub fn new(
        n: u32,
        directed: &[(u32, u32)],
        bidirected: &[(u32, u32)],
        kind: GraphKind,
    ) -> Result<Self, GraphError> {
        assert!(n >= 1, "graphs have at least one vertex");
        let check = |v: u32| -> Result<(), GraphError> {
            if v < 1 || v > n {
                Err(GraphError::VertexOutOfRange { vertex: v, n })
            } else {
                Ok(())
            }
        };

        let mut dir = Vec::with_capacity(directed.len());
        for &(a, b) in directed {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            dir.push((VertexId::new(a), VertexId::new(b)));
        }
        dir.sort_unstable();
        dir.dedup();

        let mut bi = Vec::with_capacity(bidirected.len());
        for &(a, b) in bidirected {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            bi.push((VertexId::new(lo), VertexId::new(hi)));
        }
        bi.sort_unstable();
        bi.dedup();

        if !bi.is_empty() && kind != GraphKind::Admg {
            return Err(GraphError::BidirectedInWrongKind { kind });
        }

        let mut parents = vec![VertexSet::empty(n); n as usize];
        let mut children = vec![VertexSet::empty(n); n as usize];
        let mut spouses = vec![VertexSet::empty(n); n as usize];
        for &(a, b) in &dir {
            children[a.bit()].insert(b);
            parents[b.bit()].insert(a);
        }
        for &(a, b) in &bi {
            spouses[a.bit()].insert(b);
            spouses[b.bit()].insert(a);
        }

        let g = MixedGraph {
            n,
            kind,
            directed: dir,
            bidirected: bi,
            parents,
            children,
            spouses,
        };

        if matches!(kind, GraphKind::Dag | GraphKind::Admg) && !g.is_acyclic() {
            return Err(GraphError::CycleInAcyclicKind);
        }
        Ok(g)
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Directed edges `(tail, head)` in canonical (sorted) order.
    #[inline]
    pub fn directed_edges(&self) -> &[(VertexId, VertexId)] {
        &self.directed
    }

    /// Bidirected edges `(lo, hi)` in canonical (sorted) order.
    #[inline]
    pub fn bidirected_edges(&self) -> &[(VertexId, VertexId)] {
        &self.bidirected
    }

    /// Iterates all vertices `1..=n`.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.n).map(VertexId::new)
    }

    /// Checks that a vertex belongs to this graph.
    #[inline]
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() <= self.n
    }

    #[inline]
    pub fn has_directed(&self, tail: VertexId, head: VertexId) -> bool {
        self.contains_vertex(tail)
            && self.contains_vertex(head)
            && self.children[tail.bit()].contains(head)
    }

    #[inline]
    pub fn has_bidirected(&self, a: VertexId, b: VertexId) -> bool {
        self.contains_vertex(a) && self.contains_vertex(b) && self.spouses[a.bit()].contains(b)
    }

    /// Vertices `u` with a directed edge `u -> v`. Bidirected edges do not
    /// contribute.
    #[inline]
    pub fn parents(&self, v: VertexId) -> &VertexSet {
        &self.parents[v.bit()]
    }

    /// Vertices `w` with a directed edge `v -> w`.
    #[inline]
    pub fn children(&self, v: VertexId) -> &VertexSet {
        &self.children[v.bit()]
    }

    /// Vertices connected to `v` by a bidirected edge.
    #[inline]
    pub fn spouses(&self, v: VertexId) -> &VertexSet {
        &self.spouses[v.bit()]
    }

    /// True iff the directed part has no directed cycle. Bidirected edges are
    /// ignored; a 2-cycle `v -> w`, `w -> v` counts as a cycle.
    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on the directed part.
        let n = self.n as usize;
        let mut indeg: Vec<u32> = (0..n)
            .map(|i| self.parents[i].len())
            .collect();
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0usize;
        while let Some(u) = queue.pop() {
            removed += 1;
            for w in self.children[u].iter() {
                indeg[w.bit()] -= 1;
                if indeg[w.bit()] == 0 {
                    queue.push(w.bit());
                }
            }
        }
        removed == n
    }

    /// All vertices `x != v` reachable from `v` along directed edges. `v`
    /// itself is never a member, even on a cycle through `v`.
    pub fn descendants(&self, v: VertexId) -> VertexSet {
        let mut seen = VertexSet::empty(self.n);
        let mut stack: Vec<VertexId> = self.children[v.bit()].iter().collect();
        for &c in &stack {
            seen.insert(c);
        }
        while let Some(u) = stack.pop() {
            for w in self.children[u.bit()].iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.remove(v);
        seen
    }

    /// The subgraph induced by the nonempty set `w`, with vertices relabeled
    /// `1..=|w|` preserving ascending order. The kind is preserved.
    pub fn induced_subgraph(&self, w: &VertexSet) -> MixedGraph {
        assert_eq!(w.universe(), self.n, "vertex set universe mismatch");
        assert!(!w.is_empty(), "graphs have at least one vertex");
        let mut relabel = vec![0u32; self.n as usize + 1];
        let mut k = 0u32;
        for v in w.iter() {
            k += 1;
            relabel[v.index() as usize] = k;
        }
        let directed: Vec<(u32, u32)> = self
            .directed
            .iter()
            .filter(|(a, b)| w.contains(*a) && w.contains(*b))
            .map(|(a, b)| (relabel[a.index() as usize], relabel[b.index() as usize]))
            .collect();
        let bidirected: Vec<(u32, u32)> = self
            .bidirected
            .iter()
            .filter(|(a, b)| w.contains(*a) && w.contains(*b))
            .map(|(a, b)| (relabel[a.index() as usize], relabel[b.index() as usize]))
            .collect();
        MixedGraph::new(k, &directed, &bidirected, self.kind)
            .expect("induced subgraph of a valid graph is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{chain3, layered11, s_graph};
    use alloc::vec;

    #[test]
    fn chain_is_valid() {
        let g = chain3();
        assert_eq!(g.n(), 3);
        assert_eq!(g.directed_edges().len(), 2);
        assert!(g.is_acyclic());
    }

    #[test]
    fn s_graph_is_valid_admg() {
        let g = s_graph();
        assert_eq!(g.kind(), GraphKind::Admg);
        assert!(g.has_directed(VertexId::new(2), VertexId::new(3)));
        assert!(g.has_bidirected(VertexId::new(2), VertexId::new(3)));
    }

    #[test]
    fn three_cycle_rejected_for_dag() {
        let r = MixedGraph::new(3, &[(1, 2), (2, 3), (3, 1)], &[], GraphKind::Dag);
        assert_eq!(r.unwrap_err(), GraphError::CycleInAcyclicKind);
    }

    #[test]
    fn two_cycle_rejected_for_admg_but_fine_for_dcg() {
        let r = MixedGraph::new(2, &[(1, 2), (2, 1)], &[], GraphKind::Admg);
        assert_eq!(r.unwrap_err(), GraphError::CycleInAcyclicKind);
        let g = MixedGraph::new(2, &[(1, 2), (2, 1)], &[], GraphKind::Dcg).unwrap();
        assert!(!g.is_acyclic());
    }

    #[test]
    fn bidirected_rejected_outside_admg() {
        for kind in [GraphKind::Dag, GraphKind::Dcg] {
            let r = MixedGraph::new(3, &[], &[(1, 2)], kind);
            assert_eq!(r.unwrap_err(), GraphError::BidirectedInWrongKind { kind });
        }
    }

    #[test]
    fn range_and_self_loop_checks() {
        assert_eq!(
            MixedGraph::new(3, &[(1, 4)], &[], GraphKind::Dag).unwrap_err(),
            GraphError::VertexOutOfRange { vertex: 4, n: 3 }
        );
        assert_eq!(
            MixedGraph::new(3, &[(2, 2)], &[], GraphKind::Dag).unwrap_err(),
            GraphError::SelfLoop { vertex: 2 }
        );
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = MixedGraph::new(3, &[(1, 2), (1, 2)], &[(2, 3), (3, 2)], GraphKind::Admg).unwrap();
        assert_eq!(g.directed_edges().len(), 1);
        assert_eq!(g.bidirected_edges().len(), 1);
        assert_eq!(
            g.bidirected_edges()[0],
            (VertexId::new(2), VertexId::new(3))
        );
    }

    #[test]
    fn parents_and_children() {
        let g = layered11();
        let pa6: Vec<u32> = g.parents(VertexId::new(6)).iter().map(|v| v.index()).collect();
        assert_eq!(pa6, vec![2, 4]);
        assert!(g.parents(VertexId::new(3)).is_empty());

        let s = s_graph();
        let pa3: Vec<u32> = s.parents(VertexId::new(3)).iter().map(|v| v.index()).collect();
        assert_eq!(pa3, vec![2], "the bidirected edge must not add a parent");
    }

    #[test]
    fn descendants_basics() {
        let g = chain3();
        let d: Vec<u32> = g.descendants(VertexId::new(1)).iter().map(|v| v.index()).collect();
        assert_eq!(d, vec![2, 3]);

        let c = MixedGraph::new(3, &[(1, 2), (2, 3), (3, 1)], &[], GraphKind::Dcg).unwrap();
        let d: Vec<u32> = c.descendants(VertexId::new(1)).iter().map(|v| v.index()).collect();
        assert_eq!(d, vec![2, 3], "cycle vertex excluded from its own descendants");

        let g = layered11();
        let d: Vec<u32> = g.descendants(VertexId::new(5)).iter().map(|v| v.index()).collect();
        assert_eq!(d, vec![8, 11]);
    }

    #[test]
    fn induced_subgraph_relabels_ascending() {
        // Restricting 1->2->3 plus 1->3 to {1,3} keeps only the old 1->3,
        // which becomes 1->2 after relabeling.
        let g = MixedGraph::new(3, &[(1, 2), (2, 3), (1, 3)], &[], GraphKind::Dag).unwrap();
        let w = VertexSet::from_indices(3, &[1, 3]);
        let sub = g.induced_subgraph(&w);
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.directed_edges(), &[(VertexId::new(1), VertexId::new(2))]);

        // Identity restriction is the identity.
        let full = g.induced_subgraph(&VertexSet::full(3));
        assert_eq!(full, g);

        // {2,5,8} of the layered graph is a chain after relabeling.
        let g = layered11();
        let sub = g.induced_subgraph(&VertexSet::from_indices(11, &[2, 5, 8]));
        assert_eq!(
            sub.directed_edges(),
            &[
                (VertexId::new(1), VertexId::new(2)),
                (VertexId::new(2), VertexId::new(3))
            ]
        );
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_indices(70, &[1, 64, 65, 70]);
        let b = VertexSet::from_indices(70, &[64, 70]);
        assert!(b.is_subset_of(&a));
        assert_eq!(a.difference(&b).len(), 2);
        assert_eq!(a.intersection(&b), b);
        assert!(a.intersects(&b));
        let members: Vec<u32> = a.iter().map(|v| v.index()).collect();
        assert_eq!(members, vec![1, 64, 65, 70]);
        assert_eq!(a.first(), Some(VertexId::new(1)));
    }
}
