//! d-separation for DAGs, ADMGs, and DCGs.
//!
//! Paths here are walks: they may revisit vertices and edges. A walk from `x`
//! to `y` is active given `Z` if every interior non-collider avoids `Z` and
//! every interior collider is in `Z` or has a descendant in `Z`. Two vertices
//! are d-connected given `Z` when an active walk exists.
//!
//! Two independent deciders are provided:
//!
//! - [`is_d_connected`]: breadth-first search over `(vertex, head-in)` states,
//!   where `head-in` records whether the edge used to arrive carries an
//!   arrowhead at the current vertex. Exact for walk semantics and fast.
//! - [`is_d_connected_oracle`]: exhaustive depth-first enumeration of walks in
//!   which no (edge, traversal direction, head-in state) triple repeats. Any
//!   shortest active walk repeats no triple, so this bounded enumeration is
//!   also exact. It is deliberately coded without the state-graph shortcut and
//!   serves as the correctness oracle for the BFS.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{MixedGraph, VertexId, VertexSet};

/// Default vertex-count cap for [`dsep_signature`].
pub const DEFAULT_SIGNATURE_CAP: u32 = 14;
/// Default vertex-count cap for [`is_d_connected_oracle`].
pub const DEFAULT_ORACLE_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DsepError {
    /// The query endpoints coincide, overlap the conditioning set, or lie
    /// outside the graph.
    InvalidQuery,
    /// The graph exceeds the signature cap.
    GraphTooLarge { n: u32, cap: u32 },
    /// The graph exceeds the walk-oracle cap.
    GraphTooLargeForOracle { n: u32, cap: u32 },
}

impl fmt::Display for DsepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DsepError::InvalidQuery => write!(f, "invalid d-separation query"),
            DsepError::GraphTooLarge { n, cap } => {
                write!(f, "graph with {n} vertices exceeds signature cap {cap}")
            }
            DsepError::GraphTooLargeForOracle { n, cap } => {
                write!(f, "graph with {n} vertices exceeds walk-oracle cap {cap}")
            }
        }
    }
}

impl core::error::Error for DsepError {}

/// A single d-separation query: are `x` and `y` d-connected given `z`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsepQuery {
    x: VertexId,
    y: VertexId,
    z: VertexSet,
}

impl DsepQuery {
    /// Requires `x != y` and `z` disjoint from `{x, y}`.
    pub fn new(x: VertexId, y: VertexId, z: VertexSet) -> Result<Self, DsepError> {
        if x == y || z.contains(x) || z.contains(y) {
            return Err(DsepError::InvalidQuery);
        }
        Ok(DsepQuery { x, y, z })
    }

    pub fn x(&self) -> VertexId {
        self.x
    }

    pub fn y(&self) -> VertexId {
        self.y
    }

    pub fn z(&self) -> &VertexSet {
        &self.z
    }

    fn check_against(&self, g: &MixedGraph) -> Result<(), DsepError> {
        if !g.contains_vertex(self.x) || !g.contains_vertex(self.y) || self.z.universe() != g.n() {
            return Err(DsepError::InvalidQuery);
        }
        Ok(())
    }
}

impl fmt::Display for DsepQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} y={} z={}", self.x, self.y, self.z)
    }
}

/// Reusable d-connection decider for one graph.
///
/// Descendant sets are precomputed once; query scratch space is reused, which
/// matters when filling full signatures (hundreds of thousands of queries).
pub struct DsepEngine<'g> {
    g: &'g MixedGraph,
    desc: Vec<VertexSet>,
    in_z: Vec<bool>,
    in_d: Vec<bool>,
    seen_head: Vec<bool>,
    seen_tail: Vec<bool>,
    stack: Vec<(VertexId, bool)>,
}

impl<'g> DsepEngine<'g> {
    pub fn new(g: &'g MixedGraph) -> Self {
        let n = g.n() as usize;
        let desc = g.vertices().map(|v| g.descendants(v)).collect();
        DsepEngine {
            g,
            desc,
            in_z: vec![false; n],
            in_d: vec![false; n],
            seen_head: vec![false; n],
            seen_tail: vec![false; n],
            stack: Vec::new(),
        }
    }

    /// Decides the query, validating it against the graph first.
    pub fn is_d_connected(&mut self, q: &DsepQuery) -> Result<bool, DsepError> {
        q.check_against(self.g)?;
        Ok(self.query(q.x, q.y, &q.z))
    }

    /// Core reachability. Caller guarantees the query is valid for the graph.
    pub(crate) fn query(&mut self, x: VertexId, y: VertexId, z: &VertexSet) -> bool {
        let g = self.g;
        for v in g.vertices() {
            let b = v.bit();
            self.in_z[b] = z.contains(v);
            // d = in Z, or has a descendant in Z: the collider-activation set.
            self.in_d[b] = self.in_z[b] || self.desc[b].intersects(z);
            self.seen_head[b] = false;
            self.seen_tail[b] = false;
        }
        self.stack.clear();

        // Departures from x are unconstrained: x is a walk endpoint.
        if self.leave_unblocked(x, y) {
            return true;
        }

        while let Some((u, head_in)) = self.stack.pop() {
            let ub = u.bit();
            if head_in {
                // Leaving through the tail of an out-edge keeps u a
                // non-collider; u must avoid Z.
                if !self.in_z[ub] {
                    for t in g.children(u).iter() {
                        if t == y {
                            return true;
                        }
                        self.push(t, true);
                    }
                }
                // Leaving through another arrowhead makes u a collider; u must
                // activate (be in Z or have a descendant in Z).
                if self.in_d[ub] {
                    for t in g.parents(u).iter() {
                        if t == y {
                            return true;
                        }
                        self.push(t, false);
                    }
                    for t in g.spouses(u).iter() {
                        if t == y {
                            return true;
                        }
                        self.push(t, true);
                    }
                }
            } else if !self.in_z[ub] {
                // Arrived through a tail: u is a non-collider whichever way we
                // leave, so only the Z test applies.
                if self.leave_unblocked(u, y) {
                    return true;
                }
            }
        }
        false
    }

    /// Pushes all departures from `u` without any interior-vertex condition.
    /// Returns true if `y` is reached directly.
    fn leave_unblocked(&mut self, u: VertexId, y: VertexId) -> bool {
        let g = self.g;
        for t in g.children(u).iter() {
            if t == y {
                return true;
            }
            self.push(t, true);
        }
        for t in g.parents(u).iter() {
            if t == y {
                return true;
            }
            self.push(t, false);
        }
        for t in g.spouses(u).iter() {
            if t == y {
                return true;
            }
            self.push(t, true);
        }
        false
    }

    #[inline]
    fn push(&mut self, v: VertexId, head_in: bool) {
        let seen = if head_in {
            &mut self.seen_head
        } else {
            &mut self.seen_tail
        };
        if !seen[v.bit()] {
            seen[v.bit()] = true;
            self.stack.push((v, head_in));
        }
    }
}

/// True iff an active walk from `q.x` to `q.y` given `q.z` exists in `g`.
pub fn is_d_connected(g: &MixedGraph, q: &DsepQuery) -> Result<bool, DsepError> {
    DsepEngine::new(g).is_d_connected(q)
}

/// Exhaustive-walk oracle for [`is_d_connected`], capped at
/// [`DEFAULT_ORACLE_CAP`] vertices.
pub fn is_d_connected_oracle(g: &MixedGraph, q: &DsepQuery) -> Result<bool, DsepError> {
    is_d_connected_oracle_with_cap(g, q, DEFAULT_ORACLE_CAP)
}

/// Exhaustive-walk oracle with an explicit vertex-count cap.
pub fn is_d_connected_oracle_with_cap(
    g: &MixedGraph,
    q: &DsepQuery,
    cap: u32,
) -> Result<bool, DsepError> {
    if g.n() > cap {
        return Err(DsepError::GraphTooLargeForOracle { n: g.n(), cap });
    }
    q.check_against(g)?;

    // One traversal move per (edge, direction). Along a directed edge the
    // walk arrives head-first; against it, it arrives tail-first and the
    // arrowhead sits at the departure vertex.
    let n = g.n() as usize;
    let mut all_moves: Vec<(VertexId, WalkMove)> = Vec::new();
    for &(a, b) in g.directed_edges() {
        all_moves.push((a, WalkMove { to: b, head_out: false, arrival_head_in: true }));
        all_moves.push((b, WalkMove { to: a, head_out: true, arrival_head_in: false }));
    }
    for &(a, b) in g.bidirected_edges() {
        all_moves.push((a, WalkMove { to: b, head_out: true, arrival_head_in: true }));
        all_moves.push((b, WalkMove { to: a, head_out: true, arrival_head_in: true }));
    }
    let id = all_moves.len();
    let mut moves_from: Vec<Vec<(usize, WalkMove)>> = (0..n).map(|_| Vec::new()).collect();
    for (i, (from, m)) in all_moves.into_iter().enumerate() {
        moves_from[from.bit()].push((i, m));
    }

    // Collider activation set, straight from the definition.
    let in_z: Vec<bool> = g.vertices().map(|v| q.z.contains(v)).collect();
    let in_d: Vec<bool> = g
        .vertices()
        .map(|v| in_z[v.bit()] || g.descendants(v).intersects(&q.z))
        .collect();

    let mut used = vec![false; id * 2];
    Ok(walk_dfs(
        q.x, None, q.y, &moves_from, &in_z, &in_d, &mut used,
    ))
}

struct WalkMove {
    to: VertexId,
    head_out: bool,
    arrival_head_in: bool,
}

/// Depth-first over walks; a (move, departure-state) triple may appear at
/// most once per walk. Shortest active walks never repeat one, so the pruning
/// loses no connectivity.
fn walk_dfs(
    u: VertexId,
    head_in: Option<bool>,
    y: VertexId,
    moves_from: &[Vec<(usize, WalkMove)>],
    in_z: &[bool],
    in_d: &[bool],
    used: &mut [bool],
) -> bool {
    for &(id, ref m) in &moves_from[u.bit()] {
        if let Some(s) = head_in {
            // Interior-vertex condition at u: collider when both the arrival
            // and the departure edge point into u.
            let ok = if s && m.head_out {
                in_d[u.bit()]
            } else {
                !in_z[u.bit()]
            };
            if !ok {
                continue;
            }
        }
        let triple = id * 2 + head_in.unwrap_or(false) as usize;
        if used[triple] {
            continue;
        }
        if m.to == y {
            return true;
        }
        used[triple] = true;
        if walk_dfs(m.to, Some(m.arrival_head_in), y, moves_from, in_z, in_d, used) {
            return true;
        }
        used[triple] = false;
    }
    false
}

/// The full table of d-connection answers for every unordered vertex pair and
/// every conditioning set: the ground-truth Markov-equivalence fingerprint.
///
/// Canonical layout: pairs `(x, y)` with `x < y` in lexicographic order; for
/// each pair the `2^(n-2)` subsets of the remaining vertices, ranked as a
/// bitmask over them in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DsepSignature {
    n: u32,
    bits: Vec<u64>,
}

impl DsepSignature {
    /// Number of vertices of the underlying graph.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total number of table entries: `C(n,2) * 2^(n-2)`.
    pub fn len(&self) -> usize {
        let n = self.n as usize;
        n * (n - 1) / 2 * (1usize << (n.max(2) - 2))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of d-connected entries.
    pub fn connected_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn pair_rank(n: u32, x: VertexId, y: VertexId) -> usize {
        let (x, y) = (x.index() as usize, y.index() as usize);
        debug_assert!(x < y);
        let n = n as usize;
        (x - 1) * (2 * n - x) / 2 + (y - x - 1)
    }

    fn entry_index(&self, x: VertexId, y: VertexId, z: &VertexSet) -> usize {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        let mut z_rank = 0usize;
        let mut pos = 0usize;
        for v in (1..=self.n).map(VertexId::new) {
            if v == x || v == y {
                continue;
            }
            if z.contains(v) {
                z_rank |= 1 << pos;
            }
            pos += 1;
        }
        Self::pair_rank(self.n, x, y) * (1usize << (self.n.max(2) - 2)) + z_rank
    }

    /// Table lookup for a single query.
    pub fn is_connected(&self, x: VertexId, y: VertexId, z: &VertexSet) -> bool {
        debug_assert_eq!(z.universe(), self.n, "conditioning set universe mismatch");
        let i = self.entry_index(x, y, z);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// The first query (in canonical order) on which the two signatures
    /// disagree, if any. Useful for failure diagnostics.
    pub fn first_difference(&self, other: &DsepSignature) -> Option<DsepQuery> {
        if self.n != other.n {
            return None;
        }
        let n = self.n;
        for x in 1..n {
            for y in (x + 1)..=n {
                let (x, y) = (VertexId::new(x), VertexId::new(y));
                for z_rank in 0..(1usize << (n.max(2) - 2)) {
                    let z = Self::z_from_rank(n, x, y, z_rank);
                    if self.is_connected(x, y, &z) != other.is_connected(x, y, &z) {
                        return Some(DsepQuery::new(x, y, z).expect("constructed query is valid"));
                    }
                }
            }
        }
        None
    }

    fn z_from_rank(n: u32, x: VertexId, y: VertexId, z_rank: usize) -> VertexSet {
        let mut z = VertexSet::empty(n);
        let mut pos = 0usize;
        for v in (1..=n).map(VertexId::new) {
            if v == x || v == y {
                continue;
            }
            if z_rank >> pos & 1 == 1 {
                z.insert(v);
            }
            pos += 1;
        }
        z
    }
}

/// Fills the full d-separation table of `g`, capped at
/// [`DEFAULT_SIGNATURE_CAP`] vertices.
pub fn dsep_signature(g: &MixedGraph) -> Result<DsepSignature, DsepError> {
    dsep_signature_with_cap(g, DEFAULT_SIGNATURE_CAP)
}

/// Fills the full d-separation table with an explicit vertex-count cap.
///
/// The table is produced in canonical order regardless of evaluation
/// strategy, so outputs are reproducible byte for byte.
pub fn dsep_signature_with_cap(g: &MixedGraph, cap: u32) -> Result<DsepSignature, DsepError> {
    let n = g.n();
    if n > cap {
        return Err(DsepError::GraphTooLarge { n, cap });
    }
    let subsets = 1usize << (n.max(2) - 2);
    let entries = (n as usize) * (n as usize - 1) / 2 * subsets;
    let mut bits = vec![0u64; entries.div_ceil(64)];
    let mut engine = DsepEngine::new(g);
    let mut idx = 0usize;
    for x in 1..n {
        for y in (x + 1)..=n {
            let (x, y) = (VertexId::new(x), VertexId::new(y));
            for z_rank in 0..subsets {
                let z = DsepSignature::z_from_rank(n, x, y, z_rank);
                if engine.query(x, y, &z) {
                    bits[idx / 64] |= 1 << (idx % 64);
                }
                idx += 1;
            }
        }
    }
    Ok(DsepSignature { n, bits })
}
