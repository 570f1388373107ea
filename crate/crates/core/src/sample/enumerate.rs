//! Exhaustive graph enumeration and an independent DAG-count oracle.

use alloc::vec::Vec;

use super::{acyclic_edge_list, SampleError};
use crate::graph::{GraphKind, MixedGraph};

/// Enumeration caps: `2^(n(n-1))` directed patterns at n = 5 is about a
/// million graphs; ADMGs multiply in `2^C(n,2)` bidirected patterns, so they
/// cap one vertex earlier.
const ENUM_CAP_DAG_DCG: u32 = 5;
const ENUM_CAP_ADMG: u32 = 4;

/// Streams every graph of the given kind on `n` vertices exactly once, in
/// canonical order (ascending directed edge mask, then ascending bidirected
/// mask; mask bits follow lexicographic pair order).
pub fn enumerate_graphs(n: u32, kind: GraphKind) -> Result<GraphEnumerator, SampleError> {
    let cap = match kind {
        GraphKind::Admg => ENUM_CAP_ADMG,
        _ => ENUM_CAP_DAG_DCG,
    };
    if n > cap {
        return Err(SampleError::GraphTooLargeForOracle { n, cap });
    }
    let ordered: Vec<(u32, u32)> = (1..=n)
        .flat_map(|v| (1..=n).filter(move |&w| w != v).map(move |w| (v, w)))
        .collect();
    let unordered: Vec<(u32, u32)> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect();
    let bid_end = match kind {
        GraphKind::Admg => 1u64 << unordered.len(),
        _ => 1,
    };
    Ok(GraphEnumerator {
        n,
        kind,
        ordered,
        unordered,
        dir_mask: 0,
        dir_end: 1u64 << (n * (n - 1)),
        bid_mask: 0,
        bid_end,
        dir_edges: Vec::new(),
        dir_valid: false,
    })
}

/// Iterator over all graphs of one kind. See [`enumerate_graphs`].
pub struct GraphEnumerator {
    n: u32,
    kind: GraphKind,
    ordered: Vec<(u32, u32)>,
    unordered: Vec<(u32, u32)>,
    dir_mask: u64,
    dir_end: u64,
    bid_mask: u64,
    bid_end: u64,
    dir_edges: Vec<(u32, u32)>,
    dir_valid: bool,
}

impl GraphEnumerator {
    fn load_dir(&mut self, mask: u64) -> bool {
        self.dir_edges.clear();
        for (i, &e) in self.ordered.iter().enumerate() {
            if mask >> i & 1 == 1 {
                self.dir_edges.push(e);
            }
        }
        match self.kind {
            GraphKind::Dcg => true,
            _ => acyclic_edge_list(self.n, &self.dir_edges),
        }
    }
}

impl Iterator for GraphEnumerator {
    type Item = MixedGraph;

    fn next(&mut self) -> Option<MixedGraph> {
        loop {
            if !self.dir_valid {
                if self.dir_mask >= self.dir_end {
                    return None;
                }
                let mask = self.dir_mask;
                self.dir_mask += 1;
                if !self.load_dir(mask) {
                    continue;
                }
                self.dir_valid = true;
                self.bid_mask = 0;
            }
            if self.bid_mask >= self.bid_end {
                self.dir_valid = false;
                continue;
            }
            let bid: Vec<(u32, u32)> = self
                .unordered
                .iter()
                .enumerate()
                .filter(|(i, _)| self.bid_mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            self.bid_mask += 1;
            let g = MixedGraph::new(self.n, &self.dir_edges, &bid, self.kind)
                .expect("enumerated edge pattern was pre-validated");
            return Some(g);
        }
    }
}

/// Number of labeled DAGs on `n` vertices, by the inclusion-exclusion
/// recurrence `a_n = sum_{k=1}^{n} (-1)^{k+1} C(n,k) 2^{k(n-k)} a_{n-k}`
/// with `a_0 = 1`. Exact in integer arithmetic; requires `n <= 12`.
pub fn dag_count_oracle(n: u32) -> u128 {
    assert!(n <= 12, "exact integer arithmetic is guaranteed only up to n = 12");
    let n = n as usize;
    let mut a = [0i128; 13];
    a[0] = 1;
    for m in 1..=n {
        let mut total: i128 = 0;
        for k in 1..=m {
            let term = binom(m, k) * (1i128 << (k * (m - k))) * a[m - k];
            if k % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        a[m] = total;
    }
    a[n] as u128
}

fn binom(n: usize, k: usize) -> i128 {
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_counts_small() {
        assert_eq!(dag_count_oracle(0), 1);
        assert_eq!(dag_count_oracle(1), 1);
        assert_eq!(dag_count_oracle(2), 3);
        assert_eq!(dag_count_oracle(3), 25);
        assert_eq!(dag_count_oracle(4), 543);
        assert_eq!(dag_count_oracle(5), 29281);
    }

    #[test]
    fn enumeration_counts_match_the_oracle() {
        for n in 1..=4u32 {
            let count = enumerate_graphs(n, GraphKind::Dag).unwrap().count();
            assert_eq!(count as u128, dag_count_oracle(n), "n={n}");
        }
    }

    #[test]
    fn dcg_enumeration_is_all_directed_graphs() {
        assert_eq!(enumerate_graphs(3, GraphKind::Dcg).unwrap().count(), 64);
        assert_eq!(enumerate_graphs(2, GraphKind::Dag).unwrap().count(), 3);
    }

    #[test]
    fn admg_enumeration_is_dags_times_bidirected_patterns() {
        // 25 DAGs x 2^3 bidirected patterns on three vertices.
        assert_eq!(enumerate_graphs(3, GraphKind::Admg).unwrap().count(), 200);
    }

    #[test]
    fn enumeration_caps() {
        assert!(matches!(
            enumerate_graphs(6, GraphKind::Dag),
            Err(SampleError::GraphTooLargeForOracle { n: 6, cap: 5 })
        ));
        assert!(matches!(
            enumerate_graphs(5, GraphKind::Admg),
            Err(SampleError::GraphTooLargeForOracle { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let mut graphs: Vec<MixedGraph> = enumerate_graphs(3, GraphKind::Dag).unwrap().collect();
        let len = graphs.len();
        graphs.sort();
        graphs.dedup();
        assert_eq!(graphs.len(), len);
    }
}
