//! Experiment drivers: MEC census, layer-size tail checks, lower-bound
//! scaling tables, and the randomized verification suites.
//!
//! Every driver is a pure function of its config (including the seed), and
//! CSV emission is byte-identical across reruns of the same config.

pub mod census;
pub mod scaling;
pub mod tails;
pub mod verify;

pub use census::{census_csv, run_census, CensusRow};
pub use scaling::{run_scaling, scaling_csv, PSpec, ScalingConfig, ScalingRecord, ScalingSummary};
pub use tails::{run_tails, tails_csv, TailsConfig, TailsSummary};
pub use verify::{run_suite, Suite, SuiteOutcome, VerifyReport};

use mecsize_core::MixedGraph;

/// Output flavor for the experiment commands. CSV is the primary,
/// byte-stable format; JSON mirrors the same records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

/// Compact identity of a small graph (n <= 8): directed and bidirected
/// adjacency bitmasks over lexicographic pair order. Used as a counting key
/// by the distribution tests.
pub(crate) fn graph_key(g: &MixedGraph) -> (u64, u64) {
    let n = g.n();
    debug_assert!(n <= 8);
    let pair_index = |a: u32, b: u32| -> u32 {
        // Ordered pairs (v, w), v != w, lexicographic.
        (a - 1) * (n - 1) + if b > a { b - 2 } else { b - 1 }
    };
    let mut dir = 0u64;
    for &(a, b) in g.directed_edges() {
        dir |= 1 << pair_index(a.index(), b.index());
    }
    let mut bid = 0u64;
    for &(a, b) in g.bidirected_edges() {
        let (a, b) = (a.index(), b.index());
        bid |= 1 << ((a - 1) * n + (b - 1));
    }
    (dir, bid)
}

/// Total-variation distance between an empirical counter and an exact
/// distribution given as (key, probability) pairs covering the full support.
pub(crate) fn tv_distance(
    exact: &std::collections::HashMap<(u64, u64), f64>,
    counts: &std::collections::HashMap<(u64, u64), u64>,
    total: u64,
) -> f64 {
    debug_assert!(counts.keys().all(|k| exact.contains_key(k)));
    exact
        .iter()
        .map(|(k, &p)| {
            let emp = *counts.get(k).unwrap_or(&0) as f64 / total as f64;
            (emp - p).abs()
        })
        .sum::<f64>()
        / 2.0
}
