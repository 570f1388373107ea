//! Core library for working with random causal graphs: directed acyclic
//! graphs (DAGs), acyclic directed mixed graphs (ADMGs), and directed cyclic
//! graphs (DCGs).
//!
//! The crate provides:
//!
//! - an immutable mixed-graph representation with validation, reachability,
//!   and tower decompositions ([`graph`], [`tower`]);
//! - a d-separation engine for all three graph kinds, plus an independently
//!   coded exhaustive-walk oracle and full d-separation signatures ([`dsep`]);
//! - Markov equivalence testing and exact equivalence-class enumeration for
//!   small graphs ([`equiv`]);
//! - equivalence-preserving constructions (reversible layer-2 matchings,
//!   underdetermined-edge toggles, cycle reversal) and the lower-bound
//!   certificates they imply ([`construct`]);
//! - exact samplers for the edge-weighted DAG distribution `D(n, p)` and for
//!   uniform ADMGs/DCGs, together with exhaustive enumerators and an
//!   independent DAG-count oracle ([`sample`]).
//!
//! The crate is `no_std` (with `alloc`); all file formats, CLI handling, and
//! experiment drivers live in the companion `mecsize-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod construct;
pub mod dsep;
pub mod equiv;
pub mod graph;
pub mod logweight;
pub mod sample;
pub mod seed;
#[cfg(test)]
pub(crate) mod testutil;
pub mod tower;

pub use construct::{
    certificate, cycle_packing, find_s_structures, flip_matching_subset, layer2_matching,
    reverse_cycle, toggle_underdetermined_edge, CertificatePayload, ConstructError, CyclePacking,
    LowerBoundCertificate, ReversibleMatching, SStructureSet, SStructureTriple,
};
pub use dsep::{
    dsep_signature, dsep_signature_with_cap, is_d_connected, is_d_connected_oracle, DsepEngine,
    DsepError, DsepQuery, DsepSignature, DEFAULT_ORACLE_CAP, DEFAULT_SIGNATURE_CAP,
};
pub use equiv::{
    markov_equivalent_dag_fast, markov_equivalent_exact, markov_equivalent_exact_with_cap,
    mec_enumerate, mec_enumerate_oracle, mec_enumerate_with_cap, reversible_edges, skeleton,
    v_structures, EquivError, MecEnumeration, VStructure, DEFAULT_ENUMERATION_CAP,
};
pub use graph::{GraphError, GraphKind, MixedGraph, VertexId, VertexSet};
pub use logweight::LogWeight;
pub use sample::{
    dag_count_oracle, enumerate_graphs, sample_dnp_rejection, sample_dnp_rejection_with_budget,
    sample_dnp_tower, sample_uniform_admg, sample_uniform_dcg, tower_vector_weight,
    GraphEnumerator, SampleError, TowerSampler, TowerVectorDp, DEFAULT_REJECTION_BUDGET,
};
pub use seed::RngSeed;
pub use tower::{tower_decomposition, tower_graph, TowerDecomposition};
