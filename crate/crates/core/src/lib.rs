//! High-discrepancy 1-factor decompositions of edge-signed complete graphs.
//!
//! For any ±1 signing of the edges of `K_{2n}`, the library constructs a
//! 1-factorization into `2n - 1` perfect matchings whose discrepancies are
//! bounded away from zero, via a dichotomy: if the global discrepancy is
//! already large, a random permutation of a round-robin factorization
//! concentrates every matching near it; otherwise a structured factor
//! decomposition is balanced, split into matchings, and boosted by
//! switcher swaps. Exact integer/rational arithmetic backs every reported
//! value, and small instances come with a brute-force oracle.

pub mod boost;
pub mod error;
pub mod factor;
pub mod oracle;
pub mod permute;
pub mod pipeline;
pub mod signed;
pub mod switcher;

pub use boost::{
    boost_pair, boost_triple, swap_switcher, BoostMode, BoostOutcome, BoostStatus, SwapLog,
    SwapRecord,
};
pub use error::{Error, Result};
pub use factor::{
    c4_k4_decomposition, factor_one_factorization, matching_pair_decomposition, round_robin,
    verify_decomposition, DecompositionConfig, DecompositionRef, Factor, FactorDecomposition,
    FactorKind, OneFactorization, VerifyReport,
};
pub use oracle::{brute_force_oracle, OracleResult, KNOWN_COUNTS};
pub use permute::{
    concentration_experiment, find_balanced_permutation, hit_count, random_permutation,
    BalanceOutcome, ConcentrationReport, TupleFamily, TupleSigning,
};
pub use pipeline::{
    decompose_high_discrepancy, decompose_unbalanced, multicolor_decompose, verify_result, Branch,
    ColorReport, DecompositionStrategy, PipelineConfig, PipelineResult, ResultCheck,
};
pub use signed::{
    edge_count, edge_endpoints, edge_index, Disc, EdgeIndex, EdgeSet, PerfectMatching,
    SignedCompleteGraph, SigningSpec, Vertex,
};
pub use switcher::{
    alternating_components, classify_four_cycle, count_switchers, degree_census, drc_witness,
    AlternatingCycle, CensusMode, DrcThresholds, DrcWitness, FourCycle, SwitcherCensus,
};
