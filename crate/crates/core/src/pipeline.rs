//! End-to-end pipeline: the gamma-dichotomy between the balanced-permutation
//! branch and the factor-boosting branch, the unbalanced (re-centered) and
//! multicolor variants, and exact result verification.

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Duration;

use crate::boost::{
    approx_ratio, boost_pair_centered, boost_triple_centered, BoostMode, BoostStatus, SwapLog,
};
use crate::error::{Error, Result};
use crate::factor::{
    c4_k4_decomposition, factor_one_factorization, matching_pair_decomposition, round_robin,
    verify_decomposition, DecompositionConfig, DecompositionRef, Factor, FactorDecomposition,
    OneFactorization, VerifyReport,
};
use crate::permute::find_balanced_permutation;
use crate::signed::{
    edge_count, edge_endpoints, edge_index, Disc, EdgeSet, SignedCompleteGraph, Vertex,
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionStrategy {
    C4K4,
    MatchingPairs,
    Auto,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Dichotomy threshold on `|disc(K)|`.
    pub gamma: f64,
    /// Balancing slack for the factor decomposition.
    pub epsilon: f64,
    /// Stage-1 target of the triple boost.
    pub primary_target: f64,
    /// Target every matching should reach.
    pub final_target: f64,
    pub max_trials: u64,
    pub seed: u64,
    pub strategy: DecompositionStrategy,
    pub boost_mode: BoostMode,
    pub decomposition: DecompositionConfig,
}

impl PipelineConfig {
    /// Observable-scale preset.
    pub fn desk(seed: u64) -> Self {
        PipelineConfig {
            gamma: 0.05,
            epsilon: 0.02,
            primary_target: 0.25,
            final_target: 0.05,
            max_trials: 100,
            seed,
            strategy: DecompositionStrategy::Auto,
            boost_mode: BoostMode::Paper,
            // Sizes without a fast structured construction should fall back
            // to matching pairs quickly rather than burn a long search.
            decomposition: DecompositionConfig {
                search_budget: Duration::from_secs(3),
                ..DecompositionConfig::default()
            },
        }
    }

    /// Asymptotic constants (`eta = 1/(2^13 * 10^14)`, `gamma = eta / (2*10^4)`,
    /// targets `25*gamma` and `5*gamma`); vacuously small at test sizes but
    /// kept selectable.
    pub fn paper(seed: u64) -> Self {
        let eta = 1.0 / (8192.0 * 1e14);
        let gamma = eta / 2e4;
        PipelineConfig {
            gamma,
            epsilon: gamma / 2.0,
            primary_target: 25.0 * gamma,
            final_target: 5.0 * gamma,
            max_trials: 100,
            seed,
            strategy: DecompositionStrategy::Auto,
            boost_mode: BoostMode::Paper,
            decomposition: DecompositionConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Precondition(format!("gamma {} not in (0, 1)", self.gamma)));
        }
        if self.epsilon >= self.gamma || self.epsilon <= 0.0 {
            return Err(Error::Precondition(format!(
                "epsilon {} must lie in (0, gamma = {})",
                self.epsilon, self.gamma
            )));
        }
        if !(self.final_target > 0.0 && self.final_target <= self.primary_target) {
            return Err(Error::Precondition(format!(
                "targets need 0 < final {} <= primary {}",
                self.final_target, self.primary_target
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Balanced,
    Boosted,
    BothBest,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub one_factorization: OneFactorization,
    /// Per matching: (signed discrepancy, |signed - center|). The center is
    /// 0 except in the unbalanced variant, so the second entry is the
    /// absolute discrepancy in the main pipeline.
    pub per_matching: Vec<(Disc, Disc)>,
    pub min_abs_disc: Disc,
    pub center: Disc,
    pub branch: Branch,
    pub verification: VerifyReport,
    pub swap_logs: Vec<SwapLog>,
    pub boost_statuses: Vec<BoostStatus>,
    pub balancer_trials: u64,
    pub balancer_success: bool,
    pub status: BoostStatus,
    pub seed: u64,
}

impl PipelineResult {
    pub fn to_canonical_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

// ---------------------------------------------------------------------------
// Main entry points
// ---------------------------------------------------------------------------

pub fn decompose_high_discrepancy(
    graph: &SignedCompleteGraph,
    config: &PipelineConfig,
) -> Result<PipelineResult> {
    config.validate()?;
    run_pipeline(graph, config, Ratio::new(0, 1))
}

/// Re-centered variant: every matching is pushed away from the global
/// signed discrepancy instead of away from 0.
pub fn decompose_unbalanced(
    graph: &SignedCompleteGraph,
    config: &PipelineConfig,
    p0: f64,
) -> Result<PipelineResult> {
    config.validate()?;
    let center = graph.global_disc_signed();
    if center.abs() > approx_ratio(p0) {
        return Err(Error::Precondition(format!(
            "|disc(K)| = {} exceeds p0 = {}",
            center.abs(),
            p0
        )));
    }
    run_pipeline(graph, config, center)
}

fn run_pipeline(
    graph: &SignedCompleteGraph,
    config: &PipelineConfig,
    center: Disc,
) -> Result<PipelineResult> {
    let nv = graph.num_vertices();
    if nv % 2 != 0 || nv < 4 {
        return Err(Error::OddVertexCount(nv));
    }
    if nv == 4 {
        // K4 has a unique 1-factorization; nothing to optimize.
        let rr = round_robin(4)?;
        return Ok(finalize(
            graph,
            rr,
            center,
            Branch::Balanced,
            Vec::new(),
            Vec::new(),
            0,
            true,
            BoostStatus::Met,
            config.seed,
        ));
    }

    let deviation = (graph.global_disc_signed() - center).abs();
    let gamma = approx_ratio(config.gamma);
    if deviation > gamma {
        let near_threshold = deviation <= gamma * Ratio::new(2, 1);
        let balanced = balanced_branch(graph, config, center)?;
        // The balanced guarantee needs every factor within gamma/2 of the
        // global bias, which integer edge counts cannot always meet on small
        // graphs. When the balancer exhausts its trials, the boosted branch
        // often still rescues matchings stranded at zero, so try it too.
        let rescue = !balanced.balancer_success;
        if config.strategy == DecompositionStrategy::Auto && (near_threshold || rescue) {
            let boosted = boosted_branch(graph, config, center)?;
            let mut winner = if boosted.min_abs_disc > balanced.min_abs_disc {
                boosted
            } else {
                balanced
            };
            winner.branch = Branch::BothBest;
            return Ok(winner);
        }
        Ok(balanced)
    } else {
        boosted_branch(graph, config, center)
    }
}

// ---------------------------------------------------------------------------
// Branches
// ---------------------------------------------------------------------------

fn balanced_branch(
    graph: &SignedCompleteGraph,
    config: &PipelineConfig,
    center: Disc,
) -> Result<PipelineResult> {
    let nv = graph.num_vertices();
    let rr = round_robin(nv)?;
    let parts: Vec<EdgeSet> = rr.matchings.iter().map(|m| m.edge_set()).collect();
    let bal = find_balanced_permutation(
        graph,
        &parts,
        config.gamma / 2.0,
        config.max_trials,
        config.seed,
    )?;
    let matchings = rr
        .matchings
        .iter()
        .map(|m| m.relabel(&bal.permutation))
        .collect::<Result<Vec<_>>>()?;
    let status = if bal.success {
        BoostStatus::Met
    } else {
        BoostStatus::BestEffort(format!(
            "balancer exhausted {} trials; worst deviation {}",
            bal.trials_used, bal.worst_deviation
        ))
    };
    Ok(finalize(
        graph,
        OneFactorization {
            num_vertices: nv,
            matchings,
        },
        center,
        Branch::Balanced,
        Vec::new(),
        Vec::new(),
        bal.trials_used,
        bal.success,
        status,
        config.seed,
    ))
}

fn boosted_branch(
    graph: &SignedCompleteGraph,
    config: &PipelineConfig,
    center: Disc,
) -> Result<PipelineResult> {
    let nv = graph.num_vertices();
    // Small instances are coarse: a factor pair is often unboostable for a
    // given labeling (too few switcher components), so success rides on the
    // relabeling lottery and needs many cheap attempts.
    let attempts = if nv <= 8 {
        64
    } else if nv <= 12 {
        24
    } else {
        3
    };
    let fin = approx_ratio(config.final_target);
    let decomp = build_decomposition(nv, config)?;
    let mut best: Option<PipelineResult> = None;
    for attempt in 0..attempts {
        // Attempt 0 gives the balancer its full trial budget. When epsilon is
        // infeasible the balancer's deviation-minimizing best effort is also
        // boost-hostile (evenly signed factors carry few switchers), so the
        // retries draw one permutation each to keep the lottery diverse.
        let trials = if attempt == 0 { config.max_trials } else { 1 };
        let result = boosted_once(
            graph,
            config,
            center,
            &decomp,
            trials,
            config.seed.wrapping_add(7919 * attempt),
        )?;
        if result.min_abs_disc >= fin {
            return Ok(result);
        }
        if best
            .as_ref()
            .map_or(true, |b| result.min_abs_disc > b.min_abs_disc)
        {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one attempt ran"))
}

fn boosted_once(
    graph: &SignedCompleteGraph,
    config: &PipelineConfig,
    center: Disc,
    decomp: &FactorDecomposition,
    max_trials: u64,
    seed: u64,
) -> Result<PipelineResult> {
    let nv = graph.num_vertices();
    let parts: Vec<EdgeSet> = decomp.factors.iter().map(|f| f.edges.clone()).collect();
    let bal = find_balanced_permutation(graph, &parts, config.epsilon, max_trials, seed)?;

    // Apply the permutation to the decomposition so everything downstream
    // works in the identity labeling.
    let relabeled = FactorDecomposition {
        num_vertices: nv,
        factors: decomp
            .factors
            .iter()
            .map(|f| {
                Ok(Factor {
                    kind: f.kind,
                    edges: relabel_edge_set(&f.edges, &bal.permutation, nv)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let mut matchings = Vec::with_capacity(nv - 1);
    let mut swap_logs = Vec::new();
    let mut statuses = Vec::new();
    for factor in &relabeled.factors {
        let ms = factor_one_factorization(factor, nv)?;
        let outcome = match ms.len() {
            2 => boost_pair_centered(
                graph,
                &ms[0],
                &ms[1],
                config.final_target,
                config.boost_mode,
                center,
            )?,
            3 => boost_triple_centered(
                graph,
                &ms[0],
                &ms[1],
                &ms[2],
                config.primary_target,
                config.final_target,
                center,
            )?,
            other => {
                return Err(Error::Structure(format!(
                    "factor split into {other} matchings"
                )))
            }
        };
        matchings.extend(outcome.matchings);
        swap_logs.push(outcome.log);
        statuses.push(outcome.status);
    }

    // Balancer exhaustion is tolerated here: boosting works from the best
    // permutation found, and the verdict rests on the boost outcomes.
    let status = if let Some(BoostStatus::BestEffort(reason)) =
        statuses.iter().find(|s| matches!(s, BoostStatus::BestEffort(_)))
    {
        BoostStatus::BestEffort(reason.clone())
    } else {
        BoostStatus::Met
    };

    Ok(finalize(
        graph,
        OneFactorization {
            num_vertices: nv,
            matchings,
        },
        center,
        Branch::Boosted,
        swap_logs,
        statuses,
        bal.trials_used,
        bal.success,
        status,
        seed,
    ))
}

fn build_decomposition(nv: usize, config: &PipelineConfig) -> Result<FactorDecomposition> {
    match config.strategy {
        DecompositionStrategy::C4K4 => c4_k4_decomposition(nv, &config.decomposition),
        DecompositionStrategy::MatchingPairs => matching_pair_decomposition(nv),
        DecompositionStrategy::Auto => c4_k4_decomposition(nv, &config.decomposition)
            .or_else(|_| matching_pair_decomposition(nv)),
    }
}

fn relabel_edge_set(edges: &EdgeSet, pi: &[Vertex], nv: usize) -> Result<EdgeSet> {
    let mut out = Vec::with_capacity(edges.len());
    for &e in edges.indices() {
        let (u, v) = edge_endpoints(e, nv)?;
        out.push(edge_index(pi[u], pi[v], nv)?);
    }
    Ok(EdgeSet::new(out))
}

#[allow(clippy::too_many_arguments)]
fn finalize(
    graph: &SignedCompleteGraph,
    one_factorization: OneFactorization,
    center: Disc,
    branch: Branch,
    swap_logs: Vec<SwapLog>,
    boost_statuses: Vec<BoostStatus>,
    balancer_trials: u64,
    balancer_success: bool,
    status: BoostStatus,
    seed: u64,
) -> PipelineResult {
    let nv = graph.num_vertices();
    let n_edges = (nv / 2) as i64;
    let verification =
        verify_decomposition(nv, DecompositionRef::OneFactorization(&one_factorization));
    let per_matching: Vec<(Disc, Disc)> = one_factorization
        .matchings
        .iter()
        .map(|m| {
            let s = graph
                .signed_sum_of(m.edges())
                .expect("matching edges are in range");
            let signed = Ratio::new(s, n_edges);
            (signed, (signed - center).abs())
        })
        .collect();
    let min_abs_disc = per_matching
        .iter()
        .map(|(_, d)| *d)
        .min()
        .unwrap_or_else(|| Ratio::new(0, 1));
    let status = if verification.passes {
        status
    } else {
        BoostStatus::BestEffort("verification failed".into())
    };
    PipelineResult {
        one_factorization,
        per_matching,
        min_abs_disc,
        center,
        branch,
        verification,
        swap_logs,
        boost_statuses,
        balancer_trials,
        balancer_success,
        status,
        seed,
    }
}

// ---------------------------------------------------------------------------
// Multicolor variant
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColorReport {
    pub matching_index: usize,
    pub dominant_color: usize,
    pub count: usize,
    /// `count - n/k` where `n` is the matching size.
    pub excess: f64,
}

/// Colors in `[1, k-1]` become `+1`, color `k` becomes `-1`; then the
/// (re-centered for `k > 2`) pipeline runs on the induced signing.
/// `coloring[e]` is the color of the edge with index `e`.
pub fn multicolor_decompose(
    num_vertices: usize,
    coloring: &[usize],
    k: usize,
    config: &PipelineConfig,
) -> Result<(PipelineResult, Vec<ColorReport>)> {
    config.validate()?;
    if k < 2 {
        return Err(Error::Precondition(format!("need k >= 2 colors, got {k}")));
    }
    if coloring.len() != edge_count(num_vertices) {
        return Err(Error::Precondition(format!(
            "coloring covers {} edges but K_{num_vertices} has {}",
            coloring.len(),
            edge_count(num_vertices)
        )));
    }
    let mut negative = Vec::new();
    for (e, &color) in coloring.iter().enumerate() {
        if color == 0 || color > k {
            return Err(Error::Precondition(format!(
                "edge {e} has color {color}, outside [1, {k}]"
            )));
        }
        if color == k {
            negative.push(edge_endpoints(e, num_vertices)?);
        }
    }
    let graph = SignedCompleteGraph::from_negative_edges(num_vertices, &negative)?;
    // k = 2 is the identity re-encoding of a 2-coloring as a signing.
    let center = if k == 2 {
        Ratio::new(0, 1)
    } else {
        graph.global_disc_signed()
    };
    let result = run_pipeline(&graph, config, center)?;

    let n = num_vertices / 2;
    let mut reports = Vec::with_capacity(result.one_factorization.matchings.len());
    for (idx, m) in result.one_factorization.matchings.iter().enumerate() {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in m.edges() {
            *counts.entry(coloring[e]).or_insert(0) += 1;
        }
        let (&dominant_color, &count) = counts
            .iter()
            .max_by_key(|(color, count)| (**count, std::cmp::Reverse(**color)))
            .expect("matching is nonempty");
        reports.push(ColorReport {
            matching_index: idx,
            dominant_color,
            count,
            excess: count as f64 - n as f64 / k as f64,
        });
    }
    Ok((result, reports))
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultCheck {
    pub passes: bool,
    pub violations: Vec<String>,
}

/// Recomputes everything from raw edges and compares against the result's
/// claims; passes iff all claims match and the minimum meets `claimed_min`.
pub fn verify_result(
    graph: &SignedCompleteGraph,
    result: &PipelineResult,
    claimed_min: f64,
) -> ResultCheck {
    let mut violations = Vec::new();
    let nv = graph.num_vertices();
    let f = &result.one_factorization;
    if f.num_vertices != nv {
        violations.push(format!(
            "factorization on {} vertices, graph on {nv}",
            f.num_vertices
        ));
    }
    let structural = verify_decomposition(nv, DecompositionRef::OneFactorization(f));
    for (u, v) in &structural.missing_edges {
        violations.push(format!("edge ({u}, {v}) missing from the factorization"));
    }
    for (u, v) in &structural.duplicate_edges {
        violations.push(format!("edge ({u}, {v}) covered more than once"));
    }
    violations.extend(structural.violations.iter().cloned());

    if f.matchings.len() != result.per_matching.len() {
        violations.push(format!(
            "{} matchings but {} per-matching claims",
            f.matchings.len(),
            result.per_matching.len()
        ));
    }
    let n_edges = (nv / 2) as i64;
    let mut recomputed_min: Option<Disc> = None;
    for (idx, m) in f.matchings.iter().enumerate() {
        let Ok(s) = graph.signed_sum_of(m.edges()) else {
            violations.push(format!("matching {idx} has out-of-range edges"));
            continue;
        };
        let signed = Ratio::new(s, n_edges);
        let dev = (signed - result.center).abs();
        if let Some(&(claimed_signed, claimed_dev)) = result.per_matching.get(idx) {
            if claimed_signed != signed || claimed_dev != dev {
                violations.push(format!(
                    "matching {idx}: claimed ({claimed_signed}, {claimed_dev}), recomputed ({signed}, {dev})"
                ));
            }
        }
        recomputed_min = Some(recomputed_min.map_or(dev, |m: Disc| m.min(dev)));
    }
    if let Some(min) = recomputed_min {
        if min != result.min_abs_disc {
            violations.push(format!(
                "claimed min {} but recomputed {min}",
                result.min_abs_disc
            ));
        }
        if min < approx_ratio(claimed_min) {
            let offender = result
                .per_matching
                .iter()
                .enumerate()
                .min_by_key(|(_, (_, d))| *d)
                .map(|(i, _)| i)
                .unwrap_or(0);
            violations.push(format!(
                "minimum {min} below claimed bound {claimed_min} (matching {offender})"
            ));
        }
    }
    ResultCheck {
        passes: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_oracle;
    use crate::signed::SigningSpec;

    #[test]
    fn config_validation() {
        assert!(PipelineConfig::desk(0).validate().is_ok());
        assert!(PipelineConfig::paper(0).validate().is_ok());
        let mut bad = PipelineConfig::desk(0);
        bad.epsilon = 0.2;
        assert!(bad.validate().is_err());
        let mut bad = PipelineConfig::desk(0);
        bad.final_target = 0.5;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn all_plus_k8_takes_balanced_branch() {
        let g = SignedCompleteGraph::all_plus(8).unwrap();
        let r = decompose_high_discrepancy(&g, &PipelineConfig::desk(0)).unwrap();
        assert_eq!(r.branch, Branch::Balanced);
        assert_eq!(r.min_abs_disc, Ratio::new(1, 1));
        assert_eq!(r.status, BoostStatus::Met);
        assert!(r.verification.passes);
        assert!(verify_result(&g, &r, 1.0).passes);
    }

    #[test]
    fn k4_returns_unique_factorization() {
        for seed in 0..20 {
            let g = SignedCompleteGraph::generate(4, &SigningSpec::PBiased { p: 0.5 }, seed)
                .unwrap();
            let r = decompose_high_discrepancy(&g, &PipelineConfig::desk(seed)).unwrap();
            let oracle = brute_force_oracle(&g).unwrap();
            assert_eq!(r.min_abs_disc, oracle.optimum);
            assert!(r.verification.passes);
        }
    }

    #[test]
    fn desk_k8_verifies_and_respects_oracle() {
        for seed in 0..20 {
            let g = SignedCompleteGraph::generate(
                8,
                &SigningSpec::ExactCount { positive: 14 },
                seed,
            )
            .unwrap();
            let r = decompose_high_discrepancy(&g, &PipelineConfig::desk(seed)).unwrap();
            assert!(r.verification.passes, "seed {seed}");
            assert!(verify_result(&g, &r, 0.0).passes, "seed {seed}");
            let oracle = brute_force_oracle(&g).unwrap();
            assert!(r.min_abs_disc <= oracle.optimum, "seed {seed}");
        }
    }

    #[test]
    fn deterministic_output() {
        let g =
            SignedCompleteGraph::generate(20, &SigningSpec::PBiased { p: 0.5 }, 9).unwrap();
        let a = decompose_high_discrepancy(&g, &PipelineConfig::desk(42)).unwrap();
        let b = decompose_high_discrepancy(&g, &PipelineConfig::desk(42)).unwrap();
        assert_eq!(
            a.to_canonical_json().unwrap(),
            b.to_canonical_json().unwrap()
        );
    }

    #[test]
    fn unbalanced_precondition_and_degenerate_case() {
        let g = SignedCompleteGraph::all_plus(8).unwrap();
        assert!(decompose_unbalanced(&g, &PipelineConfig::desk(0), 0.5).is_err());
        // p0 = 1 admits the all-plus graph; every deviation is 0.
        let r = decompose_unbalanced(&g, &PipelineConfig::desk(0), 1.0).unwrap();
        assert_eq!(r.min_abs_disc, Ratio::new(0, 1));
        assert!(r.verification.passes);
    }

    #[test]
    fn unbalanced_with_zero_center_matches_main_pipeline() {
        // A signing with disc = 0 re-centers at 0, reducing to the main
        // pipeline exactly.
        let g = SignedCompleteGraph::generate(
            8,
            &SigningSpec::ExactCount { positive: 14 },
            3,
        )
        .unwrap();
        assert_eq!(g.global_disc_signed(), Ratio::new(0, 1));
        let a = decompose_unbalanced(&g, &PipelineConfig::desk(5), 0.5).unwrap();
        let b = decompose_high_discrepancy(&g, &PipelineConfig::desk(5)).unwrap();
        assert_eq!(
            a.to_canonical_json().unwrap(),
            b.to_canonical_json().unwrap()
        );
    }

    #[test]
    fn unbalanced_deviations_recompute() {
        let g = SignedCompleteGraph::generate(
            20,
            &SigningSpec::ExactCount { positive: 133 },
            1,
        )
        .unwrap();
        let center = g.global_disc_signed();
        let r = decompose_unbalanced(&g, &PipelineConfig::desk(1), 0.9).unwrap();
        assert_eq!(r.center, center);
        for (m, (signed, dev)) in r.one_factorization.matchings.iter().zip(&r.per_matching) {
            let s = g.signed_sum_of(m.edges()).unwrap();
            assert_eq!(*signed, Ratio::new(s, 10));
            assert_eq!(*dev, (*signed - center).abs());
        }
        assert!(r.verification.passes);
    }

    #[test]
    fn multicolor_monochromatic() {
        let coloring = vec![1usize; edge_count(12)];
        let (result, reports) =
            multicolor_decompose(12, &coloring, 3, &PipelineConfig::desk(0)).unwrap();
        assert!(result.verification.passes);
        for rep in &reports {
            assert_eq!(rep.dominant_color, 1);
            assert_eq!(rep.count, 6);
            assert!(rep.count as f64 > 6.0 / 3.0);
        }
    }

    #[test]
    fn multicolor_rejects_bad_input() {
        let coloring = vec![1usize; edge_count(8)];
        assert!(multicolor_decompose(8, &coloring, 1, &PipelineConfig::desk(0)).is_err());
        let mut bad = coloring.clone();
        bad[3] = 5;
        assert!(multicolor_decompose(8, &bad, 3, &PipelineConfig::desk(0)).is_err());
        assert!(multicolor_decompose(10, &coloring, 2, &PipelineConfig::desk(0)).is_err());
    }

    #[test]
    fn multicolor_k2_matches_plain_decompose() {
        // Alternate colors 1/2 over edge indices; color 2 maps to -1.
        let coloring: Vec<usize> = (0..edge_count(8)).map(|e| 1 + e % 2).collect();
        let (result, reports) =
            multicolor_decompose(8, &coloring, 2, &PipelineConfig::desk(4)).unwrap();
        let negative: Vec<(usize, usize)> = (0..edge_count(8))
            .filter(|e| e % 2 == 1)
            .map(|e| edge_endpoints(e, 8).unwrap())
            .collect();
        let g = SignedCompleteGraph::from_negative_edges(8, &negative).unwrap();
        let direct = decompose_high_discrepancy(&g, &PipelineConfig::desk(4)).unwrap();
        assert_eq!(
            result.to_canonical_json().unwrap(),
            direct.to_canonical_json().unwrap()
        );
        // Dominant counts recompute by direct counting.
        for (rep, m) in reports.iter().zip(&result.one_factorization.matchings) {
            let count = m.edges().iter().filter(|&&e| coloring[e] == rep.dominant_color).count();
            assert_eq!(count, rep.count);
        }
    }

    #[test]
    fn verify_catches_tampering() {
        let g = SignedCompleteGraph::generate(8, &SigningSpec::PBiased { p: 0.5 }, 2).unwrap();
        let mut r = decompose_high_discrepancy(&g, &PipelineConfig::desk(2)).unwrap();
        assert!(verify_result(&g, &r, 0.0).passes);

        // Swap one edge between two matchings: partition breaks.
        let m0 = r.one_factorization.matchings[0].clone();
        r.one_factorization.matchings[0] = r.one_factorization.matchings[1].clone();
        r.one_factorization.matchings[1] = m0;
        // (Swapping whole matchings keeps the partition but breaks claims.)
        let check = verify_result(&g, &r, 0.0);
        if r.per_matching[0] != r.per_matching[1] {
            assert!(!check.passes);
        }

        // Claimed minimum above the actual minimum fails.
        let r = decompose_high_discrepancy(&g, &PipelineConfig::desk(2)).unwrap();
        let too_high = verify_result(&g, &r, 1.1);
        assert!(!too_high.passes);
        assert!(too_high
            .violations
            .iter()
            .any(|v| v.contains("below claimed bound")));
    }
}
