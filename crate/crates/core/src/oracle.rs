//! Exhaustive ground truth at small sizes: enumerates every 1-factorization
//! of `K_4`, `K_6`, and `K_8` and reports the best achievable minimum
//! matching discrepancy.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::OneFactorization;
use crate::signed::{edge_index, Disc, PerfectMatching, SignedCompleteGraph};

/// Known 1-factorization counts for `K_4`, `K_6`, `K_8`.
pub const KNOWN_COUNTS: [(usize, u64); 3] = [(4, 1), (6, 6), (8, 6240)];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    /// Max over all 1-factorizations of the min-matching `|S|/n`.
    pub optimum: Disc,
    pub witness: OneFactorization,
    pub factorizations_enumerated: u64,
}

/// Enumerates all 1-factorizations, one canonical representative each:
/// matchings are ordered by vertex 0's partner, so matching `i` contains
/// the edge `{0, i+1}`.
pub fn brute_force_oracle(graph: &SignedCompleteGraph) -> Result<OracleResult> {
    let nv = graph.num_vertices();
    if !matches!(nv, 4 | 6 | 8) {
        return Err(Error::SizeLimit {
            num_vertices: nv,
            max: 8,
        });
    }
    let n_edges = nv / 2;
    // Signed sum of each edge by index, for O(1) accumulation.
    let mut search = Search {
        nv,
        graph,
        used_edges: vec![false; nv * (nv - 1) / 2],
        matchings: Vec::new(),
        count: 0,
        best: None,
    };
    search.enumerate(0)?;
    let (optimum_sum, witness) = search.best.ok_or_else(|| {
        Error::Structure("enumeration produced no factorization".into())
    })?;
    Ok(OracleResult {
        optimum: Ratio::new(optimum_sum, n_edges as i64),
        witness,
        factorizations_enumerated: search.count,
    })
}

struct Search<'a> {
    nv: usize,
    graph: &'a SignedCompleteGraph,
    used_edges: Vec<bool>,
    matchings: Vec<PerfectMatching>,
    count: u64,
    /// (best min |S|, witness).
    best: Option<(i64, OneFactorization)>,
}

impl Search<'_> {
    fn enumerate(&mut self, round: usize) -> Result<()> {
        if round == self.nv - 1 {
            self.count += 1;
            let min_abs = self
                .matchings
                .iter()
                .map(|m| self.graph.signed_sum_of(m.edges()).map(i64::abs))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .unwrap_or(0);
            if self.best.as_ref().map_or(true, |(b, _)| min_abs > *b) {
                self.best = Some((
                    min_abs,
                    OneFactorization {
                        num_vertices: self.nv,
                        matchings: self.matchings.clone(),
                    },
                ));
            }
            return Ok(());
        }
        let anchor = edge_index(0, round + 1, self.nv)?;
        if self.used_edges[anchor] {
            return Ok(());
        }
        self.used_edges[anchor] = true;
        let mut covered = vec![false; self.nv];
        covered[0] = true;
        covered[round + 1] = true;
        let mut edges = vec![anchor];
        self.extend_matching(round, &mut covered, &mut edges)?;
        self.used_edges[anchor] = false;
        Ok(())
    }

    fn extend_matching(
        &mut self,
        round: usize,
        covered: &mut [bool],
        edges: &mut Vec<usize>,
    ) -> Result<()> {
        let Some(u) = (0..self.nv).find(|&v| !covered[v]) else {
            let m = PerfectMatching::new(edges.clone(), self.nv)?;
            self.matchings.push(m);
            self.enumerate(round + 1)?;
            self.matchings.pop();
            return Ok(());
        };
        covered[u] = true;
        for v in u + 1..self.nv {
            if covered[v] {
                continue;
            }
            let e = edge_index(u, v, self.nv)?;
            if self.used_edges[e] {
                continue;
            }
            covered[v] = true;
            self.used_edges[e] = true;
            edges.push(e);
            self.extend_matching(round, covered, edges)?;
            edges.pop();
            self.used_edges[e] = false;
            covered[v] = false;
        }
        covered[u] = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{verify_decomposition, DecompositionRef};
    use crate::signed::SigningSpec;

    #[test]
    fn enumeration_counts_match_known_totals() {
        for (nv, expected) in KNOWN_COUNTS {
            let g = SignedCompleteGraph::all_plus(nv).unwrap();
            let r = brute_force_oracle(&g).unwrap();
            assert_eq!(r.factorizations_enumerated, expected, "K_{nv}");
            assert_eq!(r.optimum, Ratio::new(1, 1));
            assert!(
                verify_decomposition(nv, DecompositionRef::OneFactorization(&r.witness)).passes
            );
        }
    }

    #[test]
    fn k4_unique_factorization() {
        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1)]).unwrap();
        let r = brute_force_oracle(&g).unwrap();
        assert_eq!(r.factorizations_enumerated, 1);
        // Matchings {01,23}, {02,13}, {03,12} have sums 0, 2, 2.
        assert_eq!(r.optimum, Ratio::new(0, 1));
    }

    #[test]
    fn k6_negative_matching() {
        // sigma = -1 exactly on {01, 23, 45}: that matching has sum -3,
        // and the optimum is found by full enumeration.
        let g =
            SignedCompleteGraph::from_negative_edges(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let r = brute_force_oracle(&g).unwrap();
        assert_eq!(r.factorizations_enumerated, 6);
        for m in &r.witness.matchings {
            assert!(g.signed_sum_of(m.edges()).unwrap().abs() >= *r.optimum.numer());
        }
        assert!(r.optimum >= Ratio::new(1, 3));
    }

    #[test]
    fn oracle_rejects_large_instances() {
        let g = SignedCompleteGraph::all_plus(10).unwrap();
        assert!(matches!(
            brute_force_oracle(&g),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn witness_achieves_optimum() {
        for seed in 0..10 {
            let g = SignedCompleteGraph::generate(8, &SigningSpec::PBiased { p: 0.5 }, seed)
                .unwrap();
            let r = brute_force_oracle(&g).unwrap();
            let min_abs = r
                .witness
                .matchings
                .iter()
                .map(|m| g.signed_sum_of(m.edges()).unwrap().abs())
                .min()
                .unwrap();
            assert_eq!(Ratio::new(min_abs, 4), r.optimum);
        }
    }
}
