//! Switcher-swap boosting: exchanging the two matchings of switcher
//! 4-cycles between host matchings to push matching discrepancies above a
//! target, in pair form (for 4-cycle-type factors) and sequential triple
//! form (for the clique-type factor).

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signed::{Disc, PerfectMatching, SignedCompleteGraph};
use crate::switcher::{alternating_components, AlternatingCycle, FourCycle};

/// Best-available exact rational approximation of an `f64` fraction.
pub(crate) fn approx_ratio(x: f64) -> Ratio<i64> {
    Ratio::approximate_float(x)
        .unwrap_or_else(|| Ratio::new((x * 1_000_000.0).round() as i64, 1_000_000))
}

// ---------------------------------------------------------------------------
// Swap log
// ---------------------------------------------------------------------------

/// One switcher exchange; sums are the global signed sums of the two host
/// matchings around the swap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapRecord {
    pub cycle: FourCycle,
    pub before: (i64, i64),
    pub after: (i64, i64),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapLog {
    pub records: Vec<SwapRecord>,
}

impl SwapLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum BoostStatus {
    Met,
    BestEffort(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoostOutcome {
    pub matchings: Vec<PerfectMatching>,
    /// Per-matching `|S/n - center|` (center is 0 unless re-centered).
    pub achieved: Vec<Disc>,
    pub target: f64,
    pub status: BoostStatus,
    pub log: SwapLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoostMode {
    Paper,
    Minimal,
}

// ---------------------------------------------------------------------------
// Single swap
// ---------------------------------------------------------------------------

/// Exchanges the two perfect matchings of the 4-cycle `q` between `m1` and
/// `m2`; `q` must be a component of `m1 u m2`.
pub fn swap_switcher(
    m1: &PerfectMatching,
    m2: &PerfectMatching,
    q: &FourCycle,
) -> Result<(PerfectMatching, PerfectMatching)> {
    let nv = m1.num_vertices();
    if nv != m2.num_vertices() {
        return Err(Error::VertexSetMismatch);
    }
    let edges = q.edges(nv)?;
    let in_m1: Vec<_> = edges.iter().copied().filter(|&e| m1.contains(e)).collect();
    let in_m2: Vec<_> = edges.iter().copied().filter(|&e| m2.contains(e)).collect();
    if in_m1.len() != 2 || in_m2.len() != 2 {
        return Err(Error::NotAComponent);
    }
    let swap = |from: &PerfectMatching, drop: &[usize], add: &[usize]| {
        let mut e: Vec<usize> = from
            .edges()
            .iter()
            .copied()
            .filter(|x| !drop.contains(x))
            .collect();
        e.extend_from_slice(add);
        PerfectMatching::new(e, nv)
    };
    Ok((swap(m1, &in_m1, &in_m2)?, swap(m2, &in_m2, &in_m1)?))
}

// ---------------------------------------------------------------------------
// Candidate switcher components
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Candidate {
    cycle: FourCycle,
    /// Signed sums of the cycle's two matchings (host-matching order).
    s1: i64,
    s2: i64,
}

impl Candidate {
    /// Change to `S(m1)` when swapped.
    fn delta(&self) -> i64 {
        self.s2 - self.s1
    }
}

fn switcher_candidates(
    graph: &SignedCompleteGraph,
    components: &[AlternatingCycle],
) -> Result<Vec<Candidate>> {
    let nv = graph.num_vertices();
    let mut out = Vec::new();
    for c in components {
        if !c.is_four_cycle {
            continue;
        }
        let s1 = graph.signed_sum_of(&c.m1_edges(nv)?)?;
        let s2 = graph.signed_sum_of(&c.m2_edges(nv)?)?;
        if s1 != s2 {
            out.push(Candidate {
                cycle: c.four_cycle()?,
                s1,
                s2,
            });
        }
    }
    Ok(out)
}

fn touches(cycle: &FourCycle, used: &[bool]) -> bool {
    cycle.vertices.iter().any(|&v| used[v])
}

fn mark(cycle: &FourCycle, used: &mut [bool]) {
    for &v in &cycle.vertices {
        used[v] = true;
    }
}

/// `J1` holds candidates with `S(q cap m1) > S(q cap m2)`; returns the
/// larger side, `J1` on ties.
fn majority_side(candidates: Vec<Candidate>) -> Vec<Candidate> {
    let (j1, j2): (Vec<_>, Vec<_>) = candidates.into_iter().partition(|c| c.s1 > c.s2);
    if j1.len() >= j2.len() {
        j1
    } else {
        j2
    }
}

fn centered_disc(sum: i64, n_edges: usize, center: Disc) -> Disc {
    (Ratio::new(sum, n_edges as i64) - center).abs()
}

// ---------------------------------------------------------------------------
// Pair boosting
// ---------------------------------------------------------------------------

pub fn boost_pair(
    graph: &SignedCompleteGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
    target: f64,
    mode: BoostMode,
) -> Result<BoostOutcome> {
    boost_pair_centered(graph, m1, m2, target, mode, Ratio::new(0, 1))
}

/// Pair boosting with the objective `|S/n - center| >= target`; `center`
/// is nonzero only for the unbalanced variant.
pub fn boost_pair_centered(
    graph: &SignedCompleteGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
    target: f64,
    mode: BoostMode,
    center: Disc,
) -> Result<BoostOutcome> {
    let n_edges = graph.num_vertices() / 2;
    let target_ratio = approx_ratio(target);
    let mut s1 = graph.signed_sum_of(m1.edges())?;
    let mut s2 = graph.signed_sum_of(m2.edges())?;
    let met = |a: i64, b: i64| {
        centered_disc(a, n_edges, center) >= target_ratio
            && centered_disc(b, n_edges, center) >= target_ratio
    };

    let finish = |m1: PerfectMatching,
                  m2: PerfectMatching,
                  s1: i64,
                  s2: i64,
                  status: BoostStatus,
                  log: SwapLog| BoostOutcome {
        achieved: vec![
            centered_disc(s1, n_edges, center),
            centered_disc(s2, n_edges, center),
        ],
        matchings: vec![m1, m2],
        target,
        status,
        log,
    };

    if met(s1, s2) {
        return Ok(finish(
            m1.clone(),
            m2.clone(),
            s1,
            s2,
            BoostStatus::Met,
            SwapLog::default(),
        ));
    }

    let components = alternating_components(m1, m2)?;
    let candidates = switcher_candidates(graph, &components)?;
    if candidates.is_empty() {
        return Ok(finish(
            m1.clone(),
            m2.clone(),
            s1,
            s2,
            BoostStatus::BestEffort("no switchers".into()),
            SwapLog::default(),
        ));
    }
    let available = candidates.len();
    let mut side = majority_side(candidates);
    if mode == BoostMode::Minimal {
        // Largest transfer first; component order is already canonical by
        // minimum vertex, which breaks ties.
        side.sort_by_key(|c| -c.delta().abs());
    }

    let mut cur1 = m1.clone();
    let mut cur2 = m2.clone();
    let mut log = SwapLog::default();
    for cand in &side {
        if mode == BoostMode::Minimal && met(s1, s2) {
            break;
        }
        let (n1, n2) = swap_switcher(&cur1, &cur2, &cand.cycle)?;
        let before = (s1, s2);
        s1 += cand.delta();
        s2 -= cand.delta();
        log.records.push(SwapRecord {
            cycle: cand.cycle.clone(),
            before,
            after: (s1, s2),
        });
        cur1 = n1;
        cur2 = n2;
    }

    let status = if met(s1, s2) {
        BoostStatus::Met
    } else {
        let needed = (target * n_edges as f64 + s1.abs() as f64) / 2.0;
        BoostStatus::BestEffort(format!(
            "{} switchers available, roughly {} needed for the one-sided bound",
            available,
            needed.ceil() as i64
        ))
    };
    Ok(finish(cur1, cur2, s1, s2, status, log))
}

// ---------------------------------------------------------------------------
// Triple boosting
// ---------------------------------------------------------------------------

pub fn boost_triple(
    graph: &SignedCompleteGraph,
    psi1: &PerfectMatching,
    psi2: &PerfectMatching,
    psi3: &PerfectMatching,
    primary_target: f64,
    final_target: f64,
) -> Result<BoostOutcome> {
    boost_triple_centered(
        graph,
        psi1,
        psi2,
        psi3,
        primary_target,
        final_target,
        Ratio::new(0, 1),
    )
}

/// Three sequential stages: boost `psi1` against `psi2` to the primary
/// target, then `psi2'` against `psi3` and finally (minimally) `psi3'`
/// against `psi1'` to the final target, keeping swapped cycles vertex-
/// disjoint across stages.
pub fn boost_triple_centered(
    graph: &SignedCompleteGraph,
    psi1: &PerfectMatching,
    psi2: &PerfectMatching,
    psi3: &PerfectMatching,
    primary_target: f64,
    final_target: f64,
    center: Disc,
) -> Result<BoostOutcome> {
    if final_target > primary_target {
        return Err(Error::Precondition(format!(
            "final target {final_target} exceeds primary target {primary_target}"
        )));
    }
    let nv = graph.num_vertices();
    let n_edges = nv / 2;
    let primary = approx_ratio(primary_target);
    let fin = approx_ratio(final_target);
    let disc = |s: i64| centered_disc(s, n_edges, center);

    let mut m = [psi1.clone(), psi2.clone(), psi3.clone()];
    let mut s = [
        graph.signed_sum_of(psi1.edges())?,
        graph.signed_sum_of(psi2.edges())?,
        graph.signed_sum_of(psi3.edges())?,
    ];
    let mut used = vec![false; nv];
    let mut log = SwapLog::default();
    let mut limiting: Option<&'static str> = None;

    // Stage 1: psi1 vs psi2, swap the whole majority side.
    if disc(s[0]) < primary {
        let components = alternating_components(&m[0], &m[1])?;
        let mut side = majority_side(switcher_candidates(graph, &components)?);
        side.retain(|c| !touches(&c.cycle, &used));
        if side.is_empty() {
            limiting = Some("stage 1: no usable switchers");
        }
        for cand in &side {
            let (n1, n2) = swap_switcher(&m[0], &m[1], &cand.cycle)?;
            let before = (s[0], s[1]);
            s[0] += cand.delta();
            s[1] -= cand.delta();
            log.records.push(SwapRecord {
                cycle: cand.cycle.clone(),
                before,
                after: (s[0], s[1]),
            });
            mark(&cand.cycle, &mut used);
            m[0] = n1;
            m[1] = n2;
        }
        if limiting.is_none() && disc(s[0]) < primary {
            limiting = Some("stage 1: primary target not reached");
        }
    }
    // Stage 2: psi2' vs psi3, same wholesale swap to the final target.
    if disc(s[1]) < fin {
        let components = alternating_components(&m[1], &m[2])?;
        let mut side = majority_side(switcher_candidates(graph, &components)?);
        side.retain(|c| !touches(&c.cycle, &used));
        if side.is_empty() && limiting.is_none() {
            limiting = Some("stage 2: no usable switchers");
        }
        for cand in &side {
            let (n1, n2) = swap_switcher(&m[1], &m[2], &cand.cycle)?;
            let before = (s[1], s[2]);
            s[1] += cand.delta();
            s[2] -= cand.delta();
            log.records.push(SwapRecord {
                cycle: cand.cycle.clone(),
                before,
                after: (s[1], s[2]),
            });
            mark(&cand.cycle, &mut used);
            m[1] = n1;
            m[2] = n2;
        }
        if limiting.is_none() && disc(s[1]) < fin {
            limiting = Some("stage 2: final target not reached");
        }
    }

    // Stage 3: psi3' vs psi1', swapping the minimum count that lifts psi3''
    // to the final target while keeping psi1'' above it. The swapped count
    // J'' obeys the ledger: disc(psi1'') >= primary_achieved - 4|J''|/n and
    // disc(psi3'') >= 2|J''|/n - disc(psi3').
    if disc(s[2]) < fin {
        let components = alternating_components(&m[2], &m[0])?;
        let mut side = majority_side(switcher_candidates(graph, &components)?);
        side.retain(|c| !touches(&c.cycle, &used));
        side.sort_by_key(|c| -c.delta().abs());
        // Minimal feasible prefix; if none is feasible, the prefix whose
        // worse matching is best (smaller count on ties).
        let mut best: (usize, Disc) = (0, disc(s[2]).min(disc(s[0])));
        let mut chosen = None;
        let (mut t2, mut t0) = (s[2], s[0]);
        for (count, cand) in side.iter().enumerate() {
            t2 += cand.delta();
            t0 -= cand.delta();
            let worse = disc(t2).min(disc(t0));
            if disc(t2) >= fin && disc(t0) >= fin {
                chosen = Some(count + 1);
                break;
            }
            if worse > best.1 {
                best = (count + 1, worse);
            }
        }
        let take = chosen.unwrap_or(best.0);
        if chosen.is_none() && limiting.is_none() {
            limiting = Some("stage 3: final target not reached");
        }
        for cand in side.iter().take(take) {
            let (n2, n0) = swap_switcher(&m[2], &m[0], &cand.cycle)?;
            let before = (s[2], s[0]);
            s[2] += cand.delta();
            s[0] -= cand.delta();
            log.records.push(SwapRecord {
                cycle: cand.cycle.clone(),
                before,
                after: (s[2], s[0]),
            });
            mark(&cand.cycle, &mut used);
            m[2] = n2;
            m[0] = n0;
        }
    }
    let achieved = vec![disc(s[0]), disc(s[1]), disc(s[2])];
    let status = if achieved.iter().all(|d| *d >= fin) {
        BoostStatus::Met
    } else {
        BoostStatus::BestEffort(
            limiting
                .unwrap_or("final target not reached")
                .to_string(),
        )
    };
    let [m1, m2, m3] = m;
    Ok(BoostOutcome {
        matchings: vec![m1, m2, m3],
        achieved,
        target: final_target,
        status,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::SigningSpec;
    use std::collections::BTreeSet;

    fn union_edges(ms: &[PerfectMatching]) -> BTreeSet<usize> {
        ms.iter().flat_map(|m| m.edges().iter().copied()).collect()
    }

    #[test]
    fn swap_full_exchange_on_k4() {
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3)], 4).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 2), (1, 3)], 4).unwrap();
        let q = FourCycle::new([0, 1, 3, 2]).unwrap();
        let (a, b) = swap_switcher(&m1, &m2, &q).unwrap();
        assert_eq!(a, m2);
        assert_eq!(b, m1);
        // Involution.
        let (a2, b2) = swap_switcher(&a, &b, &q).unwrap();
        assert_eq!(a2, m1);
        assert_eq!(b2, m2);
    }

    #[test]
    fn swap_type4_sum_exchange() {
        // sigma(01)=sigma(23)=+1, sigma(02)=sigma(13)=-1.
        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3)], 4).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 2), (1, 3)], 4).unwrap();
        assert_eq!(g.signed_sum_of(m1.edges()).unwrap(), 2);
        assert_eq!(g.signed_sum_of(m2.edges()).unwrap(), -2);
        let q = FourCycle::new([0, 1, 3, 2]).unwrap();
        let (a, b) = swap_switcher(&m1, &m2, &q).unwrap();
        assert_eq!(g.signed_sum_of(a.edges()).unwrap(), -2);
        assert_eq!(g.signed_sum_of(b.edges()).unwrap(), 2);
    }

    #[test]
    fn swap_rejects_non_component() {
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)], 8).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 3), (1, 2), (4, 7), (5, 6)], 8).unwrap();
        let q = FourCycle::new([0, 1, 4, 5]).unwrap();
        assert!(matches!(
            swap_switcher(&m1, &m2, &q),
            Err(Error::NotAComponent)
        ));
    }

    #[test]
    fn boost_pair_no_switchers() {
        let g = SignedCompleteGraph::all_plus(8).unwrap();
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)], 8).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 3), (1, 2), (4, 7), (5, 6)], 8).unwrap();
        // disc is already 1, so any reachable target returns Met unchanged.
        let out = boost_pair(&g, &m1, &m2, 0.9, BoostMode::Paper).unwrap();
        assert_eq!(out.status, BoostStatus::Met);
        assert!(out.log.is_empty());

        // A mixed signing with no switchers (whole union is one component
        // on the second pair after flipping all of m1 and m2 edges alike is
        // hard to arrange; instead force a low target miss on a
        // switcher-free instance): make every 4-cycle balanced by flipping
        // nothing but requiring target above 1 is ill-typed, so use a
        // 2-clique style signing whose pair components are type 1/2 only.
        let neg: Vec<(usize, usize)> = vec![(0, 1), (2, 3), (0, 3), (1, 2)];
        let g = SignedCompleteGraph::from_negative_edges(8, &neg).unwrap();
        // Component {0,1,2,3} is type 2 (all four edges negative), not a
        // switcher; component {4,5,6,7} is type 1. S(m1)=0, S(m2)=0.
        let out = boost_pair(&g, &m1, &m2, 0.5, BoostMode::Paper).unwrap();
        assert_eq!(
            out.status,
            BoostStatus::BestEffort("no switchers".into())
        );
        assert_eq!(out.matchings[0], m1);
        assert_eq!(out.matchings[1], m2);
    }

    #[test]
    fn boost_pair_two_opposed_type4_components() {
        // Component A ({0..3}) type 4 with m1 positive; component B
        // ({4..7}) type 4 with m2 positive. S(m1)=S(m2)=0.
        let neg = vec![(0, 3), (1, 2), (4, 5), (6, 7)];
        let g = SignedCompleteGraph::from_negative_edges(8, &neg).unwrap();
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)], 8).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 3), (1, 2), (4, 7), (5, 6)], 8).unwrap();
        assert_eq!(g.signed_sum_of(m1.edges()).unwrap(), 0);
        assert_eq!(g.signed_sum_of(m2.edges()).unwrap(), 0);

        // Tie |J1| = |J2| breaks to J1 = {A}. One swap meets 0.25.
        let out = boost_pair(&g, &m1, &m2, 0.25, BoostMode::Paper).unwrap();
        assert_eq!(out.status, BoostStatus::Met);
        assert_eq!(out.log.len(), 1);
        let s1 = g.signed_sum_of(out.matchings[0].edges()).unwrap();
        let s2 = g.signed_sum_of(out.matchings[1].edges()).unwrap();
        assert_eq!((s1, s2), (-4, 4));
        assert_eq!(
            union_edges(&[m1.clone(), m2.clone()]),
            union_edges(&out.matchings)
        );
    }

    #[test]
    fn boost_pair_minimal_stops_early() {
        // Four type-4 components on 16 vertices: A, B favour m1; C, D
        // favour m2. All sums start at 0; one swap already meets 0.2 but
        // paper mode swaps the whole side.
        let mut neg = vec![(0, 3), (1, 2), (4, 7), (5, 6)]; // A, B: m2 edges negative
        neg.extend([(8, 9), (10, 11), (12, 13), (14, 15)]); // C, D: m1 edges negative
        let g = SignedCompleteGraph::from_negative_edges(16, &neg).unwrap();
        let pairs1: Vec<(usize, usize)> =
            (0..8).map(|i| (2 * i, 2 * i + 1)).collect();
        let pairs2: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| [(4 * i, 4 * i + 3), (4 * i + 1, 4 * i + 2)])
            .collect();
        let m1 = PerfectMatching::from_pairs(&pairs1, 16).unwrap();
        let m2 = PerfectMatching::from_pairs(&pairs2, 16).unwrap();
        assert_eq!(g.signed_sum_of(m1.edges()).unwrap(), 0);
        assert_eq!(g.signed_sum_of(m2.edges()).unwrap(), 0);

        let minimal = boost_pair(&g, &m1, &m2, 0.2, BoostMode::Minimal).unwrap();
        assert_eq!(minimal.status, BoostStatus::Met);
        assert_eq!(minimal.log.len(), 1);

        let paper = boost_pair(&g, &m1, &m2, 0.2, BoostMode::Paper).unwrap();
        assert_eq!(paper.status, BoostStatus::Met);
        assert_eq!(paper.log.len(), 2);
        for out in [&minimal, &paper] {
            for r in &out.log.records {
                assert_eq!(r.after.0 + r.after.1, r.before.0 + r.before.1);
                assert!(matches!((r.after.0 - r.before.0).abs(), 2 | 4));
            }
            assert_eq!(
                union_edges(&[m1.clone(), m2.clone()]),
                union_edges(&out.matchings)
            );
        }
    }

    #[test]
    fn boost_pair_idempotent_when_met() {
        let neg = vec![(0, 3), (1, 2), (4, 5), (6, 7)];
        let g = SignedCompleteGraph::from_negative_edges(8, &neg).unwrap();
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)], 8).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 3), (1, 2), (4, 7), (5, 6)], 8).unwrap();
        let out = boost_pair(&g, &m1, &m2, 0.25, BoostMode::Paper).unwrap();
        let again = boost_pair(&g, &out.matchings[0], &out.matchings[1], 0.25, BoostMode::Paper)
            .unwrap();
        assert_eq!(again.status, BoostStatus::Met);
        assert!(again.log.is_empty());
        assert_eq!(again.matchings, out.matchings);
    }

    fn k4_factor_matchings() -> [PerfectMatching; 3] {
        [
            PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)], 8).unwrap(),
            PerfectMatching::from_pairs(&[(0, 2), (1, 3), (4, 6), (5, 7)], 8).unwrap(),
            PerfectMatching::from_pairs(&[(0, 3), (1, 2), (4, 7), (5, 6)], 8).unwrap(),
        ]
    }

    #[test]
    fn boost_triple_all_plus_met() {
        let g = SignedCompleteGraph::all_plus(8).unwrap();
        let [p1, p2, p3] = k4_factor_matchings();
        let out = boost_triple(&g, &p1, &p2, &p3, 0.5, 0.25).unwrap();
        assert_eq!(out.status, BoostStatus::Met);
        assert!(out.log.is_empty());
        assert!(out.achieved.iter().all(|d| *d == Ratio::new(1, 1)));
    }

    #[test]
    fn boost_triple_rejects_bad_targets() {
        let g = SignedCompleteGraph::all_plus(8).unwrap();
        let [p1, p2, p3] = k4_factor_matchings();
        assert!(boost_triple(&g, &p1, &p2, &p3, 0.1, 0.5).is_err());
    }

    #[test]
    fn boost_triple_randomized_invariants() {
        let [p1, p2, p3] = k4_factor_matchings();
        for seed in 0..40 {
            let g =
                SignedCompleteGraph::generate(8, &SigningSpec::PBiased { p: 0.5 }, seed).unwrap();
            let out = boost_triple(&g, &p1, &p2, &p3, 0.5, 0.25).unwrap();
            // Union preservation and conservation.
            assert_eq!(
                union_edges(&[p1.clone(), p2.clone(), p3.clone()]),
                union_edges(&out.matchings)
            );
            for r in &out.log.records {
                assert_eq!(r.after.0 + r.after.1, r.before.0 + r.before.1);
                assert!(matches!((r.after.0 - r.before.0).abs(), 2 | 4));
            }
            // Achieved values recompute from raw edges.
            for (m, d) in out.matchings.iter().zip(out.achieved.iter()) {
                let s = g.signed_sum_of(m.edges()).unwrap();
                assert_eq!(Ratio::new(s, 4).abs(), *d);
            }
            // Status consistency.
            let all_met = out.achieved.iter().all(|d| *d >= Ratio::new(1, 4));
            assert_eq!(out.status == BoostStatus::Met, all_met);
            // Swapped cycles across the run are vertex-disjoint per stage
            // pairing; sanity-check matchings stay valid partitions.
            let mut seen = BTreeSet::new();
            for m in &out.matchings {
                for &e in m.edges() {
                    assert!(seen.insert(e));
                }
            }
        }
    }

    #[test]
    fn one_sided_swap_bound_randomized() {
        // If every swapped component favours m1 and enough are swapped,
        // |S(m1')| >= 2*(#swapped) - |S(m1)| exactly.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let nv = 2 * (2 + rng.gen_range(0..7)); // 4..=16
            let g = SignedCompleteGraph::generate(
                nv,
                &SigningSpec::PBiased { p: 0.5 },
                rng.gen(),
            )
            .unwrap();
            let rr = crate::factor::round_robin(nv).unwrap();
            let m1 = rr.matchings[0].clone();
            let m2 = rr.matchings[1].clone();
            let s1 = g.signed_sum_of(m1.edges()).unwrap();
            let comps = alternating_components(&m1, &m2).unwrap();
            let one_sided: Vec<_> = switcher_candidates(&g, &comps)
                .unwrap()
                .into_iter()
                .filter(|c| c.s1 > c.s2)
                .collect();
            if one_sided.is_empty() {
                continue;
            }
            let (mut a, mut b) = (m1.clone(), m2.clone());
            for c in &one_sided {
                let (na, nb) = swap_switcher(&a, &b, &c.cycle).unwrap();
                a = na;
                b = nb;
            }
            let s1p = g.signed_sum_of(a.edges()).unwrap();
            let j = one_sided.len() as i64;
            if 2 * j >= s1.abs() {
                assert!(s1p.abs() >= 2 * j - s1.abs(), "nv={nv} j={j} s1={s1} s1p={s1p}");
            }
            // Conservation regardless.
            let s2 = g.signed_sum_of(m2.edges()).unwrap();
            let s2p = g.signed_sum_of(b.edges()).unwrap();
            assert_eq!(s1 + s2, s1p + s2p);
        }
    }
}
