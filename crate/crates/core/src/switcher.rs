//! Signed 4-cycles: the six sign types, switcher detection, exact and
//! sampled censuses, alternating components of matching pairs, degree
//! censuses, and the dependent-random-choice witness search.
//!
//! A 4-cycle is a switcher when its two perfect matchings have unequal
//! signed sums; those are exactly the types 4, 5 and 6.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signed::{
    edge_index, EdgeIndex, PerfectMatching, PositiveAdjacency, SignedCompleteGraph, Vertex,
};

/// A 4-cycle `v1-v2-v3-v4-v1` with its two matchings `{v1v2, v3v4}` and
/// `{v2v3, v4v1}`. Canonical form: `v1` is the minimum vertex and `v2 < v4`,
/// so every undirected 4-cycle has exactly one representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FourCycle {
    pub vertices: [Vertex; 4],
}

impl FourCycle {
    pub fn new(vertices: [Vertex; 4]) -> Result<Self> {
        let [a, b, c, d] = vertices;
        let mut sorted = vertices;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!("degenerate 4-cycle {vertices:?}")));
        }
        if a != sorted[0] || b >= d {
            return Err(Error::Structure(format!(
                "non-canonical 4-cycle {vertices:?}: want minimum first and v2 < v4"
            )));
        }
        let _ = c;
        Ok(FourCycle { vertices })
    }

    /// Canonical representative of the undirected cycle through the given
    /// vertex order.
    pub fn canonicalize(vertices: [Vertex; 4]) -> Result<Self> {
        let mut sorted = vertices;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structure(format!("degenerate 4-cycle {vertices:?}")));
        }
        let pos = vertices
            .iter()
            .position(|&v| v == sorted[0])
            .expect("minimum present");
        let at = |i: usize| vertices[(pos + i) % 4];
        let (b, d) = (at(1), at(3));
        let cycle = if b < d {
            [at(0), at(1), at(2), at(3)]
        } else {
            [at(0), at(3), at(2), at(1)]
        };
        FourCycle::new(cycle)
    }

    /// Edge pair `{v1v2, v3v4}`.
    pub fn psi1(&self, num_vertices: usize) -> Result<[EdgeIndex; 2]> {
        let [a, b, c, d] = self.vertices;
        Ok([
            edge_index(a, b, num_vertices)?,
            edge_index(c, d, num_vertices)?,
        ])
    }

    /// Edge pair `{v2v3, v4v1}`.
    pub fn psi2(&self, num_vertices: usize) -> Result<[EdgeIndex; 2]> {
        let [a, b, c, d] = self.vertices;
        Ok([
            edge_index(b, c, num_vertices)?,
            edge_index(d, a, num_vertices)?,
        ])
    }

    pub fn edges(&self, num_vertices: usize) -> Result<[EdgeIndex; 4]> {
        let p1 = self.psi1(num_vertices)?;
        let p2 = self.psi2(num_vertices)?;
        Ok([p1[0], p2[0], p1[1], p2[1]])
    }
}

/// The six sign arrangements of a 4-cycle.
pub fn classify_four_cycle(
    graph: &SignedCompleteGraph,
    cycle: &FourCycle,
) -> Result<(u8, bool)> {
    let [a, b, c, d] = cycle.vertices;
    // Signs around the cycle in traversal order.
    let s = [
        graph.sign(a, b)?,
        graph.sign(b, c)?,
        graph.sign(c, d)?,
        graph.sign(d, a)?,
    ];
    let ty = classify_signs(s);
    Ok((ty, is_switcher_type(ty)))
}

pub fn is_switcher_type(ty: u8) -> bool {
    matches!(ty, 4 | 5 | 6)
}

/// Type from the signs in traversal order: all `+` is 1, all `-` is 2, two
/// adjacent of each is 3, alternating is 4, one `-` is 5, one `+` is 6.
pub fn classify_signs(s: [i8; 4]) -> u8 {
    match s.iter().filter(|&&x| x == -1).count() {
        0 => 1,
        4 => 2,
        1 => 5,
        3 => 6,
        2 => {
            if s[0] == s[2] {
                4 // opposite edges agree: alternating
            } else {
                3
            }
        }
        _ => unreachable!(),
    }
}

/// Census over the `3 * C(m, 4)` canonical 4-cycles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SwitcherCensus {
    pub counts_by_type: BTreeMap<u8, u64>,
    pub total_c4: u64,
    pub switcher_count: u64,
    pub mode: CensusMode,
    /// 95% normal-approximation half-width on `switcher_count`, sampled
    /// mode only.
    pub ci_halfwidth: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CensusMode {
    Exact,
    Sampled { samples: u64, seed: u64 },
}

fn total_canonical_c4(num_vertices: u64) -> u64 {
    3 * num_vertices * (num_vertices - 1) * (num_vertices - 2) * (num_vertices - 3) / 24
}

pub fn count_switchers(graph: &SignedCompleteGraph, mode: CensusMode) -> Result<SwitcherCensus> {
    let nv = graph.num_vertices();
    if nv < 4 {
        return Err(Error::TooSmall {
            what: "switcher census",
            num_vertices: nv,
            min: 4,
        });
    }
    let total = total_canonical_c4(nv as u64);
    let mut counts: BTreeMap<u8, u64> = (1..=6).map(|t| (t, 0)).collect();

    match mode {
        CensusMode::Exact => {
            for a in 0..nv {
                for b in a + 1..nv {
                    for c in b + 1..nv {
                        for d in c + 1..nv {
                            for cyc in subset_cycles(a, b, c, d) {
                                let (ty, _) = classify_four_cycle(graph, &cyc)?;
                                *counts.get_mut(&ty).expect("1..=6") += 1;
                            }
                        }
                    }
                }
            }
            let switcher_count = counts[&4] + counts[&5] + counts[&6];
            Ok(SwitcherCensus {
                counts_by_type: counts,
                total_c4: total,
                switcher_count,
                mode,
                ci_halfwidth: None,
            })
        }
        CensusMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::Precondition("sampled census needs samples >= 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits: BTreeMap<u8, u64> = (1..=6).map(|t| (t, 0)).collect();
            for _ in 0..samples {
                let quad = sample_distinct4(&mut rng, nv);
                let which = rng.gen_range(0..3);
                let cyc = subset_cycles(quad[0], quad[1], quad[2], quad[3])[which];
                let (ty, _) = classify_four_cycle(graph, &cyc)?;
                *hits.get_mut(&ty).expect("1..=6") += 1;
            }
            let switcher_hits = hits[&4] + hits[&5] + hits[&6];
            let p_hat = switcher_hits as f64 / samples as f64;
            let ci = 1.96 * (p_hat * (1.0 - p_hat) / samples as f64).sqrt() * total as f64;
            for (_, v) in counts.iter_mut() {
                *v = 0;
            }
            for (t, h) in hits {
                // Round-to-nearest scaled estimates.
                counts.insert(t, ((h as f64 / samples as f64) * total as f64).round() as u64);
            }
            let switcher_count = (p_hat * total as f64).round() as u64;
            Ok(SwitcherCensus {
                counts_by_type: counts,
                total_c4: total,
                switcher_count,
                mode,
                ci_halfwidth: Some(ci),
            })
        }
    }
}

/// The three canonical 4-cycles on a sorted quadruple `a < b < c < d`.
fn subset_cycles(a: Vertex, b: Vertex, c: Vertex, d: Vertex) -> [FourCycle; 3] {
    [
        FourCycle { vertices: [a, b, c, d] },
        FourCycle { vertices: [a, b, d, c] },
        FourCycle { vertices: [a, c, b, d] },
    ]
}

fn sample_distinct4(rng: &mut ChaCha8Rng, nv: usize) -> [Vertex; 4] {
    loop {
        let mut q = [0usize; 4];
        for slot in q.iter_mut() {
            *slot = rng.gen_range(0..nv);
        }
        let mut sorted = q;
        sorted.sort_unstable();
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            return sorted;
        }
    }
}

// ---------------------------------------------------------------------------
// Alternating components
// ---------------------------------------------------------------------------

/// One even alternating cycle of `m1 u m2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingCycle {
    /// Traversal starting at the minimum vertex along its `m1` edge.
    pub vertices: Vec<Vertex>,
    /// 4-cycles are switcher candidates.
    pub is_four_cycle: bool,
}

impl AlternatingCycle {
    /// Edges at even positions (the `m1` edges of the traversal).
    pub fn m1_edges(&self, num_vertices: usize) -> Result<Vec<EdgeIndex>> {
        self.alternation_edges(num_vertices, 0)
    }

    pub fn m2_edges(&self, num_vertices: usize) -> Result<Vec<EdgeIndex>> {
        self.alternation_edges(num_vertices, 1)
    }

    fn alternation_edges(&self, num_vertices: usize, parity: usize) -> Result<Vec<EdgeIndex>> {
        let k = self.vertices.len();
        (0..k)
            .filter(|i| i % 2 == parity)
            .map(|i| edge_index(self.vertices[i], self.vertices[(i + 1) % k], num_vertices))
            .collect()
    }

    pub fn four_cycle(&self) -> Result<FourCycle> {
        if !self.is_four_cycle {
            return Err(Error::Structure("not a 4-cycle component".into()));
        }
        FourCycle::canonicalize([
            self.vertices[0],
            self.vertices[1],
            self.vertices[2],
            self.vertices[3],
        ])
    }
}

/// Connected components of `m1 u m2`, each an even cycle alternating
/// between the two matchings. Traversal starts at the component's minimum
/// vertex along its `m1` edge, so even positions are `m1` edges.
pub fn alternating_components(
    m1: &PerfectMatching,
    m2: &PerfectMatching,
) -> Result<Vec<AlternatingCycle>> {
    if m1.num_vertices() != m2.num_vertices() {
        return Err(Error::VertexSetMismatch);
    }
    if let Some(&shared) = m1.edges().iter().find(|e| m2.contains(**e)) {
        return Err(Error::MatchingOverlap { edge_index: shared });
    }
    let nv = m1.num_vertices();
    let mut seen = vec![false; nv];
    let mut cycles = Vec::new();
    for start in 0..nv {
        if seen[start] {
            continue;
        }
        let mut vertices = vec![start];
        seen[start] = true;
        let mut cur = start;
        let mut use_m1 = true;
        loop {
            let next = if use_m1 { m1.partner(cur)? } else { m2.partner(cur)? };
            use_m1 = !use_m1;
            if next == start {
                break;
            }
            seen[next] = true;
            vertices.push(next);
            cur = next;
        }
        let is_four_cycle = vertices.len() == 4;
        cycles.push(AlternatingCycle {
            vertices,
            is_four_cycle,
        });
    }
    Ok(cycles)
}

// ---------------------------------------------------------------------------
// Degree census and dependent random choice
// ---------------------------------------------------------------------------

/// `(N1, N2)`: how many vertices have `d^+ >= threshold_fraction * n`
/// (resp. `d^-`), where `n = num_vertices / 2`.
pub fn degree_census(graph: &SignedCompleteGraph, threshold_fraction: f64) -> (usize, usize) {
    let n = graph.num_vertices() as f64 / 2.0;
    let threshold = threshold_fraction * n;
    let mut n1 = 0;
    let mut n2 = 0;
    for v in 0..graph.num_vertices() {
        let d = graph.degree_stats(v).expect("valid vertex");
        if d.d_plus as f64 >= threshold {
            n1 += 1;
        }
        if d.d_minus as f64 >= threshold {
            n2 += 1;
        }
    }
    (n1, n2)
}

/// Thresholds for the witness search, all as fractions of `n`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DrcThresholds {
    pub degree_threshold: f64,
    pub good_pair_threshold: f64,
    pub min_degree_target: f64,
}

impl DrcThresholds {
    /// Asymptotic-analysis constants: degree 1.89n, good pairs need
    /// n/10^4 common neighbors, peel to minimum degree n/16000.
    pub fn paper() -> Self {
        DrcThresholds {
            degree_threshold: 1.89,
            good_pair_threshold: 1e-4,
            min_degree_target: 1.0 / 16000.0,
        }
    }

    /// Constants usable at test sizes (the asymptotic ones are vacuous
    /// there).
    pub fn desk() -> Self {
        DrcThresholds {
            degree_threshold: 1.89,
            good_pair_threshold: 0.05,
            min_degree_target: 0.1,
        }
    }
}

/// Witness for the constructive steps of the switcher-abundance argument.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrcWitness {
    pub center: Vertex,
    pub good_pairs: u64,
    pub x_side: Vec<Vertex>,
    pub y_side: Vec<Vertex>,
    pub thresholds: DrcThresholds,
}

/// Picks the vertex `v` maximizing the number of good pairs in
/// `N^+(v) x N^-(v)`, then peels minimum-good-pair-degree vertices (lowest
/// id on ties) until every survivor has at least `min_degree_target * n`
/// good partners on the other side. Returns `None` when peeling empties
/// the graph or no good pairs exist.
pub fn drc_witness(
    graph: &SignedCompleteGraph,
    thresholds: DrcThresholds,
) -> Option<DrcWitness> {
    let nv = graph.num_vertices();
    let n = nv as f64 / 2.0;
    let good_cut = (thresholds.good_pair_threshold * n).ceil() as usize;

    let pos = PositiveAdjacency::build(graph);
    let words = pos.words_per_row;
    let full_masks = full_row_masks(nv, words);

    // good[x][y]: |N+(x) cap N-(y)| >= cut, computed via bitset rows.
    let mut good = vec![false; nv * nv];
    for x in 0..nv {
        for y in 0..nv {
            if x == y {
                continue;
            }
            let mut common = 0usize;
            for w in 0..words {
                let neg_y = !pos.row(y)[w] & full_masks[w];
                common += (pos.row(x)[w] & neg_y).count_ones() as usize;
            }
            // z = y is not allowed: y sits in the complement of its own
            // positive row, so it was counted whenever sigma(xy) = +1.
            // z = x never appears (no bit x in row x).
            if bit_set(pos.row(x), y) {
                common -= 1;
            }
            good[x * nv + y] = common >= good_cut;
        }
    }

    // Center with the most good pairs across N+(v) x N-(v).
    let mut best: Option<(Vertex, u64)> = None;
    for v in 0..nv {
        let mut count = 0u64;
        for x in 0..nv {
            if x == v || !bit_set(pos.row(v), x) {
                continue;
            }
            for y in 0..nv {
                if y == v || y == x || bit_set(pos.row(v), y) {
                    continue;
                }
                if good[x * nv + y] {
                    count += 1;
                }
            }
        }
        match best {
            Some((_, c)) if c >= count => {}
            _ => best = Some((v, count)),
        }
    }
    let (center, good_pairs) = best?;
    if good_pairs == 0 {
        return None;
    }

    let mut x_side: Vec<Vertex> = (0..nv)
        .filter(|&x| x != center && bit_set(pos.row(center), x))
        .collect();
    let mut y_side: Vec<Vertex> = (0..nv)
        .filter(|&y| y != center && !bit_set(pos.row(center), y))
        .collect();

    let min_deg = (thresholds.min_degree_target * n).ceil() as usize;
    loop {
        let deg_x: Vec<usize> = x_side
            .iter()
            .map(|&x| y_side.iter().filter(|&&y| good[x * nv + y]).count())
            .collect();
        let deg_y: Vec<usize> = y_side
            .iter()
            .map(|&y| x_side.iter().filter(|&&x| good[x * nv + y]).count())
            .collect();
        // Lowest-id vertex of minimum degree below target, sides merged.
        let worst_x = deg_x
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < min_deg)
            .min_by_key(|&(i, &d)| (d, x_side[i]));
        let worst_y = deg_y
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < min_deg)
            .min_by_key(|&(i, &d)| (d, y_side[i]));
        match (worst_x, worst_y) {
            (None, None) => break,
            (Some((i, &dx)), Some((j, &dy))) => {
                if (dx, x_side[i]) <= (dy, y_side[j]) {
                    x_side.remove(i);
                } else {
                    y_side.remove(j);
                }
            }
            (Some((i, _)), None) => {
                x_side.remove(i);
            }
            (None, Some((j, _))) => {
                y_side.remove(j);
            }
        }
        if x_side.is_empty() || y_side.is_empty() {
            return None;
        }
    }

    Some(DrcWitness {
        center,
        good_pairs,
        x_side,
        y_side,
        thresholds,
    })
}

fn full_row_masks(nv: usize, words: usize) -> Vec<u64> {
    let mut masks = vec![u64::MAX; words];
    let tail = nv % 64;
    if tail != 0 {
        masks[words - 1] = (1u64 << tail) - 1;
    }
    masks
}

fn bit_set(row: &[u64], idx: usize) -> bool {
    row[idx / 64] & (1 << (idx % 64)) != 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed::SigningSpec;

    fn cycle_on_k4() -> FourCycle {
        FourCycle::new([0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert!(FourCycle::new([1, 0, 2, 3]).is_err());
        assert!(FourCycle::new([0, 3, 2, 1]).is_err());
        assert!(FourCycle::new([0, 1, 1, 3]).is_err());
        let c = FourCycle::canonicalize([2, 1, 3, 0]).unwrap();
        // Cycle 2-1-3-0: rotate to 0: 0,2,1,3; v2=2 < v4=3 keeps direction.
        assert_eq!(c.vertices, [0, 2, 1, 3]);
    }

    #[test]
    fn classify_matches_figure() {
        let g = SignedCompleteGraph::all_plus(4).unwrap();
        assert_eq!(classify_four_cycle(&g, &cycle_on_k4()).unwrap(), (1, false));

        // Alternating +-+- around 0-1-2-3: negatives on 12 and 30.
        let g = SignedCompleteGraph::from_negative_edges(4, &[(1, 2), (3, 0)]).unwrap();
        let (ty, sw) = classify_four_cycle(&g, &cycle_on_k4()).unwrap();
        assert_eq!((ty, sw), (4, true));
        let s1 = g.signed_sum_of(&cycle_on_k4().psi1(4).unwrap()).unwrap();
        let s2 = g.signed_sum_of(&cycle_on_k4().psi2(4).unwrap()).unwrap();
        assert_eq!((s1, s2), (2, -2));

        // One negative edge: type 5.
        let g = SignedCompleteGraph::from_negative_edges(4, &[(3, 0)]).unwrap();
        assert_eq!(classify_four_cycle(&g, &cycle_on_k4()).unwrap(), (5, true));

        // Two adjacent negatives: type 3, not a switcher.
        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(classify_four_cycle(&g, &cycle_on_k4()).unwrap(), (3, false));
    }

    #[test]
    fn classification_agrees_with_definition_exhaustively() {
        // All 16 sign patterns on the cycle 0-1-2-3 inside K_4.
        for mask in 0..16u8 {
            let cycle_pairs = [(0, 1), (1, 2), (2, 3), (3, 0)];
            let negative: Vec<(usize, usize)> = cycle_pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            let g = SignedCompleteGraph::from_negative_edges(4, &negative).unwrap();
            let c = cycle_on_k4();
            let (ty, sw) = classify_four_cycle(&g, &c).unwrap();
            let s1 = g.signed_sum_of(&c.psi1(4).unwrap()).unwrap();
            let s2 = g.signed_sum_of(&c.psi2(4).unwrap()).unwrap();
            assert_eq!(sw, s1 != s2, "mask {mask:04b} type {ty}");
            assert_eq!(sw, is_switcher_type(ty));
        }
    }

    #[test]
    fn global_flip_swaps_types() {
        for mask in 0..16u8 {
            let signs = |m: u8| -> [i8; 4] {
                let mut s = [1i8; 4];
                for (i, slot) in s.iter_mut().enumerate() {
                    if m & (1 << i) != 0 {
                        *slot = -1;
                    }
                }
                s
            };
            let ty = classify_signs(signs(mask));
            let flipped = classify_signs(signs(!mask & 0xf));
            let expect = match ty {
                1 => 2,
                2 => 1,
                3 => 3,
                4 => 4,
                5 => 6,
                6 => 5,
                _ => unreachable!(),
            };
            assert_eq!(flipped, expect);
            assert_eq!(is_switcher_type(ty), is_switcher_type(flipped));
        }
    }

    #[test]
    fn exact_census_all_plus() {
        let g = SignedCompleteGraph::all_plus(8).unwrap();
        let census = count_switchers(&g, CensusMode::Exact).unwrap();
        assert_eq!(census.total_c4, 210);
        assert_eq!(census.counts_by_type[&1], 210);
        assert_eq!(census.switcher_count, 0);
    }

    #[test]
    fn exact_census_one_negative_k4() {
        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1)]).unwrap();
        let census = count_switchers(&g, CensusMode::Exact).unwrap();
        assert_eq!(census.total_c4, 3);
        assert_eq!(census.counts_by_type[&5], 2);
        assert_eq!(census.counts_by_type[&1], 1);
        assert_eq!(census.switcher_count, 2);
    }

    #[test]
    fn census_totals_structure_independent() {
        for seed in 0..3 {
            let g = SignedCompleteGraph::generate(10, &SigningSpec::PBiased { p: 0.5 }, seed)
                .unwrap();
            let census = count_switchers(&g, CensusMode::Exact).unwrap();
            let sum: u64 = census.counts_by_type.values().sum();
            assert_eq!(sum, census.total_c4);
            assert_eq!(census.total_c4, total_canonical_c4(10));
        }
    }

    #[test]
    fn alternating_components_examples() {
        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3)], 4).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 2), (1, 3)], 4).unwrap();
        let comps = alternating_components(&m1, &m2).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices, vec![0, 1, 3, 2]);
        assert!(comps[0].is_four_cycle);

        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5)], 6).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(1, 2), (3, 4), (5, 0)], 6).unwrap();
        let comps = alternating_components(&m1, &m2).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices.len(), 6);

        let m1 = PerfectMatching::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)], 8).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 3), (1, 2), (4, 7), (5, 6)], 8).unwrap();
        let comps = alternating_components(&m1, &m2).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.is_four_cycle));

        // Shared edge is an overlap error.
        let m3 = PerfectMatching::from_pairs(&[(0, 1), (2, 5), (3, 4), (6, 7)], 8).unwrap();
        assert!(matches!(
            alternating_components(&m1, &m3),
            Err(Error::MatchingOverlap { .. })
        ));
    }

    #[test]
    fn alternating_components_cover_and_alternate() {
        let m1 = PerfectMatching::from_pairs(&[(0, 4), (1, 5), (2, 6), (3, 7)], 8).unwrap();
        let m2 = PerfectMatching::from_pairs(&[(0, 5), (1, 6), (2, 7), (3, 4)], 8).unwrap();
        let comps = alternating_components(&m1, &m2).unwrap();
        let total: usize = comps.iter().map(|c| c.vertices.len()).sum();
        assert_eq!(total, 8);
        for c in &comps {
            for e in c.m1_edges(8).unwrap() {
                assert!(m1.contains(e));
            }
            for e in c.m2_edges(8).unwrap() {
                assert!(m2.contains(e));
            }
        }
    }

    #[test]
    fn degree_census_extremes() {
        let g = SignedCompleteGraph::all_plus(20).unwrap();
        assert_eq!(degree_census(&g, 1.89), (20, 0));
        let all_minus =
            SignedCompleteGraph::new(20, vec![-1; crate::signed::edge_count(20)]).unwrap();
        assert_eq!(degree_census(&all_minus, 1.89), (0, 20));
    }

    #[test]
    fn drc_witness_all_plus_is_none() {
        let g = SignedCompleteGraph::all_plus(12).unwrap();
        assert!(drc_witness(&g, DrcThresholds::desk()).is_none());
    }

    #[test]
    fn drc_witness_two_clique() {
        // + inside two 6-sets, - across.
        let mut negative = Vec::new();
        for u in 0..6 {
            for v in 6..12 {
                negative.push((u, v));
            }
        }
        let g = SignedCompleteGraph::from_negative_edges(12, &negative).unwrap();
        let thresholds = DrcThresholds {
            degree_threshold: 1.89,
            good_pair_threshold: 1.0 / 6.0,
            min_degree_target: 1.0 / 6.0,
        };
        let w = drc_witness(&g, thresholds).expect("witness exists");
        assert!(w.good_pairs > 0);
        assert!(!w.x_side.is_empty() && !w.y_side.is_empty());
    }
}
