//! Edge-signed complete graphs: edge indexing, signed sums, discrepancy,
//! degree statistics, and signing generators.
//!
//! Edges of `K_m` are stored in column-major lower-triangular order:
//! edge `{u, v}` with `u < v` has index `v*(v-1)/2 + u`. All signed sums
//! are exact integers and discrepancies exact rationals.

use num_rational::Ratio;
use num_traits::Signed;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeIndex = usize;
/// Exact rational discrepancy value.
pub type Disc = Ratio<i64>;

/// Number of edges of the complete graph on `num_vertices` vertices.
pub fn edge_count(num_vertices: usize) -> usize {
    num_vertices * num_vertices.saturating_sub(1) / 2
}

/// Index of edge `{u, v}`: `max*(max-1)/2 + min`. Symmetric in `u, v` and
/// bijective onto `[0, C(num_vertices, 2))`.
pub fn edge_index(u: Vertex, v: Vertex, num_vertices: usize) -> Result<EdgeIndex> {
    if u == v || u >= num_vertices || v >= num_vertices {
        return Err(Error::InvalidEdge { u, v, num_vertices });
    }
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    Ok(hi * (hi - 1) / 2 + lo)
}

/// Inverse of [`edge_index`]: returns `(u, v)` with `u < v`.
pub fn edge_endpoints(index: EdgeIndex, num_vertices: usize) -> Result<(Vertex, Vertex)> {
    if index >= edge_count(num_vertices) {
        return Err(Error::EdgeIndexOutOfRange {
            index,
            num_vertices,
        });
    }
    // Largest hi with hi*(hi-1)/2 <= index.
    let mut hi = (1 + ((1 + 8 * index) as f64).sqrt() as usize) / 2;
    while hi * (hi - 1) / 2 > index {
        hi -= 1;
    }
    while (hi + 1) * hi / 2 <= index {
        hi += 1;
    }
    let lo = index - hi * (hi - 1) / 2;
    Ok((lo, hi))
}

/// A set of edge indices into a [`SignedCompleteGraph`], kept sorted and
/// duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    edges: Vec<EdgeIndex>,
}

impl EdgeSet {
    pub fn new(mut edges: Vec<EdgeIndex>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        EdgeSet { edges }
    }

    pub fn from_pairs(pairs: &[(Vertex, Vertex)], num_vertices: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            edges.push(edge_index(u, v, num_vertices)?);
        }
        Ok(EdgeSet::new(edges))
    }

    pub fn indices(&self) -> &[EdgeIndex] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A perfect matching of `K_{2n}`: `n` pairwise vertex-disjoint edges
/// covering every vertex. Edge indices are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerfectMatching {
    num_vertices: usize,
    edges: Vec<EdgeIndex>,
}

impl PerfectMatching {
    pub fn new(edges: Vec<EdgeIndex>, num_vertices: usize) -> Result<Self> {
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != num_vertices / 2 || num_vertices % 2 != 0 {
            return Err(Error::Structure(format!(
                "perfect matching on {} vertices needs {} edges, got {}",
                num_vertices,
                num_vertices / 2,
                edges.len()
            )));
        }
        let mut covered = vec![false; num_vertices];
        for &e in &edges {
            let (u, v) = edge_endpoints(e, num_vertices)?;
            if covered[u] || covered[v] {
                return Err(Error::Structure(format!(
                    "edges share vertex in matching (edge {}-{})",
                    u, v
                )));
            }
            covered[u] = true;
            covered[v] = true;
        }
        Ok(PerfectMatching { num_vertices, edges })
    }

    pub fn from_pairs(pairs: &[(Vertex, Vertex)], num_vertices: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            edges.push(edge_index(u, v, num_vertices)?);
        }
        PerfectMatching::new(edges, num_vertices)
    }

    pub fn edges(&self) -> &[EdgeIndex] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet::new(self.edges.clone())
    }

    pub fn contains(&self, e: EdgeIndex) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Partner of `v` in the matching.
    pub fn partner(&self, v: Vertex) -> Result<Vertex> {
        for &e in &self.edges {
            let (a, b) = edge_endpoints(e, self.num_vertices)?;
            if a == v {
                return Ok(b);
            }
            if b == v {
                return Ok(a);
            }
        }
        Err(Error::InvalidVertex {
            v,
            num_vertices: self.num_vertices,
        })
    }

    /// Relabel all endpoints through a permutation of the vertex set.
    pub fn relabel(&self, pi: &[Vertex]) -> Result<PerfectMatching> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &e in &self.edges {
            let (u, v) = edge_endpoints(e, self.num_vertices)?;
            edges.push(edge_index(pi[u], pi[v], self.num_vertices)?);
        }
        PerfectMatching::new(edges, self.num_vertices)
    }
}

/// Positive and negative degree of one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub vertex: Vertex,
    pub d_plus: usize,
    pub d_minus: usize,
}

/// How to generate a signing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SigningSpec {
    AllPlus,
    PBiased { p: f64 },
    ExactCount { positive: usize },
    FromEdgeList { negative_edges: Vec<(Vertex, Vertex)> },
}

/// The complete graph `K_m` with a sign in `{-1, +1}` on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCompleteGraph {
    num_vertices: usize,
    signs: Vec<i8>,
}

impl SignedCompleteGraph {
    pub fn new(num_vertices: usize, signs: Vec<i8>) -> Result<Self> {
        if num_vertices < 2 {
            return Err(Error::TooSmall {
                what: "signed complete graph",
                num_vertices,
                min: 2,
            });
        }
        if signs.len() != edge_count(num_vertices) {
            return Err(Error::InvalidGraph(format!(
                "expected {} signs for {} vertices, got {}",
                edge_count(num_vertices),
                num_vertices,
                signs.len()
            )));
        }
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidGraph(format!("sign must be +1 or -1, got {bad}")));
        }
        Ok(SignedCompleteGraph { num_vertices, signs })
    }

    pub fn all_plus(num_vertices: usize) -> Result<Self> {
        SignedCompleteGraph::new(num_vertices, vec![1; edge_count(num_vertices)])
    }

    /// Deterministic generator: identical `(spec, seed)` yields identical graphs.
    pub fn generate(num_vertices: usize, spec: &SigningSpec, seed: u64) -> Result<Self> {
        let m = edge_count(num_vertices);
        match spec {
            SigningSpec::AllPlus => SignedCompleteGraph::all_plus(num_vertices),
            SigningSpec::PBiased { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Parse(format!("p must lie in [0,1], got {p}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let signs = (0..m)
                    .map(|_| if rng.gen_bool(*p) { 1 } else { -1 })
                    .collect();
                SignedCompleteGraph::new(num_vertices, signs)
            }
            SigningSpec::ExactCount { positive } => {
                if *positive > m {
                    return Err(Error::CountOverflow {
                        requested: *positive,
                        num_vertices,
                        max: m,
                    });
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut signs = vec![-1i8; m];
                for idx in sample(&mut rng, m, *positive) {
                    signs[idx] = 1;
                }
                SignedCompleteGraph::new(num_vertices, signs)
            }
            SigningSpec::FromEdgeList { negative_edges } => {
                SignedCompleteGraph::from_negative_edges(num_vertices, negative_edges)
            }
        }
    }

    pub fn from_negative_edges(
        num_vertices: usize,
        negative_edges: &[(Vertex, Vertex)],
    ) -> Result<Self> {
        let mut signs = vec![1i8; edge_count(num_vertices)];
        for &(u, v) in negative_edges {
            signs[edge_index(u, v, num_vertices)?] = -1;
        }
        SignedCompleteGraph::new(num_vertices, signs)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.signs.len()
    }

    pub fn sign_at(&self, index: EdgeIndex) -> Result<i8> {
        self.signs
            .get(index)
            .copied()
            .ok_or(Error::EdgeIndexOutOfRange {
                index,
                num_vertices: self.num_vertices,
            })
    }

    pub fn sign(&self, u: Vertex, v: Vertex) -> Result<i8> {
        Ok(self.signs[edge_index(u, v, self.num_vertices)?])
    }

    pub fn positive_edge_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == 1).count()
    }

    /// `S_sigma` over a subset of edges: exact integer in `[-|E|, |E|]`.
    pub fn signed_sum(&self, subset: &EdgeSet) -> Result<i64> {
        let mut sum = 0i64;
        for &e in subset.indices() {
            sum += self.sign_at(e)? as i64;
        }
        Ok(sum)
    }

    pub fn signed_sum_of(&self, edges: &[EdgeIndex]) -> Result<i64> {
        let mut sum = 0i64;
        for &e in edges {
            sum += self.sign_at(e)? as i64;
        }
        Ok(sum)
    }

    pub fn total_signed_sum(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// `(signed, absolute)` discrepancy of a nonempty edge subset, exact.
    pub fn discrepancy(&self, subset: &EdgeSet) -> Result<(Disc, Disc)> {
        if subset.is_empty() {
            return Err(Error::EmptySubgraph);
        }
        let sum = self.signed_sum(subset)?;
        let signed = Ratio::new(sum, subset.len() as i64);
        Ok((signed, signed.abs()))
    }

    /// Signed discrepancy of the whole graph.
    pub fn global_disc_signed(&self) -> Disc {
        Ratio::new(self.total_signed_sum(), self.signs.len() as i64)
    }

    pub fn degree_stats(&self, v: Vertex) -> Result<DegreeStats> {
        if v >= self.num_vertices {
            return Err(Error::InvalidVertex {
                v,
                num_vertices: self.num_vertices,
            });
        }
        let mut d_plus = 0;
        for u in 0..self.num_vertices {
            if u != v && self.sign(u, v)? == 1 {
                d_plus += 1;
            }
        }
        Ok(DegreeStats {
            vertex: v,
            d_plus,
            d_minus: self.num_vertices - 1 - d_plus,
        })
    }

    /// Number of `z` outside `{x, y}` with `sigma(xz) = sign_x` and
    /// `sigma(yz) = sign_y`.
    pub fn common_signed_neighbors(
        &self,
        x: Vertex,
        y: Vertex,
        sign_x: i8,
        sign_y: i8,
    ) -> Result<usize> {
        if x == y {
            return Err(Error::InvalidEdge {
                u: x,
                v: y,
                num_vertices: self.num_vertices,
            });
        }
        let mut count = 0;
        for z in 0..self.num_vertices {
            if z == x || z == y {
                continue;
            }
            if self.sign(x, z)? == sign_x && self.sign(y, z)? == sign_y {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

// ---------------------------------------------------------------------------
// JSON signing format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SigningJson {
    num_vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    negative_edges: Option<Vec<(Vertex, Vertex)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signs: Option<String>,
}

impl SignedCompleteGraph {
    /// Serialize listing only the negative edges (sorted, `u < v`).
    pub fn to_json(&self) -> String {
        let mut negative = Vec::new();
        for (idx, &s) in self.signs.iter().enumerate() {
            if s == -1 {
                negative.push(edge_endpoints(idx, self.num_vertices).expect("valid index"));
            }
        }
        serde_json::to_string(&SigningJson {
            num_vertices: self.num_vertices,
            negative_edges: Some(negative),
            signs: None,
        })
        .expect("serializable")
    }

    /// Serialize as a `+`/`-` string in edge-index order.
    pub fn to_json_compact(&self) -> String {
        let s: String = self
            .signs
            .iter()
            .map(|&x| if x == 1 { '+' } else { '-' })
            .collect();
        serde_json::to_string(&SigningJson {
            num_vertices: self.num_vertices,
            negative_edges: None,
            signs: Some(s),
        })
        .expect("serializable")
    }

    /// Parse either JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: SigningJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(s) = parsed.signs {
            let signs = s
                .chars()
                .map(|c| match c {
                    '+' => Ok(1i8),
                    '-' => Ok(-1i8),
                    other => Err(Error::Parse(format!("bad sign character {other:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            return SignedCompleteGraph::new(parsed.num_vertices, signs);
        }
        let negative = parsed.negative_edges.unwrap_or_default();
        SignedCompleteGraph::from_negative_edges(parsed.num_vertices, &negative)
    }
}

/// Bitset adjacency rows for the positive graph, used by the heavier
/// switcher computations.
pub(crate) struct PositiveAdjacency {
    pub words_per_row: usize,
    pub rows: Vec<u64>,
}

impl PositiveAdjacency {
    pub fn build(graph: &SignedCompleteGraph) -> Self {
        let n = graph.num_vertices;
        let words = n.div_ceil(64);
        let mut rows = vec![0u64; n * words];
        for v in 1..n {
            for u in 0..v {
                if graph.signs[v * (v - 1) / 2 + u] == 1 {
                    rows[u * words + v / 64] |= 1 << (v % 64);
                    rows[v * words + u / 64] |= 1 << (u % 64);
                }
            }
        }
        PositiveAdjacency {
            words_per_row: words,
            rows,
        }
    }

    pub fn row(&self, v: Vertex) -> &[u64] {
        &self.rows[v * self.words_per_row..(v + 1) * self.words_per_row]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_convention() {
        assert_eq!(edge_index(0, 1, 4).unwrap(), 0);
        assert_eq!(edge_index(1, 0, 4).unwrap(), 0);
        assert_eq!(edge_index(2, 3, 4).unwrap(), 5);
        assert!(edge_index(2, 2, 4).is_err());
        assert!(edge_index(0, 4, 4).is_err());
    }

    #[test]
    fn edge_index_bijective() {
        for n in [2usize, 3, 5, 8, 13] {
            for idx in 0..edge_count(n) {
                let (u, v) = edge_endpoints(idx, n).unwrap();
                assert!(u < v && v < n);
                assert_eq!(edge_index(u, v, n).unwrap(), idx);
            }
        }
    }

    #[test]
    fn signed_sum_examples() {
        let g = SignedCompleteGraph::all_plus(4).unwrap();
        let all = EdgeSet::new((0..6).collect());
        assert_eq!(g.signed_sum(&all).unwrap(), 6);

        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1)]).unwrap();
        let sub = EdgeSet::from_pairs(&[(0, 1), (2, 3)], 4).unwrap();
        assert_eq!(g.signed_sum(&sub).unwrap(), 0);
    }

    #[test]
    fn discrepancy_examples() {
        let g = SignedCompleteGraph::all_plus(6).unwrap();
        let all = EdgeSet::new((0..15).collect());
        let (signed, abs) = g.discrepancy(&all).unwrap();
        assert_eq!(signed, Ratio::new(1, 1));
        assert_eq!(abs, Ratio::new(1, 1));

        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1)]).unwrap();
        let all = EdgeSet::new((0..6).collect());
        let (signed, _) = g.discrepancy(&all).unwrap();
        assert_eq!(signed, Ratio::new(2, 3));

        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let m = EdgeSet::from_pairs(&[(0, 1), (2, 3)], 4).unwrap();
        let (signed, abs) = g.discrepancy(&m).unwrap();
        assert_eq!(signed, Ratio::new(-1, 1));
        assert_eq!(abs, Ratio::new(1, 1));

        assert!(matches!(
            g.discrepancy(&EdgeSet::new(vec![])),
            Err(Error::EmptySubgraph)
        ));
    }

    #[test]
    fn generator_modes() {
        let g = SignedCompleteGraph::generate(4, &SigningSpec::AllPlus, 0).unwrap();
        assert_eq!(g.signs(), &[1; 6]);

        for seed in 0..5 {
            let g =
                SignedCompleteGraph::generate(4, &SigningSpec::ExactCount { positive: 3 }, seed)
                    .unwrap();
            assert_eq!(g.positive_edge_count(), 3);
        }

        let a = SignedCompleteGraph::generate(8, &SigningSpec::PBiased { p: 0.5 }, 42).unwrap();
        let b = SignedCompleteGraph::generate(8, &SigningSpec::PBiased { p: 0.5 }, 42).unwrap();
        assert_eq!(a, b);

        assert!(matches!(
            SignedCompleteGraph::generate(4, &SigningSpec::ExactCount { positive: 7 }, 0),
            Err(Error::CountOverflow { .. })
        ));
    }

    #[test]
    fn degree_stats_examples() {
        let g = SignedCompleteGraph::all_plus(6).unwrap();
        let d = g.degree_stats(0).unwrap();
        assert_eq!((d.d_plus, d.d_minus), (5, 0));

        let g = SignedCompleteGraph::from_negative_edges(4, &[(0, 1)]).unwrap();
        let d = g.degree_stats(0).unwrap();
        assert_eq!((d.d_plus, d.d_minus), (2, 1));
    }

    #[test]
    fn common_signed_neighbors_two_clique() {
        // + inside {0,1,2} and {3,4,5}, - across.
        let mut negative = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                negative.push((u, v));
            }
        }
        let g = SignedCompleteGraph::from_negative_edges(6, &negative).unwrap();
        assert_eq!(g.common_signed_neighbors(0, 3, 1, -1).unwrap(), 2);
    }

    #[test]
    fn handshake_and_degree_sum() {
        let g = SignedCompleteGraph::generate(10, &SigningSpec::PBiased { p: 0.3 }, 7).unwrap();
        let mut total_plus = 0;
        for v in 0..10 {
            let d = g.degree_stats(v).unwrap();
            assert_eq!(d.d_plus + d.d_minus, 9);
            total_plus += d.d_plus;
        }
        assert_eq!(total_plus, 2 * g.positive_edge_count());
    }

    #[test]
    fn json_roundtrip_both_forms() {
        let g = SignedCompleteGraph::generate(8, &SigningSpec::PBiased { p: 0.4 }, 3).unwrap();
        let back = SignedCompleteGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let back = SignedCompleteGraph::from_json(&g.to_json_compact()).unwrap();
        assert_eq!(g, back);
        // Serializations themselves are canonical.
        assert_eq!(g.to_json(), back.to_json());
        assert_eq!(g.to_json_compact(), back.to_json_compact());
    }

    #[test]
    fn perfect_matching_validation() {
        let m = PerfectMatching::from_pairs(&[(0, 1), (2, 3)], 4).unwrap();
        assert_eq!(m.partner(0).unwrap(), 1);
        assert!(PerfectMatching::from_pairs(&[(0, 1), (1, 2)], 4).is_err());
        assert!(PerfectMatching::from_pairs(&[(0, 1)], 4).is_err());
    }
}
