//! Random-permutation machinery: families of distinct-entry tuples, ±1
//! signings of `X^(k)`, hit counts under permutations, Monte-Carlo
//! concentration experiments with reference tail bounds, and the
//! balanced-permutation search for decompositions.

use num_rational::Ratio;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{FactorDecomposition, OneFactorization};
use crate::signed::{
    edge_endpoints, Disc, EdgeSet, PerfectMatching, SignedCompleteGraph, Vertex,
};
use crate::switcher::{classify_signs, FourCycle};

// ---------------------------------------------------------------------------
// Permutations
// ---------------------------------------------------------------------------

/// Uniform random permutation of `[0, n)` via the standard shuffle;
/// deterministic per seed.
pub fn random_permutation(n: usize, seed: u64) -> Result<Vec<Vertex>> {
    if n == 0 {
        return Err(Error::Precondition("permutation of an empty set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_permutation_with(n, &mut rng))
}

pub(crate) fn random_permutation_with(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let mut pi: Vec<Vertex> = (0..n).collect();
    pi.shuffle(rng);
    pi
}

// ---------------------------------------------------------------------------
// Tuple families
// ---------------------------------------------------------------------------

/// A family `F` of `k`-tuples with distinct entries over `[0, ground_size)`;
/// every ground element lies in at most `multiplicity_bound` tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleFamily {
    pub ground_size: usize,
    pub arity: usize,
    tuples: Vec<Vec<Vertex>>,
    pub multiplicity_bound: usize,
}

impl TupleFamily {
    pub fn new(ground_size: usize, arity: usize, tuples: Vec<Vec<Vertex>>) -> Result<Self> {
        if tuples.is_empty() {
            return Err(Error::Precondition("tuple family must be nonempty".into()));
        }
        let mut multiplicity = vec![0usize; ground_size];
        for t in &tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    family: arity,
                    signing: t.len(),
                });
            }
            let mut seen = t.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Precondition(format!("tuple {t:?} repeats an entry")));
            }
            for &x in t {
                if x >= ground_size {
                    return Err(Error::InvalidVertex {
                        v: x,
                        num_vertices: ground_size,
                    });
                }
                multiplicity[x] += 1;
            }
        }
        let multiplicity_bound = multiplicity.into_iter().max().unwrap_or(0);
        Ok(TupleFamily {
            ground_size,
            arity,
            tuples,
            multiplicity_bound,
        })
    }

    /// Both orientations of every edge of a perfect matching (`k = 2`,
    /// multiplicity 2).
    pub fn matching_orientations(matching: &PerfectMatching) -> Result<Self> {
        TupleFamily::edge_orientations(&matching.edge_set(), matching.num_vertices())
    }

    /// Both orientations of every edge of an edge set (`k = 2`).
    pub fn edge_orientations(edges: &EdgeSet, num_vertices: usize) -> Result<Self> {
        let mut tuples = Vec::with_capacity(2 * edges.len());
        for &e in edges.indices() {
            let (u, v) = edge_endpoints(e, num_vertices)?;
            tuples.push(vec![u, v]);
            tuples.push(vec![v, u]);
        }
        TupleFamily::new(num_vertices, 2, tuples)
    }

    /// All 8 oriented traversals of each given 4-cycle (`k = 4`).
    pub fn four_cycle_orientations(cycles: &[FourCycle], num_vertices: usize) -> Result<Self> {
        let mut tuples = Vec::with_capacity(8 * cycles.len());
        for cyc in cycles {
            let v = cyc.vertices;
            for start in 0..4 {
                tuples.push((0..4).map(|i| v[(start + i) % 4]).collect());
                tuples.push((0..4).map(|i| v[(start + 4 - i) % 4]).collect());
            }
        }
        TupleFamily::new(num_vertices, 4, tuples)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<Vertex>] {
        &self.tuples
    }

    /// The family `pi(F)`, applying the permutation entrywise.
    pub fn permuted(&self, pi: &[Vertex]) -> Result<Self> {
        if pi.len() != self.ground_size {
            return Err(Error::Precondition(format!(
                "permutation of size {} applied to ground set of size {}",
                pi.len(),
                self.ground_size
            )));
        }
        let tuples = self
            .tuples
            .iter()
            .map(|t| t.iter().map(|&x| pi[x]).collect())
            .collect();
        TupleFamily::new(self.ground_size, self.arity, tuples)
    }
}

// ---------------------------------------------------------------------------
// Tuple signings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum SigningKind<'a> {
    AllPlus,
    /// `sigma'((u, v)) = sigma({u, v})`.
    EdgeLift(&'a SignedCompleteGraph),
    /// `+1` exactly when the tuple traverses a switcher 4-cycle.
    SwitcherLift(&'a SignedCompleteGraph),
}

/// A deterministic ±1 evaluator on distinct-entry `k`-tuples, with its
/// exact positive count when cheaply computable.
#[derive(Debug, Clone)]
pub struct TupleSigning<'a> {
    kind: SigningKind<'a>,
    arity: usize,
    ground_size: usize,
    positive_count: Option<u128>,
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: usize, k: usize) -> u128 {
    (0..k).map(|i| (n - i) as u128).product()
}

impl<'a> TupleSigning<'a> {
    pub fn all_plus(ground_size: usize, arity: usize) -> Self {
        TupleSigning {
            kind: SigningKind::AllPlus,
            arity,
            ground_size,
            positive_count: Some(falling_factorial(ground_size, arity)),
        }
    }

    /// `k = 2` lift of an edge signing; positive count is exactly twice the
    /// number of positive edges.
    pub fn edge_lift(graph: &'a SignedCompleteGraph) -> Self {
        TupleSigning {
            kind: SigningKind::EdgeLift(graph),
            arity: 2,
            ground_size: graph.num_vertices(),
            positive_count: Some(2 * graph.positive_edge_count() as u128),
        }
    }

    /// `k = 4` switcher lift. The positive count is 8 times the number of
    /// canonical switchers and must be supplied (from an exact census) for
    /// concentration experiments.
    pub fn switcher_lift(graph: &'a SignedCompleteGraph, canonical_switchers: Option<u64>) -> Self {
        TupleSigning {
            kind: SigningKind::SwitcherLift(graph),
            arity: 4,
            ground_size: graph.num_vertices(),
            positive_count: canonical_switchers.map(|s| 8 * s as u128),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn positive_count(&self) -> Option<u128> {
        self.positive_count
    }

    /// Exact fraction of positive tuples, when known.
    pub fn positive_fraction(&self) -> Option<f64> {
        self.positive_count
            .map(|c| c as f64 / falling_factorial(self.ground_size, self.arity) as f64)
    }

    pub fn evaluate(&self, tuple: &[Vertex]) -> Result<i8> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                family: tuple.len(),
                signing: self.arity,
            });
        }
        match self.kind {
            SigningKind::AllPlus => Ok(1),
            SigningKind::EdgeLift(graph) => graph.sign(tuple[0], tuple[1]),
            SigningKind::SwitcherLift(graph) => {
                let s = [
                    graph.sign(tuple[0], tuple[1])?,
                    graph.sign(tuple[1], tuple[2])?,
                    graph.sign(tuple[2], tuple[3])?,
                    graph.sign(tuple[3], tuple[0])?,
                ];
                Ok(if crate::switcher::is_switcher_type(classify_signs(s)) {
                    1
                } else {
                    -1
                })
            }
        }
    }
}

/// `#{t in F : sigma'(pi(t)) = +1}`, computed in `O(|F| k)`.
pub fn hit_count(
    family: &TupleFamily,
    signing: &TupleSigning,
    pi: &[Vertex],
) -> Result<u64> {
    if family.arity != signing.arity() {
        return Err(Error::ArityMismatch {
            family: family.arity,
            signing: signing.arity(),
        });
    }
    if pi.len() != family.ground_size {
        return Err(Error::Precondition(format!(
            "permutation length {} does not match ground size {}",
            pi.len(),
            family.ground_size
        )));
    }
    let mut image = vec![0usize; family.arity];
    let mut hits = 0u64;
    for t in family.tuples() {
        for (slot, &x) in image.iter_mut().zip(t.iter()) {
            *slot = pi[x];
        }
        if signing.evaluate(&image)? == 1 {
            hits += 1;
        }
    }
    Ok(hits)
}

// ---------------------------------------------------------------------------
// Concentration experiments
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailRow {
    pub t: f64,
    pub empirical: f64,
    pub chebyshev: f64,
    pub talagrand: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    pub median: f64,
    /// `p * |F|`.
    pub target: f64,
    /// `n^{3/4}` for the ground size `n`.
    pub median_window: f64,
    pub fraction_within_window: f64,
    /// Mean within 4 standard errors of the target.
    pub mean_check_pass: bool,
    /// Loose variance bound `((1 + k Delta) Delta + 10 k^2 Delta^2) n`.
    pub variance_bound: f64,
    pub tail: Vec<TailRow>,
}

/// Chebyshev tail `var / lambda^2`.
pub fn chebyshev_bound(var: f64, lambda: f64) -> Result<f64> {
    for (name, value) in [("var", var), ("lambda", lambda)] {
        if value <= 0.0 {
            return Err(Error::NonpositiveParameter { name, value });
        }
    }
    Ok(var / (lambda * lambda))
}

/// Permutation-Talagrand tail `6 exp(-t^2 / (16 r c^2 (M + t)))`.
pub fn talagrand_bound(t: f64, r: f64, c: f64, m: f64) -> Result<f64> {
    for (name, value) in [("t", t), ("r", r), ("c", c), ("M", m)] {
        if value <= 0.0 {
            return Err(Error::NonpositiveParameter { name, value });
        }
    }
    Ok(6.0 * (-t * t / (16.0 * r * c * c * (m + t))).exp())
}

pub fn concentration_experiment(
    family: &TupleFamily,
    signing: &TupleSigning,
    trials: u64,
    seed: u64,
) -> Result<ConcentrationReport> {
    if trials < 100 {
        return Err(Error::Precondition(format!(
            "concentration experiment needs >= 100 trials, got {trials}"
        )));
    }
    let Some(positive) = signing.positive_count() else {
        return Err(Error::UnknownPositiveCount(
            "supply an exact positive count (e.g. from an exact switcher census)".into(),
        ));
    };
    let n = family.ground_size;
    let p = positive as f64 / falling_factorial(n, family.arity) as f64;
    let target = p * family.len() as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let pi = random_permutation_with(n, &mut rng);
        values.push(hit_count(family, signing, &pi)? as f64);
    }

    let mean = values.iter().sum::<f64>() / trials as f64;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
        / (trials as f64 - 1.0).max(1.0);
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if trials % 2 == 0 {
        (sorted[trials as usize / 2 - 1] + sorted[trials as usize / 2]) / 2.0
    } else {
        sorted[trials as usize / 2]
    };

    let median_window = (n as f64).powf(0.75);
    let within = values
        .iter()
        .filter(|&&v| (v - target).abs() <= median_window)
        .count();
    let fraction_within_window = within as f64 / trials as f64;

    let stderr = (variance / trials as f64).sqrt();
    let mean_check_pass = (mean - target).abs() <= 4.0 * stderr.max(f64::MIN_POSITIVE);

    let k = family.arity as f64;
    let delta = family.multiplicity_bound as f64;
    let variance_bound = ((1.0 + k * delta) * delta + 10.0 * k * k * delta * delta) * n as f64;

    // Reference tails on a fixed grid of multiples of the window, with the
    // Lipschitz parameters c = 2*Delta, r = k.
    let mut tail = Vec::new();
    for j in 1..=8 {
        let t = median_window * j as f64 / 2.0;
        let empirical = values.iter().filter(|&&v| (v - target).abs() >= t).count() as f64
            / trials as f64;
        let chebyshev = (variance / (t * t)).min(1.0);
        let talagrand = talagrand_bound(t, k, 2.0 * delta, median.max(1.0))?.min(1.0);
        tail.push(TailRow {
            t,
            empirical,
            chebyshev,
            talagrand,
        });
    }
    // Max-from-right smoothing keeps the empirical column monotone.
    for i in (0..tail.len().saturating_sub(1)).rev() {
        if tail[i].empirical < tail[i + 1].empirical {
            tail[i].empirical = tail[i + 1].empirical;
        }
    }

    Ok(ConcentrationReport {
        trials,
        mean,
        variance,
        median,
        target,
        median_window,
        fraction_within_window,
        mean_check_pass,
        variance_bound,
        tail,
    })
}

// ---------------------------------------------------------------------------
// Balanced permutations
// ---------------------------------------------------------------------------

/// Result of the balanced-permutation search; on exhaustion carries the
/// best permutation found and its worst deviation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalanceOutcome {
    pub permutation: Vec<Vertex>,
    pub per_factor_disc: Vec<Disc>,
    pub worst_deviation: Disc,
    pub trials_used: u64,
    pub success: bool,
}

/// Edge lists of the parts of either decomposition flavor.
pub fn decomposition_parts(decomposition: DecompositionParts) -> Vec<EdgeSet> {
    match decomposition {
        DecompositionParts::Factors(d) => d.factors.iter().map(|f| f.edges.clone()).collect(),
        DecompositionParts::OneFactorization(f) => {
            f.matchings.iter().map(|m| m.edge_set()).collect()
        }
    }
}

pub enum DecompositionParts<'a> {
    Factors(&'a FactorDecomposition),
    OneFactorization(&'a OneFactorization),
}

/// Samples permutations until every part satisfies
/// `|disc^(pi(F_i)) - disc^(K)| <= epsilon`, or `max_trials` is exhausted.
/// Discrepancies are exact; `epsilon` is converted to an exact rational.
pub fn find_balanced_permutation(
    graph: &SignedCompleteGraph,
    parts: &[EdgeSet],
    epsilon: f64,
    max_trials: u64,
    seed: u64,
) -> Result<BalanceOutcome> {
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Precondition("every factor needs at least one edge".into()));
    }
    let nv = graph.num_vertices();
    let global = graph.global_disc_signed();
    let eps = Ratio::approximate_float(epsilon)
        .unwrap_or_else(|| Ratio::new((epsilon * 1_000_000.0) as i64, 1_000_000));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<BalanceOutcome> = None;

    for trial in 1..=max_trials.max(1) {
        let pi = random_permutation_with(nv, &mut rng);
        let mut discs = Vec::with_capacity(parts.len());
        let mut worst: Disc = Ratio::new(0, 1);
        for part in parts {
            let mut sum = 0i64;
            for &e in part.indices() {
                let (u, v) = edge_endpoints(e, nv)?;
                sum += graph.sign(pi[u], pi[v])? as i64;
            }
            let disc = Ratio::new(sum, part.len() as i64);
            let dev = (disc - global).abs();
            if dev > worst {
                worst = dev;
            }
            discs.push(disc);
        }
        let candidate = BalanceOutcome {
            permutation: pi,
            per_factor_disc: discs,
            worst_deviation: worst,
            trials_used: trial,
            success: worst <= eps,
        };
        if candidate.success {
            return Ok(candidate);
        }
        match &best {
            Some(b) if b.worst_deviation <= candidate.worst_deviation => {}
            _ => best = Some(candidate),
        }
    }
    let mut out = best.expect("at least one trial ran");
    out.trials_used = max_trials.max(1);
    Ok(out)
}
