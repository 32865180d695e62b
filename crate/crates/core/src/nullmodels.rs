//! Randomization-based assortativity analysis.
//!
//! The observed mixing coefficient r is the Pearson correlation of a node
//! property evaluated at the two ends of every edge. Its significance comes
//! from comparing against an ensemble of randomized networks: degree
//! assortativity reshuffles the connections while preserving every degree
//! (double-edge swaps); attribute assortativity keeps the structure and
//! reshuffles the node values. The Z-score is (r - mean) / stdev over the
//! ensemble.
//!
//! Everything is driven by explicit seeds: replica i uses seed + i, and
//! replica results are merged in index order, so parallel and serial runs
//! produce bit-identical reports.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::Graph;

/// Observed coefficient against the randomized ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct AssortativityReport {
    pub property: String,
    pub r: f64,
    pub r_rand_mean: f64,
    pub sigma_rand: f64,
    pub z_score: f64,
    pub n_replicas: usize,
    pub seed: u64,
}

impl AssortativityReport {
    /// Z >= 2 marks assortative mixing; lower scores are neutral.
    pub fn is_assortative(&self) -> bool {
        self.z_score >= 2.0
    }
}

/// Which node property the edge-end correlation runs over.
#[derive(Debug, Clone)]
pub enum MixingProperty<'a> {
    Degree,
    /// Attribute values; nodes with `None` are excluded together with their
    /// incident edges.
    Attribute {
        name: &'a str,
        values: &'a [Option<f64>],
    },
}

impl MixingProperty<'_> {
    pub fn name(&self) -> &str {
        match self {
            MixingProperty::Degree => "degree",
            MixingProperty::Attribute { name, .. } => name,
        }
    }
}

pub fn degree_values(g: &Graph) -> Vec<Option<f64>> {
    (0..g.n_nodes() as u32)
        .map(|v| Some(g.degree(v) as f64))
        .collect()
}

/// Pearson correlation of the value pairs at the two ends of every edge,
/// each edge contributing both orientations. Edges with an unvalued endpoint
/// are skipped.
///
/// Two passes: the first finds the edge-end mean, the second accumulates
/// centered sums, which keeps the variance stable for large-magnitude
/// attributes (GDP-sized values would otherwise cancel badly).
pub fn pearson_assortativity(g: &Graph, values: &[Option<f64>]) -> Result<f64> {
    assert_eq!(values.len(), g.n_nodes(), "one value slot per node");
    let usable = || {
        g.edges().filter_map(|(u, v, _)| {
            match (values[u as usize], values[v as usize]) {
                (Some(xu), Some(xv)) => Some((xu, xv)),
                _ => None,
            }
        })
    };
    let mut n = 0u64;
    let mut sum = 0.0;
    for (xu, xv) in usable() {
        n += 2;
        sum += xu + xv;
    }
    if n == 0 {
        return Err(CoreError::NoUsableEdges);
    }
    let mean = sum / n as f64;
    let mut var = 0.0;
    let mut cov = 0.0;
    for (xu, xv) in usable() {
        let (du, dv) = (xu - mean, xv - mean);
        var += du * du + dv * dv;
        cov += 2.0 * du * dv;
    }
    // With both orientations present the x and y marginals coincide, so the
    // correlation is cov/var.
    if var <= 0.0 || !var.is_finite() {
        return Err(CoreError::UndefinedCorrelation);
    }
    Ok(cov / var)
}

/// Degree-preserving rewiring by repeated double-edge swaps
/// ((a,b),(c,d)) -> ((a,d),(c,b)); swaps creating self-loops or duplicate
/// edges are rejected and retried within a bounded budget.
pub fn degree_preserving_randomize(g: &Graph, n_swaps: usize, seed: u64) -> Result<Graph> {
    if g.n_edges() < 2 {
        return Err(CoreError::TooFewEdges(g.n_edges()));
    }
    let mut edges: Vec<(u32, u32)> = g.edges().map(|(u, v, _)| (u, v)).collect();
    let mut present: std::collections::HashSet<(u32, u32)> = edges.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 100 + 25 * n_swaps;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < n_swaps {
        if attempts >= budget {
            return Err(CoreError::SwapBudgetExhausted {
                accepted,
                requested: n_swaps,
            });
        }
        attempts += 1;
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        // Orientation of the second edge is a coin flip; without it the
        // sampled swap space would be halved.
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        if let Some((e1, e2)) = propose_swap((a, b), (c, d), &present) {
            present.remove(&edges[i]);
            present.remove(&edges[j]);
            present.insert(e1);
            present.insert(e2);
            edges[i] = e1;
            edges[j] = e2;
            accepted += 1;
        }
    }
    rebuild(g, &edges)
}

/// The swap move itself: ((a,b),(c,d)) -> ((a,d),(c,b)), or None when the
/// result would contain a self-loop or a duplicate edge.
pub(crate) fn propose_swap(
    (a, b): (u32, u32),
    (c, d): (u32, u32),
    present: &std::collections::HashSet<(u32, u32)>,
) -> Option<((u32, u32), (u32, u32))> {
    if a == d || c == b {
        return None;
    }
    let e1 = (a.min(d), a.max(d));
    let e2 = (c.min(b), c.max(b));
    if e1 == e2 || present.contains(&e1) || present.contains(&e2) {
        return None;
    }
    Some((e1, e2))
}

fn rebuild(g: &Graph, edges: &[(u32, u32)]) -> Result<Graph> {
    let mut out = Graph::new(g.allows_self_loops());
    for label in g.labels() {
        out.add_node(label.clone());
    }
    for &(u, v) in edges {
        out.add_edge(u, v, 1.0)?;
    }
    Ok(out)
}

/// Uniform random permutation of the present values over the valued nodes;
/// `None` slots stay `None`.
pub fn shuffle_attributes(values: &[Option<f64>], seed: u64) -> Vec<Option<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    let mut pool: Vec<f64> = positions.iter().map(|&i| values[i].unwrap()).collect();
    pool.shuffle(&mut rng);
    let mut out = vec![None; values.len()];
    for (&pos, value) in positions.iter().zip(pool) {
        out[pos] = Some(value);
    }
    out
}

/// Default accepted swaps per replica: 10x the edge count.
pub fn default_swaps(g: &Graph) -> usize {
    10 * g.n_edges()
}

/// Full Z-score analysis of one property against `n_replicas` randomized
/// equivalents. Replica i derives its seed as `seed + i`.
pub fn assortativity_zscore(
    g: &Graph,
    property: &MixingProperty<'_>,
    n_replicas: usize,
    seed: u64,
    n_swaps: Option<usize>,
) -> Result<AssortativityReport> {
    if n_replicas < 2 {
        return Err(CoreError::TooFewReplicas {
            needed: 2,
            got: n_replicas,
        });
    }
    let values: Vec<Option<f64>> = match property {
        MixingProperty::Degree => degree_values(g),
        MixingProperty::Attribute { values, .. } => values.to_vec(),
    };
    let r = pearson_assortativity(g, &values)?;
    let swaps = n_swaps.unwrap_or_else(|| default_swaps(g));

    let replica_r: Vec<f64> = (0..n_replicas)
        .into_par_iter()
        .map(|i| {
            let child_seed = seed.wrapping_add(i as u64);
            match property {
                MixingProperty::Degree => {
                    let randomized = degree_preserving_randomize(g, swaps, child_seed)?;
                    pearson_assortativity(&randomized, &degree_values(&randomized))
                }
                MixingProperty::Attribute { .. } => {
                    pearson_assortativity(g, &shuffle_attributes(&values, child_seed))
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let mean = replica_r.iter().sum::<f64>() / n_replicas as f64;
    // Sample standard deviation (n-1), matching the reported precision.
    let var = replica_r
        .iter()
        .map(|r_i| (r_i - mean) * (r_i - mean))
        .sum::<f64>()
        / (n_replicas as f64 - 1.0);
    let sigma = var.sqrt();
    if sigma <= 0.0 {
        return Err(CoreError::ZeroEnsembleVariance);
    }
    Ok(AssortativityReport {
        property: property.name().to_string(),
        r,
        r_rand_mean: mean,
        sigma_rand: sigma,
        z_score: (r - mean) / sigma,
        n_replicas,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Graph {
        Graph::from_unweighted_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn star_degree_assortativity_is_minus_one() {
        let g = star();
        let r = pearson_assortativity(&g, &degree_values(&g)).unwrap();
        assert!((r - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn regular_graphs_have_undefined_degree_correlation() {
        for n in [3usize, 4, 6] {
            let edges: Vec<(u32, u32)> =
                (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
            let g = Graph::from_unweighted_edges(n, &edges).unwrap();
            assert!(matches!(
                pearson_assortativity(&g, &degree_values(&g)),
                Err(CoreError::UndefinedCorrelation)
            ));
        }
    }

    #[test]
    fn missing_values_drop_their_edges() {
        let g = Graph::from_unweighted_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let values = vec![Some(1.0), Some(2.0), Some(5.0), None];
        // only edges (0,1) and (1,2) participate
        let r = pearson_assortativity(&g, &values).unwrap();
        assert!(r.is_finite());
        let all_missing = vec![None, None, None, None];
        assert!(matches!(
            pearson_assortativity(&g, &all_missing),
            Err(CoreError::NoUsableEdges)
        ));
    }

    #[test]
    fn forced_swap_matches_definition() {
        let present: std::collections::HashSet<(u32, u32)> = [(0, 1), (2, 3)].into();
        let swapped = propose_swap((0, 1), (2, 3), &present).unwrap();
        assert_eq!(swapped, ((0, 3), (1, 2)));
    }

    #[test]
    fn swap_rejects_self_loops_and_duplicates() {
        let present: std::collections::HashSet<(u32, u32)> = [(0, 1), (1, 2)].into();
        // (0,1),(2,1) -> (0,1),(2,1): d == a side produces nothing new
        assert!(propose_swap((0, 1), (2, 1), &present).is_none()); // duplicate
        assert!(propose_swap((0, 1), (1, 2), &present).is_none()); // self-loop c==b
    }

    #[test]
    fn rewiring_preserves_the_degree_sequence() {
        let g = Graph::from_unweighted_edges(
            8,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7), (2, 7)],
        )
        .unwrap();
        let before: Vec<usize> = (0..8).map(|v| g.degree(v)).collect();
        for seed in 0..20u64 {
            let randomized = degree_preserving_randomize(&g, 50, seed).unwrap();
            let after: Vec<usize> = (0..8).map(|v| randomized.degree(v)).collect();
            assert_eq!(before, after, "seed {seed}");
            assert_eq!(randomized.n_edges(), g.n_edges());
            for v in 0..8u32 {
                assert!(!randomized.has_edge(v, v));
            }
        }
    }

    #[test]
    fn rewiring_needs_two_edges() {
        let g = Graph::from_unweighted_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            degree_preserving_randomize(&g, 1, 0),
            Err(CoreError::TooFewEdges(1))
        ));
    }

    #[test]
    fn budget_exhaustion_reports_progress() {
        // Two edges sharing a node admit no valid swap at all.
        let g = Graph::from_unweighted_edges(3, &[(0, 1), (1, 2)]).unwrap();
        match degree_preserving_randomize(&g, 5, 7) {
            Err(CoreError::SwapBudgetExhausted { accepted, requested }) => {
                assert_eq!(accepted, 0);
                assert_eq!(requested, 5);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn shuffle_preserves_multiset_and_single_entry() {
        let single = vec![Some(3.5)];
        assert_eq!(shuffle_attributes(&single, 9), single);

        let values = vec![Some(1.0), None, Some(2.0), Some(2.0), Some(7.0)];
        for seed in 0..10u64 {
            let shuffled = shuffle_attributes(&values, seed);
            assert!(shuffled[1].is_none());
            let mut a: Vec<f64> = values.iter().flatten().copied().collect();
            let mut b: Vec<f64> = shuffled.iter().flatten().copied().collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn shuffle_is_seed_deterministic() {
        let values: Vec<Option<f64>> = (0..50).map(|i| Some(i as f64)).collect();
        assert_eq!(shuffle_attributes(&values, 42), shuffle_attributes(&values, 42));
        assert_ne!(shuffle_attributes(&values, 42), shuffle_attributes(&values, 43));
    }

    #[test]
    fn zscore_is_reproducible_and_validates_replicas() {
        let g = Graph::from_unweighted_edges(
            6,
            &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (1, 2)],
        )
        .unwrap();
        let a = assortativity_zscore(&g, &MixingProperty::Degree, 10, 11, Some(30)).unwrap();
        let b = assortativity_zscore(&g, &MixingProperty::Degree, 10, 11, Some(30)).unwrap();
        assert_eq!(a.r.to_bits(), b.r.to_bits());
        assert_eq!(a.r_rand_mean.to_bits(), b.r_rand_mean.to_bits());
        assert_eq!(a.sigma_rand.to_bits(), b.sigma_rand.to_bits());
        assert_eq!(a.z_score.to_bits(), b.z_score.to_bits());
        assert!(matches!(
            assortativity_zscore(&g, &MixingProperty::Degree, 1, 11, None),
            Err(CoreError::TooFewReplicas { .. })
        ));
    }
}
