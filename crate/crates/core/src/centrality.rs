//! Betweenness centrality and Table-style rankings.
//!
//! Betweenness follows Brandes' dependency accumulation, unnormalized, with
//! each unordered source-target pair counted once. The weighted variant
//! treats an edge of weight w as having length 1/w, so heavier partnerships
//! are shorter paths. Self-loops never lie on a shortest path and are
//! skipped.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::Graph;

const SOURCE_CHUNK: usize = 32;

/// Unnormalized betweenness b(v) = sum over unordered pairs {s,t}, s,t != v,
/// of the fraction of shortest s-t paths passing through v.
pub fn betweenness(g: &Graph, weighted: bool) -> Vec<f64> {
    let n = g.n_nodes();
    if n == 0 {
        return Vec::new();
    }
    let sources: Vec<u32> = (0..n as u32).collect();
    // Chunks are fixed ahead of time and folded in order, so the float sums
    // are identical no matter how many threads run.
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            for &s in chunk {
                if weighted {
                    accumulate_weighted(g, s, &mut acc);
                } else {
                    accumulate_unweighted(g, s, &mut acc);
                }
            }
            acc
        })
        .collect();
    let mut scores = vec![0.0; n];
    for partial in partials {
        for (total, part) in scores.iter_mut().zip(partial) {
            *total += part;
        }
    }
    // Brandes' sweep visits each unordered pair from both endpoints.
    for score in &mut scores {
        *score /= 2.0;
    }
    scores
}

fn accumulate_unweighted(g: &Graph, s: u32, acc: &mut [f64]) {
    let n = g.n_nodes();
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![i64::MAX; n];
    sigma[s as usize] = 1.0;
    dist[s as usize] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for nb in g.neighbors(v) {
            let w = nb.node;
            if w == v {
                continue;
            }
            if dist[w as usize] == i64::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
            if dist[w as usize] == dist[v as usize] + 1 {
                sigma[w as usize] += sigma[v as usize];
                preds[w as usize].push(v);
            }
        }
    }
    accumulate_dependencies(s, &stack, &preds, &sigma, acc);
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance; node index breaks ties deterministically.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn accumulate_weighted(g: &Graph, s: u32, acc: &mut [f64]) {
    let n = g.n_nodes();
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    sigma[s as usize] = 1.0;
    dist[s as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry { dist: 0.0, node: s });
    while let Some(HeapEntry { dist: d, node: v }) = heap.pop() {
        if settled[v as usize] {
            continue;
        }
        settled[v as usize] = true;
        stack.push(v);
        for nb in g.neighbors(v) {
            let w = nb.node;
            if w == v {
                continue;
            }
            let length = 1.0 / nb.weight;
            let candidate = d + length;
            if candidate < dist[w as usize] {
                dist[w as usize] = candidate;
                sigma[w as usize] = sigma[v as usize];
                preds[w as usize].clear();
                preds[w as usize].push(v);
                heap.push(HeapEntry {
                    dist: candidate,
                    node: w,
                });
            } else if candidate == dist[w as usize] {
                sigma[w as usize] += sigma[v as usize];
                preds[w as usize].push(v);
            }
        }
    }
    accumulate_dependencies(s, &stack, &preds, &sigma, acc);
}

fn accumulate_dependencies(s: u32, stack: &[u32], preds: &[Vec<u32>], sigma: &[f64], acc: &mut [f64]) {
    let mut delta = vec![0.0f64; sigma.len()];
    for &w in stack.iter().rev() {
        for &v in &preds[w as usize] {
            delta[v as usize] +=
                sigma[v as usize] / sigma[w as usize] * (1.0 + delta[w as usize]);
        }
        if w != s {
            acc[w as usize] += delta[w as usize];
        }
    }
}

/// What the primary column of a ranking is sorted by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankBy {
    Degree,
    WeightedDegree { include_self: bool },
}

#[derive(Debug, Clone, Serialize)]
pub struct RankingEntry {
    pub node: u32,
    pub label: String,
    pub score: f64,
    pub betweenness: f64,
    pub betweenness_rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralityRanking {
    pub entries: Vec<RankingEntry>,
    /// Set when k exceeded the node count and the list was truncated.
    pub truncated: bool,
}

/// Top-k nodes by degree or weighted degree, with betweenness values and
/// global betweenness ranks attached. Ties break lexicographically by label.
pub fn top_k_ranking(
    g: &Graph,
    k: usize,
    rank_by: RankBy,
    weighted_betweenness: bool,
) -> Result<CentralityRanking> {
    if g.n_nodes() == 0 {
        return Err(CoreError::EmptyGraph);
    }
    let n = g.n_nodes();
    let scores: Vec<f64> = (0..n as u32)
        .map(|v| match rank_by {
            RankBy::Degree => g.degree(v) as f64,
            RankBy::WeightedDegree { include_self } => {
                let mut s = g.strength(v);
                if !include_self {
                    s -= 2.0 * g.edge_weight(v, v).unwrap_or(0.0);
                }
                s
            }
        })
        .collect();
    let bc = betweenness(g, weighted_betweenness);

    let by_label = |a: &u32, b: &u32| g.label(*a).cmp(g.label(*b));
    let mut bc_order: Vec<u32> = (0..n as u32).collect();
    bc_order.sort_by(|a, b| {
        bc[*b as usize]
            .total_cmp(&bc[*a as usize])
            .then_with(|| by_label(a, b))
    });
    let mut bc_rank = vec![0usize; n];
    for (pos, &v) in bc_order.iter().enumerate() {
        bc_rank[v as usize] = pos + 1;
    }

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|a, b| {
        scores[*b as usize]
            .total_cmp(&scores[*a as usize])
            .then_with(|| by_label(a, b))
    });
    let truncated = k > n;
    order.truncate(k.min(n));

    Ok(CentralityRanking {
        entries: order
            .into_iter()
            .map(|v| RankingEntry {
                node: v,
                label: g.label(v).to_string(),
                score: scores[v as usize],
                betweenness: bc[v as usize],
                betweenness_rank: bc_rank[v as usize],
            })
            .collect(),
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_midpoint_carries_the_one_pair() {
        let g = Graph::from_unweighted_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let bc = betweenness(&g, false);
        assert_eq!(bc, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn star_center_carries_all_leaf_pairs() {
        let g =
            Graph::from_unweighted_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let bc = betweenness(&g, false);
        assert_eq!(bc[0], 6.0); // C(4,2)
        assert_eq!(&bc[1..], &[0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn cycle_splits_pairs_evenly() {
        // C4: opposite pairs have two shortest paths, each midpoint gets 1/2.
        let g = Graph::from_unweighted_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let bc = betweenness(&g, false);
        for v in bc {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn disconnected_pairs_contribute_nothing() {
        let g = Graph::from_unweighted_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(betweenness(&g, false), vec![0.0; 4]);
    }

    #[test]
    fn heavier_edges_attract_weighted_shortest_paths() {
        // 0-1-3 via weights 10,10 is shorter (0.2) than the direct 0-3 of
        // weight 1 (length 1), so node 1 carries the 0..3 pair.
        let mut g = Graph::new(false);
        for i in 0..4 {
            g.add_node(format!("n{i}"));
        }
        g.add_edge(0, 1, 10.0).unwrap();
        g.add_edge(1, 3, 10.0).unwrap();
        g.add_edge(0, 3, 1.0).unwrap();
        g.add_edge(2, 3, 1.0).unwrap();
        let bc = betweenness(&g, true);
        assert!(bc[1] > 0.0);
        assert_eq!(bc[2], 0.0);
        // unweighted instead routes 0-3 directly
        let bc = betweenness(&g, false);
        assert_eq!(bc[1], 0.0);
    }

    #[test]
    fn ranking_orders_and_ranks() {
        let g =
            Graph::from_unweighted_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let ranking = top_k_ranking(&g, 1, RankBy::Degree, false).unwrap();
        assert_eq!(ranking.entries.len(), 1);
        assert_eq!(ranking.entries[0].node, 0);
        assert_eq!(ranking.entries[0].score, 4.0);
        assert_eq!(ranking.entries[0].betweenness_rank, 1);
        assert!(!ranking.truncated);
    }

    #[test]
    fn oversized_k_truncates_with_flag() {
        let g = Graph::from_unweighted_edges(2, &[(0, 1)]).unwrap();
        let ranking = top_k_ranking(&g, 10, RankBy::Degree, false).unwrap();
        assert_eq!(ranking.entries.len(), 2);
        assert!(ranking.truncated);
    }

    #[test]
    fn ranking_ties_break_by_label() {
        let mut g = Graph::new(false);
        let b = g.add_node("bravo");
        let a = g.add_node("alpha");
        g.add_edge(a, b, 1.0).unwrap();
        let ranking = top_k_ranking(&g, 2, RankBy::Degree, false).unwrap();
        assert_eq!(ranking.entries[0].label, "alpha");
        assert_eq!(ranking.entries[1].label, "bravo");
        // betweenness ranks are a permutation of 1..N
        let mut ranks: Vec<usize> =
            ranking.entries.iter().map(|e| e.betweenness_rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, vec![1, 2]);
    }

    #[test]
    fn weighted_degree_ranking_can_exclude_self_loops() {
        let mut g = Graph::new(true);
        let a = g.add_node("a");
        let b = g.add_node("b");
        g.add_edge(a, a, 3.0).unwrap();
        g.add_edge(a, b, 2.0).unwrap();
        let without = top_k_ranking(&g, 1, RankBy::WeightedDegree { include_self: false }, false)
            .unwrap();
        assert_eq!(without.entries[0].score, 2.0);
        let with = top_k_ranking(&g, 1, RankBy::WeightedDegree { include_self: true }, false)
            .unwrap();
        assert_eq!(with.entries[0].score, 8.0);
    }
}
