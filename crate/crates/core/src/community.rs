//! Louvain modularity optimization on weighted graphs with self-loops.
//!
//! Modularity uses the strength convention: a self-loop of weight w adds w
//! once to the total weight m and to its community's internal weight, and
//! twice to its node's strength. Louvain alternates seeded local-move sweeps
//! with graph coarsening; a move is taken only on strictly positive gain and
//! equal gains break toward the lowest community id, which makes the whole
//! run deterministic for a fixed seed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::graph::Graph;

/// A community assignment with its modularity score.
#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    /// Community id per node, contiguous 0..n_communities.
    pub assignment: Vec<u32>,
    pub n_communities: usize,
    pub modularity: f64,
}

/// Modularity Q of an assignment over a weighted graph.
pub fn modularity(g: &Graph, assignment: &[u32]) -> Result<f64> {
    if assignment.len() != g.n_nodes() {
        return Err(CoreError::PartitionSizeMismatch {
            expected: g.n_nodes(),
            got: assignment.len(),
        });
    }
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(CoreError::ZeroTotalWeight);
    }
    let n_comms = assignment.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut internal = vec![0.0f64; n_comms];
    let mut strength_sum = vec![0.0f64; n_comms];
    for (u, v, w) in g.edges() {
        if assignment[u as usize] == assignment[v as usize] {
            internal[assignment[u as usize] as usize] += w;
        }
    }
    for v in 0..g.n_nodes() as u32 {
        strength_sum[assignment[v as usize] as usize] += g.strength(v);
    }
    let two_m = 2.0 * m;
    Ok(internal
        .iter()
        .zip(&strength_sum)
        .map(|(&w_in, &s)| w_in / m - (s / two_m) * (s / two_m))
        .sum())
}

/// One Louvain run: the final partition plus the modularity reached after
/// each phase, for monotonicity checks.
#[derive(Debug, Clone)]
pub struct LouvainRun {
    pub partition: Partition,
    pub phase_modularity: Vec<f64>,
}

/// Louvain community detection; deterministic for a fixed seed.
pub fn louvain(g: &Graph, seed: u64) -> Result<Partition> {
    Ok(louvain_run(g, seed)?.partition)
}

pub fn louvain_run(g: &Graph, seed: u64) -> Result<LouvainRun> {
    if g.n_nodes() == 0 {
        return Err(CoreError::EmptyGraph);
    }
    if g.total_weight() <= 0.0 {
        return Err(CoreError::ZeroTotalWeight);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // assignment of original nodes, updated after every phase
    let mut fine_assignment: Vec<u32> = (0..g.n_nodes() as u32).collect();
    let mut level = LevelGraph::from_graph(g);
    let mut phase_modularity = Vec::new();

    loop {
        let moved = level.local_moves(&mut rng);
        let level_assignment = level.normalized_assignment();
        for slot in fine_assignment.iter_mut() {
            *slot = level_assignment[*slot as usize];
        }
        phase_modularity.push(modularity(g, &fine_assignment)?);
        if !moved {
            break;
        }
        level = level.coarsen(&level_assignment);
    }

    let assignment = relabel_by_first_appearance(&fine_assignment);
    let n_communities = assignment.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let q = modularity(g, &assignment)?;
    Ok(LouvainRun {
        partition: Partition {
            assignment,
            n_communities,
            modularity: q,
        },
        phase_modularity,
    })
}

/// Make community ids contiguous, numbered in order of first appearance over
/// node index 0..n.
fn relabel_by_first_appearance(assignment: &[u32]) -> Vec<u32> {
    let mut mapping: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    let mut next = 0u32;
    assignment
        .iter()
        .map(|&c| {
            *mapping.entry(c).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

/// Working graph for one Louvain level: adjacency without self-loops, plus
/// per-node self-loop weight and strength.
struct LevelGraph {
    adj: Vec<Vec<(u32, f64)>>,
    self_weight: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
    community: Vec<u32>,
    community_strength: Vec<f64>,
}

impl LevelGraph {
    fn from_graph(g: &Graph) -> Self {
        let n = g.n_nodes();
        let mut adj = vec![Vec::new(); n];
        let mut self_weight = vec![0.0; n];
        for (u, v, w) in g.edges() {
            if u == v {
                self_weight[u as usize] += w;
            } else {
                adj[u as usize].push((v, w));
                adj[v as usize].push((u, w));
            }
        }
        let strength: Vec<f64> = (0..n)
            .map(|v| adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_weight[v])
            .collect();
        let two_m = strength.iter().sum();
        LevelGraph {
            community: (0..n as u32).collect(),
            community_strength: strength.clone(),
            adj,
            self_weight,
            strength,
            two_m,
        }
    }

    fn n_nodes(&self) -> usize {
        self.adj.len()
    }

    /// Sweep local moves until a full sweep changes nothing. Returns whether
    /// any node moved during the phase.
    fn local_moves(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let mut order: Vec<u32> = (0..self.n_nodes() as u32).collect();
        order.shuffle(rng);
        let mut any_moved = false;
        loop {
            let mut moved_this_sweep = false;
            for &v in &order {
                if self.move_node(v) {
                    moved_this_sweep = true;
                    any_moved = true;
                }
            }
            if !moved_this_sweep {
                break;
            }
        }
        any_moved
    }

    /// Try to move one node to its best neighboring community; strictly
    /// positive gain required, ties to the lowest community id.
    fn move_node(&mut self, v: u32) -> bool {
        let old = self.community[v as usize];
        let k_v = self.strength[v as usize];
        // weight from v to each adjacent community
        let mut link_weight: std::collections::BTreeMap<u32, f64> =
            std::collections::BTreeMap::new();
        for &(u, w) in &self.adj[v as usize] {
            *link_weight.entry(self.community[u as usize]).or_insert(0.0) += w;
        }
        // remove v from its community while evaluating
        self.community_strength[old as usize] -= k_v;
        let gain = |community: u32| {
            let k_in = link_weight.get(&community).copied().unwrap_or(0.0);
            k_in - self.community_strength[community as usize] * k_v / self.two_m
        };
        let stay = gain(old);
        let mut best_comm = old;
        let mut best_gain = stay;
        // BTreeMap iterates in ascending community id, so a strict > keeps
        // the lowest id among equal gains.
        for &candidate in link_weight.keys() {
            if candidate == old {
                continue;
            }
            let g = gain(candidate);
            if g > best_gain {
                best_gain = g;
                best_comm = candidate;
            }
        }
        self.community_strength[best_comm as usize] += k_v;
        self.community[v as usize] = best_comm;
        best_comm != old
    }

    /// Community ids renumbered contiguously in ascending original id order.
    fn normalized_assignment(&self) -> Vec<u32> {
        let mut present: Vec<u32> = self.community.clone();
        present.sort_unstable();
        present.dedup();
        let rank: std::collections::HashMap<u32, u32> = present
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        self.community.iter().map(|c| rank[c]).collect()
    }

    /// Build the next level: one supernode per community; inter-community
    /// weights sum into edges, intra-community weights into self-loops.
    fn coarsen(&self, normalized: &[u32]) -> LevelGraph {
        let n_next = normalized.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut pair_weights: std::collections::BTreeMap<(u32, u32), f64> =
            std::collections::BTreeMap::new();
        let mut self_weight = vec![0.0; n_next];
        for v in 0..self.n_nodes() {
            let cv = normalized[v];
            self_weight[cv as usize] += self.self_weight[v];
            for &(u, w) in &self.adj[v] {
                if (u as usize) < v {
                    continue; // visit each edge once
                }
                let cu = normalized[u as usize];
                if cu == cv {
                    self_weight[cv as usize] += w;
                } else {
                    *pair_weights.entry((cv.min(cu), cv.max(cu))).or_insert(0.0) += w;
                }
            }
        }
        let mut adj = vec![Vec::new(); n_next];
        for (&(a, b), &w) in &pair_weights {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        let strength: Vec<f64> = (0..n_next)
            .map(|v| adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_weight[v])
            .collect();
        LevelGraph {
            community: (0..n_next as u32).collect(),
            community_strength: strength.clone(),
            adj,
            self_weight,
            strength,
            two_m: self.two_m,
        }
    }
}
