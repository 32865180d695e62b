//! Undirected graph representation and structural statistics.
//!
//! The adjacency is kept as per-node sorted neighbor lists, which makes
//! membership tests a binary search and keeps every traversal deterministic.
//! Self-loops, where allowed, are stored once per node and count twice
//! towards degree and strength.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::ingest::CanonicalEdgeList;

/// Sources per parallel work unit for BFS-style sweeps. Partial results are
/// folded in chunk order so thread count never changes the output.
const SOURCE_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub node: u32,
    pub weight: f64,
}

/// Undirected graph with optional edge weights and optional self-loops.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<Neighbor>>,
    edge_count: usize,
    allow_self_loops: bool,
}

impl Graph {
    pub fn new(allow_self_loops: bool) -> Self {
        Graph {
            labels: Vec::new(),
            adj: Vec::new(),
            edge_count: 0,
            allow_self_loops,
        }
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> u32 {
        self.labels.push(label.into());
        self.adj.push(Vec::new());
        (self.labels.len() - 1) as u32
    }

    /// Insert an undirected edge. Duplicate edges, non-positive weights and
    /// (when disallowed) self-loops are rejected.
    pub fn add_edge(&mut self, u: u32, v: u32, weight: f64) -> Result<()> {
        let n = self.n_nodes() as u32;
        if u >= n {
            return Err(CoreError::NodeOutOfRange(u));
        }
        if v >= n {
            return Err(CoreError::NodeOutOfRange(v));
        }
        if weight <= 0.0 || weight.is_nan() {
            return Err(CoreError::NonPositiveWeight(weight));
        }
        if u == v {
            if !self.allow_self_loops {
                return Err(CoreError::SelfLoopNotAllowed(self.labels[u as usize].clone()));
            }
            let list = &mut self.adj[u as usize];
            match list.binary_search_by_key(&u, |nb| nb.node) {
                Ok(_) => {
                    return Err(CoreError::DuplicateEdge(
                        self.labels[u as usize].clone(),
                        self.labels[v as usize].clone(),
                    ))
                }
                Err(pos) => list.insert(pos, Neighbor { node: u, weight }),
            }
            self.edge_count += 1;
            return Ok(());
        }
        if self.has_edge(u, v) {
            return Err(CoreError::DuplicateEdge(
                self.labels[u as usize].clone(),
                self.labels[v as usize].clone(),
            ));
        }
        let pos = self.adj[u as usize]
            .binary_search_by_key(&v, |nb| nb.node)
            .unwrap_err();
        self.adj[u as usize].insert(pos, Neighbor { node: v, weight });
        let pos = self.adj[v as usize]
            .binary_search_by_key(&u, |nb| nb.node)
            .unwrap_err();
        self.adj[v as usize].insert(pos, Neighbor { node: u, weight });
        self.edge_count += 1;
        Ok(())
    }

    /// Unweighted simple graph over `n` anonymous nodes; handy in tests.
    pub fn from_unweighted_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Graph::new(false);
        for i in 0..n {
            g.add_node(format!("n{i}"));
        }
        for &(u, v) in edges {
            g.add_edge(u, v, 1.0)?;
        }
        Ok(g)
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_count
    }

    pub fn allows_self_loops(&self) -> bool {
        self.allow_self_loops
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbors(&self, v: u32) -> &[Neighbor] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize]
            .binary_search_by_key(&v, |nb| nb.node)
            .is_ok()
    }

    pub fn edge_weight(&self, u: u32, v: u32) -> Option<f64> {
        self.adj[u as usize]
            .binary_search_by_key(&v, |nb| nb.node)
            .ok()
            .map(|pos| self.adj[u as usize][pos].weight)
    }

    /// Degree with self-loops counting twice.
    pub fn degree(&self, v: u32) -> usize {
        let list = &self.adj[v as usize];
        let loop_extra = usize::from(list.binary_search_by_key(&v, |nb| nb.node).is_ok());
        list.len() + loop_extra
    }

    /// Weighted degree (strength) with self-loops counting twice.
    pub fn strength(&self, v: u32) -> f64 {
        let mut total = 0.0;
        for nb in &self.adj[v as usize] {
            total += if nb.node == v { 2.0 * nb.weight } else { nb.weight };
        }
        total
    }

    /// Every edge once, as `(u, v, weight)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter()
                .filter(move |nb| nb.node >= u)
                .map(move |nb| (u, nb.node, nb.weight))
        })
    }

    /// Total edge weight, each edge (self-loops included) counted once.
    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }
}

/// City graph: one node per city identity, labeled `Name (Country)`.
#[derive(Debug, Clone)]
pub struct CityGraph {
    pub graph: Graph,
    pub cities: Vec<crate::identity::CityId>,
}

/// Build the simple undirected city network from a canonical edge list.
pub fn build_city_graph(list: &CanonicalEdgeList) -> CityGraph {
    let mut graph = Graph::new(false);
    for city in &list.cities {
        graph.add_node(city.label());
    }
    for &(a, b) in &list.edges {
        // Canonical lists are deduplicated and self-pair free.
        graph
            .add_edge(a, b, 1.0)
            .expect("canonical edge list violated graph invariants");
    }
    CityGraph {
        graph,
        cities: list.cities.clone(),
    }
}

/// The structural measures reported for each network.
#[derive(Debug, Clone, Serialize)]
pub struct NetworkSummary {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub avg_clustering: f64,
    pub giant_component_fraction: f64,
    pub avg_path_length: f64,
}

/// Compute all summary statistics for one graph.
pub fn network_summary(g: &Graph) -> Result<NetworkSummary> {
    Ok(NetworkSummary {
        n_nodes: g.n_nodes(),
        n_edges: g.n_edges(),
        avg_clustering: average_clustering(g)?,
        giant_component_fraction: giant_component(g)?.1,
        avg_path_length: average_path_length(g)?,
    })
}

/// Mean local clustering coefficient over all nodes.
///
/// c(v) = 2 T(v) / (k(v) (k(v)-1)) with T(v) the number of edges among v's
/// neighbors; nodes with fewer than two neighbors contribute 0. Self-loops
/// are ignored both for the neighbor set and for triangle counting.
pub fn average_clustering(g: &Graph) -> Result<f64> {
    if g.n_nodes() == 0 {
        return Err(CoreError::EmptyGraph);
    }
    let total: f64 = (0..g.n_nodes() as u32)
        .map(|v| local_clustering(g, v))
        .sum();
    Ok(total / g.n_nodes() as f64)
}

fn local_clustering(g: &Graph, v: u32) -> f64 {
    let neighbors: Vec<u32> = g
        .neighbors(v)
        .iter()
        .filter(|nb| nb.node != v)
        .map(|nb| nb.node)
        .collect();
    let k = neighbors.len();
    if k < 2 {
        return 0.0;
    }
    let mut triangles = 0usize;
    for (i, &a) in neighbors.iter().enumerate() {
        for &b in &neighbors[i + 1..] {
            if a != b && g.has_edge(a, b) {
                triangles += 1;
            }
        }
    }
    2.0 * triangles as f64 / (k * (k - 1)) as f64
}

/// Connected components, each sorted ascending, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n_nodes();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut component = Vec::new();
        seen[start as usize] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            component.push(v);
            for nb in g.neighbors(v) {
                if !seen[nb.node as usize] {
                    seen[nb.node as usize] = true;
                    queue.push_back(nb.node);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

/// Largest connected component and its share of all nodes. Ties go to the
/// component containing the smallest node index.
pub fn giant_component(g: &Graph) -> Result<(Vec<u32>, f64)> {
    if g.n_nodes() == 0 {
        return Err(CoreError::EmptyGraph);
    }
    let components = connected_components(g);
    // Components are discovered in order of their smallest node, so the first
    // maximal one is the tie-break winner.
    let best = components
        .into_iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
        .map(|(_, c)| c)
        .expect("nonempty graph has at least one component");
    let fraction = best.len() as f64 / g.n_nodes() as f64;
    Ok((best, fraction))
}

fn bfs_distance_sum(g: &Graph, source: u32, in_scope: &[bool]) -> u64 {
    let n = g.n_nodes();
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    let mut total = 0u64;
    while let Some(v) = queue.pop_front() {
        total += dist[v as usize] as u64;
        for nb in g.neighbors(v) {
            let w = nb.node as usize;
            if in_scope[w] && dist[w] == u32::MAX {
                dist[w] = dist[v as usize] + 1;
                queue.push_back(nb.node);
            }
        }
    }
    total
}

/// Mean hop distance over all unordered node pairs of the giant component,
/// by exact BFS from every component node.
pub fn average_path_length(g: &Graph) -> Result<f64> {
    let (gc, _) = giant_component(g)?;
    if gc.len() < 2 {
        return Err(CoreError::GiantComponentTooSmall);
    }
    let mut in_scope = vec![false; g.n_nodes()];
    for &v in &gc {
        in_scope[v as usize] = true;
    }
    // Integer distance totals merge associatively, so the parallel sum is
    // identical to the serial one.
    let total: u64 = gc
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&s| bfs_distance_sum(g, s, &in_scope))
                .sum::<u64>()
        })
        .sum();
    let pairs = gc.len() as u64 * (gc.len() as u64 - 1) / 2;
    Ok(total as f64 / 2.0 / pairs as f64)
}

/// Estimated mean path length from a seeded subset of BFS sources; for graphs
/// where the exact all-sources sweep is too expensive.
pub fn average_path_length_sampled(g: &Graph, n_sources: usize, seed: u64) -> Result<f64> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let (gc, _) = giant_component(g)?;
    if gc.len() < 2 {
        return Err(CoreError::GiantComponentTooSmall);
    }
    if n_sources >= gc.len() {
        return average_path_length(g);
    }
    let mut in_scope = vec![false; g.n_nodes()];
    for &v in &gc {
        in_scope[v as usize] = true;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sources = gc.clone();
    sources.shuffle(&mut rng);
    sources.truncate(n_sources);
    let total: u64 = sources
        .iter()
        .map(|&s| bfs_distance_sum(g, s, &in_scope))
        .sum();
    let pairs = n_sources as u64 * (gc.len() as u64 - 1);
    Ok(total as f64 / pairs as f64)
}

/// Complementary cumulative degree distribution P(deg >= d), one row per
/// observed degree value, non-increasing and starting at exactly 1.0.
pub fn degree_distribution(g: &Graph, weighted: bool) -> Vec<(f64, f64)> {
    let n = g.n_nodes();
    if n == 0 {
        return Vec::new();
    }
    let mut degrees: Vec<f64> = (0..n as u32)
        .map(|v| {
            if weighted {
                g.strength(v)
            } else {
                g.degree(v) as f64
            }
        })
        .collect();
    degrees.sort_by(|a, b| a.partial_cmp(b).expect("degrees are finite"));
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < n {
        let d = degrees[i];
        // All nodes from position i onward have degree >= d.
        out.push((d, (n - i) as f64 / n as f64));
        let mut j = i + 1;
        while j < n && degrees[j] == d {
            j += 1;
        }
        i = j;
    }
    out
}
