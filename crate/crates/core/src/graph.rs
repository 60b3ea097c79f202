//! Exact sampling of the Chung-Lu random graph `CL(w)`.
//!
//! Pair `{u, v}` is an edge independently with probability
//! `min(w_u w_v / W, 1)`. Two samplers are provided:
//!
//! * [`sample_graph`] - production sampler: pairs whose probability clamps
//!   to 1 are enumerated directly, the rest are drawn with weight-sorted
//!   skip sampling (geometric jumps under a per-row probability bound,
//!   acceptance with ratio true-p over bound-p). Distributionally identical
//!   to naive pairwise Bernoulli sampling.
//! * [`sample_graph_naive`] - an explicit Bernoulli draw for every pair;
//!   the distributional reference.
//!
//! Both also exist in a matched-decision form ([`sample_graph_with`],
//! [`sample_graph_naive_with`]) where every pair decision consumes the same
//! per-pair uniform from a shared [`PairDecisions`] oracle. Under a shared
//! oracle the two enumeration strategies produce identical edge sets seed
//! for seed, which pins down clamp handling and row coverage exactly.

use crate::error::{Error, Result};
use crate::rng;
use crate::weights::WeightSequence;
use rand::Rng;

/// Immutable adjacency structure: per-vertex sorted neighbor lists in
/// compressed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            debug_assert_ne!(u, v, "self-loop");
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
            debug_assert!(
                neighbors[offsets[v]..offsets[v + 1]].windows(2).all(|w| w[0] < w[1]),
                "duplicate edge at vertex {v}"
            );
        }
        Graph { offsets, neighbors }
    }

    /// Builds a graph from an explicit list of undirected edges.
    pub fn from_edge_pairs(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut normalized: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u as usize));
            }
            let hi = u.max(v) as usize;
            if hi >= n {
                return Err(Error::IndexOutOfRange { index: hi, n });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParam("duplicate edge".into()));
        }
        Ok(Self::from_edges(n, &normalized))
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// Edge-list export: one line `u v` per edge with `u < v`, 1-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

/// Edge probability `min(w_u w_v / W, 1)` for distinct vertices.
pub fn edge_probability(ws: &WeightSequence, u: usize, v: usize) -> Result<f64> {
    let n = ws.len();
    if u >= n {
        return Err(Error::IndexOutOfRange { index: u, n });
    }
    if v >= n {
        return Err(Error::IndexOutOfRange { index: v, n });
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok((ws.weight(u) * ws.weight(v) / ws.total_weight()).min(1.0))
}

/// Per-pair uniform oracle shared by the matched-decision samplers.
#[derive(Debug, Clone, Copy)]
pub struct PairDecisions {
    seed: u64,
}

impl PairDecisions {
    pub fn new(seed: u64) -> Self {
        PairDecisions { seed }
    }

    /// Uniform in `[0, 1)` for the unordered pair `{u, v}`.
    pub fn uniform(&self, u: usize, v: usize) -> f64 {
        rng::pair_uniform(self.seed, u, v)
    }
}

/// Rows are scanned heaviest-first so that true probabilities are
/// non-increasing along each row; this is what makes the skip bound valid.
struct RowOrder {
    /// Descending-rank -> original vertex index.
    to_orig: Vec<usize>,
    desc_weights: Vec<f64>,
}

fn row_order(ws: &WeightSequence) -> RowOrder {
    let n = ws.len();
    let to_orig: Vec<usize> = (0..n).rev().collect();
    let desc_weights: Vec<f64> = to_orig.iter().map(|&v| ws.weight(v)).collect();
    RowOrder { to_orig, desc_weights }
}

/// Samples `CL(w)` with skip sampling; deterministic given the seed.
pub fn sample_graph(ws: &WeightSequence, seed: u64) -> Graph {
    let n = ws.len();
    let total = ws.total_weight();
    let order = row_order(ws);
    let w = &order.desc_weights;
    let mut rng = rng::stream(seed, &[0x47_52_41_50_48]);
    let mut edges: Vec<(u32, u32)> = Vec::new();

    for i in 0..n.saturating_sub(1) {
        // Clamped prefix: heaviest partners first, each with probability 1.
        let mut j = i + 1;
        while j < n && w[i] * w[j] >= total {
            edges.push(edge_key(&order, i, j));
            j += 1;
        }
        // Skip sampling over the remaining partners (true p < 1 and
        // non-increasing in j).
        let mut bound = if j < n { w[i] * w[j] / total } else { 0.0 };
        while j < n {
            let u: f64 = rng.gen();
            let skip = if u > 0.0 {
                u.ln() / (1.0 - bound).ln()
            } else {
                f64::INFINITY
            };
            if skip >= (n - j) as f64 {
                break;
            }
            j += skip as usize;
            let p = w[i] * w[j] / total;
            let accept: f64 = rng.gen();
            if accept * bound < p {
                edges.push(edge_key(&order, i, j));
            }
            bound = p;
            j += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// Naive reference sampler: one Bernoulli draw per pair.
pub fn sample_graph_naive(ws: &WeightSequence, seed: u64) -> Graph {
    let n = ws.len();
    let total = ws.total_weight();
    let mut rng = rng::stream(seed, &[0x4e_41_49_56_45]);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = (ws.weight(u) * ws.weight(v) / total).min(1.0);
            if rng.gen::<f64>() < p {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Matched-decision form of [`sample_graph`]: identical row and clamp
/// enumeration, but each pair decision consumes the oracle's per-pair
/// uniform. Under a shared oracle this produces exactly the edge set of
/// [`sample_graph_naive_with`].
pub fn sample_graph_with(ws: &WeightSequence, decisions: &PairDecisions) -> Graph {
    let n = ws.len();
    let total = ws.total_weight();
    let order = row_order(ws);
    let w = &order.desc_weights;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut j = i + 1;
        while j < n && w[i] * w[j] >= total {
            edges.push(edge_key(&order, i, j));
            j += 1;
        }
        // The scan form of skip sampling: a pair is visited when its
        // uniform falls below the running bound and accepted when it also
        // falls below the true probability; since bound >= true p at visit
        // time, acceptance reduces to one comparison per pair.
        let mut bound = if j < n { w[i] * w[j] / total } else { 0.0 };
        while j < n {
            let p = w[i] * w[j] / total;
            debug_assert!(p <= bound + f64::EPSILON);
            let u = decisions.uniform(order.to_orig[i], order.to_orig[j]);
            if u < p {
                edges.push(edge_key(&order, i, j));
            }
            if u < bound {
                bound = p;
            }
            j += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// Matched-decision form of [`sample_graph_naive`].
pub fn sample_graph_naive_with(ws: &WeightSequence, decisions: &PairDecisions) -> Graph {
    let n = ws.len();
    let total = ws.total_weight();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = (ws.weight(u) * ws.weight(v) / total).min(1.0);
            if decisions.uniform(u, v) < p {
                edges.push((u as u32, v as u32));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

fn edge_key(order: &RowOrder, i: usize, j: usize) -> (u32, u32) {
    let a = order.to_orig[i] as u32;
    let b = order.to_orig[j] as u32;
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}
