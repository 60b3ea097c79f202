//! Bootstrap percolation: the engine, its restricted variant, and a
//! brute-force oracle.
//!
//! Rounds are synchronous: `A_{t+1} = A_t ∪ {v : |N(v) ∩ A_t| >= r}`. The
//! engine keeps a per-vertex infected-neighbour counter and a frontier of
//! newly infected vertices, processing level by level so that round
//! boundaries in the [`Trace`] match the definition; the final set is the
//! same as any asynchronous order would give.

use crate::error::{Error, Result};
use crate::rng;
use crate::sum::NeumaierSum;
use crate::weights::WeightSequence;
use crate::graph::Graph;
use rand::Rng;
use serde::Serialize;

/// Parameters of the initial infection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfectionParams {
    /// Infection threshold `r >= 2`.
    pub r: u32,
    /// Initial infection rate in `[0, 1]`.
    pub p0: f64,
    /// When set, only vertices with weight strictly below the cap are
    /// eligible for the Bernoulli draw.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_weight_cap: Option<f64>,
    /// When set, every vertex with weight at least the floor is infected
    /// deterministically (in addition to the Bernoulli draw below it).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_weight_floor_all: Option<f64>,
}

impl InfectionParams {
    pub fn new(r: u32, p0: f64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParam(format!("infection threshold r = {r} must be at least 2")));
        }
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidParam(format!("p0 = {p0} must lie in [0, 1]")));
        }
        Ok(InfectionParams { r, p0, init_weight_cap: None, init_weight_floor_all: None })
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.init_weight_cap = Some(cap);
        self
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.init_weight_floor_all = Some(floor);
        self
    }
}

/// One synchronous round of the process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Round {
    pub newly_infected_count: usize,
    pub newly_infected_weight: f64,
    /// Total infected weight after this round (including the initial set).
    pub cumulative_weight: f64,
}

/// Record of one percolation run. The rounds list always ends with the
/// terminating round in which nothing was infected; `steps_taken` counts
/// the productive rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub rounds: Vec<Round>,
    pub initial_set_size: usize,
    /// Final infected set `A_F`, ascending vertex indices.
    pub final_set: Vec<usize>,
    pub steps_taken: usize,
}

impl Trace {
    pub fn final_size(&self) -> usize {
        self.final_set.len()
    }

    /// Total infected weight at the end of the run.
    pub fn infected_weight(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.cumulative_weight)
    }

    /// JSON export: rounds array plus a final-set summary; the sorted
    /// index list itself (1-indexed) only when `include_final_set` is set.
    pub fn to_json(&self, include_final_set: bool) -> serde_json::Value {
        let mut out = serde_json::json!({
            "initial_set_size": self.initial_set_size,
            "steps_taken": self.steps_taken,
            "final_size": self.final_size(),
            "final_infected_weight": self.infected_weight(),
            "rounds": self.rounds,
        });
        if include_final_set {
            let ids: Vec<usize> = self.final_set.iter().map(|&v| v + 1).collect();
            out["final_set"] = serde_json::json!(ids);
        }
        out
    }
}

/// Draws the initial infected set: an independent Bernoulli(`p0`) over the
/// eligible vertices (those under the cap, when one is set), united with
/// the deterministic floor set.
pub fn sample_initial(ws: &WeightSequence, params: &InfectionParams, seed: u64) -> Vec<usize> {
    let mut rng = rng::stream(seed, &[0x49_4e_49_54]);
    let mut picked = vec![false; ws.len()];
    for v in 0..ws.len() {
        let eligible = params.init_weight_cap.map_or(true, |cap| ws.weight(v) < cap);
        if eligible && rng.gen::<f64>() < params.p0 {
            picked[v] = true;
        }
    }
    if let Some(floor) = params.init_weight_floor_all {
        for v in ws.first_at_least(floor)..ws.len() {
            picked[v] = true;
        }
    }
    picked.iter().enumerate().filter_map(|(v, &p)| p.then_some(v)).collect()
}

/// Runs the bootstrap process to its fixpoint.
pub fn run_bootstrap(g: &Graph, ws: &WeightSequence, a0: &[usize], r: u32) -> Trace {
    run_bootstrap_induced(g, ws, a0, r, None)
}

/// Runs the bootstrap process on the subgraph induced by `allowed`:
/// only allowed vertices can be infected and only edges between allowed
/// vertices count. `a0` is intersected with the allowed set.
pub fn run_bootstrap_induced(
    g: &Graph,
    ws: &WeightSequence,
    a0: &[usize],
    r: u32,
    allowed: Option<&[bool]>,
) -> Trace {
    assert!(r >= 2, "infection threshold r = {r} must be at least 2");
    let n = g.n();
    let is_allowed = |v: usize| allowed.map_or(true, |m| m[v]);
    let mut infected = vec![false; n];
    let mut frontier: Vec<u32> = Vec::new();
    for &v in a0 {
        if is_allowed(v) && !infected[v] {
            infected[v] = true;
            frontier.push(v as u32);
        }
    }
    let initial_set_size = frontier.len();
    let mut cumulative = NeumaierSum::new();
    for &v in &frontier {
        cumulative.add(ws.weight(v as usize));
    }

    let mut counts = vec![0u32; n];
    let mut rounds = Vec::new();
    loop {
        let mut next: Vec<u32> = Vec::new();
        for &v in &frontier {
            for &u in g.neighbors(v as usize) {
                let u = u as usize;
                if infected[u] || !is_allowed(u) {
                    continue;
                }
                counts[u] = counts[u].saturating_add(1);
                if counts[u] == r {
                    next.push(u as u32);
                }
            }
        }
        let mut round_weight = NeumaierSum::new();
        for &v in &next {
            infected[v as usize] = true;
            round_weight.add(ws.weight(v as usize));
        }
        cumulative.add(round_weight.value());
        rounds.push(Round {
            newly_infected_count: next.len(),
            newly_infected_weight: round_weight.value(),
            cumulative_weight: cumulative.value(),
        });
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let steps_taken = rounds.len() - 1;
    let final_set = infected
        .iter()
        .enumerate()
        .filter_map(|(v, &i)| i.then_some(v))
        .collect();
    Trace { rounds, initial_set_size, final_set, steps_taken }
}

/// Brute-force oracle: repeated full scans until a fixpoint; by
/// construction reaches the same final set as [`run_bootstrap`].
pub fn run_bootstrap_oracle(g: &Graph, a0: &[usize], r: u32) -> Vec<usize> {
    let n = g.n();
    let mut infected = vec![false; n];
    for &v in a0 {
        infected[v] = true;
    }
    loop {
        let mut added = Vec::new();
        for v in 0..n {
            if infected[v] {
                continue;
            }
            let count = g.neighbors(v).iter().filter(|&&u| infected[u as usize]).count();
            if count >= r as usize {
                added.push(v);
            }
        }
        if added.is_empty() {
            break;
        }
        for v in added {
            infected[v] = true;
        }
    }
    infected.iter().enumerate().filter_map(|(v, &i)| i.then_some(v)).collect()
}

/// The modified process restricted to a breeding ground.
///
/// At step `t` only vertices of `ground` become infected, and a vertex
/// qualifies by having at least `r` neighbours among the vertices infected
/// at the immediately preceding step (`A'_{t-1} \ A'_{t-2}`, with
/// `A'_{-1}` empty). Setting `count_all_infected` switches to counting all
/// infected neighbours instead, for sensitivity runs; the default `false`
/// is the defining rule.
pub fn run_restricted(
    g: &Graph,
    ws: &WeightSequence,
    a0: &[usize],
    ground: &[usize],
    r: u32,
    count_all_infected: bool,
) -> Trace {
    assert!(r >= 2);
    let n = g.n();
    let mut in_ground = vec![false; n];
    for &v in ground {
        in_ground[v] = true;
    }
    let mut infected = vec![false; n];
    let mut frontier: Vec<u32> = Vec::new();
    for &v in a0 {
        if !infected[v] {
            infected[v] = true;
            frontier.push(v as u32);
        }
    }
    let initial_set_size = frontier.len();
    let mut cumulative = NeumaierSum::new();
    for &v in &frontier {
        cumulative.add(ws.weight(v as usize));
    }

    let mut counts = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut rounds = Vec::new();
    loop {
        let mut next: Vec<u32> = Vec::new();
        for &v in &frontier {
            for &u in g.neighbors(v as usize) {
                let u = u as usize;
                if infected[u] || !in_ground[u] {
                    continue;
                }
                if counts[u] == 0 {
                    touched.push(u as u32);
                }
                counts[u] = counts[u].saturating_add(1);
                if counts[u] == r {
                    next.push(u as u32);
                }
            }
        }
        if !count_all_infected {
            // Only the previous step's newly infected may be counted, so
            // the counters reset between rounds.
            for &u in &touched {
                counts[u as usize] = 0;
            }
            touched.clear();
        }
        let mut round_weight = NeumaierSum::new();
        for &v in &next {
            infected[v as usize] = true;
            round_weight.add(ws.weight(v as usize));
        }
        cumulative.add(round_weight.value());
        rounds.push(Round {
            newly_infected_count: next.len(),
            newly_infected_weight: round_weight.value(),
            cumulative_weight: cumulative.value(),
        });
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let steps_taken = rounds.len() - 1;
    let final_set = infected
        .iter()
        .enumerate()
        .filter_map(|(v, &i)| i.then_some(v))
        .collect();
    Trace { rounds, initial_set_size, final_set, steps_taken }
}

/// Fraction of the nucleus band `V_{>= psi_K}` infected by weight.
pub fn nucleus_fraction(trace: &Trace, ws: &WeightSequence, psi_k: f64) -> Result<f64> {
    if psi_k > ws.max_weight() {
        return Err(Error::EmptyNucleusBand(psi_k));
    }
    let denom = ws.weight_at_least(psi_k);
    let mut num = NeumaierSum::new();
    for &v in &trace.final_set {
        if ws.weight(v) >= psi_k {
            num.add(ws.weight(v));
        }
    }
    Ok(num.value() / denom)
}

/// Fixpoint soundness check for a trace: every infected non-seed vertex
/// has at least `r` infected neighbours, and every uninfected vertex has
/// fewer than `r`. Used by tests and the run command's self-check.
pub fn verify_fixpoint(g: &Graph, a0: &[usize], r: u32, trace: &Trace) -> bool {
    let n = g.n();
    let mut infected = vec![false; n];
    for &v in &trace.final_set {
        infected[v] = true;
    }
    let mut seed = vec![false; n];
    for &v in a0 {
        seed[v] = true;
    }
    for v in 0..n {
        let count = g.neighbors(v).iter().filter(|&&u| infected[u as usize]).count();
        if infected[v] && !seed[v] && count < r as usize {
            return false;
        }
        if !infected[v] && count >= r as usize {
            return false;
        }
    }
    // Seeds stay infected.
    a0.iter().all(|&v| infected[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_graph;

    fn path_graph(ws: &WeightSequence) -> Graph {
        // Deterministic path 0-1-2-...: built by brute force through the
        // naive sampler is not possible, so use the test-only constructor.
        let n = ws.len();
        let edges: Vec<(u32, u32)> = (0..n - 1).map(|i| (i as u32, i as u32 + 1)).collect();
        Graph::from_edge_pairs(n, &edges).unwrap()
    }

    #[test]
    fn empty_seed_set_stays_empty() {
        let ws = WeightSequence::uniform(10, 1.0).unwrap();
        let g = sample_graph(&ws, 1);
        let trace = run_bootstrap(&g, &ws, &[], 2);
        assert_eq!(trace.final_size(), 0);
        assert_eq!(trace.steps_taken, 0);
        assert_eq!(trace.rounds.len(), 1);
        assert_eq!(trace.rounds[0].newly_infected_count, 0);
        assert_eq!(trace.infected_weight(), 0.0);
    }

    #[test]
    fn complete_graph_fills_in_one_round() {
        // K_5 via clamped probabilities; two seeds expose every other
        // vertex to two infected neighbours at once.
        let ws = WeightSequence::uniform(5, 5.0).unwrap();
        let g = sample_graph(&ws, 0);
        assert_eq!(g.edge_count(), 10);
        let trace = run_bootstrap(&g, &ws, &[0, 1], 2);
        assert_eq!(trace.final_size(), 5);
        assert_eq!(trace.steps_taken, 1);
        assert_eq!(trace.rounds[0].newly_infected_count, 3);
    }

    #[test]
    fn path_respects_threshold() {
        let ws = WeightSequence::uniform(5, 1.0).unwrap();
        let g = path_graph(&ws);
        // Seeds 0 and 2: vertex 1 sees both, nothing else ever does.
        let trace = run_bootstrap(&g, &ws, &[0, 2], 2);
        assert_eq!(trace.final_set, vec![0, 1, 2]);
        let oracle = run_bootstrap_oracle(&g, &[0, 2], 2);
        assert_eq!(trace.final_set, oracle);
    }

    #[test]
    fn oracle_trivial_cases() {
        let ws = WeightSequence::uniform(6, 1.0).unwrap();
        let g = sample_graph(&ws, 5);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(run_bootstrap_oracle(&g, &all, 2), all);
        // r above the maximum degree: nothing beyond the seeds.
        let r_big = (g.n() as u32).max(3);
        let trace = run_bootstrap(&g, &ws, &[0, 3], r_big);
        assert_eq!(trace.final_set, vec![0, 3]);
    }

    #[test]
    fn sample_initial_cap_floor_and_extremes() {
        let ws = WeightSequence::new(vec![1.0, 1.0, 3.0]).unwrap();
        let none = InfectionParams::new(2, 0.0).unwrap();
        assert!(sample_initial(&ws, &none, 1).is_empty());
        let all = InfectionParams::new(2, 1.0).unwrap();
        assert_eq!(sample_initial(&ws, &all, 1), vec![0, 1, 2]);
        // The weight-3 vertex is always included through the floor.
        let floored = InfectionParams::new(2, 0.5).unwrap().with_floor(2.0);
        for seed in 0..20 {
            let a0 = sample_initial(&ws, &floored, seed);
            assert!(a0.contains(&2));
        }
        // A cap excludes the heavy vertex from the Bernoulli draw.
        let capped = InfectionParams::new(2, 1.0).unwrap().with_cap(2.0);
        assert_eq!(sample_initial(&ws, &capped, 1), vec![0, 1]);
    }

    #[test]
    fn params_are_validated() {
        assert!(InfectionParams::new(1, 0.5).is_err());
        assert!(InfectionParams::new(2, 1.5).is_err());
        assert!(InfectionParams::new(2, -0.1).is_err());
    }

    #[test]
    fn restricted_empty_ground_keeps_seeds() {
        let ws = WeightSequence::uniform(8, 1.0).unwrap();
        let g = sample_graph(&ws, 2);
        let trace = run_restricted(&g, &ws, &[1, 4], &[], 2, false);
        assert_eq!(trace.final_set, vec![1, 4]);
        assert_eq!(trace.steps_taken, 0);
    }

    #[test]
    fn restricted_needs_r_seeds_for_any_infection() {
        // The first step counts neighbours inside A'_0 itself, so fewer
        // than r seeds can never infect anything.
        let ws = WeightSequence::uniform(6, 6.0).unwrap();
        let g = sample_graph(&ws, 0); // complete
        let ground: Vec<usize> = (0..6).collect();
        let trace = run_restricted(&g, &ws, &[0], &ground, 2, false);
        assert_eq!(trace.final_set, vec![0]);
        let trace = run_restricted(&g, &ws, &[0, 1], &ground, 2, false);
        assert_eq!(trace.final_size(), 6);
    }

    #[test]
    fn restricted_counts_only_previous_step() {
        // Path 0-1-2-3-4 with ground {2}: seeds {1, 3} infect 2 at step 1.
        let ws = WeightSequence::uniform(5, 1.0).unwrap();
        let g = path_graph(&ws);
        let trace = run_restricted(&g, &ws, &[1, 3], &[2], 2, false);
        assert_eq!(trace.final_set, vec![1, 2, 3]);

        // Staggered seeds: 2 never sees two *newly* infected neighbours in
        // one step under the defining rule, but does when counting all
        // infected neighbours.
        let edges: Vec<(u32, u32)> = vec![(0, 1), (1, 2), (3, 2), (3, 4), (0, 4), (0, 3)];
        let g = Graph::from_edge_pairs(5, &edges).unwrap();
        // Seeds {1}: step 1 infects nothing (vertex 2 sees one seed).
        let trace = run_restricted(&g, &ws, &[1], &[2, 3], 2, false);
        assert_eq!(trace.final_set, vec![1]);
    }

    #[test]
    fn nucleus_fraction_bounds() {
        let ws = WeightSequence::new(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let g = sample_graph(&ws, 9);
        let full = run_bootstrap(&g, &ws, &[0, 1, 2, 3], 2);
        assert_eq!(nucleus_fraction(&full, &ws, 4.0).unwrap(), 1.0);
        let none = run_bootstrap(&g, &ws, &[], 2);
        assert_eq!(nucleus_fraction(&none, &ws, 4.0).unwrap(), 0.0);
        assert!(nucleus_fraction(&full, &ws, 9.0).is_err());
    }

    #[test]
    fn traces_are_fixpoints() {
        for seed in 0..30 {
            let ws = WeightSequence::power_law(60, 0.7, 1.5).unwrap();
            let g = sample_graph(&ws, seed);
            let params = InfectionParams::new(2, 0.2).unwrap();
            let a0 = sample_initial(&ws, &params, seed);
            let trace = run_bootstrap(&g, &ws, &a0, 2);
            assert!(verify_fixpoint(&g, &a0, 2, &trace));
            // Cumulative weight is non-decreasing and rounds end empty.
            assert!(trace
                .rounds
                .windows(2)
                .all(|w| w[1].cumulative_weight >= w[0].cumulative_weight));
            assert_eq!(trace.rounds.last().unwrap().newly_infected_count, 0);
            assert!(trace.rounds.len() <= g.n() + 1);
        }
    }
}
