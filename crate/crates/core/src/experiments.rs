//! Monte-Carlo sweeps over the initial infection rate and regime
//! diagnostics.
//!
//! A sweep runs a grid of `p0` values (given as multipliers of the
//! critical scale `a_c`), with a configurable number of replicates per
//! cell. Each replicate resamples both the graph and the initial set, with
//! seeds derived from the base seed by `(cell, replicate)`, so the result
//! table is byte-identical regardless of how many worker threads run it.

use crate::error::{Error, Result};
use crate::graph::{sample_graph, Graph};
use crate::percolation::{run_bootstrap, run_bootstrap_induced, sample_initial, InfectionParams};
use crate::rng;
use crate::weights::{
    candidate_threshold_sparse, heavy_bound, threshold_report, ExampleVariant, WeightSequence,
};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default outbreak classification threshold: fraction of `n` the final
/// set must exceed to count as an outbreak.
pub const DEFAULT_OUTBREAK_FRACTION: f64 = 0.05;

/// How the sweep obtains its weight sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    PowerLaw { n: usize, exponent: f64, scale: f64 },
    ExampleA { w_target: f64 },
    ExampleB { w_target: f64 },
    Uniform { n: usize, weight: f64 },
    File { path: String },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<WeightSequence> {
        match self {
            GeneratorSpec::PowerLaw { n, exponent, scale } => {
                WeightSequence::power_law(*n, *exponent, *scale)
            }
            GeneratorSpec::ExampleA { w_target } => {
                WeightSequence::example(ExampleVariant::A, *w_target)
            }
            GeneratorSpec::ExampleB { w_target } => {
                WeightSequence::example(ExampleVariant::B, *w_target)
            }
            GeneratorSpec::Uniform { n, weight } => WeightSequence::uniform(*n, *weight),
            GeneratorSpec::File { path } => WeightSequence::from_path(path),
        }
    }
}

/// Sweep configuration; `p0_multipliers` scale the critical scale `a_c`
/// of the generated sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub generator: GeneratorSpec,
    pub r: u32,
    pub p0_multipliers: Vec<f64>,
    pub replicates: u32,
    pub base_seed: u64,
    #[serde(default = "default_outbreak_fraction")]
    pub outbreak_fraction: f64,
}

fn default_outbreak_fraction() -> f64 {
    DEFAULT_OUTBREAK_FRACTION
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidParam(format!("r = {} must be at least 2", self.r)));
        }
        if self.replicates < 1 {
            return Err(Error::InvalidParam("replicates must be at least 1".into()));
        }
        if self.p0_multipliers.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidParam("p0 multipliers must be finite and non-negative".into()));
        }
        if !(self.outbreak_fraction > 0.0 && self.outbreak_fraction < 1.0) {
            return Err(Error::InvalidParam(format!(
                "outbreak fraction {} must lie in (0, 1)",
                self.outbreak_fraction
            )));
        }
        Ok(())
    }
}

/// One replicate's outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub p0: f64,
    pub multiplier: f64,
    pub replicate: u32,
    pub initial_size: usize,
    pub final_size: usize,
    pub final_fraction: f64,
    pub infected_weight: f64,
    pub rounds: usize,
    pub outbreak: bool,
}

/// Per-cell aggregate over replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellAggregate {
    pub p0: f64,
    pub multiplier: f64,
    pub outbreak_frequency: f64,
    pub median_final_fraction: f64,
    pub q1_final_fraction: f64,
    pub q3_final_fraction: f64,
}

/// Full sweep outcome: one row per `(cell, replicate)` in grid order plus
/// per-cell aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub a_c_scale: f64,
    pub rows: Vec<SweepRow>,
    pub cells: Vec<CellAggregate>,
}

impl SweepResult {
    /// CSV with a fixed header; column order matches [`SweepRow`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,p0,multiplier,replicate,initial_size,final_size,final_fraction,infected_weight,rounds,outbreak\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                row.n,
                fmt_float(row.p0),
                fmt_float(row.multiplier),
                row.replicate,
                row.initial_size,
                row.final_size,
                fmt_float(row.final_fraction),
                fmt_float(row.infected_weight),
                row.rounds,
                row.outbreak,
            ));
        }
        out
    }

    /// Two-column plot data: `p0 outbreak_frequency` per cell.
    pub fn to_plot_data(&self) -> String {
        let mut out = String::new();
        for cell in &self.cells {
            out.push_str(&format!("{} {}\n", fmt_float(cell.p0), fmt_float(cell.outbreak_frequency)));
        }
        out
    }
}

/// Fixed 17-significant-digit decimal formatting; parsing the text
/// reproduces the exact f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs the sweep. Cells x replicates form an embarrassingly parallel task
/// set; rows are keyed by `(cell, replicate)` and collected in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let ws = cfg.generator.build()?;
    let report = threshold_report(&ws, cfg.r);
    let a_c = report.a_c_scale;
    let n = ws.len();

    let cells: Vec<(usize, f64, f64)> = cfg
        .p0_multipliers
        .iter()
        .enumerate()
        .map(|(ci, &m)| {
            let p0 = if m == 0.0 { 0.0 } else { (m * a_c).min(1.0) };
            (ci, m, p0)
        })
        .collect();

    let tasks: Vec<(usize, f64, f64, u32)> = cells
        .iter()
        .flat_map(|&(ci, m, p0)| (0..cfg.replicates).map(move |rep| (ci, m, p0, rep)))
        .collect();

    let rows: Vec<SweepRow> = tasks
        .par_iter()
        .map(|&(ci, multiplier, p0, replicate)| {
            let graph_seed = rng::derive_seed(cfg.base_seed, &[1, ci as u64, replicate as u64]);
            let init_seed = rng::derive_seed(cfg.base_seed, &[2, ci as u64, replicate as u64]);
            let g = sample_graph(&ws, graph_seed);
            let params = InfectionParams::new(cfg.r, p0).expect("validated");
            let a0 = sample_initial(&ws, &params, init_seed);
            let trace = run_bootstrap(&g, &ws, &a0, cfg.r);
            let final_fraction = trace.final_size() as f64 / n as f64;
            SweepRow {
                n,
                p0,
                multiplier,
                replicate,
                initial_size: a0.len(),
                final_size: trace.final_size(),
                final_fraction,
                infected_weight: trace.infected_weight(),
                rounds: trace.steps_taken,
                outbreak: final_fraction > cfg.outbreak_fraction,
            }
        })
        .collect();

    for row in &rows {
        debug_assert!(row.initial_size <= row.final_size && row.final_size <= n);
    }

    let cells = cells
        .iter()
        .map(|&(ci, m, p0)| {
            let cell_rows: Vec<&SweepRow> = rows
                .iter()
                .skip(ci * cfg.replicates as usize)
                .take(cfg.replicates as usize)
                .collect();
            let outbreaks = cell_rows.iter().filter(|r| r.outbreak).count();
            let mut fractions: Vec<f64> = cell_rows.iter().map(|r| r.final_fraction).collect();
            fractions.sort_unstable_by(f64::total_cmp);
            CellAggregate {
                p0,
                multiplier: m,
                outbreak_frequency: outbreaks as f64 / cell_rows.len() as f64,
                median_final_fraction: quantile(&fractions, 0.5),
                q1_final_fraction: quantile(&fractions, 0.25),
                q3_final_fraction: quantile(&fractions, 0.75),
            }
        })
        .collect();

    Ok(SweepResult { a_c_scale: a_c, rows, cells })
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Locates the first crossing of outbreak frequency past 1/2, linearly
/// interpolated in `log p0` between the bracketing cells; `None` when no
/// crossing exists.
pub fn estimate_transition(result: &SweepResult) -> Option<f64> {
    let mut cells: Vec<&CellAggregate> = result.cells.iter().filter(|c| c.p0 > 0.0).collect();
    cells.sort_by(|a, b| a.p0.total_cmp(&b.p0));
    for pair in cells.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if lo.outbreak_frequency < 0.5 && hi.outbreak_frequency >= 0.5 {
            let t = (0.5 - lo.outbreak_frequency) / (hi.outbreak_frequency - lo.outbreak_frequency);
            let log_p = lo.p0.ln() + t * (hi.p0.ln() - lo.p0.ln());
            return Some(log_p.exp());
        }
    }
    None
}

/// Subcritical weight-growth check.
///
/// Runs the process restricted to the non-heavy vertices (weights below
/// `psi`) and reports the fraction of replicates whose final infected
/// weight stays within `mu^{1/2} W p0`. Requires `p0 <= p_s / mu`.
pub fn subcritical_weight_check(
    ws: &WeightSequence,
    r: u32,
    p0: f64,
    mu: f64,
    replicates: u32,
    seed: u64,
) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParam(format!("mu = {mu} must be positive")));
    }
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidParam(format!("p0 = {p0} must lie in [0, 1]")));
    }
    let p_s = candidate_threshold_sparse(ws, r);
    let limit = p_s / mu;
    if p0 > limit {
        return Err(Error::NotSubcritical { p0, limit });
    }
    let psi = heavy_bound(ws, r);
    let allowed: Vec<bool> = ws.weights().iter().map(|&w| w < psi).collect();
    let bound = mu.sqrt() * ws.total_weight() * p0;
    let params = InfectionParams::new(r, p0)?.with_cap(psi);

    let passes: u32 = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let g = sample_graph(ws, rng::derive_seed(seed, &[11, rep as u64]));
            let a0 = sample_initial(ws, &params, rng::derive_seed(seed, &[12, rep as u64]));
            let trace = run_bootstrap_induced(&g, ws, &a0, r, Some(&allowed));
            u32::from(trace.infected_weight() <= bound)
        })
        .sum();
    Ok(passes as f64 / replicates as f64)
}

/// Dense cascade check: seeds `seed_count` uniformly chosen heavy vertices,
/// runs bootstrap restricted to the heavy-induced subgraph, and reports
/// whether every heavy vertex ends infected.
pub fn dense_cascade_check(ws: &WeightSequence, r: u32, seed_count: usize, seed: u64) -> Result<bool> {
    if seed_count == 0 {
        return Err(Error::InvalidParam("seed count must be at least 1".into()));
    }
    let psi = heavy_bound(ws, r);
    let heavy: Vec<usize> = (ws.first_at_least(psi)..ws.len()).collect();
    if heavy.is_empty() {
        return Err(Error::NoHeavyVertices);
    }
    let allowed: Vec<bool> = ws.weights().iter().map(|&w| w >= psi).collect();
    let g = sample_graph(ws, rng::derive_seed(seed, &[21]));
    let mut rng = rng::stream(seed, &[22]);
    let mut pool = heavy.clone();
    pool.shuffle(&mut rng);
    let a0: Vec<usize> = pool.into_iter().take(seed_count.min(heavy.len())).collect();
    let trace = run_bootstrap_induced(&g, ws, &a0, r, Some(&allowed));
    Ok(trace.final_size() == heavy.len())
}

/// Helper used by the sampler diagnostics: a graph plus its generator
/// sequence, sampled with a derived seed.
pub fn sample_for(cfg: &SweepConfig, cell: usize, replicate: u32) -> Result<(WeightSequence, Graph)> {
    let ws = cfg.generator.build()?;
    let g = sample_graph(&ws, rng::derive_seed(cfg.base_seed, &[1, cell as u64, replicate as u64]));
    Ok((ws, g))
}
