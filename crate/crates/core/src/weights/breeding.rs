//! Breeding grounds for the restricted process and nucleus weight-bounds.

use super::thresholds::{candidate_threshold_sparse, heavy_bound};
use super::WeightSequence;
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;
use serde::Serialize;

/// Breeding ground for the sparse restricted process.
///
/// `ground` (the set `S`) lists vertex indices ascending by weight; every
/// member has weight in `[f0, psi)`. For `r = 2` the ground is the maximal
/// ascending prefix of `S'` with `sum w^4 <= 9 W^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreedingPlan {
    /// Auxiliary weight bound: the largest weight value below `psi` whose
    /// band `[f0, psi)` still carries half the sparse `(r+1)`-power sum.
    pub f0: f64,
    /// The breeding ground `S`, ascending vertex indices.
    pub ground: Vec<usize>,
    /// `|S'|`: every other vertex of `V_{[f0, psi)}` plus the heaviest.
    pub ground_prime_size: usize,
    /// Weight cap for the initial infection, `min(f0, n p0 mu^{-1/2})`.
    pub phi0: f64,
    /// `mu = p0 / p_s`.
    pub mu: f64,
}

/// Builds the breeding plan for infection threshold `r` and initial rate `p0`.
pub fn breeding_plan(ws: &WeightSequence, r: u32, p0: f64) -> Result<BreedingPlan> {
    assert!(r >= 2, "infection threshold r = {r} must be at least 2");
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::InvalidParam(format!("p0 = {p0} must lie in (0, 1]")));
    }
    let psi = heavy_bound(ws, r);
    let sparse_end = ws.first_at_least(psi);
    if sparse_end == 0 {
        return Err(Error::EmptyBand);
    }

    // Suffix scan over distinct weights below psi: f0 is the largest weight
    // value whose suffix band still holds half of the sparse power sum. The
    // band sum is constant between weight values, so the supremum in the
    // definition is attained at a weight value.
    let theta = (r + 1) as i32;
    let distinct: Vec<(f64, usize)> = ws
        .distinct_weights()
        .into_iter()
        .filter(|&(_, idx)| idx < sparse_end)
        .collect();
    let mut suffix_at = vec![0.0; distinct.len()];
    let mut acc = NeumaierSum::new();
    let mut upper = sparse_end;
    for (j, &(_, first_idx)) in distinct.iter().enumerate().rev() {
        for &w in &ws.weights()[first_idx..upper] {
            acc.add(w.powi(theta));
        }
        suffix_at[j] = acc.value();
        upper = first_idx;
    }
    let total = suffix_at[0];
    let half = total / 2.0;
    let (f0, band_start) = distinct
        .iter()
        .zip(&suffix_at)
        .rev()
        .find(|&(_, &s)| s >= half)
        .map(|(&(value, idx), _)| (value, idx))
        .expect("suffix at the smallest weight equals the full sparse sum");

    // S': every other vertex of V_{[f0, psi)} starting from the lightest,
    // always including the heaviest.
    let mut ground_prime: Vec<usize> = (band_start..sparse_end).step_by(2).collect();
    let last = sparse_end - 1;
    if *ground_prime.last().expect("band is nonempty") != last {
        ground_prime.push(last);
    }
    let ground_prime_size = ground_prime.len();

    let ground = if r == 2 {
        let cap = 9.0 * ws.total_weight() * ws.total_weight();
        let mut acc = NeumaierSum::new();
        let mut kept = 0;
        for &v in &ground_prime {
            acc.add(ws.weight(v).powi(4));
            if acc.value() > cap {
                break;
            }
            kept += 1;
        }
        ground_prime.truncate(kept);
        ground_prime
    } else {
        ground_prime
    };

    let p_s = candidate_threshold_sparse(ws, r);
    let mu = p0 / p_s;
    let phi0 = f0.min(ws.len() as f64 * p0 * mu.sqrt().recip());
    Ok(BreedingPlan { f0, ground, ground_prime_size, phi0, mu })
}

/// Sparse nucleus weight-bound.
///
/// With `psi' = psi (log mu)^{-1/4}` and `eta = (log mu)^{eta_exponent}`:
/// returns `W / w_{n-r+1}` when `psi' eta > W / w_{n-r+1}`, else `psi'`.
/// `eta` is any slowly growing function; the default exponent `1/8`
/// satisfies `eta -> infinity` while `(log mu)^{-1/4} eta -> 0`.
pub fn nucleus_bound_sparse(ws: &WeightSequence, r: u32, mu: f64, eta_exponent: f64) -> Result<f64> {
    assert!(r >= 2);
    if !(mu > 1.0) {
        return Err(Error::MuTooSmall(mu));
    }
    let k = ws
        .kth_largest(r as usize)
        .ok_or_else(|| Error::InvalidParam(format!("need at least r = {r} vertices")))?;
    let log_mu = mu.ln();
    let psi_prime = heavy_bound(ws, r) * log_mu.powf(-0.25);
    let eta = log_mu.powf(eta_exponent);
    let top_bound = ws.total_weight() / k;
    if psi_prime * eta > top_bound {
        Ok(top_bound)
    } else {
        Ok(psi_prime)
    }
}

/// Dense nucleus weight-bound; the defining formula is partial, so the
/// third case is surfaced explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "regime", content = "value", rename_all = "kebab-case")]
pub enum DenseNucleusBound {
    /// `W / w_{n-r+1}`: the top `r` weights dominate.
    TopWeights(f64),
    /// `psi`: the whole heavy set is the nucleus.
    HeavyBound(f64),
    /// Neither case of the two-case formula applies.
    Neither,
}

impl DenseNucleusBound {
    pub fn value(&self) -> Option<f64> {
        match *self {
            DenseNucleusBound::TopWeights(v) | DenseNucleusBound::HeavyBound(v) => Some(v),
            DenseNucleusBound::Neither => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DenseNucleusBound::TopWeights(_) => "top-weights",
            DenseNucleusBound::HeavyBound(_) => "heavy-bound",
            DenseNucleusBound::Neither => "neither",
        }
    }
}

/// Dense nucleus weight-bound for `mu_d = p0 / p_d > 1`.
///
/// Case one (`w_{n-r+1} > W^{1/2} (log mu_d)^{1/16}`) gives `W / w_{n-r+1}`;
/// case two (`w_{n-r+1} <= W^{1/2} (log mu_d)^{1/16}` and
/// `psi <= W^{1/2} (log mu_d)^{-1/8}`) gives `psi`; otherwise `Neither`.
/// Sequences without heavy vertices (`psi > w_n`) have no dense process at
/// all and also report `Neither`.
pub fn nucleus_bound_dense(ws: &WeightSequence, r: u32, mu_d: f64) -> DenseNucleusBound {
    assert!(r >= 2);
    assert!(mu_d > 1.0, "mu_d = {mu_d} must exceed 1");
    let psi = heavy_bound(ws, r);
    if psi > ws.max_weight() {
        return DenseNucleusBound::Neither;
    }
    let Some(k) = ws.kth_largest(r as usize) else {
        return DenseNucleusBound::Neither;
    };
    let log_mu = mu_d.ln();
    let sqrt_w = ws.total_weight().sqrt();
    if k > sqrt_w * log_mu.powf(1.0 / 16.0) {
        DenseNucleusBound::TopWeights(ws.total_weight() / k)
    } else if psi <= sqrt_w * log_mu.powf(-1.0 / 8.0) {
        DenseNucleusBound::HeavyBound(psi)
    } else {
        DenseNucleusBound::Neither
    }
}
