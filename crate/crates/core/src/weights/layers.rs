//! Layer weight-bound recursion with its error terms.

use super::WeightSequence;
use crate::error::{Error, Result};
use serde::Serialize;

/// The layer recursion: `psi_1 = min(psi_K, W/w_n)` and
/// `psi_{i+1} = C' / P[W* >= psi_i]` while `psi_i >= 2 max(C1, lambda)`,
/// together with the error terms `delta_i = (1/4)(C'/C)^i` and their prefix
/// sums `eps_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerPlan {
    pub psi_k: f64,
    pub c: f64,
    pub c1: f64,
    pub alpha: f64,
    /// `C' = C min(alpha, 1/2) / 2`.
    pub c_prime: f64,
    /// `psi_1 ..= psi_{i*+1}`.
    pub bounds: Vec<f64>,
    /// `delta_0 ..= delta_{i*+1}`.
    pub deltas: Vec<f64>,
    /// `eps_0 ..= eps_{i*+1}` (prefix sums of the deltas).
    pub epsilons: Vec<f64>,
    /// Last index `i` with `psi_i >= 2 max(C1, lambda)`; zero when already
    /// `psi_1` falls below the stopping bound.
    pub i_star: usize,
}

/// Computes the layer plan. The theorem-scale constant condition
/// `C >= 64 r min(alpha, 1/2)^{-3}` is enforced unless `allow_small_c`;
/// desk-scale sequences typically need the override.
pub fn layer_plan(
    ws: &WeightSequence,
    r: u32,
    c: f64,
    c1: f64,
    alpha: f64,
    psi_k: f64,
    allow_small_c: bool,
) -> Result<LayerPlan> {
    assert!(r >= 2, "infection threshold r = {r} must be at least 2");
    if !(c > 0.0 && c1 > 0.0 && alpha > 0.0) {
        return Err(Error::InvalidParam(format!(
            "layer constants must be positive (C={c}, C1={c1}, alpha={alpha})"
        )));
    }
    if !(psi_k > 0.0) {
        return Err(Error::InvalidParam(format!("psi_K = {psi_k} must be positive")));
    }
    let required_c = 64.0 * r as f64 * alpha.min(0.5).powi(-3);
    if c < required_c && !allow_small_c {
        return Err(Error::GuardViolated(format!(
            "C = {c} is below the theorem-scale requirement {required_c}"
        )));
    }

    let c_prime = c * alpha.min(0.5) / 2.0;
    let stop = 2.0 * c1.max(ws.lambda());
    let psi_1 = psi_k.min(ws.total_weight() / ws.max_weight());
    let mut bounds = vec![psi_1];
    while *bounds.last().expect("nonempty") >= stop {
        let current = *bounds.last().expect("nonempty");
        let index = bounds.len();
        let tail = ws.size_biased_tail(current);
        let next = c_prime / tail;
        if !(next < current) {
            // Monotone decrease is guaranteed only under the supercritical
            // tail condition; report the witness where it fails.
            return Err(Error::DivergentRecursion {
                index,
                at: current,
                next,
                tail,
                required: c / current,
            });
        }
        bounds.push(next);
    }

    let i_star = bounds.len() - 1;
    let ratio = c_prime / c;
    let deltas: Vec<f64> = (0..=i_star + 1).map(|i| 0.25 * ratio.powi(i as i32)).collect();
    let mut epsilons = Vec::with_capacity(deltas.len());
    let mut acc = 0.0;
    for &d in &deltas {
        acc += d;
        epsilons.push(acc);
    }
    Ok(LayerPlan { psi_k, c, c1, alpha, c_prime, bounds, deltas, epsilons, i_star })
}
