//! The heavy bound, the candidate thresholds, and tail-condition checks.

use super::WeightSequence;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Closed-form threshold quantities for one weight sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Heavy bound `psi`.
    pub psi: f64,
    /// `|V_{>= psi}|`.
    pub heavy_count: usize,
    /// Sparse candidate threshold `p_s`; may exceed 1 (or be infinite) for
    /// degenerate sequences whose sparse part is empty.
    pub p_sparse: f64,
    /// Dense candidate threshold `p_d`; present iff `psi <= w_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_dense: Option<f64>,
    /// `min(p_sparse, p_dense)` over the candidates that exist.
    pub a_c_scale: f64,
    /// Whether the dense candidate exists (`psi <= w_n`).
    pub dense_exists: bool,
}

/// Outcome of a tail-condition check: either the inequality holds on the
/// whole range, or `witness` is the first (smallest) violating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<f64>,
}

impl TailVerdict {
    fn ok() -> Self {
        TailVerdict { holds: true, witness: None }
    }

    fn fail(witness: f64) -> Self {
        TailVerdict { holds: false, witness: Some(witness) }
    }
}

/// The heavy bound `psi = min { x > 0 : |V_{>= x}| >= (W / 4x^2)^r }`,
/// with the convention `psi = w_n + 1` when no such `x` exists.
///
/// The counting function is constant on each interval `(d_{j-1}, d_j]` of
/// distinct weights, and on an interval with count `k` the condition holds
/// exactly for `x >= (sqrt(W)/2) * k^{-1/(2r)}`. The minimum is therefore
/// attained at one of those per-interval solutions, clipped to its interval;
/// a solution falling at or below the interval's lower end is dominated by
/// the preceding interval's candidate.
pub fn heavy_bound(ws: &WeightSequence, r: u32) -> f64 {
    assert!(r >= 2, "infection threshold r = {r} must be at least 2");
    let half_sqrt_w = ws.total_weight().sqrt() / 2.0;
    let exponent = -1.0 / (2.0 * r as f64);
    let mut best = f64::INFINITY;
    let mut lo = 0.0f64;
    for (value, first_idx) in ws.distinct_weights() {
        let count = (ws.len() - first_idx) as f64;
        let x = half_sqrt_w * count.powf(exponent);
        if x > lo && x <= value {
            best = best.min(x);
        }
        lo = value;
    }
    if best.is_finite() {
        best
    } else {
        ws.max_weight() + 1.0
    }
}

/// Sparse candidate threshold
/// `p_s = (W / sum_{w_u < psi} w_u^{r+1})^{1/(r-1)}`.
pub fn candidate_threshold_sparse(ws: &WeightSequence, r: u32) -> f64 {
    let psi = heavy_bound(ws, r);
    let sparse_sum = ws.band_power_sum(0.0, psi, r + 1);
    (ws.total_weight() / sparse_sum).powf(1.0 / (r as f64 - 1.0))
}

/// Dense candidate threshold
/// `p_d = (1 / sum_{w_u >= psi} w_u^r)^{1/r}`, absent iff `psi > w_n`.
pub fn candidate_threshold_dense(ws: &WeightSequence, r: u32) -> Option<f64> {
    let psi = heavy_bound(ws, r);
    if psi > ws.max_weight() {
        return None;
    }
    let dense_sum = ws.band_power_sum(psi, f64::INFINITY, r);
    Some(dense_sum.recip().powf(1.0 / r as f64))
}

/// Bundles `psi`, both candidate thresholds and the critical scale
/// `a_c = min` of the candidates that exist.
pub fn threshold_report(ws: &WeightSequence, r: u32) -> ThresholdReport {
    let psi = heavy_bound(ws, r);
    let p_sparse = candidate_threshold_sparse(ws, r);
    let p_dense = candidate_threshold_dense(ws, r);
    let a_c_scale = match p_dense {
        Some(pd) => p_sparse.min(pd),
        None => p_sparse,
    };
    ThresholdReport {
        psi,
        heavy_count: ws.count_at_least(psi),
        p_sparse,
        p_dense,
        a_c_scale,
        dense_exists: p_dense.is_some(),
    }
}

/// Growth check `psi + 1 <= (2/3) sqrt(W)`; expected to hold for the
/// built-in generators once `n` is large, flagged rather than asserted
/// below that.
pub fn psi_growth_ok(ws: &WeightSequence, r: u32) -> bool {
    heavy_bound(ws, r) + 1.0 <= (2.0 / 3.0) * ws.total_weight().sqrt()
}

/// Checks `P[W* >= x] >= C/x` for all `x` in `[c1, w_n]`.
///
/// The tail is constant on each interval `(d_{j-1}, d_j]` of distinct
/// weights while `C/x` decreases, so on each interval portion the binding
/// point is its infimum; the witness reported on failure is the infimum of
/// the violating region.
pub fn check_supercritical_tail(ws: &WeightSequence, big_c: f64, c1: f64) -> TailVerdict {
    assert!(big_c > 0.0 && c1 > 0.0, "constants must be positive");
    let w_max = ws.max_weight();
    if c1 > w_max {
        return TailVerdict::ok();
    }
    let mut lo = 0.0f64;
    for (value, first_idx) in ws.distinct_weights() {
        // Portion of (lo, value] inside [c1, w_max].
        let portion_lo = lo.max(c1);
        lo = value;
        if portion_lo > value {
            continue;
        }
        let tail = ws.suffix[first_idx] / ws.total_weight();
        if tail < big_c / portion_lo {
            return TailVerdict::fail(portion_lo);
        }
    }
    TailVerdict::ok()
}

/// Checks `P[W* >= f] <= c/f` for all `f` in `[c1, h]`.
///
/// The guard `c < 1/30` is enforced unless `allow_large_c` is set. The tail
/// jumps up at each weight value, so the binding points are the weight
/// values in range (plus `f = h` when it truncates an interval); the witness
/// reported on failure is the infimum of the violating region.
pub fn check_subcritical_tail(
    ws: &WeightSequence,
    c: f64,
    c1: f64,
    h: f64,
    allow_large_c: bool,
) -> Result<TailVerdict> {
    if !(c > 0.0) || !(c1 > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidParam(format!(
            "tail-check constants must be positive (c={c}, c1={c1}, h={h})"
        )));
    }
    if c >= 1.0 / 30.0 && !allow_large_c {
        return Err(Error::GuardViolated(format!("c = {c} must be below 1/30")));
    }
    if c1 > h {
        return Ok(TailVerdict::ok());
    }
    let mut lo = 0.0f64;
    for (value, first_idx) in ws.distinct_weights() {
        let hi = value.min(h);
        let portion_lo = lo.max(c1);
        lo = value;
        if portion_lo > hi {
            if value >= h {
                break;
            }
            continue;
        }
        let tail = ws.suffix[first_idx] / ws.total_weight();
        // Violation iff tail > c/f for some f in the portion; hardest at hi.
        if tail > c / hi {
            let onset = (c / tail).max(portion_lo);
            return Ok(TailVerdict::fail(onset));
        }
        if value >= h {
            break;
        }
    }
    Ok(TailVerdict::ok())
}
