//! Weight sequences and the closed-form quantities derived from them.
//!
//! A [`WeightSequence`] holds the sorted vertex weights `w_1 <= ... <= w_n`
//! (all at least 1) together with the exact total weight `W` and cached
//! suffix sums. Submodules provide the derived analysis:
//!
//! * [`thresholds`] - the heavy bound `psi`, both candidate thresholds,
//!   restricted moments and the two tail-condition checks.
//! * [`breeding`] - breeding grounds for the restricted process and the
//!   sparse/dense nucleus weight-bounds.
//! * [`layers`] - the layer weight-bound recursion with its error terms.

mod breeding;
mod layers;
mod thresholds;

pub use breeding::{breeding_plan, nucleus_bound_dense, nucleus_bound_sparse, BreedingPlan, DenseNucleusBound};
pub use layers::{layer_plan, LayerPlan};
pub use thresholds::{
    candidate_threshold_dense, candidate_threshold_sparse, check_subcritical_tail,
    check_supercritical_tail, heavy_bound, psi_growth_ok, threshold_report, TailVerdict,
    ThresholdReport,
};

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;
use std::io::BufRead;
use std::path::Path;

/// Sorted vertex weights with cached total weight and suffix sums.
///
/// Invariants established at construction: the sequence is nonempty, every
/// weight is finite and at least 1, and the weights are ascending. The
/// total weight `W` (and hence `lambda = W/n >= 1`) is computed with
/// compensated summation.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    weights: Vec<f64>,
    /// `suffix[i]` = compensated sum of `weights[i..]`; `suffix[n] = 0`.
    suffix: Vec<f64>,
}

/// The two banded example sequences: three weight bands whose heavy band is
/// `W^{7/12}` (variant A) or `W^{3/4}` (variant B).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleVariant {
    A,
    B,
}

impl WeightSequence {
    /// Builds a sequence from arbitrary positive weights (sorted on entry).
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySequence);
        }
        for &w in &weights {
            if !w.is_finite() {
                return Err(Error::InvalidParam(format!("weight {w} is not finite")));
            }
            if w < 1.0 {
                return Err(Error::WeightBelowOne(w));
            }
        }
        weights.sort_unstable_by(f64::total_cmp);
        let mut suffix = vec![0.0; weights.len() + 1];
        let mut acc = NeumaierSum::new();
        for i in (0..weights.len()).rev() {
            acc.add(weights[i]);
            suffix[i] = acc.value();
        }
        Ok(Self { weights, suffix })
    }

    /// `n` vertices of identical weight `w`.
    pub fn uniform(n: usize, w: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        Self::new(vec![w; n])
    }

    /// Power-law weights `w_i = max(1, c * (n/i)^a)` for `i = 1..n`.
    ///
    /// The size-biased tail of these weights behaves like `x^{-1/a + 1}`
    /// in the bulk: `a = 1/2` is the borderline exponent-3 law, `a > 1/2`
    /// dominates it.
    pub fn power_law(n: usize, a: f64, c: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParam(format!("n = {n} must be at least 1")));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParam(format!("exponent parameter a = {a} must lie in (0, 1)")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParam(format!("scale c = {c} must be positive")));
        }
        let weights = (1..=n)
            .map(|i| (c * (n as f64 / i as f64).powf(a)).max(1.0))
            .collect();
        Self::new(weights)
    }

    /// Three-band example sequence with realized total weight within one
    /// maximal weight of `w_target`.
    ///
    /// Variant A: `floor(W^{1/9})` vertices of weight `W^{7/12}`,
    /// `floor(W^{2/3}/20)` of weight `W^{1/3}`, remainder of weight 1.
    /// Variant B replaces the heavy-band weight by `W^{3/4}`.
    pub fn example(variant: ExampleVariant, w_target: f64) -> Result<Self> {
        if !(w_target.is_finite() && w_target > 0.0) {
            return Err(Error::InvalidParam(format!("W target {w_target} must be positive")));
        }
        // Band exponents composed from sqrt/cbrt (exactly rounded), so that
        // e.g. W^{2/3} of a perfect power lands on the integer it should.
        let heavy_weight = match variant {
            // W^{7/12} = W^{1/3} * W^{1/4}
            ExampleVariant::A => w_target.cbrt() * w_target.sqrt().sqrt(),
            // W^{3/4} = W^{1/2} * W^{1/4}
            ExampleVariant::B => w_target.sqrt() * w_target.sqrt().sqrt(),
        };
        let heavy_count = ulp_tolerant_floor(w_target.cbrt().cbrt());
        let mid_weight = w_target.cbrt();
        let mid_count = ulp_tolerant_floor(w_target.cbrt().powi(2) / 20.0);
        if heavy_count < 1 || mid_count < 1 {
            return Err(Error::TargetTooSmall(w_target));
        }
        let banded = heavy_count as f64 * heavy_weight + mid_count as f64 * mid_weight;
        let unit_count = (w_target - banded).floor();
        if unit_count < 1.0 {
            return Err(Error::TargetTooSmall(w_target));
        }
        let unit_count = unit_count as usize;
        let mut weights = Vec::with_capacity(unit_count + mid_count + heavy_count);
        weights.resize(unit_count, 1.0);
        weights.extend(std::iter::repeat(mid_weight).take(mid_count));
        weights.extend(std::iter::repeat(heavy_weight).take(heavy_count));
        Self::new(weights)
    }

    /// Reads a weight file: one decimal per line, blank lines ignored,
    /// sorted on load.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut weights = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let w: f64 = trimmed
                .parse()
                .map_err(|_| Error::InvalidParam(format!("line {}: cannot parse weight {trimmed:?}", idx + 1)))?;
            weights.push(w);
        }
        Self::new(weights)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sequences
    }

    /// Total weight `W` (exact compensated sum).
    pub fn total_weight(&self) -> f64 {
        self.suffix[0]
    }

    /// `lambda = W / n`.
    pub fn lambda(&self) -> f64 {
        self.total_weight() / self.len() as f64
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn min_weight(&self) -> f64 {
        self.weights[0]
    }

    pub fn max_weight(&self) -> f64 {
        *self.weights.last().expect("nonempty")
    }

    /// `k`-th largest weight, 1-based: `kth_largest(1)` is the maximum.
    pub fn kth_largest(&self, k: usize) -> Option<f64> {
        self.len().checked_sub(k).map(|i| self.weights[i])
    }

    /// Index of the first vertex with weight `>= x`.
    pub fn first_at_least(&self, x: f64) -> usize {
        self.weights.partition_point(|&w| w < x)
    }

    /// Index of the first vertex with weight `> x`.
    pub fn first_above(&self, x: f64) -> usize {
        self.weights.partition_point(|&w| w <= x)
    }

    /// `|V_{>= x}|`.
    pub fn count_at_least(&self, x: f64) -> usize {
        self.len() - self.first_at_least(x)
    }

    /// Total weight of `V_{>= x}`.
    pub fn weight_at_least(&self, x: f64) -> f64 {
        self.suffix[self.first_at_least(x)]
    }

    /// Size-biased tail `P[W* >= x] = sum_{w_u >= x} w_u / W` for `x > 0`.
    pub fn size_biased_tail(&self, x: f64) -> f64 {
        assert!(x > 0.0, "tail evaluated at non-positive x = {x}");
        self.weight_at_least(x) / self.total_weight()
    }

    /// Tail evaluated just above `x`: `sum_{w_u > x} w_u / W`.
    pub fn size_biased_tail_above(&self, x: f64) -> f64 {
        self.suffix[self.first_above(x)] / self.total_weight()
    }

    /// Compensated `sum_{lo <= w_u < hi} w_u^theta`.
    pub fn band_power_sum(&self, lo: f64, hi: f64, theta: u32) -> f64 {
        let start = self.first_at_least(lo);
        let end = self.first_at_least(hi);
        let mut acc = NeumaierSum::new();
        for &w in &self.weights[start..end] {
            acc.add(w.powi(theta as i32));
        }
        acc.value()
    }

    /// Restricted moment `sum_{a <= w_u < b} w_u^theta`, exact.
    pub fn restricted_moment(&self, a: f64, b: f64, theta: u32) -> Result<f64> {
        if !(a > 0.0 && b > a) || theta < 2 {
            return Err(Error::InvalidRange { a, b, theta });
        }
        Ok(self.band_power_sum(a, b, theta))
    }

    /// Distinct weight values ascending, each with the index of its first
    /// occurrence.
    pub fn distinct_weights(&self) -> Vec<(f64, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.weights.len() {
            out.push((self.weights[i], i));
            let v = self.weights[i];
            i = self.first_above(v).max(i + 1);
        }
        out
    }
}

/// Floor that forgives a few ulps below an integer boundary.
fn ulp_tolerant_floor(x: f64) -> usize {
    let nudged = x * (1.0 + 8.0 * f64::EPSILON);
    nudged.floor() as usize
}
