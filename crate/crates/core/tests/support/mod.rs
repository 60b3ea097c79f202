//! Shared test oracles: independent re-derivations of the closed forms by
//! dense grids, bisection, and literal set-based process definitions. They
//! evaluate definitions only and share no code with the implementations
//! they check.

#![allow(dead_code)]

use bootperc::graph::Graph;
use bootperc::rng;
use bootperc::weights::WeightSequence;
use rand::Rng;
use std::collections::BTreeSet;

/// Direct feasibility test from the definition of the heavy bound:
/// `|V_{>= x}| >= (W / 4x^2)^r`. Counting exploits only sortedness.
pub fn heavy_feasible(ws: &WeightSequence, r: u32, x: f64) -> bool {
    let count = (ws.len() - ws.weights().partition_point(|&w| w < x)) as f64;
    let rhs = (ws.total_weight() / (4.0 * x * x)).powi(r as i32);
    count >= rhs
}

/// Grid-plus-bisection oracle for the heavy bound.
///
/// A dense grid of feasibility probes brackets the answer; within each
/// interval of distinct weights the counting function is constant, so
/// feasibility is monotone there and bisection pins the minimal feasible
/// point to machine precision. The reported value is the minimum over
/// intervals, or `w_n + 1` when nothing is feasible.
pub fn heavy_bound_oracle(ws: &WeightSequence, r: u32, grid_points: usize) -> f64 {
    let w_max = ws.max_weight();
    // Dense-grid sanity probe: the first feasible grid point bounds the
    // answer from above.
    let step = (w_max + 1.0) / grid_points as f64;
    let grid_min = (1..=grid_points)
        .map(|i| i as f64 * step)
        .find(|&x| heavy_feasible(ws, r, x));

    let mut best = f64::INFINITY;
    let mut lo = 0.0f64;
    for (value, _) in ws.distinct_weights() {
        if lo >= best {
            break;
        }
        if heavy_feasible(ws, r, value) {
            // Bisect (lo, value] for the infimum of feasibility.
            let (mut a, mut b) = (lo, value);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if heavy_feasible(ws, r, m) {
                    b = m;
                } else {
                    a = m;
                }
            }
            best = best.min(b);
        }
        lo = value;
    }
    if let Some(g) = grid_min {
        assert!(best <= g + 1e-12 * g.abs(), "grid found a feasible point below the oracle");
    }
    if best.is_finite() {
        best
    } else {
        w_max + 1.0
    }
}

/// Direct band sum from the definition (no cached prefix structure).
pub fn band_sum_direct(ws: &WeightSequence, lo: f64, hi: f64, theta: i32) -> f64 {
    ws.weights()
        .iter()
        .filter(|&&w| w >= lo && w < hi)
        .map(|&w| w.powi(theta))
        .sum()
}

/// Grid-plus-bisection oracle for the auxiliary bound `f0`: the band sum
/// over `[x, psi)` is non-increasing in `x`, so global bisection applies.
pub fn f0_oracle(ws: &WeightSequence, r: u32, psi: f64, grid_points: usize) -> Option<f64> {
    let theta = (r + 1) as i32;
    let total = band_sum_direct(ws, 0.0, psi, theta);
    if total <= 0.0 {
        return None;
    }
    let half = total / 2.0;
    let holds = |x: f64| band_sum_direct(ws, x, psi, theta) >= half;
    // Grid bracket first.
    let step = psi / grid_points as f64;
    let mut a = 0.0;
    let mut b = psi;
    for i in 1..=grid_points {
        let x = i as f64 * step;
        if holds(x) {
            a = x;
        } else {
            b = x;
            break;
        }
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if holds(m) {
            a = m;
        } else {
            b = m;
        }
    }
    Some(a)
}

/// Plain (uncompensated) suffix sums for the tail oracles.
struct TailTable {
    suffix: Vec<f64>,
    total: f64,
}

impl TailTable {
    fn new(ws: &WeightSequence) -> Self {
        let n = ws.len();
        let mut suffix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] + ws.weight(i);
        }
        TailTable { suffix: suffix.clone(), total: suffix[0] }
    }

    fn at(&self, ws: &WeightSequence, x: f64) -> f64 {
        let start = ws.weights().partition_point(|&w| w < x);
        self.suffix[start] / self.total
    }
}


fn interval_floor(ws: &WeightSequence, x: f64) -> f64 {
    // Largest weight strictly below x (the open left end of x's constancy
    // interval), or 0 when none.
    let idx = ws.weights().partition_point(|&w| w < x);
    if idx == 0 {
        0.0
    } else {
        ws.weights()[idx - 1]
    }
}

/// Probe set for the tail oracles: a dense grid over `[lo, hi]` plus every
/// distinct weight (and a point just above it) in range.
fn tail_probes(ws: &WeightSequence, lo: f64, hi: f64, grid_points: usize) -> Vec<f64> {
    let mut probes = vec![lo, hi];
    let step = (hi - lo) / grid_points as f64;
    if step > 0.0 {
        probes.extend((1..grid_points).map(|i| lo + i as f64 * step));
    }
    for (value, _) in ws.distinct_weights() {
        if value >= lo && value <= hi {
            probes.push(value);
        }
        let above = value * (1.0 + 1e-13);
        if above >= lo && above <= hi {
            probes.push(above);
        }
    }
    probes.sort_unstable_by(f64::total_cmp);
    probes.dedup();
    probes
}

/// Oracle for the supercritical tail condition `P[W* >= x] >= C/x` on
/// `[c1, w_n]`; returns the verdict and the infimum of the violating
/// region.
pub fn supercritical_oracle(
    ws: &WeightSequence,
    big_c: f64,
    c1: f64,
    grid_points: usize,
) -> (bool, Option<f64>) {
    let hi = ws.max_weight();
    if c1 > hi {
        return (true, None);
    }
    let table = TailTable::new(ws);
    for x in tail_probes(ws, c1, hi, grid_points) {
        if table.at(ws, x) < big_c / x {
            // Violations within a constancy interval start at its left
            // edge, so the infimum is that edge clipped to c1.
            let onset = interval_floor(ws, x).max(c1);
            return (false, Some(onset));
        }
    }
    (true, None)
}

/// Oracle for the subcritical tail condition `P[W* >= f] <= c/f` on
/// `[c1, h]`; returns the verdict and the infimum of the violating region.
pub fn subcritical_oracle(
    ws: &WeightSequence,
    c: f64,
    c1: f64,
    h: f64,
    grid_points: usize,
) -> (bool, Option<f64>) {
    if c1 > h {
        return (true, None);
    }
    let table = TailTable::new(ws);
    for f in tail_probes(ws, c1, h, grid_points) {
        let tail = table.at(ws, f);
        if tail > c / f {
            let onset = (c / tail).max(interval_floor(ws, f)).max(c1);
            return (false, Some(onset));
        }
    }
    (true, None)
}

/// Literal set-based implementation of the restricted process: at step `t`
/// only ground vertices become infected, counting neighbours among the
/// previous step's newly infected only.
pub fn restricted_reference(
    g: &Graph,
    a0: &[usize],
    ground: &[usize],
    r: u32,
) -> (Vec<usize>, usize) {
    let ground: BTreeSet<usize> = ground.iter().copied().collect();
    let mut infected: BTreeSet<usize> = a0.iter().copied().collect();
    let mut last_new: BTreeSet<usize> = infected.clone();
    let mut steps = 0;
    loop {
        let mut newly = BTreeSet::new();
        for &v in &ground {
            if infected.contains(&v) {
                continue;
            }
            let hits = g.neighbors(v).iter().filter(|&&u| last_new.contains(&(u as usize))).count();
            if hits >= r as usize {
                newly.insert(v);
            }
        }
        if newly.is_empty() {
            break;
        }
        steps += 1;
        infected.extend(newly.iter().copied());
        last_new = newly;
    }
    (infected.into_iter().collect(), steps)
}

/// Random weight sequences mixing the built-in generators with ad-hoc
/// shapes; n stays within `max_n`.
pub fn random_sequence(seed: u64, max_n: usize) -> WeightSequence {
    let mut r = rng::stream(seed, &[0x5e9]);
    let n = r.gen_range(8..=max_n);
    match r.gen_range(0..4u32) {
        0 => WeightSequence::power_law(n, r.gen_range(0.15..0.95), r.gen_range(0.5..3.0)).unwrap(),
        1 => WeightSequence::uniform(n, r.gen_range(1.0..8.0)).unwrap(),
        2 => {
            // Two bands plus unit background.
            let heavy = r.gen_range(5.0..200.0);
            let mid = r.gen_range(1.5..heavy);
            let mut weights = vec![1.0; n];
            let heavy_count = r.gen_range(1..=(n / 4).max(1));
            let mid_count = r.gen_range(1..=(n / 2).max(1));
            for w in weights.iter_mut().take(heavy_count) {
                *w = heavy;
            }
            for w in weights.iter_mut().skip(heavy_count).take(mid_count) {
                *w = mid;
            }
            WeightSequence::new(weights).unwrap()
        }
        _ => {
            // Log-uniform continuous weights.
            let spread: f64 = r.gen_range(0.5..5.0);
            let weights = (0..n).map(|_| (r.gen::<f64>() * spread).exp()).collect();
            WeightSequence::new(weights).unwrap()
        }
    }
}

/// Pool-adjacent-violators isotonic regression (least squares, ascending).
pub fn isotonic_fit(values: &[f64]) -> Vec<f64> {
    let mut level: Vec<f64> = Vec::new();
    let mut weight: Vec<f64> = Vec::new();
    for &v in values {
        level.push(v);
        weight.push(1.0);
        while level.len() > 1 && level[level.len() - 2] > level[level.len() - 1] {
            let (l2, w2) = (level.pop().unwrap(), weight.pop().unwrap());
            let (l1, w1) = (level.pop().unwrap(), weight.pop().unwrap());
            level.push((l1 * w1 + l2 * w2) / (w1 + w2));
            weight.push(w1 + w2);
        }
    }
    let mut out = Vec::with_capacity(values.len());
    for (l, w) in level.iter().zip(&weight) {
        for _ in 0..*w as usize {
            out.push(*l);
        }
    }
    out
}
