//! Compensated floating-point accumulation.
//!
//! Power sums like `sum w_u^{r+1}` mix terms spanning many orders of
//! magnitude, so every sum in this crate that feeds a closed-form quantity
//! goes through Neumaier's variant of Kahan summation.

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator of terms.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
