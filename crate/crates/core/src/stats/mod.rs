//! Empirical distributions, Kolmogorov–Smirnov distances and reproducible randomness.

mod io;
mod rng;

pub use io::{
    format_sig17, read_samples, write_comparison_csv, write_comparison_json, write_samples,
    SampleRow,
};
pub use rng::RngStream;

use crate::distributions::GridCurve;
use crate::error::{Error, Result};

/// Coefficient of the asymptotic one-sample KS critical value `c/√n` at 5%.
pub const KS_COEFF_5PCT: f64 = 1.36;
/// Same at 1%.
pub const KS_COEFF_1PCT: f64 = 1.63;

/// Immutable sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
}

impl EmpiricalSample {
    /// Sorts `values` ascending. Rejects empty input and non-finite values.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sample", "non-finite value"));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalSample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.count() as f64
    }

    /// Sample median (average of the two middle values for even counts).
    pub fn median(&self) -> f64 {
        let n = self.count();
        if n % 2 == 1 {
            self.values[n / 2]
        } else {
            0.5 * (self.values[n / 2 - 1] + self.values[n / 2])
        }
    }

    /// Fraction of values `≤ x` (right-continuous).
    pub fn ecdf(&self, x: f64) -> f64 {
        let below = self.values.partition_point(|&v| v <= x);
        below as f64 / self.count() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        EmpiricalSample::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

/// One-sample KS statistic `sup_x |F_n(x) − F(x)|`, evaluated on both sides of
/// every jump.
pub fn ks_one_sample(sample: &EmpiricalSample, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sample.count() as f64;
    sample
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.abs().max(below.abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS statistic; both ECDFs are evaluated (right-continuously) at
/// every pooled point, so ties are handled identically on every platform.
pub fn ks_two_sample(s1: &EmpiricalSample, s2: &EmpiricalSample) -> f64 {
    s1.values()
        .iter()
        .chain(s2.values())
        .map(|&x| (s1.ecdf(x) - s2.ecdf(x)).abs())
        .fold(0.0, f64::max)
}

/// `max_i |y1_i − y2_i|` for two curves on the same grid.
pub fn grid_sup_distance(c1: &GridCurve, c2: &GridCurve) -> Result<f64> {
    if c1.xs() != c2.xs() {
        return Err(Error::GridMismatch(format!(
            "curves sampled on different grids ({} vs {} points)",
            c1.len(),
            c2.len()
        )));
    }
    Ok(c1
        .ys()
        .iter()
        .zip(c2.ys())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
