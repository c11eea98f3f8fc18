//! Deterministic identity and invariant checks shared by the `identity-suite`
//! subcommand and the test suites.

use serde::Serialize;

use crate::distributions::{
    conditional_density_p_r, gaussian_tail, gumbel_cdf, gumbel_density, gumbel_identity_residual,
    mills_ratio, ExponentialTail, GaussianTail,
};
use crate::evt::{criterion_gaps, gnedenko_lhs, solve_normalizers};
use crate::numeric::{adaptive_simpson, linspace_step};
use crate::residual::{scaled_residual, shifted_log_residual_cdf};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Worst observed deviation (or 0/1 for yes/no checks, where 0 passes).
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    fn flag(name: &'static str, holds: bool) -> Self {
        CheckResult::new(name, if holds { 0.0 } else { 1.0 }, 0.0)
    }
}

fn sup(xs: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    xs.iter().map(|&x| f(x)).fold(0.0, f64::max)
}

/// Runs every deterministic check. `grid` drives the Gumbel checks; `perturb`
/// is added to the identity residual so the suite can be shown to fail.
pub fn identity_checks(grid: &[f64], perturb: f64) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    checks.push(CheckResult::new(
        "gumbel_identity",
        sup(grid, |x| (gumbel_identity_residual(x) + perturb).abs()),
        1e-12,
    ));
    let h = 1e-5;
    checks.push(CheckResult::new(
        "gumbel_cdf_derivative",
        sup(grid, |x| {
            ((gumbel_cdf(x + h) - gumbel_cdf(x - h)) / (2.0 * h) - gumbel_density(x)).abs()
        }),
        1e-8,
    ));

    let symmetric = linspace_step(0.0, 8.0, 1e-3);
    checks.push(CheckResult::new(
        "gaussian_symmetry",
        sup(&symmetric, |r| (gaussian_tail(r) + gaussian_tail(-r) - 1.0).abs()),
        1e-13,
    ));
    // Strict decrease is only representable once steps exceed half an ulp of 1.
    let flat = linspace_step(-8.0, -5.0, 1e-3);
    let decreasing = linspace_step(-5.0, 38.0, 1e-3);
    checks.push(CheckResult::flag(
        "gaussian_tail_decreasing",
        flat.windows(2).all(|w| gaussian_tail(w[1]) <= gaussian_tail(w[0]))
            && decreasing.windows(2).all(|w| gaussian_tail(w[1]) < gaussian_tail(w[0])),
    ));
    let mills_grid = linspace_step(2.0, 40.0, 1e-3);
    checks.push(CheckResult::flag(
        "mills_two_sided_bound",
        mills_grid.iter().all(|&r| {
            let v = r * mills_ratio(r);
            v < 1.0 && v > 1.0 - 1.0 / (r * r)
        }),
    ));

    checks.push(CheckResult::new(
        "p_r_normalization",
        [0.0, 1.0, 2.0, 5.0]
            .iter()
            .map(|&r| {
                let total =
                    adaptive_simpson(|x| conditional_density_p_r(r, x), -15.0, 40.0 + r, 1e-10);
                (total - 1.0).abs()
            })
            .fold(0.0, f64::max),
        1e-8,
    ));

    let log_grid = linspace_step(-2.0, 6.0, 1e-2);
    let mut fixed_point = 0.0f64;
    for r in [0.5, 5.0, 50.0] {
        for &x in &log_grid {
            let h = shifted_log_residual_cdf(&ExponentialTail, r, x)?;
            fixed_point = fixed_point.max((h - gumbel_cdf(x)).abs());
        }
    }
    checks.push(CheckResult::new("exponential_fixed_point", fixed_point, 1e-13));

    let mut log_identity = 0.0f64;
    for r in [10.0, 20.0, 30.0] {
        for &x in &log_grid {
            let lhs = shifted_log_residual_cdf(&GaussianTail, r, x)?;
            let rhs = scaled_residual(&GaussianTail, r, (-x).exp())?;
            log_identity = log_identity.max((lhs - rhs).abs());
        }
    }
    checks.push(CheckResult::new("log_transform_identity", log_identity, 1e-13));

    let mut definition = 0.0f64;
    for n in [3u64, 10, 1_000, 1_000_000, 1_000_000_000] {
        let seq = solve_normalizers(&GaussianTail, n)?;
        definition = definition.max((gnedenko_lhs(&GaussianTail, &seq, 0.0) - 1.0).abs());
    }
    checks.push(CheckResult::new("normalizer_definition", definition, 1e-12));

    let seq = solve_normalizers(&GaussianTail, 1_000_000)?;
    let gaps = criterion_gaps(&GaussianTail, &seq, &linspace_step(-2.0, 4.0, 1e-2), gumbel_cdf);
    checks.push(CheckResult::new("criterion_equivalence", gaps.equivalence_gap, 1e-6));

    Ok(checks)
}
