//! Exit problem for the linear-drift diffusion `dX = βX dt + ε dW`, `X(0) = −εa`,
//! on `[−1, 1]`.
//!
//! Starting just left of the repelling point 0, the path almost always leaves
//! through `−1`; exits through `+1` are the rare event we condition on. Because the
//! drift is linear the solution is `X(t) = ε e^(βt) (−a + I_t)` with
//! `I_t = ∫₀ᵗ e^(−βs) dW(s)`, which gives both an exact Gaussian time step and a
//! pathwise way to recompute the exit time from the noise alone.

mod limit_law;
mod sampling;

pub use limit_law::{truncated_gaussian, truncated_gaussian_excess, LimitLaw};
pub use sampling::{sample_conditioned_exits, ConditionedExits, SamplingOptions};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible integration step.
pub const MAX_STEP: f64 = 1e-2;
pub const DEFAULT_STEP: f64 = 1e-3;
/// Noise grids are extended until `e^(−βT)` drops below this.
pub const NOISE_HORIZON_DECAY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearDriftModel {
    beta: f64,
}

impl LinearDriftModel {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", format!("must be positive and finite, got {beta}")));
        }
        Ok(LinearDriftModel { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn drift(&self, x: f64) -> f64 {
        self.beta * x
    }
}

/// One conditioned-exit experiment: model, noise level, start offset, domain,
/// step and guard horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitProblem {
    model: LinearDriftModel,
    epsilon: f64,
    a: f64,
    left: f64,
    right: f64,
    step: f64,
    guard_horizon: f64,
}

impl ExitProblem {
    /// Problem on `[−1, 1]` with the default step and guard horizon
    /// `(1/β) ln(1/ε) + 40/β`.
    pub fn new(model: LinearDriftModel, epsilon: f64, a: f64) -> Result<Self> {
        let beta = model.beta();
        let problem = ExitProblem {
            model,
            epsilon,
            a,
            left: -1.0,
            right: 1.0,
            step: DEFAULT_STEP,
            guard_horizon: ((1.0 / epsilon).ln() + 40.0) / beta,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        self.step = step;
        self.validate()?;
        Ok(self)
    }

    pub fn with_guard_horizon(mut self, horizon: f64) -> Result<Self> {
        self.guard_horizon = horizon;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let beta = self.model.beta();
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::invalid("epsilon", format!("must be positive, got {}", self.epsilon)));
        }
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(Error::invalid("a", format!("must be positive, got {}", self.a)));
        }
        let start = self.start();
        if !(start > self.left && start < 0.0) {
            return Err(Error::invalid(
                "a",
                format!("start −εa = {start} must lie in (−1, 0)"),
            ));
        }
        if !(self.step > 0.0 && self.step <= MAX_STEP) {
            return Err(Error::invalid("step", format!("must be in (0, {MAX_STEP}], got {}", self.step)));
        }
        let min_horizon = ((1.0 / self.epsilon).ln() + 20.0) / beta;
        if !(self.guard_horizon >= min_horizon) || !self.guard_horizon.is_finite() {
            return Err(Error::invalid(
                "guard_horizon",
                format!("must be at least (ln(1/ε) + 20)/β = {min_horizon}, got {}", self.guard_horizon),
            ));
        }
        Ok(())
    }

    pub fn model(&self) -> LinearDriftModel {
        self.model
    }

    pub fn beta(&self) -> f64 {
        self.model.beta()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn guard_horizon(&self) -> f64 {
        self.guard_horizon
    }

    /// `x₀ = −εa`
    pub fn start(&self) -> f64 {
        -self.epsilon * self.a
    }

    /// `(1/β) ln(1/ε)`, the deterministic part of the exit time.
    pub fn centering(&self) -> f64 {
        (1.0 / self.epsilon).ln() / self.beta()
    }

    /// `r = a √(2β)`
    pub fn threshold(&self) -> f64 {
        self.a * (2.0 * self.beta()).sqrt()
    }

    fn max_steps(&self) -> u64 {
        (self.guard_horizon / self.step).floor() as u64
    }

    fn record(&self, k: u64, x: f64) -> ExitRecord {
        let tau = k as f64 * self.step;
        ExitRecord {
            tau,
            side: if x >= self.right { Side::Right } else { Side::Left },
            normalized_time: tau - self.centering(),
            steps_taken: k,
        }
    }

    fn outside(&self, x: f64) -> bool {
        x <= self.left || x >= self.right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Format(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitRecord {
    /// Exit time `τ_ε` (a grid time).
    pub tau: f64,
    pub side: Side,
    /// `τ_ε − (1/β) ln(1/ε)`
    pub normalized_time: f64,
    pub steps_taken: u64,
}

/// Time-stepping rule for the SDE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// `X ← e^(βh) X + ε √((e^(2βh) − 1)/(2β)) ξ`, exact in law at grid times.
    Exact,
    /// `X ← X + βXh + ε √h ξ`
    Euler,
}

impl Scheme {
    /// `(multiplier, noise scale)` of the affine update.
    fn coefficients(self, problem: &ExitProblem) -> (f64, f64) {
        let (beta, h, eps) = (problem.beta(), problem.step, problem.epsilon);
        match self {
            Scheme::Exact => (
                (beta * h).exp(),
                eps * ((2.0 * beta * h).exp_m1() / (2.0 * beta)).sqrt(),
            ),
            Scheme::Euler => (1.0 + beta * h, eps * h.sqrt()),
        }
    }
}

fn run_until_exit(
    problem: &ExitProblem,
    scheme: Scheme,
    mut noise: impl FnMut() -> Option<f64>,
) -> Result<ExitRecord> {
    let (mult, scale) = scheme.coefficients(problem);
    let max_steps = problem.max_steps();
    let mut x = problem.start();
    for k in 1..=max_steps {
        let Some(xi) = noise() else {
            return Err(Error::GuardExceeded {
                horizon: (k - 1) as f64 * problem.step,
                steps: k - 1,
            });
        };
        x = mult * x + scale * xi;
        if problem.outside(x) {
            return Ok(problem.record(k, x));
        }
    }
    Err(Error::GuardExceeded {
        horizon: problem.guard_horizon,
        steps: max_steps,
    })
}

/// Simulates one path with the exact Gaussian transition until it leaves `(−1, 1)`
/// at a grid time.
pub fn simulate_exit_exact<R: Rng + ?Sized>(problem: &ExitProblem, rng: &mut R) -> Result<ExitRecord> {
    run_until_exit(problem, Scheme::Exact, || Some(rng.sample(StandardNormal)))
}

/// Euler–Maruyama counterpart of [`simulate_exit_exact`]; carries `O(h)` bias.
pub fn simulate_exit_euler<R: Rng + ?Sized>(problem: &ExitProblem, rng: &mut R) -> Result<ExitRecord> {
    run_until_exit(problem, Scheme::Euler, || Some(rng.sample(StandardNormal)))
}

/// Runs `scheme` driven by the given standard Gaussian increments instead of a
/// generator. Running out of increments before exit is reported as
/// [`Error::GuardExceeded`].
pub fn simulate_exit_with_increments(
    problem: &ExitProblem,
    scheme: Scheme,
    increments: &[f64],
) -> Result<ExitRecord> {
    let mut it = increments.iter().copied();
    run_until_exit(problem, scheme, || it.next())
}

/// Path `X_0, X_1, …` under `scheme` for the given increments, ignoring the
/// boundaries.
pub fn free_path(problem: &ExitProblem, scheme: Scheme, increments: &[f64]) -> Vec<f64> {
    let (mult, scale) = scheme.coefficients(problem);
    let mut path = Vec::with_capacity(increments.len() + 1);
    let mut x = problem.start();
    path.push(x);
    for &xi in increments {
        x = mult * x + scale * xi;
        path.push(x);
    }
    path
}

/// Discretized stochastic integral `I_t = ∫₀ᵗ e^(−βs) dW(s)` on the grid `t_k = k h`.
///
/// The increments `ξ_k` are the same standard Gaussians that drive the exact
/// scheme, so [`duhamel_exit_time`] and [`simulate_exit_with_increments`] see
/// literally the same noise.
#[derive(Debug, Clone)]
pub struct NoiseRealization {
    beta: f64,
    step: f64,
    increments: Vec<f64>,
    i_values: Vec<f64>,
    i_infinity: f64,
    i_sup: f64,
}

impl NoiseRealization {
    /// Number of steps needed so that `e^(−βT) ≤ 1e-9`.
    pub fn required_steps(beta: f64, step: f64) -> usize {
        ((1.0 / NOISE_HORIZON_DECAY).ln() / (beta * step)).ceil() as usize
    }

    /// Draws a fresh realization long enough that `I_T` stands in for `I_∞`.
    pub fn generate<R: Rng + ?Sized>(beta: f64, step: f64, rng: &mut R) -> Result<Self> {
        LinearDriftModel::new(beta)?;
        if !(step > 0.0 && step <= MAX_STEP) {
            return Err(Error::invalid("step", format!("must be in (0, {MAX_STEP}], got {step}")));
        }
        let steps = Self::required_steps(beta, step);
        let increments = (0..steps).map(|_| rng.sample(StandardNormal)).collect();
        Self::from_increments(beta, step, increments)
    }

    pub fn from_increments(beta: f64, step: f64, increments: Vec<f64>) -> Result<Self> {
        LinearDriftModel::new(beta)?;
        let horizon = increments.len() as f64 * step;
        if (-beta * horizon).exp() > NOISE_HORIZON_DECAY * (1.0 + 1e-9) {
            return Err(Error::invalid(
                "increments",
                format!("horizon {horizon} too short: need e^(−βT) ≤ {NOISE_HORIZON_DECAY}"),
            ));
        }
        // I_{k+1} = I_k + e^(−β t_k) √((1 − e^(−2βh))/(2β)) ξ_k
        let scale = (-(-2.0 * beta * step).exp_m1() / (2.0 * beta)).sqrt();
        let mut i_values = Vec::with_capacity(increments.len() + 1);
        let mut acc = 0.0;
        let mut sup = 0.0f64;
        i_values.push(acc);
        for (k, xi) in increments.iter().enumerate() {
            acc += (-beta * k as f64 * step).exp() * scale * xi;
            sup = sup.max(acc.abs());
            i_values.push(acc);
        }
        Ok(NoiseRealization {
            beta,
            step,
            increments,
            i_values,
            i_infinity: acc,
            i_sup: sup,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn horizon(&self) -> f64 {
        self.increments.len() as f64 * self.step
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn i_values(&self) -> &[f64] {
        &self.i_values
    }

    pub fn i_infinity(&self) -> f64 {
        self.i_infinity
    }

    pub fn i_sup(&self) -> f64 {
        self.i_sup
    }

    /// Small-noise limit of the normalized exit time, `−(1/β) ln|−a + I_∞|`.
    pub fn limiting_normalized_time(&self, a: f64) -> f64 {
        -(self.i_infinity - a).abs().ln() / self.beta
    }

    /// Small-noise limit of the exit side, `sgn(−a + I_∞)`.
    pub fn limiting_side(&self, a: f64) -> Side {
        if self.i_infinity - a > 0.0 {
            Side::Right
        } else {
            Side::Left
        }
    }
}

/// Exit time read off the closed-form solution `X(t) = ε e^(βt)(−a + I_t)`:
/// the first grid time at which that expression leaves `(−1, 1)`.
pub fn duhamel_exit_time(noise: &NoiseRealization, problem: &ExitProblem) -> Result<ExitRecord> {
    if noise.beta != problem.beta() || noise.step != problem.step {
        return Err(Error::invalid(
            "noise",
            "realization was generated for a different β or step",
        ));
    }
    let (eps, a, beta, h) = (problem.epsilon, problem.a, problem.beta(), problem.step);
    for (k, &i_t) in noise.i_values.iter().enumerate().skip(1) {
        let x = eps * (beta * k as f64 * h).exp() * (-a + i_t);
        if problem.outside(x) {
            return Ok(problem.record(k as u64, x));
        }
    }
    Err(Error::GuardExceeded {
        horizon: noise.horizon(),
        steps: noise.increments.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RngStream;

    fn problem(eps: f64, a: f64) -> ExitProblem {
        ExitProblem::new(LinearDriftModel::new(1.0).unwrap(), eps, a).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(LinearDriftModel::new(0.0).is_err());
        assert!(LinearDriftModel::new(-1.0).is_err());
        let m = LinearDriftModel::new(2.0).unwrap();
        assert!(ExitProblem::new(m, 0.0, 1.0).is_err());
        assert!(ExitProblem::new(m, 0.01, 0.0).is_err());
        assert!(ExitProblem::new(m, 0.5, 2.0).is_err()); // start at −1
        let p = ExitProblem::new(m, 0.01, 1.0).unwrap();
        assert!(p.with_step(0.02).is_err());
        assert!(p.with_step(0.0).is_err());
        assert!(p.with_guard_horizon(5.0).is_err());
        assert!(p.with_guard_horizon(15.0).is_ok());
        assert!((p.guard_horizon() - ((100.0f64).ln() + 40.0) / 2.0).abs() < 1e-12);
        assert!((p.threshold() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn start_near_left_boundary_exits_immediately() {
        let p = problem(0.01, 99.999);
        let mut rng = RngStream::new(3, 0);
        for _ in 0..20 {
            let rec = simulate_exit_exact(&p, &mut rng).unwrap();
            assert_eq!(rec.side, Side::Left);
            assert!(rec.tau <= 5.0 * p.step());
        }
    }

    #[test]
    fn guard_exceeded_when_noise_runs_out() {
        let p = problem(0.01, 1.0);
        let zeros = vec![0.0; 10];
        assert!(matches!(
            simulate_exit_with_increments(&p, Scheme::Exact, &zeros),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn replay_is_deterministic() {
        let p = problem(0.01, 1.0);
        for scheme in [Scheme::Exact, Scheme::Euler] {
            let run = |seed| {
                let mut rng = RngStream::new(seed, 11);
                (0..20)
                    .map(|_| match scheme {
                        Scheme::Exact => simulate_exit_exact(&p, &mut rng).unwrap(),
                        Scheme::Euler => simulate_exit_euler(&p, &mut rng).unwrap(),
                    })
                    .collect::<Vec<_>>()
            };
            assert_eq!(run(5), run(5));
            assert_ne!(run(5), run(6));
        }
    }

    #[test]
    fn record_fields_are_consistent() {
        let p = problem(0.01, 1.0);
        let mut rng = RngStream::new(1, 1);
        for _ in 0..50 {
            let rec = simulate_exit_exact(&p, &mut rng).unwrap();
            assert!(rec.tau <= p.guard_horizon());
            assert_eq!(rec.tau, rec.steps_taken as f64 * p.step());
            assert!((rec.normalized_time - (rec.tau - p.centering())).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_coupling_of_paths() {
        let mut rng = RngStream::new(8, 2);
        let xi: Vec<f64> = (0..100).map(|_| rng.sample(StandardNormal)).collect();
        let base = problem(0.01, 1.5);
        let scaled = problem(0.03, 1.5);
        let p1 = free_path(&base, Scheme::Exact, &xi);
        let p3 = free_path(&scaled, Scheme::Exact, &xi);
        for (x, y) in p1.iter().zip(&p3) {
            assert!((3.0 * x - y).abs() <= 1e-12 * y.abs().max(1e-3));
        }
    }

    #[test]
    fn exact_step_matches_duhamel_on_shared_noise() {
        let mut rng = RngStream::new(21, 0);
        let noise = NoiseRealization::generate(1.0, 1e-3, &mut rng).unwrap();
        let p = problem(0.05, 1.0);
        let free = free_path(&p, Scheme::Exact, &noise.increments()[..2000]);
        for (k, x) in free.iter().enumerate() {
            let closed = p.epsilon() * (k as f64 * 1e-3).exp() * (-1.0 + noise.i_values()[k]);
            assert!((x - closed).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn noise_realization_invariants() {
        let mut rng = RngStream::new(2, 2);
        let noise = NoiseRealization::generate(1.5, 1e-3, &mut rng).unwrap();
        assert_eq!(noise.i_values()[0], 0.0);
        assert!(noise.i_sup() >= noise.i_infinity().abs());
        assert!((-1.5 * noise.horizon()).exp() <= NOISE_HORIZON_DECAY * (1.0 + 1e-9));
        assert_eq!(noise.i_values().len(), noise.increments().len() + 1);
        assert!(NoiseRealization::from_increments(1.0, 1e-3, vec![0.0; 100]).is_err());
    }

    #[test]
    fn duhamel_rejects_mismatched_grid() {
        let mut rng = RngStream::new(2, 3);
        let noise = NoiseRealization::generate(1.0, 1e-3, &mut rng).unwrap();
        let p = problem(0.01, 1.0).with_step(2e-3).unwrap();
        assert!(duhamel_exit_time(&noise, &p).is_err());
    }
}
