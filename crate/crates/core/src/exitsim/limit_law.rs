//! The small-noise limit law of the conditioned exit time and the truncated
//! Gaussian sampler behind it.
//!
//! As `ε → 0`, `τ_ε − (1/β) ln(1/ε)` given a right exit converges to
//! `−(1/β) ln(N − r) + (1/(2β)) ln(2β)` given `N > r`, with `r = a√(2β)`.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;

use crate::distributions::{conditional_density_p_r, GaussianTail, TailModel};
use crate::error::{Error, Result};
use crate::numeric::bisect;

/// Below this threshold plain rejection from `N(0, 1)` is used; above it the
/// shifted-exponential proposal.
const NAIVE_REJECTION_LIMIT: f64 = 1.0;

/// Draws `N − r` for `N ~ N(0, 1)` conditioned on `N > r`. The result is
/// strictly positive.
pub fn truncated_gaussian_excess<R: Rng + ?Sized>(r: f64, rng: &mut R) -> f64 {
    if r < NAIVE_REJECTION_LIMIT {
        loop {
            let n: f64 = rng.sample(StandardNormal);
            if n > r {
                return n - r;
            }
        }
    }
    // Exponential proposal with the optimal rate, accept with e^(−(z−λ)²/2).
    let rate = 0.5 * (r + (r * r + 4.0).sqrt());
    loop {
        let excess = rng.sample::<f64, _>(Exp1) / rate;
        if excess <= 0.0 {
            continue;
        }
        let z = r + excess;
        let u: f64 = rng.random();
        if u < (-0.5 * (z - rate) * (z - rate)).exp() {
            return excess;
        }
    }
}

/// Draws from the standard Gaussian restricted to `(r, ∞)`.
pub fn truncated_gaussian<R: Rng + ?Sized>(r: f64, rng: &mut R) -> f64 {
    r + truncated_gaussian_excess(r, rng)
}

/// Limit law of the centered exit time given a right exit, for drift `β` and
/// start offset `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitLaw {
    beta: f64,
    a: f64,
}

impl LimitLaw {
    pub fn new(beta: f64, a: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::invalid("a", format!("must be positive, got {a}")));
        }
        Ok(LimitLaw { beta, a })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `r = a√(2β)`
    pub fn threshold(&self) -> f64 {
        self.a * (2.0 * self.beta).sqrt()
    }

    /// Additive constant `(1/(2β)) ln(2β)`; zero at `β = 1/2`.
    pub fn offset(&self) -> f64 {
        (2.0 * self.beta).ln() / (2.0 * self.beta)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let excess = truncated_gaussian_excess(self.threshold(), rng);
        -excess.ln() / self.beta + self.offset()
    }

    /// `P{limit ≤ x} = R(r + √(2β) e^(−βx)) / R(r)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let r = self.threshold();
        let shift = (2.0 * self.beta).sqrt() * (-self.beta * x).exp();
        GaussianTail.tail_ratio(r + shift, r)
    }

    /// `β p_r(β(x − offset))`
    pub fn density(&self, x: f64) -> f64 {
        self.beta * conditional_density_p_r(self.threshold(), self.beta * (x - self.offset()))
    }

    /// Inverts [`LimitLaw::cdf`] by bisection. `p` must lie in `(0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p", format!("must be in (0, 1), got {p}")));
        }
        let (mut lo, mut hi) = (-1.0, 1.0);
        while self.cdf(lo) > p {
            lo *= 2.0;
        }
        while self.cdf(hi) < p {
            hi *= 2.0;
        }
        bisect(|x| self.cdf(x) - p, lo, hi, 1e-13)
            .ok_or_else(|| Error::invalid("p", "quantile bracket failed"))
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid probability")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace_step;
    use crate::stats::{ks_one_sample, EmpiricalSample, RngStream};

    #[test]
    fn rejects_bad_parameters() {
        assert!(LimitLaw::new(0.0, 1.0).is_err());
        assert!(LimitLaw::new(1.0, -1.0).is_err());
        assert!(LimitLaw::new(1.0, 1.0).unwrap().quantile(1.0).is_err());
    }

    #[test]
    fn cdf_limits_and_monotonicity() {
        let law = LimitLaw::new(1.0, 1.0).unwrap();
        assert!(law.cdf(-40.0) < 1e-12);
        assert!((law.cdf(60.0) - 1.0).abs() < 1e-15);
        let xs = linspace_step(-10.0, 20.0, 0.01);
        for w in xs.windows(2) {
            assert!(law.cdf(w[1]) >= law.cdf(w[0]));
        }
    }

    #[test]
    fn offset_vanishes_at_half() {
        let law = LimitLaw::new(0.5, 2.0).unwrap();
        assert_eq!(law.offset(), 0.0);
        let mut a = RngStream::new(4, 0);
        let mut b = RngStream::new(4, 0);
        let x = law.sample(&mut a);
        let excess = truncated_gaussian_excess(law.threshold(), &mut b);
        assert_eq!(x, -2.0 * excess.ln());
    }

    #[test]
    fn density_is_derivative_of_cdf() {
        for (beta, a) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.3)] {
            let law = LimitLaw::new(beta, a).unwrap();
            let h = 1e-5;
            for x in linspace_step(-4.0, 8.0, 0.05) {
                let fd = (law.cdf(x + h) - law.cdf(x - h)) / (2.0 * h);
                assert!((fd - law.density(x)).abs() < 1e-6, "β={beta} a={a} x={x}");
            }
        }
    }

    #[test]
    fn truncated_support() {
        let mut rng = RngStream::new(10, 0);
        for r in [-3.0, 0.0, 0.99, 1.0, 2.5, 10.0, 40.0] {
            for _ in 0..2000 {
                let v = truncated_gaussian(r, &mut rng);
                assert!(v > r, "r = {r}, v = {v}");
                assert!(truncated_gaussian_excess(r, &mut rng) > 0.0);
            }
        }
    }

    #[test]
    fn far_left_truncation_is_plain_gaussian() {
        let mut rng = RngStream::new(12, 0);
        let draws: Vec<f64> = (0..100_000).map(|_| truncated_gaussian(-10.0, &mut rng)).collect();
        let sample = EmpiricalSample::new(draws).unwrap();
        let d = ks_one_sample(&sample, crate::distributions::gaussian_cdf);
        assert!(d <= 0.005, "{d}");
    }

    #[test]
    fn samples_all_finite() {
        let law = LimitLaw::new(1.0, 3.0).unwrap();
        let mut rng = RngStream::new(13, 0);
        assert!((0..50_000).all(|_| law.sample(&mut rng).is_finite()));
    }
}
