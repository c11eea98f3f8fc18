//! Maxima of i.i.d. samples: normalizing constants, the tail criterion
//! `n(1 − F(a_n x + b_n)) → −ln Φ(x)`, and the exact finite-`n` law `Fⁿ`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::TailModel;
use crate::error::{Error, Result};
use crate::stats::{EmpiricalSample, RngStream};

const BRACKET: (f64, f64) = (0.0, 50.0);
const BISECTION_WIDTH: f64 = 1e-3;

/// `(n, a_n, b_n)` with `R(b_n) = 1/n` and `a_n = a(b_n)`, the model's
/// residual scaling at `b_n` (`1/b_n` for the Gaussian).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizingSequence {
    pub n: u64,
    pub a_n: f64,
    pub b_n: f64,
}

impl NormalizingSequence {
    /// `a_n x + b_n`
    pub fn argument(&self, x: f64) -> f64 {
        self.a_n * x + self.b_n
    }
}

/// Solves `R(b_n) = 1/n` on `[0, 50]`: bisection down to a `1e-3` bracket, then
/// Newton on `ln R(b) + ln n`, which is close to linear in `b²` for light tails.
pub fn solve_normalizers<M: TailModel + ?Sized>(model: &M, n: u64) -> Result<NormalizingSequence> {
    if n < 2 {
        return Err(Error::invalid("n", format!("must be at least 2, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let g = |b: f64| model.log_tail(b) + ln_n;
    let (mut lo, mut hi) = BRACKET;
    if !(g(lo) >= 0.0 && g(hi) <= 0.0) {
        return Err(Error::NoBracket {
            model: model.name().to_string(),
            target: 1.0 / n as f64,
            lo,
            hi,
        });
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut b = 0.5 * (lo + hi);
    for _ in 0..50 {
        let residual = g(b);
        if residual.abs() <= 1e-14 {
            break;
        }
        let hazard = model.density(b) / model.tail(b);
        let next = (b + residual / hazard).clamp(lo, hi);
        if next == b {
            break;
        }
        b = next;
    }
    // b_2 = 0 exactly for symmetric laws; keep the root finder from drifting off it.
    if g(0.0) == 0.0 {
        b = 0.0;
    }
    let a_n = model.scaling_a(b);
    if !(a_n > 0.0) || !a_n.is_finite() {
        return Err(Error::invalid(
            "n",
            format!(
                "scaling a(b_n) = {a_n} at b_n = {b} is not a positive number \
                 (the Gaussian instance needs n ≥ 3)"
            ),
        ));
    }
    Ok(NormalizingSequence { n, a_n, b_n: b })
}

/// `n · R(a_n x + b_n)`
pub fn gnedenko_lhs<M: TailModel + ?Sized>(model: &M, seq: &NormalizingSequence, x: f64) -> f64 {
    seq.n as f64 * model.tail(seq.argument(x))
}

/// `Fⁿ(a_n x + b_n)`, evaluated as `exp(n · ln(1 − R))`.
pub fn max_cdf<M: TailModel + ?Sized>(model: &M, seq: &NormalizingSequence, x: f64) -> f64 {
    let tail = model.tail(seq.argument(x));
    (seq.n as f64 * (-tail).ln_1p()).exp()
}

/// Sup-distances on a grid between the two sides of the tail criterion and a
/// candidate limit `Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionGaps {
    /// `sup |Fⁿ(a_n x + b_n) − Φ(x)|`
    pub law_gap: f64,
    /// `sup |n(1 − F(a_n x + b_n)) + ln Φ(x)|` over points with `Φ(x) > 0`
    pub tail_gap: f64,
    /// `sup |Fⁿ − exp(−n(1 − F))|`; vanishes as `n` grows whatever `Φ` is.
    pub equivalence_gap: f64,
}

pub fn criterion_gaps<M: TailModel + ?Sized>(
    model: &M,
    seq: &NormalizingSequence,
    xs: &[f64],
    limit: impl Fn(f64) -> f64,
) -> CriterionGaps {
    let mut gaps = CriterionGaps {
        law_gap: 0.0,
        tail_gap: 0.0,
        equivalence_gap: 0.0,
    };
    for &x in xs {
        let lhs = gnedenko_lhs(model, seq, x);
        let fn_x = max_cdf(model, seq, x);
        let phi = limit(x);
        gaps.law_gap = gaps.law_gap.max((fn_x - phi).abs());
        if phi > 0.0 {
            gaps.tail_gap = gaps.tail_gap.max((lhs + phi.ln()).abs());
        }
        gaps.equivalence_gap = gaps.equivalence_gap.max((fn_x - (-lhs).exp()).abs());
    }
    gaps
}

/// Draws `replicas` independent maxima of `seq.n` values from `draw` and
/// returns the normalized sample `(max − b_n)/a_n`. Replica `i` uses substream
/// `i` of `rng`.
pub fn sample_normalized_max<F>(
    draw: F,
    seq: &NormalizingSequence,
    replicas: usize,
    rng: &RngStream,
) -> Result<EmpiricalSample>
where
    F: Fn(&mut RngStream) -> f64 + Sync,
{
    if seq.n < 3 {
        return Err(Error::invalid("n", format!("must be at least 3, got {}", seq.n)));
    }
    if replicas == 0 {
        return Err(Error::invalid("replicas", "must be at least 1"));
    }
    let values: Vec<f64> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng.substream(i);
            let max = (0..seq.n).map(|_| draw(&mut stream)).fold(f64::NEG_INFINITY, f64::max);
            (max - seq.b_n) / seq.a_n
        })
        .collect();
    EmpiricalSample::new(values)
}

/// Standard Gaussian draw, the sampler matching [`crate::distributions::GaussianTail`].
pub fn gaussian_draw(rng: &mut RngStream) -> f64 {
    rng.sample(rand_distr::StandardNormal)
}
