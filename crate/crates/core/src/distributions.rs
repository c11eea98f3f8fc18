//! Exact scalar functions: the Gumbel law, the standard Gaussian law with
//! cancellation-free tails, and the conditional density `p_r` of `−ln(N − r)`
//! given `N > r`.

use serde::Serialize;

use crate::error::{Error, Result};

/// `ln √(2π)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// `1 / √(2π)`
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Above this point the Gaussian tail switches from `erfc` to the Mills-ratio
/// continued fraction.
const CONTINUED_FRACTION_CUTOFF: f64 = 8.0;
const CONTINUED_FRACTION_TERMS: u32 = 120;

/// Gumbel density `λ(x) = e^(−x−e^(−x))`.
pub fn gumbel_density(x: f64) -> f64 {
    let u = (-x).exp();
    (-x - u).exp()
}

/// Gumbel distribution function `Λ(x) = e^(−e^(−x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// `−ln Λ(e^(−x)) − Λ(x)`. Zero for every `x` up to rounding.
pub fn gumbel_identity_residual(x: f64) -> f64 {
    -gumbel_cdf((-x).exp()).ln() - gumbel_cdf(x)
}

/// Splits `x` so that `hi * hi` is exact; `x² = hi² + lo·(x + hi)`.
fn split_square(x: f64) -> (f64, f64) {
    let hi = f64::from_bits(x.to_bits() & 0xffff_ffff_f800_0000);
    let lo = x - hi;
    (hi * hi, lo * (x + hi))
}

/// `e^(−x²/2)` without the relative error that rounding `x²` would introduce
/// for large `|x|`.
fn exp_neg_half_square(x: f64) -> f64 {
    let (sq_hi, sq_lo) = split_square(x);
    (-0.5 * sq_hi).exp() * (-0.5 * sq_lo).exp()
}

/// Standard Gaussian density `φ(x)`.
pub fn gaussian_density(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * exp_neg_half_square(x)
}

/// Continued fraction for the Mills ratio,
/// `R(r)/φ(r) = 1/(r + 1/(r + 2/(r + 3/(r + …))))`, evaluated backwards.
/// Only used for `r ≥ 8`, where 120 terms are far past convergence.
fn mills_continued_fraction(r: f64) -> f64 {
    let mut t = r;
    for k in (1..=CONTINUED_FRACTION_TERMS).rev() {
        t = r + f64::from(k) / t;
    }
    1.0 / t
}

/// Mills ratio `(1 − G(r)) / φ(r)`.
pub fn mills_ratio(r: f64) -> f64 {
    if r > CONTINUED_FRACTION_CUTOFF {
        mills_continued_fraction(r)
    } else {
        gaussian_tail(r) / gaussian_density(r)
    }
}

/// Standard Gaussian tail `1 − G(r)`, computed directly (never as `1 − cdf`).
///
/// Relative error stays near machine precision until the result underflows
/// (around `r ≈ 38.5`); use [`log_gaussian_tail`] beyond that.
pub fn gaussian_tail(r: f64) -> f64 {
    if r.is_nan() {
        return f64::NAN;
    }
    if r > CONTINUED_FRACTION_CUTOFF {
        gaussian_density(r) * mills_continued_fraction(r)
    } else {
        0.5 * libm::erfc(r * std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// Standard Gaussian distribution function `G(x)`.
pub fn gaussian_cdf(x: f64) -> f64 {
    gaussian_tail(-x)
}

/// `ln(1 − G(r)) + r²/2`. Finite for every finite `r`; this is the quantity the
/// conditional density pairs with its own `−r²/2` term.
fn log_tail_plus_half_square(r: f64) -> f64 {
    if r > CONTINUED_FRACTION_CUTOFF {
        -LN_SQRT_2PI + mills_continued_fraction(r).ln()
    } else {
        log_gaussian_tail(r) + 0.5 * r * r
    }
}

/// `ln(1 − G(r))`, finite for all finite `r` (no underflow for large `r`).
pub fn log_gaussian_tail(r: f64) -> f64 {
    if r > CONTINUED_FRACTION_CUTOFF {
        let (sq_hi, sq_lo) = split_square(r);
        -0.5 * sq_hi - 0.5 * sq_lo - LN_SQRT_2PI + mills_continued_fraction(r).ln()
    } else if r < 0.0 {
        (-gaussian_tail(-r)).ln_1p()
    } else {
        gaussian_tail(r).ln()
    }
}

/// Leading-order tail asymptotic `φ(r)/r`.
pub fn gaussian_tail_asymptotic(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("must be positive and finite, got {r}")));
    }
    Ok(gaussian_density(r) / r)
}

/// Density of `−ln(N − r)` given `N > r`:
///
/// `p_r(x) = (1/√(2π)) e^(−x−(e^(−x)+r)²/2) / (1 − G(r))`.
///
/// The square is expanded and `−r²/2` is cancelled analytically against the log
/// of the tail denominator, so nothing overflows or underflows for large `r`.
pub fn conditional_density_p_r(r: f64, x: f64) -> f64 {
    let u = (-x).exp();
    let exponent = -x - 0.5 * u * u - r * u - LN_SQRT_2PI - log_tail_plus_half_square(r);
    exponent.exp()
}

/// `p_r(x + ln r)`, the density of `−ln(N − r) − ln r` given `N > r`.
/// Converges pointwise to [`gumbel_density`] as `r → ∞`.
pub fn shifted_density(r: f64, x: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("must be positive and finite, got {r}")));
    }
    Ok(conditional_density_p_r(r, x + r.ln()))
}

/// Sampled curve `x ↦ y` on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCurve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl GridCurve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::GridMismatch(format!(
                "{} abscissae but {} ordinates",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid", "non-finite value"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("grid", "abscissae must be strictly increasing"));
        }
        Ok(GridCurve { xs, ys })
    }

    /// Tabulates `f` on `xs`.
    pub fn from_fn(xs: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        let ys = xs.iter().map(|&x| f(x)).collect();
        GridCurve::new(xs.to_vec(), ys)
    }

    /// Tabulates a fallible `f` on `xs`.
    pub fn try_from_fn(xs: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        GridCurve::new(xs.to_vec(), ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// A continuous distribution on the real line described through its upper tail.
///
/// `tail` must be computed directly rather than as `1 − cdf`, and `scaling_a`
/// is the residual-life scaling function `a(r)` for which
/// `R(r + a(r)x)/R(r) → e^(−x)`.
pub trait TailModel: Sync {
    fn name(&self) -> &str;
    fn cdf(&self, x: f64) -> f64;
    fn tail(&self, x: f64) -> f64;
    fn density(&self, x: f64) -> f64;
    fn scaling_a(&self, r: f64) -> f64;

    fn log_tail(&self, x: f64) -> f64 {
        self.tail(x).ln()
    }

    /// `R(s) / R(r)`, falling back to log space when either tail is subnormal.
    fn tail_ratio(&self, s: f64, r: f64) -> f64 {
        let (num, den) = (self.tail(s), self.tail(r));
        if num >= f64::MIN_POSITIVE && den >= f64::MIN_POSITIVE {
            num / den
        } else {
            (self.log_tail(s) - self.log_tail(r)).exp()
        }
    }
}

/// Standard Gaussian with `a(r) = 1/r`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianTail;

impl TailModel for GaussianTail {
    fn name(&self) -> &str {
        "gaussian"
    }

    fn cdf(&self, x: f64) -> f64 {
        gaussian_cdf(x)
    }

    fn tail(&self, x: f64) -> f64 {
        gaussian_tail(x)
    }

    fn density(&self, x: f64) -> f64 {
        gaussian_density(x)
    }

    fn scaling_a(&self, r: f64) -> f64 {
        1.0 / r
    }

    fn log_tail(&self, x: f64) -> f64 {
        log_gaussian_tail(x)
    }
}

/// Unit exponential, `R(x) = e^(−x)` on `x ≥ 0`, with `a(r) = 1`. Memoryless, so
/// every residual-life quantity is exact at every `r`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialTail;

impl TailModel for ExponentialTail {
    fn name(&self) -> &str {
        "exponential"
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-x).exp_m1()
        }
    }

    fn tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-x).exp()
        }
    }

    fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            (-x).exp()
        }
    }

    fn scaling_a(&self, _r: f64) -> f64 {
        1.0
    }

    fn log_tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -x
        }
    }
}
