//! Residual life times `X − r | X > r` and their logarithmic transform.
//!
//! For `F` in the Gumbel domain, `R(r + a(r)x)/R(r) → e^(−x)`. Substituting
//! `x ↦ e^(−x)` turns that into `H_r(x − ln a(r)) → Λ(x)` for the law of
//! `−ln(X − r)` given `X > r`, because `−ln Λ(e^(−x)) = Λ(x)`.

use crate::distributions::TailModel;
use crate::error::{Error, Result};
use crate::evt::solve_normalizers;

fn conditioning_tail<M: TailModel + ?Sized>(model: &M, r: f64) -> Result<()> {
    if model.log_tail(r) == f64::NEG_INFINITY || model.log_tail(r).is_nan() {
        return Err(Error::ZeroTail {
            model: model.name().to_string(),
            r,
        });
    }
    Ok(())
}

fn scaling<M: TailModel + ?Sized>(model: &M, r: f64) -> Result<f64> {
    let a = model.scaling_a(r);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid(
            "r",
            format!("scaling a(r) = {a} of `{}` is not positive at r = {r}", model.name()),
        ));
    }
    Ok(a)
}

/// `P{X − r > x | X > r} = R(r + x)/R(r)`.
pub fn residual_tail<M: TailModel + ?Sized>(model: &M, r: f64, x: f64) -> Result<f64> {
    conditioning_tail(model, r)?;
    if x < 0.0 {
        return Err(Error::invalid("x", format!("must be non-negative, got {x}")));
    }
    Ok(model.tail_ratio(r + x, r))
}

/// `R(r + a(r)x)/R(r)`; tends to `e^(−x)` for models in the Gumbel domain.
pub fn scaled_residual<M: TailModel + ?Sized>(model: &M, r: f64, x: f64) -> Result<f64> {
    conditioning_tail(model, r)?;
    let a = scaling(model, r)?;
    Ok(model.tail_ratio(r + a * x, r))
}

/// `H_r(x) = P{−ln(X − r) ≤ x | X > r} = R(r + e^(−x))/R(r)`.
pub fn log_residual_cdf<M: TailModel + ?Sized>(model: &M, r: f64, x: f64) -> Result<f64> {
    conditioning_tail(model, r)?;
    Ok(model.tail_ratio(r + (-x).exp(), r))
}

/// `H_r(x − ln a(r))`; tends to `Λ(x)` for models in the Gumbel domain.
///
/// Evaluated as `R(r + a(r) e^(−x))/R(r)` so that no `ln`/`exp` round trip
/// perturbs the argument.
pub fn shifted_log_residual_cdf<M: TailModel + ?Sized>(model: &M, r: f64, x: f64) -> Result<f64> {
    conditioning_tail(model, r)?;
    let a = scaling(model, r)?;
    Ok(model.tail_ratio(r + a * (-x).exp(), r))
}

/// Piecewise scaling built from the maxima normalizers: `a(r) = a_n` for the
/// `n` with `1/(n+1) ≤ R(r) < 1/n`.
pub fn piecewise_scaling<M: TailModel + ?Sized>(model: &M, r: f64) -> Result<f64> {
    let tail = model.tail(r);
    if !(tail > 0.0 && tail < 1.0) {
        return Err(Error::invalid("r", format!("tail R(r) = {tail} must be in (0, 1)")));
    }
    let n = ((1.0 / tail).ceil() - 1.0).max(1.0) as u64;
    Ok(solve_normalizers(model, n)?.a_n)
}
