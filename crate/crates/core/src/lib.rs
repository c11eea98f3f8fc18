//! Gumbel limits for diffusion exit times, Gaussian extremes and residual life times.
//!
//! The crate is organised around the three places the Gumbel law shows up:
//!
//! - [`exitsim`]: the linear-drift diffusion `dX = βX dt + ε dW` started at `−εa`,
//!   conditioned to leave `[−1, 1]` through the right end. Exit times are simulated
//!   with an exact Gaussian step, recomputed pathwise from the stochastic integral
//!   `I_t = ∫₀ᵗ e^(−βs) dW(s)`, and compared with the small-noise limit law.
//! - [`evt`]: normalized maxima of i.i.d. samples and the tail criterion
//!   `n(1 − F(a_n x + b_n)) → −ln Λ(x)`.
//! - [`residual`]: residual life times `X − r | X > r`, their scaling limit and the
//!   logarithmic transform that turns the exponential limit into a Gumbel one.
//!
//! [`distributions`] holds the exact scalar functions (Gumbel, cancellation-free
//! Gaussian tails, the conditional density `p_r`), [`stats`] the empirical
//! distribution tools and the counter-based RNG, and [`cli`] the command-line
//! front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distributions;
pub mod error;
pub mod evt;
pub mod exitsim;
pub mod numeric;
pub mod residual;
pub mod stats;

pub use error::{Error, Result};
