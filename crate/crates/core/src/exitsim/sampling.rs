//! Rejection sampling of exits conditioned on leaving through the right end.
//!
//! Attempt `i` belongs to block `i / block_size`, and block `b` is simulated
//! with substream `b` of the caller's stream. Blocks are dispatched to the
//! current rayon pool in fixed-size waves and merged in attempt order, so the
//! accepted set does not depend on how many workers run.

use rayon::prelude::*;

use super::{simulate_exit_exact, ExitProblem, Side};
use crate::distributions::gaussian_tail;
use crate::error::{Error, Result};
use crate::stats::{RngStream, SampleRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingOptions {
    /// Hard cap on simulated paths.
    pub max_attempts: u64,
    pub block_size: u64,
    /// Blocks per dispatch round.
    pub wave_blocks: u64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            max_attempts: 1_000_000_000,
            block_size: 256,
            wave_blocks: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedExits {
    /// Exactly `n_accept` right exits, in attempt order.
    pub records: Vec<SampleRow>,
    /// Attempts up to and including the last accepted one.
    pub attempts: u64,
}

impl ConditionedExits {
    pub fn acceptance_rate(&self) -> f64 {
        self.records.len() as f64 / self.attempts as f64
    }

    pub fn normalized_times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.normalized_time).collect()
    }
}

struct BlockOutcome {
    accepted: Vec<SampleRow>,
    failure: Option<Error>,
}

fn run_block(problem: &ExitProblem, root: &RngStream, block: u64, first: u64, last: u64) -> BlockOutcome {
    let mut rng = root.substream(block);
    let mut accepted = Vec::new();
    for attempt in first..last {
        match simulate_exit_exact(problem, &mut rng) {
            Ok(rec) if rec.side == Side::Right => accepted.push(SampleRow::new(attempt, &rec)),
            Ok(_) => {}
            Err(e) => {
                return BlockOutcome {
                    accepted,
                    failure: Some(e),
                }
            }
        }
    }
    BlockOutcome {
        accepted,
        failure: None,
    }
}

/// Simulates exact-step paths until `n_accept` of them exit through the right
/// end.
///
/// Fails fast with [`Error::BudgetExceeded`] when the small-noise acceptance
/// rate `1 − G(a√(2β))` predicts more than `max_attempts` attempts, and again if
/// the cap is actually reached.
pub fn sample_conditioned_exits(
    problem: &ExitProblem,
    n_accept: usize,
    rng: &RngStream,
    options: SamplingOptions,
) -> Result<ConditionedExits> {
    if n_accept == 0 {
        return Err(Error::invalid("n_accept", "must be at least 1"));
    }
    if options.block_size == 0 || options.wave_blocks == 0 {
        return Err(Error::invalid("options", "block size and wave size must be positive"));
    }
    let predicted = n_accept as f64 / gaussian_tail(problem.threshold());
    if predicted > options.max_attempts as f64 {
        return Err(Error::BudgetExceeded {
            requested: n_accept,
            accepted: 0,
            attempts: 0,
            cap: options.max_attempts,
        });
    }

    let mut records = Vec::with_capacity(n_accept);
    let mut next_block = 0u64;
    loop {
        let wave_start = next_block * options.block_size;
        if wave_start >= options.max_attempts {
            return Err(Error::BudgetExceeded {
                requested: n_accept,
                accepted: records.len(),
                attempts: options.max_attempts,
                cap: options.max_attempts,
            });
        }
        let blocks: Vec<u64> = (next_block..next_block + options.wave_blocks)
            .take_while(|b| b * options.block_size < options.max_attempts)
            .collect();
        next_block += blocks.len() as u64;
        let outcomes: Vec<BlockOutcome> = blocks
            .par_iter()
            .map(|&b| {
                let first = b * options.block_size;
                let last = (first + options.block_size).min(options.max_attempts);
                run_block(problem, rng, b, first, last)
            })
            .collect();
        for outcome in outcomes {
            for row in outcome.accepted {
                records.push(row);
                if records.len() == n_accept {
                    return Ok(ConditionedExits {
                        attempts: row.attempt_index + 1,
                        records,
                    });
                }
            }
            if let Some(e) = outcome.failure {
                return Err(e);
            }
        }
    }
}
