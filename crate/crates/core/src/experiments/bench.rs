use std::hint::black_box;
use std::time::Instant;

use super::vectors::random_unit;
use crate::error::{FjltError, Result};
use crate::fjlt::FjltPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    pub d: usize,
    pub k: usize,
    pub median_ns: u64,
}

/// Median single-threaded wall time of `apply` for each `d`.
pub fn bench_apply(d_list: &[usize], k: usize, repetitions: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if repetitions == 0 {
        return Err(FjltError::Argument("repetitions must be at least 1".into()));
    }
    // Build every plan first so an infeasible d fails before any timing.
    let plans = d_list
        .iter()
        .map(|&d| FjltPlan::new(d, k, seed))
        .collect::<Result<Vec<_>>>()?;
    plans
        .iter()
        .map(|plan| {
            let x = random_unit(plan.input_dim(), seed, 0);
            black_box(plan.apply(&x)?);
            let mut times: Vec<u64> = (0..repetitions)
                .map(|_| {
                    let start = Instant::now();
                    let y = plan.apply(black_box(&x));
                    let ns = start.elapsed().as_nanos() as u64;
                    black_box(y).map(|_| ns)
                })
                .collect::<Result<_>>()?;
            times.sort_unstable();
            let mid = times.len() / 2;
            let median = if times.len() % 2 == 1 { times[mid] } else { (times[mid - 1] + times[mid]) / 2 };
            Ok(BenchRow { d: plan.input_dim(), k, median_ns: median.max(1) })
        })
        .collect()
}
