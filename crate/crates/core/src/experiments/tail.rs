use std::sync::Arc;

use rayon::prelude::*;

use super::vectors::{adversarial_vector, VectorKind};
use crate::error::{FjltError, Result};
use crate::fjlt::FjltPlan;
use crate::fourwise::CodeMatrix;
use crate::hadamard::l2_norm;
use crate::seed::trial_seed;

/// Exceedance counts of `| ||Ax||_2 - 1 | > t` over independent plans.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCurve {
    pub t_grid: Vec<f64>,
    pub exceed_counts: Vec<u64>,
    pub trials: u64,
    pub d: usize,
    pub k: usize,
    pub vector: VectorKind,
    pub seed: u64,
    /// Sample mean of `||Ax||_2^2`.
    pub mean_sq_norm: f64,
    /// Standard error of that mean.
    pub sq_norm_std_err: f64,
}

impl TailCurve {
    pub fn probabilities(&self) -> Vec<f64> {
        self.exceed_counts.iter().map(|&c| c as f64 / self.trials as f64).collect()
    }
}

pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(FjltError::Argument("t-grid is empty".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return Err(FjltError::Argument("t-grid values must be positive and finite".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FjltError::Argument("t-grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Monte Carlo over fresh `D, D'` per trial, `B` fixed. The test vector is
/// drawn from `seed` as well, so `(seed, trials)` fixes the whole curve.
pub fn tail_estimate(
    d: usize,
    k: usize,
    vector: VectorKind,
    t_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<TailCurve> {
    validate_grid(t_grid)?;
    if trials == 0 {
        return Err(FjltError::Argument("trials must be at least 1".into()));
    }
    let code = Arc::new(CodeMatrix::build(k, d)?);
    let x = adversarial_vector(vector, d, seed)?;
    let norms = sample_norms(&code, &x, trials, seed)?;

    let exceed_counts = t_grid
        .iter()
        .map(|&t| norms.iter().filter(|&&n| (n - 1.0).abs() > t).count() as u64)
        .collect();
    let n = trials as f64;
    let sq: Vec<f64> = norms.iter().map(|v| v * v).collect();
    let mean = sq.iter().sum::<f64>() / n;
    let var = if trials > 1 {
        sq.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(TailCurve {
        t_grid: t_grid.to_vec(),
        exceed_counts,
        trials,
        d,
        k,
        vector,
        seed,
        mean_sq_norm: mean,
        sq_norm_std_err: (var / n).sqrt(),
    })
}

/// `||A_i x||_2` for trial plans `i = 0..trials`, in trial order.
pub fn sample_norms(code: &Arc<CodeMatrix>, x: &[f64], trials: u64, seed: u64) -> Result<Vec<f64>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let plan = FjltPlan::with_code(Arc::clone(code), trial_seed(seed, i));
            plan.apply(x).map(|y| l2_norm(&y))
        })
        .collect()
}
