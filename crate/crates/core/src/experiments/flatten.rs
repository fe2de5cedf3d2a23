//! Distribution of `d^{1/4} ||H D' x||_4` over the signs of `D'`.

use std::collections::BTreeMap;

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{FjltError, Result};
use crate::hadamard::{fwht_inplace, l2_norm, l4_norm};
use crate::seed::{stream_rng, trial_seed, StreamLabel};

/// Default enumeration limit for exhaustive mode.
pub const MAX_EXHAUSTIVE_D: usize = 20;

/// Values closer than this (relative) share a histogram bin.
const BIN_RESOLUTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlattenMode {
    /// All `2^d` sign patterns; `max_d` caps `d`.
    Exhaustive { max_d: usize },
    MonteCarlo { trials: u64, seed: u64 },
}

impl FlattenMode {
    pub fn exhaustive() -> Self {
        FlattenMode::Exhaustive { max_d: MAX_EXHAUSTIVE_D }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlattenBin {
    /// Smallest value observed in the bin.
    pub value: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlattenDistribution {
    pub d: usize,
    pub mode: FlattenMode,
    /// Ascending by value.
    pub bins: Vec<FlattenBin>,
    /// `2^d` in exhaustive mode, the trial count otherwise.
    pub denominator: u64,
}

impl FlattenDistribution {
    /// Number of outcomes with `d^{1/4} ||H D' x||_4 >= t`, with a
    /// `1e-9` slack so that exact hits count.
    pub fn count_at_least(&self, t: f64) -> u64 {
        self.bins.iter().filter(|b| b.value >= t - BIN_RESOLUTION * t.abs().max(1.0)).map(|b| b.count).sum()
    }

    pub fn prob_at_least(&self, t: f64) -> f64 {
        self.count_at_least(t) as f64 / self.denominator as f64
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }
}

pub fn flatten_tail(x: &[f64], mode: FlattenMode) -> Result<FlattenDistribution> {
    let d = x.len();
    if d == 0 || !d.is_power_of_two() {
        return Err(FjltError::Dimension(format!("d must be a power of two, got {d}")));
    }
    let n = l2_norm(x);
    if (n - 1.0).abs() > 1e-9 {
        return Err(FjltError::Argument(format!("x must be a unit vector, has norm {n}")));
    }
    let hist = match mode {
        FlattenMode::Exhaustive { max_d } => {
            if d > max_d {
                return Err(FjltError::Resource(format!(
                    "exhaustive enumeration over 2^{d} patterns exceeds the limit d <= {max_d}"
                )));
            }
            let total = 1u64 << d;
            let chunk = 1u64 << d.min(10);
            (0..total / chunk)
                .into_par_iter()
                .map(|c| {
                    let mut h = Histogram::default();
                    let mut buf = vec![0.0; d];
                    for pattern in c * chunk..(c + 1) * chunk {
                        h.add(flatness(x, |i| pattern >> i & 1 == 1, &mut buf));
                    }
                    h
                })
                .reduce(Histogram::default, Histogram::merge)
        }
        FlattenMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(FjltError::Argument("trials must be at least 1".into()));
            }
            (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream_rng(trial_seed(seed, t), StreamLabel::Inner);
                    let words: Vec<u64> = (0..d.div_ceil(64)).map(|_| rng.next_u64()).collect();
                    let mut buf = vec![0.0; d];
                    let mut h = Histogram::default();
                    h.add(flatness(x, |i| words[i / 64] >> (i % 64) & 1 == 1, &mut buf));
                    h
                })
                .reduce(Histogram::default, Histogram::merge)
        }
    };
    let denominator = match mode {
        FlattenMode::Exhaustive { .. } => 1u64 << d,
        FlattenMode::MonteCarlo { trials, .. } => trials,
    };
    Ok(FlattenDistribution {
        d,
        mode,
        bins: hist.0.into_values().map(|(value, count)| FlattenBin { value, count }).collect(),
        denominator,
    })
}

/// `d^{1/4} ||H D' x||_4` where `negate(i)` gives the sign of `D'_ii`.
fn flatness(x: &[f64], negate: impl Fn(usize) -> bool, buf: &mut [f64]) -> f64 {
    for (i, (b, &v)) in buf.iter_mut().zip(x).enumerate() {
        *b = if negate(i) { -v } else { v };
    }
    fwht_inplace(buf).expect("power-of-two length checked by caller");
    (x.len() as f64).powf(0.25) * l4_norm(buf)
}

/// Bin key -> (min value, count). Integer counts merge exactly in any order.
#[derive(Default)]
struct Histogram(BTreeMap<i64, (f64, u64)>);

impl Histogram {
    fn add(&mut self, value: f64) {
        let key = (value / BIN_RESOLUTION).round() as i64;
        let e = self.0.entry(key).or_insert((value, 0));
        e.0 = e.0.min(value);
        e.1 += 1;
    }

    fn merge(mut self, other: Histogram) -> Histogram {
        for (key, (v, c)) in other.0 {
            let e = self.0.entry(key).or_insert((v, 0));
            e.0 = e.0.min(v);
            e.1 += c;
        }
        self
    }
}
