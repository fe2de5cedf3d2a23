//! Chaining bound on the embedding dimension:
//!
//! ```text
//! k >= C / eps^4 * ( ln(1/p)^{3/4} + sum_{j>=0} 2^{-j} (ln N_j)^{3/4} )^2
//! ```
//!
//! where `N_j` is the `2^{-j}`-covering number of the unit-norm set,
//! supplied here by a [`CoveringModel`] as an upper bound on `ln N_j`.
//! Also a Monte Carlo Gaussian width estimate for finite sets.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{FjltError, Result};
use crate::fjlt::PointSet;
use crate::seed::{stream_rng, StreamLabel};

#[derive(Debug, Clone, PartialEq)]
pub enum CoveringModel {
    /// A set of `n` points; `ln N <= ln n` at every scale.
    Finite { n: u64 },
    /// Unit sphere of an `m`-dimensional subspace: `m ln(1 + 2^{j+1})`.
    Subspace { m: u32 },
    /// Unit `s`-sparse vectors in dimension `d`: `ln C(d, s) + s ln(1 + 2^{j+1})`.
    Sparse { d: u64, s: u64 },
    /// Tabulated `ln N_j` for `j = 0..len`. With `saturate`, the last value
    /// holds for every larger `j`.
    Explicit { ln_n: Vec<f64>, saturate: bool },
}

impl CoveringModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            CoveringModel::Finite { n } if *n == 0 => {
                Err(FjltError::Argument("finite model needs n >= 1".into()))
            }
            CoveringModel::Sparse { d, s } if *s == 0 || s > d => Err(FjltError::Argument(
                format!("sparse model needs 1 <= s <= d, got s={s}, d={d}"),
            )),
            CoveringModel::Explicit { ln_n, .. } => {
                if ln_n.is_empty() {
                    return Err(FjltError::Argument("explicit covering table is empty".into()));
                }
                if ln_n.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(FjltError::Argument(
                        "explicit ln N values must be finite and >= 0".into(),
                    ));
                }
                if ln_n.windows(2).any(|w| w[1] < w[0]) {
                    return Err(FjltError::Argument(
                        "explicit ln N values must be nondecreasing in j".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Upper bound on `ln N(S, ||.||_2, 2^{-j})`.
    pub fn covering_log(&self, j: usize) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            CoveringModel::Finite { n } => (*n as f64).ln(),
            CoveringModel::Subspace { m } => *m as f64 * volumetric(j),
            CoveringModel::Sparse { d, s } => ln_binomial(*d, *s) + *s as f64 * volumetric(j),
            CoveringModel::Explicit { ln_n, saturate } => match ln_n.get(j) {
                Some(v) => *v,
                None if *saturate => *ln_n.last().unwrap(),
                None => {
                    return Err(FjltError::Range(format!(
                        "covering table has {} entries, j={j} requested",
                        ln_n.len()
                    )))
                }
            },
        })
    }

    /// `(a, b)` with `ln N_j <= a + b j` for all `j`, when known.
    fn linear_cap(&self) -> Option<(f64, f64)> {
        let ln3 = 3f64.ln();
        let ln2 = std::f64::consts::LN_2;
        match self {
            // ln(1 + 2^{j+1}) <= ln 3 + j ln 2
            CoveringModel::Subspace { m } => Some((*m as f64 * ln3, *m as f64 * ln2)),
            CoveringModel::Sparse { d, s } => {
                Some((ln_binomial(*d, *s) + *s as f64 * ln3, *s as f64 * ln2))
            }
            _ => None,
        }
    }
}

fn volumetric(j: usize) -> f64 {
    (2f64.powi(j as i32 + 1)).ln_1p()
}

/// `ln C(d, s)` as `sum_{i<s} ln((d - i) / (i + 1))`.
pub fn ln_binomial(d: u64, s: u64) -> f64 {
    let s = s.min(d - s);
    (0..s).map(|i| ((d - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// Reads a `j,ln_N` CSV with a header row; `j` must run `0, 1, 2, ...`.
pub fn parse_covering_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| FjltError::Format("covering CSV is empty".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["j", "ln_N"] {
        return Err(FjltError::Format(format!("expected header 'j,ln_N', got '{header}'")));
    }
    let mut values = Vec::new();
    for (row, line) in lines.enumerate() {
        let bad = || FjltError::Format(format!("malformed covering row '{line}'"));
        let (j, v) = line.split_once(',').ok_or_else(bad)?;
        let j: usize = j.trim().parse().map_err(|_| bad())?;
        let v: f64 = v.trim().parse().map_err(|_| bad())?;
        if j != row {
            return Err(FjltError::Format(format!("expected j={row}, found j={j}")));
        }
        values.push(v);
    }
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainingRequest {
    pub model: CoveringModel,
    pub eps: f64,
    pub p: f64,
    /// Stand-in for the unspecified universal constant.
    pub c: f64,
    /// Relative tolerance on the truncated series tail.
    pub tolerance: f64,
    /// Sum exactly `j = 0..=max_j` and skip the tail certificate.
    pub max_j: Option<usize>,
}

impl ChainingRequest {
    pub fn new(model: CoveringModel, eps: f64, p: f64) -> Self {
        ChainingRequest { model, eps, p, c: 1.0, tolerance: 1e-9, max_j: None }
    }

    fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.eps) {
            return Err(FjltError::Argument(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !open_unit(self.p) {
            return Err(FjltError::Argument(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(FjltError::Argument(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tolerance > 0.0) {
            return Err(FjltError::Argument("tolerance must be positive".into()));
        }
        self.model.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesEvaluation {
    /// Summed in closed form; no truncation.
    ClosedForm,
    /// Truncated with a certified tail bound.
    Truncated,
    /// Stopped at a caller-set `max_j`; the tail is not bounded.
    HardLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainBound {
    pub k: u64,
    pub series: f64,
    /// Terms summed explicitly.
    pub terms_used: usize,
    /// Upper bound on the omitted part of the series, when known.
    pub tail_bound: Option<f64>,
    pub evaluation: SeriesEvaluation,
    pub c: f64,
}

const MAX_TERMS: usize = 10_000;

pub fn chain_dimension(req: &ChainingRequest) -> Result<ChainBound> {
    req.validate()?;
    let term = |j: usize| -> Result<f64> {
        Ok(req.model.covering_log(j)?.powf(0.75) * 0.5f64.powi(j as i32))
    };

    let (series, terms_used, tail_bound, evaluation) = if let Some(max_j) = req.max_j {
        let s = (0..=max_j).map(term).sum::<Result<f64>>()?;
        (s, max_j + 1, None, SeriesEvaluation::HardLimit)
    } else {
        match &req.model {
            CoveringModel::Finite { n } => {
                (2.0 * (*n as f64).ln().powf(0.75), 0, Some(0.0), SeriesEvaluation::ClosedForm)
            }
            CoveringModel::Explicit { ln_n, saturate: true } => {
                let len = ln_n.len();
                let head = (0..len - 1).map(term).sum::<Result<f64>>()?;
                // sum_{j >= len-1} 2^{-j} L^{3/4} = 2^{-(len-2)} L^{3/4}
                let tail = ln_n[len - 1].powf(0.75) * 0.5f64.powi(len as i32 - 2);
                (head + tail, len, Some(0.0), SeriesEvaluation::ClosedForm)
            }
            CoveringModel::Explicit { saturate: false, .. } => {
                return Err(FjltError::TruncationUncertain(
                    "explicit table has no growth information beyond its last row; \
                     mark it saturating or set a hard j limit"
                        .into(),
                ))
            }
            model => {
                let (a, b) = model.linear_cap().expect("built-in models carry a cap");
                let (a34, b34) = (a.powf(0.75), b.powf(0.75));
                let mut sum = 0.0;
                let mut j = 0;
                loop {
                    sum += term(j)?;
                    // (a + b i)^{3/4} <= a^{3/4} + b^{3/4} i, and
                    // sum_{i>j} 2^{-i} = 2^{-j}, sum_{i>j} i 2^{-i} = (j + 2) 2^{-j}
                    let scale = 0.5f64.powi(j as i32);
                    let tail = a34 * scale + b34 * (j as f64 + 2.0) * scale;
                    j += 1;
                    if tail <= req.tolerance * sum || tail == 0.0 {
                        break (sum, j, Some(tail), SeriesEvaluation::Truncated);
                    }
                    if j >= MAX_TERMS {
                        return Err(FjltError::TruncationUncertain(format!(
                            "series tail still {tail} after {j} terms"
                        )));
                    }
                }
            }
        }
    };

    let log_term = (1.0 / req.p).ln().powf(0.75);
    let value = req.c / req.eps.powi(4) * (log_term + series).powi(2);
    Ok(ChainBound { k: ceil_to_u64(value)?, series, terms_used, tail_bound, evaluation, c: req.c })
}

/// Ceiling that treats values within `1e-12` relative of an integer as that
/// integer, so `143.99999999999997` rounds to 144.
fn ceil_to_u64(value: f64) -> Result<u64> {
    if !value.is_finite() || value >= u64::MAX as f64 {
        return Err(FjltError::Range(format!("dimension bound {value} does not fit in u64")));
    }
    let nearest = value.round();
    let snapped = if (value - nearest).abs() <= 1e-12 * nearest.max(1.0) { nearest } else { value.ceil() };
    Ok(snapped as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianWidthEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: u64,
    /// Fixed partition count of the reduction; results depend on it.
    pub partitions: u64,
}

pub const DEFAULT_WIDTH_PARTITIONS: u64 = 8;

/// Monte Carlo estimate of `E sup_{x in T} <g, x>` for a finite set `T`.
pub fn gaussian_width_mc(
    points: &PointSet,
    trials: u64,
    seed: u64,
    partitions: u64,
) -> Result<GaussianWidthEstimate> {
    if points.is_empty() {
        return Err(FjltError::Argument("point set is empty".into()));
    }
    if trials < 2 {
        return Err(FjltError::Argument("need at least 2 trials".into()));
    }
    if partitions == 0 || partitions > trials {
        return Err(FjltError::Argument(format!(
            "partitions must be in 1..={trials}, got {partitions}"
        )));
    }
    let d = points.dim();
    let sums: Vec<(f64, f64)> = (0..partitions)
        .into_par_iter()
        .map(|part| {
            let lo = trials * part / partitions;
            let hi = trials * (part + 1) / partitions;
            let mut rng = stream_rng(seed, StreamLabel::Gaussian(part));
            let mut g = vec![0.0; d];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in lo..hi {
                g.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
                let sup = points
                    .rows()
                    .map(|row| row.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                s += sup;
                s2 += sup * sup;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    let n = trials as f64;
    let mean = s / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(GaussianWidthEstimate { mean, std_err: (var / n).sqrt(), trials, partitions })
}
