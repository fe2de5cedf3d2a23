//! Least-squares fits of `P(exceed) ~ prefactor * exp(-rate * feature(t))`.

use std::fmt;
use std::str::FromStr;

use super::tail::TailCurve;
use crate::error::{FjltError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    /// `exp(-c k t^2)`.
    SubGaussian,
    /// `exp(-c k^{2/3} t^{4/3})`, between sub-Gaussian and sub-exponential.
    /// Named `theorem-1` on the command line and in output.
    Intermediate,
    /// `exp(-c t^4)`, the shape of the l4 flattening tail.
    FourthPower,
}

impl TailModel {
    pub fn feature(&self, t: f64, k: usize) -> f64 {
        let k = k as f64;
        match self {
            TailModel::SubGaussian => k * t * t,
            TailModel::Intermediate => k.powf(2.0 / 3.0) * t.powf(4.0 / 3.0),
            TailModel::FourthPower => t.powi(4),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TailModel::SubGaussian => "sub-gaussian",
            TailModel::Intermediate => "theorem-1",
            TailModel::FourthPower => "fourth-power",
        }
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TailModel {
    type Err = FjltError;

    fn from_str(s: &str) -> Result<Self> {
        [TailModel::SubGaussian, TailModel::Intermediate, TailModel::FourthPower]
            .into_iter()
            .find(|m| m.name() == s || (s == "intermediate" && *m == TailModel::Intermediate))
            .ok_or_else(|| FjltError::Argument(format!("unknown tail model '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedConstants {
    pub model: TailModel,
    pub prefactor: f64,
    /// Exponent coefficient; always > 0 on success.
    pub rate: f64,
    /// Root-mean-square residual of the regression in `-ln p` units.
    pub residual: f64,
    pub points_used: usize,
}

/// Fits a tail curve, keeping points with empirical probability in
/// `(10 / trials, 0.5)`.
pub fn fit_tail_constants(curve: &TailCurve, model: TailModel) -> Result<FittedConstants> {
    let points: Vec<(f64, f64)> =
        curve.t_grid.iter().copied().zip(curve.probabilities()).collect();
    fit_tail_points(&points, model, curve.k, (10.0 / curve.trials as f64, 0.5))
}

/// Regresses `-ln p` on `model.feature(t, k)` over `(t, p)` pairs with `p`
/// strictly inside `window`.
pub fn fit_tail_points(
    points: &[(f64, f64)],
    model: TailModel,
    k: usize,
    window: (f64, f64),
) -> Result<FittedConstants> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, p)| *p > window.0 && *p < window.1)
        .map(|&(t, p)| (model.feature(t, k), -p.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(FjltError::Fit(format!(
            "need at least 3 points with probability in ({}, {}), have {}",
            window.0,
            window.1,
            usable.len()
        )));
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(FjltError::Fit("all usable points share one feature value".into()));
    }
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    if rate <= 0.0 {
        return Err(FjltError::Fit(format!("fitted rate {rate} shows no decay")));
    }
    let sse: f64 = usable.iter().map(|p| (p.1 - intercept - rate * p.0).powi(2)).sum();
    Ok(FittedConstants {
        model,
        prefactor: (-intercept).exp(),
        rate,
        residual: (sse / n).sqrt(),
        points_used: usable.len(),
    })
}
