use super::plan::PointSet;
use crate::error::{FjltError, Result};

/// Worst pairwise squared-distance distortion of an embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    /// Pairs with nonzero source distance that entered the maximum.
    pub pairs: usize,
    pub max_distortion: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Coincident source points whose images differ.
    pub zero_pair_violations: usize,
    pub eps: f64,
    pub pass: bool,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Max over pairs of `| ||Y_i - Y_j||^2 / ||X_i - X_j||^2 - 1 |`.
pub fn check_jl(source: &PointSet, image: &PointSet, eps: f64) -> Result<DistortionReport> {
    if source.len() != image.len() {
        return Err(FjltError::Dimension(format!(
            "row counts differ: {} source vs {} embedded",
            source.len(),
            image.len()
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(FjltError::Argument(format!("eps must lie in (0, 1), got {eps}")));
    }
    let mut report = DistortionReport {
        pairs: 0,
        max_distortion: 0.0,
        worst_pair: None,
        zero_pair_violations: 0,
        eps,
        pass: false,
    };
    for i in 0..source.len() {
        for j in i + 1..source.len() {
            let src = sq_dist(source.row(i), source.row(j));
            let dst = sq_dist(image.row(i), image.row(j));
            if src == 0.0 {
                if dst != 0.0 {
                    report.zero_pair_violations += 1;
                }
                continue;
            }
            report.pairs += 1;
            let distortion = (dst / src - 1.0).abs();
            if distortion > report.max_distortion || report.worst_pair.is_none() {
                report.max_distortion = distortion;
                report.worst_pair = Some((i, j));
            }
        }
    }
    report.pass = report.zero_pair_violations == 0 && report.max_distortion <= eps;
    Ok(report)
}
