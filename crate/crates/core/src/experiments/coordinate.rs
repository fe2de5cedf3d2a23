//! Exact tail of a Rademacher sum `<xi, x>` by enumerating all sign patterns.

use super::tail::validate_grid;
use crate::error::{FjltError, Result};

pub const MAX_COORDINATE_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateTail {
    pub t_grid: Vec<f64>,
    /// Patterns with `|<xi, x>| > t`.
    pub counts: Vec<u64>,
    /// `2^len(x)`.
    pub denominator: u64,
    pub norm_sq: f64,
}

impl CoordinateTail {
    pub fn probabilities(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.denominator as f64).collect()
    }

    /// `2 exp(-t^2 / (2 ||x||^2))` at each grid point.
    pub fn hoeffding_bounds(&self) -> Vec<f64> {
        self.t_grid.iter().map(|t| hoeffding_bound(*t, self.norm_sq)).collect()
    }
}

pub fn hoeffding_bound(t: f64, norm_sq: f64) -> f64 {
    2.0 * (-t * t / (2.0 * norm_sq)).exp()
}

pub fn coordinate_tail_exact(x: &[f64], t_grid: &[f64]) -> Result<CoordinateTail> {
    coordinate_tail_exact_with_limit(x, t_grid, MAX_COORDINATE_LEN)
}

/// Splits `x` in halves, enumerates each half's `2^(len/2)` signed sums and
/// counts exceedances by binary search over the sorted right half.
pub fn coordinate_tail_exact_with_limit(
    x: &[f64],
    t_grid: &[f64],
    max_len: usize,
) -> Result<CoordinateTail> {
    if x.len() > max_len || x.len() > 62 {
        return Err(FjltError::Resource(format!(
            "exact enumeration of 2^{} sign patterns exceeds the limit {max_len}",
            x.len()
        )));
    }
    validate_grid(t_grid)?;
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(FjltError::Argument(format!("x[{i}] is not finite")));
    }
    let (left, right) = x.split_at(x.len() / 2);
    let left = signed_sums(left);
    let mut right = signed_sums(right);
    right.sort_by(f64::total_cmp);

    let counts = t_grid
        .iter()
        .map(|&t| {
            left.iter()
                .map(|&l| {
                    let above = right.len() - right.partition_point(|&r| l + r <= t);
                    let below = right.partition_point(|&r| l + r < -t);
                    (above + below) as u64
                })
                .sum()
        })
        .collect();
    Ok(CoordinateTail {
        t_grid: t_grid.to_vec(),
        counts,
        denominator: 1u64 << x.len(),
        norm_sq: x.iter().map(|v| v * v).sum(),
    })
}

fn signed_sums(x: &[f64]) -> Vec<f64> {
    (0..1u64 << x.len())
        .map(|pattern| {
            x.iter()
                .enumerate()
                .map(|(i, &v)| if pattern >> i & 1 == 1 { -v } else { v })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::vectors::random_unit;

    #[test]
    fn single_coordinate() {
        let tail = coordinate_tail_exact(&[1.0], &[0.5, 0.999, 1.0, 1.5]).unwrap();
        assert_eq!(tail.denominator, 2);
        assert_eq!(tail.probabilities(), vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_equal_coordinates() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let tail = coordinate_tail_exact(&[h, h], &[1.0]).unwrap();
        assert_eq!((tail.counts[0], tail.denominator), (2, 4));
    }

    /// Brute force over every pattern, no splitting.
    #[test]
    fn matches_direct_enumeration() {
        let x = random_unit(11, 3, 0);
        let grid: Vec<f64> = (1..30).map(|i| i as f64 * 0.1).collect();
        let tail = coordinate_tail_exact(&x, &grid).unwrap();
        for (t, &count) in grid.iter().zip(&tail.counts) {
            let direct = signed_sums(&x).iter().filter(|s| s.abs() > *t).count() as u64;
            assert_eq!(count, direct);
        }
    }

    #[test]
    fn below_hoeffding() {
        for s in 0..5 {
            let x = random_unit(12, 100 + s, 0);
            let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.15).collect();
            let tail = coordinate_tail_exact(&x, &grid).unwrap();
            for (p, b) in tail.probabilities().iter().zip(tail.hoeffding_bounds()) {
                assert!(*p <= b);
            }
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(
            coordinate_tail_exact(&[0.1; 25], &[1.0]),
            Err(FjltError::Resource(_))
        ));
        assert!(coordinate_tail_exact(&[0.1; 4], &[]).is_err());
        assert!(coordinate_tail_exact(&[f64::NAN], &[1.0]).is_err());
    }
}
