//! CSV rendering and t-grid parsing. Floats use 17 significant digits.

use std::fmt::Write;

use super::bench::BenchRow;
use super::coordinate::CoordinateTail;
use super::flatten::FlattenDistribution;
use super::tail::TailCurve;
use crate::error::{FjltError, Result};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn tail_csv(curve: &TailCurve) -> String {
    let mut out = String::from("t,count,trials,p_hat\n");
    for ((t, c), p) in curve.t_grid.iter().zip(&curve.exceed_counts).zip(curve.probabilities()) {
        writeln!(out, "{},{c},{},{}", fmt_f64(*t), curve.trials, fmt_f64(p)).unwrap();
    }
    out
}

pub fn flatten_csv(dist: &FlattenDistribution) -> String {
    let mut out = String::from("value,count,denominator\n");
    for b in &dist.bins {
        writeln!(out, "{},{},{}", fmt_f64(b.value), b.count, dist.denominator).unwrap();
    }
    out
}

pub fn coordinate_csv(tail: &CoordinateTail) -> String {
    let mut out = String::from("t,count,denominator,p_exact,hoeffding_bound\n");
    let rows = tail.t_grid.iter().zip(&tail.counts).zip(tail.probabilities()).zip(tail.hoeffding_bounds());
    for (((t, c), p), b) in rows {
        writeln!(out, "{},{c},{},{},{}", fmt_f64(*t), tail.denominator, fmt_f64(p), fmt_f64(b))
            .unwrap();
    }
    out
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("d,k,median_ns\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.d, r.k, r.median_ns).unwrap();
    }
    out
}

/// `start:stop:step`, start inclusive, stop exclusive.
pub fn parse_t_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(FjltError::Argument(format!("t-grid '{spec}' is not start:stop:step")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| FjltError::Argument(format!("bad number '{s}' in t-grid")))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step <= 0.0 {
        return Err(FjltError::Argument("t-grid step must be positive".into()));
    }
    // Tolerate round-off so 0.1:0.4:0.1 has three points, not four.
    let n = ((stop - start) / step - 1e-9).ceil().max(0.0) as usize;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}
