//! Orthonormal fast Walsh-Hadamard transform.
//!
//! `H_d(i, j) = d^{-1/2} (-1)^{popcount(i & j)}`, applied in place with
//! `d log d` butterflies and a single `d^{-1/2}` scale at the end.

use crate::error::{FjltError, Result};

/// Levels below this span are run block-by-block so each block stays in cache.
const BLOCK: usize = 1 << 11;

/// Applies the orthonormal Walsh-Hadamard transform to `v` in place.
pub fn fwht_inplace(v: &mut [f64]) -> Result<()> {
    check_len(v.len())?;
    fwht_unnormalized(v);
    let scale = (v.len() as f64).sqrt().recip();
    for x in v.iter_mut() {
        *x *= scale;
    }
    Ok(())
}

/// Unscaled transform, `v <- sqrt(d) * H v`. Caller guarantees a power-of-two length.
pub(crate) fn fwht_unnormalized(v: &mut [f64]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    if n <= BLOCK {
        butterflies(v, 1, n);
        return;
    }
    for chunk in v.chunks_exact_mut(BLOCK) {
        butterflies(chunk, 1, BLOCK);
    }
    butterflies(v, BLOCK, n);
}

/// Runs the butterfly levels with half-spans `from, 2*from, ..` below `to`.
#[inline]
fn butterflies(v: &mut [f64], from: usize, to: usize) {
    let mut h = from;
    while h < to {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Dense entry of the normalized Hadamard matrix, 0-based indices.
pub fn hadamard_entry(i: usize, j: usize, d: usize) -> Result<f64> {
    check_len(d)?;
    for idx in [i, j] {
        if idx >= d {
            return Err(FjltError::Index { index: idx, bound: d });
        }
    }
    let mag = (d as f64).sqrt().recip();
    Ok(if (i & j).count_ones() % 2 == 0 { mag } else { -mag })
}

fn check_len(d: usize) -> Result<()> {
    if d == 0 || !d.is_power_of_two() {
        return Err(FjltError::Dimension(format!(
            "Walsh-Hadamard length must be a power of two, got {d}"
        )));
    }
    Ok(())
}

/// Euclidean norm.
pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `(sum |x_i|^4)^(1/4)`.
pub fn l4_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| (x * x) * (x * x)).sum::<f64>().sqrt().sqrt()
}
