//! The implicit k x d 4-wise independent sign matrix.
//!
//! Column `c` of a tile is decoded as `c = c0 | a << 1 | b << (m + 1)` with
//! `c0` a bit and `a, b` in GF(2^m). Row `r` evaluates at `x_r = r` and
//!
//! ```text
//! B[r, c] = k^{-1/2} (-1)^(c0 + Tr(a x_r) + Tr(b x_r^3))
//! ```
//!
//! Since the trace is linear, the exponent is the parity of `c & w_r` where
//! `w_r = 1 | tv(x_r) << 1 | tv(x_r^3) << (m + 1)` and `tv` is the trace
//! vector. One tile of `B` is therefore `k` rows of a `2^(2m+1)` Hadamard
//! matrix, which gives the fast multiply. Tiles repeat to fill `d`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::field::{FieldContext, FieldElement, MAX_WIDTH};
use crate::error::{FjltError, Result};
use crate::hadamard::fwht_unnormalized;
use crate::seed::{stream_rng, StreamLabel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    k: usize,
    d: usize,
    field: FieldContext,
    base_width: usize,
    eval_points: Vec<FieldElement>,
    /// Per-row Hadamard index `w_r`.
    walsh_rows: Vec<usize>,
}

/// Smallest field width with `2^m >= k`, at least 1.
pub fn field_width_for(k: usize) -> Result<u32> {
    if k == 0 {
        return Err(FjltError::Argument("k must be at least 1".into()));
    }
    let m = k.next_power_of_two().trailing_zeros().max(1);
    if m > MAX_WIDTH {
        return Err(FjltError::Argument(format!(
            "k={k} needs a field wider than {MAX_WIDTH} bits"
        )));
    }
    Ok(m)
}

/// Smallest feasible ambient dimension for `k` rows, `2^(2m+1)`.
pub fn min_dimension(k: usize) -> Result<usize> {
    Ok(1usize << (2 * field_width_for(k)? + 1))
}

impl CodeMatrix {
    pub fn build(k: usize, d: usize) -> Result<Self> {
        let m = field_width_for(k)?;
        if d == 0 || !d.is_power_of_two() {
            return Err(FjltError::Dimension(format!("d must be a power of two, got {d}")));
        }
        let base_width = 1usize << (2 * m + 1);
        if d < base_width {
            return Err(FjltError::InfeasibleDimensions { k, d, min_d: base_width });
        }
        let field = FieldContext::for_width(m)?;
        let eval_points: Vec<FieldElement> = (0..k as FieldElement).collect();
        let walsh_rows = eval_points
            .iter()
            .map(|&x| {
                let lin = field.trace_vector(x) as usize;
                let cub = field.trace_vector(field.cube(x)) as usize;
                1 | lin << 1 | cub << (m + 1)
            })
            .collect();
        Ok(CodeMatrix { k, d, field, base_width, eval_points, walsh_rows })
    }

    pub fn rows(&self) -> usize {
        self.k
    }

    pub fn cols(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn base_width(&self) -> usize {
        self.base_width
    }

    pub fn tiles(&self) -> usize {
        self.d / self.base_width
    }

    pub fn eval_points(&self) -> &[FieldElement] {
        &self.eval_points
    }

    /// Entry magnitude `k^{-1/2}`.
    pub fn scale(&self) -> f64 {
        (self.k as f64).sqrt().recip()
    }

    /// Packs `(c0, a, b)` into a within-tile column index.
    pub fn column_index(&self, c0: u32, a: FieldElement, b: FieldElement) -> usize {
        let m = self.field.width();
        (c0 & 1) as usize | (a as usize) << 1 | (b as usize) << (m + 1)
    }

    /// Sign of `B[row, col]`, evaluated from the trace definition.
    pub fn sign(&self, row: usize, col: usize) -> Result<i8> {
        if row >= self.k {
            return Err(FjltError::Index { index: row, bound: self.k });
        }
        if col >= self.d {
            return Err(FjltError::Index { index: col, bound: self.d });
        }
        let m = self.field.width();
        let c = col % self.base_width;
        let mask = (1u32 << m) - 1;
        let c0 = (c & 1) as u32;
        let a = (c >> 1) as u32 & mask;
        let b = (c >> (m + 1)) as u32 & mask;
        let x = self.eval_points[row];
        let f = &self.field;
        let bit = c0 ^ f.trace(f.mul(a, x)) ^ f.trace(f.mul(b, f.cube(x)));
        Ok(if bit == 0 { 1 } else { -1 })
    }

    /// `B y`, folding tiles then running one `2^(2m+1)`-point transform.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.d {
            return Err(FjltError::Dimension(format!(
                "code matrix expects length {}, got {}",
                self.d,
                y.len()
            )));
        }
        let mut folded = y[..self.base_width].to_vec();
        for tile in y[self.base_width..].chunks_exact(self.base_width) {
            for (acc, v) in folded.iter_mut().zip(tile) {
                *acc += v;
            }
        }
        fwht_unnormalized(&mut folded);
        let s = self.scale();
        Ok(self.walsh_rows.iter().map(|&w| s * folded[w]).collect())
    }

    /// `B^T v`, a length-d vector.
    pub fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        let tile = self.transpose_tile(v)?;
        let mut out = Vec::with_capacity(self.d);
        for _ in 0..self.tiles() {
            out.extend_from_slice(&tile);
        }
        Ok(out)
    }

    fn transpose_tile(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.k {
            return Err(FjltError::Dimension(format!(
                "transpose expects length {}, got {}",
                self.k,
                v.len()
            )));
        }
        let mut spread = vec![0.0; self.base_width];
        for (&w, &x) in self.walsh_rows.iter().zip(v) {
            spread[w] = x;
        }
        fwht_unnormalized(&mut spread);
        let s = self.scale();
        spread.iter_mut().for_each(|x| *x *= s);
        Ok(spread)
    }

    /// `||B^T v||_4`.
    pub fn transpose_l4_norm(&self, v: &[f64]) -> Result<f64> {
        let tile = self.transpose_tile(v)?;
        let fourth: f64 = tile.iter().map(|x| (x * x) * (x * x)).sum();
        Ok((fourth * self.tiles() as f64).powf(0.25))
    }

    /// Counts, over all columns, each sign pattern on four distinct rows.
    /// Pattern bit `i` is set when row `rows[i]` is negative.
    pub fn verify_balance(&self, rows: [usize; 4]) -> Result<[u64; 16]> {
        for (i, &r) in rows.iter().enumerate() {
            if r >= self.k {
                return Err(FjltError::Index { index: r, bound: self.k });
            }
            if rows[..i].contains(&r) {
                return Err(FjltError::Argument(format!("duplicate row {r} in {rows:?}")));
            }
        }
        let mut counts = [0u64; 16];
        for col in 0..self.d {
            let mut pattern = 0;
            for (i, &r) in rows.iter().enumerate() {
                if self.sign(r, col)? < 0 {
                    pattern |= 1 << i;
                }
            }
            counts[pattern] += 1;
        }
        Ok(counts)
    }

    /// Largest `||B^T v||_4` over `probes` seeded random unit directions.
    /// A lower bound on the 2->4 operator norm of `B^T`.
    pub fn norm_2to4_probe(&self, probes: usize, seed: u64) -> Result<f64> {
        if probes == 0 {
            return Err(FjltError::Argument("need at least one probe".into()));
        }
        let mut rng = stream_rng(seed, StreamLabel::Probe);
        let mut best = 0.0f64;
        let mut v = vec![0.0; self.k];
        for _ in 0..probes {
            loop {
                v.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
                let n = crate::hadamard::l2_norm(&v);
                if n > 0.0 {
                    v.iter_mut().for_each(|x| *x /= n);
                    break;
                }
            }
            best = best.max(self.transpose_l4_norm(&v)?);
        }
        Ok(best)
    }

    /// Upper bound `(3d)^{1/4} k^{-1/2}` on the 2->4 norm of a 4-wise
    /// independent matrix.
    pub fn norm_2to4_bound(&self) -> f64 {
        (3.0 * self.d as f64).powf(0.25) * self.scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dense(b: &CodeMatrix) -> Vec<Vec<f64>> {
        (0..b.rows())
            .map(|r| (0..b.cols()).map(|c| b.sign(r, c).unwrap() as f64 * b.scale()).collect())
            .collect()
    }

    #[test]
    fn build_shapes() {
        let b = CodeMatrix::build(4, 32).unwrap();
        assert_eq!((b.field().width(), b.base_width(), b.tiles()), (2, 32, 1));
        assert_eq!(CodeMatrix::build(4, 64).unwrap().tiles(), 2);
        assert_eq!(
            CodeMatrix::build(64, 4096),
            Err(FjltError::InfeasibleDimensions { k: 64, d: 4096, min_d: 8192 })
        );
        assert!(matches!(CodeMatrix::build(4, 48), Err(FjltError::Dimension(_))));
        assert!(matches!(CodeMatrix::build(0, 32), Err(FjltError::Argument(_))));
        // k = 1 still uses a 1-bit field
        assert_eq!(CodeMatrix::build(1, 8).unwrap().base_width(), 8);
        assert_eq!(min_dimension(5).unwrap(), 128);
    }

    #[test]
    fn constant_columns() {
        let b = CodeMatrix::build(4, 32).unwrap();
        let zero = b.column_index(0, 0, 0);
        let flip = b.column_index(1, 0, 0);
        for r in 0..4 {
            assert_eq!(b.sign(r, zero).unwrap(), 1);
            assert_eq!(b.sign(r, flip).unwrap(), -1);
        }
        assert!(b.sign(4, 0).is_err());
        assert!(b.sign(0, 32).is_err());
    }

    #[test]
    fn balance_minimal_and_tiled() {
        let b = CodeMatrix::build(4, 32).unwrap();
        assert_eq!(b.verify_balance([0, 1, 2, 3]).unwrap(), [2; 16]);
        let tiled = CodeMatrix::build(4, 64).unwrap();
        assert_eq!(tiled.verify_balance([0, 1, 2, 3]).unwrap(), [4; 16]);
        let b8 = CodeMatrix::build(8, 128).unwrap();
        for a in 0..8 {
            for bb in a + 1..8 {
                for c in bb + 1..8 {
                    for e in c + 1..8 {
                        assert_eq!(b8.verify_balance([a, bb, c, e]).unwrap(), [8; 16]);
                    }
                }
            }
        }
        assert!(matches!(b.verify_balance([0, 1, 1, 3]), Err(FjltError::Argument(_))));
        assert!(b.verify_balance([0, 1, 2, 9]).is_err());
    }

    #[test]
    fn unit_columns() {
        let b = CodeMatrix::build(5, 128).unwrap();
        let m = dense(&b);
        for c in 0..b.cols() {
            let n: f64 = (0..b.rows()).map(|r| m[r][c] * m[r][c]).sum();
            assert!((n.sqrt() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn fast_multiply_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (k, d) in [(4, 32), (4, 64), (5, 128), (8, 128), (16, 512)] {
            let b = CodeMatrix::build(k, d).unwrap();
            let m = dense(&b);
            for _ in 0..20 {
                let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let fast = b.apply(&y).unwrap();
                for r in 0..k {
                    let naive: f64 = m[r].iter().zip(&y).map(|(a, b)| a * b).sum();
                    assert!((fast[r] - naive).abs() <= 1e-10);
                }
                let v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let bt = b.apply_transpose(&v).unwrap();
                for c in 0..d {
                    let naive: f64 = (0..k).map(|r| m[r][c] * v[r]).sum();
                    assert!((bt[c] - naive).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn apply_special_inputs() {
        let b = CodeMatrix::build(4, 32).unwrap();
        assert_eq!(b.apply(&[0.0; 32]).unwrap(), vec![0.0; 4]);
        let j = 13;
        let mut e = vec![0.0; 32];
        e[j] = 1.0;
        let out = b.apply(&e).unwrap();
        for r in 0..4 {
            assert_eq!(out[r], b.sign(r, j).unwrap() as f64 * 0.5);
        }
        assert!(matches!(b.apply(&[0.0; 16]), Err(FjltError::Dimension(_))));
    }

    #[test]
    fn probe_norms() {
        let b = CodeMatrix::build(4, 32).unwrap();
        let mut e1 = vec![0.0; 4];
        e1[0] = 1.0;
        let want = (32.0f64 / 16.0).powf(0.25);
        assert!((b.transpose_l4_norm(&e1).unwrap() - want).abs() < 1e-12);

        let bound = b.norm_2to4_bound();
        assert!((bound - 96f64.powf(0.25) / 2.0).abs() < 1e-15);
        assert!(b.norm_2to4_probe(10_000, 1).unwrap() <= bound + 1e-9);

        let mut prev = 0.0;
        for n in [1, 2, 5, 50, 500] {
            let v = b.norm_2to4_probe(n, 9).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert!(b.norm_2to4_probe(0, 9).is_err());
    }
}
