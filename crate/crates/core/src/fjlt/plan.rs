use std::sync::Arc;

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{FjltError, Result};
use crate::fourwise::CodeMatrix;
use crate::hadamard::fwht_inplace;
use crate::seed::{stream_rng, StreamLabel};

/// A realized Rademacher diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector {
    signs: Vec<i8>,
    master_seed: u64,
    label: StreamLabel,
}

impl SignVector {
    /// Draws `d` signs from the `(master_seed, label)` stream, one bit each.
    pub fn generate(master_seed: u64, label: StreamLabel, d: usize) -> Self {
        let mut rng = stream_rng(master_seed, label);
        let mut signs = Vec::with_capacity(d);
        while signs.len() < d {
            let word = rng.next_u64();
            let take = (d - signs.len()).min(64);
            signs.extend((0..take).map(|i| if word >> i & 1 == 0 { 1 } else { -1 }));
        }
        SignVector { signs, master_seed, label }
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn label(&self) -> StreamLabel {
        self.label
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    fn apply(&self, v: &mut [f64]) {
        for (x, &s) in v.iter_mut().zip(&self.signs) {
            if s < 0 {
                *x = -*x;
            }
        }
    }
}

/// The embedding `A = B D H D'`.
#[derive(Debug, Clone, PartialEq)]
pub struct FjltPlan {
    code: Arc<CodeMatrix>,
    outer: SignVector,
    inner: SignVector,
    master_seed: u64,
}

impl FjltPlan {
    pub fn new(d: usize, k: usize, seed: u64) -> Result<Self> {
        let code = Arc::new(CodeMatrix::build(k, d)?);
        Ok(Self::with_code(code, seed))
    }

    /// Fresh diagonals over an existing code matrix.
    pub fn with_code(code: Arc<CodeMatrix>, seed: u64) -> Self {
        Self::with_labels(code, seed, StreamLabel::Outer, StreamLabel::Inner)
    }

    /// Draws `D` and `D'` from explicitly named streams.
    pub fn with_labels(
        code: Arc<CodeMatrix>,
        seed: u64,
        outer: StreamLabel,
        inner: StreamLabel,
    ) -> Self {
        let d = code.cols();
        FjltPlan {
            outer: SignVector::generate(seed, outer, d),
            inner: SignVector::generate(seed, inner, d),
            code,
            master_seed: seed,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.code.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.code.rows()
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn code(&self) -> &CodeMatrix {
        &self.code
    }

    pub fn shared_code(&self) -> Arc<CodeMatrix> {
        Arc::clone(&self.code)
    }

    /// The `D` diagonal.
    pub fn outer_signs(&self) -> &SignVector {
        &self.outer
    }

    /// The `D'` diagonal.
    pub fn inner_signs(&self) -> &SignVector {
        &self.inner
    }

    /// `H D' x`, the flattened intermediate.
    pub fn rotate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x.len())?;
        let mut buf = x.to_vec();
        self.inner.apply(&mut buf);
        fwht_inplace(&mut buf)?;
        Ok(buf)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut buf = self.rotate(x)?;
        self.outer.apply(&mut buf);
        self.code.apply(&buf)
    }

    /// Embeds every row of `points`, in parallel, row order preserved.
    pub fn embed_set(&self, points: &PointSet) -> Result<PointSet> {
        self.check_input(points.dim())?;
        let k = self.output_dim();
        let mut out = vec![0.0; points.len() * k];
        out.par_chunks_mut(k.max(1))
            .zip(points.data().par_chunks(points.dim()))
            .try_for_each(|(dst, row)| -> Result<()> {
                dst.copy_from_slice(&self.apply(row)?);
                Ok(())
            })?;
        PointSet::from_flat(points.len(), k, out)
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.input_dim() {
            return Err(FjltError::Dimension(format!(
                "plan expects input length {}, got {len}",
                self.input_dim()
            )));
        }
        Ok(())
    }
}

/// Row-major `n x d` point set.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn from_flat(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        if n.checked_mul(d) != Some(data.len()) {
            return Err(FjltError::Dimension(format!(
                "{} values cannot form a {n} x {d} point set",
                data.len()
            )));
        }
        Ok(PointSet { n, d, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(FjltError::Dimension(format!(
                "ragged point set: row {i} has length {}, expected {d}",
                r.len()
            )));
        }
        Ok(PointSet { n: rows.len(), d, data: rows.concat() })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n).map(move |i| self.row(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{hadamard_entry, l2_norm};

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = FjltPlan::new(32, 4, 0).unwrap();
        assert_eq!(a, FjltPlan::new(32, 4, 0).unwrap());
        assert_ne!(a, FjltPlan::new(32, 4, 1).unwrap());
        assert!(matches!(
            FjltPlan::new(4096, 64, 3),
            Err(FjltError::InfeasibleDimensions { min_d: 8192, .. })
        ));
    }

    #[test]
    fn swapped_streams_give_a_different_plan() {
        let code = Arc::new(CodeMatrix::build(4, 32).unwrap());
        let normal = FjltPlan::with_code(code.clone(), 5);
        let swapped = FjltPlan::with_labels(code, 5, StreamLabel::Inner, StreamLabel::Outer);
        assert_ne!(normal, swapped);
        assert_eq!(normal.outer_signs().as_slice(), swapped.inner_signs().as_slice());
    }

    #[test]
    fn signs_are_unit() {
        let s = SignVector::generate(42, StreamLabel::Inner, 1000);
        assert_eq!(s.len(), 1000);
        assert!(s.as_slice().iter().all(|&v| v == 1 || v == -1));
        let pos = s.as_slice().iter().filter(|&&v| v == 1).count();
        assert!((400..600).contains(&pos));
    }

    #[test]
    fn matches_dense_four_factor_product() {
        let plan = FjltPlan::new(32, 4, 17).unwrap();
        let (d, k) = (32, 4);
        let mut x = vec![0.0; d];
        x[0] = 1.0;
        // B D H D' x, factor by factor
        let dp: Vec<f64> = (0..d).map(|i| plan.inner_signs().as_slice()[i] as f64 * x[i]).collect();
        let h: Vec<f64> = (0..d)
            .map(|i| (0..d).map(|j| hadamard_entry(i, j, d).unwrap() * dp[j]).sum())
            .collect();
        let dh: Vec<f64> = (0..d).map(|i| plan.outer_signs().as_slice()[i] as f64 * h[i]).collect();
        let want: Vec<f64> = (0..k)
            .map(|r| {
                (0..d)
                    .map(|c| plan.code().sign(r, c).unwrap() as f64 * plan.code().scale() * dh[c])
                    .sum()
            })
            .collect();
        let got = plan.apply(&x).unwrap();
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn linear_and_rotation_is_isometric() {
        let plan = FjltPlan::new(128, 8, 2).unwrap();
        assert_eq!(plan.apply(&[0.0; 128]).unwrap(), vec![0.0; 8]);
        let x: Vec<f64> = (0..128).map(|i| (i as f64 * 0.37).sin()).collect();
        let ax = l2_norm(&plan.apply(&x).unwrap());
        let scaled: Vec<f64> = x.iter().map(|v| -2.5 * v).collect();
        assert!((l2_norm(&plan.apply(&scaled).unwrap()) - 2.5 * ax).abs() <= 1e-12 * ax);

        let mut e1 = vec![0.0; 128];
        e1[0] = 1.0;
        let flat = vec![128f64.sqrt().recip(); 128];
        for v in [e1, flat] {
            assert!((l2_norm(&plan.rotate(&v).unwrap()) - 1.0).abs() < 1e-14);
        }
        assert!(plan.apply(&[1.0; 64]).is_err());
    }

    #[test]
    fn embed_set_rows() {
        let plan = FjltPlan::new(32, 4, 1).unwrap();
        let r0: Vec<f64> = (0..32).map(|i| i as f64).collect();
        let r1: Vec<f64> = (0..32).map(|i| (i as f64).cos()).collect();
        let set = PointSet::from_rows(&[r0.clone(), r1, r0.clone()]).unwrap();
        let out = plan.embed_set(&set).unwrap();
        assert_eq!((out.len(), out.dim()), (3, 4));
        assert_eq!(out.row(0), plan.apply(&r0).unwrap().as_slice());
        assert_eq!(out.row(0), out.row(2));
        assert!(matches!(
            PointSet::from_rows(&[vec![1.0; 32], vec![1.0; 31]]),
            Err(FjltError::Dimension(_))
        ));
        let wrong = PointSet::from_rows(&[vec![1.0; 16]]).unwrap();
        assert!(plan.embed_set(&wrong).is_err());
    }
}
