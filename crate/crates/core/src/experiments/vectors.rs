use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{FjltError, Result};
use crate::hadamard::l2_norm;
use crate::seed::{stream_rng, StreamLabel};

/// Unit test-vector families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    /// `d^{-1/2} (1, ..., 1)`: fixed by `D'` with probability `2^{-d}`.
    Ones,
    /// First `sqrt(d)` coordinates equal to `d^{-1/4}`, rest zero.
    FlatSqrt,
    /// First standard basis vector.
    E1,
    /// Seeded uniform direction on the sphere.
    RandomUnit,
}

impl VectorKind {
    pub const ALL: [VectorKind; 4] =
        [VectorKind::Ones, VectorKind::FlatSqrt, VectorKind::E1, VectorKind::RandomUnit];

    pub fn name(&self) -> &'static str {
        match self {
            VectorKind::Ones => "ones",
            VectorKind::FlatSqrt => "flat-sqrt",
            VectorKind::E1 => "e1",
            VectorKind::RandomUnit => "random-unit",
        }
    }
}

impl fmt::Display for VectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VectorKind {
    type Err = FjltError;

    fn from_str(s: &str) -> Result<Self> {
        VectorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FjltError::Argument(format!("unknown vector kind '{s}'")))
    }
}

pub fn adversarial_vector(kind: VectorKind, d: usize, seed: u64) -> Result<Vec<f64>> {
    if d == 0 || !d.is_power_of_two() {
        return Err(FjltError::Dimension(format!("d must be a power of two, got {d}")));
    }
    let v = match kind {
        VectorKind::Ones => vec![(d as f64).sqrt().recip(); d],
        VectorKind::FlatSqrt => {
            let p = d.trailing_zeros();
            if p % 2 != 0 {
                return Err(FjltError::Argument(format!(
                    "flat-sqrt needs an even power of two, got d={d}"
                )));
            }
            let root = 1usize << (p / 2);
            let mut v = vec![0.0; d];
            v[..root].fill((root as f64).sqrt().recip());
            v
        }
        VectorKind::E1 => {
            let mut v = vec![0.0; d];
            v[0] = 1.0;
            v
        }
        VectorKind::RandomUnit => random_unit(d, seed, 0),
    };
    Ok(v)
}

/// Seeded Gaussian direction, normalized; `index` selects among several.
pub fn random_unit(d: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, StreamLabel::Vector(index));
    loop {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = l2_norm(&v);
        if n > 0.0 {
            v.iter_mut().for_each(|x| *x /= n);
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::l4_norm;

    #[test]
    fn families() {
        assert_eq!(adversarial_vector(VectorKind::Ones, 4, 0).unwrap(), vec![0.5; 4]);

        let flat = adversarial_vector(VectorKind::FlatSqrt, 16, 0).unwrap();
        assert_eq!(&flat[..4], &[0.5; 4]);
        assert!(flat[4..].iter().all(|&x| x == 0.0));
        assert_eq!(l2_norm(&flat), 1.0);

        let e1 = adversarial_vector(VectorKind::E1, 64, 0).unwrap();
        assert_eq!(l4_norm(&e1), 1.0);

        let r = adversarial_vector(VectorKind::RandomUnit, 256, 3).unwrap();
        assert!((l2_norm(&r) - 1.0).abs() < 1e-14);
        assert_eq!(r, adversarial_vector(VectorKind::RandomUnit, 256, 3).unwrap());
        assert_ne!(r, adversarial_vector(VectorKind::RandomUnit, 256, 4).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            adversarial_vector(VectorKind::FlatSqrt, 32, 0),
            Err(FjltError::Argument(_))
        ));
        assert!(adversarial_vector(VectorKind::Ones, 12, 0).is_err());
        assert!("bogus".parse::<VectorKind>().is_err());
        for k in VectorKind::ALL {
            assert_eq!(k.name().parse::<VectorKind>().unwrap(), k);
        }
    }
}
