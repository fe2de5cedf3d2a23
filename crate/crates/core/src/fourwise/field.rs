//! Arithmetic in GF(2^m), 1 <= m <= 16, over a fixed table of primitive
//! polynomials.

use crate::error::{FjltError, Result};

pub type FieldElement = u32;

pub const MAX_WIDTH: u32 = 16;

/// Primitive polynomials for m = 1..=16, bit i holding the coefficient of x^i.
const PRIMITIVE: [u32; 16] = [
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

pub fn primitive_polynomial(m: u32) -> Option<u32> {
    (1..=MAX_WIDTH).contains(&m).then(|| PRIMITIVE[m as usize - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldContext {
    m: u32,
    modulus: u32,
    /// Bit i is Tr(x^i); the trace of `a` is the parity of `a & trace_mask`.
    trace_mask: u32,
}

impl FieldContext {
    /// Context for width `m` using the built-in primitive polynomial.
    pub fn for_width(m: u32) -> Result<Self> {
        let modulus = primitive_polynomial(m).ok_or_else(|| {
            FjltError::Argument(format!("field width must be in 1..={MAX_WIDTH}, got {m}"))
        })?;
        Ok(Self::build(m, modulus))
    }

    /// Validates `modulus` against the built-in table.
    pub fn new(m: u32, modulus: u32) -> Result<Self> {
        let expected = Self::for_width(m)?;
        if expected.modulus != modulus {
            return Err(FjltError::Argument(format!(
                "modulus {modulus:#x} is not the built-in primitive polynomial for m={m} ({:#x})",
                expected.modulus
            )));
        }
        Ok(expected)
    }

    fn build(m: u32, modulus: u32) -> Self {
        let mut ctx = FieldContext { m, modulus, trace_mask: 0 };
        let mut mask = 0;
        for i in 0..m {
            mask |= ctx.trace_by_frobenius(1 << i) << i;
        }
        ctx.trace_mask = mask;
        ctx
    }

    pub fn width(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.m
    }

    /// Carry-less multiply followed by reduction modulo the field polynomial.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a < self.order() && b < self.order());
        let mut prod: u64 = 0;
        let (a, mut b) = (a as u64, b);
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        let m = self.m;
        let modulus = self.modulus as u64;
        for bit in (m..2 * m).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= modulus << (bit - m);
            }
        }
        prod as FieldElement
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn cube(&self, a: FieldElement) -> FieldElement {
        self.mul(self.square(a), a)
    }

    /// Absolute trace to GF(2).
    pub fn trace(&self, a: FieldElement) -> u32 {
        (a & self.trace_mask).count_ones() & 1
    }

    /// `a + a^2 + a^4 + ... + a^(2^(m-1))`, evaluated directly.
    fn trace_by_frobenius(&self, a: FieldElement) -> u32 {
        let mut acc = 0;
        let mut power = a;
        for _ in 0..self.m {
            acc ^= power;
            power = self.square(power);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// Bit vector `(Tr(x * 2^i))_i`, so that `Tr(a x) = parity(a & trace_vector(x))`.
    pub fn trace_vector(&self, x: FieldElement) -> u32 {
        (0..self.m).fold(0, |acc, i| acc | self.trace(self.mul(1 << i, x)) << i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_polynomials_are_primitive() {
        for m in 1..=MAX_WIDTH {
            let ctx = FieldContext::for_width(m).unwrap();
            assert_eq!(32 - ctx.modulus().leading_zeros() - 1, m);
            // multiplicative order of the generator x (or 1 when m = 1)
            let g = if m == 1 { 1 } else { 2 };
            let mut acc = g;
            let mut order = 1u32;
            while acc != 1 {
                acc = ctx.mul(acc, g);
                order += 1;
            }
            assert_eq!(order, (1 << m) - 1, "m={m}");
        }
    }

    #[test]
    fn constructor_validation() {
        assert!(FieldContext::new(3, 0xB).is_ok());
        assert!(FieldContext::new(3, 0xD).is_err());
        assert!(FieldContext::for_width(0).is_err());
        assert!(FieldContext::for_width(17).is_err());
    }

    #[test]
    fn identity_zero_and_hand_reduction() {
        let ctx = FieldContext::for_width(3).unwrap();
        for a in 0..8 {
            assert_eq!(ctx.mul(a, 1), a);
            assert_eq!(ctx.mul(0, a), 0);
        }
        // x * x^2 = x^3 = x + 1
        assert_eq!(ctx.mul(0b010, 0b100), 0b011);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in 1..=4 {
            let ctx = FieldContext::for_width(m).unwrap();
            let q = ctx.order();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    for c in 0..q {
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(ctx.mul(a, b ^ c), ctx.mul(a, b) ^ ctx.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_small_field() {
        let ctx = FieldContext::for_width(2).unwrap();
        let traces: Vec<u32> = (0..4).map(|a| ctx.trace(a)).collect();
        // a + a^2 by hand
        let direct: Vec<u32> = (0..4).map(|a| a ^ ctx.square(a)).collect();
        assert_eq!(traces, direct);
        assert_eq!(traces.iter().filter(|&&t| t == 0).count(), 2);
        assert_eq!(ctx.trace(0), 0);
    }

    #[test]
    fn trace_linearity_balance_frobenius() {
        for m in 1..=8 {
            let ctx = FieldContext::for_width(m).unwrap();
            let q = ctx.order();
            let ones = (0..q).filter(|&a| ctx.trace(a) == 1).count() as u32;
            assert_eq!(ones, q / 2);
            for a in 0..q {
                assert_eq!(ctx.trace(a), ctx.trace_by_frobenius(a));
                assert_eq!(ctx.trace(ctx.square(a)), ctx.trace(a));
                for b in 0..q {
                    assert_eq!(ctx.trace(a ^ b), ctx.trace(a) ^ ctx.trace(b));
                }
            }
        }
    }

    #[test]
    fn trace_vector_linearizes_products() {
        let ctx = FieldContext::for_width(5).unwrap();
        for x in 0..32 {
            let tv = ctx.trace_vector(x);
            for a in 0..32 {
                assert_eq!(ctx.trace(ctx.mul(a, x)), (a & tv).count_ones() & 1);
            }
        }
    }
}
