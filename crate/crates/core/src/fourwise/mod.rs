//! GF(2^m) arithmetic and the 4-wise independent code matrix built on it.

mod code;
mod field;

pub use code::{field_width_for, min_dimension, CodeMatrix};
pub use field::{primitive_polynomial, FieldContext, FieldElement, MAX_WIDTH};
