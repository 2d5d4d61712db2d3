//! Arbitrary-precision arithmetic shared by every other module: precision
//! bookkeeping, complex numbers over MPFR floats, and exact scalars.

mod complex;
mod precision;
mod scalar;

pub use complex::{float_to_decimal, lg_float, ApComplex, Exponent};
pub(crate) use complex::{mul_add_into, mul_into};
pub use precision::{digits_of_bits, digits_to_bits, PrecisionSpec, LOG10_2, LOG2_10, WORD_BITS};
pub use scalar::{parse_real, parse_scalar, ExactScalar};
