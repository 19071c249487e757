//! Exact rational linear algebra.

mod matrix;
mod operators;

pub use matrix::{
    as_nonnegative_integer, bareiss_determinant, format_rational, int, parse_rational, rational,
    serde_rational, Rational, RationalMatrix,
};
pub use operators::{
    check_projection_algebra, laplacian, matrix_m, projection_p, projection_q, schur_lx,
    sum_of_p, sum_of_q,
};
