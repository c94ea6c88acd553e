//! Exact base arithmetic: rationals, dense/sparse polynomials, resultants,
//! Newton power sums and fraction-free linear solving.

mod bpoly;
mod matrix;
mod poly;
mod ring;

pub use bpoly::BPoly;
pub use bpoly::monomial_string;
pub(crate) use bpoly::format_terms;
pub use matrix::{det_bareiss, ff_solve, vandermonde, Matrix, RatMatrix, Solution};
pub use poly::{Poly, UPoly};
pub use ring::{common_denominator, parse_rational, rat, ratio, Rational, Ring};
