//! Exact arithmetic kernel: rationals, polynomials over Q, resultants,
//! Sturm sequences and fraction-free linear algebra.

pub mod matrix;
pub mod poly;
pub mod rational;

pub use matrix::{k_subsets, RationalMatrix};
pub use poly::{cauchy_bound, poly_gcd, resultant, sturm_count, sturm_sequence, RationalPolynomial};
pub use rational::{format_rational, lcm_of_denominators, parse_rational, rat, ratio, Rational};
