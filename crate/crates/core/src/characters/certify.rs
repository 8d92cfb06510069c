//! Exact and numeric triviality decisions.
//!
//! Exact relations are decided through multiplicities. For a list of factors
//! `(c, k)` the matrix `K = ⊗ Λ^k (M_u^c)` is diagonalisable with eigenvalues
//! the products `prod_f sigma_{K_f}(u)^{c_f}` over tuples of `k`-subsets, so
//! `mu = dim - rank(K - Id)` counts the tuples whose product is exactly 1.
//! Every such tuple has a ball containing 1 at any precision. Once exactly
//! `mu` tuple balls contain 1, those tuples are the exact solutions.

use std::collections::HashMap;

use crate::embeddings::{embedding_values, BallComplex, Dyadic, NumberField};
use crate::error::Result;
use crate::exactmath::{k_subsets, RationalMatrix};
use crate::exactmath::rational::binomial;
use crate::units::AlgebraicNumber;

/// `(exponent, exterior degree)` of one tensor factor.
pub type FactorSpec = (i64, usize);

/// Outcome of an exact relation solve for one generator.
#[derive(Clone, Debug)]
pub enum RelationOutcome {
    /// `solutions[t]` is true iff tuple `t` has product exactly 1.
    Solved {
        solutions: Vec<bool>,
        multiplicity: usize,
        bits: u64,
    },
    Undecided {
        multiplicity: usize,
        bits: u64,
    },
    /// Tensor dimension above the exact-mode cap.
    TooLarge { dimension: usize },
}

pub fn tensor_dimension(n: usize, factors: &[FactorSpec]) -> usize {
    factors
        .iter()
        .map(|&(_, k)| binomial(n, k) as usize)
        .fold(1usize, |a, b| a.saturating_mul(b))
}

/// Exact multiplicity of the eigenvalue 1 of `⊗ Λ^k (M^c)`.
pub fn multiplicity(m: &RationalMatrix, factors: &[FactorSpec]) -> Result<usize> {
    let mut k = RationalMatrix::identity(1);
    for &(c, deg) in factors {
        let p = m.pow(c)?;
        k = k.kronecker(&p.exterior_power(deg)?);
    }
    let dim = k.rows();
    Ok(dim - k.sub_identity()?.rank())
}

/// A disk wide enough to contain every value of interest.
pub fn indeterminate(prec: u64) -> BallComplex {
    BallComplex::new(Dyadic::zero(), Dyadic::zero(), Dyadic::pow2(64), prec)
}

/// Balls for every tuple in row-major (mixed radix) order over the factors'
/// lexicographic subset lists.
pub fn tuple_values(values: &[BallComplex], factors: &[FactorSpec]) -> Vec<BallComplex> {
    let n = values.len();
    let prec = values[0].precision_bits();
    let mut out = vec![BallComplex::one(prec)];
    for &(c, deg) in factors {
        let powered: Vec<BallComplex> = values
            .iter()
            .map(|v| v.powi(c).unwrap_or_else(|| indeterminate(prec)))
            .collect();
        let subset_vals: Vec<BallComplex> = k_subsets(n, deg)
            .iter()
            .map(|ks| {
                ks.iter()
                    .fold(BallComplex::one(prec), |acc, &i| acc.mul(&powered[i]))
            })
            .collect();
        let mut next = Vec::with_capacity(out.len() * subset_vals.len());
        for a in &out {
            for b in &subset_vals {
                next.push(a.mul(b));
            }
        }
        out = next;
    }
    out
}

/// Decides which tuples have product exactly 1 for one generator.
pub fn solve_relation(
    field: &NumberField,
    u: &AlgebraicNumber,
    m: &RationalMatrix,
    factors: &[FactorSpec],
    start_bits: u64,
    max_bits: u64,
    cap: usize,
) -> Result<RelationOutcome> {
    let n = field.degree();
    let dimension = tensor_dimension(n, factors);
    if dimension > cap {
        return Ok(RelationOutcome::TooLarge { dimension });
    }
    let mu = multiplicity(m, factors)?;
    if mu == 0 {
        return Ok(RelationOutcome::Solved {
            solutions: vec![false; dimension],
            multiplicity: 0,
            bits: 0,
        });
    }
    let mut bits = start_bits;
    loop {
        let f = field.at_precision(bits)?;
        let values = embedding_values(&f, u)?;
        let tuples = tuple_values(&values, factors);
        let hits: Vec<bool> = tuples.iter().map(BallComplex::contains_one).collect();
        let count = hits.iter().filter(|&&h| h).count();
        if count == mu {
            return Ok(RelationOutcome::Solved {
                solutions: hits,
                multiplicity: mu,
                bits,
            });
        }
        // fewer hits than mu would contradict ball containment
        if count < mu || bits >= max_bits {
            return Ok(RelationOutcome::Undecided {
                multiplicity: mu,
                bits,
            });
        }
        bits = (2 * bits).min(max_bits);
    }
}

/// Position of each `k`-subset (0-based indices) in lexicographic order.
pub fn subset_positions(n: usize, k: usize) -> HashMap<Vec<usize>, usize> {
    k_subsets(n, k)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect()
}

/// Numeric verdict for a single value ball family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericOutcome {
    Accepted { bits: u64 },
    Rejected { bits: u64 },
    Undecided { bits: u64 },
}

/// Escalates precision until `value(bits)` excludes 1 or contains it with
/// radius below `2^-cert_bits`.
pub fn decide_numeric(
    start_bits: u64,
    max_bits: u64,
    cert_bits: u64,
    mut value: impl FnMut(u64) -> Result<BallComplex>,
) -> Result<NumericOutcome> {
    let mut bits = start_bits;
    let threshold = Dyadic::pow2(-(cert_bits as i64));
    loop {
        let v = value(bits)?;
        if !v.contains_one() {
            return Ok(NumericOutcome::Rejected { bits });
        }
        if v.radius() < &threshold {
            return Ok(NumericOutcome::Accepted { bits });
        }
        if bits >= max_bits {
            return Ok(NumericOutcome::Undecided { bits });
        }
        bits = (2 * bits).min(max_bits);
    }
}

/// Isolates a value known to be a `d`-th root of unity: accepted once the
/// ball lies within `2/d <= sin(pi/d)` of 1, rejected once it excludes 1.
pub fn decide_root_of_unity(
    d: i64,
    start_bits: u64,
    max_bits: u64,
    mut value: impl FnMut(u64) -> Result<BallComplex>,
) -> Result<NumericOutcome> {
    if d == 1 {
        return Ok(NumericOutcome::Accepted { bits: start_bits });
    }
    let bound = Dyadic::from_rational(
        &crate::exactmath::ratio(2, d),
        64,
        crate::embeddings::Round::Floor,
    );
    let mut bits = start_bits;
    loop {
        let v = value(bits)?;
        if !v.contains_one() {
            return Ok(NumericOutcome::Rejected { bits });
        }
        if v.dist_upper(&Dyadic::one(), &Dyadic::zero()) < bound {
            return Ok(NumericOutcome::Accepted { bits });
        }
        if bits >= max_bits {
            return Ok(NumericOutcome::Undecided { bits });
        }
        bits = (2 * bits).min(max_bits);
    }
}
