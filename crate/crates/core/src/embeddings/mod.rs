//! Number fields given by a defining polynomial, with certified and
//! refinable embeddings in the canonical order: real roots ascending, then
//! upper half-plane roots ordered by real and imaginary part, then their
//! conjugates in the same order.

pub mod ball;
pub mod dyadic;
pub mod irreducible;
pub mod roots;

use num_bigint::BigInt;

use crate::error::{OtcError, Result};
use crate::exactmath::RationalPolynomial;
use crate::units::AlgebraicNumber;

pub use ball::{ln2, pi, BallComplex, RealBall};
pub use dyadic::{Dyadic, Round};
pub use irreducible::Irreducibility;

use roots::IntPoly;

/// Extra bits carried when evaluating elements at the root balls.
const EVAL_GUARD_BITS: u64 = 32;

#[derive(Clone, Debug)]
pub struct NumberField {
    defining_poly: RationalPolynomial,
    int_coeffs: Vec<BigInt>,
    int_poly: IntPoly,
    s: usize,
    t: usize,
    real_intervals: Vec<(Dyadic, Dyadic)>,
    upper: Vec<BallComplex>,
    roots: Vec<BallComplex>,
    precision: u64,
    irreducibility: Irreducibility,
}

impl NumberField {
    /// Monic defining polynomial.
    pub fn defining_poly(&self) -> &RationalPolynomial {
        &self.defining_poly
    }

    /// Primitive integer multiple of the defining polynomial.
    pub fn integer_coeffs(&self) -> &[BigInt] {
        &self.int_coeffs
    }

    pub fn degree(&self) -> usize {
        self.s + 2 * self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Complex dimension `s + t` of the associated manifold.
    pub fn m(&self) -> usize {
        self.s + self.t
    }

    pub fn precision_bits(&self) -> u64 {
        self.precision
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    /// All `n` root balls in canonical order.
    pub fn roots(&self) -> &[BallComplex] {
        &self.roots
    }

    /// Exact isolating intervals of the real roots.
    pub fn real_intervals(&self) -> &[(Dyadic, Dyadic)] {
        &self.real_intervals
    }

    /// Warnings that callers should surface.
    pub fn warnings(&self) -> Vec<String> {
        match self.irreducibility {
            Irreducibility::Verified => Vec::new(),
            Irreducibility::Unverified => vec![
                "irreducibility of the defining polynomial could not be verified; \
                 invariants are meaningless if it factors over Q"
                    .to_string(),
            ],
        }
    }

    /// Index of the conjugate embedding (1-based).
    pub fn conjugate_index(&self, i: usize) -> usize {
        let (s, t) = (self.s, self.t);
        if i <= s {
            i
        } else if i <= s + t {
            i + t
        } else {
            i - t
        }
    }

    /// Copy refined to at least `bits` of precision.
    pub fn at_precision(&self, bits: u64) -> Result<NumberField> {
        if bits <= self.precision {
            Ok(self.clone())
        } else {
            refine(self, bits - self.precision)
        }
    }

    fn assemble_roots(&mut self) {
        let prec = self.precision;
        let mut roots: Vec<BallComplex> = self
            .real_intervals
            .iter()
            .map(|(lo, hi)| roots::real_ball(lo, hi, prec))
            .collect();
        roots.extend(self.upper.iter().cloned());
        roots.extend(self.upper.iter().map(BallComplex::conj));
        self.roots = roots;
    }
}

/// Isolates and orders the roots of `f` to `target_precision` bits.
pub fn build_field(f: &RationalPolynomial, target_precision: u64) -> Result<NumberField> {
    let n = f.degree().ok_or(OtcError::ZeroPolynomial)?;
    if n < 3 {
        return Err(OtcError::DegreeTooSmall(n));
    }
    if !f.is_squarefree() {
        return Err(OtcError::NotSquarefree);
    }
    let monic = f.monic();
    let int_coeffs = monic.primitive_integer_coeffs();
    let int_poly = IntPoly::new(&int_coeffs);
    let brackets = roots::isolate_real(&monic, &int_poly);
    let s = brackets.len();
    let t = (n - s) / 2;
    if t == 0 {
        return Err(OtcError::NoComplexEmbeddings);
    }
    if s == 0 {
        return Err(OtcError::NoRealEmbeddings);
    }
    let prec = target_precision.max(16);
    let real_intervals = brackets
        .iter()
        .map(|(lo, hi)| roots::refine_real(&int_poly, lo, hi, prec))
        .collect();
    let upper = roots::isolate_upper(&int_poly, t, prec)?;
    let irreducibility = irreducible::check_irreducible(&int_coeffs);
    let mut field = NumberField {
        defining_poly: monic,
        int_coeffs,
        int_poly,
        s,
        t,
        real_intervals,
        upper,
        roots: Vec::new(),
        precision: prec,
        irreducibility,
    };
    field.assemble_roots();
    Ok(field)
}

/// Shrinks every root ball to relative radius `2^-(precision + extra_bits)`.
/// Ordering and pairing are preserved.
pub fn refine(field: &NumberField, extra_bits: u64) -> Result<NumberField> {
    if extra_bits == 0 {
        return Ok(field.clone());
    }
    let prec = field.precision + extra_bits;
    let real_intervals = field
        .real_intervals
        .iter()
        .map(|(lo, hi)| roots::refine_real(&field.int_poly, lo, hi, prec))
        .collect();
    let upper = roots::refine_upper(&field.int_poly, &field.upper, prec)?;
    let mut out = NumberField {
        real_intervals,
        upper,
        precision: prec,
        ..field.clone()
    };
    out.assemble_roots();
    Ok(out)
}

/// `sigma_i(u)` for a 1-based embedding index. Conjugate embeddings are the
/// mirror image of their partner, computed once.
pub fn eval_embedding(field: &NumberField, u: &AlgebraicNumber, i: usize) -> Result<BallComplex> {
    let n = field.degree();
    if i == 0 || i > n {
        return Err(OtcError::IndexOutOfRange { index: i, n });
    }
    if u.coeffs().len() != n {
        return Err(OtcError::CoordinateLength {
            got: u.coeffs().len(),
            n,
        });
    }
    if i > field.s + field.t {
        return Ok(horner(field, u, i - field.t).conj());
    }
    Ok(horner(field, u, i))
}

/// Values of `u` at all `n` embeddings in canonical order.
pub fn embedding_values(field: &NumberField, u: &AlgebraicNumber) -> Result<Vec<BallComplex>> {
    let (s, t) = (field.s, field.t);
    let mut out = Vec::with_capacity(field.degree());
    for i in 1..=s + t {
        out.push(eval_embedding(field, u, i)?);
    }
    for j in 0..t {
        let c = out[s + j].conj();
        out.push(c);
    }
    Ok(out)
}

fn horner(field: &NumberField, u: &AlgebraicNumber, i: usize) -> BallComplex {
    let wp = field.precision + EVAL_GUARD_BITS;
    let root = field.roots[i - 1].clone().with_prec(wp);
    let mut acc = BallComplex::zero(wp);
    for c in u.coeffs().iter().rev() {
        acc = acc.mul(&root).add(&BallComplex::from_rational(c, wp));
    }
    acc.with_prec(field.precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{parse_rational, ratio};
    use num_traits::Signed;

    fn field(c: &[i64], prec: u64) -> NumberField {
        build_field(&RationalPolynomial::from_integers(c), prec).unwrap()
    }

    #[test]
    fn signatures_of_examples() {
        let f = field(&[-2, 0, 0, 1], 64);
        assert_eq!((f.degree(), f.s(), f.t()), (3, 1, 1));
        let f = field(&[-2, 0, 0, 0, 0, 1], 64);
        assert_eq!((f.degree(), f.s(), f.t()), (5, 1, 2));
        let f = field(&[-1, -1, 0, 1], 64);
        assert_eq!((f.degree(), f.s(), f.t()), (3, 1, 1));
        assert_eq!(f.irreducibility(), Irreducibility::Verified);
    }

    #[test]
    fn rejects_unsuitable_polynomials() {
        let p = |c: &[i64]| RationalPolynomial::from_integers(c);
        assert_eq!(build_field(&p(&[-1, 0, 1]), 64).unwrap_err(), OtcError::DegreeTooSmall(2));
        assert_eq!(build_field(&p(&[0, 0, 1, 1]), 64).unwrap_err(), OtcError::NotSquarefree);
        assert_eq!(build_field(&p(&[1, -3, 0, 1]), 64).unwrap_err(), OtcError::NoComplexEmbeddings);
        assert_eq!(build_field(&p(&[1, 0, 0, 0, 1]), 64).unwrap_err(), OtcError::NoRealEmbeddings);
    }

    #[test]
    fn refined_real_root_pins_cube_root_of_two() {
        let f = refine(&field(&[-2, 0, 0, 1], 64), 64).unwrap();
        let r = f.roots()[0].re_ball();
        let digits = parse_rational("1.259921049894873164767210607278228350570251").unwrap();
        assert!(r.contains(&Dyadic::from_rational(&digits, 140, Round::Nearest)) || {
            // the decimal truncation itself may sit just outside a tight ball
            let gap = r.mid().to_rational() - &digits;
            gap.abs() < ratio(1, 1_000_000_000_000_000_000)
        });
        assert!(!r.contains(&Dyadic::from_rational(&ratio(126, 100), 64, Round::Nearest)));
        assert!(r.rad() <= &Dyadic::pow2(-127));
    }

    #[test]
    fn conjugate_pairing_is_exact() {
        let f = field(&[-2, 0, 0, 0, 0, 0, 0, 1], 96);
        let (s, t) = (f.s(), f.t());
        for j in 0..t {
            assert_eq!(f.roots()[s + t + j], f.roots()[s + j].conj());
            assert!(f.roots()[s + j].mid_im().is_positive());
        }
        for a in 0..f.degree() {
            for b in a + 1..f.degree() {
                assert!(f.roots()[a].disjoint(&f.roots()[b]));
            }
        }
    }

    #[test]
    fn embedding_of_simple_elements() {
        let f = field(&[-2, 0, 0, 1], 128);
        let one = AlgebraicNumber::from_integers(&[1, 0, 0]);
        let v = eval_embedding(&f, &one, 2).unwrap();
        assert!(v.contains_one());
        assert!(v.radius().is_zero());
        let u = AlgebraicNumber::from_integers(&[-1, 1, 0]);
        let v = eval_embedding(&f, &u, 1).unwrap();
        assert!((v.mid_re().to_f64() - (2f64.cbrt() - 1.0)).abs() < 1e-15);
        assert!(eval_embedding(&f, &u, 4).is_err());
    }
}
