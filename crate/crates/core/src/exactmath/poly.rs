//! Dense univariate polynomials over Q.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::RationalMatrix;
use super::rational::{lcm_of_denominators, Rational};
use crate::error::{OtcError, Result};

/// Degree bound (of the larger operand) up to which resultants use the
/// Sylvester determinant; above it the subresultant PRS is used.
pub const SYLVESTER_DEGREE_LIMIT: usize = 12;

/// Coefficients in ascending degree. The zero polynomial has no coefficients
/// and no degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x - c`
    pub fn linear_root(c: Rational) -> Self {
        Self::new(vec![-c, Rational::one()])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[d_deg].recip();
        let mut rem = self.coeffs.clone();
        let Some(deg) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if deg < d_deg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); deg - d_deg + 1];
        for k in (0..=deg - d_deg).rev() {
            let c = &rem[k + d_deg] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(d_deg);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Integer polynomial with the same roots: the primitive part of
    /// `lcm(denominators) * self`, with positive leading coefficient.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = lcm_of_denominators(self.coeffs.iter());
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -1 } else { 1 };
        for c in &mut ints {
            *c = &*c / &content * sign;
        }
        ints
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => poly_gcd(self, &self.derivative()).degree() == Some(0),
        }
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &RationalPolynomial, b: &RationalPolynomial) -> RationalPolynomial {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y);
        x = y;
        // keep the remainder sequence monic to curb coefficient growth
        y = r.monic();
    }
    x.monic()
}

/// Resultant with the Sylvester convention
/// `Res(a, b) = lc(a)^deg(b) * prod_{a(r)=0} b(r)`, so that
/// `Res(x - c, f) = f(c)` and `Res(f, x - c) = (-1)^deg(f) f(c)`.
pub fn resultant(a: &RationalPolynomial, b: &RationalPolynomial) -> Result<Rational> {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Err(OtcError::ZeroPolynomial);
    };
    if da == 0 {
        return Ok(num_traits::pow(a.coeffs[0].clone(), db));
    }
    if db == 0 {
        return Ok(num_traits::pow(b.coeffs[0].clone(), da));
    }
    if da.max(db) <= SYLVESTER_DEGREE_LIMIT {
        sylvester_matrix(a, b).det_fraction_free()
    } else {
        Ok(subresultant_resultant(a, b))
    }
}

/// The `(deg a + deg b)`-square Sylvester matrix; rows of `a`'s coefficients
/// (highest degree first) followed by rows of `b`'s.
pub fn sylvester_matrix(a: &RationalPolynomial, b: &RationalPolynomial) -> RationalMatrix {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    let size = da + db;
    let mut m = RationalMatrix::zeros(size, size);
    for row in 0..db {
        for (k, c) in a.coeffs.iter().rev().enumerate() {
            m.set(row, row + k, c.clone());
        }
    }
    for row in 0..da {
        for (k, c) in b.coeffs.iter().rev().enumerate() {
            m.set(db + row, row + k, c.clone());
        }
    }
    m
}

/// Resultant via the subresultant pseudo-remainder sequence (integer
/// coefficients, exact divisions).
fn subresultant_resultant(a: &RationalPolynomial, b: &RationalPolynomial) -> Rational {
    // Work over Z: Res(ca*A, cb*B) = ca^db * cb^da * Res(A, B).
    let la = lcm_of_denominators(a.coeffs.iter());
    let lb = lcm_of_denominators(b.coeffs.iter());
    let ia: Vec<BigInt> = a
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(la.clone())).to_integer())
        .collect();
    let ib: Vec<BigInt> = b
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lb.clone())).to_integer())
        .collect();
    let da = ia.len() - 1;
    let db = ib.len() - 1;
    let res_int = int_subresultant(ia, ib);
    let scale = num_traits::pow(Rational::from_integer(la), db)
        * num_traits::pow(Rational::from_integer(lb), da);
    Rational::from_integer(res_int) / scale
}

fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut steps_left = a.len() - b.len() + 1;
    while r.len() > db && !r.is_empty() {
        steps_left -= 1;
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * bc;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    // prem is defined with exactly lc(b)^(deg a - deg b + 1)
    if steps_left > 0 {
        let f = num_traits::pow(lb.clone(), steps_left);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Collins/Brown subresultant algorithm for `Res(a, b)` over Z.
fn int_subresultant(a: Vec<BigInt>, b: Vec<BigInt>) -> BigInt {
    let (mut a, mut b) = (a, b);
    let mut sign = BigInt::one();
    if a.len() < b.len() {
        // Res(a, b) = (-1)^{deg a deg b} Res(b, a)
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = int_pseudo_rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let dr = r.len() - 1;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.into_iter().map(|c| c / &divisor).collect();
        g = a[db].clone();
        if delta == 0 {
            // h unchanged
        } else {
            let num = num_traits::pow(g.clone(), delta);
            let den = num_traits::pow(h.clone(), delta - 1);
            h = num / den;
        }
        if dr == 0 {
            // b is a nonzero constant
            let db_new = a.len() - 1;
            let bc = b[0].clone();
            let num = num_traits::pow(bc, db_new);
            let den = if db_new == 0 {
                BigInt::one()
            } else {
                num_traits::pow(h.clone(), db_new - 1)
            };
            return sign * (num / den);
        }
    }
}

/// Sturm sequence `f, f', -rem(f, f'), ...`.
pub fn sturm_sequence(f: &RationalPolynomial) -> Vec<RationalPolynomial> {
    let mut seq = vec![f.clone()];
    let d = f.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        // positive rescaling keeps signs intact and numbers small
        let lc = r.leading_coefficient().unwrap().abs();
        seq.push(r.neg().scale(&lc.recip()));
    }
    seq
}

fn sign_variations(seq: &[RationalPolynomial], x: &Rational) -> usize {
    let mut count = 0;
    let mut last: Option<Ordering> = None;
    for p in seq {
        let v = p.eval(x);
        let s = v.cmp(&Rational::zero());
        if s == Ordering::Equal {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of real roots of squarefree `f` in the open interval `(lo, hi)`.
pub fn sturm_count(f: &RationalPolynomial, lo: &Rational, hi: &Rational) -> Result<usize> {
    if f.is_zero() {
        return Err(OtcError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(OtcError::InvalidInterval);
    }
    if !f.is_squarefree() {
        return Err(OtcError::NotSquarefree);
    }
    if f.eval(lo).is_zero() || f.eval(hi).is_zero() {
        return Err(OtcError::RootOnEndpoint);
    }
    let seq = sturm_sequence(f);
    Ok(sturm_count_with(&seq, lo, hi))
}

pub(crate) fn sturm_count_with(seq: &[RationalPolynomial], lo: &Rational, hi: &Rational) -> usize {
    sign_variations(seq, lo) - sign_variations(seq, hi)
}

/// Cauchy bound `1 + max |a_i / a_n|`: every root has modulus below it.
pub fn cauchy_bound(f: &RationalPolynomial) -> Rational {
    let lc = f.leading_coefficient().expect("nonzero polynomial").abs();
    let n = f.degree().unwrap();
    let max = f.coeffs[..n]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{rat, ratio};

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(poly_gcd(&p(&[-2, 0, 0, 1]), &p(&[0, 0, 3])), p(&[1]));
        assert_eq!(poly_gcd(&p(&[2, 0, 2]), &p(&[2, 0, 2])), p(&[1, 0, 1]));
        assert!(poly_gcd(&RationalPolynomial::zero(), &RationalPolynomial::zero()).is_zero());
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(RationalPolynomial::zero().degree(), None);
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
    }

    #[test]
    fn resultant_examples() {
        let f = p(&[-2, 0, 0, 1]);
        let g = p(&[-1, 1]);
        // Res(x - 1, f) = f(1) = -1; the swapped order picks up (-1)^3.
        assert_eq!(resultant(&g, &f).unwrap(), rat(-1));
        assert_eq!(resultant(&f, &g).unwrap(), rat(1));
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-1, 1])).unwrap(), rat(0));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-1, 0, 1])).unwrap(), rat(4));
        assert_eq!(
            resultant(&RationalPolynomial::zero(), &g),
            Err(OtcError::ZeroPolynomial)
        );
    }

    #[test]
    fn subresultant_matches_sylvester() {
        let cases = [
            (vec![3, -1, 4, 1, -5, 9], vec![2, 6, -5, 3]),
            (vec![1, 0, 0, 0, 1], vec![-1, 2, 0, 1]),
            (vec![-2, 0, 0, 0, 0, 0, 0, 1], vec![1, 1, 1]),
            (vec![5, 3], vec![1, 2, 3, 4]),
            (vec![1, 2, 3], vec![1, 2, 3]),
        ];
        for (a, b) in cases {
            let (a, b) = (p(&a), p(&b));
            assert_eq!(
                subresultant_resultant(&a, &b),
                sylvester_matrix(&a, &b).det_fraction_free().unwrap(),
                "{a:?} {b:?}"
            );
        }
        let a = RationalPolynomial::new(vec![ratio(1, 2), ratio(-3, 4), rat(2)]);
        let b = RationalPolynomial::new(vec![ratio(2, 3), rat(1), ratio(5, 7), rat(1)]);
        assert_eq!(
            subresultant_resultant(&a, &b),
            sylvester_matrix(&a, &b).det_fraction_free().unwrap()
        );
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_count(&p(&[-2, 0, 0, 1]), &rat(-10), &rat(10)).unwrap(), 1);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &rat(-10), &rat(10)).unwrap(), 0);
        assert_eq!(sturm_count(&p(&[-1, -1, 0, 1]), &rat(1), &rat(2)).unwrap(), 1);
        assert_eq!(
            sturm_count(&p(&[-1, 1]), &rat(1), &rat(2)),
            Err(OtcError::RootOnEndpoint)
        );
        assert_eq!(
            sturm_count(&p(&[1, 2, 1]), &rat(-5), &rat(5)),
            Err(OtcError::NotSquarefree)
        );
        assert_eq!(
            sturm_count(&p(&[1, 0, 1]), &rat(1), &rat(1)),
            Err(OtcError::InvalidInterval)
        );
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, -1, 4, 1, -5, 9]);
        let b = RationalPolynomial::new(vec![ratio(1, 2), rat(0), rat(3)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn primitive_integer_form() {
        let f = RationalPolynomial::new(vec![ratio(-1, 2), rat(0), ratio(-3, 4)]);
        let ints = f.primitive_integer_coeffs();
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(0), BigInt::from(3)]);
    }
}
