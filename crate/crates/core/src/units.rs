//! Elements of the order `Z[alpha]` and validated unit subgroups.

use num_traits::{One, Signed, Zero};

use crate::embeddings::{embedding_values, Dyadic, NumberField, RealBall};
use crate::error::{OtcError, Result};
use crate::exactmath::{
    format_rational, rat, resultant, Rational, RationalMatrix, RationalPolynomial,
};

/// Precision cap for sign decisions at the real embeddings.
const POSITIVITY_CAP_BITS: u64 = 1 << 14;

/// Default threshold below which `|det log_matrix|` is not accepted.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-9;

/// Element of `Q(alpha)` in the power basis `1, alpha, ..., alpha^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    coeffs: Vec<Rational>,
}

impl AlgebraicNumber {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn one(n: usize) -> Self {
        let mut c = vec![Rational::zero(); n];
        c[0] = Rational::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_polynomial(&self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.clone())
    }

    /// Reduces a polynomial modulo the defining polynomial.
    pub fn from_polynomial(p: &RationalPolynomial, field: &NumberField) -> Self {
        let n = field.degree();
        let r = p.rem(field.defining_poly());
        let mut c = r.coeffs().to_vec();
        c.resize(n, Rational::zero());
        Self::new(c)
    }

    pub fn mul(&self, other: &Self, field: &NumberField) -> Self {
        Self::from_polynomial(&self.as_polynomial().mul(&other.as_polynomial()), field)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

fn check_length(field: &NumberField, u: &AlgebraicNumber) -> Result<()> {
    if u.coeffs.len() != field.degree() {
        return Err(OtcError::CoordinateLength {
            got: u.coeffs.len(),
            n: field.degree(),
        });
    }
    Ok(())
}

/// Exact norm `prod_i sigma_i(u) = Res(f, g)` for monic `f` and `u = g(alpha)`.
pub fn norm(field: &NumberField, u: &AlgebraicNumber) -> Result<Rational> {
    check_length(field, u)?;
    if u.is_zero() {
        return Err(OtcError::ZeroElement);
    }
    let g = u.as_polynomial();
    if g.degree() == Some(0) {
        return Ok(g.coeff(0).pow(field.degree() as i32));
    }
    resultant(field.defining_poly(), &g)
}

/// Matrix of multiplication by `u`; column `j` holds the coordinates of
/// `u * alpha^j`.
pub fn multiplication_matrix(field: &NumberField, u: &AlgebraicNumber) -> Result<RationalMatrix> {
    check_length(field, u)?;
    let n = field.degree();
    let mut m = RationalMatrix::zeros(n, n);
    let mut column = u.as_polynomial();
    let x = RationalPolynomial::monomial(Rational::one(), 1);
    for j in 0..n {
        let reduced = column.rem(field.defining_poly());
        for i in 0..n {
            m.set(i, j, reduced.coeff(i));
        }
        column = reduced.mul(&x);
    }
    Ok(m)
}

/// Validated generators of a rank `s` subgroup of totally positive units.
#[derive(Clone, Debug)]
pub struct UnitSubgroup {
    generators: Vec<AlgebraicNumber>,
    matrices: Vec<RationalMatrix>,
    log_matrix: Vec<Vec<RealBall>>,
    log_det: RealBall,
    validated: bool,
}

impl UnitSubgroup {
    pub fn generators(&self) -> &[AlgebraicNumber] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Exact multiplication matrices of the generators.
    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }

    /// Entry `[j][k]` is `ln sigma_k(u_j)` for the real embeddings `k`.
    pub fn log_matrix(&self) -> &[Vec<RealBall>] {
        &self.log_matrix
    }

    pub fn log_det(&self) -> &RealBall {
        &self.log_det
    }

    pub fn validated(&self) -> bool {
        self.validated
    }
}

/// `ln sigma_k(u_j)` for `k <= s`, at the field's precision.
pub fn log_matrix(field: &NumberField, gens: &[AlgebraicNumber]) -> Result<Vec<Vec<RealBall>>> {
    let s = field.s();
    gens.iter()
        .map(|u| {
            let vals = embedding_values(field, u)?;
            vals[..s]
                .iter()
                .map(|v| {
                    v.re_ball().ln().ok_or_else(|| {
                        OtcError::NotCertified("real embedding not separated from zero".into())
                    })
                })
                .collect()
        })
        .collect()
}

/// Determinant of a square ball matrix by elimination with pivots that
/// exclude zero. `None` when no such pivot exists.
pub fn ball_det(rows: &[Vec<RealBall>]) -> Option<RealBall> {
    let n = rows.len();
    let prec = rows.first().and_then(|r| r.first()).map_or(64, RealBall::prec);
    let mut a: Vec<Vec<RealBall>> = rows.to_vec();
    let mut det = RealBall::from_i64(1, prec);
    for c in 0..n {
        let pivot = (c..n)
            .filter(|&r| !a[r][c].contains_zero())
            .max_by(|&x, &y| a[x][c].mid().abs().cmp(&a[y][c].mid().abs()))?;
        if pivot != c {
            a.swap(pivot, c);
            det = det.neg();
        }
        det = det.mul(&a[c][c]);
        for r in c + 1..n {
            let factor = a[r][c].div(&a[c][c])?;
            for k in c..n {
                let v = a[r][k].sub(&factor.mul(&a[c][k]));
                a[r][k] = v;
            }
        }
    }
    Some(det)
}

/// Solves `A x = b` for a square ball matrix.
pub fn ball_solve(rows: &[Vec<RealBall>], b: &[RealBall]) -> Option<Vec<RealBall>> {
    let n = rows.len();
    let mut a: Vec<Vec<RealBall>> = rows
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n)
            .filter(|&r| !a[r][c].contains_zero())
            .max_by(|&x, &y| a[x][c].mid().abs().cmp(&a[y][c].mid().abs()))?;
        a.swap(pivot, c);
        for r in 0..n {
            if r == c {
                continue;
            }
            let factor = a[r][c].div(&a[c][c])?;
            for k in c..=n {
                let v = a[r][k].sub(&factor.mul(&a[c][k]));
                a[r][k] = v;
            }
        }
    }
    (0..n).map(|i| a[i][n].div(&a[i][i])).collect()
}

fn decide_positive(field: &NumberField, u: &AlgebraicNumber, k: usize) -> Result<bool> {
    let mut f = field.clone();
    loop {
        let v = crate::embeddings::eval_embedding(&f, u, k)?.re_ball();
        if v.is_positive() {
            return Ok(true);
        }
        if v.is_negative() {
            return Ok(false);
        }
        if f.precision_bits() >= POSITIVITY_CAP_BITS {
            return Err(OtcError::NotCertified(format!(
                "sign of embedding {k} not decided at {} bits",
                f.precision_bits()
            )));
        }
        f = f.at_precision(2 * f.precision_bits())?;
    }
}

/// Checks integrality, norm `+1`, positivity at the real embeddings, rank
/// `s` and numerical nonsingularity of the log matrix.
pub fn validate_subgroup(
    field: &NumberField,
    gens: &[AlgebraicNumber],
    tolerance: f64,
) -> Result<UnitSubgroup> {
    if gens.is_empty() {
        return Err(OtcError::InvalidInput("no unit generators given".into()));
    }
    let mut matrices = Vec::with_capacity(gens.len());
    for (j, u) in gens.iter().enumerate() {
        check_length(field, u)?;
        if u.is_zero() {
            return Err(OtcError::ZeroElement);
        }
        let m = multiplication_matrix(field, u)?;
        let cp = m.charpoly()?;
        if !cp.coeffs().iter().all(crate::exactmath::rational::is_integer) {
            return Err(OtcError::NonUnit {
                generator: j + 1,
                reason: "not an algebraic integer".into(),
            });
        }
        let nu = norm(field, u)?;
        if nu.abs() != Rational::one() {
            return Err(OtcError::NonUnit {
                generator: j + 1,
                reason: format!("norm {} is not ±1", format_rational(&nu)),
            });
        }
        if nu.is_negative() {
            return Err(OtcError::NonUnit {
                generator: j + 1,
                reason: "norm −1 is incompatible with total positivity".into(),
            });
        }
        matrices.push(m);
    }
    for (j, u) in gens.iter().enumerate() {
        for k in 1..=field.s() {
            if !decide_positive(field, u, k)? {
                return Err(OtcError::NegativeEmbedding {
                    generator: j + 1,
                    embedding: k,
                });
            }
        }
    }
    if gens.len() != field.s() {
        return Err(OtcError::NotCertified(format!(
            "rank {} ≠ s={}",
            gens.len(),
            field.s()
        )));
    }
    let tol = Dyadic::from_f64(tolerance.abs());
    let mut f = field.clone();
    for round in 0..3 {
        if round > 0 {
            f = f.at_precision(f.precision_bits() + 64)?;
        }
        let logs = log_matrix(&f, gens)?;
        if let Some(det) = ball_det(&logs) {
            let low = det.mid().abs().sub(det.rad());
            if low > tol {
                return Ok(UnitSubgroup {
                    generators: gens.to_vec(),
                    matrices,
                    log_matrix: log_matrix(field, gens)?,
                    log_det: det,
                    validated: true,
                });
            }
        }
    }
    Err(OtcError::NotCertified(format!(
        "|det log_matrix| not above tolerance {tolerance:e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::build_field;
    use crate::exactmath::ratio;

    fn field(c: &[i64]) -> NumberField {
        build_field(&RationalPolynomial::from_integers(c), 128).unwrap()
    }

    #[test]
    fn norms_of_examples() {
        let f = field(&[-2, 0, 0, 1]);
        assert_eq!(norm(&f, &AlgebraicNumber::from_integers(&[-1, 1, 0])).unwrap(), rat(1));
        assert_eq!(norm(&f, &AlgebraicNumber::from_integers(&[1, 0, 0])).unwrap(), rat(1));
        assert_eq!(norm(&f, &AlgebraicNumber::from_integers(&[0, 1, 0])).unwrap(), rat(2));
        let g = field(&[-1, -1, 0, 1]);
        assert_eq!(norm(&g, &AlgebraicNumber::from_integers(&[0, 1, 0])).unwrap(), rat(1));
        assert_eq!(
            norm(&f, &AlgebraicNumber::from_integers(&[0, 0, 0])).unwrap_err(),
            OtcError::ZeroElement
        );
    }

    #[test]
    fn multiplication_by_alpha_is_companion() {
        let f = field(&[-2, 0, 0, 1]);
        let m = multiplication_matrix(&f, &AlgebraicNumber::from_integers(&[0, 1, 0])).unwrap();
        let expect = RationalMatrix::from_integer_rows(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(m, expect);
        let u = AlgebraicNumber::from_integers(&[-1, 1, 0]);
        let mu = multiplication_matrix(&f, &u).unwrap();
        assert_eq!(mu.det_fraction_free().unwrap(), rat(1));
        let one = multiplication_matrix(&f, &AlgebraicNumber::one(3)).unwrap();
        assert_eq!(one, RationalMatrix::identity(3));
    }

    #[test]
    fn validates_example_subgroups() {
        let f = field(&[-2, 0, 0, 1]);
        let u = validate_subgroup(&f, &[AlgebraicNumber::from_integers(&[-1, 1, 0])], 1e-9).unwrap();
        let l = u.log_matrix()[0][0].to_f64();
        assert!((l - (2f64.cbrt() - 1.0).ln()).abs() < 1e-12);
        let err = validate_subgroup(&f, &[AlgebraicNumber::one(3)], 1e-9).unwrap_err();
        assert!(matches!(err, OtcError::NotCertified(_)));
        let g = field(&[-1, -1, 0, 1]);
        assert!(validate_subgroup(&g, &[AlgebraicNumber::from_integers(&[0, 1, 0])], 1e-9).is_ok());
    }

    #[test]
    fn rejects_bad_generators() {
        let f = field(&[-2, 0, 0, 1]);
        let alpha = AlgebraicNumber::from_integers(&[0, 1, 0]);
        assert!(matches!(
            validate_subgroup(&f, &[alpha], 1e-9),
            Err(OtcError::NonUnit { .. })
        ));
        // 1 - cbrt2 has norm -1
        let v = AlgebraicNumber::from_integers(&[1, -1, 0]);
        assert!(matches!(validate_subgroup(&f, &[v], 1e-9), Err(OtcError::NonUnit { .. })));
        let half = AlgebraicNumber::new(vec![ratio(1, 2), rat(0), rat(0)]);
        assert!(matches!(validate_subgroup(&f, &[half], 1e-9), Err(OtcError::NonUnit { .. })));
    }
}
