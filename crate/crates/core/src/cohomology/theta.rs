//! Classes `theta = sum_k a_k d ln v_k` and the characters they define.

use num_traits::{One, Zero};

use crate::embeddings::{pi, BallComplex, NumberField, RealBall};
use crate::error::{OtcError, Result};
use crate::exactmath::{format_rational, lcm_of_denominators, Rational};
use crate::units::{ball_solve, log_matrix, UnitSubgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaClass {
    /// Coefficients `a_k = re_k + i im_k` with rational parts.
    Rational(Vec<(Rational, Rational)>),
    /// `a = 2 pi i L^-1 m` for the log matrix `L` and an integer vector `m`,
    /// so that `exp(sum_k a_k ln sigma_k(u_j)) = exp(2 pi i m_j) = 1`.
    IntegralTwist(Vec<i64>),
}

impl ThetaClass {
    pub fn zero(s: usize) -> Self {
        Self::Rational(vec![(Rational::zero(), Rational::zero()); s])
    }

    pub fn from_real(coeffs: Vec<Rational>) -> Self {
        Self::Rational(coeffs.into_iter().map(|c| (c, Rational::zero())).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Rational(c) => c.len(),
            Self::IntegralTwist(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Rational(c) => Self::Rational(c.iter().map(|(a, b)| (-a, -b)).collect()),
            Self::IntegralTwist(m) => Self::IntegralTwist(m.iter().map(|x| -x).collect()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Rational(c) => c.iter().all(|(a, b)| a.is_zero() && b.is_zero()),
            Self::IntegralTwist(m) => m.iter().all(|x| *x == 0),
        }
    }

    /// Real coefficients when every `a_k` is a real rational.
    pub fn real_rational(&self) -> Option<Vec<Rational>> {
        match self {
            Self::Rational(c) if c.iter().all(|(_, b)| b.is_zero()) => {
                Some(c.iter().map(|(a, _)| a.clone()).collect())
            }
            _ => None,
        }
    }

    /// Whether the character is real-valued, so that conjugate index sets
    /// share their verdict.
    pub fn is_real(&self) -> bool {
        self.real_rational().is_some()
    }

    /// `a_k = c_k / d` with a common positive denominator `d`.
    pub fn integer_form(&self) -> Option<(Vec<i64>, i64)> {
        let coeffs = self.real_rational()?;
        let d = lcm_of_denominators(coeffs.iter());
        let d64: i64 = d.clone().try_into().ok()?;
        let c = coeffs
            .iter()
            .map(|a| (a * Rational::from_integer(d.clone())).to_integer().try_into().ok())
            .collect::<Option<Vec<i64>>>()?;
        Some((c, d64))
    }

    pub fn check_length(&self, s: usize) -> Result<()> {
        if self.len() != s {
            return Err(OtcError::ThetaLength { got: self.len(), s });
        }
        Ok(())
    }

    /// `alpha_j = sum_k a_k ln sigma_k(u_j)` for every generator, at the
    /// field's precision.
    pub fn offsets(&self, field: &NumberField, subgroup: &UnitSubgroup) -> Result<Vec<BallComplex>> {
        let logs = log_matrix(field, subgroup.generators())?;
        let prec = field.precision_bits();
        match self {
            Self::Rational(c) => Ok(logs
                .iter()
                .map(|row| {
                    let mut re = RealBall::from_i64(0, prec);
                    let mut im = RealBall::from_i64(0, prec);
                    for ((a, b), l) in c.iter().zip(row) {
                        if !a.is_zero() {
                            re = re.add(&RealBall::from_rational(a, prec).mul(l));
                        }
                        if !b.is_zero() {
                            im = im.add(&RealBall::from_rational(b, prec).mul(l));
                        }
                    }
                    BallComplex::from_parts(&re, &im)
                })
                .collect()),
            Self::IntegralTwist(m) => {
                let x = self.twist_solution(&logs, m, prec)?;
                let two_pi = pi(prec).mul_i64(2);
                Ok(logs
                    .iter()
                    .map(|row| {
                        let mut acc = RealBall::from_i64(0, prec);
                        for (l, xk) in row.iter().zip(&x) {
                            acc = acc.add(&l.mul(xk));
                        }
                        BallComplex::from_parts(&RealBall::from_i64(0, prec), &two_pi.mul(&acc))
                    })
                    .collect())
            }
        }
    }

    fn twist_solution(&self, logs: &[Vec<RealBall>], m: &[i64], prec: u64) -> Result<Vec<RealBall>> {
        let b: Vec<RealBall> = m.iter().map(|&v| RealBall::from_i64(v, prec)).collect();
        ball_solve(logs, &b)
            .ok_or_else(|| OtcError::NotCertified("log matrix not invertible at this precision".into()))
    }

    /// Coefficients `a_k` as balls, for reporting.
    pub fn coefficient_balls(&self, field: &NumberField, subgroup: &UnitSubgroup) -> Result<Vec<BallComplex>> {
        let prec = field.precision_bits();
        match self {
            Self::Rational(c) => Ok(c
                .iter()
                .map(|(a, b)| BallComplex::from_rational_parts(a, b, prec))
                .collect()),
            Self::IntegralTwist(m) => {
                let logs = log_matrix(field, subgroup.generators())?;
                let x = self.twist_solution(&logs, m, prec)?;
                let two_pi = pi(prec).mul_i64(2);
                Ok(x
                    .iter()
                    .map(|xk| BallComplex::from_parts(&RealBall::from_i64(0, prec), &two_pi.mul(xk)))
                    .collect())
            }
        }
    }

    /// Exact `[re, im]` strings for rational classes.
    pub fn exact_strings(&self) -> Option<Vec<[String; 2]>> {
        match self {
            Self::Rational(c) => Some(
                c.iter()
                    .map(|(a, b)| [format_rational(a), format_rational(b)])
                    .collect(),
            ),
            Self::IntegralTwist(_) => None,
        }
    }
}

/// The only possible Lee class, `a_k = 1/t` for every `k`.
pub fn lee_class(field: &NumberField) -> ThetaClass {
    let a = Rational::one() / Rational::from_integer(field.t().into());
    ThetaClass::from_real(vec![a; field.s()])
}

/// Lee class for a bare signature.
pub fn lee_class_for(s: usize, t: usize) -> ThetaClass {
    let a = Rational::one() / Rational::from_integer(t.into());
    ThetaClass::from_real(vec![a; s])
}
