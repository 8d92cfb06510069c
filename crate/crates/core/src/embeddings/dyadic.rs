//! Exact dyadic numbers `m * 2^e` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmath::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

/// `man * 2^exp`, kept with an odd mantissa (or zero with exponent 0) so that
/// equal values have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { man, exp }
        } else {
            Self {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    pub fn pow2(e: i64) -> Self {
        Self {
            man: BigInt::one(),
            exp: e,
        }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Self::new(BigInt::from(man) * sign, exp)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn sign(&self) -> Ordering {
        match self.man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -&self.man,
            exp: self.exp,
        }
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `t` with `2^(t-1) <= |x| < 2^t`; `None` for zero.
    pub fn top(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.man.bits() as i64 + self.exp)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Self::new(&self.man * k, self.exp)
    }

    /// Rounds to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u64, mode: Round) -> Self {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let man = match mode {
            Round::Floor => &self.man >> shift,
            Round::Ceil => -((-&self.man) >> shift),
            Round::Nearest => (&self.man + (BigInt::one() << (shift - 1))) >> shift,
        };
        Self::new(man, self.exp + shift as i64)
    }

    /// Floor quotient `a / b` with at least `prec` significant bits, and the
    /// unit of its last place (the exact quotient lies in `[q, q + unit)`).
    pub fn div_floor_with_unit(a: &Self, b: &Self, prec: u64) -> (Self, Self) {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let k = (prec as i64 + b.bits() as i64 - a.bits() as i64 + 2).max(0);
        let (mut num, mut den) = (&a.man << k as u64, b.man.clone());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let q = num.div_floor(&den);
        let e = a.exp - b.exp - k;
        (Self::new(q, e), Self::pow2(e))
    }

    /// Upper bound on `a / b` for `a >= 0`, `b > 0`, with `prec` bits.
    pub fn div_up(a: &Self, b: &Self, prec: u64) -> Self {
        let (q, unit) = Self::div_floor_with_unit(a, b, prec);
        q.add(&unit).round(prec, Round::Ceil)
    }

    /// Lower bound on `a / b` for `a >= 0`, `b > 0`.
    pub fn div_down(a: &Self, b: &Self, prec: u64) -> Self {
        Self::div_floor_with_unit(a, b, prec).0.round(prec, Round::Floor)
    }

    /// Floor square root of a nonnegative value with `prec` bits and the unit
    /// of its last place.
    pub fn sqrt_floor_with_unit(&self, prec: u64) -> (Self, Self) {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let want = 2 * prec as i64 + 2;
        let mut k = (want - self.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = &self.man << k as u64;
        let r = m.sqrt();
        let e = (self.exp - k) / 2;
        (Self::new(r, e), Self::pow2(e))
    }

    pub fn sqrt_up(&self, prec: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (r, unit) = self.sqrt_floor_with_unit(prec);
        r.add(&unit).round(prec, Round::Ceil)
    }

    pub fn sqrt_down(&self, prec: u64) -> Self {
        self.sqrt_floor_with_unit(prec).0.round(prec, Round::Floor)
    }

    /// Rounded conversion of a rational. Exact when the denominator is a
    /// power of two.
    pub fn from_rational(r: &Rational, prec: u64, mode: Round) -> Self {
        let den = r.denom();
        if (den & (den - BigInt::one())).is_zero() {
            let shift = den.bits() as i64 - 1;
            return Self::new(r.numer().clone(), -shift).round(prec.max(r.numer().bits()), mode);
        }
        let (q, unit) = Self::div_floor_with_unit(
            &Self::from_bigint(r.numer().clone()),
            &Self::from_bigint(den.clone()),
            prec + 2,
        );
        match mode {
            Round::Floor => q.round(prec, Round::Floor),
            Round::Ceil => q.add(&unit).round(prec, Round::Ceil),
            Round::Nearest => q.round(prec, Round::Nearest),
        }
    }

    pub fn is_exact_rational(r: &Rational) -> bool {
        let den = r.denom();
        (den & (den - BigInt::one())).is_zero()
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as u64)
        } else {
            Rational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish `f64`; saturates to infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        let (m, e) = self.to_f64_scaled();
        if m == 0.0 {
            return 0.0;
        }
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// `(m, e)` with `self ~= m * 2^e` and `0.5 <= |m| < 1` (relative error
    /// below `2^-52`).
    pub fn to_f64_scaled(&self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let bits = self.man.bits();
        let shift = bits.saturating_sub(60);
        let top = (&self.man >> shift).to_i64().expect("fits in 60 bits");
        let m = top as f64 / 2f64.powi((bits - shift) as i32);
        (m, self.exp + bits as i64)
    }

    /// Scientific notation with `digits` significant decimal digits, rounded
    /// to nearest. Deterministic for a given value.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let top = self.top().unwrap();
        let mut e10 = ((top - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        let upper = num_traits::pow(ten.clone(), digits);
        let abs = self.abs().to_rational();
        for _ in 0..4 {
            let scale = digits as i64 - 1 - e10;
            let scaled = if scale >= 0 {
                &abs * Rational::from_integer(num_traits::pow(ten.clone(), scale as usize))
            } else {
                &abs / Rational::from_integer(num_traits::pow(ten.clone(), (-scale) as usize))
            };
            let n = scaled.round().to_integer();
            if n >= upper {
                e10 += 1;
                continue;
            }
            if n < lower {
                e10 -= 1;
                continue;
            }
            let s = n.to_string();
            let sign = if self.is_negative() { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{e10}")
            } else {
                format!("{sign}{head}.{tail}e{e10}")
            };
        }
        unreachable!("decimal exponent search did not settle")
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.sign(), other.sign());
        if sa != sb || sa == Ordering::Equal {
            return sa.cmp(&sb);
        }
        let (ta, tb) = (self.top().unwrap(), other.top().unwrap());
        if ta != tb {
            let by_magnitude = ta.cmp(&tb);
            return if sa == Ordering::Greater {
                by_magnitude
            } else {
                by_magnitude.reverse()
            };
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        a.cmp(&b)
    }
}
