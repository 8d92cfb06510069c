//! Midpoint-radius ball arithmetic over dyadic numbers.
//!
//! Every operation returns a ball that contains every exact result obtainable
//! from points of the input balls. Midpoints are rounded to the working
//! precision; radii are kept to [`RAD_BITS`] bits and always rounded up.

use std::sync::Mutex;

use crate::exactmath::Rational;

use super::dyadic::{Dyadic, Round};

/// Significant bits kept in radii.
pub const RAD_BITS: u64 = 30;

fn up(x: &Dyadic) -> Dyadic {
    x.round(RAD_BITS, Round::Ceil)
}

/// Rounds `exact` to `prec` bits; returns the rounded value and the exact
/// magnitude of the rounding error.
fn round_mid(exact: Dyadic, prec: u64) -> (Dyadic, Dyadic) {
    let r = exact.round(prec, Round::Nearest);
    let err = exact.sub(&r).abs();
    (r, err)
}

/// Real interval `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic,
    prec: u64,
}

impl RealBall {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u64) -> Self {
        debug_assert!(!rad.is_negative());
        Self {
            mid,
            rad: up(&rad),
            prec,
        }
    }

    pub fn exact(mid: Dyadic, prec: u64) -> Self {
        Self {
            mid,
            rad: Dyadic::zero(),
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u64) -> Self {
        Self::exact(Dyadic::from_i64(v), prec)
    }

    pub fn from_rational(r: &Rational, prec: u64) -> Self {
        if Dyadic::is_exact_rational(r) {
            return Self::exact(Dyadic::from_rational(r, prec, Round::Nearest), prec);
        }
        let lo = Dyadic::from_rational(r, prec + 4, Round::Floor);
        let hi = Dyadic::from_rational(r, prec + 4, Round::Ceil);
        Self::from_endpoints(&lo, &hi, prec)
    }

    /// Smallest ball (up to radius rounding) covering `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u64) -> Self {
        let mid = lo.add(hi).mul_pow2(-1);
        let rad = hi.sub(lo).mul_pow2(-1);
        Self::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u64) -> Self {
        self.prec = prec;
        self
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.mid.sub(x).abs() <= self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.lo().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi().is_negative()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.mid.sub(&other.mid).abs() <= self.rad.add(&other.rad)
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        up(&self.mid.abs().add(&self.rad))
    }

    fn work_prec(&self, other: &Self) -> u64 {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.work_prec(other);
        let (mid, err) = round_mid(self.mid.add(&other.mid), prec);
        Self::new(mid, self.rad.add(&other.rad).add(&err), prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.work_prec(other);
        let (mid, err) = round_mid(self.mid.mul(&other.mid), prec);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&err);
        Self::new(mid, rad, prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self {
            mid: self.mid.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let (mid, err) = round_mid(self.mid.mul_i64(k), self.prec);
        Self::new(mid, self.rad.mul_i64(k.abs()).add(&err), self.prec)
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let prec = self.work_prec(other);
        let bm = other.mid.abs();
        if bm <= other.rad {
            return None;
        }
        let (q, unit) = Dyadic::div_floor_with_unit(&self.mid, &other.mid, prec + 2);
        let (mid, err) = round_mid(q, prec);
        // |a/b - am/bm| <= (ra + |am/bm| rb) / (|bm| - rb)
        let qabs = mid.abs().add(&err).add(&unit);
        let num = self.rad.add(&qabs.mul(&other.rad));
        let den = bm.sub(&other.rad);
        let prop = Dyadic::div_up(&num, &den, RAD_BITS);
        Some(Self::new(mid, prop.add(&err).add(&unit), prec))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self.div(&Self::from_i64(k, self.prec))
            .expect("division by a nonzero integer")
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// Square root; requires a strictly positive ball.
    pub fn sqrt(&self) -> Option<Self> {
        let lo = self.lo();
        if !lo.is_positive() {
            return None;
        }
        let (r, unit) = self.mid.sqrt_floor_with_unit(self.prec + 2);
        let (mid, err) = round_mid(r, self.prec);
        // |sqrt(x) - sqrt(m)| <= rad / sqrt(lo)
        let prop = Dyadic::div_up(&self.rad, &lo.sqrt_down(RAD_BITS), RAD_BITS);
        Some(Self::new(mid, prop.add(&err).add(&unit), self.prec))
    }

    /// Natural logarithm of a strictly positive ball.
    pub fn ln(&self) -> Option<Self> {
        let lo = self.lo();
        if !lo.is_positive() {
            return None;
        }
        let prec = self.prec;
        let wp = prec + 32;
        // m = y * 2^k with y in [2/3, 4/3]
        let m = &self.mid;
        let mut k = m.top().unwrap() - 1;
        let mut y = m.mul_pow2(-k);
        if y.mul_i64(3) > Dyadic::from_i64(4) {
            y = y.mul_pow2(-1);
            k += 1;
        }
        let yb = Self::exact(y, wp);
        let one = Self::from_i64(1, wp);
        let z = yb.sub(&one).div(&yb.add(&one)).expect("y + 1 > 0");
        let ln_y = atanh_series(&z, wp, 2).mul_pow2(1);
        let mut out = ln_y;
        if k != 0 {
            out = out.add(&ln2(wp).mul_i64(k));
        }
        // input radius: |ln x - ln m| <= rad / lo
        let prop = Dyadic::div_up(&self.rad, &lo, RAD_BITS);
        let out = Self::new(out.mid, out.rad.add(&prop), wp);
        Some(out.round_to(prec))
    }

    pub fn exp(&self) -> Self {
        BallComplex::from_real(self).exp().re_ball()
    }

    /// Rounds the midpoint to `prec` bits, widening the radius.
    pub fn round_to(&self, prec: u64) -> Self {
        let (mid, err) = round_mid(self.mid.clone(), prec);
        Self::new(mid, self.rad.add(&err), prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// `"mid +/- rad"` in scientific notation.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (self.mid.to_sci_string(digits), self.rad.to_sci_string(3))
    }
}

/// `sum_{i>=0} z^(2i+1)/(2i+1)` for `|z| <= 2^-log2_inv_bound`, with the
/// truncation tail added to the radius.
fn atanh_series(z: &RealBall, wp: u64, log2_inv_bound: u64) -> RealBall {
    assert!(
        z.abs_upper() <= Dyadic::pow2(-(log2_inv_bound as i64)),
        "atanh argument out of range"
    );
    let terms = wp / (2 * log2_inv_bound) + 2;
    let z2 = z.sqr();
    let mut power = z.clone();
    let mut sum = z.clone();
    for i in 1..terms {
        power = power.mul(&z2);
        sum = sum.add(&power.div_i64(2 * i as i64 + 1));
    }
    // tail <= |z|^(2N+1) / (1 - z^2) <= 2 * 2^(-b(2N+1))
    let tail = Dyadic::pow2(1 - (log2_inv_bound * (2 * terms + 1)) as i64);
    RealBall::new(sum.mid.clone(), sum.rad.add(&tail), wp)
}

/// `sum_{i>=0} (-1)^i x^(2i+1)/(2i+1)` for `|x| <= 2^-b`.
fn atan_series(x: &RealBall, wp: u64, log2_inv_bound: u64) -> RealBall {
    let terms = wp / (2 * log2_inv_bound) + 2;
    let x2 = x.sqr();
    let mut power = x.clone();
    let mut sum = x.clone();
    for i in 1..terms {
        power = power.mul(&x2);
        let term = power.div_i64(2 * i as i64 + 1);
        sum = if i % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
    }
    let tail = Dyadic::pow2(-((log2_inv_bound * (2 * terms + 1)) as i64));
    RealBall::new(sum.mid.clone(), sum.rad.add(&tail), wp)
}

struct ConstantCache {
    ln2: Mutex<Option<RealBall>>,
    pi: Mutex<Option<RealBall>>,
}

static CONSTANTS: ConstantCache = ConstantCache {
    ln2: Mutex::new(None),
    pi: Mutex::new(None),
};

fn cached(slot: &Mutex<Option<RealBall>>, prec: u64, compute: impl Fn(u64) -> RealBall) -> RealBall {
    {
        let guard = slot.lock().unwrap();
        if let Some(c) = guard.as_ref() {
            if c.prec >= prec {
                return c.round_to(prec);
            }
        }
    }
    let value = compute(prec + 16);
    let mut guard = slot.lock().unwrap();
    if guard.as_ref().is_none_or(|c| c.prec < value.prec) {
        *guard = Some(value.clone());
    }
    value.round_to(prec)
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u64) -> RealBall {
    cached(&CONSTANTS.ln2, prec, |wp| {
        let third = RealBall::from_rational(&Rational::new(1.into(), 3.into()), wp + 8);
        atanh_series(&third, wp + 8, 1).mul_pow2(1).round_to(wp)
    })
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u64) -> RealBall {
    cached(&CONSTANTS.pi, prec, |wp| {
        let w = wp + 8;
        let a = atan_series(&RealBall::from_rational(&Rational::new(1.into(), 5.into()), w), w, 2);
        let b = atan_series(&RealBall::from_rational(&Rational::new(1.into(), 239.into()), w), w, 7);
        a.mul_i64(16).sub(&b.mul_i64(4)).round_to(wp)
    })
}

/// Complex disk `{z : |z - mid| <= rad}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallComplex {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    prec: u64,
}

impl BallComplex {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u64) -> Self {
        debug_assert!(!rad.is_negative());
        Self {
            re,
            im,
            rad: up(&rad),
            prec,
        }
    }

    pub fn exact(re: Dyadic, im: Dyadic, prec: u64) -> Self {
        Self {
            re,
            im,
            rad: Dyadic::zero(),
            prec,
        }
    }

    pub fn one(prec: u64) -> Self {
        Self::exact(Dyadic::one(), Dyadic::zero(), prec)
    }

    pub fn zero(prec: u64) -> Self {
        Self::exact(Dyadic::zero(), Dyadic::zero(), prec)
    }

    pub fn from_rational(r: &Rational, prec: u64) -> Self {
        Self::from_real(&RealBall::from_rational(r, prec))
    }

    pub fn from_rational_parts(re: &Rational, im: &Rational, prec: u64) -> Self {
        let a = RealBall::from_rational(re, prec);
        let b = RealBall::from_rational(im, prec);
        Self::new(
            a.mid.clone(),
            b.mid.clone(),
            a.rad.add(&b.rad),
            prec,
        )
    }

    pub fn from_real(x: &RealBall) -> Self {
        Self {
            re: x.mid.clone(),
            im: Dyadic::zero(),
            rad: x.rad.clone(),
            prec: x.prec,
        }
    }

    /// `x + i y` from two real balls.
    pub fn from_parts(x: &RealBall, y: &RealBall) -> Self {
        Self::new(
            x.mid.clone(),
            y.mid.clone(),
            x.rad.add(&y.rad),
            x.prec.max(y.prec),
        )
    }

    pub fn mid_re(&self) -> &Dyadic {
        &self.re
    }

    pub fn mid_im(&self) -> &Dyadic {
        &self.im
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision_bits(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u64) -> Self {
        self.prec = prec;
        self
    }

    /// Same midpoint, zero radius.
    pub fn midpoint(&self) -> Self {
        Self::exact(self.re.clone(), self.im.clone(), self.prec)
    }

    pub fn re_ball(&self) -> RealBall {
        RealBall::exact(self.re.clone(), self.prec).widen(&self.rad)
    }

    pub fn im_ball(&self) -> RealBall {
        RealBall::exact(self.im.clone(), self.prec).widen(&self.rad)
    }

    pub fn is_real_exact_axis(&self) -> bool {
        self.im.is_zero()
    }

    fn work_prec(&self, other: &Self) -> u64 {
        self.prec.max(other.prec)
    }

    fn mid_norm_sq(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Upper bound on `|mid|`.
    pub fn mid_abs_upper(&self) -> Dyadic {
        self.mid_norm_sq().sqrt_up(RAD_BITS)
    }

    /// Upper bound on `|z|` over the disk.
    pub fn abs_upper(&self) -> Dyadic {
        up(&self.mid_abs_upper().add(&self.rad))
    }

    /// Lower bound on `|z|` over the disk (may be zero).
    pub fn abs_lower(&self) -> Dyadic {
        let l = self.mid_norm_sq().sqrt_down(RAD_BITS).sub(&self.rad);
        if l.is_negative() {
            Dyadic::zero()
        } else {
            l
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.work_prec(other);
        let (re, e1) = round_mid(self.re.add(&other.re), prec);
        let (im, e2) = round_mid(self.im.add(&other.im), prec);
        Self::new(re, im, self.rad.add(&other.rad).add(&e1).add(&e2), prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.work_prec(other);
        let re_exact = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im_exact = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        let (re, e1) = round_mid(re_exact, prec);
        let (im, e2) = round_mid(im_exact, prec);
        let mut rad = e1.add(&e2);
        if !other.rad.is_zero() {
            rad = rad.add(&self.mid_abs_upper().mul(&other.rad));
        }
        if !self.rad.is_zero() {
            rad = rad
                .add(&other.mid_abs_upper().mul(&self.rad))
                .add(&self.rad.mul(&other.rad));
        }
        Self::new(re, im, rad, prec)
    }

    pub fn mul_real(&self, x: &RealBall) -> Self {
        self.mul(&Self::from_real(x))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self {
            re: self.re.mul_pow2(k),
            im: self.im.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// `None` when the disk contains zero.
    pub fn inv(&self) -> Option<Self> {
        let prec = self.prec;
        let s = self.mid_norm_sq();
        let low = s.sqrt_down(RAD_BITS);
        if low <= self.rad {
            return None;
        }
        let (re_q, u1) = Dyadic::div_floor_with_unit(&self.re, &s, prec + 2);
        let (im_q, u2) = Dyadic::div_floor_with_unit(&self.im.neg(), &s, prec + 2);
        let (re, e1) = round_mid(re_q, prec);
        let (im, e2) = round_mid(im_q, prec);
        // |1/(m+d) - 1/m| <= r / (|m| (|m| - r))
        let prop = Dyadic::div_up(&self.rad, &low.mul(&low.sub(&self.rad)), RAD_BITS);
        let rad = prop.add(&e1).add(&e2).add(&u1).add(&u2);
        Some(Self::new(re, im, rad, prec))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?.with_prec(self.work_prec(other))))
    }

    /// Integer power by repeated squaring; negative powers invert first.
    pub fn powi(&self, k: i64) -> Option<Self> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Some(acc)
    }

    pub fn abs_sq(&self) -> RealBall {
        let (mid, err) = round_mid(self.mid_norm_sq(), self.prec);
        let m = self.mid_abs_upper();
        let rad = m.mul(&self.rad).mul_pow2(1).add(&self.rad.mul(&self.rad)).add(&err);
        RealBall::new(mid, rad, self.prec)
    }

    pub fn contains(&self, re: &Dyadic, im: &Dyadic) -> bool {
        let dr = self.re.sub(re);
        let di = self.im.sub(im);
        dr.mul(&dr).add(&di.mul(&di)) <= self.rad.mul(&self.rad)
    }

    pub fn contains_one(&self) -> bool {
        self.contains(&Dyadic::one(), &Dyadic::zero())
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero(), &Dyadic::zero())
    }

    /// Upper bound on `sup |z - p|` over the disk.
    pub fn dist_upper(&self, re: &Dyadic, im: &Dyadic) -> Dyadic {
        let dr = self.re.sub(re);
        let di = self.im.sub(im);
        up(&dr.mul(&dr).add(&di.mul(&di)).sqrt_up(RAD_BITS).add(&self.rad))
    }

    pub fn disjoint(&self, other: &Self) -> bool {
        let dr = self.re.sub(&other.re);
        let di = self.im.sub(&other.im);
        let r = self.rad.add(&other.rad);
        dr.mul(&dr).add(&di.mul(&di)) > r.mul(&r)
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &Self) -> bool {
        if other.rad > self.rad {
            return false;
        }
        let dr = self.re.sub(&other.re);
        let di = self.im.sub(&other.im);
        let slack = self.rad.sub(&other.rad);
        dr.mul(&dr).add(&di.mul(&di)) <= slack.mul(&slack)
    }

    pub fn round_to(&self, prec: u64) -> Self {
        let (re, e1) = round_mid(self.re.clone(), prec);
        let (im, e2) = round_mid(self.im.clone(), prec);
        Self::new(re, im, self.rad.add(&e1).add(&e2), prec)
    }

    /// Complex exponential: argument halving, Taylor series, repeated
    /// squaring, all in ball arithmetic.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let bound = self.abs_upper();
        let j = match bound.top() {
            Some(t) => (t + 8).max(0) as u64,
            None => 0,
        };
        let wp = prec + j + 32;
        let w = self.mul_pow2(-(j as i64)).with_prec(wp);
        // |w| <= 2^-8: each term shrinks by at least 2^-8
        let terms = wp / 8 + 2;
        let mut term = Self::one(wp);
        let mut sum = Self::one(wp);
        for k in 1..terms {
            term = term.mul(&w);
            term = term.div_real_i64(k as i64);
            sum = sum.add(&term);
        }
        let tail = Dyadic::pow2(1 - 8 * terms as i64);
        let mut out = Self::new(sum.re, sum.im, sum.rad.add(&tail), wp);
        for _ in 0..j {
            out = out.sqr();
        }
        out.round_to(prec)
    }

    fn div_real_i64(&self, k: i64) -> Self {
        let re = RealBall::exact(self.re.clone(), self.prec).div_i64(k);
        let im = RealBall::exact(self.im.clone(), self.prec).div_i64(k);
        let rad = Dyadic::div_up(&self.rad, &Dyadic::from_i64(k.abs()), RAD_BITS);
        Self::new(re.mid, im.mid, re.rad.add(&im.rad).add(&rad), self.prec)
    }

    /// `(re, im)` midpoint strings with `digits` significant digits.
    pub fn to_decimal_pair(&self, digits: usize) -> [String; 2] {
        [self.re.to_sci_string(digits), self.im.to_sci_string(digits)]
    }

    /// Approximate `ln |mid|` in `f64`, valid for any magnitude.
    pub fn approx_ln_abs(&self) -> f64 {
        let top = [self.re.top(), self.im.top()].into_iter().flatten().max();
        let Some(top) = top else {
            return f64::NEG_INFINITY;
        };
        let x = self.re.mul_pow2(-top).to_f64();
        let y = self.im.mul_pow2(-top).to_f64();
        x.hypot(y).ln() + top as f64 * std::f64::consts::LN_2
    }

    /// Approximate argument of the midpoint in `(-pi, pi]`.
    pub fn approx_arg(&self) -> f64 {
        let top = [self.re.top(), self.im.top()].into_iter().flatten().max();
        let Some(top) = top else {
            return 0.0;
        };
        let x = self.re.mul_pow2(-top).to_f64();
        let y = self.im.mul_pow2(-top).to_f64();
        y.atan2(x)
    }

    /// Upper bound on `rad / |mid|`, or `None` if the disk is not bounded
    /// away from zero by a factor of two.
    pub fn relative_radius(&self) -> Option<f64> {
        let low = self.mid_norm_sq().sqrt_down(RAD_BITS);
        if low.is_zero() || self.rad.mul_pow2(1) > low {
            return None;
        }
        if self.rad.is_zero() {
            return Some(0.0);
        }
        let q = Dyadic::div_up(&self.rad, &low, RAD_BITS);
        Some(q.to_f64() * (1.0 + 1e-9))
    }
}

impl RealBall {
    fn widen(mut self, extra: &Dyadic) -> Self {
        self.rad = up(&self.rad.add(extra));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;

    fn approx(b: &RealBall) -> f64 {
        b.to_f64()
    }

    #[test]
    fn constants_are_tight() {
        let p = pi(200);
        assert!((approx(&p) - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.rad() < &Dyadic::pow2(-190));
        let l = ln2(300);
        assert!((approx(&l) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l.rad() < &Dyadic::pow2(-290));
        // pi digits 3.14159265358979323846264338327950288...
        let lo = Dyadic::from_rational(&ratio(314159265358979323, 100000000000000000), 128, Round::Floor);
        let hi = Dyadic::from_rational(&ratio(314159265358979324, 100000000000000000), 128, Round::Ceil);
        assert!(p.lo() > lo && p.hi() < hi);
    }

    #[test]
    fn ln_and_exp_invert() {
        let x = RealBall::from_rational(&ratio(7, 3), 256);
        let l = x.ln().unwrap();
        assert!((approx(&l) - (7.0f64 / 3.0).ln()).abs() < 1e-15);
        let back = l.exp();
        assert!(back.overlaps(&x));
        assert!(back.rad() < &Dyadic::pow2(-240));
        assert!(RealBall::from_i64(-1, 64).ln().is_none());
        let tiny = RealBall::from_rational(&ratio(1, 1_000_000_007), 128).ln().unwrap();
        assert!((approx(&tiny) + (1_000_000_007f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn exp_of_two_pi_i_is_one() {
        let prec = 300;
        let two_pi = pi(prec).mul_i64(2);
        let z = BallComplex::from_parts(&RealBall::from_i64(0, prec), &two_pi);
        let e = z.exp();
        assert!(e.contains_one());
        assert!(e.radius() < &Dyadic::pow2(-280));
    }

    #[test]
    fn complex_inverse_contains_true_value() {
        let z = BallComplex::from_rational_parts(&ratio(1, 3), &ratio(-2, 7), 128);
        let w = z.inv().unwrap();
        let prod = z.mul(&w);
        assert!(prod.contains_one());
        assert!(BallComplex::zero(64).inv().is_none());
    }

    #[test]
    fn sqrt_ball() {
        let two = RealBall::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        assert!(r.sqr().contains(&Dyadic::from_i64(2)));
        assert!((approx(&r) - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn division_contains_quotient() {
        let a = RealBall::from_rational(&ratio(22, 7), 100);
        let b = RealBall::from_rational(&ratio(-5, 3), 100);
        let q = a.div(&b).unwrap();
        let exact = ratio(22, 7) / ratio(-5, 3);
        let lo = Dyadic::from_rational(&exact, 200, Round::Floor);
        assert!(q.contains(&lo) || q.lo().to_rational() <= exact && exact <= q.hi().to_rational());
    }

    #[test]
    fn powers_and_abs_sq() {
        let z = BallComplex::from_rational_parts(&ratio(3, 5), &ratio(4, 5), 128);
        let n = z.abs_sq();
        assert!(n.contains(&Dyadic::one()));
        let z5 = z.powi(5).unwrap();
        let zm5 = z.powi(-5).unwrap();
        assert!(z5.mul(&zm5).contains_one());
    }
}
