//! Certified root isolation for integer polynomials.
//!
//! Real roots come from Sturm bisection on dyadic intervals and are refined
//! by Newton steps checked with exact sign evaluations. Complex roots come
//! from Aberth iteration followed by Newton polishing; each upper half-plane
//! candidate `z` is certified by the disk `|w - z| <= n |f(z)/f'(z)|`, which
//! always contains a root. When the `s` real intervals, the `t` upper disks
//! and their `t` mirror images are pairwise disjoint, each of these `n`
//! regions holds exactly one root.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{OtcError, Result};
use crate::exactmath::{sturm_sequence, Rational, RationalPolynomial};
use crate::exactmath::poly::sturm_count_with;

use super::ball::{BallComplex, RAD_BITS};
use super::dyadic::{Dyadic, Round};

/// Highest working precision tried before giving up on isolation.
pub const MAX_ISOLATION_BITS: u64 = 1 << 15;

/// Integer polynomial with ascending coefficients and exact dyadic evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Dyadic>,
}

impl IntPoly {
    pub fn new(coeffs: &[BigInt]) -> Self {
        Self {
            coeffs: coeffs.iter().cloned().map(Dyadic::from_bigint).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    fn eval_with_derivative(&self, x: &Dyadic) -> (Dyadic, Dyadic) {
        let mut f = Dyadic::zero();
        let mut d = Dyadic::zero();
        for c in self.coeffs.iter().rev() {
            d = d.mul(x).add(&f);
            f = f.mul(x).add(c);
        }
        (f, d)
    }

    /// Ball values of `f` and `f'` at an exact complex point.
    fn eval_ball(&self, z: &BallComplex) -> (BallComplex, BallComplex) {
        let prec = z.precision_bits();
        let mut f = BallComplex::zero(prec);
        let mut d = BallComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            d = d.mul(z).add(&f);
            f = f
                .mul(z)
                .add(&BallComplex::exact(c.clone(), Dyadic::zero(), prec));
        }
        (f, d)
    }

    fn eval_cx(&self, z: &Cx, prec: u64) -> (Cx, Cx) {
        let mut f = Cx::zero();
        let mut d = Cx::zero();
        for c in self.coeffs.iter().rev() {
            d = d.mul(z, prec).add(&f, prec);
            f = f.mul(z, prec).add(&Cx::real(c.clone()), prec);
        }
        (f, d)
    }

    /// `log2` bound on the modulus of every root (Fujiwara).
    fn root_radius_log2(&self) -> i64 {
        let n = self.degree();
        let lead = self.coeffs[n].top().unwrap();
        let mut best = i64::MIN;
        for i in 1..=n {
            if let Some(top) = self.coeffs[n - i].top() {
                let q = top - lead + 1;
                best = best.max(q.div_euclid(i as i64) + 1);
            }
        }
        if best == i64::MIN {
            0
        } else {
            best + 1
        }
    }
}

/// Complex dyadic midpoint without error tracking, for iterations.
#[derive(Clone, Debug)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn zero() -> Self {
        Self::real(Dyadic::zero())
    }

    fn real(re: Dyadic) -> Self {
        Self {
            re,
            im: Dyadic::zero(),
        }
    }

    fn add(&self, o: &Self, p: u64) -> Self {
        Self {
            re: self.re.add(&o.re).round(p, Round::Nearest),
            im: self.im.add(&o.im).round(p, Round::Nearest),
        }
    }

    fn sub(&self, o: &Self, p: u64) -> Self {
        Self {
            re: self.re.sub(&o.re).round(p, Round::Nearest),
            im: self.im.sub(&o.im).round(p, Round::Nearest),
        }
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        Self {
            re: self
                .re
                .mul(&o.re)
                .sub(&self.im.mul(&o.im))
                .round(p, Round::Nearest),
            im: self
                .re
                .mul(&o.im)
                .add(&self.im.mul(&o.re))
                .round(p, Round::Nearest),
        }
    }

    fn norm_sq(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    fn div(&self, o: &Self, p: u64) -> Option<Self> {
        let den = o.norm_sq();
        if den.is_zero() {
            return None;
        }
        let num_re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let num_im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Self {
            re: Dyadic::div_floor_with_unit(&num_re, &den, p).0.round(p, Round::Nearest),
            im: Dyadic::div_floor_with_unit(&num_im, &den, p).0.round(p, Round::Nearest),
        })
    }

    /// `log2` of the larger component magnitude, a cheap size estimate.
    fn top(&self) -> i64 {
        self.re.top().max(self.im.top()).unwrap_or(i64::MIN / 4)
    }
}

/// Power of two strictly larger than every real root's modulus.
fn real_bound(f: &IntPoly) -> Dyadic {
    Dyadic::pow2(f.root_radius_log2().max(1))
}

fn to_rational(x: &Dyadic) -> Rational {
    x.to_rational()
}

/// Isolating intervals `(lo, hi)` for the real roots of squarefree `f`,
/// ascending. Endpoints are never roots.
pub fn isolate_real(f: &RationalPolynomial, fi: &IntPoly) -> Vec<(Dyadic, Dyadic)> {
    let seq = sturm_sequence(f);
    let b = real_bound(fi);
    let mut out = Vec::new();
    let mut stack = vec![(b.neg(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sturm_count_with(&seq, &to_rational(&lo), &to_rational(&hi));
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = split_point(fi, &lo, &hi);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// A point strictly inside `(lo, hi)` where `f` does not vanish: the
/// midpoint, else `lo + w(1/2 - 2^-k)` for `k = 3, 4, ...`.
fn split_point(f: &IntPoly, lo: &Dyadic, hi: &Dyadic) -> Dyadic {
    let width = hi.sub(lo);
    let mid = lo.add(&width.mul_pow2(-1));
    let mut x = mid.clone();
    let mut k = 3;
    while f.eval(&x).is_zero() {
        x = mid.sub(&width.mul_pow2(-k));
        k += 1;
    }
    x
}

fn sign(x: &Dyadic) -> Ordering {
    x.sign()
}

/// Narrows a real isolating interval until its half-width is at most
/// `2^-prec * max(1, |root|)`.
pub fn refine_real(f: &IntPoly, lo: &Dyadic, hi: &Dyadic, prec: u64) -> (Dyadic, Dyadic) {
    let s_lo = sign(&f.eval(lo));
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let target_ok = |lo: &Dyadic, hi: &Dyadic| {
        let scale = lo.abs().max(hi.abs()).max(Dyadic::one());
        hi.sub(lo).mul_pow2(-1) <= scale.mul_pow2(-(prec as i64))
    };
    // coarse bisection to a relative width of 2^-24
    let mut guard = 0;
    while !target_ok(&lo, &hi) {
        let scale = lo.abs().max(hi.abs()).max(Dyadic::one());
        if hi.sub(&lo) <= scale.mul_pow2(-24) || guard > 4096 {
            break;
        }
        bisect(f, s_lo, &mut lo, &mut hi);
        guard += 1;
    }
    if target_ok(&lo, &hi) {
        return (lo, hi);
    }
    let mut x = lo.add(&hi).mul_pow2(-1);
    let mut cur = 24u64;
    for _ in 0..(2 * 64 + 64) {
        if target_ok(&lo, &hi) {
            break;
        }
        cur = (2 * cur).min(prec + 8);
        let (fx, dx) = f.eval_with_derivative(&x);
        let next = if dx.is_zero() {
            None
        } else {
            let step = Dyadic::div_floor_with_unit(&fx, &dx, cur + 8).0;
            Some(x.sub(&step).round(cur + 16, Round::Nearest))
        };
        match next {
            Some(nx) if nx > lo && nx < hi => {
                x = nx;
                let scale = x.abs().max(Dyadic::one());
                let eps = scale.mul_pow2(-(cur as i64)).round(8, Round::Ceil);
                let a = x.sub(&eps);
                let b = x.add(&eps);
                if a > lo && b < hi {
                    let sa = sign(&f.eval(&a));
                    let sb = sign(&f.eval(&b));
                    if sa == s_lo && sb != s_lo && sb != Ordering::Equal {
                        lo = a;
                        hi = b;
                        continue;
                    }
                }
                bisect(f, s_lo, &mut lo, &mut hi);
            }
            _ => {
                bisect(f, s_lo, &mut lo, &mut hi);
                x = lo.add(&hi).mul_pow2(-1);
            }
        }
    }
    while !target_ok(&lo, &hi) {
        bisect(f, s_lo, &mut lo, &mut hi);
    }
    (lo, hi)
}

fn bisect(f: &IntPoly, s_lo: Ordering, lo: &mut Dyadic, hi: &mut Dyadic) {
    let mid = lo.add(hi).mul_pow2(-1);
    let sm = sign(&f.eval(&mid));
    match sm {
        Ordering::Equal => {
            // exact rational root: collapse to a tiny bracket around it
            let w = hi.sub(lo).mul_pow2(-8);
            *lo = mid.sub(&w);
            *hi = mid.add(&w);
        }
        s if s == s_lo => *lo = mid,
        _ => *hi = mid,
    }
}

/// Aberth iteration for all `n` roots at working precision `p`.
fn aberth(f: &IntPoly, p: u64, max_iter: usize) -> Vec<Cx> {
    let n = f.degree();
    let r = f64::powi(2.0, f.root_radius_log2().clamp(-60, 60) as i32) * 0.5;
    let mut z: Vec<Cx> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Cx {
                re: Dyadic::from_f64(r * ang.cos()).round(p, Round::Nearest),
                im: Dyadic::from_f64(r * ang.sin()).round(p, Round::Nearest),
            }
        })
        .collect();
    let one = Cx::real(Dyadic::one());
    let stop = -((p / 2) as i64);
    for _ in 0..max_iter {
        let mut converged = true;
        for k in 0..n {
            let (fz, dz) = f.eval_cx(&z[k], p);
            if fz.re.is_zero() && fz.im.is_zero() {
                continue;
            }
            let Some(w) = fz.div(&dz, p) else {
                converged = false;
                z[k].re = z[k].re.add(&Dyadic::pow2(stop));
                continue;
            };
            let mut sum = Cx::zero();
            for j in 0..n {
                if j != k {
                    if let Some(inv) = one.div(&z[k].sub(&z[j], p), p) {
                        sum = sum.add(&inv, p);
                    }
                }
            }
            let den = one.sub(&w.mul(&sum, p), p);
            let step = w.div(&den, p).unwrap_or(w);
            if step.top() > stop + z[k].top().max(0) {
                converged = false;
            }
            z[k] = z[k].sub(&step, p);
        }
        if converged {
            break;
        }
    }
    z
}

/// Newton polishing of a single complex root up to working precision `wp`.
fn polish(f: &IntPoly, z: &Cx, start: u64, wp: u64) -> Cx {
    let mut z = z.clone();
    let mut cur = start.max(32);
    loop {
        cur = (2 * cur).min(wp);
        let (fz, dz) = f.eval_cx(&z, cur + 16);
        if let Some(step) = fz.div(&dz, cur + 16) {
            z = z.sub(&step, cur + 16);
        }
        if cur == wp {
            break;
        }
    }
    for _ in 0..2 {
        let (fz, dz) = f.eval_cx(&z, wp + 16);
        if let Some(step) = fz.div(&dz, wp + 16) {
            z = z.sub(&step, wp + 16);
        }
    }
    z
}

/// Inclusion disk around an exact point: contains at least one root.
fn inclusion_disk(f: &IntPoly, z: &Cx, wp: u64) -> Option<BallComplex> {
    let point = BallComplex::exact(z.re.clone(), z.im.clone(), wp);
    let (fz, dz) = f.eval_ball(&point);
    let low = dz.abs_lower();
    if !low.is_positive() {
        return None;
    }
    let num = fz.abs_upper().mul_i64(f.degree() as i64);
    let r = Dyadic::div_up(&num, &low, RAD_BITS);
    Some(BallComplex::new(z.re.clone(), z.im.clone(), r, wp))
}

/// Checks that the upper half-plane disks are disjoint from the real axis
/// and from each other.
fn upper_disks_isolated(disks: &[BallComplex]) -> bool {
    for (i, d) in disks.iter().enumerate() {
        if d.mid_im() <= d.radius() {
            return false;
        }
        for e in &disks[i + 1..] {
            if !d.disjoint(e) {
                return false;
            }
        }
    }
    true
}

fn relative_radius_ok(d: &BallComplex, prec: u64) -> bool {
    let scale = d.mid_abs_upper().max(Dyadic::one());
    d.radius() <= &scale.mul_pow2(-(prec as i64))
}

fn order_upper(disks: &mut [BallComplex]) {
    disks.sort_by(|a, b| {
        let re_overlap = a.mid_re().sub(b.mid_re()).abs() <= a.radius().add(b.radius());
        if re_overlap {
            a.mid_im().cmp(b.mid_im())
        } else {
            a.mid_re().cmp(b.mid_re())
        }
    });
}

/// Certified disks for the `t` roots with positive imaginary part, ordered
/// by real then imaginary part, each of relative radius `<= 2^-prec`.
pub fn isolate_upper(f: &IntPoly, t: usize, prec: u64) -> Result<Vec<BallComplex>> {
    if t == 0 {
        return Ok(Vec::new());
    }
    let n = f.degree();
    let mut p0 = 128u64;
    while p0 <= MAX_ISOLATION_BITS {
        let approx = aberth(f, p0, 200 + 40 * n);
        let mut cands = approx;
        cands.sort_by(|a, b| b.im.cmp(&a.im));
        cands.truncate(t);
        if cands.iter().all(|c| c.im.is_positive()) {
            let wp = prec.max(p0 / 2) + 32;
            let disks: Option<Vec<BallComplex>> = cands
                .iter()
                .map(|c| inclusion_disk(f, &polish(f, c, p0 / 2, wp), wp))
                .collect();
            if let Some(mut disks) = disks {
                if upper_disks_isolated(&disks) && disks.iter().all(|d| relative_radius_ok(d, prec)) {
                    order_upper(&mut disks);
                    return Ok(disks.into_iter().map(|d| d.with_prec(prec)).collect());
                }
            }
        }
        p0 *= 2;
    }
    Err(OtcError::RootIsolation(format!(
        "complex roots not certified below {MAX_ISOLATION_BITS} bits"
    )))
}

/// Refines certified upper disks to relative radius `2^-prec`, keeping their
/// order. The new disk for root `i` must miss every old disk `j != i`, which
/// pins it to the same root.
pub fn refine_upper(f: &IntPoly, old: &[BallComplex], prec: u64) -> Result<Vec<BallComplex>> {
    let mut wp = prec + 32;
    while wp <= MAX_ISOLATION_BITS + 64 {
        let disks: Option<Vec<BallComplex>> = old
            .iter()
            .map(|d| {
                let z = Cx {
                    re: d.mid_re().clone(),
                    im: d.mid_im().clone(),
                };
                let start = d.precision_bits().min(wp);
                inclusion_disk(f, &polish(f, &z, start, wp), wp)
            })
            .collect();
        if let Some(disks) = disks {
            let pinned = disks.iter().enumerate().all(|(i, d)| {
                old.iter()
                    .enumerate()
                    .all(|(j, o)| i == j || d.disjoint(o))
            });
            if pinned
                && upper_disks_isolated(&disks)
                && disks.iter().all(|d| relative_radius_ok(d, prec))
            {
                return Ok(disks.into_iter().map(|d| d.with_prec(prec)).collect());
            }
        }
        wp *= 2;
    }
    Err(OtcError::RootIsolation("refinement did not certify".into()))
}

/// Ball on the real axis covering `[lo, hi]`.
pub fn real_ball(lo: &Dyadic, hi: &Dyadic, prec: u64) -> BallComplex {
    let mid = lo.add(hi).mul_pow2(-1);
    let rad = hi.sub(lo).mul_pow2(-1);
    BallComplex::new(mid, Dyadic::zero(), rad, prec)
}

/// Exact sign of `f` at a rational point, used for cross-checks.
pub fn sign_at(f: &RationalPolynomial, x: &Rational) -> Ordering {
    let v = f.eval(x);
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
