//! Necessary-condition filter on `ln |value|` and `arg value`.
//!
//! Per-embedding logarithms and arguments are converted once to fixed point
//! at scale `2^-64`, so subset sums are exact integer additions and do not
//! depend on summation order. Each entry carries a rigorous error margin;
//! a subset is rejected only when a sum is farther from zero (or from
//! `2 pi Z`) than the tolerance plus the total margin.

use crate::embeddings::{embedding_values, pi, BallComplex, NumberField};
use crate::error::Result;
use crate::units::UnitSubgroup;

use super::par::{self, Parallelism};

use crate::cohomology::ThetaClass;

/// Precision of the values behind the screen tables.
pub const SCREEN_BITS: u64 = 128;

const SCALE: f64 = 18446744073709551616.0; // 2^64

fn fixed(v: f64) -> i128 {
    (v * SCALE) as i128
}

/// `2^-48 (1 + |v|)` covers f64 evaluation and conversion error.
fn float_margin(v: f64) -> i128 {
    fixed((1.0 + v.abs()) * 2f64.powi(-48)) + 2
}

/// Margin for the midpoint approximation of `ln|z|` and `arg z` when the
/// ball has relative radius `rr <= 1/2`: both move by at most `2 rr`.
fn ball_margin(z: &BallComplex) -> Option<i128> {
    let rr = z.relative_radius()?;
    if rr > 0.25 {
        return None;
    }
    Some(fixed(2.0 * rr) + 2)
}

#[derive(Clone, Debug)]
struct GeneratorTable {
    ln: Vec<i128>,
    arg: Vec<i128>,
    offset_ln: i128,
    offset_arg: i128,
    margin_ln: i128,
    margin_arg: i128,
}

/// Screening data for every generator.
#[derive(Clone, Debug)]
pub struct ScreenTables {
    n: usize,
    tables: Vec<GeneratorTable>,
    two_pi: i128,
    tolerance: i128,
}

impl ScreenTables {
    pub fn new(
        field: &NumberField,
        subgroup: &UnitSubgroup,
        theta: Option<&ThetaClass>,
        tolerance: f64,
    ) -> Result<Self> {
        let f = field.at_precision(SCREEN_BITS)?;
        let n = f.degree();
        let offsets = match theta {
            Some(th) if !th.is_zero() => Some(th.offsets(&f, subgroup)?),
            _ => None,
        };
        let two_pi: i128 = pi(SCREEN_BITS)
            .mid()
            .mul_pow2(65)
            .to_rational()
            .round()
            .to_integer()
            .try_into()
            .expect("2 pi fits in i128");
        let mut tables = Vec::new();
        for (j, u) in subgroup.generators().iter().enumerate() {
            let vals = embedding_values(&f, u)?;
            let mut t = GeneratorTable {
                ln: Vec::with_capacity(n),
                arg: Vec::with_capacity(n),
                offset_ln: 0,
                offset_arg: 0,
                margin_ln: 4,
                margin_arg: 4,
            };
            for v in &vals {
                let l = v.approx_ln_abs();
                let a = v.approx_arg();
                let bm = ball_margin(v).unwrap_or(i128::MAX / 1024);
                t.ln.push(fixed(l));
                t.arg.push(fixed(a));
                t.margin_ln = t.margin_ln.saturating_add(float_margin(l) + bm);
                t.margin_arg = t.margin_arg.saturating_add(float_margin(a) + bm);
            }
            if let Some(off) = &offsets {
                let re = off[j].re_ball();
                let im = off[j].im_ball();
                let (vr, vi) = (re.to_f64(), im.to_f64());
                t.offset_ln = fixed(vr);
                t.offset_arg = fixed(vi);
                t.margin_ln += float_margin(vr) + fixed(re.rad().to_f64()) + 2;
                t.margin_arg += float_margin(vi) + fixed(im.rad().to_f64()) + 2;
            }
            // reduction by k multiples of 2 pi adds at most k * 2^-63
            t.margin_arg += 4 * (n as i128 + 1 + (t.offset_arg.abs() / two_pi));
            tables.push(t);
        }
        Ok(Self {
            n,
            tables,
            two_pi,
            tolerance: fixed(tolerance),
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    fn check(&self, t: &GeneratorTable, ln: i128, arg: i128) -> bool {
        if ln.abs() > self.tolerance + t.margin_ln {
            return false;
        }
        let k = (arg + self.two_pi / 2).div_euclid(self.two_pi);
        let d = (arg - k * self.two_pi).abs();
        d <= self.tolerance + t.margin_arg
    }

    /// `Ok(())` if the subset passes for every generator, else the 1-based
    /// index of the first generator that rejects it.
    pub fn screen_mask(&self, mask: u64) -> std::result::Result<(), usize> {
        for (j, t) in self.tables.iter().enumerate() {
            let mut ln = t.offset_ln;
            let mut arg = t.offset_arg;
            for i in 0..self.n {
                if mask >> i & 1 == 1 {
                    ln += t.ln[i];
                    arg += t.arg[i];
                }
            }
            if !self.check(t, ln, arg) {
                return Err(j + 1);
            }
        }
        Ok(())
    }

    /// All masks passing the screen, ascending. Work is split by the high
    /// bits; each chunk walks its low bits in Gray-code order.
    pub fn survivors(&self, mode: Parallelism) -> Vec<u64> {
        let n = self.n;
        let low_bits = n.min(12);
        let chunks: Vec<u64> = (0..1u64 << (n - low_bits)).collect();
        let per_chunk = par::map(mode, &chunks, |&high| self.scan_chunk(high, low_bits));
        let mut out: Vec<u64> = per_chunk.into_iter().flatten().collect();
        out.sort_unstable();
        out
    }

    fn scan_chunk(&self, high: u64, low_bits: usize) -> Vec<u64> {
        let base = high << low_bits;
        let r = self.tables.len();
        let mut ln: Vec<i128> = Vec::with_capacity(r);
        let mut arg: Vec<i128> = Vec::with_capacity(r);
        for t in &self.tables {
            let (mut l, mut a) = (t.offset_ln, t.offset_arg);
            for i in low_bits..self.n {
                if base >> i & 1 == 1 {
                    l += t.ln[i];
                    a += t.arg[i];
                }
            }
            ln.push(l);
            arg.push(a);
        }
        let mut out = Vec::new();
        let mut gray = 0u64;
        for step in 0..1u64 << low_bits {
            if step > 0 {
                let bit = step.trailing_zeros() as usize;
                let on = gray >> bit & 1 == 0;
                gray ^= 1 << bit;
                for (j, t) in self.tables.iter().enumerate() {
                    if on {
                        ln[j] += t.ln[bit];
                        arg[j] += t.arg[bit];
                    } else {
                        ln[j] -= t.ln[bit];
                        arg[j] -= t.arg[bit];
                    }
                }
            }
            if self
                .tables
                .iter()
                .enumerate()
                .all(|(j, t)| self.check(t, ln[j], arg[j]))
            {
                out.push(base | gray);
            }
        }
        out
    }
}
