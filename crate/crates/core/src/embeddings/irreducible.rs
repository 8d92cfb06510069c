//! Irreducibility evidence from factorisation degrees modulo small primes.
//!
//! A factorisation over Q of degree split `d + (n - d)` reduces modulo every
//! good prime `p` to factors whose degrees sum to `d`. So if for some prime
//! the image is irreducible, or if no `d` in `1..n` is a subset sum of the
//! factor degrees for all the primes tried, `f` is irreducible over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducibility {
    Verified,
    Unverified,
}

const PRIMES_TRIED: usize = 40;

fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 2u64;
    while out.len() < count {
        if (2..c).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

type Fp = Vec<u64>;

fn trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut a = a.clone();
    trim(&mut a);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let k = a.len() - 1;
        let c = a[k] * inv % p;
        let shift = k - db;
        for (i, bi) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - c * bi % p) % p;
        }
        trim(&mut a);
    }
    a
}

fn mul_mod(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn div_exact(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut a = a.clone();
    trim(&mut a);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while a.len() > db {
        let k = a.len() - 1;
        let c = a[k] * inv % p;
        let shift = k - db;
        q[shift] = c;
        for (i, bi) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - c * bi % p) % p;
        }
        trim(&mut a);
    }
    q
}

fn derivative(a: &Fp, p: u64) -> Fp {
    let mut d: Fp = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| (i as u64 % p) * c % p)
        .collect();
    trim(&mut d);
    d
}

/// Degrees of the irreducible factors of squarefree `f` over `F_p`.
fn factor_degrees(f: &Fp, p: u64) -> Vec<usize> {
    let mut degrees = Vec::new();
    let mut g = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut i = 0;
    while g.len() > 1 {
        i += 1;
        if 2 * i > g.len() - 1 {
            degrees.push(g.len() - 1);
            break;
        }
        h = pow_poly(&h, p, &g, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let d = gcd(&g, &diff, p);
        let dd = d.len() - 1;
        if dd > 0 {
            for _ in 0..dd / i {
                degrees.push(i);
            }
            g = div_exact(&g, &d, p);
            h = rem(&h, &g, p);
        }
    }
    degrees.sort_unstable();
    degrees
}

fn pow_poly(base: &Fp, mut e: u64, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn reduce(coeffs: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut out: Fp = coeffs
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    trim(&mut out);
    out
}

/// Subset sums of `degrees` strictly between `0` and `n`, as a bitmask.
fn subset_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach[0] = false;
    reach[n] = false;
    reach
}

/// Irreducibility evidence for a primitive integer polynomial.
pub fn check_irreducible(coeffs: &[BigInt]) -> Irreducibility {
    let n = coeffs.len() - 1;
    let lead = &coeffs[n];
    let mut possible = vec![true; n + 1];
    possible[0] = false;
    possible[n] = false;
    for p in small_primes(PRIMES_TRIED) {
        if (lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(coeffs, p);
        let g = gcd(&fp, &derivative(&fp, p), p);
        if g.len() != 1 {
            continue;
        }
        let degrees = factor_degrees(&fp, p);
        let sums = subset_sums(&degrees, n);
        for (slot, ok) in possible.iter_mut().zip(sums) {
            *slot = *slot && ok;
        }
        if !possible.iter().any(|&b| b) {
            return Irreducibility::Verified;
        }
    }
    Irreducibility::Unverified
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn factor_degrees_mod_small_primes() {
        // x^3 - 2 mod 7: 2 is not a cube mod 7, so irreducible
        assert_eq!(factor_degrees(&reduce(&big(&[-2, 0, 0, 1]), 7), 7), vec![3]);
        // x^3 - 2 mod 5: one linear factor (x - 3) and a quadratic
        assert_eq!(factor_degrees(&reduce(&big(&[-2, 0, 0, 1]), 5), 5), vec![1, 2]);
    }

    #[test]
    fn classifies_examples() {
        assert_eq!(check_irreducible(&big(&[-2, 0, 0, 1])), Irreducibility::Verified);
        assert_eq!(check_irreducible(&big(&[-1, -1, 0, 1])), Irreducibility::Verified);
        assert_eq!(check_irreducible(&big(&[-2, 0, 0, 0, 0, 0, 0, 1])), Irreducibility::Verified);
        // (x^2 + 1)(x^2 - 2)
        assert_eq!(check_irreducible(&big(&[-2, 0, -1, 0, 1])), Irreducibility::Unverified);
    }

    #[test]
    fn swinnerton_dyer_style_quartic_is_never_proved() {
        // x^4 + 1 factors modulo every prime but is irreducible over Q
        assert_eq!(check_irreducible(&big(&[1, 0, 0, 0, 1])), Irreducibility::Unverified);
    }
}
