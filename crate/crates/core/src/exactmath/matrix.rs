//! Dense rational matrices with fraction-free elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::RationalPolynomial;
use super::rational::{lcm_of_denominators, Rational};
use crate::error::{OtcError, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(OtcError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("rectangular integer rows")
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(OtcError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(OtcError::DimensionMismatch("subtraction".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn sub_identity(&self) -> Result<Self> {
        self.require_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) - Rational::one();
            m.set(i, i, v);
        }
        Ok(m)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(OtcError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Integer-scaled copy: each row multiplied by the lcm of its
    /// denominators. Returns the integer rows and the product of the scales.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = lcm_of_denominators(row.iter());
                scale *= &l;
                row.iter()
                    .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by single-step Bareiss elimination over the
    /// integers after clearing row denominators.
    pub fn det_fraction_free(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (mut a, scale) = self.integer_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(Rational::new(sign * &a[n - 1][n - 1], scale))
    }

    /// Exact rank over Q (fraction-free row echelon form with content
    /// reduction).
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot_row = a[rank].clone();
            let pv = pivot_row[col].clone();
            for row in a.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                let mut content = BigInt::zero();
                for j in col..self.cols {
                    row[j] = &row[j] * &pv - &f * &pivot_row[j];
                    content = content.gcd(&row[j]);
                }
                if !content.is_zero() && !content.is_one() {
                    for v in row[col..].iter_mut() {
                        *v = &*v / &content;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Inverse by Gauss-Jordan elimination over Q.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n)
                .find(|&i| !a.get(i, col).is_zero())
                .ok_or(OtcError::Singular)?;
            if p != col {
                for j in 0..n {
                    a.entries.swap(p * n + j, col * n + j);
                    inv.entries.swap(p * n + j, col * n + j);
                }
            }
            let pinv = a.get(col, col).recip();
            for j in 0..n {
                let v = a.get(col, j) * &pinv;
                a.set(col, j, v);
                let w = inv.get(col, j) * &pinv;
                inv.set(col, j, w);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j) - &f * a.get(col, j);
                    a.set(i, j, v);
                    let w = inv.get(i, j) - &f * inv.get(col, j);
                    inv.set(i, j, w);
                }
            }
        }
        Ok(inv)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, exponent: i64) -> Result<Self> {
        self.require_square()?;
        let mut base = if exponent < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Characteristic polynomial `det(x I - M)` by the Faddeev-LeVerrier
    /// recurrence.
    pub fn charpoly(&self) -> Result<RationalPolynomial> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m)?;
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1] * id.get(i, i);
                next.set(i, i, v);
            }
            m = next;
            let am = self.mul(&m)?;
            coeffs[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
        }
        Ok(RationalPolynomial::new(coeffs))
    }

    /// `k`-th exterior power: the `C(n,k)`-square matrix of `k x k` minors,
    /// rows and columns indexed by sorted `k`-subsets in lexicographic order.
    pub fn exterior_power(&self, k: usize) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        if k > n {
            return Err(OtcError::ExteriorRange { k, n });
        }
        let subsets = k_subsets(n, k);
        let d = subsets.len();
        let mut out = Self::zeros(d, d);
        for (r, rs) in subsets.iter().enumerate() {
            for (c, cs) in subsets.iter().enumerate() {
                out.set(r, c, self.minor(rs, cs)?);
            }
        }
        Ok(out)
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<Rational> {
        let sub = Self::from_rows(
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect(),
        )?;
        if rows.is_empty() {
            return Ok(Rational::one());
        }
        sub.det_fraction_free()
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.denom().is_one())
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.entries
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// All `k`-subsets of `0..n`, each sorted, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{rat, ratio};

    #[test]
    fn determinant_examples() {
        assert_eq!(RationalMatrix::identity(3).det_fraction_free().unwrap(), rat(1));
        let swap = RationalMatrix::from_integer_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(swap.det_fraction_free().unwrap(), rat(-1));
        // companion matrix of x^3 - 2
        let comp = RationalMatrix::from_integer_rows(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(comp.det_fraction_free().unwrap(), rat(2));
        let rect = RationalMatrix::zeros(2, 3);
        assert_eq!(
            rect.det_fraction_free(),
            Err(OtcError::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn rational_determinant() {
        let m = RationalMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 5)],
        ])
        .unwrap();
        assert_eq!(m.det_fraction_free().unwrap(), ratio(1, 10) - ratio(1, 12));
    }

    #[test]
    fn exterior_power_examples() {
        let m = RationalMatrix::from_integer_rows(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        assert_eq!(
            m.exterior_power(0).unwrap(),
            RationalMatrix::from_integer_rows(&[vec![1]])
        );
        assert_eq!(
            m.exterior_power(3).unwrap(),
            RationalMatrix::from_integer_rows(&[vec![30]])
        );
        assert_eq!(
            m.exterior_power(2).unwrap(),
            RationalMatrix::diagonal(&[rat(6), rat(10), rat(15)])
        );
        assert_eq!(m.exterior_power(1).unwrap(), m);
        assert_eq!(
            m.exterior_power(4),
            Err(OtcError::ExteriorRange { k: 4, n: 3 })
        );
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            k_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(k_subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(k_subsets(1, 1), vec![vec![0]]);
    }

    #[test]
    fn rank_and_inverse() {
        let m = RationalMatrix::from_integer_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.inverse(), Err(OtcError::Singular));
        let a = RationalMatrix::from_integer_rows(&[vec![2, 1], vec![7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert_eq!(a.pow(-2).unwrap().mul(&a.pow(2).unwrap()).unwrap(), RationalMatrix::identity(2));
        assert_eq!(RationalMatrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn charpoly_of_companion() {
        let comp = RationalMatrix::from_integer_rows(&[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(
            comp.charpoly().unwrap(),
            RationalPolynomial::from_integers(&[-2, 0, 0, 1])
        );
    }

    #[test]
    fn kronecker_eigen_products() {
        let a = RationalMatrix::diagonal(&[rat(2), rat(3)]);
        let b = RationalMatrix::diagonal(&[rat(5), rat(7)]);
        assert_eq!(
            a.kronecker(&b),
            RationalMatrix::diagonal(&[rat(10), rat(14), rat(15), rat(21)])
        );
    }
}
