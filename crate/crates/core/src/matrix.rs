use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{inv_mod, mul_mod, q, to_mod_p, Q};

/// Primes below 2^62 used for modular rank estimates.
pub const MOD_PRIMES: [u64; 3] = [4611686018427387847, 4611686018427387817, 4611686018427387787];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Q>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("expected {rows}x{cols} entries")));
        }
        Ok(Matrix { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn column(v: &[Q]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| if r == c { self.get(r, c).is_one() } else { self.get(r, c).is_zero() })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *out.entry_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        Self::from_fn(nr, nc, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(row, c) * &f;
                    if !v.is_zero() {
                        *m.entry_mut(r, c) -= v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank modulo p, or None if some entry has a denominator divisible by p.
    pub fn rank_mod_p(&self, p: u64) -> Option<usize> {
        let mut m = Vec::with_capacity(self.data.len());
        for x in &self.data {
            m.push(to_mod_p(x, p)?);
        }
        Some(rank_mod_p_raw(&mut m, self.rows, self.cols, p))
    }

    /// Largest modular rank over a few primes; never exceeds the rational rank.
    pub fn modular_rank(&self) -> usize {
        MOD_PRIMES.iter().take(2).filter_map(|&p| self.rank_mod_p(p)).max().unwrap_or(0)
    }

    /// Exact rank over Q.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let full = self.rows.min(self.cols);
        if let Some(r) = self.rank_mod_p(MOD_PRIMES[0]) {
            if r == full {
                return r;
            }
        }
        let mut ints = self.integer_rows();
        bareiss_rank(&mut ints, self.cols)
    }

    /// Rows scaled to integer vectors with unit content.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let v: Vec<BigInt> = row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
                let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                if g.is_zero() || g.is_one() {
                    v
                } else {
                    v.into_iter().map(|x| x / &g).collect()
                }
            })
            .collect()
    }

    pub fn det(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Q::one());
        }
        let mut scale = Q::one();
        let mut ints = Vec::with_capacity(n);
        for r in 0..n {
            let row = self.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale /= Q::from_integer(l.clone());
            ints.push(row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect::<Vec<_>>());
        }
        Ok(Q::from_integer(bareiss_det(&mut ints)) * scale)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)]);
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Some X with self·X = rhs, free variables set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let n = self.cols;
        let aug = Matrix::hstack(&[self, rhs]);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Matrix::zeros(n, rhs.cols);
        for (i, &p) in piv.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, r.get(i, n + c).clone());
            }
        }
        Some(x)
    }

    /// Basis of the right kernel, as columns.
    pub fn nullspace(&self) -> Matrix {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut out = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.set(f, j, Q::one());
            for (i, &p) in piv.iter().enumerate() {
                out.set(p, j, -r.get(i, f).clone());
            }
        }
        out
    }

    pub fn max_abs(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

pub(crate) fn rank_mod_p_raw(m: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in 0..cols {
                m.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = inv_mod(m[rank * cols + col], p);
        for c in col..cols {
            m[rank * cols + c] = mul_mod(m[rank * cols + c], inv, p);
        }
        for r in rank + 1..rows {
            let f = m[r * cols + col];
            if f == 0 {
                continue;
            }
            for c in col..cols {
                let sub = mul_mod(f, m[rank * cols + c], p);
                m[r * cols + c] = (m[r * cols + c] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn bareiss_rank(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = (&m[k][k] * &m[r][c] - &m[r][k] * &m[k][c]) / &prev;
                m[r][c] = v;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * prev
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "matrix add shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "matrix sub shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        self.try_mul(o).expect("matrix mul shape mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn m(r: usize, c: usize, v: &[i64]) -> Matrix {
        Matrix::from_i64(r, c, v)
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert_eq!(a.rank(), 2);
        let k = a.nullspace();
        assert_eq!(k.cols(), 1);
        assert!((&a * &k).is_zero());
        assert_eq!(Matrix::zeros(0, 4).rank(), 0);
        assert_eq!(Matrix::zeros(3, 0).nullspace().shape(), (0, 0));
    }

    #[test]
    fn det_and_inverse() {
        let a = m(3, 3, &[2, 0, 1, 1, 3, 0, 0, 1, 4]);
        assert_eq!(a.det().unwrap(), q(25));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        let b = Matrix::from_fn(2, 2, |r, c| qf((r + 2 * c + 1) as i64, 3));
        assert_eq!(b.det().unwrap(), qf(1 * 4 - 3 * 2, 9));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert_eq!(Matrix::zeros(0, 0).det().unwrap(), q(1));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(2, 3, &[1, 1, 0, 0, 1, 1]);
        let b = m(2, 1, &[3, 5]);
        let x = a.solve(&b).unwrap();
        assert_eq!(&a * &x, b);
        let s = m(2, 2, &[1, 1, 1, 1]);
        assert!(s.solve(&m(2, 1, &[1, 2])).is_none());
    }

    #[test]
    fn rank_with_fractions_matches_rref() {
        let a = Matrix::from_fn(4, 5, |r, c| qf((r * c) as i64 + 1, (r + c) as i64 + 1));
        assert_eq!(a.rank(), a.rref().1.len());
        let low = Matrix::from_fn(4, 4, |r, c| q(((r + 1) * (c + 1)) as i64));
        assert_eq!(low.rank(), 1);
        assert_eq!(low.modular_rank(), 1);
    }
}
