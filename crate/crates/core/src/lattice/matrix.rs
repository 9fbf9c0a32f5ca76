use std::mem;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntegralVector, LatticeError};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LatticeError::DimensionMismatch { expected: cols, found: bad.len() });
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_vectors(rows: &[IntegralVector]) -> Result<Self, LatticeError> {
        Self::from_rows(rows.iter().map(|v| v.entries().to_vec()).collect())
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntegralVector {
        IntegralVector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vector(&self, v: &IntegralVector) -> Result<IntegralVector, LatticeError> {
        if v.dim() != self.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.rows, found: v.dim() });
        }
        Ok(IntegralVector::new(
            (0..self.cols)
                .map(|j| (0..self.rows).map(|i| &v.entries()[i] * &self[(i, j)]).sum())
                .collect(),
        ))
    }

    /// Matrix times column vector.
    pub fn mul_vector(&self, v: &IntegralVector) -> Result<IntegralVector, LatticeError> {
        if v.dim() != self.cols {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        Ok(IntegralVector::new(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.entries()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Absolute value of the determinant, by fraction-free (Bareiss) elimination.
pub fn abs_det(m: &IntMatrix) -> Result<BigInt, LatticeError> {
    if !m.is_square() {
        return Err(LatticeError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => a.swap_rows(i, k),
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(a[(n - 1, n - 1)].abs())
}

/// Diagonal of the Smith normal form: the elementary divisors `d_1 | d_2 | ...`,
/// followed by zeros up to `min(rows, cols)`.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let r = rows.min(cols);
    for t in 0..r {
        // move the smallest nonzero entry of the remaining block to (t, t)
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_smith(a, t, r);
            };
            a.swap_rows(t, bi);
            a.swap_cols(t, bj);
            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[(i, t)].div_floor(&pivot);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &a[(t, j)] * &q;
                        a[(i, j)] -= v;
                    }
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_floor(&pivot);
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &a[(i, t)] * &q;
                        a[(i, j)] -= v;
                    }
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pivot must divide every remaining entry
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[(i, j)].clone();
                        a[(t, j)] += v;
                    }
                }
                None => break,
            }
        }
    }
    finish_smith(a, r, r)
}

fn finish_smith(a: IntMatrix, filled: usize, r: usize) -> Vec<BigInt> {
    (0..r).map(|i| if i < filled { a[(i, i)].abs() } else { BigInt::zero() }).collect()
}

/// Unimodular `B` whose first column is `v` (which must be primitive).
/// The completion is deterministic: it is built by the extended-gcd column reduction
/// that sends `v` to the first standard basis vector.
pub fn unimodular_completion(v: &IntegralVector) -> Result<IntMatrix, LatticeError> {
    if v.content() != BigInt::one() {
        return Err(LatticeError::NotPrimitive(v.clone()));
    }
    let n = v.dim();
    let mut w: Vec<BigInt> = v.entries().to_vec();
    // U w = e_1 is reached by row operations; B = U^{-1} is accumulated as column operations.
    let mut b = IntMatrix::identity(n);
    for j in (1..n).rev() {
        if w[j].is_zero() {
            continue;
        }
        // combine rows 0 and j: [x; y] -> [g; 0]
        let (x, y) = (w[0].clone(), w[j].clone());
        let eg = x.extended_gcd(&y);
        let (g, s, t) = (eg.gcd, eg.x, eg.y);
        // E = [[s, t], [-y/g, x/g]] has det 1; E^{-1} = [[x/g, -t], [y/g, s]]
        let (xg, yg) = (&x / &g, &y / &g);
        for i in 0..n {
            let c0 = b[(i, 0)].clone();
            let cj = b[(i, j)].clone();
            b[(i, 0)] = &c0 * &xg + &cj * &yg;
            b[(i, j)] = -(&c0 * &t) + &cj * &s;
        }
        w[0] = g;
        w[j] = BigInt::zero();
    }
    if w[0].is_negative() {
        for i in 0..n {
            b[(i, 0)] = -mem::take(&mut b[(i, 0)]);
        }
        // keep det = 1 for n > 1
        if n > 1 {
            for i in 0..n {
                b[(i, 1)] = -mem::take(&mut b[(i, 1)]);
            }
        }
    }
    debug_assert_eq!(b.column(0), *v);
    Ok(b)
}

/// Rank over the rationals.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &pivot;
                for k in c..cols {
                    let v = &a[rank][k] * &f;
                    a[i][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `m x = b` over the rationals for square nonsingular `m`.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.rows;
    if !m.is_square() || b.len() != n {
        return None;
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pivot = a[c][c].clone();
        for k in c..=n {
            a[c][k] /= &pivot;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=n {
                    let v = &a[c][k] * &f;
                    a[i][k] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}
