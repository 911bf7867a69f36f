//! Dense matrices over a [`Field`], with exact elimination.
//!
//! Rank over the rationals goes through fraction-free (Bareiss) elimination
//! on integer rows; everything that needs explicit bases (kernels, column
//! spaces, solving) uses reduced row echelon form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<FieldElement>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Matrix product, `None` on inner-dimension mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Option<Matrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return None;
        }
        Some(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &FieldElement) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let cols = self.cols + rhs.cols;
        let rows = (0..self.rows)
            .map(|r| self.row(r).iter().chain(rhs.row(r)).cloned().collect())
            .collect();
        Matrix::from_rows(self.field, cols, rows)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank. Over the rationals this runs fraction-free elimination on the
    /// integer matrix obtained by clearing row denominators.
    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rational => bareiss_rank(self.integer_rows_scaled()),
            Field::Prime(_) => self.rref().1.len(),
        }
    }

    /// Rows scaled by the lcm of their denominators (same row space).
    fn integer_rows_scaled(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(&x.as_fraction().1));
                row.iter()
                    .map(|x| {
                        let (n, d) = x.as_fraction();
                        n * (&lcm / d)
                    })
                    .collect()
            })
            .collect()
    }

    /// Integer entries, if every entry is an integer (rational field only).
    pub fn integer_entries(&self) -> Option<Vec<Vec<BigInt>>> {
        if self.field != Field::Rational {
            return None;
        }
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| {
                        let (n, d) = x.as_fraction();
                        d.is_one().then_some(n)
                    })
                    .collect()
            })
            .collect()
    }

    /// Basis of the null space, as the columns of a `cols × nullity` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                basis.set(p, k, -r.get(i, f));
            }
        }
        basis
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn column_space(&self) -> Matrix {
        let (_, pivots) = self.rref();
        let rows = (0..self.rows)
            .map(|r| pivots.iter().map(|&c| self.get(r, c).clone()).collect())
            .collect();
        Matrix::from_rows(self.field, pivots.len(), rows)
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
///
/// Every intermediate entry is a minor of the input, so divisions are exact.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Rank of an integer matrix reduced modulo `p`.
pub fn rank_mod_p(m: &[Vec<BigInt>], p: u64) -> usize {
    let field = Field::Prime(p);
    let cols = m.first().map_or(0, Vec::len);
    let rows = m
        .iter()
        .map(|r| r.iter().map(|x| field.from_bigint(x)).collect())
        .collect();
    Matrix::from_rows(field, cols, rows).rank()
}

/// Largest absolute entry, for sizing multi-prime cross checks.
pub fn max_abs_entry(m: &[Vec<BigInt>]) -> u64 {
    m.iter()
        .flatten()
        .map(|x| x.abs().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mul(a: &[Vec<i64>], b: &[Vec<i64>], p: i64) -> Vec<Vec<i64>> {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        let mut out = vec![vec![0i64; m]; n];
        for i in 0..n {
            for j in 0..m {
                for l in 0..k {
                    out[i][j] = (out[i][j] + a[i][l] * b[l][j]).rem_euclid(p);
                }
            }
        }
        out
    }

    #[test]
    fn product_matches_triple_loop_over_f5() {
        let f = Field::Prime(5);
        let a = vec![vec![1, 2, 3], vec![4, 0, 1], vec![2, 2, 4]];
        let b = vec![vec![3, 1, 0], vec![1, 4, 2], vec![0, 3, 3]];
        let expected = Matrix::from_i64(f, &naive_mul(&a, &b, 5));
        let got = Matrix::from_i64(f, &a).mul(&Matrix::from_i64(f, &b)).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn kernel_and_solve() {
        let q = Field::Rational;
        let a = Matrix::from_i64(q, &[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).unwrap().is_zero());
        let b = Matrix::from_i64(q, &[vec![1], vec![3]]);
        assert!(a.solve(&b).is_none());
        let b = Matrix::from_i64(q, &[vec![1], vec![2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
    }

    #[test]
    fn bareiss_handles_fractions() {
        let q = Field::Rational;
        let h = q.from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap();
        let m = Matrix::from_rows(
            q,
            2,
            vec![vec![h.clone(), q.one()], vec![q.one(), q.from_i64(2)]],
        );
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rref().1.len(), 1);
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_rref(rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 1..6)) {
            let q = Field::Rational;
            let m = Matrix::from_i64(q, &rows);
            prop_assert_eq!(m.rank(), m.rref().1.len());
            let ints = m.integer_entries().unwrap();
            // small entries: reduction at large primes preserves the rank
            for p in [10007u64, 65537, 1_000_003] {
                prop_assert_eq!(rank_mod_p(&ints, p), m.rank());
            }
        }

        #[test]
        fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..5)) {
            let m = Matrix::from_i64(Field::Prime(10007), &rows);
            prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
        }
    }
}
