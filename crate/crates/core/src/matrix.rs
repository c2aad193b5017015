use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix(Vec<Vec<i64>>);

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0].len() == w[1].len()));
        Self(rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(vec![vec![0; cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.0[i][i] = 1;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        Self(
            (0..rows)
                .map(|i| (0..cols).map(|j| f(i, j)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.0.len()
    }

    pub fn ncols(&self) -> usize {
        self.0.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.0[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.0[i]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols(), self.nrows(), |i, j| self.0[j][i])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols(), rhs.nrows());
        Self::from_fn(self.nrows(), rhs.ncols(), |i, j| {
            (0..self.ncols()).map(|k| self.0[i][k] * rhs.0[k][j]).sum()
        })
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |i, j| self.0[idx[i]][idx[j]])
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Ratio<i128>>> = self
            .0
            .iter()
            .map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect())
            .collect();
        let (rows, cols) = (self.nrows(), self.ncols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][c] != Ratio::from_integer(0)) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && row[c] != Ratio::from_integer(0) {
                    let f = row[c] / pivot[c];
                    for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                        *x -= y * f;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.nrows()).all(|i| {
            (0..self.ncols()).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self.0[i][j] == 1,
                std::cmp::Ordering::Greater => self.0[i][j] == 0,
                std::cmp::Ordering::Less => true,
            })
        })
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.transpose().is_upper_unitriangular()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .0
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_rows(vec![vec![1, 2], vec![0, 1]]);
        let b = IntMatrix::from_rows(vec![vec![1, 0], vec![3, 1]]);
        assert_eq!(
            a.mul(&b),
            IntMatrix::from_rows(vec![vec![7, 2], vec![3, 1]])
        );
        assert!(a.is_upper_unitriangular());
        assert!(!a.is_lower_unitriangular());
        assert!(a.transpose().is_lower_unitriangular());
        assert!(IntMatrix::identity(3).is_upper_unitriangular());
    }

    #[test]
    fn rank() {
        assert_eq!(IntMatrix::identity(3).rank(), 3);
        assert_eq!(IntMatrix::zeros(2, 3).rank(), 0);
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
    }
}
