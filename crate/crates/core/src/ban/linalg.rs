//! Dense exact linear algebra over arbitrary-precision rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Vector = Vec<Q>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zeros(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Q], s: &Q) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Q]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn l1(a: &[Q]) -> Q {
    a.iter().fold(Q::zero(), |acc, x| acc + x.abs())
}

/// `p/q` for every entry, space separated.
pub fn format_vector(v: &[Q]) -> String {
    v.iter().map(format_q).collect::<Vec<_>>().join(" ")
}

pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Panics when rows have different lengths.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vector>) -> Self {
        assert_eq!(entries.len(), rows);
        assert!(entries.iter().all(|r| r.len() == cols));
        Matrix { rows, cols, data: entries.into_iter().flatten().collect() }
    }

    pub fn from_cols(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn apply(&self, x: &[Q]) -> Vector {
        assert_eq!(x.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    m[(i, j)] += t;
                }
            }
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Block matrix `[self 0; 0 other]`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rank(&self.row_vectors())
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit(n, i));
                r
            })
            .collect();
        let pivots = rref(&mut aug, n);
        if pivots.len() < n {
            return None;
        }
        Some(Matrix::from_rows(n, n, aug.into_iter().map(|r| r[n..].to_vec()).collect()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;

    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))?;
        }
        write!(f, "]")
    }
}

/// Reduces the leading `ncols` columns of `rows` to reduced row echelon form
/// in place and returns the pivot columns.
pub fn rref(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= &f * p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[Vector]) -> usize {
    let Some(n) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut rows = vectors.to_vec();
    rref(&mut rows, n).len()
}

/// Indices of a maximal independent subfamily of `candidates`, chosen
/// greedily in order, that stays independent together with `base`.
pub fn extend_independent(base: &[Vector], candidates: &[Vector]) -> Vec<usize> {
    let mut chosen: Vec<Vector> = base.to_vec();
    let mut out = Vec::new();
    let mut r = rank(&chosen);
    for (i, c) in candidates.iter().enumerate() {
        chosen.push(c.clone());
        let r2 = rank(&chosen);
        if r2 > r {
            r = r2;
            out.push(i);
        } else {
            chosen.pop();
        }
    }
    out
}

/// Some `x` with `Σ x_k cols[k] = b`, if one exists.
pub fn solve_in_span(cols: &[Vector], b: &[Q]) -> Option<Vector> {
    let n = b.len();
    let k = cols.len();
    let mut rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut r: Vector = cols.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, k);
    if rows.iter().skip(pivots.len()).any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = zeros(k);
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][k].clone();
    }
    Some(x)
}

/// Canonical sign for a ± pair: first nonzero entry positive.
pub fn canonical_sign(v: &[Q]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(v),
        _ => v.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(2, 2, vec![vec![qi(2), qi(1)], vec![qi(1), qi(1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::from_rows(2, 2, vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn span_solving() {
        let cols = vec![vec![qi(1), qi(0), qi(1)], vec![qi(0), qi(1), qi(1)]];
        let x = solve_in_span(&cols, &[qi(2), qi(3), qi(5)]).unwrap();
        assert_eq!(x, vec![qi(2), qi(3)]);
        assert!(solve_in_span(&cols, &[qi(1), qi(1), qi(0)]).is_none());
    }

    #[test]
    fn greedy_extension() {
        let base = vec![vec![qi(1), qi(1)]];
        let cands = vec![vec![qi(2), qi(2)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        assert_eq!(extend_independent(&base, &cands), vec![1]);
    }
}
