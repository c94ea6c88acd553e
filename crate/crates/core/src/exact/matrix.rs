use std::fmt;

use num_bigint::BigInt;


use super::ring::{common_denominator, Rational, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix with immutable dimensions.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn column(values: Vec<T>) -> Self {
        let n = values.len();
        Matrix { rows: n, cols: 1, data: values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Sub-matrix made of the given rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_structurally_zero() {
                        acc = acc.add(&a.mul(other.get(k, j)));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// Semantic zero test on every entry.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }
}

impl RatMatrix {
    /// `A * X` for a rational `A` and an arbitrary ring-valued `X`.
    pub fn apply<T: Ring>(&self, x: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, x.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, x.cols);
        for i in 0..self.rows {
            for j in 0..x.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc.add(&x.get(k, j).scale(a));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let (_, echelon) = integer_echelon(self, &mut Matrix::<Rational>::zeros(self.rows, 0));
        echelon.pivots.len()
    }
}

/// Square matrix whose row `k` holds `values[j]^k`.
pub fn vandermonde<T: Ring>(values: &[T]) -> Matrix<T> {
    let n = values.len();
    let mut m = Matrix::zeros(n, n);
    for (j, v) in values.iter().enumerate() {
        let mut p = T::one();
        for k in 0..n {
            m.set(k, j, p.clone());
            p = p.mul(v);
        }
    }
    m
}

struct Echelon {
    /// Integer (fraction-free) upper-echelon form of `A`.
    a: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

fn to_rational(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Clears row denominators, then runs Bareiss elimination on the integer
/// matrix while applying the same row operations to `b`.
fn integer_echelon<T: Ring>(a: &RatMatrix, b: &mut Matrix<T>) -> (Vec<BigInt>, Echelon) {
    let (m, n) = (a.rows, a.cols);
    let mut scales = Vec::with_capacity(m);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for i in 0..m {
        let d = common_denominator(a.row(i));
        let dq = to_rational(&d);
        rows.push(a.row(i).iter().map(|q| (q * &dq).to_integer()).collect());
        for j in 0..b.cols {
            let v = b.get(i, j).scale(&dq);
            b.set(i, j, v);
        }
        scales.push(d);
    }

    let mut prev = BigInt::from(1);
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !num_traits::Zero::is_zero(&rows[i][col])) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            for j in 0..b.cols {
                let tmp = b.get(p, j).clone();
                b.set(p, j, b.get(r, j).clone());
                b.set(r, j, tmp);
            }
            swaps += 1;
        }
        let piv = rows[r][col].clone();
        let prev_q = to_rational(&prev).recip();
        for i in r + 1..m {
            let (top, bottom) = rows.split_at_mut(i);
            let (pivot_row, row) = (&top[r], &mut bottom[0]);
            let factor = row[col].clone();
            for (dst, src) in row[col + 1..n].iter_mut().zip(&pivot_row[col + 1..n]) {
                let num = &piv * &*dst - &factor * src;
                debug_assert!(num_traits::Zero::is_zero(&(&num % &prev)), "Bareiss division must be exact");
                *dst = num / &prev;
            }
            row[col] = BigInt::from(0);
            let (pq, fq) = (to_rational(&piv), to_rational(&factor));
            for j in 0..b.cols {
                let v = b.get(i, j).scale(&pq).sub(&b.get(r, j).scale(&fq)).scale(&prev_q);
                b.set(i, j, v);
            }
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    (scales, Echelon { a: rows, pivots, swaps })
}

/// Exact determinant by fraction-free elimination.
pub fn det_bareiss(a: &RatMatrix) -> Rational {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return Rational::one();
    }
    let (scales, ech) = integer_echelon(a, &mut Matrix::<Rational>::zeros(n, 0));
    if ech.pivots.len() < n {
        return Rational::zero();
    }
    let mut det = to_rational(&ech.a[n - 1][n - 1]);
    if ech.swaps % 2 == 1 {
        det = -det;
    }
    for s in scales {
        det /= to_rational(&s);
    }
    det
}

/// Result of [`ff_solve`].
#[derive(Clone, Debug)]
pub struct Solution<T> {
    /// One solution of `A X = B` (free variables set to zero).
    pub particular: Matrix<T>,
    /// Basis of the rational nullspace of `A`.
    pub nullspace: Vec<Vec<Rational>>,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

/// Solves `A X = B` for rational `A` and ring-valued `B` using fraction-free
/// elimination over the integers, applied simultaneously to `B`.
pub fn ff_solve<T: Ring>(a: &RatMatrix, b: &Matrix<T>) -> Result<Solution<T>> {
    assert_eq!(a.rows, b.rows, "right-hand side has the wrong number of rows");
    let n = a.cols;
    let mut rhs = b.clone();
    let (_, ech) = integer_echelon(a, &mut rhs);
    let rank = ech.pivots.len();

    for i in rank..a.rows {
        for j in 0..rhs.cols {
            if !rhs.get(i, j).is_zero() {
                return Err(Error::Inconsistent { row: i });
            }
        }
    }

    let mut particular: Matrix<T> = Matrix::zeros(n, rhs.cols);
    for k in (0..rank).rev() {
        let c = ech.pivots[k];
        let inv = to_rational(&ech.a[k][c]).recip();
        for j in 0..rhs.cols {
            let mut acc = rhs.get(k, j).clone();
            for (l, coef) in ech.a[k].iter().enumerate().skip(c + 1) {
                if !num_traits::Zero::is_zero(coef) {
                    acc = acc.sub(&particular.get(l, j).scale(&to_rational(coef)));
                }
            }
            particular.set(c, j, acc.scale(&inv));
        }
    }

    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for k in (0..rank).rev() {
                let c = ech.pivots[k];
                let s: Rational = ech.a[k]
                    .iter()
                    .enumerate()
                    .skip(c + 1)
                    .filter(|(_, coef)| !num_traits::Zero::is_zero(*coef))
                    .map(|(l, coef)| to_rational(coef) * &v[l])
                    .sum();
                v[c] = -s / to_rational(&ech.a[k][c]);
            }
            v
        })
        .collect();

    Ok(Solution { particular, nullspace, rank, pivot_columns: ech.pivots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::{rat, ratio};

    fn rm(rows: &[&[i64]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
    }

    #[test]
    fn identity_system() {
        let b = Matrix::column(vec![ratio(3, 7), rat(-2)]);
        let sol = ff_solve(&RatMatrix::identity(2), &b).unwrap();
        assert_eq!(sol.particular, b);
        assert!(sol.nullspace.is_empty());
        assert_eq!(sol.rank, 2);
    }

    #[test]
    fn rank_one_system() {
        let a = rm(&[&[1, 1], &[2, 2]]);
        let b = Matrix::column(vec![rat(1), rat(2)]);
        let sol = ff_solve(&a, &b).unwrap();
        assert_eq!(sol.rank, 1);
        assert_eq!(a.apply(&sol.particular), b);
        assert_eq!(sol.nullspace, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn inconsistent_system() {
        let a = rm(&[&[1, 1], &[2, 2]]);
        let b = Matrix::column(vec![rat(1), rat(3)]);
        assert!(matches!(ff_solve(&a, &b), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = Matrix::from_rows(vec![
            vec![ratio(1, 2), rat(3), rat(-1)],
            vec![rat(0), ratio(-2, 3), rat(4)],
            vec![rat(5), rat(1), ratio(1, 5)],
        ]);
        let g = |i: usize, j: usize| a.get(i, j).clone();
        let cof = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
            - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
            + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
        assert_eq!(det_bareiss(&a), cof);
        assert_eq!(det_bareiss(&rm(&[&[0, 1], &[1, 0]])), rat(-1));
        assert_eq!(det_bareiss(&rm(&[&[1, 2], &[2, 4]])), rat(0));
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&[rat(1), rat(2)]), rm(&[&[1, 1], &[1, 2]]));
        assert_eq!(vandermonde(&[rat(7)]), rm(&[&[1]]));
        assert_eq!(det_bareiss(&vandermonde(&[rat(1), rat(2), rat(4)])), rat(3 * 2));
    }
}
