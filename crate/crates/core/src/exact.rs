//! Exact scalars and small dense matrices.
//!
//! Rationals are `num_rational::BigRational`, which already keeps values in
//! lowest terms with a positive denominator and prints as `p/q` or `p`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;
pub type IntMatrix = Matrix<Integer>;
pub type RatMatrix = Matrix<Rational>;

/// Ring operations needed by [`Matrix`].
pub trait Scalar: Clone + PartialEq + Num + Neg<Output = Self> {}
impl<T: Clone + PartialEq + Num + Neg<Output = T>> Scalar for T {}

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}

pub fn int_to_rat(v: &Integer) -> Rational {
    Rational::from_integer(v.clone())
}

/// Parses `p/q` or `p`. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: Integer = n.parse().ok()?;
    let d: Integer = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    /// Builds a matrix from rows; fails on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::UnsupportedShape { rows: r, cols: c });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn row(&self, r: usize) -> Self {
        Matrix::from_fn(1, self.cols, |_, c| self[(r, c)].clone())
    }

    pub fn column(&self, c: usize) -> Self {
        Matrix::from_fn(self.rows, 1, |r, _| self[(r, c)].clone())
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Matrix::from_fn(n, n, |r, c| if r == c { values[r].clone() } else { T::zero() })
    }

    /// 2×2 matrix `[[a, b], [c, d]]`.
    pub fn m2(a: T, b: T, c: T, d: T) -> Self {
        Matrix { rows: 2, cols: 2, data: alloc::vec![a, b, c, d] }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    /// Determinant by cofactor expansion; only used for tiny matrices.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        match self.rows {
            0 => T::one(),
            1 => self.data[0].clone(),
            2 => {
                self.data[0].clone() * self.data[3].clone()
                    - self.data[1].clone() * self.data[2].clone()
            }
            n => {
                let mut acc = T::zero();
                for c in 0..n {
                    let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                        self[(i + 1, if j < c { j } else { j + 1 })].clone()
                    });
                    let term = self[(0, c)].clone() * minor.det();
                    acc = if c % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Rank of a matrix with at most two rows or two columns.
    pub fn small_rank(&self) -> usize {
        let k = self.rows.min(self.cols);
        assert!(k <= 2, "small_rank needs min(rows, cols) <= 2");
        if k == 2 {
            for r0 in 0..self.rows {
                for r1 in r0 + 1..self.rows {
                    for c0 in 0..self.cols {
                        for c1 in c0 + 1..self.cols {
                            let m = self[(r0, c0)].clone() * self[(r1, c1)].clone()
                                - self[(r0, c1)].clone() * self[(r1, c0)].clone();
                            if !m.is_zero() {
                                return 2;
                            }
                        }
                    }
                }
            }
        }
        usize::from(!self.is_zero())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).fold(T::zero(), |acc, i| acc + self[(r, i)].clone() * rhs[(i, c)].clone())
        })
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sum");
        Matrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() + rhs[(r, c)].clone())
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in difference");
        Matrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - rhs[(r, c)].clone())
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.map(int_to_rat)
}

/// The integer matrix with the same entries, if every entry is integral.
pub fn to_integer(m: &RatMatrix) -> Option<IntMatrix> {
    if m.entries().all(Rational::is_integer) {
        Some(m.map(Rational::to_integer))
    } else {
        None
    }
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.det().abs().is_one()
}

/// Inverse of a 1×1 or 2×2 rational matrix.
pub fn inv2(a: &RatMatrix) -> Result<RatMatrix> {
    if !a.is_square() || a.rows() == 0 || a.rows() > 2 {
        return Err(Error::UnsupportedShape { rows: a.rows(), cols: a.cols() });
    }
    let det = a.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let inv = det.recip();
    Ok(if a.rows() == 1 {
        Matrix::m1(inv)
    } else {
        Matrix::m2(
            a[(1, 1)].clone() * &inv,
            -a[(0, 1)].clone() * &inv,
            -a[(1, 0)].clone() * &inv,
            a[(0, 0)].clone() * &inv,
        )
    })
}

impl<T> Matrix<T> {
    pub fn m1(a: T) -> Self {
        Matrix { rows: 1, cols: 1, data: alloc::vec![a] }
    }
}

/// `Xᵀ Q X`.
pub fn congruence_act(x: &IntMatrix, q: &RatMatrix) -> RatMatrix {
    let xr = to_rational(x);
    &(&xr.transpose() * q) * &xr
}

/// Smith normal form `U A V = D` of a 1×1 or 2×2 integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal of `D`, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<Integer> {
        (0..self.d.rows()).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for c in 0..m.cols {
            m.data.swap(a * m.cols + c, b * m.cols + c);
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for r in 0..m.rows {
            m.data.swap(r * m.cols + a, r * m.cols + b);
        }
    }
}

/// row[dst] += f * row[src]
fn add_row(m: &mut IntMatrix, dst: usize, src: usize, f: &Integer) {
    for c in 0..m.cols {
        let v = m[(src, c)].clone() * f;
        m.data[dst * m.cols + c] += v;
    }
}

/// col[dst] += f * col[src]
fn add_col(m: &mut IntMatrix, dst: usize, src: usize, f: &Integer) {
    for r in 0..m.rows {
        let v = m[(r, src)].clone() * f;
        m.data[r * m.cols + dst] += v;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols {
        let i = r * m.cols + c;
        m.data[i] = -core::mem::take(&mut m.data[i]);
    }
}

pub fn snf2(a: &IntMatrix) -> Result<Snf> {
    if !a.is_square() || a.rows() == 0 || a.rows() > 2 {
        return Err(Error::UnsupportedShape { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    if n == 2 {
        loop {
            let pivot = (0..2)
                .flat_map(|r| (0..2).map(move |c| (r, c)))
                .filter(|&p| !d[p].is_zero())
                .min_by(|&p, &q| d[p].abs().cmp(&d[q].abs()));
            let Some((pr, pc)) = pivot else { break };
            swap_rows(&mut d, 0, pr);
            swap_rows(&mut u, 0, pr);
            swap_cols(&mut d, 0, pc);
            swap_cols(&mut v, 0, pc);
            let q = -(d[(1, 0)].clone() / d[(0, 0)].clone());
            add_row(&mut d, 1, 0, &q);
            add_row(&mut u, 1, 0, &q);
            let q = -(d[(0, 1)].clone() / d[(0, 0)].clone());
            add_col(&mut d, 1, 0, &q);
            add_col(&mut v, 1, 0, &q);
            if d[(1, 0)].is_zero() && d[(0, 1)].is_zero() {
                if d[(1, 1)].is_multiple_of(&d[(0, 0)]) {
                    break;
                }
                let one = Integer::one();
                add_row(&mut d, 0, 1, &one);
                add_row(&mut u, 0, 1, &one);
            }
        }
    }
    for i in 0..n {
        if d[(i, i)].is_negative() {
            negate_row(&mut d, i);
            negate_row(&mut u, i);
        }
    }
    Ok(Snf { u, d, v })
}
