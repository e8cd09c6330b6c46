//! Symmetric binary quadratic forms over ℚ.

use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int_to_rat, IntMatrix, RatMatrix, Rational};

/// `[[q11, q12], [q12, q22]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm2 {
    pub q11: Rational,
    pub q12: Rational,
    pub q22: Rational,
}

impl QuadForm2 {
    pub fn new(q11: Rational, q12: Rational, q22: Rational) -> Self {
        QuadForm2 { q11, q12, q22 }
    }

    pub fn from_matrix(m: &RatMatrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::UnsupportedShape { rows: m.rows(), cols: m.cols() });
        }
        if m[(0, 1)] != m[(1, 0)] {
            return Err(Error::NotSymmetric);
        }
        Ok(QuadForm2::new(m[(0, 0)].clone(), m[(0, 1)].clone(), m[(1, 1)].clone()))
    }

    pub fn to_matrix(&self) -> RatMatrix {
        RatMatrix::m2(self.q11.clone(), self.q12.clone(), self.q12.clone(), self.q22.clone())
    }

    pub fn det(&self) -> Rational {
        &self.q11 * &self.q22 - &self.q12 * &self.q12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.q11.is_positive() && self.det().is_positive()
    }

    /// `Q(x, y)` for the vectors `x`, `y`.
    pub fn eval(&self, x: (&Rational, &Rational), y: (&Rational, &Rational)) -> Rational {
        &self.q11 * x.0 * y.0 + &self.q12 * (x.0 * y.1 + x.1 * y.0) + &self.q22 * x.1 * y.1
    }

    /// `Xᵀ Q X`.
    pub fn act(&self, x: &IntMatrix) -> QuadForm2 {
        assert!(x.rows() == 2 && x.cols() == 2, "congruence by a non-2x2 matrix");
        let a = int_to_rat(&x[(0, 0)]);
        let b = int_to_rat(&x[(0, 1)]);
        let c = int_to_rat(&x[(1, 0)]);
        let d = int_to_rat(&x[(1, 1)]);
        QuadForm2::new(
            self.eval((&a, &c), (&a, &c)),
            self.eval((&a, &c), (&b, &d)),
            self.eval((&b, &d), (&b, &d)),
        )
    }

    /// `diag(1, -1) • Q`.
    pub fn flip(&self) -> QuadForm2 {
        QuadForm2::new(self.q11.clone(), -self.q12.clone(), self.q22.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.q11.is_zero() && self.q12.is_zero() && self.q22.is_zero()
    }
}

impl fmt::Display for QuadForm2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.q11, self.q12, self.q12, self.q22)
    }
}
