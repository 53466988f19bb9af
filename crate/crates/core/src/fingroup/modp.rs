//! 2×2 matrices over ℤ/p and checks of matrix identities.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::FinGroupError;

/// `[[a, b], [c, d]]` with entries reduced mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    pub fn new(p: u64, rows: [[i64; 2]; 2]) -> Self {
        let r = |x: i64| x.rem_euclid(p as i64) as u64;
        Mat2 { p, a: r(rows[0][0]), b: r(rows[0][1]), c: r(rows[1][0]), d: r(rows[1][1]) }
    }

    pub fn identity(p: u64) -> Self {
        Mat2::new(p, [[1, 0], [0, 1]])
    }

    pub fn diag(p: u64, x: i64, y: i64) -> Self {
        Mat2::new(p, [[x, 0], [0, y]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = self.p;
        Mat2 {
            p,
            a: (self.a * o.a + self.b * o.c) % p,
            b: (self.a * o.b + self.b * o.d) % p,
            c: (self.c * o.a + self.d * o.c) % p,
            d: (self.c * o.b + self.d * o.d) % p,
        }
    }

    pub fn det(&self) -> u64 {
        (self.a * self.d % self.p + self.p - self.b * self.c % self.p) % self.p
    }

    pub fn inverse(&self) -> Result<Mat2, FinGroupError> {
        let det = self.det();
        if det == 0 {
            return Err(FinGroupError::NotInvertible { p: self.p });
        }
        let inv = pow_mod(det, self.p - 2, self.p);
        let s = |x: u64| x * inv % self.p;
        Ok(Mat2 { p: self.p, a: s(self.d), b: s((self.p - self.b) % self.p), c: s((self.p - self.c) % self.p), d: s(self.a) })
    }

    /// Integer power; negative exponents need an invertible matrix.
    pub fn pow(&self, e: i64) -> Result<Mat2, FinGroupError> {
        let base = if e < 0 { self.inverse()? } else { *self };
        let mut acc = Mat2::identity(self.p);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Order in `GL₂(ℤ/p)`.
    pub fn order(&self) -> Result<u64, FinGroupError> {
        self.inverse()?;
        let id = Mat2::identity(self.p);
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = x.mul(self);
            k += 1;
        }
        Ok(k)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {}) mod {}", self.a, self.b, self.c, self.d, self.p)
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Matrix expressions over ℤ/p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatExpr {
    Lit([[i64; 2]; 2]),
    Mul(Box<MatExpr>, Box<MatExpr>),
    Pow(Box<MatExpr>, i64),
    Inv(Box<MatExpr>),
}

impl MatExpr {
    pub fn eval(&self, p: u64) -> Result<Mat2, FinGroupError> {
        match self {
            MatExpr::Lit(rows) => Ok(Mat2::new(p, *rows)),
            MatExpr::Mul(x, y) => Ok(x.eval(p)?.mul(&y.eval(p)?)),
            MatExpr::Pow(x, e) => x.eval(p)?.pow(*e),
            MatExpr::Inv(x) => x.eval(p)?.inverse(),
        }
    }
}

/// A claimed equality (or inequality) between two expressions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixClaim {
    pub lhs: MatExpr,
    pub rhs: MatExpr,
    pub equal: bool,
}

/// Evaluate each claim mod `p`.
pub fn matrix_mod_p_check(p: u64, claims: &[MatrixClaim]) -> Result<Vec<bool>, FinGroupError> {
    claims
        .iter()
        .map(|c| Ok((c.lhs.eval(p)? == c.rhs.eval(p)?) == c.equal))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_identities_mod_11() {
        let m1 = MatExpr::Lit([[1, 0], [0, 2]]);
        let claims = vec![
            MatrixClaim { lhs: MatExpr::Pow(Box::new(m1.clone()), 3), rhs: MatExpr::Lit([[1, 0], [0, 8]]), equal: true },
            MatrixClaim { lhs: MatExpr::Pow(Box::new(m1.clone()), 0), rhs: MatExpr::Lit([[1, 0], [0, 1]]), equal: true },
            MatrixClaim { lhs: MatExpr::Inv(Box::new(m1)), rhs: MatExpr::Lit([[1, 0], [0, 6]]), equal: true },
        ];
        assert_eq!(matrix_mod_p_check(11, &claims).unwrap(), vec![true, true, true]);
        assert_eq!(Mat2::diag(11, 1, 2).order().unwrap(), 10);
    }

    #[test]
    fn singular_inverse_fails() {
        let z = Mat2::new(11, [[1, 2], [2, 4]]);
        assert_eq!(z.inverse(), Err(FinGroupError::NotInvertible { p: 11 }));
    }
}
