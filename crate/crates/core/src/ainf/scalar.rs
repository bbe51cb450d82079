//! Entry scalars for operator tensors.
//!
//! Symbolically constructed systems keep exact rationals so identity checks
//! are exact; anything mixed with Novikov data demotes to complex doubles and
//! compares against the coefficient tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::novikov::{Rational, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Scalar {
    Rat(Rational),
    Cx([f64; 2]),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Rat(r)
    }

    pub fn from_complex(c: Complex64) -> Self {
        Scalar::Cx([c.re, c.im])
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Scalar::Rat(r) => Complex64::new(r.to_f64(), 0.0),
            Scalar::Cx([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Cx([re, im]) => (re * re + im * im).sqrt() <= DEFAULT_TOL,
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Self) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (a, b) => Scalar::from_complex(a.to_complex() + b.to_complex()),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Self) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (a, b) => Scalar::from_complex(a.to_complex() * b.to_complex()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Cx([re, im]) => Scalar::Cx([-re, -im]),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Cx([re, im]) => write!(f, "{re}+{im}i"),
        }
    }
}
