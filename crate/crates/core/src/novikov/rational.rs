//! Exact rational exponents.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exponent of a Novikov monomial: an exact rational kept in lowest terms
/// with positive denominator (`Ratio` maintains both invariants).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub const fn zero() -> Self {
        Rational(Ratio::new_raw(0, 1))
    }

    pub const fn one() -> Self {
        Rational(Ratio::new_raw(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Smallest integer >= self / step, for iteration counts.
    pub fn div_ceil(&self, step: Rational) -> i64 {
        assert!(step > Rational::zero());
        let q = self.0 / step.0;
        q.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn scale(&self, k: i64) -> Self {
        Rational(self.0 * Ratio::from_integer(k))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Self) -> Self {
        Rational(self.0 + rhs.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Self) -> Self {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Self) -> Self {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num: i64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let den: i64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            Ok(Rational::new(num, den))
        } else {
            let num: i64 = s.parse().map_err(|e| format!("bad integer: {e}"))?;
            Ok(Rational::from_int(num))
        }
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for Rational {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

/// A rational or +infinity: truncation orders and valuations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Order {
    Finite(Rational),
    Infinite,
}

impl Order {
    pub fn min(self, other: Order) -> Order {
        match (self, other) {
            (Order::Infinite, o) | (o, Order::Infinite) => o,
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.min(b)),
        }
    }

    pub fn add(self, other: Order) -> Order {
        match (self, other) {
            (Order::Infinite, _) | (_, Order::Infinite) => Order::Infinite,
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
        }
    }

    pub fn add_rational(self, r: Rational) -> Order {
        match self {
            Order::Infinite => Order::Infinite,
            Order::Finite(a) => Order::Finite(a + r),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// True when the order certifies exactness through `e`.
    pub fn covers(&self, e: Rational) -> bool {
        match self {
            Order::Infinite => true,
            Order::Finite(o) => *o > e,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_impl(other))
    }
}

impl Ord for Order {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_impl(other)
    }
}

impl Order {
    fn cmp_impl(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
            (Order::Infinite, _) => Ordering::Greater,
            (_, Order::Infinite) => Ordering::Less,
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Infinite => write!(f, "inf"),
            Order::Finite(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let r = Rational::new(2, -4);
        assert_eq!(r.numer(), -1);
        assert_eq!(r.denom(), 2);
        assert_eq!(r.to_string(), "-1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["5/6", "-1/3", "7", "0"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn order_lattice() {
        let a = Order::Finite(Rational::new(1, 2));
        assert_eq!(a.min(Order::Infinite), a);
        assert_eq!(a.add_rational(Rational::one()), Order::Finite(Rational::new(3, 2)));
        assert!(Order::Infinite > a);
    }
}
