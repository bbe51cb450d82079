//! Truncated elements of the Novikov field.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rational::{Order, Rational};
use crate::error::{Error, Result};

/// Coefficient comparison tolerance; complex coefficients closer than this
/// are treated as equal and dropped when they arise from cancellation.
pub const DEFAULT_TOL: f64 = 1e-9;

/// One term `coeff * T^exp`.
pub type Term = (Rational, Complex64);

/// A truncated element of `Lambda = C((T^R))` with rational exponents.
///
/// Terms are sorted by strictly increasing exponent, every stored coefficient
/// has modulus above [`DEFAULT_TOL`] and every stored exponent lies below the
/// truncation order. The exact zero is the empty sum with infinite order;
/// an empty sum with finite order is a "truncated zero" whose valuation is
/// unknown.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct NovikovScalar {
    terms: Vec<Term>,
    order: Order,
}

impl NovikovScalar {
    pub fn zero() -> Self {
        NovikovScalar { terms: Vec::new(), order: Order::Infinite }
    }

    pub fn one() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), Rational::zero())
    }

    pub fn from_f64(x: f64) -> Self {
        Self::monomial(Complex64::new(x, 0.0), Rational::zero())
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `coeff * T^exp`, exact (infinite order).
    pub fn monomial(coeff: Complex64, exp: Rational) -> Self {
        let mut terms = Vec::new();
        if coeff.norm() > DEFAULT_TOL {
            terms.push((exp, coeff));
        }
        NovikovScalar { terms, order: Order::Infinite }
    }

    /// `T^exp` with coefficient 1.
    pub fn t_power(exp: Rational) -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), exp)
    }

    /// Builds from unsorted terms, merging duplicates and enforcing the
    /// invariants; `order` truncates.
    pub fn from_terms(mut raw: Vec<Term>, order: Order) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<Term> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            if let Order::Finite(o) = order {
                if e >= o {
                    continue;
                }
            }
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| c.norm() > DEFAULT_TOL);
        NovikovScalar { terms, order }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// True for the exact zero (empty, infinite order).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.order == Order::Infinite
    }

    /// True when no term is stored (exact or truncated zero).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Empty with finite order: all structure hidden below the truncation.
    pub fn is_truncated_zero(&self) -> bool {
        self.terms.is_empty() && self.order.is_finite()
    }

    /// Smallest stored exponent; infinity for the exact zero.
    pub fn valuation(&self) -> Result<Order> {
        if let Some((e, _)) = self.terms.first() {
            Ok(Order::Finite(*e))
        } else if self.order == Order::Infinite {
            Ok(Order::Infinite)
        } else {
            Err(Error::TruncatedZero(format!(
                "valuation unknown below order {}",
                self.order
            )))
        }
    }

    /// Valuation as a rational; errors on zero of either kind.
    pub fn valuation_finite(&self) -> Result<Rational> {
        match self.valuation()? {
            Order::Finite(v) => Ok(v),
            Order::Infinite => Err(Error::TruncatedZero("exact zero has no finite valuation".into())),
        }
    }

    pub fn leading(&self) -> Option<Term> {
        self.terms.first().copied()
    }

    /// Coefficient of `T^exp` (zero if absent).
    pub fn coeff(&self, exp: Rational) -> Complex64 {
        self.terms
            .iter()
            .find(|(e, _)| *e == exp)
            .map(|(_, c)| *c)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn truncate(&self, order: Order) -> Self {
        let order = self.order.min(order);
        let terms = self
            .terms
            .iter()
            .copied()
            .filter(|(e, _)| Order::Finite(*e) < order)
            .collect();
        NovikovScalar { terms, order }
    }

    pub fn neg(&self) -> Self {
        NovikovScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            order: self.order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&other.terms);
        Self::from_terms(raw, order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; the result order is `min(O_a + val(b), O_b + val(a))`, with
    /// the convention that an exact zero factor gives the exact zero.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let va = self.terms.first().map(|t| t.0);
        let vb = other.terms.first().map(|t| t.0);
        // Truncated zero times anything: nothing is known above the combined order.
        let order = match (va, vb) {
            (Some(va), Some(vb)) => self
                .order
                .add_rational(vb)
                .min(other.order.add_rational(va)),
            (Some(va), None) => other.order.add_rational(va),
            (None, Some(vb)) => self.order.add_rational(vb),
            (None, None) => self.order.add(other.order),
        };
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                raw.push((*ea + *eb, ca * cb));
            }
        }
        Self::from_terms(raw, order)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c.norm() <= DEFAULT_TOL {
            return Self::zero().truncate(self.order);
        }
        NovikovScalar {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
            order: self.order,
        }
    }

    /// Multiply by `T^exp` exactly.
    pub fn shift(&self, exp: Rational) -> Self {
        NovikovScalar {
            terms: self.terms.iter().map(|(e, c)| (*e + exp, *c)).collect(),
            order: self.order.add_rational(exp),
        }
    }

    /// Multiplicative inverse up to `target_order` past the leading exponent
    /// of the result, by a geometric series on the normalized tail.
    pub fn invert(&self, target_order: Rational) -> Result<Self> {
        let (v, lead) = self.leading().ok_or_else(|| {
            Error::TruncatedZero("cannot invert a scalar with no leading term".into())
        })?;
        // a = lead*T^v * (1 + u) with val(u) > 0; 1/a = lead^-1 T^-v sum (-u)^k.
        let unit = self.shift(-v).scale(lead.inv());
        let u = unit.sub(&Self::one());
        let mut acc = Self::one();
        let mut pow = Self::one();
        if let Some((step, _)) = u.leading() {
            let iter = (target_order + v.abs() + Rational::one()).div_ceil(step).max(0);
            for _ in 0..iter {
                pow = pow.mul(&u).neg().truncate(Order::Finite(target_order + Rational::one()));
                if pow.is_empty() {
                    break;
                }
                acc = acc.add(&pow);
            }
        }
        let mut out = acc.scale(lead.inv()).shift(-v);
        // The geometric series is exact where u is; cap at the honest order.
        let cap = match u.order() {
            Order::Infinite => Order::Finite(target_order),
            Order::Finite(o) => Order::Finite((o - v).min(target_order)),
        };
        out = out.truncate(cap);
        Ok(out)
    }

    /// exp(a) for `a` in the valuation ring, up to `target_order`:
    /// `e^{a0} * exp(a - a0)` with the positive part summed as a power series.
    pub fn exp(&self, target_order: Rational) -> Result<Self> {
        if let Some((v, _)) = self.leading() {
            if v < Rational::zero() {
                return Err(Error::NegativeValuation(format!(
                    "exp requires val >= 0, got {v}"
                )));
            }
        }
        let a0 = self.coeff(Rational::zero());
        let head = Complex64::new(a0.re.exp() * a0.im.cos(), a0.re.exp() * a0.im.sin());
        let pos = self.sub(&Self::from_complex(a0));
        let mut acc = Self::one();
        let mut pow = Self::one();
        if let Some((step, _)) = pos.leading() {
            let iter = target_order.div_ceil(step).max(0);
            let mut kfac = 1.0f64;
            for k in 1..=iter {
                kfac *= k as f64;
                pow = pow.mul(&pos).truncate(Order::Finite(target_order));
                if pow.is_empty() {
                    break;
                }
                acc = acc.add(&pow.scale(Complex64::new(1.0 / kfac, 0.0)));
            }
        }
        let cap = match pos.order() {
            Order::Infinite => Order::Finite(target_order),
            Order::Finite(o) => Order::Finite(o.min(target_order)),
        };
        Ok(acc.scale(head).truncate(cap))
    }

    /// Coefficient-wise distance restricted to exponents both sides store;
    /// infinite when exponent supports differ below the common order.
    pub fn distance(&self, other: &Self) -> f64 {
        let diff = self.sub(other);
        if diff.terms.is_empty() {
            0.0
        } else {
            diff.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
        }
    }

    /// Equality up to `tol` in coefficients (exponents exact, missing terms
    /// read as zero), compared below the common truncation order.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let order = self.order.min(other.order);
        let a = self.truncate(order);
        let b = other.truncate(order);
        let mut ia = a.terms.iter().peekable();
        let mut ib = b.terms.iter().peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (None, None) => return true,
                (Some((_, ca)), None) => {
                    if ca.norm() > tol {
                        return false;
                    }
                    ia.next();
                }
                (None, Some((_, cb))) => {
                    if cb.norm() > tol {
                        return false;
                    }
                    ib.next();
                }
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    std::cmp::Ordering::Less => {
                        if ca.norm() > tol {
                            return false;
                        }
                        ia.next();
                    }
                    std::cmp::Ordering::Greater => {
                        if cb.norm() > tol {
                            return false;
                        }
                        ib.next();
                    }
                    std::cmp::Ordering::Equal => {
                        if (*ca - *cb).norm() > tol {
                            return false;
                        }
                        ia.next();
                        ib.next();
                    }
                },
            }
        }
    }
}

fn fmt_coeff(c: Complex64) -> String {
    let fmt_re = |x: f64| {
        if (x - x.round()).abs() < 1e-12 && x.abs() < 1e15 {
            format!("{}", x.round() as i64)
        } else {
            format!("{:.12}", x)
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        }
    };
    if c.im.abs() <= DEFAULT_TOL {
        fmt_re(c.re)
    } else if c.re.abs() <= DEFAULT_TOL {
        format!("{}i", fmt_re(c.im))
    } else if c.im < 0.0 {
        format!("({}{}i)", fmt_re(c.re), fmt_re(c.im))
    } else {
        format!("({}+{}i)", fmt_re(c.re), fmt_re(c.im))
    }
}

impl fmt::Display for NovikovScalar {
    /// Canonical form: exponent-sorted, explicit rational exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (e, c)) in self.terms.iter().enumerate() {
                let coeff = fmt_coeff(*c);
                let part = if e.is_zero() {
                    coeff
                } else {
                    let t = if *e == Rational::one() {
                        "T".to_string()
                    } else if e.is_integer() && !e.is_negative() {
                        format!("T^{e}")
                    } else {
                        format!("T^({e})")
                    };
                    if coeff == "1" {
                        t
                    } else if coeff == "-1" {
                        format!("-{t}")
                    } else {
                        format!("{coeff}*{t}")
                    }
                };
                if i == 0 {
                    write!(f, "{part}")?;
                } else if let Some(rest) = part.strip_prefix('-') {
                    write!(f, " - {rest}")?;
                } else {
                    write!(f, " + {part}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)?;
        if let Order::Finite(o) = self.order {
            write!(f, " + O(T^({o}))")?;
        }
        Ok(())
    }
}
