//! Finitely-supported Laurent series and torus points.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::novikov::{NovikovScalar, Order, Rational};

/// Default global energy cutoff `E_max`.
pub fn default_energy_cutoff() -> Rational {
    Rational::from_int(4)
}

pub const DEFAULT_ENERGY_CUTOFF: i64 = 4;

/// Lattice exponent `alpha` of a monomial `Y^alpha`, rank fixed by context.
pub type MonomialExponent = Vec<i64>;

/// Element of `Lambda[[pi_1(L)]]`: finitely many monomials with Novikov
/// coefficients, all tracked below the energy cutoff `E_max`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    rank: usize,
    #[serde(with = "crate::textfmt::seq_pairs")]
    terms: BTreeMap<MonomialExponent, NovikovScalar>,
    cutoff: Rational,
}

impl LaurentSeries {
    pub fn zero(rank: usize) -> Self {
        LaurentSeries { rank, terms: BTreeMap::new(), cutoff: default_energy_cutoff() }
    }

    pub fn zero_with_cutoff(rank: usize, cutoff: Rational) -> Self {
        LaurentSeries { rank, terms: BTreeMap::new(), cutoff }
    }

    pub fn constant(rank: usize, c: NovikovScalar) -> Self {
        Self::constant_at(rank, c, default_energy_cutoff())
    }

    pub fn constant_at(rank: usize, c: NovikovScalar, cutoff: Rational) -> Self {
        let mut s = Self::zero_with_cutoff(rank, cutoff);
        s.insert(vec![0; rank], c);
        s
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, NovikovScalar::one())
    }

    pub fn one_at(rank: usize, cutoff: Rational) -> Self {
        Self::constant_at(rank, NovikovScalar::one(), cutoff)
    }

    /// `c * Y^alpha` at the default cutoff. Coefficient orders are capped at
    /// the series cutoff, so construct at the target cutoff rather than
    /// raising it afterwards.
    pub fn monomial(rank: usize, alpha: MonomialExponent, c: NovikovScalar) -> Self {
        Self::monomial_at(rank, alpha, c, default_energy_cutoff())
    }

    pub fn monomial_at(
        rank: usize,
        alpha: MonomialExponent,
        c: NovikovScalar,
        cutoff: Rational,
    ) -> Self {
        assert_eq!(alpha.len(), rank);
        let mut s = Self::zero_with_cutoff(rank, cutoff);
        s.insert(alpha, c);
        s
    }

    /// Variable `Y_i` (one-based index like the surface syntax `Y1..Yn`).
    pub fn variable(rank: usize, i: usize) -> Self {
        Self::variable_at(rank, i, default_energy_cutoff())
    }

    pub fn variable_at(rank: usize, i: usize, cutoff: Rational) -> Self {
        assert!((1..=rank).contains(&i));
        let mut alpha = vec![0i64; rank];
        alpha[i - 1] = 1;
        Self::monomial_at(rank, alpha, NovikovScalar::one(), cutoff)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cutoff(&self) -> Rational {
        self.cutoff
    }

    pub fn with_cutoff(mut self, cutoff: Rational) -> Self {
        self.cutoff = cutoff;
        let keys: Vec<_> = self.terms.keys().cloned().collect();
        for k in keys {
            let v = self.terms.remove(&k).unwrap();
            self.insert(k, v.truncate(Order::Finite(cutoff)));
        }
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialExponent, &NovikovScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// No visible terms (order markers for dropped tails may remain).
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_empty())
    }

    pub fn coeff(&self, alpha: &[i64]) -> NovikovScalar {
        self.terms.get(alpha).cloned().unwrap_or_else(NovikovScalar::zero)
    }

    /// Inserts `c * Y^alpha`, truncating at the series cutoff and merging.
    ///
    /// A coefficient whose visible terms all lie above the cutoff is kept as
    /// an empty scalar with finite order: the record that this monomial is
    /// unknown from that order on. Exact zeros are dropped.
    pub fn insert(&mut self, alpha: MonomialExponent, c: NovikovScalar) {
        assert_eq!(alpha.len(), self.rank, "monomial rank mismatch");
        let c = c.truncate(Order::Finite(self.cutoff));
        if c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_exact_zero() {
                    self.terms.remove(&alpha);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero_with_cutoff(self.rank, self.cutoff.min(other.cutoff));
        for (a, c) in &self.terms {
            out.insert(a.clone(), c.clone());
        }
        for (a, c) in &other.terms {
            out.insert(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero_with_cutoff(self.rank, self.cutoff);
        for (a, c) in &self.terms {
            out.terms.insert(a.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &NovikovScalar) -> Self {
        let mut out = Self::zero_with_cutoff(self.rank, self.cutoff);
        for (a, v) in &self.terms {
            out.insert(a.clone(), v.mul(c));
        }
        out
    }

    /// Convolution of monomials; coefficients beyond `E_max` are dropped and
    /// the drop is kept visible through the scalars' truncation orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero_with_cutoff(self.rank, self.cutoff.min(other.cutoff));
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let sum: MonomialExponent = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                out.insert(sum, ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Logarithmic derivative along `theta`: `c Y^alpha -> <alpha, theta> c Y^alpha`.
    pub fn log_derivative(&self, theta: &[Rational]) -> Result<Self> {
        if theta.len() != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: theta.len() });
        }
        let mut out = Self::zero_with_cutoff(self.rank, self.cutoff);
        for (a, c) in &self.terms {
            let pairing = a
                .iter()
                .zip(theta.iter())
                .fold(Rational::zero(), |acc, (ai, ti)| acc + ti.scale(*ai));
            if !pairing.is_zero() {
                out.insert(a.clone(), c.scale(Complex64::new(pairing.to_f64(), 0.0)));
            }
        }
        Ok(out)
    }

    /// Logarithmic derivative along the i-th standard direction (zero-based).
    pub fn log_derivative_std(&self, i: usize) -> Self {
        let mut theta = vec![Rational::zero(); self.rank];
        theta[i] = Rational::one();
        self.log_derivative(&theta).expect("rank is consistent")
    }

    /// `exp(f) = sum f^k / k!` for `f` with every term of strictly positive
    /// scalar valuation; the constant term of the result is 1. Tails dropped
    /// at the cutoff (empty coefficients with finite order) are tolerated
    /// when their order is positive and resurface in the result's orders.
    pub fn exp(&self) -> Result<Self> {
        let mut min_val: Option<Rational> = None;
        let mut marker_floor: Option<Rational> = None;
        for (a, c) in &self.terms {
            if c.is_empty() {
                if let Order::Finite(o) = c.order() {
                    if o <= Rational::zero() {
                        return Err(Error::NonPositiveValuationTerm(format!(
                            "term Y^{a:?} unresolved at non-positive order {o}"
                        )));
                    }
                    marker_floor = Some(marker_floor.map_or(o, |m: Rational| m.min(o)));
                }
                continue;
            }
            let v = c.valuation_finite().expect("non-empty coefficient");
            if v <= Rational::zero() {
                return Err(Error::NonPositiveValuationTerm(format!(
                    "term Y^{a:?} has valuation {v} <= 0"
                )));
            }
            min_val = Some(min_val.map_or(v, |m| m.min(v)));
        }
        let mut acc = Self::one_at(self.rank, self.cutoff);
        if let Some(step) = min_val {
            let iter = self.cutoff.div_ceil(step).max(0);
            let mut pow = Self::one_at(self.rank, self.cutoff);
            let mut kfac = 1.0f64;
            for k in 1..=iter {
                kfac *= k as f64;
                pow = pow.mul(self)?;
                if pow.num_terms() == 0 {
                    break;
                }
                // marker-only powers still record where the tail was dropped
                acc = acc.add(&pow.scale(&NovikovScalar::from_f64(1.0 / kfac)))?;
            }
        }
        if let Some(floor) = marker_floor {
            // exp(f + O(T^floor)) = exp(f) (1 + O(T^floor))
            let mut capped = Self::zero_with_cutoff(self.rank, self.cutoff);
            for (a, c) in acc.terms {
                capped.terms.insert(a, c.truncate(Order::Finite(floor)));
            }
            acc = capped;
        }
        Ok(acc)
    }

    /// `sum c_alpha y^alpha` in Novikov arithmetic.
    ///
    /// Requires every stored term's valuation contribution to be bounded
    /// below; the result order accounts for the invisible tail above `E_max`.
    pub fn evaluate(&self, y: &TorusPoint) -> Result<NovikovScalar> {
        if y.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: y.rank() });
        }
        let trop = y.trop()?;
        let mut min_shift = Rational::zero();
        let mut acc = NovikovScalar::zero();
        for (a, c) in &self.terms {
            let shift = a
                .iter()
                .zip(trop.iter())
                .fold(Rational::zero(), |s, (ai, vi)| s + vi.scale(*ai));
            min_shift = min_shift.min(shift);
            let ya = y.power(a)?;
            acc = acc.add(&c.mul(&ya));
        }
        // terms hidden above the cutoff contribute valuation >= E_max + shift
        let tail = Order::Finite(self.cutoff + min_shift);
        Ok(acc.truncate(acc.order().min(tail)))
    }

    /// Exponent-wise distance to another series (max over coefficients).
    pub fn max_term_distance(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).cloned().collect();
        for k in keys {
            worst = worst.max(self.coeff(&k).distance(&other.coeff(&k)));
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).cloned().collect();
        keys.iter().all(|k| self.coeff(k).approx_eq(&other.coeff(k), tol))
    }

    /// Provable-vanishing bound: the series is known to vanish below this
    /// value; visible terms contribute their valuation, dropped tails their
    /// truncation order. `None` for an exactly zero series.
    pub fn min_valuation(&self) -> Result<Option<Rational>> {
        let mut out: Option<Rational> = None;
        for c in self.terms.values() {
            let v = match c.valuation() {
                Ok(Order::Finite(v)) => v,
                Ok(Order::Infinite) => continue,
                Err(_) => match c.order() {
                    Order::Finite(o) => o,
                    Order::Infinite => continue,
                },
            };
            out = Some(match out {
                None => v,
                Some(m) => v.min(m),
            });
        }
        Ok(out)
    }
}

fn fmt_monomial(alpha: &[i64]) -> String {
    let mut parts = Vec::new();
    for (i, a) in alpha.iter().enumerate() {
        if *a == 1 {
            parts.push(format!("Y{}", i + 1));
        } else if *a != 0 {
            parts.push(format!("Y{}^{}", i + 1, a));
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in &self.terms {
            if c.is_empty() {
                continue;
            }
            let mono = fmt_monomial(alpha);
            let coeff = format!("{c}");
            let needs_parens = coeff.contains(" + ") || coeff.contains(" - ");
            let part = if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono
            } else if coeff == "-1" {
                format!("-{mono}")
            } else if needs_parens {
                format!("({coeff})*{mono}")
            } else {
                format!("{coeff}*{mono}")
            };
            if first {
                write!(f, "{part}")?;
                first = false;
            } else if let Some(rest) = part.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {part}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point of `(Lambda^*)^n`: every coordinate has a resolved leading term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    coords: Vec<NovikovScalar>,
}

impl TorusPoint {
    pub fn new(coords: Vec<NovikovScalar>) -> Result<Self> {
        for (i, c) in coords.iter().enumerate() {
            if c.leading().is_none() {
                return Err(Error::TruncatedZero(format!(
                    "coordinate {i} of a torus point must be invertible"
                )));
            }
        }
        Ok(TorusPoint { coords })
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[NovikovScalar] {
        &self.coords
    }

    /// Componentwise valuation (the tropicalization map).
    pub fn trop(&self) -> Result<Vec<Rational>> {
        self.coords.iter().map(|c| c.valuation_finite()).collect()
    }

    /// `y^alpha = prod y_i^{alpha_i}`; negative powers via scalar inversion.
    pub fn power(&self, alpha: &[i64]) -> Result<NovikovScalar> {
        assert_eq!(alpha.len(), self.coords.len());
        let mut acc = NovikovScalar::one();
        for (c, a) in self.coords.iter().zip(alpha.iter()) {
            if *a == 0 {
                continue;
            }
            let base = if *a > 0 {
                c.clone()
            } else {
                let target = match c.order() {
                    Order::Finite(o) => o + c.valuation_finite()?.abs().scale(2),
                    Order::Infinite => default_energy_cutoff() + c.valuation_finite()?.abs().scale(2),
                };
                c.invert(target)?
            };
            for _ in 0..a.abs() {
                acc = acc.mul(&base);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: Rational) -> NovikovScalar {
        NovikovScalar::t_power(e)
    }

    #[test]
    fn mul_inverse_monomials() {
        // Y1 * Y1^-1 = 1
        let y = LaurentSeries::variable(2, 1);
        let yinv = LaurentSeries::monomial(2, vec![-1, 0], NovikovScalar::one());
        let p = y.mul(&yinv).unwrap();
        assert!(p.approx_eq(&LaurentSeries::one(2), 1e-9));
    }

    #[test]
    fn mul_polynomial_oracle() {
        // (1 + T Y2)(1 - T Y2) = 1 - T^2 Y2^2
        let ty2 = LaurentSeries::monomial(2, vec![0, 1], t(Rational::one()));
        let a = LaurentSeries::one(2).add(&ty2).unwrap();
        let b = LaurentSeries::one(2).sub(&ty2).unwrap();
        let got = a.mul(&b).unwrap();
        let expect = LaurentSeries::one(2)
            .sub(&LaurentSeries::monomial(2, vec![0, 2], t(Rational::from_int(2))))
            .unwrap();
        assert!(got.approx_eq(&expect, 1e-9));
        // f * 0 = 0
        assert!(a.mul(&LaurentSeries::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn log_derivative_formula() {
        // D_{(1,0)}(Y1^2 Y2) = 2 Y1^2 Y2
        let f = LaurentSeries::monomial(2, vec![2, 1], NovikovScalar::one());
        let d = f.log_derivative(&[Rational::one(), Rational::zero()]).unwrap();
        let expect = LaurentSeries::monomial(2, vec![2, 1], NovikovScalar::from_f64(2.0));
        assert!(d.approx_eq(&expect, 1e-9));
        // constants die
        let c = LaurentSeries::constant(2, t(Rational::one()));
        assert!(c.log_derivative(&[Rational::one(), Rational::one()]).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let f = LaurentSeries::variable(2, 1)
            .add(&LaurentSeries::monomial(2, vec![-1, 1], t(Rational::new(1, 2))))
            .unwrap();
        let g = LaurentSeries::one(2)
            .add(&LaurentSeries::monomial(2, vec![1, 1], t(Rational::one())))
            .unwrap();
        let theta = [Rational::new(2, 3), Rational::from_int(-1)];
        let lhs = f.mul(&g).unwrap().log_derivative(&theta).unwrap();
        let rhs = f
            .mul(&g.log_derivative(&theta).unwrap())
            .unwrap()
            .add(&g.mul(&f.log_derivative(&theta).unwrap()).unwrap())
            .unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn exp_series_basics() {
        assert!(LaurentSeries::zero(1).exp().unwrap().approx_eq(&LaurentSeries::one(1), 1e-9));
        // exp(T Y1) = sum T^k Y1^k / k!
        let f = LaurentSeries::monomial(1, vec![1], t(Rational::one()));
        let e = f.exp().unwrap();
        let mut oracle = LaurentSeries::zero(1);
        let mut kfac = 1.0;
        for k in 0..4i64 {
            if k > 0 {
                kfac *= k as f64;
            }
            oracle.insert(
                vec![k],
                NovikovScalar::monomial(Complex64::new(1.0 / kfac, 0.0), Rational::from_int(k)),
            );
        }
        assert!(e.approx_eq(&oracle, 1e-9));
        // exp(f+g) = exp(f) exp(g)
        let g = LaurentSeries::monomial(1, vec![-1], t(Rational::new(3, 2)));
        let lhs = f.add(&g).unwrap().exp().unwrap();
        let rhs = f.exp().unwrap().mul(&g.exp().unwrap()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
        // non-positive valuation rejected
        let bad = LaurentSeries::monomial(1, vec![1], NovikovScalar::one());
        assert!(matches!(bad.exp(), Err(Error::NonPositiveValuationTerm(_))));
    }

    #[test]
    fn exp_lands_in_unit_group() {
        let f = LaurentSeries::monomial(2, vec![1, -1], t(Rational::new(1, 3)))
            .add(&LaurentSeries::monomial(2, vec![0, 2], t(Rational::one())))
            .unwrap();
        let e = f.exp().unwrap();
        let c0 = e.coeff(&[0, 0]);
        assert!(c0.coeff(Rational::zero()).norm() > 0.5);
        for (alpha, c) in e.terms() {
            if alpha.iter().all(|a| *a == 0) || c.is_empty() {
                continue;
            }
            assert!(c.valuation_finite().unwrap() > Rational::zero());
        }
    }

    #[test]
    fn evaluate_examples() {
        // evaluate(Y1, (T^{1/3}, 1)) = T^{1/3}
        let y = TorusPoint::new(vec![t(Rational::new(1, 3)), NovikovScalar::one()]).unwrap();
        let f = LaurentSeries::variable(2, 1);
        let v = f.evaluate(&y).unwrap();
        assert!(v.truncate(Order::Finite(Rational::from_int(3)))
            .approx_eq(&t(Rational::new(1, 3)).truncate(Order::Finite(Rational::from_int(3))), 1e-9));
    }

    #[test]
    fn evaluate_is_ring_homomorphism() {
        let f = LaurentSeries::variable(2, 1)
            .add(&LaurentSeries::monomial(2, vec![0, -1], t(Rational::new(1, 2))))
            .unwrap();
        let g = LaurentSeries::one(2)
            .add(&LaurentSeries::monomial(2, vec![1, 1], t(Rational::one())))
            .unwrap();
        let y = TorusPoint::new(vec![
            NovikovScalar::from_f64(1.0).add(&t(Rational::new(1, 2))),
            t(Rational::new(-1, 3)).scale(Complex64::new(2.0, 1.0)),
        ])
        .unwrap();
        let lhs = f.mul(&g).unwrap().evaluate(&y).unwrap();
        let rhs = f.evaluate(&y).unwrap().mul(&g.evaluate(&y).unwrap());
        let cut = lhs.order().min(rhs.order());
        assert!(lhs.truncate(cut).approx_eq(&rhs.truncate(cut), 1e-7));
        let lhs2 = f.add(&g).unwrap().evaluate(&y).unwrap();
        let rhs2 = f.evaluate(&y).unwrap().add(&g.evaluate(&y).unwrap());
        let cut2 = lhs2.order().min(rhs2.order());
        assert!(lhs2.truncate(cut2).approx_eq(&rhs2.truncate(cut2), 1e-7));
    }

    #[test]
    fn trop_examples() {
        let y = TorusPoint::new(vec![t(Rational::new(1, 3)), NovikovScalar::one()]).unwrap();
        assert_eq!(y.trop().unwrap(), vec![Rational::new(1, 3), Rational::zero()]);
        let z = TorusPoint::new(vec![
            t(Rational::from_int(-1)).scale(Complex64::new(2.0, 0.0)).add(&t(Rational::one())),
            t(Rational::from_int(2)),
        ])
        .unwrap();
        assert_eq!(z.trop().unwrap(), vec![Rational::from_int(-1), Rational::from_int(2)]);
    }

    #[test]
    fn trop_pairing_identity() {
        // val(y^alpha) = <alpha, trop(y)>
        let y = TorusPoint::new(vec![
            t(Rational::new(1, 2)).scale(Complex64::new(3.0, -1.0)),
            t(Rational::new(-2, 3)),
        ])
        .unwrap();
        let trop = y.trop().unwrap();
        for alpha in [[1i64, 0], [0, 1], [2, -3], [-1, -1]] {
            let v = y.power(&alpha).unwrap().valuation_finite().unwrap();
            let expect = trop
                .iter()
                .zip(alpha.iter())
                .fold(Rational::zero(), |s, (t, a)| s + t.scale(*a));
            assert_eq!(v, expect);
        }
    }
}
