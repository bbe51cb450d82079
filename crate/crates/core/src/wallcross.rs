//! Analytic coordinate changes between superpotential charts: the monomial
//! substitution `Y~^a -> T^{<a,lambda>} Y^a exp<a, F>`, its action on points,
//! inversion by energy-graded fixed-point iteration, and transport of
//! potentials and critical points.

use serde::{Deserialize, Serialize};

use crate::ainf::{LabelClass, OperatorSystem};
use crate::error::{Error, Result};
use crate::novikov::{NovikovScalar, Rational};
use crate::series::{LaurentSeries, TorusPoint};

/// A coordinate change with translation part `lambda` and Maslov-0 series
/// `F = (F_1, ..., F_n)`, every term of strictly positive scalar valuation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoordinateChange {
    lambda: Vec<Rational>,
    maslov0_series: Vec<LaurentSeries>,
}

impl CoordinateChange {
    pub fn new(lambda: Vec<Rational>, maslov0_series: Vec<LaurentSeries>) -> Result<Self> {
        if lambda.len() != maslov0_series.len() {
            return Err(Error::RankMismatch { left: lambda.len(), right: maslov0_series.len() });
        }
        for (i, f) in maslov0_series.iter().enumerate() {
            if f.rank() != lambda.len() {
                return Err(Error::RankMismatch { left: lambda.len(), right: f.rank() });
            }
            for (alpha, c) in f.terms() {
                let bound = match c.valuation() {
                    Ok(crate::novikov::Order::Finite(v)) => v,
                    Ok(crate::novikov::Order::Infinite) => continue,
                    Err(_) => match c.order() {
                        crate::novikov::Order::Finite(o) => o,
                        crate::novikov::Order::Infinite => continue,
                    },
                };
                if bound <= Rational::zero() {
                    return Err(Error::NonPositiveValuationTerm(format!(
                        "component {i} has a term of valuation {bound} at Y^{alpha:?}"
                    )));
                }
            }
        }
        Ok(CoordinateChange { lambda, maslov0_series })
    }

    pub fn identity(rank: usize, cutoff: Rational) -> Self {
        CoordinateChange {
            lambda: vec![Rational::zero(); rank],
            maslov0_series: vec![LaurentSeries::zero_with_cutoff(rank, cutoff); rank],
        }
    }

    /// Pure translation: `Y~^a -> T^{<a,lambda>} Y^a`.
    pub fn translation(lambda: Vec<Rational>, cutoff: Rational) -> Self {
        let rank = lambda.len();
        CoordinateChange {
            lambda,
            maslov0_series: vec![LaurentSeries::zero_with_cutoff(rank, cutoff); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn maslov0_series(&self) -> &[LaurentSeries] {
        &self.maslov0_series
    }

    fn pairing_lambda(&self, alpha: &[i64]) -> Rational {
        alpha
            .iter()
            .zip(self.lambda.iter())
            .fold(Rational::zero(), |s, (a, l)| s + l.scale(*a))
    }

    /// `<alpha, F>` as a series.
    fn pairing_series(&self, alpha: &[i64]) -> Result<LaurentSeries> {
        let rank = self.rank();
        let mut acc = LaurentSeries::zero_with_cutoff(rank, self.maslov0_series[0].cutoff());
        for (a, f) in alpha.iter().zip(self.maslov0_series.iter()) {
            if *a == 0 {
                continue;
            }
            acc = acc.add(&f.scale(&NovikovScalar::from_f64(*a as f64)))?;
        }
        Ok(acc)
    }

    /// Image of one monomial `Y~^alpha`.
    pub fn image_monomial(&self, alpha: &[i64]) -> Result<LaurentSeries> {
        let rank = self.rank();
        let shift = self.pairing_lambda(alpha);
        let expf = self.pairing_series(alpha)?.exp()?;
        let mut base = LaurentSeries::zero_with_cutoff(rank, self.cutoff());
        base.insert(alpha.to_vec(), NovikovScalar::t_power(shift));
        base.mul(&expf)
    }

    /// Energy cutoff inherited from the Maslov-0 series.
    pub fn cutoff(&self) -> Rational {
        self.maslov0_series
            .first()
            .map(|f| f.cutoff())
            .unwrap_or_else(|| Rational::from_int(4))
    }

    /// Monomialwise substitution; a ring homomorphism up to the cutoff.
    pub fn apply(&self, f: &LaurentSeries) -> Result<LaurentSeries> {
        if f.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: f.rank() });
        }
        let mut out = LaurentSeries::zero_with_cutoff(self.rank(), f.cutoff());
        for (alpha, c) in f.terms() {
            let img = self.image_monomial(alpha)?.scale(c);
            out = out.add(&img)?;
        }
        Ok(out)
    }

    /// Image point: `y~^a = T^{<a,lambda>} y^a exp<a, F(y)>`, coordinatewise.
    pub fn push_point(&self, y: &TorusPoint) -> Result<TorusPoint> {
        if y.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: y.rank() });
        }
        let mut coords = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let fi = self.maslov0_series[i].evaluate(y)?;
            let target = match fi.order() {
                crate::novikov::Order::Finite(o) => o,
                crate::novikov::Order::Infinite => self.maslov0_series[i].cutoff(),
            };
            let e = fi.exp(target)?;
            let c = y.coords()[i]
                .shift(self.lambda[i])
                .mul(&e);
            coords.push(c);
        }
        TorusPoint::new(coords)
    }

    /// Inverse change, solved by fixed-point iteration on `G = -psi(F)`
    /// (energy-graded: each stage is determined by the lower ones).
    pub fn invert(&self, cutoff: Rational) -> Result<CoordinateChange> {
        let rank = self.rank();
        let neg_lambda: Vec<Rational> = self.lambda.iter().map(|l| -*l).collect();
        let mut g: Vec<LaurentSeries> =
            vec![LaurentSeries::zero_with_cutoff(rank, cutoff); rank];
        let max_iter = 4 + cutoff.div_ceil(self.min_step(cutoff)).max(1);
        for _ in 0..max_iter {
            let psi = CoordinateChange::new(neg_lambda.clone(), g.clone()).map_err(|e| {
                Error::NonConvergence(format!("inverse left the positivity domain: {e}"))
            })?;
            let mut worst: Option<Rational> = None;
            let mut next = Vec::with_capacity(rank);
            for i in 0..rank {
                // residual of the defining equation F_i + phi(G_i) = 0
                let residual = self.maslov0_series[i].add(&self.apply(&g[i])?)?;
                if let Some(v) = residual.min_valuation()? {
                    worst = Some(match worst {
                        None => v,
                        Some(w) => w.min(v),
                    });
                }
                next.push(psi.apply(&self.maslov0_series[i])?.neg().with_cutoff(cutoff));
            }
            if worst.map_or(true, |v| v >= cutoff) {
                return CoordinateChange::new(neg_lambda, g);
            }
            g = next;
        }
        Err(Error::NonConvergence(format!(
            "inverse iteration still has residual below T^{cutoff}"
        )))
    }

    fn min_step(&self, fallback: Rational) -> Rational {
        let mut out: Option<Rational> = None;
        for f in &self.maslov0_series {
            for (_, c) in f.terms() {
                if let Ok(v) = c.valuation_finite() {
                    out = Some(match out {
                        None => v,
                        Some(m) => m.min(v),
                    });
                }
            }
        }
        out.filter(|v| *v > Rational::zero()).unwrap_or(fallback)
    }
}

/// `phi(W~) - W`; true when every residual term has valuation >= cutoff.
pub fn verify_potential_match(
    w: &LaurentSeries,
    w_tilde: &LaurentSeries,
    chg: &CoordinateChange,
    cutoff: Rational,
) -> Result<(bool, Option<Rational>)> {
    let residual = chg.apply(w_tilde)?.sub(w)?;
    let v = residual.min_valuation()?;
    Ok((v.map_or(true, |v| v >= cutoff), v))
}

/// Criticality transport report: residual vectors of `D W` at `y` and of
/// `D W~` at the pushed point.
#[derive(Clone, Debug)]
pub struct TransportReport {
    pub residual_here: Vec<NovikovScalar>,
    pub residual_there: Vec<NovikovScalar>,
    pub pushed: TorusPoint,
}

impl TransportReport {
    /// Both residual vectors vanish to the given valuation.
    pub fn critical_both_sides(&self, cutoff: Rational) -> bool {
        let ok = |v: &[NovikovScalar]| {
            v.iter().all(|s| {
                s.terms().iter().all(|(e, _)| *e >= cutoff)
            })
        };
        ok(&self.residual_here) && ok(&self.residual_there)
    }
}

/// Checks `D_theta W(y) = 0` iff `D_theta W~(push(y)) = 0` numerically by
/// reporting both residual vectors.
pub fn transport_critical(
    chg: &CoordinateChange,
    y: &TorusPoint,
    w: &LaurentSeries,
    w_tilde: &LaurentSeries,
) -> Result<TransportReport> {
    let n = chg.rank();
    let pushed = chg.push_point(y)?;
    let mut residual_here = Vec::with_capacity(n);
    let mut residual_there = Vec::with_capacity(n);
    for i in 0..n {
        residual_here.push(w.log_derivative_std(i).evaluate(y)?);
        residual_there.push(w_tilde.log_derivative_std(i).evaluate(&pushed)?);
    }
    Ok(TransportReport { residual_here, residual_there, pushed })
}

/// Energy transport of a gapped structure across a pure translation: each
/// label's energy moves by `-<d beta, lambda>` (the Fukaya-trick shift).
pub fn transport_structure(m: &OperatorSystem, lambda: &[Rational]) -> Result<OperatorSystem> {
    let mut out = OperatorSystem::new(
        m.src().clone(),
        m.dst().clone(),
        m.rank(),
        m.cutoff(),
    );
    if m.is_reduced() {
        out = out.reduced();
    }
    for (k, label, tensor) in m.entries() {
        let pairing = label
            .boundary
            .iter()
            .zip(lambda.iter())
            .fold(Rational::zero(), |s, (b, l)| s + l.scale(*b));
        let energy = label.energy - pairing;
        if energy < Rational::zero() {
            return Err(Error::NonzeroObstruction(format!(
                "translation drives label {label:?} to negative energy"
            )));
        }
        out.insert(
            k,
            LabelClass::new(energy, label.maslov, label.boundary.clone()),
            tensor.clone(),
        )?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cutoff() -> Rational {
        Rational::from_int(4)
    }

    /// Focus-focus style change: `Y1~ -> Y1 exp(T^a Y2)`, `Y2~ -> Y2`.
    fn focus_focus(a: Rational) -> CoordinateChange {
        let f1 = LaurentSeries::monomial(2, vec![0, 1], NovikovScalar::t_power(a));
        let f2 = LaurentSeries::zero_with_cutoff(2, cutoff());
        CoordinateChange::new(vec![Rational::zero(), Rational::zero()], vec![f1.with_cutoff(cutoff()), f2])
            .unwrap()
    }

    #[test]
    fn identity_change_is_identity() {
        let chg = CoordinateChange::identity(2, cutoff());
        let f = LaurentSeries::variable(2, 1)
            .add(&LaurentSeries::monomial(2, vec![-1, 2], NovikovScalar::t_power(Rational::new(1, 2))))
            .unwrap();
        assert!(chg.apply(&f).unwrap().approx_eq(&f, 1e-12));
        let y = TorusPoint::new(vec![NovikovScalar::one(), NovikovScalar::from_f64(2.0)]).unwrap();
        let img = chg.push_point(&y).unwrap();
        for (a, b) in img.coords().iter().zip(y.coords().iter()) {
            assert!(a.approx_eq(b, 1e-12));
        }
    }

    #[test]
    fn pure_translation_shifts_monomials() {
        let chg = CoordinateChange::translation(vec![Rational::one(), Rational::zero()], cutoff());
        let f = LaurentSeries::variable(2, 1);
        let img = chg.apply(&f).unwrap();
        let expect = LaurentSeries::monomial(2, vec![1, 0], NovikovScalar::t_power(Rational::one()));
        assert!(img.approx_eq(&expect, 1e-12));
        // push (1,1) -> (T, 1)
        let y = TorusPoint::new(vec![NovikovScalar::one(), NovikovScalar::one()]).unwrap();
        let img = chg.push_point(&y).unwrap();
        assert_eq!(img.trop().unwrap(), vec![Rational::one(), Rational::zero()]);
    }

    #[test]
    fn focus_focus_round_trip() {
        let chg = focus_focus(Rational::one());
        let inv = chg.invert(cutoff()).unwrap();
        let f = LaurentSeries::variable(2, 1)
            .add(&LaurentSeries::monomial(2, vec![2, -1], NovikovScalar::t_power(Rational::new(1, 3))))
            .unwrap()
            .with_cutoff(cutoff());
        let round = chg.apply(&inv.apply(&f).unwrap()).unwrap();
        assert!(
            round.sub(&f).unwrap().min_valuation().unwrap().map_or(true, |v| v >= Rational::from_int(3)),
            "round trip residual too shallow"
        );
        // inverse of a pure translation is the negative translation
        let tr = CoordinateChange::translation(vec![Rational::one(), Rational::new(-1, 2)], cutoff());
        let tr_inv = tr.invert(cutoff()).unwrap();
        assert_eq!(tr_inv.lambda(), &[-Rational::one(), Rational::new(1, 2)]);
        assert!(tr_inv.maslov0_series().iter().all(|f| f.is_zero()));
    }

    #[test]
    fn apply_is_ring_homomorphism() {
        let chg = focus_focus(Rational::new(1, 2));
        let f = LaurentSeries::variable(2, 1)
            .add(&LaurentSeries::one(2))
            .unwrap()
            .with_cutoff(cutoff());
        let g = LaurentSeries::monomial(2, vec![1, 1], NovikovScalar::t_power(Rational::new(1, 3)))
            .add(&LaurentSeries::variable(2, 2))
            .unwrap()
            .with_cutoff(cutoff());
        let lhs = chg.apply(&f.mul(&g).unwrap()).unwrap();
        let rhs = chg.apply(&f).unwrap().mul(&chg.apply(&g).unwrap()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
        let lhs = chg.apply(&f.add(&g).unwrap()).unwrap();
        let rhs = chg.apply(&f).unwrap().add(&chg.apply(&g).unwrap()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn apply_commutes_with_evaluation() {
        let chg = focus_focus(Rational::one());
        let f = LaurentSeries::variable(2, 1)
            .add(&LaurentSeries::monomial(2, vec![-1, 1], NovikovScalar::t_power(Rational::new(1, 2))))
            .unwrap()
            .with_cutoff(cutoff());
        let y = TorusPoint::new(vec![
            NovikovScalar::from_complex(Complex64::new(1.0, 0.5)),
            NovikovScalar::from_f64(0.7).add(&NovikovScalar::t_power(Rational::one())),
        ])
        .unwrap();
        let lhs = chg.apply(&f).unwrap().evaluate(&y).unwrap();
        let rhs = f.evaluate(&chg.push_point(&y).unwrap()).unwrap();
        let cut = lhs.order().min(rhs.order());
        assert!(lhs.truncate(cut).approx_eq(&rhs.truncate(cut), 1e-8));
    }

    #[test]
    fn unit_torus_preserved_when_lambda_zero() {
        let chg = focus_focus(Rational::new(3, 2));
        for seed in 0..8u32 {
            let re = 0.5 + 0.1 * seed as f64;
            let y = TorusPoint::new(vec![
                NovikovScalar::from_complex(Complex64::new(re, 0.3)),
                NovikovScalar::from_complex(Complex64::new(1.0, -0.2 * seed as f64)),
            ])
            .unwrap();
            let img = chg.push_point(&y).unwrap();
            assert!(img.trop().unwrap().iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn potential_match_negative_control() {
        let chg = CoordinateChange::identity(2, cutoff());
        let w = LaurentSeries::variable(2, 1);
        let (ok, _) = verify_potential_match(&w, &w, &chg, Rational::from_int(3)).unwrap();
        assert!(ok);
        let wrong = w.add(&LaurentSeries::one(2)).unwrap();
        let (ok, v) = verify_potential_match(&w, &wrong, &chg, Rational::from_int(3)).unwrap();
        assert!(!ok);
        assert_eq!(v, Some(Rational::zero()));
    }
}
