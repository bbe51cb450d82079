//! Critical-point machinery for Laurent potentials: built-in example
//! potentials, residuals, and valuation-aware Newton lifting from tropical
//! seed data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floer::novikov_solve;
use crate::novikov::{NovikovScalar, Order, Rational};
use crate::series::{LaurentSeries, TorusPoint};

/// A potential with its precomputed gradient system.
#[derive(Clone, Debug)]
pub struct CriticalSystem {
    potential: LaurentSeries,
    derivatives: Vec<LaurentSeries>,
}

impl CriticalSystem {
    pub fn new(potential: LaurentSeries) -> Self {
        let n = potential.rank();
        let derivatives = (0..n).map(|i| potential.log_derivative_std(i)).collect();
        CriticalSystem { potential, derivatives }
    }

    pub fn potential(&self) -> &LaurentSeries {
        &self.potential
    }

    pub fn derivatives(&self) -> &[LaurentSeries] {
        &self.derivatives
    }

    pub fn rank(&self) -> usize {
        self.potential.rank()
    }
}

/// Seed for Newton lifting: coordinate valuations and leading coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Seed {
    pub valuations: Vec<Rational>,
    pub leads: Vec<Complex64>,
}

impl Seed {
    pub fn point(&self) -> Result<TorusPoint> {
        TorusPoint::new(
            self.valuations
                .iter()
                .zip(self.leads.iter())
                .map(|(v, c)| NovikovScalar::monomial(*c, *v))
                .collect(),
        )
    }
}

/// Built-in potentials from the mirror charts.
///
/// * `cp2_chart(E)`: `W(x0, y) = x0^{-1} + x0^{-1} y + T^E x0^2 y^{-1}`
///   (the chart potential with `x1` eliminated through `x0 x1 = 1 + y`);
/// * `p1xp1_chart(E1, E2)`: `x0^{-1} + x0^{-1} y + T^{E1} x0 y^{-1} + T^{E2} x0`;
/// * `clifford_cpn(n, E)`: `Y1 + ... + Yn + T^E (Y1...Yn)^{-1}`.
pub fn builtin_potential(name: &str, params: &[Rational], cutoff: Rational) -> Result<LaurentSeries> {
    let one = NovikovScalar::one;
    match name {
        "cp2_chart" => {
            let [e] = params else {
                return Err(Error::UnknownName("cp2_chart expects one energy".into()));
            };
            require_positive(*e)?;
            let mut w = LaurentSeries::zero_with_cutoff(2, cutoff);
            w.insert(vec![-1, 0], one());
            w.insert(vec![-1, 1], one());
            w.insert(vec![2, -1], NovikovScalar::t_power(*e));
            Ok(w)
        }
        "p1xp1_chart" => {
            let [e1, e2] = params else {
                return Err(Error::UnknownName("p1xp1_chart expects two energies".into()));
            };
            require_positive(*e1)?;
            require_positive(*e2)?;
            let mut w = LaurentSeries::zero_with_cutoff(2, cutoff);
            w.insert(vec![-1, 0], one());
            w.insert(vec![-1, 1], one());
            w.insert(vec![1, -1], NovikovScalar::t_power(*e1));
            w.insert(vec![1, 0], NovikovScalar::t_power(*e2));
            Ok(w)
        }
        "clifford_cpn" => {
            let [n, e] = params else {
                return Err(Error::UnknownName("clifford_cpn expects (n, energy)".into()));
            };
            if !n.is_integer() || n.numer() < 1 {
                return Err(Error::UnknownName(format!("bad dimension {n}")));
            }
            require_positive(*e)?;
            let n = n.numer() as usize;
            let mut w = LaurentSeries::zero_with_cutoff(n, cutoff);
            for i in 1..=n {
                w = w.add(&LaurentSeries::variable(n, i))?;
            }
            w.insert(vec![-1; n], NovikovScalar::t_power(*e));
            Ok(w)
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn require_positive(e: Rational) -> Result<()> {
    if e <= Rational::zero() {
        return Err(Error::UnknownName(format!("energy must be positive, got {e}")));
    }
    Ok(())
}

/// Seed table for a built-in potential, read off the leading-order balance.
pub fn builtin_seeds(name: &str, params: &[Rational]) -> Result<Vec<Seed>> {
    match name {
        "cp2_chart" => {
            let [e] = params else {
                return Err(Error::UnknownName("cp2_chart expects one energy".into()));
            };
            let third = *e / Rational::from_int(3);
            Ok((0..3)
                .map(|s| {
                    let phase = -2.0 * std::f64::consts::PI * s as f64 / 3.0;
                    Seed {
                        valuations: vec![-third, Rational::zero()],
                        leads: vec![Complex64::from_polar(1.0, phase), Complex64::new(1.0, 0.0)],
                    }
                })
                .collect())
        }
        "p1xp1_chart" => {
            let [e1, e2] = params else {
                return Err(Error::UnknownName("p1xp1_chart expects two energies".into()));
            };
            let half2 = *e2 / Rational::from_int(2);
            let halfdiff = (*e1 - *e2) / Rational::from_int(2);
            let mut seeds = Vec::new();
            for tau in [1.0, -1.0] {
                for sigma in [1.0, -1.0] {
                    seeds.push(Seed {
                        valuations: vec![-half2, halfdiff],
                        leads: vec![
                            Complex64::new(tau, 0.0),
                            Complex64::new(sigma * tau, 0.0),
                        ],
                    });
                }
            }
            Ok(seeds)
        }
        "clifford_cpn" => {
            let [n, e] = params else {
                return Err(Error::UnknownName("clifford_cpn expects (n, energy)".into()));
            };
            let n = n.numer() as usize;
            let share = *e / Rational::from_int((n + 1) as i64);
            Ok((0..=n)
                .map(|s| {
                    let phase = 2.0 * std::f64::consts::PI * s as f64 / (n + 1) as f64;
                    Seed {
                        valuations: vec![share; n],
                        leads: vec![Complex64::from_polar(1.0, phase); n],
                    }
                })
                .collect())
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// The vector `(D_i W(y))_i`.
pub fn critical_residual(w: &LaurentSeries, y: &TorusPoint) -> Result<Vec<NovikovScalar>> {
    (0..w.rank())
        .map(|i| w.log_derivative_std(i).evaluate(y))
        .collect()
}

/// All residual terms lie at or above the given valuation.
pub fn residual_vanishes(res: &[NovikovScalar], order: Rational) -> bool {
    res.iter().all(|s| s.terms().iter().all(|(e, _)| *e >= order))
}

/// Newton lifting `y <- y - J(y)^{-1} D(y)` in Novikov arithmetic with
/// T-adic quadratic convergence. The seed's Jacobian must be invertible over
/// the field: singularity surfaces through the elimination pivoting. (The
/// complex shadow of the leading terms alone can be singular at valid seeds,
/// with the degeneracy broken one T-order down.)
pub fn newton_lift(sys: &CriticalSystem, seed: &Seed, order: Rational) -> Result<TorusPoint> {
    let n = sys.rank();
    let mut y = seed.point()?;
    // Jacobian of the gradient system: J_{ij} = D_j D_i W
    let jac: Vec<Vec<LaurentSeries>> = (0..n)
        .map(|i| (0..n).map(|j| sys.derivatives[i].log_derivative_std(j)).collect())
        .collect();

    let work = Order::Finite(order + Rational::one());
    for _ in 0..48 {
        let res: Vec<NovikovScalar> = critical_residual(sys.potential(), &y)?
            .into_iter()
            .map(|r| r.truncate(work))
            .collect();
        if residual_vanishes(&res, order) {
            return TorusPoint::new(
                y.coords().iter().map(|c| c.truncate(work)).collect(),
            );
        }
        // solve J(y) dy = res over the Novikov field
        let mut jac_at = vec![vec![NovikovScalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                jac_at[i][j] = jac[i][j].evaluate(&y)?;
            }
        }
        let dy = novikov_solve(&jac_at, &res, order)?;
        let coords: Vec<NovikovScalar> = y
            .coords()
            .iter()
            .zip(dy.iter())
            .map(|(c, d)| c.sub(d).truncate(work))
            .collect();
        y = TorusPoint::new(coords)?;
    }
    Err(Error::NoConvergenceAtOrder(format!(
        "critical lifting stalled before order {order}"
    )))
}

/// Evaluates `W` at points that pass the residual test.
pub fn critical_values(
    w: &LaurentSeries,
    points: &[TorusPoint],
    order: Rational,
) -> Result<Vec<NovikovScalar>> {
    let mut out = Vec::with_capacity(points.len());
    for (i, y) in points.iter().enumerate() {
        let res = critical_residual(w, y)?;
        if !residual_vanishes(&res, order) {
            return Err(Error::NotCritical(format!("point {i} has residual {res:?}")));
        }
        out.push(w.evaluate(y)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lift_all(name: &str, params: &[Rational], order: Rational) -> (LaurentSeries, Vec<TorusPoint>) {
        let w = builtin_potential(name, params, order + Rational::one()).unwrap();
        let sys = CriticalSystem::new(w.clone());
        let seeds = builtin_seeds(name, params).unwrap();
        let pts = seeds
            .iter()
            .map(|s| newton_lift(&sys, s, order).unwrap())
            .collect();
        (w, pts)
    }

    #[test]
    fn builtin_shapes() {
        let w = builtin_potential("cp2_chart", &[Rational::one()], Rational::from_int(4)).unwrap();
        assert_eq!(w.num_terms(), 3);
        let w = builtin_potential(
            "p1xp1_chart",
            &[Rational::one(), Rational::one()],
            Rational::from_int(4),
        )
        .unwrap();
        assert_eq!(w.num_terms(), 4);
        let w = builtin_potential(
            "clifford_cpn",
            &[Rational::one(), Rational::new(1, 2)],
            Rational::from_int(4),
        )
        .unwrap();
        // n = 1: Y1 + T^E Y1^{-1}
        assert_eq!(w.num_terms(), 2);
        assert!(builtin_potential("unknown", &[], Rational::one()).is_err());
    }

    #[test]
    fn cp2_chart_critical_points() {
        let order = Rational::from_int(4);
        let (w, pts) = lift_all("cp2_chart", &[Rational::one()], order);
        assert_eq!(pts.len(), 3);
        for y in &pts {
            // x0 = T^{-1/3} zeta, y = 1 exactly
            let trop = y.trop().unwrap();
            assert_eq!(trop, vec![Rational::new(-1, 3), Rational::zero()]);
            let res = critical_residual(&w, y).unwrap();
            assert!(residual_vanishes(&res, order));
        }
        let vals = critical_values(&w, &pts, order).unwrap();
        for v in vals {
            let (e, c) = v.leading().unwrap();
            assert_eq!(e, Rational::new(1, 3));
            assert!((c.norm() - 3.0).abs() < 1e-8);
        }
    }

    #[test]
    fn p1xp1_chart_critical_points() {
        let order = Rational::from_int(4);
        let params = [Rational::one(), Rational::new(3, 2)];
        let (w, pts) = lift_all("p1xp1_chart", &params, order);
        assert_eq!(pts.len(), 4);
        // (T^{-3/4}, T^{-1/4}) is one of them, with residual zero
        for y in &pts {
            let trop = y.trop().unwrap();
            assert_eq!(trop, vec![Rational::new(-3, 4), Rational::new(-1, 4)]);
        }
        let vals = critical_values(&w, &pts, order).unwrap();
        // +-2T^{1/2} +- 2T^{3/4}
        for v in &vals {
            let (e, c) = v.leading().unwrap();
            assert_eq!(e, Rational::new(1, 2));
            assert!((c.re.abs() - 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn clifford_critical_points() {
        let order = Rational::from_int(3);
        let (w, pts) = lift_all("clifford_cpn", &[Rational::from_int(2), Rational::one()], order);
        assert_eq!(pts.len(), 3);
        for y in &pts {
            assert_eq!(y.trop().unwrap(), vec![Rational::new(1, 3); 2]);
        }
        let vals = critical_values(&w, &pts, order).unwrap();
        for v in vals {
            let (e, c) = v.leading().unwrap();
            assert_eq!(e, Rational::new(1, 3));
            assert!((c.norm() - 3.0).abs() < 1e-8);
        }
    }

    #[test]
    fn exact_point_is_fixed() {
        let order = Rational::from_int(4);
        let w = builtin_potential("cp2_chart", &[Rational::one()], order + Rational::one()).unwrap();
        let sys = CriticalSystem::new(w);
        let exact = Seed {
            valuations: vec![Rational::new(-1, 3), Rational::zero()],
            leads: vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        };
        let y = newton_lift(&sys, &exact, order).unwrap();
        // already critical: returned unchanged up to truncation
        let p = exact.point().unwrap();
        for (a, b) in y.coords().iter().zip(p.coords().iter()) {
            assert!(a.approx_eq(&b.truncate(a.order()), 1e-10));
        }
    }

    #[test]
    fn noncritical_point_rejected() {
        let order = Rational::from_int(3);
        let w = builtin_potential("cp2_chart", &[Rational::one()], order + Rational::one()).unwrap();
        let y = TorusPoint::new(vec![
            NovikovScalar::from_f64(1.0),
            NovikovScalar::from_f64(2.0),
        ])
        .unwrap();
        let res = critical_residual(&w, &y).unwrap();
        assert!(!residual_vanishes(&res, order));
        assert!(matches!(
            critical_values(&w, &[y], order),
            Err(Error::NotCritical(_))
        ));
    }

    #[test]
    fn scaling_invariance_of_gradient() {
        // critical points of c W equal those of W for a unit constant c
        let order = Rational::from_int(3);
        let w = builtin_potential("cp2_chart", &[Rational::one()], order + Rational::one()).unwrap();
        let c = NovikovScalar::from_complex(Complex64::new(0.0, 2.0));
        let cw = w.scale(&c);
        let sys = CriticalSystem::new(cw.clone());
        let seeds = builtin_seeds("cp2_chart", &[Rational::one()]).unwrap();
        let y = newton_lift(&sys, &seeds[0], order).unwrap();
        let res = critical_residual(&w, &y).unwrap();
        assert!(residual_vanishes(&res, order));
        // values scale by c
        let v = cw.evaluate(&y).unwrap();
        let v0 = w.evaluate(&y).unwrap();
        assert!(v.approx_eq(&v0.mul(&c), 1e-8));
    }
}
