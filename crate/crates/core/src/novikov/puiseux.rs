//! Newton-polygon Puiseux root solver.
//!
//! Candidate leading exponents come from the lower-hull slopes of the points
//! `(i, val(c_i))`; leading coefficients are the nonzero roots of the complex
//! slope polynomial; each simple branch is then lifted by a T-adic Newton
//! iteration, while repeated leading terms trigger the recursive substitution
//! `lambda = T^gamma (c + lambda')`.

use num_complex::Complex64;

use super::poly::NovikovPolynomial;
use super::rational::{Order, Rational};
use super::scalar::NovikovScalar;
use crate::error::{Error, Result};

/// Default recursion depth for repeated leading terms.
pub const DEFAULT_RAMIFICATION_DEPTH: u32 = 8;

/// Residual target for the complex simultaneous-iteration root finder.
const COMPLEX_RESIDUAL: f64 = 1e-12;

/// Returns `deg p` roots with multiplicity, each accurate up to
/// `target_order`.
pub fn puiseux_roots(p: &NovikovPolynomial, target_order: Rational) -> Result<Vec<NovikovScalar>> {
    puiseux_roots_depth(p, target_order, DEFAULT_RAMIFICATION_DEPTH)
}

pub fn puiseux_roots_depth(
    p: &NovikovPolynomial,
    target_order: Rational,
    depth: u32,
) -> Result<Vec<NovikovScalar>> {
    assert!(p.degree() >= 1, "root solving needs a nonconstant polynomial");
    solve(p, target_order, depth, None)
}

/// `min_val` filters branches to leading exponents strictly above the bound;
/// used by the ramification recursion to keep only the continuing branch.
fn solve(
    p: &NovikovPolynomial,
    target_order: Rational,
    depth: u32,
    min_val: Option<Rational>,
) -> Result<Vec<NovikovScalar>> {
    let coeffs = p.coeffs();
    let lead = coeffs.last().unwrap();
    if lead.is_truncated_zero() {
        return Err(Error::TruncatedZero(
            "leading coefficient unresolved at current truncation".into(),
        ));
    }

    let mut roots = Vec::new();

    // Exact zero roots: trailing coefficients that vanish identically.
    let mut low = 0usize;
    while low < coeffs.len() - 1 && coeffs[low].is_exact_zero() {
        low += 1;
    }
    if min_val.is_none() {
        for _ in 0..low {
            roots.push(NovikovScalar::zero());
        }
    } else {
        // A surviving branch has strictly positive valuation; an exact zero
        // root of the shifted polynomial means the expansion terminates.
        for _ in 0..low {
            roots.push(NovikovScalar::zero());
        }
    }
    if coeffs[low].is_truncated_zero() {
        return Err(Error::TruncatedZero(
            "trailing coefficient unresolved at current truncation".into(),
        ));
    }

    // Newton polygon over the known support.
    let mut points: Vec<(i64, Rational)> = Vec::new();
    for (i, c) in coeffs.iter().enumerate().skip(low) {
        if let Some((v, _)) = c.leading() {
            points.push((i as i64, v));
        }
    }
    let hull = lower_hull(&points);

    // Any truncated-zero coefficient that could dent the hull is fatal.
    for (i, c) in coeffs.iter().enumerate().skip(low) {
        if c.is_truncated_zero() {
            if let Order::Finite(o) = c.order() {
                if hull_height(&hull, i as i64).map_or(true, |h| o < h) {
                    return Err(Error::TruncatedZero(format!(
                        "coefficient of degree {i} only known to order {o}, below the Newton polygon"
                    )));
                }
            }
        }
    }

    for edge in hull.windows(2) {
        let (i0, v0) = edge[0];
        let (i1, v1) = edge[1];
        let width = i1 - i0;
        let slope = (v1 - v0) / Rational::from_int(width);
        let gamma = -slope;
        if let Some(bound) = min_val {
            if gamma <= bound {
                continue;
            }
        }
        // Slope polynomial from the points on this edge.
        let mut phi = vec![Complex64::new(0.0, 0.0); width as usize + 1];
        for (i, c) in coeffs.iter().enumerate().skip(low) {
            let i = i as i64;
            if i < i0 || i > i1 {
                continue;
            }
            if let Some((v, a)) = c.leading() {
                if v == v0 + slope * Rational::from_int(i - i0) {
                    phi[(i - i0) as usize] = a;
                }
            }
        }
        if phi[0].norm() < 1e-14 || phi[width as usize].norm() < 1e-14 {
            return Err(Error::LeadingDegeneracy(format!(
                "slope polynomial for exponent {gamma} has a vanishing endpoint coefficient"
            )));
        }
        for (z, mult) in complex_roots_clustered(&phi)? {
            if z.norm() < 1e-9 {
                return Err(Error::LeadingDegeneracy(format!(
                    "slope polynomial root at zero for exponent {gamma}"
                )));
            }
            if mult == 1 {
                let seed = NovikovScalar::monomial(z, gamma);
                roots.push(newton_lift_root(p, seed, target_order)?);
            } else {
                if depth == 0 {
                    return Err(Error::RamificationDepthExceeded {
                        depth: DEFAULT_RAMIFICATION_DEPTH,
                    });
                }
                // lambda = T^gamma (z + lambda'), continue on the branch with
                // val(lambda') > 0.
                let q = p.shift_scale(gamma, z);
                let sub_target = target_order - gamma;
                let inner = solve(&q, sub_target.max(Rational::zero()), depth - 1, Some(Rational::zero()))?;
                let mut taken = 0usize;
                for r in inner {
                    if taken == mult {
                        break;
                    }
                    let shifted = NovikovScalar::monomial(z, Rational::zero())
                        .add(&r)
                        .shift(gamma);
                    roots.push(shifted);
                    taken += 1;
                }
                if taken != mult {
                    return Err(Error::LeadingDegeneracy(format!(
                        "expected {mult} continuing branches at exponent {gamma}, found {taken}"
                    )));
                }
            }
        }
    }

    if min_val.is_none() && roots.len() != p.degree() {
        return Err(Error::LeadingDegeneracy(format!(
            "recovered {} roots for a degree-{} polynomial",
            roots.len(),
            p.degree()
        )));
    }
    Ok(roots)
}

fn derivative_coeffs(cs: &[Complex64]) -> Vec<Complex64> {
    if cs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    cs.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// Lower convex hull (monotone chain) of exact points.
fn lower_hull(points: &[(i64, Rational)]) -> Vec<(i64, Rational)> {
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for &(x, y) in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep strictly convex turns: drop (x2,y2) when it lies on or
            // above the segment (x1,y1)-(x,y)
            let lhs = (y2 - y1) * Rational::from_int(x - x1);
            let rhs = (y - y1) * Rational::from_int(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    hull
}

/// Height of the hull at abscissa `i`, when covered by some edge.
fn hull_height(hull: &[(i64, Rational)], i: i64) -> Option<Rational> {
    for e in hull.windows(2) {
        let (x0, y0) = e[0];
        let (x1, y1) = e[1];
        if x0 <= i && i <= x1 {
            let t = (y1 - y0) / Rational::from_int(x1 - x0);
            return Some(y0 + t * Rational::from_int(i - x0));
        }
    }
    hull.last().and_then(|&(x, y)| if x == i { Some(y) } else { None })
}

/// Durand-Kerner simultaneous iteration, followed by clustering to recover
/// multiplicities.
pub fn complex_roots_clustered(coeffs: &[Complex64]) -> Result<Vec<(Complex64, usize)>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // radius bound from coefficients
    let radius = 1.0
        + monic[..d]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut zs: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            Complex64::from_polar(0.4 * radius + 0.1, angle)
        })
        .collect();
    // residuals scale with the coefficient magnitudes
    let res_scale = 1.0 + monic.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut converged = false;
    for _ in 0..800 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= zs[i] - zs[j];
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let step = eval(zs[i]) / denom;
            zs[i] -= step;
            max_step = max_step.max(step.norm());
        }
        let max_res = zs.iter().map(|&z| eval(z).norm()).fold(0.0, f64::max);
        if max_res < COMPLEX_RESIDUAL * res_scale && max_step < 1e-11 * (1.0 + radius) {
            converged = true;
            break;
        }
    }
    if !converged {
        // multiple roots slow Durand-Kerner to linear convergence; clustering
        // below still recovers them, so only a gross failure is fatal
        let max_res = zs.iter().map(|&z| eval(z).norm()).fold(0.0, f64::max);
        if max_res > 1e-6 * res_scale {
            return Err(Error::LeadingDegeneracy(format!(
                "complex root finder stalled at residual {max_res:.3e}"
            )));
        }
    }
    // cluster with a tolerance relative to the root magnitudes
    let mut used = vec![false; d];
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for i in 0..d {
        if used[i] {
            continue;
        }
        let mut members = vec![zs[i]];
        used[i] = true;
        for j in (i + 1)..d {
            let tol = 1e-4 * (1.0 + zs[i].norm().max(zs[j].norm()));
            if !used[j] && (zs[j] - zs[i]).norm() < tol {
                used[j] = true;
                members.push(zs[j]);
            }
        }
        let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
        // polish with plain Newton; an m-fold root is simple for the
        // (m-1)-th derivative
        let mut poly = monic.clone();
        for _ in 1..members.len() {
            poly = derivative_coeffs(&poly);
        }
        let dpoly = derivative_coeffs(&poly);
        let horner = |cs: &[Complex64], z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cs.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        let mut z = centroid;
        for _ in 0..60 {
            let f = horner(&poly, z);
            if f.norm() < 1e-15 {
                break;
            }
            let df = horner(&dpoly, z);
            if df.norm() < 1e-280 {
                break;
            }
            z -= f / df;
        }
        clusters.push((z, members.len()));
    }
    Ok(clusters)
}

/// T-adic Newton iteration on a simple root seed.
fn newton_lift_root(
    p: &NovikovPolynomial,
    seed: NovikovScalar,
    target_order: Rational,
) -> Result<NovikovScalar> {
    let dp = p.derivative();
    let mut x = seed;
    let dpx0 = dp.evaluate(&x);
    let vdp = dpx0
        .valuation_finite()
        .map_err(|_| Error::TruncatedZero("derivative vanishes at Puiseux seed".into()))?;
    // residual must clear both the absolute target and the derivative offset
    let goal = target_order.max(target_order + vdp);
    let work = Order::Finite(goal + Rational::one() - vdp.min(Rational::zero()));
    for _ in 0..64 {
        let fx = p.evaluate(&x).truncate(work);
        let done = match fx.valuation() {
            Ok(Order::Infinite) => true,
            Ok(Order::Finite(v)) => v >= goal,
            Err(_) => true, // truncated zero: residual below the working order
        };
        if done {
            return Ok(x);
        }
        let dfx = dp.evaluate(&x);
        let inv = dfx.invert(goal - vdp + Rational::one())?;
        x = x.sub(&fx.mul(&inv)).truncate(work);
    }
    Err(Error::NoConvergenceAtOrder(format!(
        "Newton lifting stalled before order {target_order}"
    )))
}
