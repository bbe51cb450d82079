//! The explicit dual-fibration example on the mirror variety
//! `x0 x1 = 1 + y`: pluggable area models, the topological embedding `j`,
//! the valuation map `F`, and the solved fibration `f = j^{-1} . F`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::novikov::{NovikovScalar, Order, Rational};

/// Comparison tolerance for the real-valued base computations.
pub const BASE_TOL: f64 = 1e-9;

/// A positive area model `psi(q1, q2)`, strictly increasing in `q2`, with an
/// inverse-in-`q2` solver. The true function is determined by disk areas the
/// source geometry never pins down in closed form, so models are pluggable.
pub trait PsiModel {
    fn psi(&self, q1: f64, q2: f64) -> f64;

    /// Solves `psi(q1, q2) = target` for `q2`; generic bisection fallback.
    fn invert_q2(&self, q1: f64, target: f64) -> Result<f64> {
        if target <= 0.0 {
            return Err(Error::NotInImage(format!("psi is positive, target {target}")));
        }
        let mut lo = -1.0f64;
        let mut hi = 1.0f64;
        for _ in 0..90 {
            if self.psi(q1, lo) <= target {
                break;
            }
            lo *= 2.0;
        }
        for _ in 0..90 {
            if self.psi(q1, hi) >= target {
                break;
            }
            hi *= 2.0;
        }
        if self.psi(q1, lo) > target || self.psi(q1, hi) < target {
            return Err(Error::NotInImage(format!("target {target} outside psi range")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.psi(q1, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Default stand-in model: `psi = q2/2 + sqrt(q1^2 + q2^2 + 1)/2`, positive,
/// smooth, strictly increasing in `q2`, with a closed-form inverse.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultPsi;

impl PsiModel for DefaultPsi {
    fn psi(&self, q1: f64, q2: f64) -> f64 {
        0.5 * q2 + 0.5 * (q1 * q1 + q2 * q2 + 1.0).sqrt()
    }

    fn invert_q2(&self, q1: f64, target: f64) -> Result<f64> {
        // q2/2 + sqrt(q1^2+q2^2+1)/2 = t  =>  q2 = (4t^2 - q1^2 - 1)/(4t)
        if target <= 0.0 {
            return Err(Error::NotInImage(format!("psi is positive, target {target}")));
        }
        let q2 = (4.0 * target * target - q1 * q1 - 1.0) / (4.0 * target);
        if 2.0 * target - q2 < 0.0 {
            return Err(Error::NotInImage(format!("target {target} below the branch")));
        }
        Ok(q2)
    }
}

/// A point of the mirror variety with `x0 x1 = 1 + y` and `val(x1) > 0`.
#[derive(Clone, Debug)]
pub struct MirrorPoint {
    pub x0: NovikovScalar,
    pub x1: NovikovScalar,
    pub y: NovikovScalar,
}

impl MirrorPoint {
    pub fn new(x0: NovikovScalar, x1: NovikovScalar, y: NovikovScalar) -> Result<Self> {
        let v1 = x1.valuation_finite()?;
        if v1 <= Rational::zero() {
            return Err(Error::NotInImage(format!(
                "|x1| < 1 requires val(x1) > 0, got {v1}"
            )));
        }
        y.valuation_finite()?;
        let lhs = x0.mul(&x1);
        let rhs = NovikovScalar::one().add(&y);
        let cut = lhs.order().min(rhs.order());
        if !lhs.truncate(cut).approx_eq(&rhs.truncate(cut), 1e-7) {
            return Err(Error::NotInImage("x0 x1 != 1 + y at truncation".into()));
        }
        Ok(MirrorPoint { x0, x1, y })
    }

    /// Samples a random point: draw `y` and `x1`, then set `x0 = (1+y)/x1`.
    pub fn sample(rng: &mut impl Rng, order: Rational) -> Result<Self> {
        // val(y) in [-2, 2] with denominator up to 4, avoiding val(y) = 0
        // so both branches of min{0, val y} get exercised
        let vy = loop {
            let den = rng.gen_range(1..=4);
            let v = Rational::new(rng.gen_range(-8..=8), den);
            if !v.is_zero() {
                break v;
            }
        };
        let cy = Complex64::new(rng.gen_range(0.4..1.8), rng.gen_range(-0.9..0.9));
        let mut y = NovikovScalar::monomial(cy, vy);
        if rng.gen_bool(0.5) {
            y = y.add(&NovikovScalar::monomial(
                Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
                vy + Rational::new(1, 2),
            ));
        }
        let den1 = rng.gen_range(1..=3);
        let vx1 = Rational::new(rng.gen_range(1..=6), den1);
        let cx1 = Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5));
        let x1 = NovikovScalar::monomial(cx1, vx1);
        let target = order + vx1.abs() + vy.abs() + Rational::from_int(2);
        let x0 = NovikovScalar::one()
            .add(&y)
            .mul(&x1.invert(target)?)
            .truncate(Order::Finite(target));
        MirrorPoint::new(x0, x1, y)
    }
}

/// The embedding `j(q1, q2)`.
pub fn embed_j(psi: &impl PsiModel, q1: f64, q2: f64) -> [f64; 3] {
    let a = psi.psi(q1, q2);
    let b = psi.psi(q1, 0.0);
    [(-a).min(-b) + q1.min(0.0), a.min(b), q1]
}

/// The valuation map `F(x0, x1, y)`.
pub fn map_f(psi: &impl PsiModel, p: &MirrorPoint) -> Result<[f64; 3]> {
    let v0 = p.x0.valuation_finite()?.to_f64();
    let v1 = p.x1.valuation_finite()?.to_f64();
    let vy = p.y.valuation_finite()?.to_f64();
    let b = psi.psi(vy, 0.0);
    Ok([v0.min(-b + vy.min(0.0)), v1.min(b), vy])
}

/// Solves `f = j^{-1} . F`: recovers `(q1, q2)` and certifies
/// `j(q1, q2) = F(p)` within [`BASE_TOL`].
pub fn solve_f(psi: &impl PsiModel, p: &MirrorPoint) -> Result<[f64; 2]> {
    let fv = map_f(psi, p)?;
    let q1 = fv[2];
    let pinned = psi.psi(q1, 0.0);
    let q2 = if fv[1] < pinned - BASE_TOL {
        // second coordinate reads off psi(q1, q2) with q2 < 0
        psi.invert_q2(q1, fv[1])?
    } else if fv[0] < -pinned + q1.min(0.0) - BASE_TOL {
        // first coordinate reads off -psi(q1, q2) with q2 > 0
        psi.invert_q2(q1, q1.min(0.0) - fv[0])?
    } else {
        0.0
    };
    let jv = embed_j(psi, q1, q2);
    let err = (0..3).map(|i| (jv[i] - fv[i]).abs()).fold(0.0, f64::max);
    if err > BASE_TOL {
        return Err(Error::NotInImage(format!(
            "j(q) misses F(p) by {err:.3e} at q = ({q1}, {q2})"
        )));
    }
    Ok([q1, q2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_psi_shape() {
        let psi = DefaultPsi;
        for q1 in [-2.0, 0.0, 1.5] {
            let mut prev = 0.0;
            for k in 0..20 {
                let q2 = -3.0 + 0.3 * k as f64;
                let v = psi.psi(q1, q2);
                assert!(v > 0.0);
                if k > 0 {
                    assert!(v > prev, "psi must increase in q2");
                }
                prev = v;
                // closed-form inverse round-trips
                let back = psi.invert_q2(q1, v).unwrap();
                assert!((back - q2).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn embed_j_branches() {
        let psi = DefaultPsi;
        // q2 = 0: both minima agree
        let q1 = 0.7;
        let j0 = embed_j(&psi, q1, 0.0);
        assert!((j0[0] - (-psi.psi(q1, 0.0))).abs() < 1e-12);
        assert!((j0[1] - psi.psi(q1, 0.0)).abs() < 1e-12);
        // monotone psi pins the second coordinate for q2 > 0
        let jp = embed_j(&psi, q1, 2.0);
        assert!((jp[1] - psi.psi(q1, 0.0)).abs() < 1e-12);
        // and the first coordinate for q2 < 0
        let jm = embed_j(&psi, q1, -2.0);
        assert!((jm[0] - (-psi.psi(q1, 0.0) + q1.min(0.0))).abs() < 1e-12);
    }

    #[test]
    fn embedding_is_injective_on_grid() {
        let psi = DefaultPsi;
        let mut images: Vec<[f64; 3]> = Vec::new();
        for a in 0..30 {
            for b in 0..30 {
                let q1 = -3.0 + 0.2 * a as f64;
                let q2 = -3.0 + 0.2 * b as f64;
                images.push(embed_j(&psi, q1, q2));
            }
        }
        for i in 0..images.len() {
            for j in (i + 1)..images.len() {
                let d = (0..3)
                    .map(|k| (images[i][k] - images[j][k]).abs())
                    .fold(0.0, f64::max);
                assert!(d > 1e-7, "images {i} and {j} collide");
            }
        }
    }

    #[test]
    fn mirror_equation_valuation_identity() {
        // val(x0) + val(x1) = val(1+y) = min{0, val y} when val y != 0
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = MirrorPoint::sample(&mut rng, Rational::from_int(4)).unwrap();
            let v0 = p.x0.valuation_finite().unwrap();
            let v1 = p.x1.valuation_finite().unwrap();
            let vy = p.y.valuation_finite().unwrap();
            let v1py = NovikovScalar::one().add(&p.y).valuation_finite().unwrap();
            assert_eq!(v0 + v1, v1py);
            if !vy.is_zero() {
                assert_eq!(v1py, vy.min(Rational::zero()));
            }
        }
    }

    #[test]
    fn round_trip_j_f() {
        let psi = DefaultPsi;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = MirrorPoint::sample(&mut rng, Rational::from_int(4)).unwrap();
            let q = solve_f(&psi, &p).unwrap();
            let jv = embed_j(&psi, q[0], q[1]);
            let fv = map_f(&psi, &p).unwrap();
            for k in 0..3 {
                assert!((jv[k] - fv[k]).abs() <= BASE_TOL);
            }
        }
    }

    #[test]
    fn fiber_points_share_image() {
        // points with the same coordinate valuations land on the same (q1, q2)
        let psi = DefaultPsi;
        let x1 = NovikovScalar::t_power(Rational::one());
        let inv_x1 = x1.invert(Rational::from_int(6)).unwrap();
        let mut images = Vec::new();
        for c in [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.3), Complex64::new(2.0, -1.0)] {
            let y = NovikovScalar::monomial(c, Rational::new(1, 2));
            let x0 = NovikovScalar::one().add(&y).mul(&inv_x1);
            let p = MirrorPoint::new(x0, x1.clone(), y).unwrap();
            images.push(solve_f(&psi, &p).unwrap());
        }
        for q in &images[1..] {
            assert!((q[0] - images[0][0]).abs() < 1e-9);
            assert!((q[1] - images[0][1]).abs() < 1e-9);
        }
    }
}
