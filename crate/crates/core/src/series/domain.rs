//! Rational polyhedra and affinoid membership.

use serde::{Deserialize, Serialize};

use super::laurent::LaurentSeries;
use crate::novikov::Rational;

/// A bounded rational polyhedron given by `<v, normal> >= bound` constraints
/// with its vertex list precomputed by the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralDomain {
    constraints: Vec<(Vec<Rational>, Rational)>,
    vertices: Vec<Vec<Rational>>,
}

impl PolyhedralDomain {
    pub fn new(constraints: Vec<(Vec<Rational>, Rational)>, vertices: Vec<Vec<Rational>>) -> Self {
        assert!(!vertices.is_empty(), "polyhedron must be nonempty and bounded");
        for v in &vertices {
            for (normal, bound) in &constraints {
                let dot = normal
                    .iter()
                    .zip(v.iter())
                    .fold(Rational::zero(), |s, (n, x)| s + *n * *x);
                assert!(dot >= *bound, "vertex violates its own constraint system");
            }
        }
        PolyhedralDomain { constraints, vertices }
    }

    /// Axis-aligned box `[lo_i, hi_i]^n`.
    pub fn bounding_box(lo: &[Rational], hi: &[Rational]) -> Self {
        assert_eq!(lo.len(), hi.len());
        let n = lo.len();
        let mut constraints = Vec::new();
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            constraints.push((e.clone(), lo[i]));
            e[i] = -Rational::one();
            constraints.push((e, -hi[i]));
        }
        let mut vertices = vec![Vec::new()];
        for i in 0..n {
            let mut next = Vec::new();
            for v in vertices {
                let mut a = v.clone();
                a.push(lo[i]);
                next.push(a);
                if hi[i] != lo[i] {
                    let mut b = v;
                    b.push(hi[i]);
                    next.push(b);
                }
            }
            vertices = next;
        }
        PolyhedralDomain { constraints, vertices }
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn rank(&self) -> usize {
        self.vertices[0].len()
    }

    /// Necessary-condition convergence check: for every stored term of `f`,
    /// `min_v (val(c_alpha) + <alpha, v>) >= 0` over the vertex list. Returns
    /// the verdict and the margin (minimum attained value). Truncated data
    /// cannot certify the tail, so this is not sufficient for convergence.
    pub fn affinoid_member(&self, f: &LaurentSeries) -> (bool, Option<Rational>) {
        let mut margin: Option<Rational> = None;
        for (alpha, c) in f.terms() {
            let Ok(val) = c.valuation_finite() else {
                continue;
            };
            for v in &self.vertices {
                let dot = alpha
                    .iter()
                    .zip(v.iter())
                    .fold(Rational::zero(), |s, (a, x)| s + x.scale(*a));
                let m = val + dot;
                margin = Some(match margin {
                    None => m,
                    Some(cur) => cur.min(m),
                });
            }
        }
        match margin {
            None => (true, Some(Rational::zero())),
            Some(m) => (m >= Rational::zero(), Some(m)),
        }
    }
}
