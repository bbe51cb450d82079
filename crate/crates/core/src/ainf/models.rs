//! Finite chain models: exterior algebras, their acyclic thickenings, and
//! the harmonic-style contraction between them.
//!
//! The thickened complex is `Lambda(th_1..th_n) (x) K` for the 3-dimensional
//! acyclic algebra `K = <1, e, de>` with `d e = de` and all products of
//! non-units zero. Basis index = `3 * mask + kpart`.

use num_complex::Complex64;

use super::basis::{GradedBasis, LabelClass};
use super::scalar::Scalar;
use super::system::OperatorSystem;
use super::tensor::Tensor;
use crate::novikov::Rational;

/// Sign and mask of a wedge of two exterior monomials; `None` when they
/// share a generator.
pub(crate) fn wedge_masks(a: u32, b: u32) -> Option<(bool, u32)> {
    if a & b != 0 {
        return None;
    }
    let mut sign = false;
    for i in 0..31 {
        if b & (1 << i) != 0 && (a >> (i + 1)).count_ones() % 2 == 1 {
            sign = !sign;
        }
    }
    Some((sign, a | b))
}

/// Pure wedge structure on the exterior algebra of `n` degree-1 generators:
/// `m_{2,0}(x, y) = (-1)^{deg x} x ^ y`, basis indexed by subset bitmask.
pub fn exterior_wedge(n: usize, rank: usize, cutoff: Rational) -> OperatorSystem {
    let basis = GradedBasis::exterior(n);
    let mut m = OperatorSystem::new_endo(basis.clone(), rank, cutoff);
    let mut t = Tensor::zero(2, basis.dim(), basis.dim());
    for a in 0..basis.dim() as u32 {
        for b in 0..basis.dim() as u32 {
            if let Some((sign, out)) = wedge_masks(a, b) {
                let dega = a.count_ones() as i64;
                let neg = (dega % 2 == 1) ^ sign;
                t.add_entry(
                    vec![a as u8, b as u8],
                    out as usize,
                    if neg { -Scalar::one() } else { Scalar::one() },
                );
            }
        }
    }
    m.insert(2, LabelClass::zero(rank), t).expect("wedge entry");
    m
}

/// The thickened dga underlying a deformed chain model; with `kdim = 1` it
/// degenerates to the bare exterior algebra (no acyclic factor).
pub struct ThickenedComplex {
    pub n: usize,
    pub basis: GradedBasis,
    kdim: usize,
}

const KDEG: [i64; 3] = [0, 1, 2];

impl ThickenedComplex {
    pub fn new(n: usize) -> Self {
        Self::with_kdim(n, 3)
    }

    /// Exterior algebra context without the acyclic factor.
    pub fn bare(n: usize) -> Self {
        Self::with_kdim(n, 1)
    }

    fn with_kdim(n: usize, kdim: usize) -> Self {
        let mut elements = Vec::new();
        for mask in 0u32..(1 << n) {
            for kpart in 0..kdim {
                let mut name = String::new();
                for i in 0..n {
                    if mask & (1 << i) != 0 {
                        if !name.is_empty() {
                            name.push('^');
                        }
                        name.push_str(&format!("th{}", i + 1));
                    }
                }
                let kname = ["", "e", "de"][kpart];
                let full = match (name.is_empty(), kname.is_empty()) {
                    (true, true) => "1".to_string(),
                    (true, false) => kname.to_string(),
                    (false, true) => name,
                    (false, false) => format!("{name}^{kname}"),
                };
                let deg = mask.count_ones() as i64 + KDEG[kpart];
                elements.push((full, deg));
            }
        }
        ThickenedComplex { n, basis: GradedBasis::new(elements, 0), kdim }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn mask(&self, idx: usize) -> u32 {
        (idx / self.kdim) as u32
    }

    fn kpart(&self, idx: usize) -> usize {
        idx % self.kdim
    }

    fn index(&self, mask: u32, kpart: usize) -> usize {
        mask as usize * self.kdim + kpart
    }

    /// Differential `d = 1 (x) d_K`: `e -> de` with the Koszul sign of the
    /// exterior factor.
    pub fn differential(&self) -> Tensor {
        let dim = self.dim();
        let mut t = Tensor::zero(1, dim, dim);
        for idx in 0..dim {
            if self.kpart(idx) == 1 {
                let mask = self.mask(idx);
                let sign = if mask.count_ones() % 2 == 1 { -Scalar::one() } else { Scalar::one() };
                t.add_entry(vec![idx as u8], self.index(mask, 2), sign);
            }
        }
        t
    }

    /// Graded-commutative product of two basis elements.
    pub fn product(&self, a: usize, b: usize) -> Option<(Scalar, usize)> {
        let (ka, kb) = (self.kpart(a), self.kpart(b));
        let kout = match (ka, kb) {
            (0, k) | (k, 0) => k,
            _ => return None, // e*e, e*de, de*de all vanish
        };
        let (sign_wedge, mask) = wedge_masks(self.mask(a), self.mask(b))?;
        // Koszul: kappa_a moved past the exterior part of b
        let koszul = (KDEG[ka] * self.mask(b).count_ones() as i64) % 2 == 1;
        let neg = sign_wedge ^ koszul;
        Some((if neg { -Scalar::one() } else { Scalar::one() }, self.index(mask, kout)))
    }

    /// Product of dense element vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                if let Some((s, o)) = self.product(a, b) {
                    out[o] = out[o] + *xa * *yb * s;
                }
            }
        }
        out
    }

    /// Contraction of a basis element with the boundary vector `v` (zero on
    /// the acyclic factor): an anti-derivation of degree -1.
    pub fn contract(&self, v: &[i64], idx: usize) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        let mask = self.mask(idx);
        let kpart = self.kpart(idx);
        let mut pos = 0;
        for i in 0..self.n {
            if mask & (1 << i) != 0 {
                let coeff = v[i];
                if coeff != 0 {
                    let reduced = mask & !(1 << i);
                    let sign = if pos % 2 == 1 { -1 } else { 1 };
                    let o = self.index(reduced, kpart);
                    out[o] = out[o] + Scalar::from_int(sign * coeff);
                }
                pos += 1;
            }
        }
        out
    }

    /// `m_{2,0}` with the quantum-correction sign convention.
    pub fn wedge_entry(&self) -> Tensor {
        let dim = self.dim();
        let mut t = Tensor::zero(2, dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                if let Some((s, o)) = self.product(a, b) {
                    let dega = self.basis.degree(a);
                    let s = if dega % 2 == 1 { -s } else { s };
                    t.add_entry(vec![a as u8, b as u8], o, s);
                }
            }
        }
        t
    }

    /// Divisor-type deformation entry `(w/k!) * contract^k` for one class.
    pub fn contraction_entry(&self, boundary: &[i64], weight: Complex64, k: usize) -> Tensor {
        let dim = self.dim();
        let mut t = Tensor::zero(k, dim, dim);
        let mut kfac = 1.0;
        for j in 1..=k {
            kfac *= j as f64;
        }
        let w = Scalar::from_complex(weight * (1.0 / kfac));
        if k == 0 {
            // curvature: w * unit
            t.add_entry(Vec::new(), self.basis.unit_index(), w);
            return t;
        }
        // iterate over all input tuples whose contractions are nonzero
        let mut inputs = vec![0u8; k];
        self.fill_contraction(&mut t, boundary, w, &mut inputs, 0, None);
        t
    }

    fn fill_contraction(
        &self,
        t: &mut Tensor,
        boundary: &[i64],
        w: Scalar,
        inputs: &mut Vec<u8>,
        slot: usize,
        acc: Option<Vec<Scalar>>,
    ) {
        let dim = self.dim();
        if slot == inputs.len() {
            let acc = acc.unwrap_or_else(|| {
                let mut unit = vec![Scalar::zero(); dim];
                unit[self.basis.unit_index()] = Scalar::one();
                unit
            });
            for (o, s) in acc.iter().enumerate() {
                if !s.is_zero() {
                    t.add_entry(inputs.clone(), o, *s * w);
                }
            }
            return;
        }
        for idx in 0..dim {
            let c = self.contract(boundary, idx);
            if c.iter().all(|s| s.is_zero()) {
                continue;
            }
            inputs[slot] = idx as u8;
            let next = match &acc {
                None => c,
                Some(prev) => self.multiply(prev, &c),
            };
            if next.iter().all(|s| s.is_zero()) {
                continue;
            }
            self.fill_contraction(t, boundary, w, inputs, slot + 1, Some(next));
        }
    }

    /// Inclusion of the exterior algebra (harmonic part), `kpart = 0`.
    pub fn inclusion(&self, small: &GradedBasis) -> Tensor {
        let mut t = Tensor::zero(1, small.dim(), self.dim());
        for mask in 0..small.dim() {
            t.add_entry(vec![mask as u8], self.index(mask as u32, 0), Scalar::one());
        }
        t
    }

    /// Projection killing the acyclic factor.
    pub fn projection(&self, small: &GradedBasis) -> Tensor {
        let mut t = Tensor::zero(1, self.dim(), small.dim());
        for mask in 0..small.dim() {
            t.add_entry(vec![self.index(mask as u32, 0) as u8], mask, Scalar::one());
        }
        t
    }

    /// Homotopy `G = 1 (x) G_K` with `G_K(de) = -e`, Koszul-signed.
    pub fn homotopy(&self) -> Tensor {
        let dim = self.dim();
        let mut t = Tensor::zero(1, dim, dim);
        for idx in 0..dim {
            if self.kpart(idx) == 2 {
                let mask = self.mask(idx);
                let sign = if mask.count_ones() % 2 == 1 { Scalar::one() } else { -Scalar::one() };
                t.add_entry(vec![idx as u8], self.index(mask, 1), sign);
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thickened_has_torus_cohomology_dimensions() {
        let c = ThickenedComplex::new(2);
        assert_eq!(c.dim(), 12);
        let d = c.differential();
        // d^2 = 0
        let dd = d.then_linear(&d);
        assert!(dd.is_zero());
    }

    #[test]
    fn product_is_graded_commutative() {
        let c = ThickenedComplex::new(2);
        for a in 0..c.dim() {
            for b in 0..c.dim() {
                let ab = c.product(a, b);
                let ba = c.product(b, a);
                match (ab, ba) {
                    (None, None) => {}
                    (Some((sa, oa)), Some((sb, ob))) => {
                        assert_eq!(oa, ob);
                        let koszul = (c.basis.degree(a) * c.basis.degree(b)) % 2 == 1;
                        let expect = if koszul { -sb } else { sb };
                        assert_eq!(sa, expect, "a={a} b={b}");
                    }
                    _ => panic!("one-sided product at ({a}, {b})"),
                }
            }
        }
    }

    #[test]
    fn leibniz_rule_for_differential() {
        let c = ThickenedComplex::new(1);
        let d = c.differential();
        let dim = c.dim();
        for a in 0..dim {
            for b in 0..dim {
                // d(ab) = da.b + (-1)^{deg a} a.db
                let mut lhs = vec![Scalar::zero(); dim];
                if let Some((s, o)) = c.product(a, b) {
                    let col = d.apply_basis(&[o as u8]);
                    for (i, v) in col.iter().enumerate() {
                        lhs[i] = lhs[i] + *v * s;
                    }
                }
                let mut rhs = vec![Scalar::zero(); dim];
                let da = d.apply_basis(&[a as u8]);
                for (i, v) in da.iter().enumerate() {
                    if !v.is_zero() {
                        if let Some((s, o)) = c.product(i, b) {
                            rhs[o] = rhs[o] + *v * s;
                        }
                    }
                }
                let db = d.apply_basis(&[b as u8]);
                let sign = if c.basis.degree(a) % 2 == 1 { -Scalar::one() } else { Scalar::one() };
                for (i, v) in db.iter().enumerate() {
                    if !v.is_zero() {
                        if let Some((s, o)) = c.product(a, i) {
                            rhs[o] = rhs[o] + *v * s * sign;
                        }
                    }
                }
                for i in 0..dim {
                    assert_eq!(lhs[i], rhs[i], "Leibniz at ({a}, {b}) slot {i}");
                }
            }
        }
    }

    #[test]
    fn contraction_anticommutes_with_d() {
        let c = ThickenedComplex::new(2);
        let d = c.differential();
        let v = vec![1i64, -2];
        let dim = c.dim();
        for idx in 0..dim {
            // d(iota x) + iota(d x) = 0
            let mut lhs = vec![Scalar::zero(); dim];
            let ix = c.contract(&v, idx);
            for (i, s) in ix.iter().enumerate() {
                if !s.is_zero() {
                    let col = d.apply_basis(&[i as u8]);
                    for (o, w) in col.iter().enumerate() {
                        lhs[o] = lhs[o] + *w * *s;
                    }
                }
            }
            let dx = d.apply_basis(&[idx as u8]);
            for (i, s) in dx.iter().enumerate() {
                if !s.is_zero() {
                    let col = c.contract(&v, i);
                    for (o, w) in col.iter().enumerate() {
                        lhs[o] = lhs[o] + *w * *s;
                    }
                }
            }
            for (o, s) in lhs.iter().enumerate() {
                assert!(s.is_zero(), "anticommutator at {idx} slot {o}");
            }
        }
    }
}
