//! Sparse multilinear maps over finite graded bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::GradedBasis;
use super::scalar::Scalar;

/// A `k`-multilinear map `C_src^{tensor k} -> C_dst` stored sparsely as
/// `(input indices, output index) -> scalar`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    arity: usize,
    dim_src: usize,
    dim_dst: usize,
    #[serde(with = "crate::textfmt::seq_pairs")]
    entries: BTreeMap<(Vec<u8>, u8), Scalar>,
}

impl Tensor {
    pub fn zero(arity: usize, dim_src: usize, dim_dst: usize) -> Self {
        Tensor { arity, dim_src, dim_dst, entries: BTreeMap::new() }
    }

    /// Identity map (arity 1, square).
    pub fn identity(dim: usize) -> Self {
        let mut t = Tensor::zero(1, dim, dim);
        for i in 0..dim {
            t.add_entry(vec![i as u8], i, Scalar::one());
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_src(&self) -> usize {
        self.dim_src
    }

    pub fn dim_dst(&self) -> usize {
        self.dim_dst
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn add_entry(&mut self, inputs: Vec<u8>, out: usize, s: Scalar) {
        debug_assert_eq!(inputs.len(), self.arity);
        if s.is_zero() {
            return;
        }
        let key = (inputs, out as u8);
        let cur = self.entries.get(&key).copied().unwrap_or_else(Scalar::zero);
        let sum = cur + s;
        if sum.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, sum);
        }
    }

    pub fn get(&self, inputs: &[u8], out: usize) -> Scalar {
        self.entries
            .get(&(inputs.to_vec(), out as u8))
            .copied()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, u8, Scalar)> {
        self.entries.iter().map(|((i, o), s)| (i, *o, *s))
    }

    /// Entries grouped by output index (used when a slot must match).
    pub fn entries_with_output(&self, out: u8) -> impl Iterator<Item = (&Vec<u8>, Scalar)> {
        self.entries
            .iter()
            .filter(move |((_, o), _)| *o == out)
            .map(|((i, _), s)| (i, *s))
    }

    pub fn scale(&self, c: Scalar) -> Tensor {
        let mut out = Tensor::zero(self.arity, self.dim_src, self.dim_dst);
        for ((i, o), s) in &self.entries {
            out.add_entry(i.clone(), *o as usize, *s * c);
        }
        out
    }

    pub fn neg(&self) -> Tensor {
        self.scale(-Scalar::one())
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.arity, other.arity);
        assert_eq!(self.dim_src, other.dim_src);
        assert_eq!(self.dim_dst, other.dim_dst);
        let mut out = self.clone();
        for ((i, o), s) in &other.entries {
            out.add_entry(i.clone(), *o as usize, *s);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        assert_eq!(self.arity, other.arity);
        for ((i, o), s) in &other.entries {
            self.add_entry(i.clone(), *o as usize, *s);
        }
    }

    /// Apply to basis inputs, returning the dense output column.
    pub fn apply_basis(&self, inputs: &[u8]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim_dst];
        for ((i, o), s) in &self.entries {
            if i.as_slice() == inputs {
                out[*o as usize] = out[*o as usize] + *s;
            }
        }
        out
    }

    /// Apply to dense column vectors (multilinear extension).
    pub fn apply_columns(&self, cols: &[Vec<Scalar>]) -> Vec<Scalar> {
        debug_assert_eq!(cols.len(), self.arity);
        let mut out = vec![Scalar::zero(); self.dim_dst];
        'entry: for ((i, o), s) in &self.entries {
            let mut w = *s;
            for (slot, idx) in i.iter().enumerate() {
                let c = cols[slot][*idx as usize];
                if c.is_zero() {
                    continue 'entry;
                }
                w = w * c;
            }
            out[*o as usize] = out[*o as usize] + w;
        }
        out
    }

    /// Post-compose with a linear map (`arity`-preserving).
    pub fn then_linear(&self, lin: &Tensor) -> Tensor {
        assert_eq!(lin.arity(), 1);
        assert_eq!(lin.dim_src(), self.dim_dst);
        let mut out = Tensor::zero(self.arity, self.dim_src, lin.dim_dst());
        for ((i, o), s) in &self.entries {
            for (li, ls) in lin.entries_with_output_as_input(*o) {
                out.add_entry(i.clone(), li as usize, *s * ls);
            }
        }
        out
    }

    /// Pairs `(output index of lin, scalar)` for entries whose single input
    /// equals `idx`.
    fn entries_with_output_as_input(&self, idx: u8) -> Vec<(u8, Scalar)> {
        self.entries
            .iter()
            .filter(|((i, _), _)| i[0] == idx)
            .map(|((_, o), s)| (*o, *s))
            .collect()
    }

    /// Homogeneous operator degree `deg(out) - sum deg(in)`, or `None` for
    /// the zero tensor. Errors with the offending pair when inhomogeneous.
    pub fn homogeneous_degree(
        &self,
        src: &GradedBasis,
        dst: &GradedBasis,
    ) -> Result<Option<i64>, (i64, i64)> {
        let mut deg: Option<i64> = None;
        for ((i, o), _) in &self.entries {
            let d = dst.degree(*o as usize) - i.iter().map(|x| src.degree(*x as usize)).sum::<i64>();
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return Err((prev, d)),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.values().map(|s| s.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Tensor, tol: f64) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).cloned().collect();
        keys.iter().all(|k| {
            let a = self.entries.get(k).copied().unwrap_or_else(Scalar::zero);
            let b = other.entries.get(k).copied().unwrap_or_else(Scalar::zero);
            (a.to_complex() - b.to_complex()).norm() <= tol
        })
    }
}
