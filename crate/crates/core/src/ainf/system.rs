//! Gapped operator systems: `(k, beta)`-indexed multilinear maps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::{GradedBasis, LabelClass};
use super::scalar::Scalar;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::novikov::Rational;

/// A gapped operator system between finite graded bases.
///
/// Gappedness: no entry with negative energy, none with zero energy and a
/// nonzero label, and the `(0, zero-label)` slot is admitted only on systems
/// flagged as reduced-complex elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSystem {
    src: GradedBasis,
    dst: GradedBasis,
    rank: usize,
    cutoff: Rational,
    reduced: bool,
    #[serde(with = "crate::textfmt::seq_pairs")]
    entries: BTreeMap<(usize, LabelClass), Tensor>,
}

impl OperatorSystem {
    pub fn new(src: GradedBasis, dst: GradedBasis, rank: usize, cutoff: Rational) -> Self {
        OperatorSystem { src, dst, rank, cutoff, reduced: false, entries: BTreeMap::new() }
    }

    pub fn new_endo(basis: GradedBasis, rank: usize, cutoff: Rational) -> Self {
        OperatorSystem::new(basis.clone(), basis, rank, cutoff)
    }

    /// Reduced-complex element: may carry a `(0, zero-label)` entry but must
    /// annihilate the strict unit in every input slot.
    pub fn reduced(mut self) -> Self {
        self.reduced = true;
        self
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn src(&self) -> &GradedBasis {
        &self.src
    }

    pub fn dst(&self) -> &GradedBasis {
        &self.dst
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cutoff(&self) -> Rational {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, k: usize, label: LabelClass, tensor: Tensor) -> Result<()> {
        if tensor.is_zero() {
            return Ok(());
        }
        assert_eq!(label.rank(), self.rank, "label rank mismatch");
        assert_eq!(tensor.arity(), k);
        assert_eq!(tensor.dim_src(), self.src.dim());
        assert_eq!(tensor.dim_dst(), self.dst.dim());
        if label.energy < Rational::zero() {
            return Err(Error::NonzeroObstruction(format!(
                "negative energy label {:?}",
                label
            )));
        }
        if label.energy.is_zero() && !label.is_zero() {
            return Err(Error::NonzeroObstruction(format!(
                "zero-energy nonzero label {:?}",
                label
            )));
        }
        if k == 0 && label.is_zero() && !self.reduced {
            return Err(Error::CurvedComposition(
                "(0, zero-label) entry requires a reduced-complex element".into(),
            ));
        }
        if label.energy > self.cutoff {
            return Ok(());
        }
        match self.entries.get_mut(&(k, label.clone())) {
            Some(existing) => {
                existing.add_assign(&tensor);
                if existing.is_zero() {
                    self.entries.remove(&(k, label));
                }
            }
            None => {
                self.entries.insert((k, label), tensor);
            }
        }
        Ok(())
    }

    /// Adds one sparse component, creating the entry tensor on demand.
    /// Skips the gappedness re-validation of [`Self::insert`]; callers feed
    /// labels already produced by validated systems.
    pub(crate) fn add_component(
        &mut self,
        k: usize,
        label: &LabelClass,
        inputs: Vec<u8>,
        out: usize,
        s: Scalar,
    ) {
        if s.is_zero() || label.energy > self.cutoff {
            return;
        }
        let dim_src = self.src.dim();
        let dim_dst = self.dst.dim();
        let entry = self
            .entries
            .entry((k, label.clone()))
            .or_insert_with(|| Tensor::zero(k, dim_src, dim_dst));
        entry.add_entry(inputs, out, s);
    }

    /// Drops entries emptied by cancellation.
    pub(crate) fn prune(&mut self) {
        self.entries.retain(|_, t| !t.is_zero());
    }

    pub fn entry(&self, k: usize, label: &LabelClass) -> Option<&Tensor> {
        self.entries.get(&(k, label.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &LabelClass, &Tensor)> {
        self.entries.iter().map(|((k, l), t)| (*k, l, t))
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(|(k, _)| *k).max().unwrap_or(0)
    }

    /// Distinct labels carried by entries, including the zero label if used.
    pub fn labels(&self) -> Vec<LabelClass> {
        let mut out: Vec<LabelClass> = self.entries.keys().map(|(_, l)| l.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Smallest positive energy among labels (the paper's h-bar).
    pub fn min_positive_energy(&self) -> Option<Rational> {
        self.entries
            .keys()
            .filter(|(_, l)| l.energy > Rational::zero())
            .map(|(_, l)| l.energy)
            .min()
    }

    /// Label degree `|t| = deg' t + mu(beta)`, demanded homogeneous across
    /// entries (the `(0, 0)` slot contributes `deg' t_{0,0}`).
    pub fn label_degree(&self) -> Result<Option<i64>> {
        let mut out: Option<i64> = None;
        for ((k, label), tensor) in &self.entries {
            let deg = tensor
                .homogeneous_degree(&self.src, &self.dst)
                .map_err(|(a, b)| {
                    Error::InhomogeneousLabelDegree(format!(
                        "entry ({k}, {label:?}) mixes operator degrees {a} and {b}"
                    ))
                })?;
            let Some(deg) = deg else { continue };
            let ld = deg + *k as i64 - 1 + label.maslov;
            match out {
                None => out = Some(ld),
                Some(prev) if prev != ld => {
                    return Err(Error::InhomogeneousLabelDegree(format!(
                        "label degrees {prev} and {ld} in one system"
                    )))
                }
                _ => {}
            }
        }
        Ok(out)
    }

    /// The identity morphism on a basis: single `(1, 0)` entry.
    pub fn identity_morphism(basis: &GradedBasis, rank: usize, cutoff: Rational) -> Self {
        let mut sys = OperatorSystem::new_endo(basis.clone(), rank, cutoff);
        sys.insert(1, LabelClass::zero(rank), Tensor::identity(basis.dim()))
            .expect("identity insert");
        sys
    }

    /// True when every entry with `k >= 1` kills the strict unit in each slot
    /// (the reduced-complex condition).
    pub fn satisfies_rcc_condition(&self) -> bool {
        let unit = self.src.unit_index() as u8;
        for ((k, _), tensor) in &self.entries {
            if *k == 0 {
                continue;
            }
            for (inputs, _, s) in tensor.iter() {
                if inputs.contains(&unit) && !s.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn neg(&self) -> Self {
        self.map_tensors(|t| t.neg())
    }

    pub fn scale(&self, c: Scalar) -> Self {
        self.map_tensors(|t| t.scale(c))
    }

    pub fn map_tensors(&self, f: impl Fn(&Tensor) -> Tensor) -> Self {
        let mut out = self.clone();
        out.entries = BTreeMap::new();
        for ((k, l), t) in &self.entries {
            let nt = f(t);
            if !nt.is_zero() {
                out.entries.insert((*k, l.clone()), nt);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::BasisMismatch("sum of systems over different bases".into()));
        }
        let mut out = self.clone();
        out.reduced = self.reduced || other.reduced;
        out.cutoff = self.cutoff.min(other.cutoff);
        for (k, l, t) in other.entries() {
            match out.entries.get_mut(&(k, l.clone())) {
                Some(existing) => {
                    existing.add_assign(t);
                    if existing.is_zero() {
                        out.entries.remove(&(k, l.clone()));
                    }
                }
                None => {
                    out.entries.insert((k, l.clone()), t.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.entries.keys().chain(other.entries.keys()).cloned().collect();
        keys.iter().all(|key| match (self.entries.get(key), other.entries.get(key)) {
            (Some(a), Some(b)) => a.approx_eq(b, tol),
            (Some(a), None) => a.max_norm() <= tol,
            (None, Some(b)) => b.max_norm() <= tol,
            (None, None) => true,
        })
    }

    pub fn max_norm(&self) -> f64 {
        self.entries.values().map(|t| t.max_norm()).fold(0.0, f64::max)
    }
}
