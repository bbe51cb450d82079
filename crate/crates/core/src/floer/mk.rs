//! The operators `m_k = sum_beta T^{E(beta)} Y^{d beta} m_{k,beta}` and the
//! superpotential extraction.


use crate::ainf::{LabelClass, OperatorSystem, Tensor};
use crate::error::{Error, Result};
use crate::novikov::{NovikovScalar, Rational};
use crate::series::LaurentSeries;

/// Element of `H^*(L) (x) Lambda[[pi_1(L)]]`: one Laurent series per basis
/// vector.
pub type SeriesCochain = Vec<LaurentSeries>;

pub fn cochain_zero(dim: usize, rank: usize, cutoff: Rational) -> SeriesCochain {
    vec![LaurentSeries::zero_with_cutoff(rank, cutoff); dim]
}

pub fn cochain_add(a: &SeriesCochain, b: &SeriesCochain) -> Result<SeriesCochain> {
    a.iter().zip(b.iter()).map(|(x, y)| x.add(y)).collect()
}

pub fn cochain_scale(a: &SeriesCochain, c: &LaurentSeries) -> Result<SeriesCochain> {
    a.iter().map(|x| x.mul(c)).collect()
}

pub fn cochain_approx_eq(a: &SeriesCochain, b: &SeriesCochain, tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.approx_eq(y, tol))
}

/// `c * unit` as a cochain.
pub fn cochain_insert_unit_multiple(
    dim: usize,
    unit: usize,
    c: &LaurentSeries,
) -> SeriesCochain {
    let mut out = vec![LaurentSeries::zero_with_cutoff(c.rank(), c.cutoff()); dim];
    out[unit] = c.clone();
    out
}

/// The `Lambda[[pi_1(L)]]`-multilinear operator `m_k` of a fixed arity.
pub struct MkOperator {
    pub arity: usize,
    rank: usize,
    cutoff: Rational,
    dim: usize,
    terms: Vec<(LabelClass, Tensor)>,
}

/// Collects the arity-`k` entries of a validated structure. Fails when a
/// Maslov-0 curvature term is present (the non-curved family needs `Q = 0`).
pub fn build_mk(m: &OperatorSystem, k: usize) -> Result<MkOperator> {
    for (kk, label, tensor) in m.entries() {
        if kk == 0 && label.maslov == 0 && !tensor.is_zero() && !label.is_zero() {
            return Err(Error::NonzeroObstruction(format!(
                "Maslov-0 curvature at {label:?}"
            )));
        }
    }
    let terms = m
        .entries()
        .filter(|(kk, _, _)| *kk == k)
        .map(|(_, l, t)| (l.clone(), t.clone()))
        .collect();
    Ok(MkOperator {
        arity: k,
        rank: m.rank(),
        cutoff: m.cutoff(),
        dim: m.src().dim(),
        terms,
    })
}

impl MkOperator {
    /// Apply to basis vectors.
    pub fn apply_basis(&self, inputs: &[usize]) -> SeriesCochain {
        let mut out = cochain_zero(self.dim, self.rank, self.cutoff);
        let inputs: Vec<u8> = inputs.iter().map(|i| *i as u8).collect();
        for (label, tensor) in &self.terms {
            let col = tensor.apply_basis(&inputs);
            for (o, s) in col.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                out[o].insert(
                    label.boundary.clone(),
                    NovikovScalar::monomial(s.to_complex(), label.energy),
                );
            }
        }
        out
    }

    /// Multilinear extension to series cochains.
    pub fn apply(&self, inputs: &[&SeriesCochain]) -> Result<SeriesCochain> {
        assert_eq!(inputs.len(), self.arity);
        let mut out = cochain_zero(self.dim, self.rank, self.cutoff);
        for (label, tensor) in &self.terms {
            let mut weight = LaurentSeries::zero_with_cutoff(self.rank, self.cutoff);
            weight.insert(label.boundary.clone(), NovikovScalar::t_power(label.energy));
            for (idx, o, s) in tensor.iter() {
                let mut prod = weight.scale(&NovikovScalar::from_complex(s.to_complex()));
                for (slot, i) in idx.iter().enumerate() {
                    prod = prod.mul(&inputs[slot][*i as usize])?;
                    if prod.is_zero() {
                        break;
                    }
                }
                if !prod.is_zero() {
                    out[o as usize] = out[o as usize].add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    /// Restriction to only the nonzero labels (drops the `beta = 0` part).
    pub fn positive_part(&self) -> MkOperator {
        MkOperator {
            arity: self.arity,
            rank: self.rank,
            cutoff: self.cutoff,
            dim: self.dim,
            terms: self.terms.iter().filter(|(l, _)| !l.is_zero()).cloned().collect(),
        }
    }
}

/// Extracts `W = sum_{mu=2} T^{E} Y^{d beta} <m_{0,beta}, unit>` and reports
/// any Maslov-0 length-zero contributions (which must be empty downstream).
pub fn superpotential(m: &OperatorSystem) -> (LaurentSeries, Vec<LabelClass>) {
    let rank = m.rank();
    let mut w = LaurentSeries::zero_with_cutoff(rank, m.cutoff());
    let mut q_report = Vec::new();
    let unit = m.dst().unit_index();
    for (k, label, tensor) in m.entries() {
        if k != 0 {
            continue;
        }
        if label.maslov == 2 {
            let col = tensor.apply_basis(&[]);
            let c = col[unit];
            if !c.is_zero() {
                w.insert(
                    label.boundary.clone(),
                    NovikovScalar::monomial(c.to_complex(), label.energy),
                );
            }
        } else if label.maslov == 0 && !label.is_zero() && !tensor.is_zero() {
            q_report.push(label.clone());
        }
    }
    (w, q_report)
}
