//! Homological perturbation to minimal models.
//!
//! The contraction data is perturbed at the bar level: with side conditions
//! holding strictly, the perturbed projection and inclusion corestrict to
//! honest gapped morphisms with `p . i = id` on the nose. The recursions
//! below are the corestrictions of `P = pi + P delta G` and
//! `H = G + H delta G`, grounded at `(1, zero-label)`.

use std::collections::BTreeMap;

use super::basis::{GradedBasis, LabelClass};
use super::scalar::Scalar;
use super::system::OperatorSystem;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::novikov::Rational;

/// Strict contraction between a big chain complex and its cohomology model.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub big: GradedBasis,
    pub small: GradedBasis,
    /// degree-0 inclusion `small -> big`
    pub incl: Tensor,
    /// degree-0 projection `big -> small`
    pub proj: Tensor,
    /// degree -1 homotopy on `big`
    pub homotopy: Tensor,
}

impl Contraction {
    /// Trivial contraction of a complex onto itself (`G = 0`).
    pub fn trivial(basis: &GradedBasis) -> Self {
        Contraction {
            big: basis.clone(),
            small: basis.clone(),
            incl: Tensor::identity(basis.dim()),
            proj: Tensor::identity(basis.dim()),
            homotopy: Tensor::zero(1, basis.dim(), basis.dim()),
        }
    }

    /// Checks the side conditions exactly against the differential `d`:
    /// `pi i = id`, `i pi - id = d G + G d`, `G G = G i = pi G = 0`,
    /// plus `d i = 0`, `pi d = 0` and unit compatibility.
    pub fn validate(&self, d: &Tensor) -> Result<()> {
        let fail = |what: &str| Err(Error::ContractionSideConditionViolated(what.into()));
        let id_small = Tensor::identity(self.small.dim());
        let id_big = Tensor::identity(self.big.dim());
        if !self.incl.then_linear(&self.proj).approx_eq(&id_small, 0.0) {
            return fail("pi . i != id");
        }
        let ipi = self.proj.then_linear(&self.incl);
        let dg = self.homotopy.then_linear(d);
        let gd = d.then_linear(&self.homotopy);
        if !ipi.add(&id_big.neg()).approx_eq(&dg.add(&gd), 0.0) {
            return fail("i . pi - id != d G + G d");
        }
        if !self.homotopy.then_linear(&self.homotopy).is_zero() {
            return fail("G . G != 0");
        }
        if !self.incl.then_linear(&self.homotopy).is_zero() {
            return fail("G . i != 0");
        }
        if !self.homotopy.then_linear(&self.proj).is_zero() {
            return fail("pi . G != 0");
        }
        if !self.incl.then_linear(d).is_zero() {
            return fail("d . i != 0 (inclusion must land in closed elements)");
        }
        if !d.then_linear(&self.proj).is_zero() {
            return fail("pi . d != 0");
        }
        let unit_img = self.incl.apply_basis(&[self.small.unit_index() as u8]);
        for (o, s) in unit_img.iter().enumerate() {
            let want = if o == self.big.unit_index() { Scalar::one() } else { Scalar::zero() };
            if (s.to_complex() - want.to_complex()).norm() > 0.0 {
                return fail("i does not carry the unit to the unit");
            }
        }
        Ok(())
    }
}

/// Sharp-sign diagonal matrix on a basis.
fn sharp_diag(basis: &GradedBasis) -> Tensor {
    let mut t = Tensor::zero(1, basis.dim(), basis.dim());
    for i in 0..basis.dim() {
        let s = if basis.deg_prime(i) % 2 != 0 { -Scalar::one() } else { Scalar::one() };
        t.add_entry(vec![i as u8], i, s);
    }
    t
}

/// `host . (pre_1 x ... x pre_p x block x post_1 x ... x post_q)` where the
/// pre/post factors are 1-ary and `block` (if any) sits at slot `p`.
fn compose_through(
    host: &Tensor,
    pre: &[&Tensor],
    block: Option<&Tensor>,
    post: &[&Tensor],
    dim_src: usize,
) -> Tensor {
    let block_arity = block.map_or(0, |b| b.arity());
    let arity = pre.len() + block_arity + post.len();
    let mut out = Tensor::zero(arity, dim_src, host.dim_dst());
    'host: for (g, o, s_host) in host.iter() {
        debug_assert_eq!(g.len(), pre.len() + block.iter().len() + post.len());
        let mut partials: Vec<(Vec<u8>, Scalar)> = vec![(Vec::new(), s_host)];
        for (q, gq) in g.iter().enumerate() {
            let mut next = Vec::new();
            if q < pre.len() {
                for (inp, s) in pre[q].entries_with_output(*gq) {
                    for (acc, w) in &partials {
                        let mut a = acc.clone();
                        a.push(inp[0]);
                        next.push((a, *w * s));
                    }
                }
            } else if q == pre.len() && block.is_some() {
                for (inp, s) in block.unwrap().entries_with_output(*gq) {
                    for (acc, w) in &partials {
                        let mut a = acc.clone();
                        a.extend_from_slice(inp);
                        next.push((a, *w * s));
                    }
                }
            } else {
                let idx = q - pre.len() - block.iter().len();
                for (inp, s) in post[idx].entries_with_output(*gq) {
                    for (acc, w) in &partials {
                        let mut a = acc.clone();
                        a.push(inp[0]);
                        next.push((a, *w * s));
                    }
                }
            }
            partials = next;
            if partials.is_empty() {
                continue 'host;
            }
        }
        for (inputs, w) in partials {
            out.add_entry(inputs, o as usize, w);
        }
    }
    out
}

struct HplBuilder<'a> {
    con: &'a Contraction,
    sharp: Tensor,
    ipi: Tensor,
    /// `(nu, beta0, tensor)` for every chain entry except `(1, zero)`
    perturbation: Vec<(usize, LabelClass, Tensor)>,
    p_fam: BTreeMap<(usize, LabelClass), Tensor>,
    h_fam: BTreeMap<(usize, LabelClass), Tensor>,
}

impl<'a> HplBuilder<'a> {
    fn new(m_chain: &'a OperatorSystem, con: &'a Contraction) -> Self {
        let perturbation = m_chain
            .entries()
            .filter(|(k, l, _)| !(*k == 1 && l.is_zero()))
            .map(|(k, l, t)| (k, l.clone(), t.clone()))
            .collect();
        HplBuilder {
            con,
            sharp: sharp_diag(&con.big),
            ipi: con.proj.then_linear(&con.incl),
            perturbation,
            p_fam: BTreeMap::new(),
            h_fam: BTreeMap::new(),
        }
    }

    /// Per-slot operators after one homotopy insertion at slot `j` (0-based)
    /// and a left-twist boundary at `pos`: slots `< j` carry the sharped
    /// identity, slot `j` the homotopy, slots `> j` carry `i pi`; every slot
    /// `< pos` is further sharped.
    fn slot_op(&self, s: usize, j: usize, pos: usize) -> Tensor {
        let base = if s < j {
            self.sharp.clone()
        } else if s == j {
            self.con.homotopy.clone()
        } else {
            self.ipi.clone()
        };
        if s < pos {
            base.then_linear(&self.sharp)
        } else {
            base
        }
    }

    /// One recursion layer shared by the `p` and `h` families.
    fn family_entry(
        &mut self,
        which_p: bool,
        k: usize,
        label: &LabelClass,
        labels: &[LabelClass],
    ) -> Tensor {
        let dim_big = self.con.big.dim();
        let dim_out = if which_p { self.con.small.dim() } else { dim_big };
        let mut acc = Tensor::zero(k, dim_big, dim_out);
        if k == 1 && label.is_zero() {
            acc.add_assign(if which_p { &self.con.proj } else { &self.con.homotopy });
        }
        if k == 0 {
            return acc;
        }
        let perturbation = self.perturbation.clone();
        for j in 0..k {
            for (nu, beta0, mtensor) in &perturbation {
                if *nu > k {
                    continue;
                }
                let rest = label.sub(beta0);
                if rest.energy < Rational::zero() || !labels.contains(&rest) {
                    continue;
                }
                let k2 = k - nu + 1;
                for pos in 0..=(k - nu) {
                    let outer = if which_p {
                        self.p_fam.get(&(k2, rest.clone()))
                    } else {
                        self.h_fam.get(&(k2, rest.clone()))
                    };
                    let Some(outer) = outer else { continue };
                    if outer.is_zero() {
                        continue;
                    }
                    // per-slot operators of the original k slots
                    let slot_ops: Vec<Tensor> =
                        (0..k).map(|s| self.slot_op(s, j, pos)).collect();
                    // block: chain entry applied to its nu slots
                    let block_inner: Vec<&Tensor> =
                        slot_ops[pos..pos + nu].iter().collect();
                    let block =
                        compose_through(mtensor, &block_inner, None, &[], dim_big);
                    let pre: Vec<&Tensor> = slot_ops[..pos].iter().collect();
                    let post: Vec<&Tensor> = slot_ops[pos + nu..].iter().collect();
                    let term = compose_through(outer, &pre, Some(&block), &post, dim_big);
                    acc.add_assign(&term);
                }
            }
        }
        acc
    }

    /// Transferred entry at `(k, label)` through `outer_fam` (p for the
    /// minimal structure, h for the inclusion morphism).
    fn transferred(
        &self,
        use_p: bool,
        k: usize,
        label: &LabelClass,
        labels: &[LabelClass],
    ) -> Tensor {
        let dim_small = self.con.small.dim();
        let dim_out = if use_p { dim_small } else { self.con.big.dim() };
        let mut acc = Tensor::zero(k, dim_small, dim_out);
        if !use_p && k == 1 && label.is_zero() {
            acc.add_assign(&self.con.incl);
        }
        let sharped_incl = self.con.incl.then_linear(&self.sharp);
        for (nu, beta0, mtensor) in &self.perturbation {
            if *nu > k {
                continue;
            }
            let rest = label.sub(beta0);
            if rest.energy < Rational::zero() || !labels.contains(&rest) {
                continue;
            }
            let k2 = k - nu + 1;
            for pos in 0..=(k - nu) {
                let outer = if use_p {
                    self.p_fam.get(&(k2, rest.clone()))
                } else {
                    self.h_fam.get(&(k2, rest.clone()))
                };
                let Some(outer) = outer else { continue };
                if outer.is_zero() {
                    continue;
                }
                let incls: Vec<&Tensor> = (0..*nu).map(|_| &self.con.incl).collect();
                let block = compose_through(mtensor, &incls, None, &[], dim_small);
                let pre: Vec<&Tensor> = (0..pos).map(|_| &sharped_incl).collect();
                let post: Vec<&Tensor> = (0..k - nu - pos).map(|_| &self.con.incl).collect();
                let term = compose_through(outer, &pre, Some(&block), &post, dim_small);
                acc.add_assign(&term);
            }
        }
        acc
    }
}

/// Applies the homological perturbation to a validated chain-level structure.
///
/// Returns the minimal model on the small basis together with the inclusion
/// morphism `i: m_min -> m_chain` and the projection morphism
/// `p: m_chain -> m_min`; the pair satisfies `p . i = id` exactly.
/// `arity_bound` caps the arity of the emitted entries.
pub fn hpl_minimal_model(
    m_chain: &OperatorSystem,
    con: &Contraction,
    arity_bound: usize,
) -> Result<(OperatorSystem, OperatorSystem, OperatorSystem)> {
    if m_chain.src() != &con.big {
        return Err(Error::BasisMismatch("contraction does not match the chain basis".into()));
    }
    let zero = LabelClass::zero(m_chain.rank());
    let d = m_chain
        .entry(1, &zero)
        .cloned()
        .unwrap_or_else(|| Tensor::zero(1, con.big.dim(), con.big.dim()));
    con.validate(&d)?;

    // label monoid below the cutoff
    let cutoff = m_chain.cutoff();
    let generators = m_chain.labels();
    let mut labels: Vec<LabelClass> = vec![zero.clone()];
    loop {
        let mut grew = false;
        let snapshot = labels.clone();
        for l in &snapshot {
            for g in &generators {
                let s = l.add(g);
                if s.energy <= cutoff && !labels.contains(&s) {
                    labels.push(s);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    labels.sort_by(|a, b| (a.energy, &a.boundary, a.maslov).cmp(&(b.energy, &b.boundary, b.maslov)));

    // the curvature insertions can raise arity while consuming energy
    let hbar = m_chain.min_positive_energy();
    let internal_cap = match hbar {
        Some(h) if h > Rational::zero() => arity_bound + cutoff.div_ceil(h).max(0) as usize,
        _ => arity_bound + 1,
    };

    let mut builder = HplBuilder::new(m_chain, con);
    // fill families in (energy, arity) order so every reference is ready
    let mut keys: Vec<(usize, LabelClass)> = Vec::new();
    for label in &labels {
        for k in 0..=internal_cap {
            keys.push((k, label.clone()));
        }
    }
    keys.sort_by(|(ka, la), (kb, lb)| {
        (la.energy, *ka, &la.boundary, la.maslov).cmp(&(lb.energy, *kb, &lb.boundary, lb.maslov))
    });
    for (k, label) in &keys {
        let p = builder.family_entry(true, *k, label, &labels);
        builder.p_fam.insert((*k, label.clone()), p);
        let h = builder.family_entry(false, *k, label, &labels);
        builder.h_fam.insert((*k, label.clone()), h);
    }

    let rank = m_chain.rank();
    let mut m_min = OperatorSystem::new_endo(con.small.clone(), rank, cutoff);
    let mut i_morph = OperatorSystem::new(con.small.clone(), con.big.clone(), rank, cutoff);
    let mut p_morph = OperatorSystem::new(con.big.clone(), con.small.clone(), rank, cutoff);
    for label in &labels {
        for k in 0..=arity_bound {
            if !(k == 1 && label.is_zero()) {
                let t = builder.transferred(true, k, label, &labels);
                m_min.insert(k, label.clone(), t)?;
            }
            let ti = builder.transferred(false, k, label, &labels);
            i_morph.insert(k, label.clone(), ti)?;
            if let Some(p) = builder.p_fam.get(&(k, label.clone())) {
                p_morph.insert(k, label.clone(), p.clone())?;
            }
        }
    }
    Ok((m_min, i_morph, p_morph))
}
