//! Composition, braces, Gerstenhaber bracket, Hochschild differential, cup
//! product, unit cochain and the quantum-Novikov label action.
//!
//! Tensor slots are evaluated without hidden Koszul signs; every sign lives
//! in an explicit sharp twist `x -> (-1)^{deg' x} x`, exactly as in the
//! displayed formulas.

use super::basis::{GradedBasis, LabelClass};
use super::scalar::Scalar;
use super::system::OperatorSystem;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::novikov::Rational;

/// Sharp sign operator on a basis vector: `(-1)^{deg' x}`.
pub fn sharp_sign(basis: &GradedBasis, i: usize) -> Scalar {
    if basis.deg_prime(i) % 2 != 0 {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

fn parity(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

/// Candidates of one system grouped by output index, with each candidate's
/// input sharp-parity precomputed.
struct SysIndex {
    by_output: Vec<Vec<(usize, LabelClass, Vec<u8>, Scalar, bool)>>,
}

impl SysIndex {
    fn build(sys: &OperatorSystem) -> SysIndex {
        let src = sys.src();
        let mut by_output = vec![Vec::new(); sys.dst().dim()];
        for (k, label, tensor) in sys.entries() {
            for (inputs, out, scalar) in tensor.iter() {
                let mut p = false;
                for i in inputs {
                    p ^= src.deg_prime(*i as usize).rem_euclid(2) == 1;
                }
                by_output[out as usize].push((k, label.clone(), inputs.clone(), scalar, p));
            }
        }
        SysIndex { by_output }
    }
}

/// One slot of a brace/composition expansion.
enum Slot<'a> {
    /// Identity on one input, optionally sharp-twisted.
    Id { twist: bool },
    /// A whole operator system: a slot may draw any of its entries.
    Sys { index: &'a SysIndex, twist: bool },
}

/// Expands `host_tensor` with the given slot assignment, accumulating into
/// `out`. `base_label` is the host label; every drawn entry adds its own.
fn expand_slots(
    out: &mut OperatorSystem,
    src: &GradedBasis,
    host: &Tensor,
    base_label: &LabelClass,
    slots: &[Slot<'_>],
    scale: Scalar,
) -> Result<()> {
    let cutoff = out.cutoff();
    for (host_inputs, host_out, host_scalar) in host.iter() {
        debug_assert_eq!(host_inputs.len(), slots.len());
        // depth-first over slot choices
        struct Frame {
            inputs: Vec<u8>,
            label: LabelClass,
            arity: usize,
            scalar: Scalar,
        }
        let mut stack = vec![Frame {
            inputs: Vec::new(),
            label: base_label.clone(),
            arity: 0,
            scalar: host_scalar * scale,
        }];
        for (slot, j) in slots.iter().zip(host_inputs.iter()) {
            let mut next = Vec::new();
            for frame in stack {
                match slot {
                    Slot::Id { twist } => {
                        let mut s = frame.scalar;
                        if *twist {
                            s = s * sharp_sign(src, *j as usize);
                        }
                        let mut inputs = frame.inputs.clone();
                        inputs.push(*j);
                        next.push(Frame {
                            inputs,
                            label: frame.label.clone(),
                            arity: frame.arity + 1,
                            scalar: s,
                        });
                    }
                    Slot::Sys { index, twist } => {
                        for (fk, flabel, finputs, fscalar, fparity) in &index.by_output[*j as usize] {
                            let label = frame.label.add(flabel);
                            if label.energy > cutoff {
                                continue;
                            }
                            let mut s = frame.scalar * *fscalar;
                            if *twist && *fparity {
                                s = -s;
                            }
                            let mut inputs = frame.inputs.clone();
                            inputs.extend_from_slice(finputs);
                            next.push(Frame {
                                inputs,
                                label,
                                arity: frame.arity + fk,
                                scalar: s,
                            });
                        }
                    }
                }
            }
            stack = next;
            if stack.is_empty() {
                break;
            }
        }
        for frame in stack {
            out.add_component(frame.arity, &frame.label, frame.inputs, host_out as usize, frame.scalar);
        }
    }
    Ok(())
}

/// Higher brace `g{f_1, ..., f_n}`.
///
/// Every `f_i` must be homogeneous in label degree; the sign weights are
/// `s_m = |f_{m+1}| + ... + |f_n|`, twisting the identity slots between
/// consecutive insertions and the inputs of each inserted `f_i`.
pub fn braces(g: &OperatorSystem, fs: &[&OperatorSystem]) -> Result<OperatorSystem> {
    if fs.is_empty() {
        return Ok(g.clone());
    }
    for f in fs {
        if f.src() != f.dst() || f.src() != g.src() {
            return Err(Error::BasisMismatch(
                "brace arguments must be endo-systems on the host source".into(),
            ));
        }
    }
    let n = fs.len();
    let mut degs = Vec::with_capacity(n);
    for f in fs {
        match f.label_degree()? {
            Some(d) => degs.push(d),
            // a zero argument annihilates the whole brace
            None => {
                return Ok(OperatorSystem::new(
                    g.src().clone(),
                    g.dst().clone(),
                    g.rank(),
                    g.cutoff(),
                )
                .reduced())
            }
        }
    }
    // s[m] = |f_{m+1}| + ... + |f_n| for m = 0..n (s[n] = 0)
    let mut s = vec![0i64; n + 1];
    for m in (0..n).rev() {
        s[m] = s[m + 1] + degs[m];
    }

    let reduced = g.is_reduced() || fs.iter().any(|f| f.is_reduced());
    let mut out = OperatorSystem::new(g.src().clone(), g.dst().clone(), g.rank(), {
        let mut c = g.cutoff();
        for f in fs {
            c = c.min(f.cutoff());
        }
        c
    });
    if reduced {
        out = out.reduced();
    }

    let indexes: Vec<SysIndex> = fs.iter().map(|f| SysIndex::build(f)).collect();
    for (hostk, hostlabel, hosttensor) in g.entries() {
        if hostk < n {
            continue;
        }
        // ordered choices of n insertion slots among hostk
        let mut positions = vec![0usize; n];
        enumerate_positions(0, 0, hostk, &mut positions, &mut |pos: &[usize]| {
            let mut slots: Vec<Slot<'_>> = Vec::with_capacity(hostk);
            let mut block = 0usize; // how many f's inserted so far
            for slot_idx in 0..hostk {
                if block < n && pos[block] == slot_idx {
                    slots.push(Slot::Sys { index: &indexes[block], twist: parity(s[block + 1]) });
                    block += 1;
                } else {
                    slots.push(Slot::Id { twist: parity(s[block]) });
                }
            }
            expand_slots(&mut out, g.src(), hosttensor, hostlabel, &slots, Scalar::one())
        })?;
    }
    out.prune();
    Ok(out)
}

fn enumerate_positions(
    idx: usize,
    start: usize,
    total: usize,
    positions: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let n = positions.len();
    if idx == n {
        return f(positions);
    }
    // need n - idx more slots out of total - start
    for p in start..total {
        if total - p < n - idx {
            break;
        }
        positions[idx] = p;
        enumerate_positions(idx + 1, p + 1, total, positions, f)?;
    }
    Ok(())
}

/// Composition `g . f` of operator systems (`f` first).
///
/// Rejected when `f` carries a `(0, zero-label)` entry, which would make the
/// sum infinite. Arity-0 entries of `g` pass through to the composite.
pub fn compose(g: &OperatorSystem, f: &OperatorSystem) -> Result<OperatorSystem> {
    if f.entry(0, &LabelClass::zero(f.rank())).is_some() {
        return Err(Error::CurvedRightFactor);
    }
    if f.dst() != g.src() {
        return Err(Error::BasisMismatch("compose: f target differs from g source".into()));
    }
    let mut out = OperatorSystem::new(
        f.src().clone(),
        g.dst().clone(),
        g.rank(),
        g.cutoff().min(f.cutoff()),
    );
    if g.is_reduced() {
        out = out.reduced();
    }
    let index = SysIndex::build(f);
    for (hostk, hostlabel, hosttensor) in g.entries() {
        if hostk == 0 {
            // length-zero passthrough
            out.insert(0, hostlabel.clone(), promote_zero_arity(hosttensor, f.src().dim()))?;
            continue;
        }
        let slots: Vec<Slot<'_>> =
            (0..hostk).map(|_| Slot::Sys { index: &index, twist: false }).collect();
        expand_slots(&mut out, g.src(), hosttensor, hostlabel, &slots, Scalar::one())?;
    }
    out.prune();
    Ok(out)
}

fn promote_zero_arity(t: &Tensor, dim_src: usize) -> Tensor {
    let mut out = Tensor::zero(0, dim_src, t.dim_dst());
    for (inputs, o, s) in t.iter() {
        debug_assert!(inputs.is_empty());
        out.add_entry(Vec::new(), o as usize, s);
    }
    out
}

/// Gerstenhaber bracket `[f, g] = f{g} - (-1)^{|f||g|} g{f}`.
pub fn bracket(f: &OperatorSystem, g: &OperatorSystem) -> Result<OperatorSystem> {
    let df = f.label_degree()?.unwrap_or(0);
    let dg = g.label_degree()?.unwrap_or(0);
    let fg = braces(f, &[g])?;
    let gf = braces(g, &[f])?;
    if parity(df * dg) {
        fg.add(&gf)
    } else {
        fg.sub(&gf)
    }
}

/// Hochschild differential `delta_m f = [m, f]`; raises the label degree by
/// one and preserves the reduced-complex condition.
pub fn hochschild_delta(m: &OperatorSystem, f: &OperatorSystem) -> Result<OperatorSystem> {
    bracket(m, f)
}

/// Yoneda cup product `f cup_m g = (-1)^{|f|+1} m{f, g}`.
pub fn cup(m: &OperatorSystem, f: &OperatorSystem, g: &OperatorSystem) -> Result<OperatorSystem> {
    let df = f.label_degree()?.unwrap_or(0);
    let b = braces(m, &[f, g])?;
    Ok(if parity(df + 1) { b.neg() } else { b })
}

/// Unit Hochschild cochain: single `(0, zero-label)` entry valued at the
/// strict unit; label degree -1.
pub fn unit_cochain(basis: &GradedBasis, rank: usize, cutoff: Rational) -> OperatorSystem {
    let mut e = OperatorSystem::new_endo(basis.clone(), rank, cutoff).reduced();
    let mut t = Tensor::zero(0, basis.dim(), basis.dim());
    t.add_entry(Vec::new(), basis.unit_index(), Scalar::one());
    e.insert(0, LabelClass::zero(rank), t).expect("unit cochain entry");
    e
}

/// Action of a sphere class `t^A`: every entry's label is shifted by
/// `(E(A), 2 c_1(A))`, leaving boundaries untouched.
pub fn act(a_energy: Rational, a_chern: i64, f: &OperatorSystem) -> Result<OperatorSystem> {
    let mut out =
        OperatorSystem::new(f.src().clone(), f.dst().clone(), f.rank(), f.cutoff());
    if f.is_reduced() {
        out = out.reduced();
    }
    for (k, label, tensor) in f.entries() {
        let shifted = label.shift_sphere(a_energy, a_chern);
        if shifted.energy < Rational::zero() {
            return Err(Error::NonzeroObstruction(format!(
                "sphere action produces negative energy on {label:?}"
            )));
        }
        out.insert(k, shifted, tensor.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::models::exterior_wedge;

    fn cutoff() -> Rational {
        Rational::from_int(4)
    }

    fn wedge_structure(n: usize, rank: usize) -> OperatorSystem {
        exterior_wedge(n, rank, cutoff())
    }

    #[test]
    fn sharp_examples() {
        let b = GradedBasis::exterior(2);
        // degree-1 generator: deg' = 0 -> +
        assert_eq!(sharp_sign(&b, 1), Scalar::one());
        // unit (degree 0): deg' = -1 -> -
        assert_eq!(sharp_sign(&b, 0), -Scalar::one());
        // degree-2 top class: deg' = 1 -> -
        assert_eq!(sharp_sign(&b, 3), -Scalar::one());
    }

    #[test]
    fn compose_with_identity() {
        let m = wedge_structure(2, 2);
        let id = OperatorSystem::identity_morphism(m.src(), 2, cutoff());
        let left = compose(&id, &m).unwrap();
        let right = compose(&m, &id).unwrap();
        assert!(left.approx_eq(&m, 0.0));
        assert!(right.approx_eq(&m, 0.0));
    }

    #[test]
    fn empty_brace_is_identity() {
        let m = wedge_structure(2, 2);
        let b = braces(&m, &[]).unwrap();
        assert!(b.approx_eq(&m, 0.0));
    }

    #[test]
    fn wedge_is_ainf() {
        // associativity of the signed wedge is the arity-3 relation
        let m = wedge_structure(2, 2);
        let mm = braces(&m, &[&m]).unwrap();
        assert!(mm.is_zero(), "wedge structure must satisfy m{{m}} = 0");
    }

    #[test]
    fn unit_cochain_degree() {
        let b = GradedBasis::exterior(2);
        let e = unit_cochain(&b, 2, cutoff());
        assert_eq!(e.label_degree().unwrap(), Some(-1));
    }

    #[test]
    fn act_identity_and_shift() {
        let b = GradedBasis::exterior(1);
        let mut f = OperatorSystem::new_endo(b.clone(), 1, cutoff()).reduced();
        let mut t = Tensor::zero(1, 2, 2);
        t.add_entry(vec![1], 0, Scalar::one());
        f.insert(1, LabelClass::new(Rational::new(1, 2), 2, vec![1]), t).unwrap();
        let same = act(Rational::zero(), 0, &f).unwrap();
        assert!(same.approx_eq(&f, 0.0));
        let shifted = act(Rational::one(), 1, &f).unwrap();
        let l = shifted.labels();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].energy, Rational::new(3, 2));
        assert_eq!(l[0].maslov, 4);
        assert_eq!(l[0].boundary, vec![1]);
        assert_eq!(
            shifted.label_degree().unwrap().unwrap(),
            f.label_degree().unwrap().unwrap() + 2
        );
    }
}
