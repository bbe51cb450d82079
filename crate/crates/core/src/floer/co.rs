//! The closed-open composite: the Maslov-weight specialization of the chain
//! structure, the transfer map through the minimal model, and the
//! length-zero projection.

use crate::ainf::{braces, compose, OperatorSystem, Scalar};
use crate::error::{Error, Result};
use crate::novikov::NovikovScalar;
use crate::series::LaurentSeries;

use super::mk::SeriesCochain;

/// Entrywise scaling by `mu(beta)/2`: the algebraic specialization of the
/// closed-open operator at the first Chern class. The `(0, zero-label)` slot
/// carries the restriction of `c_1`, which vanishes in these models; the
/// result is a reduced cochain, closed for the Hochschild differential.
pub fn qhat_c1(m_chain: &OperatorSystem) -> OperatorSystem {
    let mut out = OperatorSystem::new(
        m_chain.src().clone(),
        m_chain.dst().clone(),
        m_chain.rank(),
        m_chain.cutoff(),
    )
    .reduced();
    for (k, label, tensor) in m_chain.entries() {
        debug_assert_eq!(label.maslov % 2, 0);
        let half = label.maslov / 2;
        if half == 0 {
            continue;
        }
        out.insert(k, label.clone(), tensor.scale(Scalar::from_int(half)))
            .expect("scaled entry stays gapped");
    }
    out
}

/// The transfer `Theta(phi) = (p{phi}) . i` realized with the perturbation
/// projection as the one-sided inverse of the inclusion.
pub fn theta(
    i_morph: &OperatorSystem,
    p_morph: &OperatorSystem,
    phi: &OperatorSystem,
) -> Result<OperatorSystem> {
    if !phi.satisfies_rcc_condition() {
        return Err(Error::CurvedComposition(
            "Theta needs a reduced-complex argument".into(),
        ));
    }
    let braced = braces(p_morph, &[phi])?;
    compose(&braced, i_morph).map_err(|e| match e {
        Error::CurvedRightFactor => Error::CurvedComposition(
            "inclusion morphism carries a (0, zero-label) entry".into(),
        ),
        other => other,
    })
}

/// Length-zero projection `P(f) = sum_beta T^{E(beta)} Y^{d beta} f_{0,beta}`.
pub fn pproj(f: &OperatorSystem) -> SeriesCochain {
    let rank = f.rank();
    let dim = f.dst().dim();
    let mut out = vec![LaurentSeries::zero_with_cutoff(rank, f.cutoff()); dim];
    for (k, label, tensor) in f.entries() {
        if k != 0 {
            continue;
        }
        let col = tensor.apply_basis(&[]);
        for (o, s) in col.iter().enumerate() {
            if !s.is_zero() {
                out[o].insert(
                    label.boundary.clone(),
                    NovikovScalar::monomial(s.to_complex(), label.energy),
                );
            }
        }
    }
    out
}

/// `CO(c_1)` through the algebraic pipeline: returns the cochain
/// `P(Theta(qhat(c_1)))` together with `W . unit` of the minimal model; the
/// two agree up to the cutoff.
pub fn co_c1(
    m_chain: &OperatorSystem,
    m_min: &OperatorSystem,
    i_morph: &OperatorSystem,
    p_morph: &OperatorSystem,
) -> Result<(SeriesCochain, SeriesCochain)> {
    let (w, q) = super::mk::superpotential(m_min);
    if !q.is_empty() {
        return Err(Error::NonzeroObstruction(format!(
            "minimal model has Maslov-0 curvature at {q:?}"
        )));
    }
    let phi = qhat_c1(m_chain);
    let transferred = theta(i_morph, p_morph, &phi)?;
    let lhs = pproj(&transferred);
    let unit = m_min.dst().unit_index();
    let rhs = super::mk::cochain_insert_unit_multiple(m_min.dst().dim(), unit, &w);
    Ok((lhs, rhs))
}

/// Quick structural check used by the test suites: the label degree of a
/// reduced cochain is preserved by the transfer.
pub fn theta_preserves_label_degree(
    i_morph: &OperatorSystem,
    p_morph: &OperatorSystem,
    phi: &OperatorSystem,
) -> Result<bool> {
    let before = phi.label_degree()?;
    let after = theta(i_morph, p_morph, phi)?.label_degree()?;
    Ok(match (before, after) {
        (_, None) => true,
        (Some(a), Some(b)) => a == b,
        (None, Some(_)) => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{hpl_minimal_model, unit_cochain, Contraction, LabelClass};
    use crate::floer::model::PotentialModel;
    use crate::floer::mk::cochain_approx_eq;
    use crate::novikov::Rational;

    #[test]
    fn qhat_drops_maslov_zero_and_copies_maslov_two() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 3).unwrap();
        let q = qhat_c1(&model.minimal_structure);
        for (k, label, tensor) in q.entries() {
            assert!(label.maslov != 0);
            if label.maslov == 2 {
                let orig = model.minimal_structure.entry(k, label).unwrap();
                assert!(tensor.approx_eq(orig, 0.0));
            }
        }
        // zero-label entries (Maslov 0) must be gone
        let zero = LabelClass::zero(2);
        assert!(q.entry(2, &zero).is_none());
    }

    #[test]
    fn theta_fixes_unit_cochain() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 3).unwrap();
        let m = &model.minimal_structure;
        let con = Contraction::trivial(m.src());
        let (m_min, i, p) = hpl_minimal_model(m, &con, 3).unwrap();
        assert!(m_min.approx_eq(m, 1e-12));
        let e = unit_cochain(m.src(), 2, m.cutoff());
        let te = theta(&i, &p, &e).unwrap();
        assert!(te.approx_eq(&e, 1e-12));
        // P(e) = unit
        let pe = pproj(&e);
        assert!(pe[0].approx_eq(&LaurentSeries::one(2), 1e-12));
        assert!(pe[1..].iter().all(|s| s.is_zero()));
    }

    #[test]
    fn co_c1_equals_w_unit_on_trivial_contraction() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 4).unwrap();
        let m = &model.minimal_structure;
        let con = Contraction::trivial(m.src());
        let (m_min, i, p) = hpl_minimal_model(m, &con, 4).unwrap();
        let (lhs, rhs) = co_c1(m, &m_min, &i, &p).unwrap();
        assert!(cochain_approx_eq(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn pproj_of_no_arity_zero_is_zero() {
        let model = PotentialModel::no_disks(2, Rational::from_int(2)).unwrap();
        let q = qhat_c1(&model.minimal_structure);
        let out = pproj(&q);
        assert!(out.iter().all(|s| s.is_zero()));
    }
}
