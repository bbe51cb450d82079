//! Potential models: minimal A-infinity structures on torus cohomology
//! built from Maslov-2 disk classes, and their chain-level thickenings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ainf::models::{exterior_wedge, ThickenedComplex};
use crate::ainf::{
    check_ainf, AinfReport, Contraction, DivisorPairing, GradedBasis, LabelClass, OperatorSystem,
};
use crate::error::{Error, Result};
use crate::novikov::Rational;

/// One Maslov-2 disk class with its weight (the coefficient of the unit in
/// the corresponding curvature term).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiskClass {
    pub label: LabelClass,
    pub weight: Complex64,
}

/// On-disk description of a potential model: torus rank plus disk classes,
/// in the shared text format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotentialModelSpec {
    pub rank: usize,
    pub classes: Vec<DiskClass>,
}

impl DiskClass {
    pub fn new(energy: Rational, boundary: Vec<i64>, weight: Complex64) -> Self {
        DiskClass { label: LabelClass::new(energy, 2, boundary), weight }
    }
}

/// A minimal-model potential package over the exterior algebra on `n`
/// degree-1 generators: the disk classes, the basis, and the divisor-closed
/// minimal structure they generate.
#[derive(Clone, Debug)]
pub struct PotentialModel {
    pub rank: usize,
    pub disk_classes: Vec<DiskClass>,
    pub basis: GradedBasis,
    pub minimal_structure: OperatorSystem,
}

impl PotentialModel {
    /// Builds the divisor-closed minimal structure generated by the classes:
    /// the wedge part plus `(w/k!) iota^k` at each class, up to the bounds.
    /// The construction never assumes the relations; call [`Self::validate`].
    pub fn from_disk_classes(
        n: usize,
        classes: Vec<DiskClass>,
        cutoff: Rational,
        arity_bound: usize,
    ) -> Result<Self> {
        let ctx = ThickenedComplex::bare(n);
        let mut m = exterior_wedge(n, n, cutoff);
        for class in &classes {
            if class.label.maslov != 2 {
                return Err(Error::NonzeroObstruction(format!(
                    "potential model classes must have Maslov index 2, got {}",
                    class.label.maslov
                )));
            }
            for k in 0..=arity_bound {
                let t = ctx.contraction_entry(&class.label.boundary, class.weight, k);
                m.insert(k, class.label.clone(), t)?;
            }
        }
        Ok(PotentialModel {
            rank: n,
            disk_classes: classes,
            basis: GradedBasis::exterior(n),
            minimal_structure: m,
        })
    }

    /// Clifford-type model for complex projective space: `n+1` classes of
    /// energy `E/(n+1)`, boundaries `e_1, ..., e_n, -(e_1+...+e_n)`.
    pub fn clifford(n: usize, energy: Rational, cutoff: Rational, arity_bound: usize) -> Result<Self> {
        let share = energy / Rational::from_int((n + 1) as i64);
        let mut classes = Vec::new();
        for i in 0..n {
            let mut b = vec![0i64; n];
            b[i] = 1;
            classes.push(DiskClass::new(share, b, Complex64::new(1.0, 0.0)));
        }
        classes.push(DiskClass::new(share, vec![-1; n], Complex64::new(1.0, 0.0)));
        Self::from_disk_classes(n, classes, cutoff, arity_bound)
    }

    /// Model with no disks at all (pure wedge algebra).
    pub fn no_disks(n: usize, cutoff: Rational) -> Result<Self> {
        Self::from_disk_classes(n, Vec::new(), cutoff, 2)
    }

    /// Loads a model description from the shared text format.
    pub fn from_spec_json(text: &str, cutoff: Rational, arity_bound: usize) -> Result<Self> {
        let spec: PotentialModelSpec = crate::textfmt::from_json(text)?;
        Self::from_disk_classes(spec.rank, spec.classes, cutoff, arity_bound)
    }

    pub fn to_spec_json(&self) -> Result<String> {
        crate::textfmt::to_json(&PotentialModelSpec {
            rank: self.rank,
            classes: self.disk_classes.clone(),
        })
    }

    /// Standard divisor pairing: generator `2^i` is the i-th coordinate
    /// direction.
    pub fn divisor_pairing(&self) -> DivisorPairing {
        (0..self.rank)
            .map(|i| {
                let mut coords = vec![Rational::zero(); self.rank];
                coords[i] = Rational::one();
                (1usize << i, coords)
            })
            .collect()
    }

    /// Index of the i-th degree-1 generator (zero-based).
    pub fn generator_index(&self, i: usize) -> usize {
        1 << i
    }

    /// Full relation/unitality/divisor/cyclic check of the built structure,
    /// plus the potential decomposition invariants: every Maslov-2 curvature
    /// entry is a multiple of the unit and no Maslov-0 curvature is present.
    pub fn validate(&self, arity_bound: usize) -> AinfReport {
        let pairing = self.divisor_pairing();
        let mut report = check_ainf(&self.minimal_structure, arity_bound, Some(&pairing), true);
        for (k, label, tensor) in self.minimal_structure.entries() {
            if k != 0 {
                continue;
            }
            if label.maslov == 0 && !label.is_zero() {
                report.violations.push(crate::ainf::Violation {
                    identity: "Maslov-0 curvature present (Q != 0)".into(),
                    arity: 0,
                    label: Some(label.clone()),
                    deviation: tensor.max_norm(),
                });
            }
            if label.maslov == 2 {
                for (_, o, s) in tensor.iter() {
                    if o as usize != self.basis.unit_index() && !s.is_zero() {
                        report.violations.push(crate::ainf::Violation {
                            identity: "curvature not a multiple of the unit".into(),
                            arity: 0,
                            label: Some(label.clone()),
                            deviation: s.norm(),
                        });
                    }
                }
            }
        }
        report
    }
}

/// Chain-level deformed torus model: the thickened dga with the same
/// divisor-type deformation, plus the contraction onto torus cohomology.
/// Feeds [`crate::ainf::hpl_minimal_model`]; validate before use.
pub fn deformed_chain_model(
    n: usize,
    classes: &[DiskClass],
    cutoff: Rational,
    arity_bound: usize,
) -> Result<(OperatorSystem, Contraction)> {
    let ctx = ThickenedComplex::new(n);
    let mut m = OperatorSystem::new_endo(ctx.basis.clone(), n, cutoff);
    m.insert(1, LabelClass::zero(n), ctx.differential())?;
    m.insert(2, LabelClass::zero(n), ctx.wedge_entry())?;
    for class in classes {
        for k in 0..=arity_bound {
            let t = ctx.contraction_entry(&class.label.boundary, class.weight, k);
            m.insert(k, class.label.clone(), t)?;
        }
    }
    let small = GradedBasis::exterior(n);
    let con = Contraction {
        big: ctx.basis.clone(),
        small: small.clone(),
        incl: ctx.inclusion(&small),
        proj: ctx.projection(&small),
        homotopy: ctx.homotopy(),
    };
    Ok((m, con))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_file_round_trip() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 3).unwrap();
        let text = model.to_spec_json().unwrap();
        let back = PotentialModel::from_spec_json(&text, Rational::from_int(2), 3).unwrap();
        assert!(back.minimal_structure.approx_eq(&model.minimal_structure, 0.0));
        assert_eq!(back.to_spec_json().unwrap(), text);
    }

    #[test]
    fn clifford_cp2_is_ainf_with_divisor() {
        let model =
            PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 4).unwrap();
        let report = model.validate(3);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn clifford_cp1_is_ainf() {
        let model =
            PotentialModel::clifford(1, Rational::one(), Rational::from_int(2), 4).unwrap();
        let report = model.validate(3);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    /// Parallel-boundary classes: the contraction cross-terms that obstruct
    /// exactness at composite labels vanish, so the deformed chain model is
    /// A-infinity on every checked window.
    pub(crate) fn parallel_classes() -> Vec<DiskClass> {
        vec![
            DiskClass::new(Rational::one(), vec![1, 0], Complex64::new(1.0, 0.0)),
            DiskClass::new(Rational::new(3, 2), vec![2, 0], Complex64::new(0.5, 0.0)),
        ]
    }

    #[test]
    fn deformed_chain_is_ainf() {
        let (m, con) = deformed_chain_model(2, &parallel_classes(), Rational::from_int(3), 4).unwrap();
        let zero = LabelClass::zero(2);
        con.validate(m.entry(1, &zero).unwrap()).unwrap();
        let report = check_ainf(&m, 4, None, false);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn multi_class_model_is_ainf_on_the_quadratic_window() {
        // the m_1/m_2 relation family is what the potential pipeline uses;
        // composite labels obstruct the arity-3 relations for crossing
        // boundaries, so the builder's contract is the quadratic window
        let model =
            PotentialModel::clifford(2, Rational::one(), Rational::from_int(2), 4).unwrap();
        let report = check_ainf(&model.minimal_structure, 3, None, false);
        assert!(report.passed(), "violations: {:?}", report.violations);
    }
}
