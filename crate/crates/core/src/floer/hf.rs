//! Self Floer cohomology at a point: the specialized differential and its
//! rank over the Novikov field by valuation-pivot elimination.

use crate::ainf::OperatorSystem;
use crate::error::{Error, Result};
use crate::novikov::{NovikovScalar, Order, Rational};
use crate::series::TorusPoint;

/// Pivot margin: a pivot is accepted only when its valuation sits at least
/// this far below the truncation order of the entry.
const E_MARGIN: i64 = 1;

/// The specialized Floer complex `(H^*(L) (x) Lambda, m_1^y)`.
#[derive(Clone, Debug)]
pub struct FloerComplex {
    pub matrix: Vec<Vec<NovikovScalar>>,
}

impl FloerComplex {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// `(m_1^y)^2 = 0` up to truncation.
    pub fn differential_squares_to_zero(&self, tol: f64) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let mut acc = NovikovScalar::zero();
                for k in 0..n {
                    acc = acc.add(&self.matrix[i][k].mul(&self.matrix[k][j]));
                }
                if !acc.is_empty() && acc.terms().iter().any(|(_, c)| c.norm() > tol) {
                    return false;
                }
            }
        }
        true
    }
}

/// Matrix of `m_1^y` in the basis of the structure: column `j` holds the
/// coordinates of `m_1^y(e_j)`.
pub fn m1_matrix_at(m: &OperatorSystem, y: &TorusPoint) -> Result<FloerComplex> {
    if y.rank() != m.rank() {
        return Err(Error::RankMismatch { left: m.rank(), right: y.rank() });
    }
    let dim = m.src().dim();
    let mut matrix = vec![vec![NovikovScalar::zero(); dim]; dim];
    for (k, label, tensor) in m.entries() {
        if k != 1 {
            continue;
        }
        let weight = y.power(&label.boundary)?.shift(label.energy);
        for (inputs, o, s) in tensor.iter() {
            let j = inputs[0] as usize;
            let c = weight.scale(s.to_complex());
            matrix[o as usize][j] = matrix[o as usize][j].add(&c);
        }
    }
    Ok(FloerComplex { matrix })
}

/// Rank of a Novikov matrix by Gaussian elimination with minimal-valuation
/// pivoting. `PrecisionLoss` when a pivot decision is unresolvable at the
/// current truncation.
pub fn novikov_rank(matrix: &[Vec<NovikovScalar>]) -> Result<usize> {
    let mut a: Vec<Vec<NovikovScalar>> = matrix.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut used_row = vec![false; rows];
    let mut rank = 0usize;
    let margin = Rational::from_int(E_MARGIN);
    // Entries emptied by cancellation keep a finite order; they count as
    // resolved zeros when that order clears the scale of the input data.
    let mut floor = margin;
    for row in &a {
        for entry in row {
            if let Ok(Order::Finite(v)) = entry.valuation() {
                floor = floor.max(v + margin);
            }
        }
    }
    for _ in 0..cols.min(rows) {
        // global minimal-valuation pivot among the remaining submatrix
        let mut pivot: Option<(usize, usize, Rational)> = None;
        let mut unresolved = false;
        for (r, row) in a.iter().enumerate() {
            if used_row[r] {
                continue;
            }
            for (c, entry) in row.iter().enumerate() {
                match entry.valuation() {
                    Ok(Order::Finite(v)) => {
                        // the pivot must be visibly above the truncation noise
                        if let Order::Finite(o) = entry.order() {
                            if v > o - margin {
                                unresolved = true;
                                continue;
                            }
                        }
                        if pivot.as_ref().map_or(true, |(_, _, pv)| v < *pv) {
                            pivot = Some((r, c, v));
                        }
                    }
                    Ok(Order::Infinite) => {}
                    Err(_) => {
                        if let Order::Finite(o) = entry.order() {
                            if o <= floor {
                                unresolved = true;
                            }
                        }
                    }
                }
            }
        }
        let Some((pr, pc, pv)) = pivot else {
            if unresolved {
                return Err(Error::PrecisionLoss(
                    "all remaining candidate pivots are below truncation".into(),
                ));
            }
            break;
        };
        used_row[pr] = true;
        rank += 1;
        // eliminate the pivot column from the remaining rows
        let pivot_entry = a[pr][pc].clone();
        let inv_order = match pivot_entry.order() {
            Order::Finite(o) => o - pv + pv.abs() + Rational::one(),
            Order::Infinite => Rational::from_int(8) + pv.abs(),
        };
        let inv = pivot_entry.invert(inv_order)?;
        let pivot_row = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == pr || used_row[r] {
                continue;
            }
            let factor = row[pc].mul(&inv);
            if factor.is_empty() && !factor.order().is_finite() {
                continue;
            }
            for c in 0..cols {
                let delta = factor.mul(&pivot_row[c]).neg();
                row[c] = row[c].add(&delta);
            }
        }
    }
    Ok(rank)
}

/// Solves `A x = b` over the Novikov field by Gauss-Jordan elimination with
/// minimal-valuation pivoting, accurate to `order` past the solution's
/// leading exponents.
pub fn novikov_solve(
    a: &[Vec<NovikovScalar>],
    b: &[NovikovScalar],
    order: Rational,
) -> Result<Vec<NovikovScalar>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut aug: Vec<Vec<NovikovScalar>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut used_row = vec![false; n];
    for col in 0..n {
        // minimal-valuation pivot in this column among unused rows
        let mut pick: Option<(usize, Rational)> = None;
        for (r, row) in aug.iter().enumerate() {
            if used_row[r] {
                continue;
            }
            if let Ok(Order::Finite(v)) = row[col].valuation() {
                if pick.map_or(true, |(_, pv)| v < pv) {
                    pick = Some((r, v));
                }
            }
        }
        let Some((pr, pv)) = pick else {
            return Err(Error::SingularLeadingJacobian);
        };
        used_row[pr] = true;
        pivot_of_col[col] = Some(pr);
        let inv = aug[pr][col].invert(order + pv.abs().scale(2) + Rational::one())?;
        // normalize the pivot row
        for c in 0..=n {
            aug[pr][c] = aug[pr][c].mul(&inv);
        }
        let pivot_row = aug[pr].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == pr {
                continue;
            }
            let factor = row[col].clone();
            if factor.is_empty() {
                continue;
            }
            for c in 0..=n {
                row[c] = row[c].sub(&factor.mul(&pivot_row[c]));
            }
        }
    }
    let mut x = vec![NovikovScalar::zero(); n];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        let pr = pr.expect("every column was pivoted");
        x[col] = aug[pr][n].clone();
    }
    Ok(x)
}

/// Rank of `m_1^y`.
pub fn rank_at(m: &OperatorSystem, y: &TorusPoint) -> Result<usize> {
    let complex = m1_matrix_at(m, y)?;
    novikov_rank(&complex.matrix)
}

/// `dim HF(L, m, y) = dim ker(m_1^y) - rank(m_1^y)` over the field.
pub fn hf_dimension(m: &OperatorSystem, y: &TorusPoint) -> Result<usize> {
    let complex = m1_matrix_at(m, y)?;
    if !complex.differential_squares_to_zero(1e-7) {
        return Err(Error::NotAInfinity("(m_1^y)^2 != 0 at this point".into()));
    }
    let r = novikov_rank(&complex.matrix)?;
    let dim = complex.dim();
    Ok(dim - 2 * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::model::PotentialModel;
    use num_complex::Complex64;

    fn unit_point(coords: &[Complex64]) -> TorusPoint {
        TorusPoint::new(
            coords.iter().map(|c| NovikovScalar::from_complex(*c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn hf_full_at_critical_point_of_clifford_cp2() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(3), 4).unwrap();
        let m = &model.minimal_structure;
        // critical points: Y1 = Y2 = zeta_3^s
        for s in 0..3 {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / 3.0);
            let y = unit_point(&[z, z]);
            let complex = m1_matrix_at(m, &y).unwrap();
            assert!(complex.differential_squares_to_zero(1e-9));
            let dim = hf_dimension(m, &y).unwrap();
            assert_eq!(dim, 4, "HF at a critical point is the full cohomology");
        }
    }

    #[test]
    fn hf_vanishes_off_criticality() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(3), 4).unwrap();
        let m = &model.minimal_structure;
        let y = unit_point(&[Complex64::new(1.3, 0.2), Complex64::new(0.8, -0.1)]);
        assert_eq!(hf_dimension(m, &y).unwrap(), 0);
    }

    #[test]
    fn rank_with_mixed_valuations() {
        // [[T, 1], [T^2, T]] has rank 2 (determinant T^2 - T^2 = 0? no:
        // T*T - 1*T^2 = 0, so rank 1... build an honest rank-2 example)
        let t = NovikovScalar::t_power(Rational::one());
        let one = NovikovScalar::one();
        let m = vec![
            vec![t.clone(), one.clone()],
            vec![one.clone(), NovikovScalar::zero()],
        ];
        assert_eq!(novikov_rank(&m).unwrap(), 2);
        let singular = vec![
            vec![t.clone(), one.clone()],
            vec![t.mul(&t), t.clone()],
        ];
        assert_eq!(novikov_rank(&singular).unwrap(), 1);
    }
}
