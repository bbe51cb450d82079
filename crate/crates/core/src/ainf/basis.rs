//! Finite graded bases and disk label classes.

use serde::{Deserialize, Serialize};

use crate::novikov::Rational;

/// Finite graded basis with a distinguished degree-0 unit element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i64>,
    unit: usize,
}

impl GradedBasis {
    pub fn new(elements: Vec<(String, i64)>, unit: usize) -> Self {
        let names: Vec<String> = elements.iter().map(|(n, _)| n.clone()).collect();
        let degrees: Vec<i64> = elements.iter().map(|(_, d)| *d).collect();
        assert!(unit < names.len(), "unit index out of range");
        assert_eq!(degrees[unit], 0, "unit must have degree 0");
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len(), "basis names must be unique");
        GradedBasis { names, degrees, unit }
    }

    /// Exterior algebra on `n` degree-1 generators `th1..thn`, unit first,
    /// basis ordered by subset bitmask (so index `2^i` is the i-th generator).
    pub fn exterior(n: usize) -> Self {
        let mut elements = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let mut name = String::new();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    if !name.is_empty() {
                        name.push('^');
                    }
                    name.push_str(&format!("th{}", i + 1));
                }
            }
            if name.is_empty() {
                name = "1".to_string();
            }
            elements.push((name, mask.count_ones() as i64));
        }
        GradedBasis::new(elements, 0)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    /// Shifted degree `deg' = deg - 1`.
    pub fn deg_prime(&self, i: usize) -> i64 {
        self.degrees[i] - 1
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Disk class `beta` with energy, Maslov index and boundary `in pi_1(L)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelClass {
    pub energy: Rational,
    pub maslov: i64,
    pub boundary: Vec<i64>,
}

impl LabelClass {
    pub fn new(energy: Rational, maslov: i64, boundary: Vec<i64>) -> Self {
        assert!(maslov % 2 == 0, "Maslov index must be even");
        LabelClass { energy, maslov, boundary }
    }

    pub fn zero(rank: usize) -> Self {
        LabelClass { energy: Rational::zero(), maslov: 0, boundary: vec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.energy.is_zero() && self.maslov == 0 && self.boundary.iter().all(|b| *b == 0)
    }

    pub fn add(&self, other: &LabelClass) -> LabelClass {
        assert_eq!(self.boundary.len(), other.boundary.len());
        LabelClass {
            energy: self.energy + other.energy,
            maslov: self.maslov + other.maslov,
            boundary: self
                .boundary
                .iter()
                .zip(other.boundary.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LabelClass) -> LabelClass {
        assert_eq!(self.boundary.len(), other.boundary.len());
        LabelClass {
            energy: self.energy - other.energy,
            maslov: self.maslov - other.maslov,
            boundary: self
                .boundary
                .iter()
                .zip(other.boundary.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Shift by a sphere class: energy and Maslov move, the boundary does not.
    pub fn shift_sphere(&self, energy: Rational, chern: i64) -> LabelClass {
        LabelClass {
            energy: self.energy + energy,
            maslov: self.maslov + 2 * chern,
            boundary: self.boundary.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.boundary.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_basis_layout() {
        let b = GradedBasis::exterior(2);
        assert_eq!(b.dim(), 4);
        assert_eq!(b.unit_index(), 0);
        assert_eq!(b.degree(0), 0);
        assert_eq!(b.degree(1), 1);
        assert_eq!(b.degree(2), 1);
        assert_eq!(b.degree(3), 2);
        assert_eq!(b.name(3), "th1^th2");
    }

    #[test]
    fn label_arithmetic() {
        let a = LabelClass::new(Rational::new(1, 3), 2, vec![1, 0]);
        let b = LabelClass::new(Rational::new(1, 3), 2, vec![-1, -1]);
        let s = a.add(&b);
        assert_eq!(s.energy, Rational::new(2, 3));
        assert_eq!(s.maslov, 4);
        assert_eq!(s.boundary, vec![0, -1]);
        assert!(LabelClass::zero(2).is_zero());
    }
}
