//! Small quantum cohomology rings over the Novikov field at desk scale:
//! structure constants, multiplication matrices, eigenvalues of
//! multiplication by the first Chern class, and the critical-value matcher.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::novikov::{puiseux_roots, NovikovPolynomial, NovikovScalar, Rational};

/// Finite-basis ring with Novikov-valued structure constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumRing {
    basis: Vec<(String, i64)>,
    /// `constants[i][j]` = coordinates of `e_i * e_j`
    constants: Vec<Vec<Vec<NovikovScalar>>>,
    unit: usize,
    c1: Vec<NovikovScalar>,
}

impl QuantumRing {
    pub fn new(
        basis: Vec<(String, i64)>,
        constants: Vec<Vec<Vec<NovikovScalar>>>,
        unit: usize,
        c1: Vec<NovikovScalar>,
    ) -> Result<Self> {
        let n = basis.len();
        if constants.len() != n
            || constants.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n))
            || c1.len() != n
        {
            return Err(Error::RankMismatch { left: n, right: constants.len() });
        }
        let ring = QuantumRing { basis, constants, unit, c1 };
        ring.check_unit_laws()?;
        Ok(ring)
    }

    fn check_unit_laws(&self) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            let left = &self.constants[self.unit][j];
            let right = &self.constants[j][self.unit];
            for (o, c) in left.iter().enumerate() {
                let want = if o == j { NovikovScalar::one() } else { NovikovScalar::zero() };
                if !c.approx_eq(&want, 1e-12) || !right[o].approx_eq(&want, 1e-12) {
                    return Err(Error::NonzeroObstruction(format!(
                        "unit law fails at basis element {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, i64)] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn c1(&self) -> &[NovikovScalar] {
        &self.c1
    }

    /// Product of coordinate vectors.
    pub fn multiply(&self, x: &[NovikovScalar], y: &[NovikovScalar]) -> Vec<NovikovScalar> {
        let n = self.dim();
        let mut out = vec![NovikovScalar::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_empty() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_empty() {
                    continue;
                }
                let f = xi.mul(yj);
                for (o, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_empty() {
                        out[o] = out[o].add(&f.mul(c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `cls`: column `j` is `cls * e_j`.
    pub fn mult_matrix(&self, cls: &[NovikovScalar]) -> Vec<Vec<NovikovScalar>> {
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![NovikovScalar::zero(); n];
            e[j] = NovikovScalar::one();
            cols.push(self.multiply(cls, &e));
        }
        // transpose into row-major
        let mut rows = vec![vec![NovikovScalar::zero(); n]; n];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                rows[i][j] = v.clone();
            }
        }
        rows
    }

    /// Eigenvalues of `c_1 *` with multiplicity via the characteristic
    /// polynomial and the Puiseux solver.
    pub fn c1_eigenvalues(&self, order: Rational) -> Result<Vec<NovikovScalar>> {
        let m = self.mult_matrix(&self.c1);
        let chi = char_poly(&m);
        puiseux_roots(&chi, order)
    }

    /// Kuenneth tensor product with the Koszul sign.
    pub fn tensor(&self, other: &QuantumRing) -> QuantumRing {
        let n1 = self.dim();
        let n2 = other.dim();
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut basis = Vec::with_capacity(n1 * n2);
        for (a, da) in &self.basis {
            for (b, db) in &other.basis {
                let name = match (a.as_str(), b.as_str()) {
                    ("1", "1") => "1".to_string(),
                    ("1", x) => format!("1(x){x}"),
                    (x, "1") => format!("{x}(x)1"),
                    (x, y) => format!("{x}(x){y}"),
                };
                basis.push((name, da + db));
            }
        }
        let dim = n1 * n2;
        let mut constants =
            vec![vec![vec![NovikovScalar::zero(); dim]; dim]; dim];
        for i1 in 0..n1 {
            for j1 in 0..n2 {
                for i2 in 0..n1 {
                    for j2 in 0..n2 {
                        // (a (x) b)(c (x) d) = (-1)^{deg b deg c} ac (x) bd
                        let sign = if (other.basis[j1].1 * self.basis[i2].1) % 2 != 0 {
                            -1.0
                        } else {
                            1.0
                        };
                        let left = &self.constants[i1][i2];
                        let right = &other.constants[j1][j2];
                        for (o1, c1) in left.iter().enumerate() {
                            if c1.is_empty() {
                                continue;
                            }
                            for (o2, c2) in right.iter().enumerate() {
                                if c2.is_empty() {
                                    continue;
                                }
                                let v = c1.mul(c2).scale(Complex64::new(sign, 0.0));
                                let cur = &constants[idx(i1, j1)][idx(i2, j2)][idx(o1, o2)];
                                constants[idx(i1, j1)][idx(i2, j2)][idx(o1, o2)] = cur.add(&v);
                            }
                        }
                    }
                }
            }
        }
        let mut c1 = vec![NovikovScalar::zero(); dim];
        for (i, v) in self.c1.iter().enumerate() {
            c1[idx(i, other.unit)] = c1[idx(i, other.unit)].add(v);
        }
        for (j, v) in other.c1.iter().enumerate() {
            c1[idx(self.unit, j)] = c1[idx(self.unit, j)].add(v);
        }
        QuantumRing {
            basis,
            constants,
            unit: idx(self.unit, other.unit),
            c1,
        }
    }
}

/// `QH(CP^n)` with quantum parameter `T^E`: basis `1, c, ..., c^n`,
/// `c^i * c^j = c^{i+j}` below the rim and `T^E c^{i+j-n-1}` past it;
/// `c_1 = (n+1) c`.
pub fn qh_projective(n: usize, energy: Rational) -> QuantumRing {
    assert!(n >= 1, "projective space needs n >= 1");
    assert!(energy > Rational::zero(), "quantum parameter needs positive energy");
    let dim = n + 1;
    let mut basis = Vec::with_capacity(dim);
    for i in 0..dim {
        let name = match i {
            0 => "1".to_string(),
            1 => "c".to_string(),
            _ => format!("c^{i}"),
        };
        basis.push((name, 2 * i as i64));
    }
    let mut constants = vec![vec![vec![NovikovScalar::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if i + j <= n {
                constants[i][j][i + j] = NovikovScalar::one();
            } else if i + j <= 2 * n {
                constants[i][j][i + j - n - 1] = NovikovScalar::t_power(energy);
            }
        }
    }
    let mut c1 = vec![NovikovScalar::zero(); dim];
    c1[1] = NovikovScalar::from_f64((n + 1) as f64);
    QuantumRing { basis, constants, unit: 0, c1 }
}

/// Characteristic polynomial by the trace recursion (division-free up to
/// integer scalars), exact over truncated Novikov arithmetic.
pub fn char_poly(matrix: &[Vec<NovikovScalar>]) -> NovikovPolynomial {
    let n = matrix.len();
    // Faddeev-LeVerrier: M_1 = A, c_{n-1} = -tr; M_{k+1} = A(M_k + c I)
    let mut coeffs = vec![NovikovScalar::zero(); n + 1];
    coeffs[n] = NovikovScalar::one();
    let mut m: Vec<Vec<NovikovScalar>> = matrix.to_vec();
    for k in 1..=n {
        let mut tr = NovikovScalar::zero();
        for i in 0..n {
            tr = tr.add(&m[i][i]);
        }
        let ck = tr.scale(Complex64::new(-1.0 / k as f64, 0.0));
        coeffs[n - k] = ck.clone();
        if k == n {
            break;
        }
        // M <- A (M + c_k I)
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[i][i] = shifted[i][i].add(&ck);
        }
        let mut next = vec![vec![NovikovScalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = NovikovScalar::zero();
                for l in 0..n {
                    acc = acc.add(&matrix[i][l].mul(&shifted[l][j]));
                }
                next[i][j] = acc;
            }
        }
        m = next;
    }
    NovikovPolynomial::new(coeffs)
}

/// One matched pair in a folklore report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchPair {
    pub critical_value: String,
    pub eigenvalue: String,
    pub coefficient_distance: f64,
}

/// Result of the containment check "critical values are eigenvalues".
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FolkloreReport {
    pub matched: Vec<MatchPair>,
    pub unmatched_critical: Vec<String>,
    pub unused_eigenvalues: Vec<String>,
    pub success: bool,
}

/// Greedy bipartite matching by exact exponents then coefficient distance:
/// succeeds iff every critical value matches a distinct eigenvalue. Only the
/// containment direction is asserted.
pub fn folklore_match(
    critical_values: &[NovikovScalar],
    eigenvalues: &[NovikovScalar],
    tol: f64,
) -> FolkloreReport {
    let mut used = vec![false; eigenvalues.len()];
    let mut matched = Vec::new();
    let mut unmatched = Vec::new();
    for cv in critical_values {
        let mut best: Option<(usize, f64)> = None;
        for (i, ev) in eigenvalues.iter().enumerate() {
            if used[i] {
                continue;
            }
            let cut = cv.order().min(ev.order());
            let a = cv.truncate(cut);
            let b = ev.truncate(cut);
            // exponents must agree exactly
            let same_support = a.terms().len() == b.terms().len()
                && a.terms().iter().zip(b.terms().iter()).all(|(x, y)| x.0 == y.0);
            if !same_support {
                continue;
            }
            let d = a.distance(&b);
            if d <= tol && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, d)) => {
                used[i] = true;
                matched.push(MatchPair {
                    critical_value: cv.to_string(),
                    eigenvalue: eigenvalues[i].to_string(),
                    coefficient_distance: d,
                });
            }
            None => unmatched.push(cv.to_string()),
        }
    }
    let unused: Vec<String> = eigenvalues
        .iter()
        .zip(used.iter())
        .filter(|(_, u)| !**u)
        .map(|(e, _)| e.to_string())
        .collect();
    FolkloreReport {
        success: unmatched.is_empty(),
        matched,
        unmatched_critical: unmatched,
        unused_eigenvalues: unused,
    }
}

/// Trace of a Novikov matrix (used for eigenvalue consistency checks).
pub fn trace(matrix: &[Vec<NovikovScalar>]) -> NovikovScalar {
    let mut tr = NovikovScalar::zero();
    for (i, row) in matrix.iter().enumerate() {
        tr = tr.add(&row[i]);
    }
    tr
}
