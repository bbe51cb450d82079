//! Jacobian division: `m_1(x) = sum_i D_i W . R_i` by the constructive
//! peel-and-resum recursion, for cohomology generated in degree 1.

use std::collections::BTreeMap;

use crate::ainf::OperatorSystem;
use crate::error::{Error, Result};
use crate::novikov::Rational;
use crate::series::LaurentSeries;

use super::mk::{
    build_mk, cochain_add, cochain_scale, cochain_zero, superpotential, MkOperator, SeriesCochain,
};

fn is_exterior_layout(m: &OperatorSystem) -> bool {
    let basis = m.src();
    let dim = basis.dim();
    if !dim.is_power_of_two() {
        return false;
    }
    (0..dim).all(|i| basis.degree(i) == i.count_ones() as i64)
}

struct Divider<'a> {
    m: &'a OperatorSystem,
    n: usize,
    dim: usize,
    cutoff: Rational,
    m2: MkOperator,
    m2_pos: MkOperator,
    memo: BTreeMap<usize, (Vec<SeriesCochain>, SeriesCochain)>,
}

impl<'a> Divider<'a> {
    fn basis_cochain(&self, i: usize) -> SeriesCochain {
        let mut v = cochain_zero(self.dim, self.n, self.cutoff);
        v[i] = LaurentSeries::one_at(self.n, self.cutoff);
        v
    }

    /// `(R_1..R_n, U)` with `m_1(e_mask) = sum_i D_i W . R_i + m_1(U)` and
    /// `U` strictly deeper in the energy filtration.
    fn step_basis(&mut self, mask: usize) -> Result<(Vec<SeriesCochain>, SeriesCochain)> {
        if let Some(hit) = self.memo.get(&mask) {
            return Ok(hit.clone());
        }
        let zeros = vec![cochain_zero(self.dim, self.n, self.cutoff); self.n];
        if mask == 0 {
            let out = (zeros, cochain_zero(self.dim, self.n, self.cutoff));
            self.memo.insert(mask, out.clone());
            return Ok(out);
        }
        let j = mask.trailing_zeros() as usize;
        let gen = 1usize << j;
        let rest = mask & !gen;
        let (r_rest, u_rest) = self.step_basis(rest)?;

        let theta = self.basis_cochain(gen);
        let theta_neg: SeriesCochain = theta.iter().map(|s| s.neg()).collect();
        let rest_c = self.basis_cochain(rest);

        let mut r = zeros;
        // R_j += x' - U'
        let minus_u: SeriesCochain = u_rest.iter().map(|s| s.neg()).collect();
        r[j] = cochain_add(&r[j], &cochain_add(&rest_c, &minus_u)?)?;
        // R_i += m_2(theta, R'_i)
        for i in 0..self.n {
            let term = self.m2.apply(&[&theta, &r_rest[i]])?;
            r[i] = cochain_add(&r[i], &term)?;
        }
        // U = m_2^{+}(theta, x') + m_2(-theta, U')
        let u0 = self.m2_pos.apply(&[&theta, &rest_c])?;
        let u1 = self.m2.apply(&[&theta_neg, &u_rest])?;
        let u = cochain_add(&u0, &u1)?;
        let out = (r, u);
        self.memo.insert(mask, out.clone());
        Ok(out)
    }

    fn step_element(&mut self, x: &SeriesCochain) -> Result<(Vec<SeriesCochain>, SeriesCochain)> {
        let mut r = vec![cochain_zero(self.dim, self.n, self.cutoff); self.n];
        let mut u = cochain_zero(self.dim, self.n, self.cutoff);
        for (mask, coeff) in x.iter().enumerate() {
            if coeff.is_zero() || mask == 0 {
                continue;
            }
            let (rm, um) = self.step_basis(mask)?;
            for i in 0..self.n {
                r[i] = cochain_add(&r[i], &cochain_scale(&rm[i], coeff)?)?;
            }
            u = cochain_add(&u, &cochain_scale(&um, coeff)?)?;
        }
        Ok((r, u))
    }
}

/// Produces `R_1..R_n` with `m_1(x) = sum_i D_{theta_i}W . R_i` up to the
/// cutoff, for `x` a basis vector of a structure whose cohomology is the
/// exterior algebra on its degree-1 part.
pub fn jacobian_divide(
    m: &OperatorSystem,
    x: usize,
    cutoff: Rational,
) -> Result<Vec<SeriesCochain>> {
    if !is_exterior_layout(m) {
        return Err(Error::NotGenerated(
            "cohomology basis is not an exterior algebra on degree-1 classes".into(),
        ));
    }
    let n = m.rank();
    let hbar = m.min_positive_energy().unwrap_or(cutoff);
    let mut div = Divider {
        m,
        n,
        dim: m.src().dim(),
        cutoff,
        m2: build_mk(m, 2)?,
        m2_pos: build_mk(m, 2)?.positive_part(),
        memo: BTreeMap::new(),
    };
    let _ = div.m;
    let mut total = vec![cochain_zero(div.dim, n, cutoff); n];
    let mut current = div.basis_cochain(x);
    let max_iter = cutoff.div_ceil(hbar).max(1) + 2;
    for _ in 0..max_iter {
        if cochain_filtration(&current).map_or(true, |v| v >= cutoff) {
            return Ok(total);
        }
        let (r, u) = div.step_element(&current)?;
        for i in 0..n {
            total[i] = cochain_add(&total[i], &r[i])?;
        }
        current = u;
    }
    if cochain_filtration(&current).map_or(true, |v| v >= cutoff) {
        Ok(total)
    } else {
        Err(Error::PrecisionLoss(
            "jacobian division did not sink below the cutoff".into(),
        ))
    }
}

/// Smallest scalar valuation over the cochain, `None` when zero.
fn cochain_filtration(x: &SeriesCochain) -> Option<Rational> {
    let mut out: Option<Rational> = None;
    for s in x {
        if let Ok(Some(v)) = s.min_valuation() {
            out = Some(match out {
                None => v,
                Some(m) => m.min(v),
            });
        }
    }
    out
}

/// Minimal valuation of `m_1(x) - sum_i D_i W . R_i`; `None` means the
/// residual vanishes identically at the stored precision.
pub fn verify_division(
    m: &OperatorSystem,
    x: usize,
    r: &[SeriesCochain],
) -> Result<Option<Rational>> {
    let n = m.rank();
    let (w, _) = superpotential(m);
    let m1 = build_mk(m, 1)?;
    let mut residual = m1.apply_basis(&[x]);
    for i in 0..n {
        let dw = w.log_derivative_std(i);
        let term = cochain_scale(&r[i], &dw)?;
        for (slot, t) in term.iter().enumerate() {
            residual[slot] = residual[slot].sub(t)?;
        }
    }
    Ok(cochain_filtration(&residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer::model::PotentialModel;

    #[test]
    fn unit_divides_to_zero() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(3), 4).unwrap();
        let r = jacobian_divide(&model.minimal_structure, 0, Rational::from_int(3)).unwrap();
        for ri in &r {
            assert!(ri.iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn generator_divides_to_unit_vector() {
        // m_1(theta_i) = D_i W . unit
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(3), 4).unwrap();
        let m = &model.minimal_structure;
        for i in 0..2 {
            let x = model.generator_index(i);
            let r = jacobian_divide(m, x, Rational::from_int(3)).unwrap();
            let res = verify_division(m, x, &r).unwrap();
            assert!(res.map_or(true, |v| v >= Rational::from_int(3)), "residual {res:?}");
            // R_i = unit, R_other = 0
            for (k, rk) in r.iter().enumerate() {
                if k == i {
                    assert!(rk[0].approx_eq(&LaurentSeries::one(2), 1e-9));
                } else {
                    assert!(rk.iter().all(|s| s.is_zero()));
                }
            }
        }
    }

    #[test]
    fn top_class_division_verifies() {
        let model = PotentialModel::clifford(2, Rational::one(), Rational::from_int(3), 4).unwrap();
        let m = &model.minimal_structure;
        let r = jacobian_divide(m, 3, Rational::from_int(3)).unwrap();
        let res = verify_division(m, 3, &r).unwrap();
        assert!(res.map_or(true, |v| v >= Rational::from_int(3)), "residual {res:?}");
    }
}
