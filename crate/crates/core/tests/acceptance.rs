//! Acceptance suite: one test per published criterion, each printing a
//! pass line with its tolerance. Run with
//! `cargo test -p nonarch-core --test acceptance -- --nocapture`.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nonarch_core::ainf::{braces, check_ainf, compose, hpl_minimal_model, LabelClass, OperatorSystem};
use nonarch_core::critical::{
    builtin_potential, builtin_seeds, critical_values, newton_lift, CriticalSystem,
};
use nonarch_core::fibration::{embed_j, map_f, solve_f, DefaultPsi, MirrorPoint};
use nonarch_core::floer::{
    co_c1, deformed_chain_model, hf_dimension, jacobian_divide, m1_matrix_at, novikov_rank,
    superpotential, verify_division, DiskClass, PotentialModel,
};
use nonarch_core::novikov::{
    puiseux_roots, NovikovPolynomial, NovikovScalar, Order, Rational,
};
use nonarch_core::quantum::{folklore_match, qh_projective};
use nonarch_core::series::{LaurentSeries, TorusPoint};
use nonarch_core::wallcross::{transport_critical, verify_potential_match, CoordinateChange};

const TOL: f64 = 1e-9;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn phase(k: i64, n: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// Multiset match with exact exponents and coefficient tolerance.
fn match_multiset(got: &[NovikovScalar], expect: &[NovikovScalar], order: Rational, tol: f64) {
    assert_eq!(got.len(), expect.len(), "multiset sizes differ");
    let cut = Order::Finite(order);
    let mut used = vec![false; expect.len()];
    for g in got {
        let hit = expect.iter().enumerate().position(|(i, e)| {
            !used[i] && g.truncate(cut).approx_eq(&e.truncate(cut), tol)
        });
        match hit {
            Some(i) => used[i] = true,
            None => panic!("no expected value matches {g}"),
        }
    }
}

#[test]
fn criterion_01_cp2_folklore_reproduction() {
    let t0 = Instant::now();
    let order = rat(4, 1);
    let e = Rational::one();
    let w = builtin_potential("cp2_chart", &[e], order + rat(2, 1)).unwrap();
    let sys = CriticalSystem::new(w.clone());
    let seeds = builtin_seeds("cp2_chart", &[e]).unwrap();
    let points: Vec<TorusPoint> =
        seeds.iter().map(|s| newton_lift(&sys, s, order).unwrap()).collect();
    assert_eq!(points.len(), 3);

    // expected chart coordinates: x0 = T^{-1/3} e^{-2 pi i s/3}, y = 1,
    // and x1 = (1 + y)/x0 = 2 T^{1/3} e^{2 pi i s/3}
    let mut expect: Vec<(NovikovScalar, NovikovScalar, NovikovScalar)> = (0..3)
        .map(|s| {
            (
                NovikovScalar::monomial(phase(-s, 3), rat(-1, 3)),
                NovikovScalar::monomial(phase(s, 3) * 2.0, rat(1, 3)),
                NovikovScalar::one(),
            )
        })
        .collect();
    for p in &points {
        let x0 = &p.coords()[0];
        let y = &p.coords()[1];
        let x1 = NovikovScalar::one()
            .add(y)
            .mul(&x0.invert(order).unwrap());
        let cut = Order::Finite(order);
        let hit = expect.iter().position(|(e0, e1, ey)| {
            x0.truncate(cut).approx_eq(&e0.truncate(cut), TOL)
                && x1.truncate(cut).approx_eq(&e1.truncate(cut), TOL)
                && y.truncate(cut).approx_eq(&ey.truncate(cut), TOL)
        });
        expect.remove(hit.expect("lifted point must match the table"));
    }

    let values = critical_values(&w, &points, order).unwrap();
    let expect_vals: Vec<NovikovScalar> =
        (0..3).map(|s| NovikovScalar::monomial(phase(s, 3) * 3.0, rat(1, 3))).collect();
    match_multiset(&values, &expect_vals, order, TOL);

    let ring = qh_projective(2, e);
    let eigen = ring.c1_eigenvalues(order).unwrap();
    let report = folklore_match(&values, &eigen, TOL);
    assert!(report.success, "unmatched: {:?}", report.unmatched_critical);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!("criterion 1 (CP^2 folklore reproduction, tol 1e-9, {elapsed:?}): PASS");
}

#[test]
fn criterion_02_p1xp1_folklore_reproduction() {
    let order = rat(4, 1);
    let (e1, e2) = (Rational::one(), rat(3, 2));
    let w = builtin_potential("p1xp1_chart", &[e1, e2], order + rat(2, 1)).unwrap();
    let sys = CriticalSystem::new(w.clone());
    let seeds = builtin_seeds("p1xp1_chart", &[e1, e2]).unwrap();
    let points: Vec<TorusPoint> =
        seeds.iter().map(|s| newton_lift(&sys, s, order).unwrap()).collect();
    assert_eq!(points.len(), 4);

    // x0 = tau T^{-3/4}, y = sigma tau T^{-1/4},
    // x1 = (1+y)/x0 = sigma T^{1/2} + tau T^{3/4}
    let mut expect: Vec<(NovikovScalar, NovikovScalar, NovikovScalar)> = Vec::new();
    for tau in [1.0, -1.0] {
        for sigma in [1.0, -1.0] {
            expect.push((
                NovikovScalar::monomial(Complex64::new(tau, 0.0), rat(-3, 4)),
                NovikovScalar::monomial(Complex64::new(sigma, 0.0), rat(1, 2)).add(
                    &NovikovScalar::monomial(Complex64::new(tau, 0.0), rat(3, 4)),
                ),
                NovikovScalar::monomial(Complex64::new(sigma * tau, 0.0), rat(-1, 4)),
            ));
        }
    }
    for p in &points {
        let x0 = &p.coords()[0];
        let y = &p.coords()[1];
        let x1 = NovikovScalar::one().add(y).mul(&x0.invert(order).unwrap());
        let cut = Order::Finite(rat(1, 1));
        let hit = expect.iter().position(|(e0, e1x, ey)| {
            x0.truncate(cut).approx_eq(&e0.truncate(cut), TOL)
                && x1.truncate(cut).approx_eq(&e1x.truncate(cut), TOL)
                && y.truncate(cut).approx_eq(&ey.truncate(cut), TOL)
        });
        expect.remove(hit.expect("lifted point must match the table"));
    }

    let values = critical_values(&w, &points, order).unwrap();
    let mut expect_vals = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            expect_vals.push(
                NovikovScalar::monomial(Complex64::new(2.0 * s1, 0.0), rat(1, 2)).add(
                    &NovikovScalar::monomial(Complex64::new(2.0 * s2, 0.0), rat(3, 4)),
                ),
            );
        }
    }
    match_multiset(&values, &expect_vals, rat(1, 1), TOL);

    let ring = qh_projective(1, e1).tensor(&qh_projective(1, e2));
    let eigen = ring.c1_eigenvalues(order).unwrap();
    let report = folklore_match(&values, &eigen, TOL);
    assert!(report.success, "unmatched: {:?}", report.unmatched_critical);
    println!("criterion 2 (CP^1 x CP^1 folklore reproduction, tol 1e-9): PASS");
}

#[test]
fn criterion_03_cpn_eigenvalues() {
    for n in 1..=6usize {
        let ring = qh_projective(n, Rational::one());
        let eigen = ring.c1_eigenvalues(rat(2, 1)).unwrap();
        assert_eq!(eigen.len(), n + 1);
        let exp = Rational::one() / Rational::from_int((n + 1) as i64);
        let expect: Vec<NovikovScalar> = (0..=n as i64)
            .map(|s| NovikovScalar::monomial(phase(s, (n + 1) as i64) * (n as f64 + 1.0), exp))
            .collect();
        match_multiset(&eigen, &expect, exp + rat(1, 1), TOL);
    }
    println!("criterion 3 (CP^n eigenvalues, n = 1..6, tol 1e-9): PASS");
}

#[test]
fn criterion_04_puiseux_solver_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let order = rat(3, 1);
    for trial in 0..50 {
        let deg = rng.gen_range(2..=5);
        let mut roots: Vec<NovikovScalar> = Vec::new();
        for _ in 0..deg {
            let v = Rational::new(rng.gen_range(-2..4), rng.gen_range(1..=3));
            let lead = Complex64::from_polar(
                rng.gen_range(0.5..1.6),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let mut r = NovikovScalar::monomial(lead, v);
            if rng.gen_bool(0.6) {
                r = r.add(&NovikovScalar::monomial(
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    v + Rational::new(rng.gen_range(1..3), 2),
                ));
            }
            roots.push(r);
        }
        // one ramified pair per quarter of the trials: a root sharing its
        // expansion with a predecessor, separated half an order down
        if deg >= 2 && rng.gen_bool(0.25) {
            let src = rng.gen_range(0..deg - 1);
            let bump = NovikovScalar::monomial(
                Complex64::new(rng.gen_range(0.3..1.0), rng.gen_range(-0.5..0.5)),
                roots[src].leading().unwrap().0 + rat(1, 2),
            );
            roots[deg - 1] = roots[src].add(&bump);
        }
        let mut coeffs = vec![NovikovScalar::one()];
        for r in &roots {
            let mut next = vec![NovikovScalar::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].add(&c.mul(&r.neg()));
            }
            coeffs = next;
        }
        let p = NovikovPolynomial::new(coeffs);
        let found = puiseux_roots(&p, order)
            .unwrap_or_else(|e| panic!("trial {trial}: solver failed: {e}"));
        assert_eq!(found.len(), deg, "trial {trial}: root count");
        match_multiset(&found, &roots, order, 1e-8);
    }
    println!("criterion 4 (Puiseux solver on 50 random polynomials, tol 1e-8): PASS");
}

#[test]
fn criterion_05_ainf_hochschild_identity_suite() {
    let report =
        nonarch_core::selftest::run_suite("ainf", 20260809, rat(2, 1), false).unwrap();
    let required = [
        "brace composition identity",
        "graded Jacobi identity",
        "graded Leibniz rule",
        "delta . delta = 0",
        "reduced-complex closure",
        "unit cochain laws",
        "cup associativity up to delta-exactness",
    ];
    for name in required {
        let check = report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("missing identity check '{name}'"));
        assert!(check.passed, "identity '{name}' failed: {}", check.details);
    }
    assert!(report.passed(), "suite has failures");
    println!("criterion 5 (A-infinity/Hochschild identity suite, 20 random inputs each): PASS");
}

fn chain_model_classes() -> Vec<DiskClass> {
    vec![
        DiskClass::new(Rational::one(), vec![1, 0], Complex64::new(1.0, 0.0)),
        DiskClass::new(rat(3, 2), vec![2, 0], Complex64::new(0.5, 0.0)),
    ]
}

#[test]
fn criterion_06_hpl_correctness() {
    let cutoff = rat(3, 1);
    let (m_chain, con) = deformed_chain_model(2, &chain_model_classes(), cutoff, 4).unwrap();
    let zero = LabelClass::zero(2);
    con.validate(m_chain.entry(1, &zero).unwrap()).unwrap();
    assert!(check_ainf(&m_chain, 4, None, false).passed());

    let (m_min, i_morph, p_morph) = hpl_minimal_model(&m_chain, &con, 4).unwrap();
    let rep = check_ainf(&m_min, 4, None, false);
    assert!(rep.passed(), "minimal model violations: {:?}", rep.violations);
    // nontrivial higher entries beyond the wedge
    assert!(
        m_min
            .entries()
            .any(|(k, l, _)| k >= 1 && !(k == 2 && l.is_zero())),
        "transfer produced no higher structure"
    );

    let pi = compose(&p_morph, &i_morph).unwrap();
    let id = OperatorSystem::identity_morphism(m_min.src(), 2, cutoff);
    assert!(pi.approx_eq(&id, 0.0), "p . i is not the identity");

    let lhs = compose(&m_chain, &i_morph).unwrap();
    let rhs = braces(&i_morph, &[&m_min]).unwrap();
    let dev = lhs.sub(&rhs).unwrap().max_norm();
    assert!(dev <= 1e-12, "inclusion morphism equation deviates by {dev}");
    println!("criterion 6 (homological perturbation: relations, p.i = id, morphism equation): PASS");
}

#[test]
fn criterion_07_divisor_identity_and_jacobian_division() {
    let cutoff = rat(3, 1);
    let model = PotentialModel::clifford(2, Rational::one(), cutoff, 4).unwrap();
    let m = &model.minimal_structure;
    assert!(model.validate(3).passed());
    let (w, q) = superpotential(m);
    assert!(q.is_empty());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let y = TorusPoint::new(
            (0..2)
                .map(|_| {
                    NovikovScalar::from_complex(Complex64::new(
                        rng.gen_range(0.4..1.6),
                        rng.gen_range(-0.8..0.8),
                    ))
                    .add(&NovikovScalar::monomial(
                        Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
                        Rational::one(),
                    ))
                })
                .collect(),
        )
        .unwrap();
        let complex = m1_matrix_at(m, &y).unwrap();
        for i in 0..2 {
            let gi = model.generator_index(i);
            let dw = w.log_derivative_std(i).evaluate(&y).unwrap();
            for out in 0..model.basis.dim() {
                let got = &complex.matrix[out][gi];
                let want = if out == 0 { dw.clone() } else { NovikovScalar::zero() };
                let cut = got.order().min(want.order());
                assert!(
                    got.truncate(cut).approx_eq(&want.truncate(cut), 1e-8),
                    "m_1^y(theta_{i}) != D_{i} W(y) . unit"
                );
            }
        }
    }

    for x in 0..model.basis.dim() {
        let r = jacobian_divide(m, x, cutoff).unwrap();
        let res = verify_division(m, x, &r).unwrap();
        assert!(
            res.map_or(true, |v| v >= cutoff),
            "basis vector {x}: residual bound {res:?} below cutoff"
        );
    }
    println!("criterion 7 (divisor identity at 20 points + Jacobian division to T^3): PASS");
}

#[test]
fn criterion_08_nonvanishing_dichotomy() {
    let cutoff = rat(3, 1);
    let model = PotentialModel::clifford(2, Rational::one(), cutoff, 4).unwrap();
    let m = &model.minimal_structure;

    // lift the unit-torus critical points of the raw superpotential from
    // leading-order seeds Y1 = Y2 = zeta_3^s
    let (w, _) = superpotential(m);
    let sys = CriticalSystem::new(w.clone());
    for s in 0..3i64 {
        let z = phase(s, 3);
        let seed = nonarch_core::critical::Seed {
            valuations: vec![Rational::zero(); 2],
            leads: vec![z, z],
        };
        let y = newton_lift(&sys, &seed, rat(2, 1)).unwrap();
        assert_eq!(y.trop().unwrap(), vec![Rational::zero(); 2]);
        let dim = hf_dimension(m, &y).unwrap();
        assert!(dim > 0, "HF must not vanish at a lifted critical point");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0usize;
    while checked < 20 {
        let y = TorusPoint::new(
            (0..2)
                .map(|_| {
                    NovikovScalar::from_complex(Complex64::new(
                        rng.gen_range(0.4..1.7),
                        rng.gen_range(-0.9..0.9),
                    ))
                })
                .collect(),
        )
        .unwrap();
        // skip accidental critical points (coefficientwise cube roots)
        let (w, _) = superpotential(m);
        let crit = (0..2).all(|i| {
            w.log_derivative_std(i)
                .evaluate(&y)
                .unwrap()
                .leading()
                .map_or(true, |(_, c)| c.norm() < 1e-3)
        });
        if crit {
            continue;
        }
        checked += 1;
        let dim = hf_dimension(m, &y).unwrap();
        assert_eq!(dim, 0, "HF must vanish off the critical locus");

        // independent elimination order: reversed rows and columns
        let complex = m1_matrix_at(m, &y).unwrap();
        let n = complex.matrix.len();
        let mut reversed = vec![vec![NovikovScalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                reversed[n - 1 - i][n - 1 - j] = complex.matrix[i][j].clone();
            }
        }
        assert_eq!(
            novikov_rank(&complex.matrix).unwrap(),
            novikov_rank(&reversed).unwrap(),
            "rank must not depend on the elimination order"
        );
    }
    println!("criterion 8 (HF nonvanishing dichotomy, 3 critical + 20 generic points): PASS");
}

#[test]
fn criterion_09_closed_open_equals_w_unit() {
    let cutoff = rat(3, 1);
    let (m_chain, con) = deformed_chain_model(2, &chain_model_classes(), cutoff, 4).unwrap();
    let (m_min, i_morph, p_morph) = hpl_minimal_model(&m_chain, &con, 4).unwrap();
    let (lhs, rhs) = co_c1(&m_chain, &m_min, &i_morph, &p_morph).unwrap();
    for (slot, (a, b)) in lhs.iter().zip(rhs.iter()).enumerate() {
        assert!(
            a.approx_eq(b, 1e-9),
            "slot {slot}: P Theta qhat(c1) = {a} vs W.unit = {b}"
        );
    }
    println!("criterion 9 (closed-open image equals W times the unit, termwise to T^3): PASS");
}

#[test]
fn criterion_10_wall_crossing_invariance() {
    let cutoff = rat(6, 1);
    let check_order = rat(2, 1);
    let w = builtin_potential("cp2_chart", &[Rational::one()], cutoff).unwrap();

    // focus-focus style change: Y1 -> Y1 exp(T Y2), Y2 -> Y2
    let f1 =
        LaurentSeries::monomial_at(2, vec![0, 1], NovikovScalar::t_power(Rational::one()), cutoff);
    let chg = CoordinateChange::new(
        vec![Rational::zero(), Rational::zero()],
        vec![f1, LaurentSeries::zero_with_cutoff(2, cutoff)],
    )
    .unwrap();
    let inv = chg.invert(cutoff).unwrap();
    let w_tilde = inv.apply(&w).unwrap();

    let (ok, residual) = verify_potential_match(&w, &w_tilde, &chg, check_order).unwrap();
    assert!(ok, "potential match residual {residual:?}");

    let sys = CriticalSystem::new(w.clone());
    let seeds = builtin_seeds("cp2_chart", &[Rational::one()]).unwrap();
    for seed in &seeds {
        let y = newton_lift(&sys, seed, rat(4, 1)).unwrap();
        let report = transport_critical(&chg, &y, &w, &w_tilde).unwrap();
        assert!(
            report.critical_both_sides(check_order),
            "criticality lost across the wall: {:?} / {:?}",
            report.residual_here,
            report.residual_there
        );
        // critical values agree to the cutoff
        let here = w.evaluate(&y).unwrap();
        let there = w_tilde.evaluate(&report.pushed).unwrap();
        let cut = here.order().min(there.order()).min(Order::Finite(check_order));
        assert!(
            here.truncate(cut).approx_eq(&there.truncate(cut), 1e-8),
            "critical value changed: {here} vs {there}"
        );
    }
    println!("criterion 10 (wall-crossing invariance of criticality and values): PASS");
}

#[test]
fn criterion_11_fibration_consistency() {
    let t0 = Instant::now();
    let psi = DefaultPsi;
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    for _ in 0..1000 {
        let p = MirrorPoint::sample(&mut rng, rat(4, 1)).unwrap();
        // mirror-equation valuation identity, exact
        let v0 = p.x0.valuation_finite().unwrap();
        let v1 = p.x1.valuation_finite().unwrap();
        let vy = p.y.valuation_finite().unwrap();
        let v1py = NovikovScalar::one().add(&p.y).valuation_finite().unwrap();
        assert_eq!(v0 + v1, v1py);
        if !vy.is_zero() {
            assert_eq!(v1py, vy.min(Rational::zero()));
        }
        // j . f = F within 1e-9
        let q = solve_f(&psi, &p).unwrap();
        let jv = embed_j(&psi, q[0], q[1]);
        let fv = map_f(&psi, &p).unwrap();
        for k in 0..3 {
            assert!((jv[k] - fv[k]).abs() <= 1e-9);
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    println!("criterion 11 (fibration consistency on 1000 samples, tol 1e-9, {elapsed:?}): PASS");
}
