//! The folklore reproduction command: build the chart potential and the
//! quantum ring, lift the critical points, compute eigenvalues, and match.

use std::process::ExitCode;

use serde_json::json;

use nonarch_core::critical::{
    builtin_potential, builtin_seeds, critical_values, newton_lift, CriticalSystem,
};
use nonarch_core::error::Error;
use nonarch_core::novikov::{NovikovScalar, Rational};
use nonarch_core::quantum::{folklore_match, qh_projective, FolkloreReport, QuantumRing};

use crate::{write_out, FolkloreArgs};

pub struct SpaceData {
    pub potential_name: String,
    pub params: Vec<Rational>,
    pub ring: QuantumRing,
}

pub fn space_data(args: &FolkloreArgs) -> Result<SpaceData, Error> {
    match args.space.as_str() {
        "cp2" => {
            let e = args.energy.unwrap_or_else(Rational::one);
            Ok(SpaceData {
                potential_name: "cp2_chart".into(),
                params: vec![e],
                ring: qh_projective(2, e),
            })
        }
        "p1xp1" => {
            let e1 = args.e1.unwrap_or_else(Rational::one);
            let e2 = args.e2.unwrap_or_else(Rational::one);
            Ok(SpaceData {
                potential_name: "p1xp1_chart".into(),
                params: vec![e1, e2],
                ring: qh_projective(1, e1).tensor(&qh_projective(1, e2)),
            })
        }
        "cpn" => {
            let n = args.n.unwrap_or(2);
            let e = args.energy.unwrap_or_else(Rational::one);
            Ok(SpaceData {
                potential_name: "clifford_cpn".into(),
                params: vec![Rational::from_int(n as i64), e],
                ring: qh_projective(n, e),
            })
        }
        other => Err(Error::UnknownName(format!("space {other}"))),
    }
}

pub struct FolkloreOutcome {
    pub critical: Vec<NovikovScalar>,
    pub eigenvalues: Vec<NovikovScalar>,
    pub report: FolkloreReport,
}

pub fn run_pipeline(data: &SpaceData, order: Rational, tol: f64) -> Result<FolkloreOutcome, Error> {
    let cutoff = order + Rational::from_int(2);
    let w = builtin_potential(&data.potential_name, &data.params, cutoff)?;
    let sys = CriticalSystem::new(w.clone());
    let seeds = builtin_seeds(&data.potential_name, &data.params)?;
    let mut points = Vec::with_capacity(seeds.len());
    for seed in &seeds {
        points.push(newton_lift(&sys, seed, order)?);
    }
    let critical = critical_values(&w, &points, order)?;
    let eigenvalues = data.ring.c1_eigenvalues(order)?;
    let report = folklore_match(&critical, &eigenvalues, tol);
    Ok(FolkloreOutcome { critical, eigenvalues, report })
}

pub fn run(args: FolkloreArgs) -> Result<ExitCode, Error> {
    let data = space_data(&args)?;
    let outcome = run_pipeline(&data, args.order, args.tol)?;
    let status = if outcome.report.success { "match" } else { "mismatch" };

    let text = match args.format.as_str() {
        "json" => {
            let body = json!({
                "config": {
                    "order": args.order.to_string(),
                    "tolerance": args.tol,
                },
                "inputs": {
                    "space": args.space,
                    "potential": data.potential_name,
                    "params": data.params.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                },
                "results": {
                    "critical_values": outcome.critical.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "eigenvalues": outcome.eigenvalues.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "matching": outcome.report,
                },
                "residuals": outcome.report.matched.iter().map(|m| m.coefficient_distance).collect::<Vec<_>>(),
                "status": status,
            });
            serde_json::to_string_pretty(&body).expect("report serializes") + "\n"
        }
        "csv" => {
            let mut out = String::from("critical_value,eigenvalue,distance\n");
            for m in &outcome.report.matched {
                out.push_str(&format!(
                    "\"{}\",\"{}\",{:e}\n",
                    m.critical_value, m.eigenvalue, m.coefficient_distance
                ));
            }
            for u in &outcome.report.unmatched_critical {
                out.push_str(&format!("\"{u}\",,\n"));
            }
            out
        }
        _ => {
            let mut out = String::new();
            out.push_str(&format!("space: {}\n", args.space));
            out.push_str("critical values:\n");
            for v in &outcome.critical {
                out.push_str(&format!("  {v}\n"));
            }
            out.push_str("eigenvalues of c1*:\n");
            for v in &outcome.eigenvalues {
                out.push_str(&format!("  {v}\n"));
            }
            out.push_str("matching:\n");
            for m in &outcome.report.matched {
                out.push_str(&format!(
                    "  {}  ~  {}  (distance {:.3e})\n",
                    m.critical_value, m.eigenvalue, m.coefficient_distance
                ));
            }
            for u in &outcome.report.unmatched_critical {
                out.push_str(&format!("  UNMATCHED {u}\n"));
            }
            out.push_str(&format!("status: {status}\n"));
            out
        }
    };
    write_out(&text, args.out.as_deref())?;
    Ok(if outcome.report.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
