//! Fibration sampling: CSV of valuation data and recovered base points.

use std::process::ExitCode;

use nonarch_core::error::Error;
use nonarch_core::fibration::{embed_j, map_f, solve_f, DefaultPsi, MirrorPoint};
use nonarch_core::novikov::Rational;

use crate::{effective_seed, write_out};

pub fn run(count: usize, seed: u64, out: Option<String>) -> Result<ExitCode, Error> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(effective_seed(seed));
    let psi = DefaultPsi;
    let mut csv = String::from("val_x0,val_x1,val_y,q1,q2,residual\n");
    for _ in 0..count {
        let p = MirrorPoint::sample(&mut rng, Rational::from_int(4))?;
        let q = solve_f(&psi, &p)?;
        let jv = embed_j(&psi, q[0], q[1]);
        let fv = map_f(&psi, &p)?;
        let residual = (0..3).map(|i| (jv[i] - fv[i]).abs()).fold(0.0, f64::max);
        csv.push_str(&format!(
            "{},{},{},{},{},{:e}\n",
            p.x0.valuation_finite()?.to_f64(),
            p.x1.valuation_finite()?.to_f64(),
            p.y.valuation_finite()?.to_f64(),
            q[0],
            q[1],
            residual
        ));
    }
    write_out(&csv, out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
