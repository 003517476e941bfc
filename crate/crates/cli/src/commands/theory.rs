use serde_json::json;

use hscm_core::graphon::{epsilon_n, omega_n};
use hscm_core::theory::{
    expected_avg_degree_classical, expected_avg_degree_finite_n, finite_n_degree_pmf, finite_size_degree_tail,
    pareto_tail, DegreeLaw, ParetoLaw,
};

use crate::args::{params, Command, TheoryArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, write_csv, write_json};

pub fn run(cmd: &Command, a: &TheoryArgs) -> CliResult<()> {
    let p = params(&a.model, a.n)?;
    if a.tail_points < 2 {
        return Err(CliError::config("--tail-points must be at least 2"));
    }
    let asym = DegreeLaw::new(&p)?.with_cross_check(false).pmf_vec(a.kmax)?;
    let fin = finite_n_degree_pmf(&p, a.kmax)?;
    write_csv(
        &a.out.join("theory_pmf.csv"),
        &["k", "theory_pmf_asymptotic", "theory_pmf_finite_n"],
        (0..=a.kmax as usize).map(|k| vec![k.to_string(), num(asym[k]), num(fin[k])]),
    )?;

    let law = ParetoLaw::for_params(&p);
    let lo = 0.5 * law.scale;
    let hi = 2.0 * (p.nu * p.n as f64).sqrt();
    let m = a.tail_points;
    let rows = (0..m).map(|i| {
        let t = lo * (hi / lo).powf(i as f64 / (m - 1) as f64);
        vec![num(t), num(pareto_tail(&law, t)), num(finite_size_degree_tail(&p, t))]
    });
    write_csv(&a.out.join("degree_tail.csv"), &["t", "pareto_tail", "finite_size_tail"], rows)?;

    write_json(
        &a.out.join("summary.json"),
        &cmd,
        json!({
            "params": p,
            "expected_avg_degree_finite_n": expected_avg_degree_finite_n(&p)?,
            "expected_avg_degree_classical": expected_avg_degree_classical(&p),
            "nu": p.nu,
            "omega_n": omega_n(&p),
            "epsilon_n": epsilon_n(&p),
            "pmf_mass_asymptotic": asym.iter().sum::<f64>(),
            "pmf_mass_finite_n": fin.iter().sum::<f64>(),
        }),
    )
}
