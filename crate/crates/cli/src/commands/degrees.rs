use std::fs::File;
use std::io::BufReader;

use serde_json::json;

use hscm_core::io::read_edge_list;
use hscm_core::rng::replica_seed;
use hscm_core::sampler::sample_replica;
use hscm_core::stats::{compare_to_theory_with, fit_power_law_tail, DegreeHistogram, Tolerances};
use hscm_core::theory::{finite_n_degree_pmf, DegreeLaw};
use hscm_core::Exec;

use crate::args::{params, Command, DegreesArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt_num, write_csv, write_json};

fn histogram(a: &DegreesArgs) -> CliResult<DegreeHistogram> {
    if !a.input.is_empty() {
        let mut h: Option<DegreeHistogram> = None;
        for path in &a.input {
            let f = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let (g, _) = read_edge_list(BufReader::new(f))
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            match h.as_mut() {
                Some(h) => h.add_graph(&g).map_err(|e| CliError::config(e.to_string()))?,
                None => {
                    let mut first = DegreeHistogram::new(g.n());
                    first.add_graph(&g)?;
                    h = Some(first);
                }
            }
        }
        return Ok(h.expect("at least one input"));
    }
    let n = a.n.ok_or_else(|| CliError::config("--n is required without --input"))?;
    let seed = a.seed.ok_or_else(|| CliError::config("--seed is required without --input"))?;
    if a.replicas == 0 {
        return Err(CliError::config("--replicas must be at least 1"));
    }
    let p = params(&a.model, n)?;
    let exec = a.exec.exec();
    let parts = exec.try_map_range(a.replicas as usize, |r| -> CliResult<DegreeHistogram> {
        let g = sample_replica(&p, replica_seed(seed, r as u64), a.sampler.into(), Exec::Sequential, false)?;
        let mut h = DegreeHistogram::new(g.n());
        h.add_graph(&g)?;
        Ok(h)
    })?;
    let mut h = DegreeHistogram::new(n as usize);
    for part in &parts {
        h.merge(part)?;
    }
    Ok(h)
}

/// Mass of `pmf` over `[lo, hi)` divided by the bin width; `None` when the
/// bin reaches past the computed range.
fn bin_density(pmf: &[f64], lo: usize, hi: usize) -> Option<f64> {
    (hi <= pmf.len()).then(|| pmf[lo..hi].iter().sum::<f64>() / (hi - lo) as f64)
}

pub fn run(cmd: &Command, a: &DegreesArgs) -> CliResult<()> {
    // validate before sampling
    params(&a.model, a.n.unwrap_or(1))?;
    let h = histogram(a)?;
    let p = params(&a.model, h.n as u64)?;
    let kmax = a.kmax as usize;
    let top = kmax.max(h.max_degree());
    let asym = DegreeLaw::new(&p)?.with_cross_check(false).pmf_vec(2 * top as u64 + 1)?;
    let fin = finite_n_degree_pmf(&p, a.kmax)?;
    let emp = h.pmf();
    let rows = (0..=top).map(|k| {
        vec![
            k.to_string(),
            h.counts.get(k).copied().unwrap_or(0).to_string(),
            num(emp.get(k).copied().unwrap_or(0.0)),
            num(asym[k]),
            opt_num(fin.get(k).copied()),
        ]
    });
    write_csv(
        &a.out.join("degrees.csv"),
        &["k", "count", "empirical_pmf", "theory_pmf_asymptotic", "theory_pmf_finite_n"],
        rows,
    )?;

    let rows = h.log_binned().into_iter().map(|(lo, hi, d)| {
        vec![
            lo.to_string(),
            hi.to_string(),
            num(d),
            opt_num(bin_density(&asym, lo, hi)),
            opt_num(bin_density(&fin, lo, hi)),
        ]
    });
    write_csv(
        &a.out.join("degrees_logbinned.csv"),
        &["k_lo", "k_hi", "empirical_density", "theory_density_asymptotic", "theory_density_finite_n"],
        rows,
    )?;

    let report = compare_to_theory_with(&h, &p, kmax, Tolerances::default())?;
    let tail = match fit_power_law_tail(&h, 100) {
        Ok(f) => json!(f),
        Err(e) => json!({ "error": e.to_string() }),
    };
    write_json(
        &a.out.join("summary.json"),
        cmd,
        json!({
            "params": p,
            "graphs": h.graphs,
            "n": h.n,
            "avg_degree": report.avg_degree_empirical,
            "avg_degree_se": report.avg_degree_se,
            "expected_avg_degree_finite_n": report.avg_degree_finite_n,
            "nu": p.nu,
            "kmax": kmax,
            "tv_asymptotic": report.tv_asymptotic,
            "tv_finite_n": report.tv_finite_n,
            "tolerances": report.tolerances,
            "tv_asymptotic_ok": report.tv_asymptotic_ok,
            "tv_finite_n_ok": report.tv_finite_n_ok,
            "avg_degree_ok": report.avg_degree_ok,
            "tail": tail,
        }),
    )
}
