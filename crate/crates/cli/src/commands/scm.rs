use std::fs;

use serde_json::json;

use hscm_core::sampler::sample_coordinates;
use hscm_core::scm::{hscm_to_scm, solve_scm};
use hscm_core::{EnsembleParams, Representation};

use super::sidecar_for;
use crate::args::{Command, ScmArgs};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt_num, write_csv, write_json};

fn read_degrees(text: &str) -> CliResult<Vec<f64>> {
    let mut k = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        k.push(t.parse::<f64>().map_err(|_| CliError::Io(format!("line {}: '{t}' is not a number", i + 1)))?);
    }
    Ok(k)
}

pub fn run(cmd: &Command, a: &ScmArgs) -> CliResult<()> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::config("--tol must be positive"));
    }
    let (inst, coords) = match (&a.degrees, a.gamma, a.nu, a.n, a.seed) {
        (Some(path), ..) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            (solve_scm(&read_degrees(&text)?, a.tol)?, None)
        }
        (None, Some(g), Some(nu), Some(n), Some(seed)) => {
            let p = EnsembleParams::new(g, nu, n).map_err(|e| CliError::config(e.to_string()))?;
            let c = sample_coordinates(&p, seed, Representation::Exponential);
            let frozen = hscm_to_scm(&c)?;
            (solve_scm(&frozen.expected_degrees, a.tol)?, Some(c.coords))
        }
        _ => return Err(CliError::config("give --degrees FILE or all of --gamma --nu --n --seed")),
    };
    let achieved = inst.achieved_degrees();
    let rows = (0..inst.n).map(|i| {
        vec![
            i.to_string(),
            num(inst.expected_degrees[i]),
            num(inst.multipliers[i]),
            num(achieved[i]),
            opt_num(coords.as_ref().map(|c| c[i])),
        ]
    });
    write_csv(&a.out, &["i", "expected_degree", "multiplier", "achieved_degree", "coordinate"], rows)?;
    write_json(
        &sidecar_for(&a.out),
        cmd,
        json!({ "n": inst.n, "residual": inst.residual, "iterations": inst.iterations }),
    )
}
