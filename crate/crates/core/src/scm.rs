//! Soft configuration model: Lagrange multipliers for a given expected
//! degree sequence, and the frozen-coordinate bridge from the HSCM.
//!
//! The constraint is read per node: `Σ_{j≠i} p_ij = k_i` with
//! `p_ij = 1/(e^{λ_i+λ_j}+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphon::w_fermi_dirac;
use crate::sampler::CoordinateSample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScmInstance {
    pub n: usize,
    pub expected_degrees: Vec<f64>,
    pub multipliers: Vec<f64>,
    /// `max_i |k_i − Σ_{j≠i} p_ij|`
    pub residual: f64,
    pub iterations: usize,
}

impl ScmInstance {
    pub fn probability(&self, i: usize, j: usize) -> f64 {
        w_fermi_dirac(self.multipliers[i], self.multipliers[j])
    }

    /// `Σ_{j≠i} p_ij` for every node.
    pub fn achieved_degrees(&self) -> Vec<f64> {
        achieved(&self.multipliers)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iterations: 10_000, damping: 0.5 }
    }
}

fn achieved(lambda: &[f64]) -> Vec<f64> {
    let n = lambda.len();
    let mut s = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let p = w_fermi_dirac(lambda[i], lambda[j]);
            s[i] += p;
            s[j] += p;
        }
    }
    s
}

fn residual(k: &[f64], s: &[f64]) -> f64 {
    k.iter().zip(s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn solve_scm(k: &[f64], tol: f64) -> Result<ScmInstance> {
    solve_scm_with(k, SolverOptions { tol, ..Default::default() })
}

/// Damped multiplicative fixed point `λ_i ← λ_i + η log(s_i / k_i)`; once the
/// residual stops shrinking by at least 10% per step, switches to Gauss–Seidel
/// sweeps that solve each coordinate exactly by safeguarded Newton.
pub fn solve_scm_with(k: &[f64], opts: SolverOptions) -> Result<ScmInstance> {
    let n = k.len();
    if n < 2 {
        return Err(Error::domain("need at least two nodes"));
    }
    let cap = (n - 1) as f64;
    if let Some((i, &v)) = k.iter().enumerate().find(|(_, &v)| !(v > 0.0 && v < cap)) {
        return Err(Error::domain(format!("expected degree k_{i} = {v} must lie in (0, {cap})")));
    }
    let total: f64 = k.iter().sum();
    let mut lambda: Vec<f64> = k.iter().map(|&ki| (total.sqrt() / ki).ln()).collect();
    let mut s = achieved(&lambda);
    let mut res = residual(k, &s);
    let mut it = 0;
    let mut damped = true;
    while res >= opts.tol {
        if it >= opts.max_iterations {
            return Err(Error::NonConvergence { iterations: it, residual: res });
        }
        it += 1;
        if damped {
            let trial: Vec<f64> = lambda
                .iter()
                .zip(s.iter().zip(k))
                .map(|(&l, (&si, &ki))| l + opts.damping * (si / ki).ln())
                .collect();
            let ts = achieved(&trial);
            let tr = residual(k, &ts);
            if tr.is_finite() && tr < res {
                damped = tr < 0.9 * res;
                lambda = trial;
                s = ts;
                res = tr;
                continue;
            }
            damped = false;
        }
        for i in 0..n {
            lambda[i] = solve_coordinate(i, k[i], &lambda);
        }
        s = achieved(&lambda);
        res = residual(k, &s);
    }
    Ok(ScmInstance { n, expected_degrees: k.to_vec(), multipliers: lambda, residual: res, iterations: it })
}

// Solve Σ_{j≠i} W(λ, λ_j) = target for λ; the left side is decreasing.
fn solve_coordinate(i: usize, target: f64, lambda: &[f64]) -> f64 {
    let f = |l: f64| -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for (j, &lj) in lambda.iter().enumerate() {
            if j != i {
                let p = w_fermi_dirac(l, lj);
                v += p;
                d -= p * (1.0 - p);
            }
        }
        (v - target, d)
    };
    let mut x = lambda[i];
    let (mut lo, mut hi) = (x - 1.0, x + 1.0);
    while f(lo).0 < 0.0 {
        lo -= 2.0 * (hi - lo);
    }
    while f(hi).0 > 0.0 {
        hi += 2.0 * (hi - lo);
    }
    for _ in 0..200 {
        let (v, d) = f(x);
        if v == 0.0 {
            return x;
        }
        if v > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / d;
        x = if d < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Freeze HSCM coordinates: `λ_i = x_i`, expected degrees `Σ_{j≠i} W(x_i, x_j)`.
pub fn hscm_to_scm(c: &CoordinateSample) -> Result<ScmInstance> {
    hscm_to_scm_with(c, Exec::default())
}

pub fn hscm_to_scm_with(c: &CoordinateSample, exec: Exec) -> Result<ScmInstance> {
    let x = c.exponential()?;
    let n = x.len();
    let k = exec.map_range(n, |i| {
        let mut s = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            if j != i {
                s += w_fermi_dirac(x[i], xj);
            }
        }
        s
    });
    Ok(ScmInstance { n, expected_degrees: k, multipliers: x, residual: 0.0, iterations: 0 })
}
