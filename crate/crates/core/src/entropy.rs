//! Graphon entropy, the partition-averaged graphon behind the Gibbs-entropy
//! upper bound, and a discrete check that the Fermi-Dirac graphon is a local
//! entropy maximizer under the expected-degree constraint.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphon::{h, pair_expectation, KernelKind};
use crate::params::EnsembleParams;
use crate::quad::{integrate_2d, Tolerance};
use crate::rng::{stream, Domain};

/// `σ = ∬ H(K(x,y)) dμ_n dμ_n` in nats.
pub fn graphon_entropy(p: &EnsembleParams, kind: KernelKind) -> Result<f64> {
    pair_expectation(p, |s| kind.entropy_of_sum(s), Tolerance::rel(1e-10))
}

/// `(n, n·σ/log n)` for each size.
pub fn rescaled_entropy_series(gamma: f64, nu: f64, sizes: &[u64]) -> Result<Vec<(u64, f64)>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("sizes must be strictly increasing"));
    }
    sizes
        .iter()
        .map(|&n| {
            let p = EnsembleParams::new(gamma, nu, n)?;
            let s = graphon_entropy(&p, KernelKind::FermiDirac)?;
            Ok((n, n as f64 * s / (n as f64).ln()))
        })
        .collect()
}

/// Intervals `I_t = (ρ_{t−1}, ρ_t]` with `ρ_0 = −∞`, `ρ_1 = −R_n` and equal
/// steps up to `ρ_m = R_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub m: usize,
    pub breakpoints: Vec<f64>,
}

impl PartitionSpec {
    /// `m_n = ⌈log² n⌉ + 1` intervals.
    pub fn for_params(p: &EnsembleParams) -> Result<Self> {
        Self::with_intervals(p, Self::default_count(p.n))
    }

    pub fn default_count(n: u64) -> usize {
        let l = (n as f64).ln();
        (l * l).ceil() as usize + 1
    }

    pub fn with_intervals(p: &EnsembleParams, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("partition needs at least one interval"));
        }
        if m == 1 {
            return Ok(PartitionSpec { m, breakpoints: vec![f64::NEG_INFINITY, p.r_n] });
        }
        if !(p.r_n > 0.0) {
            return Err(Error::domain(format!("partition needs R_n > 0, got {}", p.r_n)));
        }
        let r = p.r_n;
        let step = 2.0 * r / (m - 1) as f64;
        let mut b = vec![f64::NEG_INFINITY];
        b.extend((0..m).map(|t| if t == m - 1 { r } else { -r + step * t as f64 }));
        Ok(PartitionSpec { m, breakpoints: b })
    }

    /// Halve every finite interval: `m' = 2m − 1`, nested in `self`.
    pub fn refine(&self) -> PartitionSpec {
        if self.m == 1 {
            return self.clone();
        }
        let mut b = vec![f64::NEG_INFINITY, self.breakpoints[1]];
        for w in self.breakpoints[1..].windows(2) {
            b.push(0.5 * (w[0] + w[1]));
            b.push(w[1]);
        }
        PartitionSpec { m: b.len() - 1, breakpoints: b }
    }

    pub fn masses(&self, p: &EnsembleParams) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .map(|w| if w[0] == f64::NEG_INFINITY { p.cdf(w[1]) } else { p.mass(w[0], w[1]) })
            .collect()
    }

    /// Entropy of the interval-membership variable.
    pub fn membership_entropy(&self, p: &EnsembleParams) -> f64 {
        self.masses(p).iter().filter(|&&m| m > 0.0).map(|&m| -m * m.ln()).sum()
    }
}

/// Piecewise-constant graphon: box averages of `W` under `μ_n × μ_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragedGraphon {
    pub partition: PartitionSpec,
    pub masses: Vec<f64>,
    /// Row-major `m × m`, symmetric.
    pub values: Vec<f64>,
}

impl AveragedGraphon {
    pub fn value(&self, s: usize, t: usize) -> f64 {
        self.values[s * self.partition.m + t]
    }

    /// `σ[W̃] = Σ_{s,t} μ(I_s) μ(I_t) H(W̃_st)`.
    pub fn entropy(&self) -> f64 {
        let m = self.partition.m;
        let mut tot = 0.0;
        for s in 0..m {
            let mut row = 0.0;
            for t in 0..m {
                row += self.masses[t] * h(self.value(s, t));
            }
            tot += self.masses[s] * row;
        }
        tot
    }

    /// `(min, max)` of `W` over box `(s, t)`.
    pub fn box_range(&self, s: usize, t: usize) -> (f64, f64) {
        let b = &self.partition.breakpoints;
        let lo = KernelKind::FermiDirac.of_sum(b[s + 1] + b[t + 1]);
        let hi = KernelKind::FermiDirac.of_sum(b[s] + b[t]);
        (lo, hi)
    }
}

pub fn averaged_graphon(p: &EnsembleParams, part: &PartitionSpec) -> Result<AveragedGraphon> {
    averaged_graphon_with(p, part, Exec::default())
}

/// Box integrals are done in `u = e^{γ(x−R_n)}`, where `dμ_n = du`.
pub fn averaged_graphon_with(p: &EnsembleParams, part: &PartitionSpec, exec: Exec) -> Result<AveragedGraphon> {
    let m = part.m;
    let masses = part.masses(p);
    let ub: Vec<f64> = part.breakpoints.iter().map(|&x| p.cdf(x)).collect();
    let (g, two_r) = (p.gamma, 2.0 * p.r_n);
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|s| (s..m).map(move |t| (s, t))).collect();
    let tol = Tolerance::rel(1e-9);
    let vals = exec.try_map_range(pairs.len(), |k| -> Result<f64> {
        let (s, t) = pairs[k];
        let e = integrate_2d(
            |u, v| KernelKind::FermiDirac.of_sum(two_r + (u.ln() + v.ln()) / g),
            &[ub[s], ub[s + 1]],
            |_| vec![ub[t], ub[t + 1]],
            tol,
        )?;
        Ok(e.value / (masses[s] * masses[t]))
    })?;
    let mut values = vec![0.0; m * m];
    for (&(s, t), v) in pairs.iter().zip(vals) {
        values[s * m + t] = v;
        values[t * m + s] = v;
    }
    Ok(AveragedGraphon { partition: part.clone(), masses, values })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub params: EnsembleParams,
    pub sigma: f64,
    /// `n σ / log n`
    pub sigma_rescaled: f64,
    /// `C(n,2) σ`
    pub gibbs_lower: f64,
    /// `n S[M] + C(n,2) σ[W̃]`
    pub gibbs_upper: f64,
    pub sigma_averaged: f64,
    pub s_m: f64,
    pub partition: PartitionSpec,
}

impl EntropyReport {
    fn rescale(&self, s: f64) -> f64 {
        let n = self.params.n as f64;
        2.0 * s / (n * n.ln())
    }

    /// `2 S_lower / (n log n)`
    pub fn lower_rescaled(&self) -> f64 {
        self.rescale(self.gibbs_lower)
    }

    /// `2 S_upper / (n log n)`
    pub fn upper_rescaled(&self) -> f64 {
        self.rescale(self.gibbs_upper)
    }
}

fn pairs_count(n: u64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

pub fn gibbs_entropy_bounds(p: &EnsembleParams) -> Result<EntropyReport> {
    gibbs_entropy_bounds_with(p, Exec::default())
}

pub fn gibbs_entropy_bounds_with(p: &EnsembleParams, exec: Exec) -> Result<EntropyReport> {
    if p.n < 2 {
        return Err(Error::domain("Gibbs bounds need n ≥ 2"));
    }
    let sigma = graphon_entropy(p, KernelKind::FermiDirac)?;
    let partition = PartitionSpec::for_params(p)?;
    let avg = averaged_graphon_with(p, &partition, exec)?;
    let sigma_averaged = avg.entropy();
    let s_m = partition.membership_entropy(p);
    let c2 = pairs_count(p.n);
    let n = p.n as f64;
    Ok(EntropyReport {
        params: *p,
        sigma,
        sigma_rescaled: n * sigma / n.ln(),
        gibbs_lower: c2 * sigma,
        gibbs_upper: n * s_m + c2 * sigma_averaged,
        sigma_averaged,
        s_m,
        partition,
    })
}

/// `W` on an equal-mass grid: cell `i` has `u_i = (i + ½)/N`, weight `1/N`.
#[derive(Clone, Debug)]
pub struct MaximalityGrid {
    pub size: usize,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

impl MaximalityGrid {
    pub fn new(p: &EnsembleParams, size: usize) -> Self {
        let x: Vec<f64> = (0..size)
            .map(|i| p.r_n + ((i as f64 + 0.5) / size as f64).ln() / p.gamma)
            .collect();
        let mut w = vec![0.0; size * size];
        for i in 0..size {
            for j in 0..size {
                w[i * size + j] = KernelKind::FermiDirac.eval(x[i], x[j]);
            }
        }
        MaximalityGrid { size, x, w }
    }

    pub fn sigma(&self) -> f64 {
        let n2 = (self.size * self.size) as f64;
        self.w.iter().map(|&v| h(v)).sum::<f64>() / n2
    }

    /// `σ[W] − σ[W + εΔ]`, summed termwise.
    pub fn decrease(&self, delta: &[f64], eps: f64) -> f64 {
        let n2 = (self.size * self.size) as f64;
        self.w
            .iter()
            .zip(delta)
            .map(|(&w, &d)| h(w) - h(w + eps * d))
            .sum::<f64>()
            / n2
    }

    /// Random rank-one `a aᵀ` projected to zero row sums, scaled so that
    /// `W + εΔ` stays inside `[W/2, (1+W)/2]` for `|ε| ≤ eps_max`.
    pub fn random_perturbation<R: Rng>(&self, rng: &mut R, eps_max: f64) -> Vec<f64> {
        let n = self.size;
        let a: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        let mean_a = a.iter().sum::<f64>() / n as f64;
        // a aᵀ minus its row means a_i·ā, column means ā·a_j, plus ā²
        // is the centred outer product (a − ā)(a − ā)ᵀ
        let c: Vec<f64> = a.iter().map(|v| v - mean_a).collect();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = c[i] * c[j];
            }
        }
        let mut scale = f64::INFINITY;
        for (k, &dv) in d.iter().enumerate() {
            if dv != 0.0 {
                let w = self.w[k];
                scale = scale.min(w.min(1.0 - w) / (2.0 * dv.abs() * eps_max));
            }
        }
        if scale.is_finite() {
            d.iter_mut().for_each(|v| *v *= scale);
        }
        d
    }

    /// Largest absolute row sum (zero for a valid perturbation).
    pub fn max_row_sum(&self, delta: &[f64]) -> f64 {
        delta
            .chunks(self.size)
            .map(|r| r.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

pub const MAXIMALITY_GRID: usize = 200;
pub const MAXIMALITY_EPSILONS: [f64; 4] = [1e-2, -1e-2, 1e-3, -1e-3];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub grid: usize,
    pub trials: usize,
    pub sigma: f64,
    pub epsilons: Vec<f64>,
    /// `decreases[trial][k]` for `epsilons[k]`
    pub decreases: Vec<Vec<f64>>,
    /// `(trial, ε)` pairs where entropy went up
    pub violations: Vec<(usize, f64)>,
    /// Per trial: mean decrease at `|ε| = 10⁻²` over mean at `10⁻³`.
    pub scaling_ratios: Vec<f64>,
}

impl MaximalityReport {
    pub fn all_non_increasing(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_graphon_maximality(p: &EnsembleParams, trials: usize, seed: u64) -> Result<MaximalityReport> {
    verify_graphon_maximality_with(p, trials, seed, MAXIMALITY_GRID, Exec::default())
}

pub fn verify_graphon_maximality_with(
    p: &EnsembleParams,
    trials: usize,
    seed: u64,
    grid: usize,
    exec: Exec,
) -> Result<MaximalityReport> {
    if trials < 1 {
        return Err(Error::domain("need at least one trial"));
    }
    let g = MaximalityGrid::new(p, grid);
    let eps_max = MAXIMALITY_EPSILONS.iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let decreases = exec.map_range(trials, |t| {
        let mut rng = stream(seed, Domain::Perturbation, t as u64);
        let d = g.random_perturbation(&mut rng, eps_max);
        MAXIMALITY_EPSILONS.iter().map(|&e| g.decrease(&d, e)).collect::<Vec<f64>>()
    });
    let mut violations = Vec::new();
    for (t, row) in decreases.iter().enumerate() {
        for (k, &d) in row.iter().enumerate() {
            if d < 0.0 {
                violations.push((t, MAXIMALITY_EPSILONS[k]));
            }
        }
    }
    let scaling_ratios = decreases.iter().map(|r| (r[0] + r[1]) / (r[2] + r[3])).collect();
    Ok(MaximalityReport {
        grid,
        trials,
        sigma: g.sigma(),
        epsilons: MAXIMALITY_EPSILONS.to_vec(),
        decreases,
        violations,
        scaling_ratios,
    })
}
