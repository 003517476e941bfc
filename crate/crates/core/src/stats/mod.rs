//! Degree statistics and their comparison with theory.

pub mod hypothesis;
mod ingest;
mod tail;

pub use ingest::{ingest_edge_list, ingest_reader, IngestReport};
pub use tail::{fit_power_law_tail, tail_exponent, TailFit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::sampler::Graph;
use crate::theory::{expected_avg_degree_finite_n, finite_n_degree_pmf, DegreeLaw};

/// Pooled degree counts over graphs of one size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub n: usize,
    pub graphs: usize,
    /// `counts[k]` = number of (graph, node) pairs with degree `k`
    pub counts: Vec<u64>,
    /// Average degree of each contributing graph.
    pub graph_mean_degrees: Vec<f64>,
}

impl DegreeHistogram {
    pub fn new(n: usize) -> Self {
        DegreeHistogram { n, graphs: 0, counts: Vec::new(), graph_mean_degrees: Vec::new() }
    }

    pub fn add_graph(&mut self, g: &Graph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::MixedSizes(self.n, g.n()));
        }
        self.add_degrees(&g.degrees());
        Ok(())
    }

    pub(crate) fn add_degrees(&mut self, degrees: &[u32]) {
        let mut sum = 0u64;
        for &d in degrees {
            let d = d as usize;
            if d >= self.counts.len() {
                self.counts.resize(d + 1, 0);
            }
            self.counts[d] += 1;
            sum += d as u64;
        }
        self.graphs += 1;
        self.graph_mean_degrees
            .push(if degrees.is_empty() { 0.0 } else { sum as f64 / degrees.len() as f64 });
    }

    /// Associative merge of two histograms over the same `n`.
    pub fn merge(&mut self, other: &DegreeHistogram) -> Result<()> {
        if other.n != self.n {
            return Err(Error::MixedSizes(self.n, other.n));
        }
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.graphs += other.graphs;
        self.graph_mean_degrees.extend_from_slice(&other.graph_mean_degrees);
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn pmf(&self) -> Vec<f64> {
        let t = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        let t = self.total() as f64;
        self.counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / t
    }

    /// Standard error of the mean degree from the spread of per-graph means.
    pub fn mean_degree_se(&self) -> Option<f64> {
        let g = self.graph_mean_degrees.len();
        if g < 2 {
            return None;
        }
        let m = self.graph_mean_degrees.iter().sum::<f64>() / g as f64;
        let var = self.graph_mean_degrees.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (g - 1) as f64;
        Some((var / g as f64).sqrt())
    }

    pub fn max_degree(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// Logarithmic bins `[2^j, 2^{j+1})` after a `k = 0` bin: `(lo, hi, density)`
    /// where density is probability mass divided by bin width.
    pub fn log_binned(&self) -> Vec<(usize, usize, f64)> {
        let pmf = self.pmf();
        let mut out = Vec::new();
        if pmf.is_empty() {
            return out;
        }
        out.push((0, 1, pmf[0]));
        let mut lo = 1;
        while lo < pmf.len() {
            let hi = (2 * lo).min(pmf.len());
            let mass: f64 = pmf[lo..hi].iter().sum();
            out.push((lo, 2 * lo, mass / lo as f64));
            lo *= 2;
        }
        out
    }
}

pub fn degree_histogram(graphs: &[Graph]) -> Result<DegreeHistogram> {
    let first = graphs.first().ok_or_else(|| Error::domain("no graphs given"))?;
    let mut h = DegreeHistogram::new(first.n());
    for g in graphs {
        h.add_graph(g)?;
    }
    Ok(h)
}

/// Total variation over `k ≤ K` with everything above `K` lumped into one bin.
/// `a` and `b` are pmfs (possibly truncated); missing entries count as zero.
pub fn tv_distance_lumped(a: &[f64], b: &[f64], kmax: usize) -> f64 {
    let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let mut d = 0.0;
    let (mut sa, mut sb) = (0.0, 0.0);
    for k in 0..=kmax {
        let (x, y) = (get(a, k), get(b, k));
        d += (x - y).abs();
        sa += x;
        sb += y;
    }
    let tail = ((1.0 - sa).max(0.0) - (1.0 - sb).max(0.0)).abs();
    0.5 * (d + tail)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tv_asymptotic: f64,
    pub tv_finite_n: f64,
    /// Allowed average-degree offset in standard errors.
    pub se_multiple: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tv_asymptotic: 0.02, tv_finite_n: 0.01, se_multiple: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub kmax: usize,
    pub tv_asymptotic: f64,
    pub tv_finite_n: f64,
    pub avg_degree_empirical: f64,
    pub avg_degree_se: Option<f64>,
    pub avg_degree_finite_n: f64,
    pub nu: f64,
    pub tail: Option<TailFit>,
    pub tolerances: Tolerances,
    pub tv_asymptotic_ok: bool,
    pub tv_finite_n_ok: bool,
    /// `None` when a single graph leaves the standard error undefined.
    pub avg_degree_ok: Option<bool>,
}

pub const DEFAULT_KMAX: usize = 100;

pub fn compare_to_theory(h: &DegreeHistogram, p: &EnsembleParams) -> Result<ComparisonReport> {
    compare_to_theory_with(h, p, DEFAULT_KMAX, Tolerances::default())
}

pub fn compare_to_theory_with(
    h: &DegreeHistogram,
    p: &EnsembleParams,
    kmax: usize,
    tol: Tolerances,
) -> Result<ComparisonReport> {
    let emp = h.pmf();
    let asym = DegreeLaw::new(p)?.with_cross_check(false).pmf_vec(kmax as u64)?;
    let fin = finite_n_degree_pmf(p, kmax as u64)?;
    let tv_asymptotic = tv_distance_lumped(&emp, &asym, kmax);
    let tv_finite_n = tv_distance_lumped(&emp, &fin, kmax);
    let avg_degree_empirical = h.mean_degree();
    let avg_degree_finite_n = expected_avg_degree_finite_n(p)?;
    let avg_degree_se = h.mean_degree_se();
    let avg_degree_ok =
        avg_degree_se.map(|se| (avg_degree_empirical - avg_degree_finite_n).abs() <= tol.se_multiple * se);
    Ok(ComparisonReport {
        kmax,
        tv_asymptotic,
        tv_finite_n,
        avg_degree_empirical,
        avg_degree_se,
        avg_degree_finite_n,
        nu: p.nu,
        tail: fit_power_law_tail(h, tail::MIN_TAIL).ok(),
        tolerances: tol,
        tv_asymptotic_ok: tv_asymptotic <= tol.tv_asymptotic,
        tv_finite_n_ok: tv_finite_n <= tol.tv_finite_n,
        avg_degree_ok,
    })
}
