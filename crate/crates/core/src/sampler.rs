//! Graph samplers: the naive O(n²) oracle, the exact O(n + m) rejection
//! sampler and the growing (projective) construction.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphon::w_fermi_dirac;
use crate::params::{EnsembleParams, Representation};
use crate::rng::{hash_words, pair_uniform, stream, Domain};

/// Largest `n` the naive sampler accepts without the override.
pub const NAIVE_LIMIT: usize = 30_000;

/// Simple undirected graph: sorted `(i, j)` pairs with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Build from arbitrary pairs; rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, mut edges: Vec<(u32, u32)>) -> Result<Self> {
        check_size(n)?;
        for e in edges.iter_mut() {
            if e.0 == e.1 {
                return Err(Error::domain(format!("self-loop at node {}", e.0)));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.1 as usize >= n {
                return Err(Error::domain(format!("edge ({}, {}) outside n = {n}", e.0, e.1)));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate edge"));
        }
        Ok(Graph { n, edges })
    }

    fn from_pairs(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Graph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.n];
        for &(i, j) in &self.edges {
            d[i as usize] += 1;
            d[j as usize] += 1;
        }
        d
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.n as f64
        }
    }

    /// Subgraph induced by nodes `0..m`.
    pub fn induced_prefix(&self, m: usize) -> Graph {
        let m = m.min(self.n);
        let edges = self.edges.iter().copied().filter(|&(_, j)| (j as usize) < m).collect();
        Graph { n: m, edges }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > i32::MAX as usize {
        Err(Error::domain(format!("n = {n} exceeds 32-bit node ids")))
    } else {
        Ok(())
    }
}

/// Latent coordinates of one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSample {
    pub params: EnsembleParams,
    pub rep: Representation,
    pub coords: Vec<f64>,
    pub seed: u64,
}

impl CoordinateSample {
    /// Coordinates in the exponential representation.
    pub fn exponential(&self) -> Result<Vec<f64>> {
        if self.rep == Representation::Exponential {
            return Ok(self.coords.clone());
        }
        self.coords
            .iter()
            .map(|&c| self.params.convert(c, self.rep, Representation::Exponential))
            .collect()
    }

    pub fn to_representation(&self, rep: Representation) -> Result<CoordinateSample> {
        let coords = self
            .coords
            .iter()
            .map(|&c| self.params.convert(c, self.rep, rep))
            .collect::<Result<_>>()?;
        Ok(CoordinateSample { params: self.params, rep, coords, seed: self.seed })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// `n` i.i.d. draws from `μ_n` by inverse CDF, then mapped to `rep`.
pub fn sample_coordinates(p: &EnsembleParams, seed: u64, rep: Representation) -> CoordinateSample {
    let mut rng = stream(seed, Domain::Coordinates, 0);
    let mut coords = Vec::with_capacity(p.n as usize);
    for _ in 0..p.n {
        let u = 1.0 - rng.random::<f64>();
        let x = p.r_n + u.ln() / p.gamma;
        coords.push(match rep {
            Representation::Exponential => x,
            _ => p.convert(x, Representation::Exponential, rep).expect("x lies in the support"),
        });
    }
    CoordinateSample { params: *p, rep, coords, seed }
}

/// Every pair tested against `W(x_i, x_j)` with a uniform keyed by
/// `(seed, i, j)`.
pub fn sample_graph_naive(c: &CoordinateSample, seed: u64) -> Result<Graph> {
    sample_graph_naive_with(c, seed, Exec::default(), false)
}

pub fn sample_graph_naive_with(c: &CoordinateSample, seed: u64, exec: Exec, allow_large: bool) -> Result<Graph> {
    let n = c.len();
    check_size(n)?;
    if n > NAIVE_LIMIT && !allow_large {
        return Err(Error::SizeGuard { n, limit: NAIVE_LIMIT });
    }
    let x = c.exponential()?;
    let key = hash_words(&[seed, Domain::NaiveEdges as u64]);
    let rows = exec.map_range(n, |i| {
        let mut row = Vec::new();
        for j in i + 1..n {
            if pair_uniform(key, i as u64, j as u64) < w_fermi_dirac(x[i], x[j]) {
                row.push((i as u32, j as u32));
            }
        }
        row
    });
    Ok(Graph::from_pairs(n, rows.concat()))
}

/// Candidates `cand` must be non-increasing weights. Calls `emit(b)` for
/// each accepted offset `b`, each with probability `W = q/(1+q)`, `q = ua·cand[b]`.
fn connect_anchor(ua: f64, cand: &[f64], rng: &mut ChaCha8Rng, mut emit: impl FnMut(usize)) {
    let n = cand.len();
    // Where q > 1 the product bound is useless; test pairs directly.
    let dense = cand.partition_point(|&ub| ua * ub > 1.0);
    for (b, &ub) in cand[..dense].iter().enumerate() {
        let w = 1.0 / (1.0 + 1.0 / (ua * ub));
        if rng.random::<f64>() < w {
            emit(b);
        }
    }
    let mut b = dense;
    while b < n {
        let p = ua * cand[b];
        if !(p > 0.0) {
            break;
        }
        if p < 1.0 {
            let r = 1.0 - rng.random::<f64>();
            let skip = (r.ln() / (-p).ln_1p()).floor();
            if skip >= (n - b) as f64 {
                break;
            }
            b += skip as usize;
        }
        let q = ua * cand[b];
        // accept with W(q)/p
        if rng.random::<f64>() * p * (1.0 + q) < q {
            emit(b);
        }
        b += 1;
    }
}

const ANCHOR_CHUNK: usize = 2048;

/// Exact sampler in expected `O(n + m)` time: candidates proposed under
/// `min(e^{−x_i} e^{−x_j}, 1)` by geometric skipping, then thinned to `W`.
pub fn sample_graph_fast(c: &CoordinateSample, seed: u64) -> Result<Graph> {
    sample_graph_fast_with(c, seed, Exec::default())
}

pub fn sample_graph_fast_with(c: &CoordinateSample, seed: u64, exec: Exec) -> Result<Graph> {
    let n = c.len();
    check_size(n)?;
    let x = c.exponential()?;
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| x[a as usize].total_cmp(&x[b as usize]).then(a.cmp(&b)));
    let u: Vec<f64> = order.iter().map(|&i| (-x[i as usize]).exp()).collect();
    let chunks = n.div_ceil(ANCHOR_CHUNK);
    let parts = exec.map_range(chunks, |ci| {
        let mut out = Vec::new();
        for a in ci * ANCHOR_CHUNK..((ci + 1) * ANCHOR_CHUNK).min(n) {
            let ia = order[a];
            let mut rng = stream(seed, Domain::FastEdges, ia as u64);
            connect_anchor(u[a], &u[a + 1..], &mut rng, |b| {
                let ib = order[a + 1 + b];
                out.push(if ia < ib { (ia, ib) } else { (ib, ia) });
            });
        }
        out
    });
    Ok(Graph::from_pairs(n, parts.concat()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthVariant {
    /// γ = 2 only: `v_i = v_{i−1} + Exp(ν/2)`, `x_i = ½ log(2 v_i)`.
    PoissonProcess,
    /// Any γ: `x_i` drawn from `μ` restricted to `(R_{i−1}, R_i]`.
    /// Matches the equilibrium model only asymptotically.
    Increment,
}

/// State of a growing graph; nodes arrive with non-decreasing coordinates.
#[derive(Clone, Debug)]
pub struct GrowthState {
    params: EnsembleParams,
    variant: GrowthVariant,
    seed: u64,
    coord_rng: ChaCha8Rng,
    /// Poisson-process position `v = ½e^{2x}` of the last node.
    pub v: f64,
    coords: Vec<f64>,
    weights: Vec<f64>,
    edges: Vec<(u32, u32)>,
}

impl GrowthState {
    pub fn new(gamma: f64, nu: f64, seed: u64, variant: GrowthVariant) -> Result<Self> {
        let params = EnsembleParams::new(gamma, nu, 1)?;
        if variant == GrowthVariant::PoissonProcess && gamma != 2.0 {
            return Err(Error::domain(format!("the Poisson-process growth variant needs γ = 2, got {gamma}")));
        }
        Ok(GrowthState {
            params,
            variant,
            seed,
            coord_rng: stream(seed, Domain::GrowthCoordinates, 0),
            v: 0.0,
            coords: Vec::new(),
            weights: Vec::new(),
            edges: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_node(&mut self) -> Result<()> {
        let i = self.coords.len();
        check_size(i + 1)?;
        let p = &self.params;
        let x = match self.variant {
            GrowthVariant::PoissonProcess => {
                let e = -(1.0 - self.coord_rng.random::<f64>()).ln() / p.delta;
                self.v += e;
                0.5 * (2.0 * self.v).ln()
            }
            GrowthVariant::Increment => {
                // e^{γ R_m} = (m / (β²ν))^{γ/2}
                let c = p.beta * p.beta * p.nu;
                let hi = ((i + 1) as f64 / c).powf(p.gamma / 2.0);
                let lo = (i as f64 / c).powf(p.gamma / 2.0);
                let u = 1.0 - self.coord_rng.random::<f64>();
                let x = (lo + u * (hi - lo)).ln() / p.gamma;
                self.v = 0.5 * (2.0 * x).exp();
                x
            }
        };
        let ua = (-x).exp();
        let mut rng = stream(self.seed, Domain::GrowthEdges, i as u64);
        let edges = &mut self.edges;
        connect_anchor(ua, &self.weights, &mut rng, |j| edges.push((j as u32, i as u32)));
        self.coords.push(x);
        self.weights.push(ua);
        Ok(())
    }

    pub fn grow_to(&mut self, n: usize) -> Result<()> {
        while self.coords.len() < n {
            self.add_node()?;
        }
        Ok(())
    }

    pub fn graph(&self) -> Graph {
        Graph::from_pairs(self.coords.len(), self.edges.clone())
    }

    pub fn coordinates(&self) -> Result<CoordinateSample> {
        let params = self.params.with_n(self.coords.len().max(1) as u64)?;
        Ok(CoordinateSample {
            params,
            rep: Representation::Exponential,
            coords: self.coords.clone(),
            seed: self.seed,
        })
    }
}

/// Grow a graph node by node to `target_n`. Uses the Poisson-process
/// variant when γ = 2 and the increment variant otherwise.
pub fn sample_graph_growing(p: &EnsembleParams, seed: u64, target_n: usize) -> Result<(Graph, CoordinateSample)> {
    let variant = if p.gamma == 2.0 { GrowthVariant::PoissonProcess } else { GrowthVariant::Increment };
    sample_graph_growing_with(p, seed, target_n, variant)
}

pub fn sample_graph_growing_with(
    p: &EnsembleParams,
    seed: u64,
    target_n: usize,
    variant: GrowthVariant,
) -> Result<(Graph, CoordinateSample)> {
    let mut s = GrowthState::new(p.gamma, p.nu, seed, variant)?;
    s.grow_to(target_n)?;
    Ok((s.graph(), s.coordinates()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Naive,
    Fast,
    Growing,
}

/// One replica from a run seed: coordinates and edges use separate streams.
pub fn sample_replica(p: &EnsembleParams, seed: u64, kind: SamplerKind, exec: Exec, allow_large: bool) -> Result<Graph> {
    match kind {
        SamplerKind::Naive => {
            let c = sample_coordinates(p, seed, Representation::Exponential);
            sample_graph_naive_with(&c, seed, exec, allow_large)
        }
        SamplerKind::Fast => {
            let c = sample_coordinates(p, seed, Representation::Exponential);
            sample_graph_fast_with(&c, seed, exec)
        }
        SamplerKind::Growing => Ok(sample_graph_growing(p, seed, p.n as usize)?.0),
    }
}
