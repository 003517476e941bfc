//! Degree theory: Pareto mixing law, the mixed-Poisson degree pmf, finite-n
//! expected degree and the finite-size tail of the expected-degree variable.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphon::{expected_degree_fn, epsilon_n, omega_n, pair_expectation, KernelKind};
use crate::params::EnsembleParams;
use crate::quad::{integrate_points, integrate_vec, Tolerance};
use crate::special::{ln_poisson, upper_gamma_quad};

/// Pareto law with tail `(scale/y)^shape` above `scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoLaw {
    pub shape: f64,
    pub scale: f64,
}

impl ParetoLaw {
    /// Mixing law of the expected degree: shape `γ`, scale `νβ`.
    pub fn for_params(p: &EnsembleParams) -> Self {
        ParetoLaw { shape: p.gamma, scale: p.nu * p.beta }
    }

    pub fn tail(&self, y: f64) -> f64 {
        if y <= self.scale {
            1.0
        } else {
            (self.scale / y).powf(self.shape)
        }
    }

    pub fn density(&self, y: f64) -> f64 {
        if y < self.scale {
            0.0
        } else {
            self.shape * self.scale.powf(self.shape) * y.powf(-self.shape - 1.0)
        }
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale / (self.shape - 1.0)
    }
}

pub fn pareto_tail(law: &ParetoLaw, y: f64) -> f64 {
    law.tail(y)
}

/// Above this value of `k − γ` the pmf is taken from the regularized
/// incomplete gamma function instead of the recurrence.
const RECURRENCE_LIMIT: f64 = 30.0;

/// Limiting degree law `P(k) = γ(βν)^γ Γ(k−γ, βν)/k!`.
#[derive(Clone, Debug)]
pub struct DegreeLaw {
    pub gamma: f64,
    pub nu: f64,
    pub mixing: ParetoLaw,
    head: Vec<f64>,
    cross_check: bool,
}

impl DegreeLaw {
    pub fn new(p: &EnsembleParams) -> Result<Self> {
        let mixing = ParetoLaw::for_params(p);
        let (g, x) = (p.gamma, mixing.scale);
        // p_0 = γ x^γ Γ(−γ, x), then
        // p_{k+1} = ((k−γ) p_k + γ·Pois(k; x)) / (k+1),
        // which is the recurrence Γ(a+1,x) = aΓ(a,x) + x^a e^{−x} divided by (k+1)!.
        let mut head = vec![g * x.powf(g) * upper_gamma_quad(-g, x)?];
        let mut k = 0usize;
        while (k + 1) as f64 - g <= RECURRENCE_LIMIT {
            let pk = head[k];
            let next = ((k as f64 - g) * pk + g * ln_poisson(k as u64, x).exp()) / (k + 1) as f64;
            head.push(next);
            k += 1;
        }
        if head.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Instability(format!("incomplete-gamma recurrence left [0,1] at γ={g}, ν={}", p.nu)));
        }
        Ok(DegreeLaw { gamma: g, nu: p.nu, mixing, head, cross_check: cfg!(debug_assertions) })
    }

    /// Compare every value against the mixing-integral oracle (slow).
    pub fn with_cross_check(mut self, on: bool) -> Self {
        self.cross_check = on;
        self
    }

    fn closed_form(&self, k: u64) -> f64 {
        if let Some(&v) = self.head.get(k as usize) {
            return v;
        }
        let (g, x) = (self.gamma, self.mixing.scale);
        let a = k as f64 - g;
        let ln = g.ln() + g * x.ln() + ln_gamma(a) - ln_gamma(k as f64 + 1.0);
        ln.exp() * gamma_ur(a, x)
    }

    pub fn pmf(&self, k: u64) -> Result<f64> {
        let v = self.closed_form(k);
        if self.cross_check {
            let o = mixed_poisson_pmf_oracle(&self.mixing, k)?;
            if (v - o).abs() > 1e-6 * o.max(1e-300) {
                return Err(Error::Instability(format!("degree pmf routes disagree at k={k}: {v:e} vs {o:e}")));
            }
        }
        Ok(v)
    }

    /// `P(0..=kmax)`.
    pub fn pmf_vec(&self, kmax: u64) -> Result<Vec<f64>> {
        (0..=kmax).map(|k| self.pmf(k)).collect()
    }

    /// Asymptotic `P(D > K) ≈ (βν)^γ K^{−γ}`.
    pub fn tail_mass_approx(&self, kmax: u64) -> f64 {
        (self.mixing.scale / kmax as f64).powf(self.gamma)
    }

    /// Asymptotic `Σ_{k>K} k P(k) ≈ γ(βν)^γ K^{1−γ}/(γ−1)`.
    pub fn mean_tail_approx(&self, kmax: u64) -> f64 {
        let g = self.gamma;
        g * self.mixing.scale.powf(g) * (kmax as f64).powf(1.0 - g) / (g - 1.0)
    }
}

pub fn degree_pmf(law: &DegreeLaw, k: u64) -> Result<f64> {
    law.pmf(k)
}

/// `E[Y^k e^{−Y}/k!]` for `Y` Pareto, by log-space quadrature over `s = ln y`.
pub fn mixed_poisson_pmf_oracle(law: &ParetoLaw, k: u64) -> Result<f64> {
    let (g, x0) = (law.shape, law.scale);
    let c = g.ln() + g * x0.ln();
    let s0 = x0.ln();
    let kf = k as f64;
    let mut pts = vec![s0];
    if kf - g > x0 {
        let peak = (kf - g).ln();
        let width = 1.0 / (kf - g).sqrt();
        for d in [-6.0, 0.0, 6.0] {
            let s = peak + d * width;
            if s > *pts.last().expect("non-empty") {
                pts.push(s);
            }
        }
    }
    pts.push(f64::INFINITY);
    let e = integrate_points(
        |s| {
            let y = s.exp();
            (ln_poisson(k, y) + c - g * s).exp()
        },
        &pts,
        Tolerance::rel(1e-12),
    )?;
    Ok(e.value)
}

/// `E[D_n] = (n−1) E[W(X,Y)]`.
pub fn expected_avg_degree_finite_n(p: &EnsembleParams) -> Result<f64> {
    let w = pair_expectation(p, |s| KernelKind::FermiDirac.of_sum(s), Tolerance::rel(1e-11))?;
    Ok((p.n as f64 - 1.0) * w)
}

/// Classical-limit approximation `(n−1)·ω_n²`, the positive-quadrant
/// integral of `e^{−(x+y)}`.
pub fn expected_avg_degree_classical(p: &EnsembleParams) -> f64 {
    let w = omega_n(p);
    (p.n as f64 - 1.0) * w * w
}

/// `P(n ŵ_n(X) > t)`.
pub fn finite_size_degree_tail(p: &EnsembleParams, t: f64) -> f64 {
    let eps = epsilon_n(p);
    let lo = p.nu * p.beta * (1.0 - eps);
    let hi = (p.nu * p.n as f64).sqrt() * (1.0 - eps);
    if t < lo {
        1.0
    } else if t > hi {
        0.0
    } else {
        (p.nu * p.beta / t).powf(p.gamma) * (1.0 - eps).powf(p.gamma)
    }
}

/// Finite-n degree pmf `P(0..=kmax)`: Poisson mixed over `κ_n(X)`, `X ~ μ_n`.
pub fn finite_n_degree_pmf(p: &EnsembleParams, kmax: u64) -> Result<Vec<f64>> {
    let dim = kmax as usize + 1;
    let g = p.gamma;
    let r = p.r_n;
    let mut pts = vec![0.0];
    if r > 0.0 {
        pts.push(r);
    }
    pts.push(f64::INFINITY);
    let mut failure = None;
    let tol = Tolerance { rel: 1e-9, abs: 1e-14, max_intervals: 2000 };
    let est = integrate_vec(
        |t, out: &mut [f64]| {
            let w = g * (-g * t).exp();
            if w == 0.0 || failure.is_some() {
                out.iter_mut().for_each(|v| *v = 0.0);
                return;
            }
            match expected_degree_fn(p, r - t, KernelKind::FermiDirac) {
                Ok(kappa) => {
                    for (k, v) in out.iter_mut().enumerate() {
                        *v = w * ln_poisson(k as u64, kappa).exp();
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    out.iter_mut().for_each(|v| *v = 0.0);
                }
            }
        },
        &pts,
        dim,
        tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.into_iter().map(|e| e.value).collect())
}

/// Finite-n expected average degree for several sizes.
pub fn expected_avg_degree_series(gamma: f64, nu: f64, sizes: &[u64], exec: Exec) -> Result<Vec<(u64, f64)>> {
    exec.try_map_range(sizes.len(), |i| {
        let p = EnsembleParams::new(gamma, nu, sizes[i])?;
        Ok((sizes[i], expected_avg_degree_finite_n(&p)?))
    })
}
