//! Discrete power-law tail fitting: maximum likelihood for the exponent and
//! Kolmogorov–Smirnov selection of the lower cutoff.

use serde::{Deserialize, Serialize};

use super::DegreeHistogram;
use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;

/// Fewest observations at or above `k_min` accepted for a fit.
pub const MIN_TAIL: u64 = 100;
const ALPHA_LO: f64 = 1.0 + 1e-6;
const ALPHA_HI: f64 = 30.0;
/// KS distance beyond which the power law is considered not to describe the tail.
const MAX_KS: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub alpha: f64,
    pub k_min: usize,
    pub ks: f64,
    pub n_tail: u64,
}

struct Tail<'a> {
    counts: &'a [u64],
    k_min: usize,
    n: u64,
    sum_ln: f64,
}

impl<'a> Tail<'a> {
    fn new(h: &'a DegreeHistogram, k_min: usize) -> Result<Self> {
        if k_min == 0 {
            return Err(Error::domain("k_min must be at least 1"));
        }
        let counts = h.counts.get(k_min..).unwrap_or(&[]);
        let n: u64 = counts.iter().sum();
        if n < MIN_TAIL {
            return Err(Error::InsufficientTail(format!("{n} observations at k ≥ {k_min}, need {MIN_TAIL}")));
        }
        let sum_ln = counts.iter().enumerate().map(|(i, &c)| c as f64 * ((k_min + i) as f64).ln()).sum();
        Ok(Tail { counts, k_min, n, sum_ln })
    }

    fn log_likelihood(&self, a: f64) -> f64 {
        -(self.n as f64) * hurwitz_zeta(a, self.k_min as f64).ln() - a * self.sum_ln
    }

    fn mle(&self) -> f64 {
        // golden-section search; the log-likelihood is concave in α
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (ALPHA_LO, ALPHA_HI);
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (self.log_likelihood(c), self.log_likelihood(d));
        while b - a > 1e-10 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = self.log_likelihood(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = self.log_likelihood(d);
            }
        }
        0.5 * (a + b)
    }

    fn ks(&self, alpha: f64) -> f64 {
        let z0 = hurwitz_zeta(alpha, self.k_min as f64);
        let mut z = z0;
        let mut cum = 0u64;
        let mut d = 0.0f64;
        for (i, &c) in self.counts.iter().enumerate() {
            let k = (self.k_min + i) as f64;
            cum += c;
            // P(K ≤ k) = 1 − ζ(α, k+1)/ζ(α, k_min)
            z -= k.powf(-alpha);
            let model = 1.0 - z / z0;
            d = d.max((cum as f64 / self.n as f64 - model).abs());
        }
        d
    }

    fn fit(&self) -> Result<TailFit> {
        let alpha = self.mle();
        if alpha - ALPHA_LO < 1e-4 || ALPHA_HI - alpha < 1e-4 {
            return Err(Error::InsufficientTail(format!("likelihood maximum on the search boundary (α = {alpha})")));
        }
        Ok(TailFit { alpha, k_min: self.k_min, ks: self.ks(alpha), n_tail: self.n })
    }
}

/// Discrete MLE of the tail exponent over `k ≥ k_min`. Fails when the tail
/// is too short or does not decay like a power law.
pub fn tail_exponent(h: &DegreeHistogram, k_min: usize) -> Result<f64> {
    let f = Tail::new(h, k_min)?.fit()?;
    if f.ks > MAX_KS {
        return Err(Error::InsufficientTail(format!(
            "tail does not follow a decaying power law (KS {:.3} at α = {:.3})",
            f.ks, f.alpha
        )));
    }
    Ok(f.alpha)
}

/// Fit with `k_min` chosen to minimize the KS distance among cutoffs leaving
/// at least `min_tail` observations.
pub fn fit_power_law_tail(h: &DegreeHistogram, min_tail: u64) -> Result<TailFit> {
    let min_tail = min_tail.max(MIN_TAIL);
    let mut best: Option<TailFit> = None;
    let mut above: u64 = h.counts.iter().skip(1).sum();
    for k in 1..h.counts.len() {
        if above < min_tail {
            break;
        }
        if h.counts[k] > 0 {
            if let Ok(f) = Tail::new(h, k).and_then(|t| t.fit()) {
                if best.is_none_or(|b| f.ks < b.ks) {
                    best = Some(f);
                }
            }
        }
        above -= h.counts[k];
    }
    let best = best.ok_or_else(|| Error::InsufficientTail("no admissible k_min".into()))?;
    if best.ks > MAX_KS {
        return Err(Error::InsufficientTail(format!("best power-law fit has KS {:.3}", best.ks)));
    }
    Ok(best)
}
