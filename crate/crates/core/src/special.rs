//! Special functions not covered by `statrs`: the upper incomplete gamma
//! function for arbitrary real first argument, Hurwitz zeta, Poisson log-pmf.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad::{integrate_points, Tolerance};

/// `Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt` for any real `a` and `x > 0`, by
/// quadrature in `s = ln(t/x)`: `Γ(a,x) = x^a ∫_0^∞ e^{a s − x e^s} ds`.
pub fn upper_gamma_quad(a: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("upper_gamma_quad needs x > 0, got a={a}, x={x}")));
    }
    // Peak of a·s − x·e^s sits at s = ln(a/x) when a > x.
    let mut pts = vec![0.0];
    if a > x {
        pts.push((a / x).ln());
    }
    pts.push(f64::INFINITY);
    let e = integrate_points(|s| (a * s - x * s.exp()).exp(), &pts, Tolerance::rel(2e-13))?;
    Ok(x.powf(a) * e.value)
}

/// `ln(λ^k e^{−λ} / k!)`.
pub fn ln_poisson(k: u64, lambda: f64) -> f64 {
    if k == 0 {
        return -lambda;
    }
    if lambda == 0.0 || lambda == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    let k = k as f64;
    k * lambda.ln() - lambda - ln_gamma(k + 1.0)
}

const BERNOULLI_2J: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q+k)^{−s}` for `s > 1`, `q > 0`:
/// a short direct sum followed by an Euler–Maclaurin tail.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    const N: usize = 12;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (q + k as f64).powf(-s);
    }
    let m = q + N as f64;
    let mut tail = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s);
    // rising factorial s(s+1)…(s+2j−2) / (2j)!
    let mut coef = s / 2.0;
    let mut mpow = m.powf(-s - 1.0);
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b * coef * mpow;
        tail += term;
        if term.abs() < 1e-17 * tail.abs() {
            break;
        }
        let jj = (j + 1) as f64;
        coef *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj) / ((2.0 * jj + 1.0) * (2.0 * jj + 2.0));
        mpow /= m * m;
    }
    sum + tail
}
