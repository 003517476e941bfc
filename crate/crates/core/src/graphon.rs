//! Connection kernels, Bernoulli entropy and the expected-degree family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::quad::{integrate_points, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// `1/(e^{x+y}+1)`
    FermiDirac,
    /// `min(e^{−(x+y)}, 1)`
    ClassicalLimit,
}

impl KernelKind {
    /// Kernel value as a function of `s = x + y`.
    #[inline]
    pub fn of_sum(self, s: f64) -> f64 {
        match self {
            KernelKind::FermiDirac => fermi_dirac_sum(s),
            KernelKind::ClassicalLimit => {
                if s <= 0.0 {
                    1.0
                } else {
                    (-s).exp()
                }
            }
        }
    }

    #[inline]
    pub fn eval(self, x: f64, y: f64) -> f64 {
        self.of_sum(x + y)
    }

    /// `H(K(s))` evaluated without forming `K` near 0 or 1.
    #[inline]
    pub fn entropy_of_sum(self, s: f64) -> f64 {
        match self {
            KernelKind::FermiDirac => {
                let t = s.abs();
                let e = (-t).exp();
                let l = e.ln_1p();
                e / (1.0 + e) * t + l
            }
            KernelKind::ClassicalLimit => {
                if s <= 0.0 {
                    0.0
                } else {
                    let q = (-s).exp();
                    q * s - (1.0 - q) * (-(-s).exp_m1()).ln()
                }
            }
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::FermiDirac => "fermi-dirac",
            KernelKind::ClassicalLimit => "classical-limit",
        })
    }
}

impl FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermi-dirac" => Ok(KernelKind::FermiDirac),
            "classical-limit" => Ok(KernelKind::ClassicalLimit),
            other => Err(Error::domain(format!("unknown kernel '{other}'"))),
        }
    }
}

#[inline]
fn fermi_dirac_sum(s: f64) -> f64 {
    if s > 0.0 {
        let e = (-s).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + s.exp())
    }
}

#[inline]
pub fn w_fermi_dirac(x: f64, y: f64) -> f64 {
    fermi_dirac_sum(x + y)
}

#[inline]
pub fn w_classical(x: f64, y: f64) -> f64 {
    KernelKind::ClassicalLimit.of_sum(x + y)
}

/// Kernel on unit-interval coordinates `x̃ = e^{γ(x−R_n)}`.
pub fn w_unit_interval(p: &EnsembleParams, xt: f64, yt: f64) -> Result<f64> {
    if !(xt > 0.0 && xt <= 1.0 && yt > 0.0 && yt <= 1.0) {
        return Err(Error::domain(format!("unit-interval coordinates must lie in (0,1], got ({xt}, {yt})")));
    }
    Ok(1.0 / (p.scale() * (xt * yt).powf(1.0 / p.gamma) + 1.0))
}

/// Kernel on Pareto coordinates in `[βν, ∞)`.
pub fn w_pareto(p: &EnsembleParams, x: f64, y: f64) -> Result<f64> {
    let lo = p.beta * p.nu * (1.0 - 1e-12);
    if !(x >= lo && y >= lo) {
        return Err(Error::domain(format!("Pareto coordinates must be ≥ βν = {}, got ({x}, {y})", p.beta * p.nu)));
    }
    Ok(1.0 / (p.nu * p.n as f64 / (x * y) + 1.0))
}

/// Bernoulli entropy in nats; exactly 0 at 0 and 1.
pub fn bernoulli_entropy(pr: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&pr) {
        return Err(Error::domain(format!("probability out of range: {pr}")));
    }
    Ok(h(pr))
}

/// Unchecked Bernoulli entropy.
#[inline]
pub fn h(pr: f64) -> f64 {
    if pr <= 0.0 || pr >= 1.0 {
        return 0.0;
    }
    -pr * pr.ln() - (1.0 - pr) * (-pr).ln_1p()
}

/// `E[f(X + Y)]` for `X, Y ~ μ_n` i.i.d.
///
/// `R_n − X` is `Exp(γ)`, so `X + Y = 2R_n − T` with `T ~ Gamma(2, γ)`; the
/// double integral collapses to one dimension.
pub fn pair_expectation<F: Fn(f64) -> f64>(p: &EnsembleParams, f: F, tol: Tolerance) -> Result<f64> {
    let g = p.gamma;
    let two_r = 2.0 * p.r_n;
    let mut pts = vec![0.0];
    if two_r > 0.0 {
        pts.push(two_r);
    }
    pts.push(f64::INFINITY);
    let e = integrate_points(
        |t| {
            let w = g * g * t * (-g * t).exp();
            if w == 0.0 { 0.0 } else { w * f(two_r - t) }
        },
        &pts,
        tol,
    )?;
    Ok(e.value)
}

/// `E[f(x + Y)]` for `Y ~ μ_n`.
pub fn partner_expectation<F: Fn(f64) -> f64>(p: &EnsembleParams, x: f64, f: F, tol: Tolerance) -> Result<f64> {
    let g = p.gamma;
    let top = x + p.r_n;
    let mut pts = vec![0.0];
    if top > 0.0 {
        pts.push(top);
    }
    pts.push(f64::INFINITY);
    let e = integrate_points(
        |t| {
            let w = g * (-g * t).exp();
            if w == 0.0 { 0.0 } else { w * f(top - t) }
        },
        &pts,
        tol,
    )?;
    Ok(e.value)
}

/// Expected degree `κ_n(x)`. Fermi-Dirac: `(n−1)∫W(x,y)dμ_n(y)` by
/// quadrature. Classical limit: `n·ω_n·e^{−x}` on `[0, R_n]`, zero below.
pub fn expected_degree_fn(p: &EnsembleParams, x: f64, kind: KernelKind) -> Result<f64> {
    if x > p.r_n * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::domain(format!("x = {x} above R_n = {}", p.r_n)));
    }
    match kind {
        KernelKind::FermiDirac => {
            let w = partner_expectation(p, x, fermi_dirac_sum, Tolerance::rel(1e-10))?;
            Ok((p.n as f64 - 1.0) * w)
        }
        KernelKind::ClassicalLimit => {
            if x < 0.0 {
                Ok(0.0)
            } else {
                Ok(p.n as f64 * omega_n(p) * (-x).exp())
            }
        }
    }
}

/// `ω_n = ∫_0^{R_n} e^{−x} dμ_n(x) = (1 − e^{−(γ−1)R_n})/(β e^{R_n})`.
pub fn omega_n(p: &EnsembleParams) -> f64 {
    -(-(p.gamma - 1.0) * p.r_n).exp_m1() * (-p.r_n).exp() / p.beta
}

/// `ε_n = e^{−(γ−1)R_n} − e^{−2γR_n}`.
pub fn epsilon_n(p: &EnsembleParams) -> f64 {
    (-(p.gamma - 1.0) * p.r_n).exp() - (-2.0 * p.gamma * p.r_n).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Representation;
    use crate::quad::{integrate, integrate_2d};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn p(g: f64, nu: f64, n: u64) -> EnsembleParams {
        EnsembleParams::new(g, nu, n).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(w_fermi_dirac(0.0, 0.0), 0.5);
        assert!((w_fermi_dirac(1.0, 1.0) - 0.119_202_9).abs() < 1e-7);
        assert!(w_fermi_dirac(400.0, 400.0) >= 0.0 && w_fermi_dirac(400.0, 400.0) < 1e-300);
        assert_eq!(w_fermi_dirac(-400.0, -400.0), 1.0);
        assert_eq!(w_classical(0.0, 0.0), 1.0);
        assert!((w_classical(1.0, 1.0) - 0.135_335_3).abs() < 1e-7);
        assert_eq!(w_classical(-3.0, 0.0), 1.0);
    }

    #[test]
    fn unit_interval_and_pareto_forms() {
        let q = p(2.0, 10.0, 10_000);
        let end = w_unit_interval(&q, 1.0, 1.0).unwrap();
        assert!((end - 1.0 / (4000.0 + 1.0)).abs() < 1e-15);
        assert!((end - w_fermi_dirac(q.r_n, q.r_n)).abs() < 1e-15);
        let e2 = (-2f64).exp();
        let v = w_unit_interval(&q, e2, e2).unwrap();
        assert!((v - 1.0 / (4000.0 * e2 + 1.0)).abs() < 1e-15);
        assert!((v - 1.843_858e-3).abs() < 1e-9);
        assert!(w_unit_interval(&q, 0.0, 0.5).is_err());

        let mid = (10.0f64 * 1e4).sqrt();
        assert!((w_pareto(&q, mid, mid).unwrap() - 0.5).abs() < 1e-15);
        let bn = q.beta * q.nu;
        assert!((w_pareto(&q, bn, bn).unwrap() - end).abs() < 1e-15);
        assert!((w_pareto(&q, 50.0, 50.0).unwrap() - 1.0 / 41.0).abs() < 1e-15);
        assert!(w_pareto(&q, 1.0, 50.0).is_err());
    }

    #[test]
    fn forms_agree_after_conversion() {
        let q = p(1.1, 4.92, 100_000);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = q.quantile(1.0 - rng.random::<f64>()).unwrap();
            let y = q.quantile(1.0 - rng.random::<f64>()).unwrap();
            let w = w_fermi_dirac(x, y);
            let ux = q.convert(x, Representation::Exponential, Representation::UnitInterval).unwrap();
            let uy = q.convert(y, Representation::Exponential, Representation::UnitInterval).unwrap();
            let px = q.convert(x, Representation::Exponential, Representation::Pareto).unwrap();
            let py = q.convert(y, Representation::Exponential, Representation::Pareto).unwrap();
            assert!((w - w_unit_interval(&q, ux, uy).unwrap()).abs() <= 1e-12);
            assert!((w - w_pareto(&q, px, py).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn entropy_values() {
        assert!((bernoulli_entropy(0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(bernoulli_entropy(0.0).unwrap(), 0.0);
        assert_eq!(bernoulli_entropy(1.0).unwrap(), 0.0);
        assert!((bernoulli_entropy(0.1).unwrap() - 0.325_083).abs() < 1e-6);
        assert!(bernoulli_entropy(1.1).is_err());
        assert!(bernoulli_entropy(-0.1).is_err());
    }

    #[test]
    fn entropy_of_sum_matches_direct() {
        for &s in &[-30.0, -3.0, -0.2, 0.0, 0.3, 2.0, 10.0, 35.0] {
            for k in [KernelKind::FermiDirac, KernelKind::ClassicalLimit] {
                let direct = h(k.of_sum(s));
                let fused = k.entropy_of_sum(s);
                assert!((direct - fused).abs() <= 1e-14 + 1e-12 * direct, "{k} s={s}: {direct} vs {fused}");
            }
        }
        // deep tail keeps relative accuracy: H(W) ≈ (s+1)e^{−s}
        let s = 700.0;
        let v = KernelKind::FermiDirac.entropy_of_sum(s);
        assert!((v / ((s + 1.0) * (-s).exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn omega_closed_form_vs_quadrature() {
        let q = p(2.0, 10.0, 10_000);
        let w = omega_n(&q);
        let quad = integrate(|x| (-x).exp() * q.density(x), 0.0, q.r_n, Tolerance::rel(1e-13)).unwrap();
        assert!((w - quad.value).abs() < 1e-10);
        assert!((w - 0.031_122_7).abs() < 1e-7);
        let cl = expected_degree_fn(&q, 0.0, KernelKind::ClassicalLimit).unwrap();
        assert!((cl - 1e4 * w).abs() < 1e-9);
        for &g in &[1.5, 3.0] {
            let q = p(g, 4.0, 50_000);
            let quad = integrate(|x| (-x).exp() * q.density(x), 0.0, q.r_n, Tolerance::rel(1e-13)).unwrap();
            assert!((omega_n(&q) - quad.value).abs() < 1e-10);
        }
    }

    #[test]
    fn omega_leading_term() {
        let mut last = f64::INFINITY;
        for e in [4, 6, 8, 10, 12] {
            let q = p(2.0, 10.0, 10u64.pow(e));
            let r = (omega_n(&q) * (q.n as f64 / q.nu).sqrt() - 1.0).abs();
            assert!(r < last);
            last = r;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn expected_degree_kernels_agree_at_boundary() {
        let q = p(2.0, 10.0, 10_000);
        let fd = expected_degree_fn(&q, q.r_n, KernelKind::FermiDirac).unwrap();
        let cl = expected_degree_fn(&q, q.r_n, KernelKind::ClassicalLimit).unwrap();
        assert!((fd / cl - 1.0).abs() < 0.05, "{fd} vs {cl}");
        assert!(expected_degree_fn(&q, q.r_n + 1.0, KernelKind::FermiDirac).is_err());
        assert_eq!(expected_degree_fn(&q, -0.5, KernelKind::ClassicalLimit).unwrap(), 0.0);
    }

    #[test]
    fn expected_degree_vs_plain_quadrature() {
        let q = p(1.5, 4.0, 20_000);
        for &x in &[-3.0, 0.0, 2.5, q.r_n] {
            let direct = integrate(|y| w_fermi_dirac(x, y) * q.density(y), f64::NEG_INFINITY, q.r_n, Tolerance::rel(1e-12))
                .unwrap()
                .value
                * (q.n as f64 - 1.0);
            let k = expected_degree_fn(&q, x, KernelKind::FermiDirac).unwrap();
            assert!((k - direct).abs() < 1e-9 * direct, "x={x}");
        }
    }

    #[test]
    fn pair_expectation_matches_nested_2d() {
        for &(g, nu, n) in &[(2.0, 10.0, 10_000u64), (1.1, 4.92, 10_000), (3.0, 2.0, 1000)] {
            let q = p(g, nu, n);
            let one = pair_expectation(&q, fermi_dirac_sum, Tolerance::rel(1e-12)).unwrap();
            let r = q.r_n;
            let two = integrate_2d(
                |x, y| w_fermi_dirac(x, y) * q.density(x) * q.density(y),
                &[f64::NEG_INFINITY, -r, r],
                |x| if -x < r { vec![f64::NEG_INFINITY, -x, r] } else { vec![f64::NEG_INFINITY, r] },
                Tolerance::rel(1e-10),
            )
            .unwrap();
            assert!((one - two.value).abs() < 1e-8 * one, "γ={g}: {one} vs {}", two.value);
        }
    }

    #[test]
    fn epsilon_value() {
        let q = p(2.0, 10.0, 10_000);
        assert!((epsilon_n(&q) - 0.015_811).abs() < 1e-6);
    }

    // E|W − Ŵ| by importance-sampled Monte Carlo over the pair sum.
    fn mc_abs_gap(q: &EnsembleParams, samples: usize, seed: u64) -> f64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = q.gamma;
        let hi = 2.0 * q.r_n + 40.0 / g;
        let mut acc = 0.0;
        for _ in 0..samples {
            let t = hi * rng.random::<f64>();
            let s = 2.0 * q.r_n - t;
            let gap = (KernelKind::ClassicalLimit.of_sum(s) - KernelKind::FermiDirac.of_sum(s)).abs();
            acc += hi * g * g * t * (-g * t).exp() * gap;
        }
        acc / samples as f64
    }

    #[test]
    fn kernel_gap_decays_at_predicted_rate() {
        for &g in &[1.5, 2.0, 3.0] {
            let est: Vec<f64> = [1_000u64, 10_000, 100_000]
                .iter()
                .map(|&n| mc_abs_gap(&p(g, 10.0, n), 200_000, n))
                .collect();
            let predicted = 10f64.powf(-(g + 1.0) / 2.0);
            for w in est.windows(2) {
                let ratio = w[1] / w[0];
                assert!(ratio / predicted < 3.0 && predicted / ratio < 3.0, "γ={g}: {ratio} vs {predicted}");
            }
        }
    }

    proptest! {
        #[test]
        fn kernel_properties(x in -50.0f64..50.0, y in -50.0f64..50.0, d in 1e-3f64..5.0) {
            for k in [KernelKind::FermiDirac, KernelKind::ClassicalLimit] {
                prop_assert_eq!(k.eval(x, y), k.eval(y, x));
                prop_assert!(k.eval(x + d, y) <= k.eval(x, y));
            }
            let s = x + y;
            let (w, c) = (w_fermi_dirac(x, y), w_classical(x, y));
            prop_assert!(c >= w);
            if s >= 0.0 {
                // subtraction carries an absolute rounding error of order ε·Ŵ
                prop_assert!(c - w <= (-2.0 * s).exp() * (1.0 + 1e-9) + 4.0 * f64::EPSILON * c);
            }
            if s.abs() < 30.0 {
                prop_assert!(w_fermi_dirac(x + d, y) < w);
            }
        }

        #[test]
        fn entropy_is_symmetric_and_bounded(pr in 0.0f64..=1.0) {
            let v = bernoulli_entropy(pr).unwrap();
            prop_assert!((0.0..=std::f64::consts::LN_2 + 1e-15).contains(&v));
            prop_assert!((v - h(1.0 - pr)).abs() < 1e-12);
        }
    }
}
