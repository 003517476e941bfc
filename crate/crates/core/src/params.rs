//! Ensemble parameters, the coordinate measure `μ_n` and the three equivalent
//! coordinate representations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(γ, ν, n)` and the constants derived from them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct EnsembleParams {
    pub gamma: f64,
    pub nu: f64,
    pub n: u64,
    /// `1 − 1/γ`
    pub beta: f64,
    /// `γ + 1`, the degree tail exponent
    pub alpha: f64,
    /// `½ log(n / (β² ν))`
    pub r_n: f64,
    /// `ν / 2`, rate of the growth process (γ = 2)
    pub delta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    gamma: f64,
    nu: f64,
    n: u64,
}

impl TryFrom<RawParams> for EnsembleParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        EnsembleParams::new(r.gamma, r.nu, r.n)
    }
}

impl EnsembleParams {
    pub fn new(gamma: f64, nu: f64, n: u64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::domain(format!("gamma must be > 1, got {gamma}")));
        }
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::domain(format!("nu must be > 0, got {nu}")));
        }
        if n < 1 {
            return Err(Error::domain("n must be at least 1"));
        }
        let beta = 1.0 - 1.0 / gamma;
        let r_n = 0.5 * (n as f64 / (beta * beta * nu)).ln();
        Ok(EnsembleParams { gamma, nu, n, beta, alpha: gamma + 1.0, r_n, delta: nu / 2.0 })
    }

    /// Same `(γ, ν)`, different size.
    pub fn with_n(&self, n: u64) -> Result<Self> {
        Self::new(self.gamma, self.nu, n)
    }

    /// `e^{2R_n} = n/(β²ν)`.
    pub fn scale(&self) -> f64 {
        self.n as f64 / (self.beta * self.beta * self.nu)
    }

    pub fn density(&self, x: f64) -> f64 {
        if x > self.r_n {
            0.0
        } else {
            self.gamma * (self.gamma * (x - self.r_n)).exp()
        }
    }

    pub fn ln_density(&self, x: f64) -> f64 {
        if x > self.r_n {
            f64::NEG_INFINITY
        } else {
            self.gamma.ln() + self.gamma * (x - self.r_n)
        }
    }

    /// `μ_n((−∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x >= self.r_n {
            1.0
        } else {
            (self.gamma * (x - self.r_n)).exp()
        }
    }

    /// `μ_n((a, b])`, accurate when the interval is short.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        let b = b.min(self.r_n);
        if !(a < b) {
            return 0.0;
        }
        // e^{γ(b−R)} (1 − e^{−γ(b−a)})
        -(self.gamma * (b - self.r_n)).exp() * (-self.gamma * (b - a)).exp_m1()
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::domain(format!("quantile needs u in (0,1], got {u}")));
        }
        Ok(self.r_n + u.ln() / self.gamma)
    }

    /// `μ_n((−∞, 0)) = (β²ν/n)^{γ/2}`.
    pub fn negative_mass(&self) -> f64 {
        self.cdf(0.0)
    }

    pub fn support(&self, rep: Representation) -> (f64, f64) {
        match rep {
            Representation::Exponential => (f64::NEG_INFINITY, self.r_n),
            Representation::UnitInterval => (0.0, 1.0),
            Representation::Pareto => (self.beta * self.nu, f64::INFINITY),
        }
    }

    fn in_support(&self, x: f64, rep: Representation) -> bool {
        let slack = 1e-12;
        match rep {
            Representation::Exponential => x <= self.r_n + slack * self.r_n.abs().max(1.0),
            Representation::UnitInterval => x > 0.0 && x <= 1.0 + slack,
            Representation::Pareto => x >= self.beta * self.nu * (1.0 - slack),
        }
    }

    /// Map a coordinate between representations. The Pareto form uses
    /// `y = √(νn)·e^{−x}`, which makes `W_P(y_i, y_j) = W(x_i, x_j)`.
    pub fn convert(&self, x: f64, from: Representation, to: Representation) -> Result<f64> {
        if x.is_nan() || !self.in_support(x, from) {
            return Err(Error::domain(format!("coordinate {x} outside the {from} support")));
        }
        let e = match from {
            Representation::Exponential => x,
            Representation::UnitInterval => self.r_n + x.ln() / self.gamma,
            Representation::Pareto => self.sqrt_nu_n().ln() - x.ln(),
        };
        Ok(match to {
            Representation::Exponential => e,
            Representation::UnitInterval => (self.gamma * (e - self.r_n)).exp(),
            Representation::Pareto => self.sqrt_nu_n() * (-e).exp(),
        })
    }

    fn sqrt_nu_n(&self) -> f64 {
        (self.nu * self.n as f64).sqrt()
    }
}

pub fn derive_params(gamma: f64, nu: f64, n: u64) -> Result<EnsembleParams> {
    EnsembleParams::new(gamma, nu, n)
}

pub fn mu_n_density(p: &EnsembleParams, x: f64) -> f64 {
    p.density(x)
}

pub fn mu_n_quantile(p: &EnsembleParams, u: f64) -> Result<f64> {
    p.quantile(u)
}

pub fn convert_coordinate(p: &EnsembleParams, x: f64, from: Representation, to: Representation) -> Result<f64> {
    p.convert(x, from, to)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    Exponential,
    UnitInterval,
    Pareto,
}

impl Representation {
    pub const ALL: [Representation; 3] =
        [Representation::Exponential, Representation::UnitInterval, Representation::Pareto];
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Exponential => "exponential",
            Representation::UnitInterval => "unit-interval",
            Representation::Pareto => "pareto",
        })
    }
}

impl FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" => Ok(Representation::Exponential),
            "unit-interval" => Ok(Representation::UnitInterval),
            "pareto" => Ok(Representation::Pareto),
            other => Err(Error::domain(format!("unknown representation '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, Tolerance};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn p2() -> EnsembleParams {
        EnsembleParams::new(2.0, 10.0, 10_000).unwrap()
    }

    #[test]
    fn derived_constants() {
        let p = p2();
        assert!((p.r_n - 0.5 * 4000f64.ln()).abs() < 1e-14);
        assert!((p.r_n - 4.147_025).abs() < 1e-6);
        assert!(((2.0 * p.r_n).exp() * 2.5 / 1e4 - 1.0).abs() < 1e-12);
        assert_eq!(p.alpha, 3.0);
        assert_eq!(p.delta, 5.0);

        let q = EnsembleParams::new(1.1, 4.92, 10_000).unwrap();
        assert!((q.beta - 1.0 / 11.0).abs() < 1e-15);
        let direct = 0.5 * (1e4 / (q.beta * q.beta * 4.92)).ln();
        assert!((q.r_n - direct).abs() < 1e-14);
        assert!((q.r_n - 6.206_40).abs() < 1e-4);
    }

    #[test]
    fn zero_radius_when_n_equals_beta2_nu() {
        // β = 1/2, ν = 16 → β²ν = 4
        let p = EnsembleParams::new(2.0, 16.0, 4).unwrap();
        assert!(p.r_n.abs() < 1e-15);
    }

    #[test]
    fn invalid_params() {
        assert!(EnsembleParams::new(1.0, 10.0, 10).is_err());
        assert!(EnsembleParams::new(2.0, 0.0, 10).is_err());
        assert!(EnsembleParams::new(2.0, 10.0, 0).is_err());
        assert!(EnsembleParams::new(f64::NAN, 10.0, 10).is_err());
    }

    #[test]
    fn density_values_and_normalization() {
        let p = p2();
        assert_eq!(p.density(p.r_n), 2.0);
        assert!((p.density(p.r_n - 1.0) - 2.0 * (-2f64).exp()).abs() < 1e-15);
        assert!((p.density(p.r_n - 1.0) - 0.270_671).abs() < 1e-6);
        assert_eq!(p.density(p.r_n + 1e-9), 0.0);
        let tot = integrate(|x| p.density(x), f64::NEG_INFINITY, p.r_n, Tolerance::rel(1e-12)).unwrap();
        assert!((tot.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negative_mass_by_quadrature() {
        for &(g, nu, n) in &[(2.0, 10.0, 10_000u64), (1.5, 4.0, 1000), (3.0, 2.0, 100_000)] {
            let p = EnsembleParams::new(g, nu, n).unwrap();
            let exact = (p.beta * p.beta * nu / n as f64).powf(g / 2.0);
            let q = integrate(|x| p.density(x), f64::NEG_INFINITY, 0.0, Tolerance::rel(1e-12)).unwrap();
            assert!((q.value - exact).abs() < 1e-10 * exact.max(1e-3));
            assert!((p.negative_mass() - exact).abs() < 1e-13 * exact);
        }
    }

    #[test]
    fn quantile_endpoints_and_errors() {
        let p = p2();
        assert_eq!(p.quantile(1.0).unwrap(), p.r_n);
        assert!((p.quantile((-2f64).exp()).unwrap() - (p.r_n - 1.0)).abs() < 1e-14);
        assert!(p.quantile(0.0).is_err());
        assert!(p.quantile(1.5).is_err());
    }

    #[test]
    fn quantile_cdf_round_trip() {
        let p = EnsembleParams::new(1.1, 4.92, 100_000).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let u: f64 = 1.0 - rng.random::<f64>();
            let x = p.quantile(u).unwrap();
            assert!((p.cdf(x) - u).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampled_cdf_ks_statistic() {
        let p = p2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut xs: Vec<f64> = (0..100_000)
            .map(|_| p.quantile(1.0 - rng.random::<f64>()).unwrap())
            .collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = p.cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(d <= 0.01, "KS {d}");
    }

    #[test]
    fn conversion_endpoints() {
        let p = p2();
        let u = p.convert(p.r_n, Representation::Exponential, Representation::UnitInterval).unwrap();
        assert!((u - 1.0).abs() < 1e-15);
        let y = p.convert(p.r_n, Representation::Exponential, Representation::Pareto).unwrap();
        assert!((y - p.beta * p.nu).abs() < 1e-12);
        assert!(p.convert(p.r_n + 1.0, Representation::Exponential, Representation::Pareto).is_err());
        assert!(p.convert(0.0, Representation::UnitInterval, Representation::Exponential).is_err());
        assert!(p.convert(1.0, Representation::Pareto, Representation::Exponential).is_err());
    }

    #[test]
    fn representation_parse_round_trip() {
        for r in Representation::ALL {
            assert_eq!(r.to_string().parse::<Representation>().unwrap(), r);
        }
    }

    proptest! {
        #[test]
        fn all_conversions_compose_to_identity(
            g in 1.05f64..4.0, nu in 0.5f64..20.0, ln_n in 3.0f64..14.0, u in 1e-9f64..1.0,
        ) {
            let p = EnsembleParams::new(g, nu, ln_n.exp() as u64).unwrap();
            let x = p.quantile(u).unwrap();
            for from in Representation::ALL {
                let a = p.convert(x, Representation::Exponential, from).unwrap();
                for to in Representation::ALL {
                    let b = p.convert(a, from, to).unwrap();
                    let back = p.convert(b, to, from).unwrap();
                    prop_assert!((back - a).abs() <= 1e-10 * a.abs().max(1e-300) + 1e-12);
                }
            }
        }

        #[test]
        fn cdf_mass_consistent(g in 1.05f64..4.0, a in -10.0f64..5.0, w in 0.0f64..3.0) {
            let p = EnsembleParams::new(g, 10.0, 10_000).unwrap();
            let b = a + w;
            let m = p.mass(a, b);
            prop_assert!(m >= 0.0);
            prop_assert!((m - (p.cdf(b) - p.cdf(a))).abs() < 1e-13);
        }
    }
}
