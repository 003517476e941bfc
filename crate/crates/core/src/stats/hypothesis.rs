//! Two-sample tests used to compare samplers.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov limiting survival function `Q(λ) = 2 Σ (−1)^{j−1} e^{−2j²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for j in 1..=100 {
        let t = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        s += if j % 2 == 1 { t } else { -t };
        if t < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value
/// (conservative for discrete data).
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> TestResult {
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    TestResult { statistic: d, p_value: kolmogorov_q(lambda) }
}

/// Chi-square test of homogeneity for two count vectors. Sparse bins are
/// pooled from the right until every expected count is at least `min_expected`.
pub fn chi2_homogeneity(a: &[u64], b: &[u64], min_expected: f64) -> TestResult {
    let len = a.len().max(b.len());
    let get = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0) as f64;
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let tot = na + nb;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut cur = (0.0, 0.0);
    for k in (0..len).rev() {
        cur.0 += get(a, k);
        cur.1 += get(b, k);
        let col = cur.0 + cur.1;
        if col * na.min(nb) / tot >= min_expected {
            bins.push(cur);
            cur = (0.0, 0.0);
        }
    }
    if cur.0 + cur.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => bins.push(cur),
        }
    }
    if bins.len() < 2 {
        return TestResult { statistic: 0.0, p_value: 1.0 };
    }
    let mut stat = 0.0;
    for &(oa, ob) in &bins {
        let col = oa + ob;
        let ea = col * na / tot;
        let eb = col * nb / tot;
        stat += (oa - ea).powi(2) / ea + (ob - eb).powi(2) / eb;
    }
    let df = (bins.len() - 1) as f64;
    let p = 1.0 - ChiSquared::new(df).expect("df > 0").cdf(stat);
    TestResult { statistic: stat, p_value: p }
}

/// Two-sided z test for equal means (unequal variances, large samples).
pub fn mean_difference_z(x: &[f64], y: &[f64]) -> TestResult {
    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, var / n)
    };
    let (mx, vx) = stats(x);
    let (my, vy) = stats(y);
    let se = (vx + vy).sqrt();
    let z = if se > 0.0 { (mx - my) / se } else { 0.0 };
    TestResult { statistic: z, p_value: erfc(z.abs() / std::f64::consts::SQRT_2) }
}

/// Two-sided z test that a binomial count matches probability `p`.
pub fn binomial_z(successes: u64, trials: u64, p: f64) -> TestResult {
    let n = trials as f64;
    let sd = (n * p * (1.0 - p)).sqrt();
    let z = (successes as f64 - n * p) / sd;
    TestResult { statistic: z, p_value: erfc(z.abs() / std::f64::consts::SQRT_2) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn kolmogorov_reference_points() {
        // classic critical values: Q(1.358) ≈ 0.05, Q(1.628) ≈ 0.01
        assert!((kolmogorov_q(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_q(1.628) - 0.01).abs() < 1e-3);
    }

    #[test]
    fn ks_same_and_shifted() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let x: Vec<f64> = (0..2000).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..2000).map(|_| rng.random()).collect();
        let z: Vec<f64> = (0..2000).map(|_| rng.random::<f64>() + 0.1).collect();
        assert!(ks_two_sample(&x, &y).p_value > 0.01);
        assert!(ks_two_sample(&x, &z).p_value < 1e-6);
    }

    #[test]
    fn chi2_same_and_different() {
        let a = [100, 200, 300, 50, 3, 1];
        let b = [98, 205, 290, 55, 2, 2];
        assert!(chi2_homogeneity(&a, &b, 5.0).p_value > 0.5);
        let c = [200, 200, 200, 50, 3, 1];
        assert!(chi2_homogeneity(&a, &c, 5.0).p_value < 1e-6);
    }

    #[test]
    fn z_tests() {
        assert!((mean_difference_z(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).p_value - 1.0).abs() < 1e-15);
        assert!(binomial_z(500, 1000, 0.5).p_value > 0.99);
        assert!(binomial_z(600, 1000, 0.5).p_value < 1e-8);
    }
}
