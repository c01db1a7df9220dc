//! Coupon-collector statistics: closed forms, Monte Carlo simulation, and
//! kernel density estimation for the trial-count distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Euler-Mascheroni constant, the limit of `H_n - ln n`.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Largest message-space size for which binomial coefficients stay exact.
pub const MAX_COVERAGE_N: u32 = 64;

/// Compensated (Kahan) accumulator for long alternating or ascending sums.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// n-th harmonic number, summed in ascending k with compensation.
pub fn harmonic(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("harmonic number requires n >= 1".into()));
    }
    let mut acc = KahanSum::default();
    for k in 1..=n {
        acc.add(1.0 / f64::from(k));
    }
    Ok(acc.value())
}

/// Expected number of uniform draws to collect all `n` items: `n * H_n`.
pub fn expected_trials(n: u32) -> Result<f64> {
    Ok(f64::from(n) * harmonic(n)?)
}

/// Asymptotic approximation `n * (ln n + gamma)`.
pub fn approx_expected_trials(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("approximation requires n >= 1".into()));
    }
    Ok(f64::from(n) * (f64::from(n).ln() + EULER_MASCHERONI))
}

/// Expected number of additional draws spent collecting the k-th new item
/// out of `n`: `n / (n - k + 1)`. Increasing in k (diminishing returns);
/// the sum over k = 1..=n is `n * H_n`.
pub fn expected_incremental_trials(n: u32, k: u32) -> Result<f64> {
    if n < 1 || k < 1 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(f64::from(n) / f64::from(n - k + 1))
}

/// Exact binomial coefficient for n <= 64.
fn binomial(n: u32, k: u32) -> u128 {
    debug_assert!(k <= n && n <= MAX_COVERAGE_N);
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=u128::from(k) {
        result = result * (u128::from(n) - i + 1) / i;
    }
    result
}

/// Probability that `k` specific items were never drawn in `t` uniform
/// trials, times the number of such subsets: `C(n,k) * ((n-k)/n)^t`,
/// with `0^0 = 1`.
pub fn prob_exactly_k_missed_bound(n: u32, k: u32, t: u32) -> Result<f64> {
    if n < 1 || k < 1 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    if n > MAX_COVERAGE_N {
        return Err(Error::Domain(format!("exact binomials limited to n <= {MAX_COVERAGE_N}")));
    }
    let ratio = f64::from(n - k) / f64::from(n);
    // powi(0) == 1 covers the 0^0 convention at t = 0.
    Ok(binomial(n, k) as f64 * ratio.powi(t as i32))
}

/// Probability of complete coverage after `t` uniform trials, by
/// inclusion-exclusion:
/// `P(t) = 1 - sum_{k=1}^{n} (-1)^{k+1} C(n,k) ((n-k)/n)^t`,
/// clamped to [0, 1] against cancellation round-off.
pub fn coverage_probability(n: u32, t: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("coverage probability requires n >= 1".into()));
    }
    if n > MAX_COVERAGE_N {
        return Err(Error::Domain(format!("exact binomials limited to n <= {MAX_COVERAGE_N}")));
    }
    // Fewer draws than symbols cannot cover; return exact zero rather than
    // inclusion-exclusion round-off.
    if t < n {
        return Ok(0.0);
    }
    let mut missed = KahanSum::default();
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        missed.add(sign * prob_exactly_k_missed_bound(n, k, t)?);
    }
    Ok((1.0 - missed.value()).clamp(0.0, 1.0))
}

/// Analytic and empirical coupon-collector quantities for one message-space
/// size. Empirical fields are present only when `runs > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub n: u32,
    pub expected_trials: f64,
    pub approx_trials: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_trials_distribution: Option<Vec<u32>>,
    pub runs: u32,
}

impl CoverageStats {
    /// Closed-form quantities only.
    pub fn analytic(n: u32) -> Result<Self> {
        Ok(Self {
            n,
            expected_trials: expected_trials(n)?,
            approx_trials: approx_expected_trials(n)?,
            empirical_mean: None,
            empirical_trials_distribution: None,
            runs: 0,
        })
    }

    /// Sample standard deviation of the recorded trial counts.
    pub fn empirical_std_dev(&self) -> Option<f64> {
        let dist = self.empirical_trials_distribution.as_ref()?;
        if dist.len() < 2 {
            return None;
        }
        let m = self.empirical_mean?;
        let var = dist.iter().map(|&t| (f64::from(t) - m).powi(2)).sum::<f64>()
            / (dist.len() as f64 - 1.0);
        Some(var.sqrt())
    }

    /// Fraction of runs that achieved full coverage within `t` trials.
    pub fn empirical_coverage_at(&self, t: u32) -> Option<f64> {
        let dist = self.empirical_trials_distribution.as_ref()?;
        let covered = dist.iter().filter(|&&trials| trials <= t).count();
        Some(covered as f64 / dist.len() as f64)
    }
}

/// Stream tag separating collector runs from other consumers of the same
/// user-facing seed.
const COLLECTOR_STREAM_BASE: u64 = 0x636f_6c6c_6563_7400; // "collect\0"

/// Run the coupon collector `runs` times: each run draws uniform symbols
/// from `0..n` until all have been seen, recording the draw count. Run `i`
/// uses stream `i`, so results are reproducible and order-independent.
pub fn simulate_collector(n: u32, runs: u32, seed: u64) -> Result<CoverageStats> {
    if n < 1 {
        return Err(Error::Domain("collector requires n >= 1".into()));
    }
    if runs < 1 {
        return Err(Error::Domain("collector requires runs >= 1".into()));
    }
    let mut distribution = Vec::with_capacity(runs as usize);
    let mut mean = KahanSum::default();
    for run in 0..runs {
        let mut rng = CounterRng::new(seed, COLLECTOR_STREAM_BASE ^ u64::from(run));
        let mut seen = vec![false; n as usize];
        let mut remaining = n;
        let mut trials = 0u32;
        while remaining > 0 {
            let symbol = rng.below(n) as usize;
            trials += 1;
            if !seen[symbol] {
                seen[symbol] = true;
                remaining -= 1;
            }
        }
        distribution.push(trials);
        mean.add(f64::from(trials));
    }
    Ok(CoverageStats {
        n,
        expected_trials: expected_trials(n)?,
        approx_trials: approx_expected_trials(n)?,
        empirical_mean: Some(mean.value() / f64::from(runs)),
        empirical_trials_distribution: Some(distribution),
        runs,
    })
}

/// Gaussian kernel density estimate over a fixed sample.
#[derive(Debug, Clone)]
pub struct KernelDensity {
    samples: Vec<f64>,
    bandwidth: f64,
}

impl KernelDensity {
    /// Fit a KDE. `bandwidth = None` selects Silverman's rule
    /// `1.06 * sigma_hat * m^(-1/5)`.
    pub fn fit(samples: &[f64], bandwidth: Option<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain("KDE requires at least 2 samples".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("KDE samples must be finite".into()));
        }
        let m = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / m;
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        if var <= 0.0 {
            return Err(Error::Domain("KDE samples are degenerate (zero variance)".into()));
        }
        let bandwidth = match bandwidth {
            Some(h) if h > 0.0 => h,
            Some(h) => return Err(Error::Domain(format!("bandwidth must be > 0, got {h}"))),
            None => 1.06 * var.sqrt() * m.powf(-0.2),
        };
        Ok(Self { samples: samples.to_vec(), bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Density at one point.
    pub fn density(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let norm = 1.0 / (self.samples.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
        self.samples
            .iter()
            .map(|&xi| {
                let z = (x - xi) / h;
                (-0.5 * z * z).exp()
            })
            .sum::<f64>()
            * norm
    }

    /// Densities over an explicit grid.
    pub fn evaluate(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&x| self.density(x)).collect()
    }

    /// Evenly spaced grid spanning the samples plus 3 bandwidths either side.
    pub fn default_grid(&self, points: usize) -> Vec<f64> {
        let lo = self.samples.iter().cloned().fold(f64::INFINITY, f64::min) - 3.0 * self.bandwidth;
        let hi =
            self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 3.0 * self.bandwidth;
        linspace(lo, hi, points)
    }
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "linspace needs at least 2 points");
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

/// Trapezoid rule over matching grids.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    assert_eq!(grid.len(), values.len());
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_small_values() {
        assert!(harmonic(0).is_err());
        assert_eq!(harmonic(1).unwrap(), 1.0);
        assert_eq!(harmonic(2).unwrap(), 1.5);
        // Hand sum: 1 + 1/2 + 1/3 + 1/4 = 25/12.
        assert!((harmonic(4).unwrap() - 25.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn expected_trials_matches_published_two_decimal_values() {
        let expect = [(2, 3.00), (3, 5.50), (4, 8.33), (5, 11.42), (6, 14.70), (7, 18.15), (8, 21.74)];
        for (n, want) in expect {
            let got = expected_trials(n).unwrap();
            assert_eq!((got * 100.0).round() / 100.0, want, "n = {n}");
        }
    }

    #[test]
    fn approx_trials_matches_published_two_decimal_values() {
        let expect = [(2, 2.54), (3, 5.03), (4, 7.85), (5, 10.93), (6, 14.21), (7, 17.66), (8, 21.25)];
        for (n, want) in expect {
            let got = approx_expected_trials(n).unwrap();
            assert_eq!((got * 100.0).round() / 100.0, want, "n = {n}");
        }
    }

    #[test]
    fn missed_bound_examples() {
        assert_eq!(prob_exactly_k_missed_bound(2, 1, 1).unwrap(), 1.0);
        assert_eq!(prob_exactly_k_missed_bound(4, 4, 0).unwrap(), 1.0);
        assert_eq!(prob_exactly_k_missed_bound(4, 2, 3).unwrap(), 0.75);
        assert!(prob_exactly_k_missed_bound(4, 0, 3).is_err());
        assert!(prob_exactly_k_missed_bound(4, 5, 3).is_err());
    }

    #[test]
    fn coverage_probability_trivial_cases() {
        assert_eq!(coverage_probability(1, 1).unwrap(), 1.0);
        assert_eq!(coverage_probability(2, 1).unwrap(), 0.0);
        assert_eq!(coverage_probability(2, 2).unwrap(), 0.5);
    }

    /// Independent oracle: enumerate all n^t equally likely draw sequences
    /// and count those covering every symbol.
    fn coverage_by_enumeration(n: u32, t: u32) -> f64 {
        let total = (n as u64).pow(t);
        let mut covered = 0u64;
        for mut code in 0..total {
            let mut seen = vec![false; n as usize];
            for _ in 0..t {
                seen[(code % n as u64) as usize] = true;
                code /= n as u64;
            }
            if seen.iter().all(|&s| s) {
                covered += 1;
            }
        }
        covered as f64 / total as f64
    }

    #[test]
    fn coverage_probability_matches_enumeration() {
        for n in 1..=4u32 {
            for t in 0..=8u32 {
                let analytic = coverage_probability(n, t).unwrap();
                let exact = coverage_by_enumeration(n, t);
                assert!(
                    (analytic - exact).abs() < 1e-12,
                    "n={n} t={t}: analytic {analytic} vs enumerated {exact}"
                );
            }
        }
    }

    #[test]
    fn coverage_probability_is_monotone_and_limits_correctly() {
        for n in 2..=8u32 {
            let mut prev = -1.0;
            for t in 0..=200u32 {
                let p = coverage_probability(n, t).unwrap();
                assert!((0.0..=1.0).contains(&p));
                assert!(p >= prev - 1e-12, "n={n} t={t}");
                if t < n {
                    assert_eq!(p, 0.0, "cannot cover {n} items in {t} draws");
                }
                prev = p;
            }
            assert!(prev > 0.999_999, "n={n} should approach 1");
        }
    }

    #[test]
    fn harmonic_gap_decreases_toward_gamma() {
        // Incrementally track H_n - ln n up to 10^6.
        let mut h = KahanSum::default();
        h.add(1.0);
        let mut prev_gap = 1.0; // n = 1: H_1 - ln 1 = 1
        for n in 2..=1_000_000u32 {
            h.add(1.0 / f64::from(n));
            let gap = h.value() - f64::from(n).ln();
            assert!(gap < prev_gap, "gap must decrease at n={n}");
            assert!(gap > EULER_MASCHERONI, "gap must stay above gamma at n={n}");
            prev_gap = gap;
        }
        assert!((prev_gap - EULER_MASCHERONI).abs() < 1e-6);
    }

    #[test]
    fn incremental_trials_show_diminishing_returns() {
        for n in 2..=8u32 {
            let mut prev = 0.0;
            let mut total = KahanSum::default();
            for k in 1..=n {
                let inc = expected_incremental_trials(n, k).unwrap();
                assert!(inc > prev, "n/{} terms must increase", n - k + 1);
                total.add(inc);
                prev = inc;
            }
            assert!((total.value() - expected_trials(n).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn collector_degenerate_single_item() {
        let stats = simulate_collector(1, 50, 7).unwrap();
        assert_eq!(stats.empirical_mean, Some(1.0));
        assert!(stats.empirical_trials_distribution.unwrap().iter().all(|&t| t == 1));
    }

    #[test]
    fn collector_matches_theory_for_n2_and_n8() {
        let s2 = simulate_collector(2, 10_000, 9).unwrap();
        let mean2 = s2.empirical_mean.unwrap();
        assert!((2.99..=3.01).contains(&mean2), "n=2 mean {mean2}");

        let s8 = simulate_collector(8, 10_000, 9).unwrap();
        let mean8 = s8.empirical_mean.unwrap();
        assert!((mean8 - 21.74).abs() <= 0.4, "n=8 mean {mean8}");
    }

    #[test]
    fn collector_is_deterministic_for_fixed_seed() {
        let a = simulate_collector(5, 200, 123).unwrap();
        let b = simulate_collector(5, 200, 123).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn collector_mean_within_four_standard_errors_for_all_n() {
        for n in 2..=8u32 {
            let stats = simulate_collector(n, 10_000, 9).unwrap();
            let mean = stats.empirical_mean.unwrap();
            let sd = stats.empirical_std_dev().unwrap();
            let tol = 4.0 * sd / 100.0;
            let theory = stats.expected_trials;
            assert!(
                (mean - theory).abs() <= tol,
                "n={n}: |{mean} - {theory}| > {tol}"
            );
        }
    }

    #[test]
    fn coverage_law_matches_monte_carlo_within_two_percent() {
        for n in 2..=8u32 {
            let stats = simulate_collector(n, 10_000, 9).unwrap();
            for t in 0..=100u32 {
                let analytic = coverage_probability(n, t).unwrap();
                let empirical = stats.empirical_coverage_at(t).unwrap();
                assert!(
                    (analytic - empirical).abs() <= 0.02,
                    "n={n} t={t}: analytic {analytic} vs empirical {empirical}"
                );
            }
        }
    }

    #[test]
    fn kde_needs_spread_samples() {
        assert!(KernelDensity::fit(&[1.0], None).is_err());
        assert!(KernelDensity::fit(&[2.0, 2.0, 2.0], None).is_err());
        assert!(KernelDensity::fit(&[1.0, 2.0], Some(-0.5)).is_err());
    }

    #[test]
    fn kde_mode_sits_at_the_center_of_symmetric_data() {
        let samples = [4.0, 4.5, 5.0, 5.5, 6.0, 5.0, 4.8, 5.2];
        let kde = KernelDensity::fit(&samples, None).unwrap();
        let grid = kde.default_grid(201);
        let densities = kde.evaluate(&grid);
        let argmax = densities
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| grid[i])
            .unwrap();
        let step = grid[1] - grid[0];
        assert!((argmax - 5.0).abs() <= step + 1e-12, "argmax {argmax}");
    }

    #[test]
    fn kde_two_point_sample_is_the_two_gaussian_mixture() {
        let kde = KernelDensity::fit(&[0.0, 10.0], Some(0.5)).unwrap();
        let norm = 1.0 / (2.0 * 0.5 * (2.0 * std::f64::consts::PI).sqrt());
        for x in [-1.0f64, 0.0, 0.3, 5.0, 9.7, 10.0, 11.0] {
            let expected = norm
                * ((-0.5 * (x / 0.5) * (x / 0.5)).exp()
                    + (-0.5 * ((x - 10.0) / 0.5) * ((x - 10.0) / 0.5)).exp());
            assert!((kde.density(x) - expected).abs() < 1e-12);
        }
        // Bimodal: local maxima near both samples.
        let grid = kde.default_grid(401);
        let d = kde.evaluate(&grid);
        let mode_near = |c: f64| {
            grid.iter()
                .zip(&d)
                .filter(|(x, _)| (*x - c).abs() < 1.0)
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(x, _)| *x)
                .unwrap()
        };
        assert!((mode_near(0.0) - 0.0).abs() < 0.1);
        assert!((mode_near(10.0) - 10.0).abs() < 0.1);
    }

    #[test]
    fn kde_integrates_to_one() {
        let stats = simulate_collector(6, 2_000, 9).unwrap();
        let samples: Vec<f64> = stats
            .empirical_trials_distribution
            .unwrap()
            .iter()
            .map(|&t| f64::from(t))
            .collect();
        let kde = KernelDensity::fit(&samples, None).unwrap();
        let grid = kde.default_grid(400);
        let densities = kde.evaluate(&grid);
        assert!(densities.iter().all(|&d| d >= 0.0));
        let integral = trapezoid(&grid, &densities);
        assert!((integral - 1.0).abs() <= 0.02, "integral {integral}");
    }
}
