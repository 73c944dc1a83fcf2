//! Summary statistics for Monte Carlo output.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
///
/// Returns `(0, 1)` when there are no trials.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the endpoints are exactly 0 and 1 at the extremes; avoid rounding residue there
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Mean and unbiased sample variance; the variance is 0 for fewer than two values.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    // Welford
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let d = x - mean;
        mean += d / (k + 1) as f64;
        m2 += d * (x - mean);
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    (mean, var)
}

/// Normal-theory 95% interval for the mean.
pub fn mean_interval(xs: &[f64]) -> (f64, f64, f64) {
    let (mean, var) = mean_variance(xs);
    let half = Z95 * (var / xs.len().max(1) as f64).sqrt();
    (mean, mean - half, mean + half)
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Most frequent value; ties go to the smallest.
pub fn mode<T: Ord + Copy>(values: &[T]) -> Option<T> {
    let mut counts = std::collections::BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0usize) += 1;
    }
    counts
        .into_iter()
        .fold(None, |best: Option<(T, usize)>, (v, c)| match best {
            Some((_, bc)) if bc >= c => best,
            _ => Some((v, c)),
        })
        .map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 8/10 at z = 1.96: (0.4902, 0.9433)
        let (lo, hi) = wilson_interval(8, 10, 1.96);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 50, Z95);
        // zero successes: (0, z^2 / (n + z^2))
        assert_eq!(lo, 0.0);
        assert!((hi - Z95 * Z95 / (50.0 + Z95 * Z95)).abs() < 1e-15);
        assert_eq!(wilson_interval(50, 50, Z95).1, 1.0);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn moments() {
        let (m, v) = mean_variance(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(mean_variance(&[7.0]), (7.0, 0.0));
        assert!(mean_variance(&[]).0.is_nan());
    }

    #[test]
    fn ks() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_distance(&xs, |x| x) - 0.005).abs() < 1e-12);
        assert!((ks_distance(&[0.0], |x| x.clamp(0.0, 1.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modes() {
        assert_eq!(mode(&[3, 2, 3, 2, 1]), Some(2));
        assert_eq!(mode(&[5, 5, 1]), Some(5));
        assert_eq!(mode::<u8>(&[]), None);
    }
}
