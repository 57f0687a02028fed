use crate::error::{Error, Result};
use crate::stats::binomial_pmf;

fn frequencies(samples: &[usize], n: usize) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::InvalidParams("no samples".into()));
    }
    let mut counts = vec![0usize; n];
    for &s in samples {
        if s >= n {
            return Err(Error::InvalidParams(format!("sample {s} out of range for n = {n}")));
        }
        counts[s] += 1;
    }
    Ok(counts.into_iter().map(|c| c as f64 / samples.len() as f64).collect())
}

/// Plug-in TV distance between the empirical law of `samples` and the
/// uniform law on `0..n`. Biased upwards by roughly `sqrt(n / replicas)`.
pub fn tv_plugin(samples: &[usize], n: usize) -> Result<f64> {
    let freq = frequencies(samples, n)?;
    Ok(0.5 * freq.iter().map(|f| (f - 1.0 / n as f64).abs()).sum::<f64>())
}

/// Plug-in TV against an arbitrary target law, with a delta-method standard
/// error `sd(sign(f(X) - q(X))) / (2 sqrt(R))`.
pub fn tv_plugin_against(samples: &[usize], target: &[f64]) -> Result<(f64, f64)> {
    let freq = frequencies(samples, target.len())?;
    let tv = 0.5 * freq.iter().zip(target).map(|(f, q)| (f - q).abs()).sum::<f64>();
    let signs: Vec<f64> = samples.iter().map(|&s| (freq[s] - target[s]).signum()).collect();
    let r = samples.len() as f64;
    let mean = signs.iter().sum::<f64>() / r;
    let var = signs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0).max(1.0);
    Ok((tv, 0.5 * (var / r).sqrt()))
}

/// Exact expectation of the plug-in statistic when the samples really are
/// uniform: `n/2 * E|B/R - 1/n|` with `B ~ Binomial(R, 1/n)`.
pub fn tv_plugin_null_mean(n: usize, replicas: usize) -> f64 {
    let pmf = binomial_pmf(replicas as u64, 1.0 / n as f64);
    let r = replicas as f64;
    let mean_abs: f64 = pmf.iter().enumerate().map(|(k, q)| q * (k as f64 / r - 1.0 / n as f64).abs()).sum();
    0.5 * n as f64 * mean_abs
}

/// Largest gap between the empirical and target CDFs of an integer statistic,
/// with the binomial standard error at the maximizing threshold. This equals
/// the TV distance between the laws whenever their likelihood ratio is
/// monotone (binomial laws with different success probabilities), and is a
/// lower bound on it otherwise.
pub fn tv_threshold(samples: &[usize], target_pmf: &[f64]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::InvalidParams("no samples".into()));
    }
    let mut counts = vec![0usize; target_pmf.len()];
    for &s in samples {
        if s >= counts.len() {
            return Err(Error::InvalidParams(format!("sample {s} outside the target support")));
        }
        counts[s] += 1;
    }
    let r = samples.len() as f64;
    let (mut emp, mut cdf) = (0.0, 0.0);
    let (mut best, mut best_emp) = (0.0f64, 0.0);
    for (c, q) in counts.iter().zip(target_pmf) {
        emp += *c as f64 / r;
        cdf += q;
        if (emp - cdf).abs() > best {
            best = (emp - cdf).abs();
            best_emp = emp;
        }
    }
    Ok((best, (best_emp * (1.0 - best_emp) / r).sqrt()))
}

/// TV between the empirical law of an open-edge count and Binomial(N, p),
/// via [`tv_threshold`].
pub fn env_count_tv(counts: &[usize], edge_count: usize, p: f64) -> Result<(f64, f64)> {
    tv_threshold(counts, &binomial_pmf(edge_count as u64, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_uniform_counts() {
        let samples: Vec<usize> = (0..100).map(|i| i % 10).collect();
        assert_eq!(tv_plugin(&samples, 10).unwrap(), 0.0);
    }

    #[test]
    fn point_mass() {
        assert!((tv_plugin(&[3; 50], 10).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn empty_rejected() {
        assert!(tv_plugin(&[], 10).is_err());
    }

    #[test]
    fn null_mean_small_case() {
        // n = 2, R = 2: B in {0, 1, 2} w.p. 1/4, 1/2, 1/4; TV = |B/2 - 1/2|.
        assert!((tv_plugin_null_mean(2, 2) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn threshold_matches_binomial_tv() {
        // Every sample at 0 against Binomial(2, 1/2): TV = 3/4.
        let (tv, _) = tv_threshold(&[0; 10], &binomial_pmf(2, 0.5)).unwrap();
        assert!((tv - 0.75).abs() < 1e-12);
    }
}
