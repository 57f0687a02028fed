//! Small statistical helpers shared by estimators and tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Proportion and its binomial standard error.
pub fn proportion(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (f64::NAN, f64::NAN);
    }
    let p = successes as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of observed counts against expected probabilities.
/// Cells with expected count below `min_expected` are pooled into one.
pub fn chi_square(observed: &[u64], probs: &[f64], min_expected: f64) -> ChiSquareTest {
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * total as f64;
        if e < min_expected {
            pool_o += o as f64;
            pool_e += e;
        } else {
            cells.push((o as f64, e));
        }
    }
    if pool_e > 0.0 {
        if pool_e >= min_expected || cells.is_empty() {
            cells.push((pool_o, pool_e));
        } else {
            let last = cells.last_mut().expect("nonempty");
            last.0 += pool_o;
            last.1 += pool_e;
        }
    }
    let statistic: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if dof == 0 { 1.0 } else { 1.0 - ChiSquared::new(dof as f64).expect("dof > 0").cdf(statistic) };
    ChiSquareTest { statistic, dof, p_value }
}

/// Natural log of `C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    statrs::function::factorial::ln_binomial(n, k)
}

/// Binomial(n, q) probability mass over `0..=n`.
pub fn binomial_pmf(n: u64, q: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let a = if k == 0 { 0.0 } else { k as f64 * q.ln() };
            let b = if k == n { 0.0 } else { (n - k) as f64 * (1.0 - q).ln() };
            (ln_binomial(n, k) + a + b).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_perfect_fit() {
        let t = chi_square(&[25, 25, 50], &[0.25, 0.25, 0.5], 5.0);
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.dof, 2);
        assert!((t.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_detects_misfit() {
        let t = chi_square(&[900, 100], &[0.5, 0.5], 5.0);
        assert!(t.p_value < 1e-10);
    }

    #[test]
    fn binomial_sums_to_one() {
        let pmf = binomial_pmf(999, 0.002);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((binomial_pmf(3, 0.5)[1] - 0.375).abs() < 1e-14);
    }

    #[test]
    fn mean_and_se() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-14);
    }
}
