//! Closed-form bounds, evaluated numerically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::iterated_log;

/// Upper bound on the environment TV at time `t` from the hypercube walk
/// computation: with `g = mu t - log(N) / 2`, `min(1, sqrt(exp(e^{-2g}) - 1))`.
pub fn env_tv_upper_bound(edge_count: usize, mu: f64, t: f64) -> f64 {
    let g = mu * t - 0.5 * (edge_count as f64).ln();
    let inner = (-2.0 * g).exp().exp() - 1.0;
    if inner.is_finite() {
        inner.sqrt().min(1.0)
    } else {
        1.0
    }
}

/// Lower bound on the environment TV from the all-open start:
/// `max(0, 1 - 2 exp(-q_t^2 N / slack))` with `q_t = e^{-mu t}`.
pub fn env_tv_lower_bound(edge_count: usize, mu: f64, t: f64, slack: f64) -> f64 {
    let q = (-mu * t).exp();
    (1.0 - 2.0 * (-q * q * edge_count as f64 / slack).exp()).max(0.0)
}

pub const ENV_LOWER_SLACK: f64 = 18.0;

/// Bounds on `P(Po(lambda) >= (1 + eps) lambda)` and
/// `P(Po(lambda) <= (1 - eps) lambda)`.
pub fn poisson_tail_bounds(lambda: f64, eps: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParams(format!("lambda must be positive, got {lambda}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParams(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    Ok(((-0.5 * lambda * eps * eps * (1.0 - eps / 3.0)).exp(), (-0.5 * lambda * eps * eps).exp()))
}

/// Chernoff-type bound on `P(|N_m - m pi(A)| >= eps)` for visits to a set by
/// a reversible walk with spectral gap `gamma`:
/// `min(1, 3 pi_min^{-1/2} exp(-gamma eps^2 / (20 m)))`.
pub fn gillman_bound(pi_min: f64, gamma: f64, m: f64, eps: f64) -> Result<f64> {
    if !(eps >= 0.0 && eps <= m) {
        return Err(Error::InvalidParams(format!("epsilon must lie in [0, m], got {eps} with m = {m}")));
    }
    if !(pi_min > 0.0 && pi_min <= 1.0) {
        return Err(Error::InvalidParams(format!("pi_min must lie in (0, 1], got {pi_min}")));
    }
    Ok((3.0 / pi_min.sqrt() * (-gamma * eps * eps / (20.0 * m)).exp()).min(1.0))
}

/// [`gillman_bound`] at the deviation `eps = pi(A) m / 2`.
pub fn gillman_half_deviation_bound(pi_min: f64, gamma: f64, pi_a: f64, m: f64) -> Result<f64> {
    gillman_bound(pi_min, gamma, m, 0.5 * pi_a * m)
}

/// `2 exp(-mu t / log_(M) n)`: the bound on the probability that one walker
/// (or, for the dual bound, two walkers simultaneously) has not been
/// isolated by time `t` while the environment stayed good.
pub fn isolation_tail_bound(n: usize, mu: f64, t: f64, depth: usize) -> Result<f64> {
    let l = iterated_log(n as f64, depth);
    if depth == 0 || !(l >= 1.0) {
        return Err(Error::InvalidLogDepth { depth, n });
    }
    Ok((2.0 * (-mu * t / l).exp()).min(1.0))
}

/// `3 exp(-mu t / log_(M) n)`: coalescence tail bound for close environments.
pub fn coupling_tail_bound(n: usize, mu: f64, t: f64, depth: usize) -> Result<f64> {
    let l = iterated_log(n as f64, depth);
    if depth == 0 || !(l >= 1.0) {
        return Err(Error::InvalidLogDepth { depth, n });
    }
    Ok((3.0 * (-mu * t / l).exp()).min(1.0))
}

/// `C mu t log_(M) n`: the shape of the bound on leaving the giant by `t`.
pub fn giant_exit_bound(n: usize, mu: f64, t: f64, depth: usize, c: f64) -> Result<f64> {
    let l = iterated_log(n as f64, depth);
    if depth == 0 || !(l >= 1.0) {
        return Err(Error::InvalidLogDepth { depth, n });
    }
    Ok((c * mu * t * l).min(1.0))
}

/// Upper mixing-bound constant from a stationary environment, frozen at
/// about twice the value seen at n = 500, lambda = 2 (see tests/calibration.rs).
pub const IIIE_UPPER_C: f64 = 1.0;

/// Frozen comparison constant for the giant exit bound; the n = 1000 run
/// needs only about 0.34.
pub const GIANT_EXIT_C: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IiieBounds {
    pub lower: f64,
    pub upper: f64,
    /// `eps < min(e^{-3 lambda}, 1)`.
    pub lower_valid: bool,
    /// `eps < 1/4` and `mu <= (2/3) / ((1 + lambda) n)`.
    pub upper_valid: bool,
}

/// Walk mixing-time bounds when the environment starts stationary:
/// `log(1/eps) / (2 lambda mu) <= t_mix(eps) <= C log(1/eps) / mu`.
pub fn iiie_mixing_bounds(n: usize, lambda: f64, mu: f64, eps: f64, c: f64) -> Result<IiieBounds> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParams(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if !(lambda > 0.0 && mu > 0.0) {
        return Err(Error::InvalidParams("lambda and mu must be positive".into()));
    }
    let log_inv = (1.0 / eps).ln();
    Ok(IiieBounds {
        lower: log_inv / (2.0 * lambda * mu),
        upper: c * log_inv / mu,
        lower_valid: eps < (-3.0 * lambda).exp().min(1.0),
        upper_valid: eps < 0.25 && mu <= (2.0 / 3.0) / ((1.0 + lambda) * n as f64),
    })
}

/// `P(Po(zeta) is even) = (1 + e^{-2 zeta}) / 2`.
pub fn poisson_even_probability(zeta: f64) -> f64 {
    0.5 * (1.0 + (-2.0 * zeta).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn env_upper_examples() {
        let n = 1770;
        let half_log = 0.5 * (n as f64).ln();
        assert_eq!(env_tv_upper_bound(n, 1.0, half_log), 1.0);
        assert_abs_diff_eq!(env_tv_upper_bound(n, 1.0, half_log + 3.0), 0.049_818, epsilon = 1e-5);
        assert!(env_tv_upper_bound(n, 1.0, 100.0) < 1e-20);
    }

    #[test]
    fn env_lower_examples() {
        assert_abs_diff_eq!(env_tv_lower_bound(1000, 1.0, 0.0, 18.0), 1.0 - 2.0 * (-1000.0f64 / 18.0).exp());
        let n = 1770usize;
        let alpha = 2.0;
        let t = 0.5 * (n as f64).ln() - alpha;
        assert_abs_diff_eq!(
            env_tv_lower_bound(n, 1.0, t, 18.0),
            1.0 - 2.0 * (-(2.0 * alpha).exp() / 18.0).exp(),
            epsilon = 1e-12
        );
        assert_eq!(env_tv_lower_bound(n, 1.0, 50.0, 18.0), 0.0);
    }

    #[test]
    fn bounds_monotone_in_time() {
        let mut prev = (2.0, 2.0);
        for i in 0..100 {
            let t = i as f64 * 0.1;
            let cur = (env_tv_upper_bound(1770, 1.0, t), env_tv_lower_bound(1770, 1.0, t, 18.0));
            assert!(cur.0 <= prev.0 && cur.1 <= prev.1);
            prev = cur;
        }
    }

    #[test]
    fn poisson_examples() {
        assert!(poisson_tail_bounds(12.0, 1.0).is_err());
        assert!(poisson_tail_bounds(12.0, 0.0).is_err());
        let (up, low) = poisson_tail_bounds(100.0, 0.5).unwrap();
        assert_abs_diff_eq!(up, (-10.416_666_666_666_666f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(low, (-12.5f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn gillman_examples() {
        assert_eq!(gillman_bound(0.25, 0.0, 100.0, 10.0).unwrap(), 1.0);
        assert!(gillman_bound(0.25, 1.0, 10.0, 11.0).is_err());
        let m = 1e4;
        // eps = m / 8 gives exponent (4/3) (m/8)^2 / (20 m) = m / 960.
        assert_abs_diff_eq!(
            gillman_half_deviation_bound(0.25, 4.0 / 3.0, 0.25, m).unwrap(),
            6.0 * (-m / 960.0).exp(),
            epsilon = 1e-15
        );
        assert!(gillman_half_deviation_bound(0.25, 4.0 / 3.0, 0.25, 1e5).unwrap() < 1e-6);
    }

    #[test]
    fn iiie_examples() {
        let b = iiie_mixing_bounds(1000, 1.0, 0.5, (-4.0f64).exp(), IIIE_UPPER_C).unwrap();
        assert_abs_diff_eq!(b.lower, 2.0 / 0.5, epsilon = 1e-12);
        assert!(b.lower_valid);
        assert!(!iiie_mixing_bounds(1000, 1.0, 0.5, 0.1, IIIE_UPPER_C).unwrap().lower_valid);
        let near_one = iiie_mixing_bounds(1000, 1.0, 0.5, 1.0 - 1e-9, IIIE_UPPER_C).unwrap();
        assert!(near_one.lower < 1e-8);
        assert!(iiie_mixing_bounds(1000, 1.0, 0.5, 1.0, IIIE_UPPER_C).is_err());
    }

    #[test]
    fn parity() {
        assert_abs_diff_eq!(poisson_even_probability(1.0), 0.567_667_64, epsilon = 1e-8);
    }
}
