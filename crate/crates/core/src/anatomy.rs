//! Generative models of the supercritical giant: configuration model,
//! simplicity bound, and the kernel / core / trees construction.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Estimate;
use crate::graph::{sample_er, Graph};
use crate::rng::{rng_for, SimRng, Stream};
use crate::structure::{components_and_giant, core_mask, decoration_stats, kernel_of};

const THETA_TOL: f64 = 1e-12;
const PARITY_RETRIES: usize = 10_000;
const KERNEL_RETRIES: usize = 1_000;

/// The dual parameter: the root of `theta e^{-theta} = lambda e^{-lambda}`
/// in `[0, 1]`. For `lambda <= 1` this is `lambda` itself.
pub fn solve_theta(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParams(format!("lambda must be positive, got {lambda}")));
    }
    if lambda <= 1.0 {
        return Ok(lambda);
    }
    let target = lambda * (-lambda).exp();
    let f = |x: f64| x * (-x).exp() - target;
    // x e^{-x} is increasing on [0, 1].
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    debug_assert!(f(theta).abs() < THETA_TOL);
    Ok(theta)
}

/// Asymptotic giant fraction `1 - theta / lambda` (0 for `lambda <= 1`).
pub fn giant_fraction(lambda: f64) -> f64 {
    if lambda <= 1.0 {
        return 0.0;
    }
    1.0 - solve_theta(lambda).expect("lambda > 1") / lambda
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnatomyParams {
    pub n: usize,
    pub lambda: f64,
    pub theta: f64,
    /// `lambda - theta`.
    pub chi: f64,
}

impl AnatomyParams {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(Error::InvalidParams(format!("anatomy needs lambda > 1, got {lambda}")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        let theta = solve_theta(lambda)?;
        Ok(AnatomyParams { n, lambda, theta, chi: lambda - theta })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        DegreeSequence { degrees }
    }

    /// Number of half-edges.
    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// `sum d (d - 1)`.
    pub fn n2(&self) -> usize {
        self.degrees.iter().map(|&d| d * d.saturating_sub(1)).sum()
    }

    pub fn max(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// Uniform perfect matching of the half-edges.
pub fn sample_configuration_model<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Result<Graph> {
    if d.total() % 2 == 1 {
        return Err(Error::OddDegreeSum(d.total()));
    }
    let mut half: Vec<usize> = d.degrees.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect();
    half.shuffle(rng);
    let mut g = Graph::new(d.degrees.len());
    for pair in half.chunks_exact(2) {
        g.add_edge(pair[0], pair[1])?;
    }
    debug_assert_eq!(g.degrees(), d.degrees);
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplicityBound {
    pub value: f64,
    /// The `O(M^{-1/4})` correction is never included.
    pub error_term_omitted: bool,
}

/// `exp(-N2/(2M) - N2^2/(4M^2) - N2^2/(2M^3))`, requiring
/// `max d <= M^{1/4}`.
pub fn simplicity_lower_bound(d: &DegreeSequence) -> Result<SimplicityBound> {
    let m = d.total() as f64;
    let limit = m.powf(0.25);
    if d.max() as f64 > limit {
        return Err(Error::DegreeCondition { max_degree: d.max(), limit });
    }
    Ok(simplicity_lower_bound_unchecked(d))
}

/// The same exponential without the degree condition.
pub fn simplicity_lower_bound_unchecked(d: &DegreeSequence) -> SimplicityBound {
    let m = d.total() as f64;
    let n2 = d.n2() as f64;
    let value = if n2 == 0.0 {
        1.0
    } else {
        (-n2 / (2.0 * m) - n2 * n2 / (4.0 * m * m) - n2 * n2 / (2.0 * m * m * m)).exp()
    };
    SimplicityBound { value, error_term_omitted: true }
}

/// One draw of the three-step model together with the kernel it was built on.
#[derive(Debug, Clone)]
pub struct AnatomySample {
    pub graph: Graph,
    /// Kernel on vertices `0..kernel.n()`, which keep their labels in `graph`.
    pub kernel: Graph,
    pub core_size: usize,
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        0
    } else {
        Poisson::new(mean).expect("positive mean").sample(rng) as usize
    }
}

fn kernel_degrees(params: &AnatomyParams, rng: &mut SimRng) -> Result<Vec<usize>> {
    let normal = Normal::new(params.chi, (1.0 / params.n as f64).sqrt()).expect("finite parameters");
    for _ in 0..KERNEL_RETRIES {
        let x = normal.sample(rng).max(0.0);
        for _ in 0..PARITY_RETRIES {
            let big: Vec<usize> = (0..params.n).map(|_| poisson(x, rng)).filter(|&d| d >= 3).collect();
            if big.iter().sum::<usize>() % 2 == 0 {
                if big.is_empty() {
                    break;
                }
                return Ok(big);
            }
        }
    }
    Err(Error::RetriesExhausted(KERNEL_RETRIES))
}

/// Kernel from the configuration model, kernel edges expanded into paths with
/// `Geometric(1 - theta)` edges (at least 1), then a Poisson(`theta`)
/// Galton-Watson tree hung on each core vertex.
pub fn sample_anatomy(params: &AnatomyParams, rng: &mut SimRng) -> Result<AnatomySample> {
    let degrees = kernel_degrees(params, rng)?;
    let kernel = sample_configuration_model(&DegreeSequence::new(degrees), rng)?;
    let mut g = Graph::new(kernel.n());
    // rand_distr counts failures before the first success.
    let geometric = Geometric::new(1.0 - params.theta).expect("theta < 1");
    for &(a, b) in kernel.edges() {
        let len = 1 + geometric.sample(rng) as usize;
        let mut prev = a;
        for _ in 1..len {
            let v = g.add_vertex();
            g.add_edge(prev, v)?;
            prev = v;
        }
        g.add_edge(prev, b)?;
    }
    let core_size = g.n();
    let mut stack = Vec::new();
    for root in 0..core_size {
        stack.push(root);
        while let Some(v) = stack.pop() {
            for _ in 0..poisson(params.theta, rng) {
                let c = g.add_vertex();
                g.add_edge(v, c)?;
                stack.push(c);
            }
        }
    }
    Ok(AnatomySample { graph: g, kernel, core_size })
}

/// Isomorphism-invariant statistics of the largest component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GiantStats {
    pub giant_size: usize,
    pub core_size: usize,
    pub kernel_size: usize,
    pub deg1_count: usize,
    pub max_decoration: usize,
}

impl GiantStats {
    pub const NAMES: [&'static str; 5] = ["giant_size", "core_size", "kernel_size", "deg1_count", "max_decoration"];

    pub fn values(&self) -> [f64; 5] {
        [
            self.giant_size as f64,
            self.core_size as f64,
            self.kernel_size as f64,
            self.deg1_count as f64,
            self.max_decoration as f64,
        ]
    }
}

pub fn giant_stats(g: &Graph) -> Result<GiantStats> {
    let (comps, giant) = components_and_giant(g)?;
    let (h, _) = g.induced(&comps[giant]);
    let core_size = core_mask(&h).iter().filter(|&&b| b).count();
    Ok(GiantStats {
        giant_size: h.n(),
        core_size,
        kernel_size: kernel_of(&h).size(),
        deg1_count: h.degrees().iter().filter(|&&d| d == 1).count(),
        max_decoration: decoration_stats(&h).max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    Anatomy,
    ErdosRenyi,
}

/// Giant statistics of `replicas` draws from one sampler.
pub fn sample_stats(sampler: Sampler, n: usize, lambda: f64, replicas: usize, seed: u64) -> Result<Vec<GiantStats>> {
    let params = AnatomyParams::new(n, lambda)?;
    let stream = match sampler {
        Sampler::Anatomy => Stream::Main,
        Sampler::ErdosRenyi => Stream::Aux,
    };
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, stream);
            let g = match sampler {
                Sampler::Anatomy => sample_anatomy(&params, &mut rng)?.graph,
                Sampler::ErdosRenyi => sample_er(n, lambda / n as f64, &mut rng),
            };
            giant_stats(&g)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatGap {
    pub name: String,
    pub left: Estimate,
    pub right: Estimate,
    /// `(left - right) / right`.
    pub relative_gap: f64,
    /// Standard error of the difference of means.
    pub diff_stderr: f64,
    pub left_quartiles: [f64; 3],
    pub right_quartiles: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnatomyComparison {
    pub n: usize,
    pub lambda: f64,
    pub theta: f64,
    pub replicas: usize,
    pub gaps: Vec<StatGap>,
}

impl AnatomyComparison {
    pub fn max_relative_gap(&self) -> f64 {
        self.gaps.iter().map(|g| g.relative_gap.abs()).fold(0.0, f64::max)
    }
}

fn quartiles(xs: &[f64]) -> [f64; 3] {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let at = |q: f64| v[((v.len() - 1) as f64 * q).round() as usize];
    [at(0.25), at(0.5), at(0.75)]
}

/// Compares two ensembles of giant statistics, statistic by statistic.
pub fn compare_stats(left: &[GiantStats], right: &[GiantStats], seed: u64) -> Vec<StatGap> {
    GiantStats::NAMES
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let l: Vec<f64> = left.iter().map(|s| s.values()[i]).collect();
            let r: Vec<f64> = right.iter().map(|s| s.values()[i]).collect();
            let (le, re) = (Estimate::from_samples(&l, seed), Estimate::from_samples(&r, seed));
            StatGap {
                name: name.to_string(),
                relative_gap: if re.value == 0.0 { 0.0 } else { (le.value - re.value) / re.value },
                diff_stderr: le.stderr.hypot(re.stderr),
                left_quartiles: quartiles(&l),
                right_quartiles: quartiles(&r),
                left: le,
                right: re,
            }
        })
        .collect()
}

/// Anatomy sampler (left) against the giant of direct `G(n, lambda/n)`
/// draws (right).
pub fn compare_anatomy_vs_er(n: usize, lambda: f64, replicas: usize, seed: u64) -> Result<AnatomyComparison> {
    let params = AnatomyParams::new(n, lambda)?;
    if replicas < 30 {
        return Err(Error::InvalidParams(format!("need at least 30 replicas, got {replicas}")));
    }
    let left = sample_stats(Sampler::Anatomy, n, lambda, replicas, seed)?;
    let right = sample_stats(Sampler::ErdosRenyi, n, lambda, replicas, seed)?;
    Ok(AnatomyComparison { n, lambda, theta: params.theta, replicas, gaps: compare_stats(&left, &right, seed) })
}

/// Size of a Poisson(`theta`) Galton-Watson tree, root included.
pub fn pgw_tree_size<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> usize {
    let mut size = 1;
    let mut pending = 1usize;
    while pending > 0 {
        pending -= 1;
        let kids = poisson(theta, rng);
        size += kids;
        pending += kids;
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_abs_diff_eq;

    #[test]
    fn theta_examples() {
        assert_eq!(solve_theta(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(solve_theta(2.0).unwrap(), 0.406_375_7, epsilon = 1e-7);
        assert!(solve_theta(0.0).is_err());
        for i in 0..100 {
            let lambda = 1.01 + i as f64 * (10.0 - 1.01) / 99.0;
            let t = solve_theta(lambda).unwrap();
            assert!((t * (-t).exp() - lambda * (-lambda).exp()).abs() < 1e-12);
            assert!((0.0..1.0).contains(&t));
        }
    }

    #[test]
    fn giant_fraction_fixed_points_agree() {
        for lambda in [1.5, 2.0, 5.0] {
            let beta = giant_fraction(lambda);
            assert!((beta - (1.0 - (-lambda * beta).exp())).abs() < 1e-9);
        }
        assert_abs_diff_eq!(giant_fraction(2.0), 0.796_81, epsilon = 1e-5);
        assert_abs_diff_eq!(giant_fraction(5.0), 0.993_023, epsilon = 1e-6);
        assert_eq!(giant_fraction(1.0), 0.0);
        assert!(giant_fraction(1.0 + 1e-6) < 1e-4);
    }

    #[test]
    fn configuration_forced_cases() {
        let mut rng = rng_from_seed(1);
        let g = sample_configuration_model(&DegreeSequence::new(vec![2]), &mut rng).unwrap();
        assert_eq!(g.edges(), &[(0, 0)]);
        assert_eq!(g.degree(0), 2);
        let g = sample_configuration_model(&DegreeSequence::new(vec![1, 1]), &mut rng).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(matches!(
            sample_configuration_model(&DegreeSequence::new(vec![1, 2]), &mut rng),
            Err(Error::OddDegreeSum(3))
        ));
    }

    #[test]
    fn simplicity_bound_values() {
        let d = DegreeSequence::new(vec![0, 1, 0, 1]);
        assert_eq!(simplicity_lower_bound(&d).unwrap().value, 1.0);
        let d = DegreeSequence::new(vec![3; 4]);
        assert!(matches!(simplicity_lower_bound(&d), Err(Error::DegreeCondition { .. })));
        // M = 12, N2 = 24.
        let expect = (-1.0f64 - 1.0 - 576.0 / 3456.0).exp();
        assert_abs_diff_eq!(simplicity_lower_bound_unchecked(&d).value, expect, epsilon = 1e-15);
    }

    #[test]
    fn anatomy_rejects_subcritical() {
        assert!(AnatomyParams::new(100, 1.0).is_err());
        assert!(compare_anatomy_vs_er(100, 1.0, 30, 1).is_err());
        assert!(compare_anatomy_vs_er(100, 2.0, 29, 1).is_err());
    }

    #[test]
    fn anatomy_kernel_round_trip() {
        let params = AnatomyParams::new(300, 2.0).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let s = sample_anatomy(&params, &mut rng).unwrap();
            let k = kernel_of(&s.graph);
            assert_eq!(k.size(), s.kernel.n());
            let mut got = k.graph.degrees();
            let mut want = s.kernel.degrees();
            got.sort_unstable();
            want.sort_unstable();
            assert_eq!(got, want);
            assert_eq!(core_mask(&s.graph).iter().filter(|&&b| b).count(), s.core_size);
        }
    }

    #[test]
    fn self_comparison_has_no_gap() {
        let a = sample_stats(Sampler::ErdosRenyi, 200, 2.0, 30, 3).unwrap();
        let gaps = compare_stats(&a, &a, 3);
        assert!(gaps.iter().all(|g| g.relative_gap == 0.0));
    }

    #[test]
    fn pgw_mean_size() {
        let theta = solve_theta(2.0).unwrap();
        let mut rng = rng_from_seed(8);
        let xs: Vec<f64> = (0..100_000).map(|_| pgw_tree_size(theta, &mut rng) as f64).collect();
        let e = Estimate::from_samples(&xs, 8);
        assert!(e.covers(1.0 / (1.0 - theta), 3.0), "{e:?}");
    }
}
