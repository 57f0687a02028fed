use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::params::Params;
use crate::rng::SimRng;
use crate::sim::{uniform_pair, Environment, StopOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct StaticDynamicRun {
    /// First time an edge at a visited vertex differs between `eta_0` and `eta_t`.
    pub decoupling: StopOutcome,
    /// `(time, vertex)` after every move of the walk on the frozen `eta_0`.
    pub static_path: Vec<(f64, usize)>,
    /// Same for the walk on the evolving environment.
    pub dynamic_path: Vec<(f64, usize)>,
}

/// Runs a walk on the frozen snapshot `env0` and one on the evolving
/// environment from the same start, sharing ring times and target draws.
pub fn run_static_dynamic(params: &Params, env0: &Environment, x0: usize, t_cap: f64, rng: &mut SimRng) -> StaticDynamicRun {
    let n = params.n();
    let mut dynamic = env0.clone();
    let (mut xs, mut xd) = (x0, x0);
    let mut visited = vec![false; n];
    visited[x0] = true;
    // Number of differing edges at each vertex.
    let mut diff_count = vec![0usize; n];
    let mut decoupled: Option<f64> = None;
    let mut static_path = vec![(0.0, x0)];
    let mut dynamic_path = vec![(0.0, x0)];
    let rate = params.refresh_rate() + 1.0;
    let exp = Exp::new(rate).expect("positive rate");
    let mut t = 0.0;
    loop {
        t += exp.sample(rng);
        if t > t_cap {
            break;
        }
        if rng.random::<f64>() * rate < params.refresh_rate() {
            let (u, v) = uniform_pair(n, rng);
            let open = rng.random_bool(params.p());
            let was_diff = dynamic.is_open(u, v) != env0.is_open(u, v);
            dynamic.set_edge(u, v, open);
            let is_diff = open != env0.is_open(u, v);
            if was_diff != is_diff {
                for w in [u, v] {
                    if is_diff {
                        diff_count[w] += 1;
                    } else {
                        diff_count[w] -= 1;
                    }
                }
                if is_diff && decoupled.is_none() && (visited[u] || visited[v]) {
                    decoupled = Some(t);
                }
            }
        } else {
            let draw = rng.random_range(0..n - 1);
            let target = |x: usize| if draw >= x { draw + 1 } else { draw };
            let (ts, td) = (target(xs), target(xd));
            if env0.is_open(xs, ts) {
                xs = ts;
                static_path.push((t, xs));
            }
            if dynamic.is_open(xd, td) {
                xd = td;
                dynamic_path.push((t, xd));
            }
            if decoupled.is_none() {
                debug_assert_eq!(xs, xd);
                if !visited[xd] {
                    visited[xd] = true;
                    if diff_count[xd] > 0 {
                        decoupled = Some(t);
                    }
                }
            }
        }
    }
    StaticDynamicRun {
        decoupling: decoupled.map_or(StopOutcome::Censored(t_cap), StopOutcome::Stopped),
        static_path,
        dynamic_path,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sim::InitMode;

    #[test]
    fn frozen_environment_never_decouples() {
        let params = Params::new(40, 3.0, 0.0).unwrap();
        let mut rng = rng_from_seed(3);
        let env = Environment::init(&params, &InitMode::Stationary, &mut rng).unwrap();
        let run = run_static_dynamic(&params, &env, 0, 200.0, &mut rng);
        assert!(run.decoupling.is_censored());
        assert_eq!(run.static_path, run.dynamic_path);
    }

    #[test]
    fn paths_agree_before_decoupling() {
        let params = Params::new(30, 3.0, 0.05).unwrap();
        for seed in 0..20 {
            let mut rng = rng_from_seed(seed);
            let env = Environment::init(&params, &InitMode::Stationary, &mut rng).unwrap();
            let run = run_static_dynamic(&params, &env, 0, 100.0, &mut rng);
            let t = run.decoupling.time();
            let before = |p: &[(f64, usize)]| p.iter().filter(|(s, _)| *s < t).copied().collect::<Vec<_>>();
            assert_eq!(before(&run.static_path), before(&run.dynamic_path));
        }
    }
}
