use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{for_each_bernoulli_pair, pair_index, Graph};
use crate::params::Params;

/// How the initial edge configuration is drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitMode {
    /// Product measure: each edge open independently with probability `p`.
    Stationary,
    AllOpen,
    AllClosed,
    Explicit(Vec<(usize, usize)>),
}

/// Open-edge state of the complete graph with incremental counters.
#[derive(Debug, Clone)]
pub struct Environment {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    open_count: usize,
    isolated_count: usize,
    clock: f64,
}

impl Environment {
    pub fn empty(n: usize) -> Self {
        Environment { n, adjacency: vec![Vec::new(); n], open_count: 0, isolated_count: n, clock: 0.0 }
    }

    pub fn init<R: Rng + ?Sized>(params: &Params, mode: &InitMode, rng: &mut R) -> Result<Self> {
        let n = params.n();
        let mut env = Environment::empty(n);
        match mode {
            InitMode::Stationary => {
                for_each_bernoulli_pair(n, params.p(), rng, |u, v| {
                    env.set_edge(u, v, true);
                });
            }
            InitMode::AllOpen => {
                for u in 0..n {
                    for v in (u + 1)..n {
                        env.set_edge(u, v, true);
                    }
                }
            }
            InitMode::AllClosed => {}
            InitMode::Explicit(edges) => env = Environment::from_edges(n, edges)?,
        }
        Ok(env)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut env = Environment::empty(n);
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidPair(u, v, n));
            }
            env.set_edge(u, v, true);
        }
        Ok(env)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub(crate) fn set_clock(&mut self, t: f64) {
        self.clock = t;
    }

    pub fn open_count(&self) -> usize {
        self.open_count
    }

    pub fn isolated_count(&self) -> usize {
        self.isolated_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.adjacency[v].is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn is_open(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() { (u, v) } else { (v, u) };
        self.adjacency[a].contains(&b)
    }

    /// Sets the state of edge `(u, v)`; returns whether it changed.
    pub fn set_edge(&mut self, u: usize, v: usize, open: bool) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        let currently = self.is_open(u, v);
        if currently == open {
            return false;
        }
        if open {
            for x in [u, v] {
                if self.adjacency[x].is_empty() {
                    self.isolated_count -= 1;
                }
            }
            self.adjacency[u].push(v);
            self.adjacency[v].push(u);
            self.open_count += 1;
        } else {
            for (x, y) in [(u, v), (v, u)] {
                let list = &mut self.adjacency[x];
                let pos = list.iter().position(|&w| w == y).expect("open edge listed at both ends");
                list.swap_remove(pos);
                if list.is_empty() {
                    self.isolated_count += 1;
                }
            }
            self.open_count -= 1;
        }
        debug_assert_eq!(self.is_open(u, v), open);
        debug_assert_eq!(self.adjacency[u].contains(&v), self.adjacency[v].contains(&u));
        true
    }

    /// Open edges as sorted pairs `u < v`.
    pub fn open_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.open_edges()).expect("environment pairs are valid")
    }

    /// Open edges as a bitmask over lexicographic pair indices (needs `N <= 64`).
    pub fn edge_mask(&self) -> u64 {
        let mut mask = 0u64;
        for (u, v) in self.open_edges() {
            mask |= 1u64 << pair_index(u, v, self.n);
        }
        mask
    }

    /// Full recount of the invariants.
    pub fn check_invariants(&self) -> bool {
        let mut count = 0;
        let mut isolated = 0;
        for u in 0..self.n {
            if self.adjacency[u].is_empty() {
                isolated += 1;
            }
            for &v in &self.adjacency[u] {
                if v == u || v >= self.n || !self.adjacency[v].contains(&u) {
                    return false;
                }
                if u < v {
                    count += 1;
                }
            }
            let mut sorted = self.adjacency[u].clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        count == self.open_count && isolated == self.isolated_count && self.clock >= 0.0
    }

    /// Number of pairs whose state differs between the two environments.
    pub fn difference(&self, other: &Environment) -> Vec<(usize, usize)> {
        let a = self.open_edges();
        let b = other.open_edges();
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(*x);
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (Some(x), None) => {
                    out.push(*x);
                    i += 1;
                }
                (None, Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (None, None) => break,
            }
        }
        out
    }

    /// Same open-edge set (clocks are ignored).
    pub fn same_edges(&self, other: &Environment) -> bool {
        self.n == other.n
            && self.open_count == other.open_count
            && (0..self.n).all(|u| self.adjacency[u].len() == other.adjacency[u].len())
            && self.adjacency.iter().enumerate().all(|(u, ns)| ns.iter().all(|&v| other.is_open(u, v)))
    }
}

impl crate::structure::NeighborAccess for Environment {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for &w in &self.adjacency[v] {
            f(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn boundary_probabilities() {
        let mut rng = rng_from_seed(1);
        let empty = Environment::init(&Params::with_p(5, 0.0, 1.0).unwrap(), &InitMode::Stationary, &mut rng).unwrap();
        assert_eq!(empty.isolated_count(), 5);
        assert_eq!(empty.open_count(), 0);
        let full = Environment::init(&Params::with_p(5, 1.0, 1.0).unwrap(), &InitMode::Stationary, &mut rng).unwrap();
        assert_eq!(full.open_count(), 10);
        assert_eq!(full.isolated_count(), 0);
        assert!(full.check_invariants());
    }

    #[test]
    fn explicit_rejects_bad_pairs() {
        let params = Params::new(4, 1.0, 1.0).unwrap();
        let mut rng = rng_from_seed(1);
        let err = Environment::init(&params, &InitMode::Explicit(vec![(0, 1), (2, 2)]), &mut rng).unwrap_err();
        assert_eq!(err, Error::InvalidPair(2, 2, 4));
        let err = Environment::init(&params, &InitMode::Explicit(vec![(0, 7)]), &mut rng).unwrap_err();
        assert_eq!(err, Error::InvalidPair(0, 7, 4));
    }

    #[test]
    fn counters_follow_mutations() {
        let mut env = Environment::empty(4);
        assert!(env.set_edge(0, 1, true));
        assert!(!env.set_edge(1, 0, true));
        assert_eq!((env.open_count(), env.isolated_count()), (1, 2));
        env.set_edge(1, 2, true);
        env.set_edge(0, 1, false);
        assert_eq!((env.open_count(), env.isolated_count()), (1, 2));
        assert!(env.check_invariants());
        assert_eq!(env.open_edges(), vec![(1, 2)]);
    }

    #[test]
    fn difference_lists_symmetric_difference() {
        let a = Environment::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let b = Environment::from_edges(4, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(a.difference(&b), vec![(0, 1), (2, 3)]);
        assert!(!a.same_edges(&b));
        assert!(a.same_edges(&a.clone()));
    }
}
