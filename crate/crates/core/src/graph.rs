//! Undirected multigraph on vertices `0..n`.
//!
//! Loops and parallel edges are allowed; a loop appears twice in its vertex's
//! adjacency list, so it contributes 2 to the degree.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphData {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphData> for Graph {
    type Error = Error;

    fn try_from(data: GraphData) -> Result<Self> {
        Graph::from_edges(data.n, data.edges)
    }
}

impl From<Graph> for GraphData {
    fn from(g: Graph) -> Self {
        GraphData { n: g.n, edges: g.edges }
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidPair(u, v, self.n));
        }
        let id = self.edges.len();
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push((a, b));
        self.adj[a].push((b, id));
        self.adj[b].push((a, id));
        Ok(id)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// `(neighbour, edge id)` pairs; loops are listed twice.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].iter().any(|&(w, _)| w == b)
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        if self.loop_count() > 0 {
            return false;
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in the given order.
    /// Returns the subgraph and the map from new labels to old ones.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                g.add_edge(index[u], index[v]).expect("induced labels are in range");
            }
        }
        (g, vertices.to_vec())
    }

    /// Graph on the same vertex set keeping only edges accepted by `keep`.
    pub fn filter_edges<F: Fn(usize, (usize, usize)) -> bool>(&self, keep: F) -> Graph {
        let mut g = Graph::new(self.n);
        for (id, &e) in self.edges.iter().enumerate() {
            if keep(id, e) {
                g.add_edge(e.0, e.1).expect("same vertex set");
            }
        }
        g
    }
}

/// Lexicographic index of the pair `u < v` among the `n(n-1)/2` pairs.
pub fn pair_index(u: usize, v: usize, n: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(k: usize, n: usize) -> (usize, usize) {
    // Row u starts at u(2n-u-1)/2; solve the quadratic and fix rounding.
    let nf = n as f64;
    let disc = (2.0 * nf - 1.0).powi(2) - 8.0 * k as f64;
    let mut u = (((2.0 * nf - 1.0) - disc.max(0.0).sqrt()) / 2.0).floor() as usize;
    u = u.min(n.saturating_sub(2));
    while u > 0 && u * (2 * n - u - 1) / 2 > k {
        u -= 1;
    }
    while (u + 1) * (2 * n - u - 2) / 2 <= k {
        u += 1;
    }
    let start = u * (2 * n - u - 1) / 2;
    (u, u + 1 + (k - start))
}

/// Visits every pair of the complete graph independently with probability
/// `p`, in lexicographic order, using geometric skips.
pub fn for_each_bernoulli_pair<R: Rng + ?Sized, F: FnMut(usize, usize)>(
    n: usize,
    p: f64,
    rng: &mut R,
    mut f: F,
) {
    let total = n * (n.saturating_sub(1)) / 2;
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        for u in 0..n {
            for v in (u + 1)..n {
                f(u, v);
            }
        }
        return;
    }
    let geo = Geometric::new(p).expect("p in (0,1)");
    let mut k: u64 = geo.sample(rng);
    while (k as usize) < total {
        let (u, v) = pair_from_index(k as usize, n);
        f(u, v);
        k = k.saturating_add(1).saturating_add(geo.sample(rng));
    }
}

/// Erdos-Renyi graph `G(n, p)`.
pub fn sample_er<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for_each_bernoulli_pair(n, p, rng, |u, v| {
        g.add_edge(u, v).expect("pairs are in range");
    });
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn pair_index_roundtrip() {
        for n in 2..40 {
            let mut k = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    assert_eq!(pair_index(u, v, n), k);
                    assert_eq!(pair_from_index(k, n), (u, v));
                    k += 1;
                }
            }
        }
        let n = 2000;
        let last = n * (n - 1) / 2 - 1;
        assert_eq!(pair_from_index(last, n), (n - 2, n - 1));
    }

    #[test]
    fn loops_count_twice() {
        let g = Graph::from_edges(2, [(0, 0), (0, 1), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.degree(1), 2);
        assert!(!g.is_simple());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn er_extremes() {
        let mut rng = rng_from_seed(1);
        assert_eq!(sample_er(5, 0.0, &mut rng).edge_count(), 0);
        let full = sample_er(5, 1.0, &mut rng);
        assert_eq!(full.edge_count(), 10);
        assert!(full.is_simple());
    }

    #[test]
    fn er_mean_edge_count() {
        let mut rng = rng_from_seed(2);
        let reps = 400;
        let total: usize = (0..reps).map(|_| sample_er(200, 0.01, &mut rng).edge_count()).sum();
        let mean = total as f64 / reps as f64;
        // Binomial(19900, 0.01): mean 199, sd 14.0
        assert!((mean - 199.0).abs() < 3.0 * 14.0 / (reps as f64).sqrt());
    }
}
