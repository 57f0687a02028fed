use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// Mask of the 2-core: vertices surviving repeated removal of vertices of
/// degree at most one (loops count 2).
pub fn core_mask(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let mut deg = g.degrees();
    let mut alive = vec![true; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(w, _) in g.incident(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    queue.push(w);
                }
            }
        }
    }
    alive
}

/// The 2-core as an induced subgraph, with the map from its labels to `g`'s.
pub fn core_of(g: &Graph) -> (Graph, Vec<usize>) {
    let mask = core_mask(g);
    let vertices: Vec<usize> = (0..g.n()).filter(|&v| mask[v]).collect();
    g.induced(&vertices)
}

/// Kernel multigraph with its expansion back into core paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    /// Kernel on `0..k`.
    pub graph: Graph,
    /// Original label of each kernel vertex.
    pub vertices: Vec<usize>,
    /// Interior core vertices of the path behind each kernel edge, in order.
    pub paths: Vec<Vec<usize>>,
}

impl Kernel {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Kernel edges in original labels, each sorted, as a sorted multiset.
    pub fn edge_multiset(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.vertices[a], self.vertices[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Contracts every maximal path of core-degree-2 vertices between kernel
/// vertices (core degree at least 3) into one edge and drops isolated cycles.
pub fn kernel_of(g: &Graph) -> Kernel {
    let n = g.n();
    let in_core = core_mask(g);
    let core_deg: Vec<usize> =
        (0..n).map(|v| if in_core[v] { g.incident(v).iter().filter(|&&(w, _)| in_core[w]).count() } else { 0 }).collect();
    let is_kernel: Vec<bool> = (0..n).map(|v| in_core[v] && core_deg[v] >= 3).collect();
    let vertices: Vec<usize> = (0..n).filter(|&v| is_kernel[v]).collect();
    let mut label = vec![usize::MAX; n];
    for (i, &v) in vertices.iter().enumerate() {
        label[v] = i;
    }
    let mut used = vec![false; g.edge_count()];
    let mut graph = Graph::new(vertices.len());
    let mut paths = Vec::new();
    for &a in &vertices {
        for &(first, first_id) in g.incident(a) {
            if used[first_id] || !in_core[first] {
                continue;
            }
            used[first_id] = true;
            let mut interior = Vec::new();
            let (mut cur, mut via) = (first, first_id);
            while !is_kernel[cur] {
                interior.push(cur);
                let &(next, next_id) = g
                    .incident(cur)
                    .iter()
                    .find(|&&(w, id)| id != via && in_core[w])
                    .expect("core-degree-2 vertex has a second core edge");
                used[next_id] = true;
                cur = next;
                via = next_id;
            }
            graph.add_edge(label[a], label[cur]).expect("kernel labels in range");
            paths.push(interior);
        }
    }
    Kernel { graph, vertices, paths }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecorationStats {
    /// Per kernel edge: interior path vertices plus the trees hanging off them.
    pub sizes: Vec<usize>,
    pub max: usize,
}

/// Sizes of the pieces added when each kernel edge is expanded to its core
/// path with hanging trees; kernel endpoints and their trees are excluded.
pub fn decoration_stats(g: &Graph) -> DecorationStats {
    let kernel = kernel_of(g);
    let in_core = core_mask(g);
    let hanging = hanging_tree_sizes(g, &in_core);
    let sizes: Vec<usize> = kernel.paths.iter().map(|p| p.iter().map(|&v| 1 + hanging[v]).sum()).collect();
    let max = sizes.iter().copied().max().unwrap_or(0);
    DecorationStats { sizes, max }
}

/// For each core vertex, the number of non-core vertices whose tree attaches
/// to the core at that vertex.
pub fn hanging_tree_sizes(g: &Graph, in_core: &[bool]) -> Vec<usize> {
    let n = g.n();
    let mut sizes = vec![0usize; n];
    let mut seen = in_core.to_vec();
    let mut stack = Vec::new();
    for r in (0..n).filter(|&v| in_core[v]) {
        stack.push(r);
        while let Some(v) = stack.pop() {
            for &(w, _) in g.incident(v) {
                if !seen[w] {
                    seen[w] = true;
                    sizes[r] += 1;
                    stack.push(w);
                }
            }
        }
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    fn theta() -> Graph {
        // 0 and 1 joined by paths 0-2-1, 0-3-1 and 0-4-5-1.
        Graph::from_edges(6, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 1)]).unwrap()
    }

    #[test]
    fn tree_has_empty_core() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(core_of(&g).0.n(), 0);
    }

    #[test]
    fn cycle_is_its_own_core() {
        let g = Graph::from_edges(5, cycle(5)).unwrap();
        assert_eq!(core_of(&g).0.n(), 5);
        let mut edges = cycle(5);
        edges.push((0, 5));
        let g = Graph::from_edges(6, edges).unwrap();
        let (core, map) = core_of(&g);
        assert_eq!(core.n(), 5);
        assert_eq!(map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn theta_graph_kernel() {
        let k = kernel_of(&theta());
        assert_eq!(k.vertices, vec![0, 1]);
        assert_eq!(k.edge_multiset(), vec![(0, 1); 3]);
        let mut sizes = decoration_stats(&theta()).sizes;
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2]);
    }

    #[test]
    fn pure_cycle_has_empty_kernel() {
        let k = kernel_of(&Graph::from_edges(6, cycle(6)).unwrap());
        assert_eq!(k.size(), 0);
        assert_eq!(k.graph.edge_count(), 0);
        assert_eq!(decoration_stats(&Graph::from_edges(6, cycle(6)).unwrap()).max, 0);
    }

    #[test]
    fn clique_is_its_own_kernel() {
        let edges: Vec<_> = (0..4).flat_map(|u| ((u + 1)..4).map(move |v| (u, v))).collect();
        let g = Graph::from_edges(4, edges.clone()).unwrap();
        let k = kernel_of(&g);
        assert_eq!(k.edge_multiset(), edges);
        assert!(decoration_stats(&g).sizes.iter().all(|&d| d == 0));
    }

    #[test]
    fn loop_in_kernel() {
        // Vertex 0 has a cycle 0-1-2-0 and a pendant-free path to 3 with its own cycle.
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 3), (3, 6)]).unwrap();
        let k = kernel_of(&g);
        assert_eq!(k.vertices, vec![0, 3]);
        assert_eq!(k.edge_multiset(), vec![(0, 0), (0, 3), (3, 3)]);
        assert_eq!(k.graph.degrees(), vec![3, 3]);
        let d = decoration_stats(&g);
        assert_eq!(d.max, 2);
        assert_eq!(d.sizes.iter().sum::<usize>(), 4);
    }

    #[test]
    fn hanging_trees_counted_on_path_vertices() {
        let mut g = theta();
        let a = g.add_vertex();
        let b = g.add_vertex();
        g.add_edge(4, a).unwrap();
        g.add_edge(a, b).unwrap();
        let mut sizes = decoration_stats(&g).sizes;
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 4]);
    }
}
