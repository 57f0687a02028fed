use crate::graph::Graph;

/// Bridges of a multigraph as edge ids (parallel edges and loops are never
/// bridges).
pub fn bridges(g: &Graph) -> Vec<usize> {
    let dfs = Dfs::run(g);
    let mut out: Vec<usize> = dfs.bridges.iter().map(|&(id, _)| id).collect();
    out.sort_unstable();
    out
}

/// Per-vertex count `R(x)` of bridges whose removal leaves `x` on the strictly
/// smaller side of its component. When both sides have equal size, the side
/// holding the component's smallest vertex counts as the larger one.
pub fn removal_edge_counts(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let dfs = Dfs::run(g);
    // Difference array over preorder positions; a subtree occupies the range
    // [pre[c], pre[c] + size[c]).
    let mut diff = vec![0i64; n + 1];
    for &(_, child) in &dfs.bridges {
        let root = dfs.root[child];
        let comp_size = dfs.size[root];
        let (lo, hi) = (dfs.pre[child], dfs.pre[child] + dfs.size[child]);
        let inside = dfs.size[child];
        let outside = comp_size - inside;
        // The child side never contains the root, which is the smallest vertex.
        if inside <= outside {
            diff[lo] += 1;
            diff[hi] -= 1;
        } else {
            let (clo, chi) = (dfs.pre[root], dfs.pre[root] + comp_size);
            diff[clo] += 1;
            diff[chi] -= 1;
            diff[lo] -= 1;
            diff[hi] += 1;
        }
    }
    let mut by_pre = vec![0usize; n];
    let mut acc = 0i64;
    for (i, slot) in by_pre.iter_mut().enumerate() {
        acc += diff[i];
        *slot = acc as usize;
    }
    (0..n).map(|v| by_pre[dfs.pre[v]]).collect()
}

struct Dfs {
    pre: Vec<usize>,
    size: Vec<usize>,
    root: Vec<usize>,
    /// (edge id, child endpoint) for each bridge.
    bridges: Vec<(usize, usize)>,
}

impl Dfs {
    /// Iterative lowlink DFS rooted at the smallest vertex of each component.
    fn run(g: &Graph) -> Dfs {
        let n = g.n();
        const UNSEEN: usize = usize::MAX;
        let mut pre = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut size = vec![1usize; n];
        let mut root = vec![0usize; n];
        let mut bridges = Vec::new();
        let mut counter = 0;
        // (vertex, parent edge id, next incident index)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for s in 0..n {
            if pre[s] != UNSEEN {
                continue;
            }
            pre[s] = counter;
            low[s] = counter;
            root[s] = s;
            counter += 1;
            stack.push((s, usize::MAX, 0));
            while let Some(top) = stack.last_mut() {
                let (v, parent_edge, idx) = *top;
                if let Some(&(w, id)) = g.incident(v).get(idx) {
                    top.2 += 1;
                    if id == parent_edge {
                        continue;
                    }
                    if pre[w] == UNSEEN {
                        pre[w] = counter;
                        low[w] = counter;
                        root[w] = s;
                        counter += 1;
                        stack.push((w, id, 0));
                    } else {
                        low[v] = low[v].min(pre[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        size[p] += size[v];
                        if low[v] > pre[p] {
                            bridges.push((parent_edge, v));
                        }
                    }
                }
            }
        }
        Dfs { pre, size, root, bridges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_has_no_removal_edges() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(bridges(&g).is_empty());
        assert_eq!(removal_edge_counts(&g), vec![0; 5]);
    }

    #[test]
    fn path_of_three() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(removal_edge_counts(&g), vec![1, 0, 1]);
    }

    #[test]
    fn parallel_edges_are_not_bridges() {
        let g = Graph::from_edges(3, [(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(bridges(&g), vec![2]);
    }

    #[test]
    fn even_split_counts_side_without_smallest_vertex() {
        // 0-1 | 2-3 joined by the bridge (1, 2): side {2, 3} is the smaller one.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(removal_edge_counts(&g), vec![1, 0, 1, 2]);
    }

    #[test]
    fn root_side_can_be_smaller() {
        // Star centred at 3 with leaf 0: removing (0, 3) isolates vertex 0.
        let g = Graph::from_edges(5, [(0, 3), (1, 3), (2, 3), (3, 4)]).unwrap();
        assert_eq!(removal_edge_counts(&g), vec![1, 1, 1, 0, 1]);
    }
}
