use crate::error::{Error, Result};
use crate::structure::NeighborAccess;

/// Connected components, each sorted, listed in order of their smallest
/// vertex, plus the index of the giant: the largest component, ties going to
/// the one holding the smallest label.
pub fn components_and_giant<G: NeighborAccess>(g: &G) -> Result<(Vec<Vec<usize>>, usize)> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            g.for_each_neighbor(v, |w| {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            });
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    let mut giant = 0;
    for (i, c) in comps.iter().enumerate() {
        if c.len() > comps[giant].len() {
            giant = i;
        }
    }
    Ok((comps, giant))
}

/// Vertices of the giant, sorted.
pub fn giant_vertices<G: NeighborAccess>(g: &G) -> Result<Vec<usize>> {
    let (mut comps, giant) = components_and_giant(g)?;
    Ok(comps.swap_remove(giant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn tie_goes_to_smallest_label() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1)]).unwrap();
        assert_eq!(giant_vertices(&g).unwrap(), vec![0, 1]);
    }

    #[test]
    fn connected_graph_is_its_own_giant() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let (comps, giant) = components_and_giant(&g).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[giant], vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_graph_rejected() {
        assert_eq!(components_and_giant(&Graph::new(0)).unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn isolated_vertices_are_singletons() {
        let g = Graph::from_edges(5, [(3, 4)]).unwrap();
        let (comps, giant) = components_and_giant(&g).unwrap();
        assert_eq!(comps, vec![vec![0], vec![1], vec![2], vec![3, 4]]);
        assert_eq!(giant, 3);
    }
}
