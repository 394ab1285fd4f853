//! Breadth-first search, connected components and exact diameters.

use std::collections::VecDeque;

use serde::Serialize;

use super::{Graph, VertexId};

const UNSEEN: u32 = u32::MAX;

/// Hop distances from `source`; unreachable vertices get `None`.
pub fn bfs_distances(g: &Graph, source: VertexId) -> Vec<Option<u32>> {
    let mut dist = vec![UNSEEN; g.n()];
    let mut queue = VecDeque::new();
    bfs_into(g, source, &mut dist, &mut queue, &mut Vec::new());
    dist.into_iter().map(|d| (d != UNSEEN).then_some(d)).collect()
}

/// BFS writing into `dist` (which must be `UNSEEN` on the reached region);
/// `visited` collects every reached vertex so the caller can reset `dist`.
/// Returns the largest distance reached.
fn bfs_into(
    g: &Graph,
    source: VertexId,
    dist: &mut [u32],
    queue: &mut VecDeque<VertexId>,
    visited: &mut Vec<VertexId>,
) -> u32 {
    dist[source as usize] = 0;
    queue.push_back(source);
    visited.push(source);
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        far = du;
        for &w in g.neighbors(u) {
            if dist[w as usize] == UNSEEN {
                dist[w as usize] = du + 1;
                queue.push_back(w);
                visited.push(w);
            }
        }
    }
    far
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub id: u32,
    pub size: usize,
    pub diameter: u32,
}

/// Component labels and per-component diameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Component label of each vertex; labels are assigned in order of the
    /// smallest vertex id in each component.
    pub component: Vec<u32>,
    pub components: Vec<ComponentSummary>,
}

impl Components {
    /// Component with the most vertices (lowest label on ties).
    pub fn largest_component(&self) -> Option<&ComponentSummary> {
        self.components.iter().min_by_key(|c| (std::cmp::Reverse(c.size), c.id))
    }

    /// Diameter of the component with the most vertices.
    pub fn largest_component_diameter(&self) -> u32 {
        self.largest_component().map_or(0, |c| c.diameter)
    }

    /// Largest diameter over all components.
    pub fn max_diameter(&self) -> u32 {
        self.components.iter().map(|c| c.diameter).max().unwrap_or(0)
    }
}

/// Connected components with their exact diameters.
///
/// Diameters come from eccentricity bounds in the style of Takes and
/// Kosters: a BFS from `v` with eccentricity `e` gives every `w` at distance
/// `d` the bounds `max(d, e - d) <= ecc(w) <= e + d`. A vertex leaves the
/// candidate set once its upper bound cannot beat the best eccentricity seen
/// so far. Sources alternate between the largest upper bound and the
/// smallest lower bound.
pub fn component_diameters(g: &Graph) -> Components {
    let n = g.n();
    let mut component = vec![UNSEEN; n];
    let mut components = Vec::new();

    let mut dist = vec![UNSEEN; n];
    let mut queue = VecDeque::new();
    let mut members = Vec::new();
    let mut lower = vec![0u32; n];
    let mut upper = vec![UNSEEN; n];
    let mut visited = Vec::new();

    for root in g.vertices() {
        if component[root as usize] != UNSEEN {
            continue;
        }
        let label = components.len() as u32;
        members.clear();
        let first_far = bfs_into(g, root, &mut dist, &mut queue, &mut members);
        for &v in &members {
            component[v as usize] = label;
        }

        let mut open: Vec<VertexId> = members.clone();
        let mut diameter = 0;
        let mut pick_upper = true;
        // the labelling BFS doubles as the first bounding sweep
        let mut pending = Some(first_far);
        loop {
            let ecc = match pending.take() {
                Some(e) => e,
                None => {
                    let source = if pick_upper {
                        *open.iter().max_by_key(|&&v| (upper[v as usize], g.degree(v), std::cmp::Reverse(v))).unwrap()
                    } else {
                        *open.iter().min_by_key(|&&v| (lower[v as usize], std::cmp::Reverse(g.degree(v)), v)).unwrap()
                    };
                    pick_upper = !pick_upper;
                    visited.clear();
                    bfs_into(g, source, &mut dist, &mut queue, &mut visited)
                }
            };
            diameter = diameter.max(ecc);
            open.retain(|&w| {
                let wi = w as usize;
                let d = dist[wi];
                lower[wi] = lower[wi].max(d.max(ecc - d));
                upper[wi] = upper[wi].min(ecc + d);
                upper[wi] > diameter && lower[wi] != upper[wi]
            });
            for &v in &members {
                dist[v as usize] = UNSEEN;
            }
            if open.is_empty() {
                break;
            }
        }
        components.push(ComponentSummary { id: label, size: members.len(), diameter });
    }

    Components { component, components }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::super::fixtures::*;
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut e = Vec::new();
        for u in 0..n as VertexId {
            for v in u + 1..n as VertexId {
                if rng.gen_bool(p) {
                    e.push((u, v));
                }
            }
        }
        Graph::from_edges(n, e).unwrap()
    }

    /// Floyd-Warshall reference.
    fn all_pairs(g: &Graph) -> Vec<Vec<u32>> {
        let n = g.n();
        let mut d = vec![vec![UNSEEN; n]; n];
        for v in 0..n {
            d[v][v] = 0;
            for &w in g.neighbors(v as VertexId) {
                d[v][w as usize] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] != UNSEEN && d[k][j] != UNSEEN && d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(component_diameters(&path(4)).max_diameter(), 3);
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let e = component_diameters(&two);
        assert_eq!(e.components.len(), 2);
        assert!(e.components.iter().all(|c| c.diameter == 1));
        assert_eq!(component_diameters(&complete(5)).max_diameter(), 1);
        assert_eq!(component_diameters(&Graph::empty(1)).max_diameter(), 0);
        assert_eq!(component_diameters(&Graph::empty(0)).max_diameter(), 0);
    }

    #[test]
    fn largest_component_is_by_size() {
        // long path on 0..5 (diameter 4), triangle 5,6,7 plus pendant 8 (diameter 2), larger
        let g = Graph::from_edges(
            14,
            [(0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (6, 7), (5, 7), (7, 8), (8, 9), (9, 10), (10, 11), (11, 12), (12, 13), (5, 13)],
        )
        .unwrap();
        let e = component_diameters(&g);
        assert_eq!(e.largest_component().unwrap().size, 9);
        assert_eq!(e.max_diameter(), e.largest_component_diameter().max(4));
    }

    #[test]
    fn bfs_reports_unreachable() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(bfs_distances(&g, 0), vec![Some(0), Some(1), None]);
    }

    proptest! {
        #[test]
        fn agrees_with_all_pairs(n in 1usize..=50, p in 0.0f64..0.3, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(n, p, &mut rng);
            let d = all_pairs(&g);
            let e = component_diameters(&g);
            let ecc: Vec<u32> = (0..n).map(|v| d[v].iter().copied().filter(|&x| x != UNSEEN).max().unwrap()).collect();
            for v in 0..n {
                for w in 0..n {
                    prop_assert_eq!(d[v][w] != UNSEEN, e.component[v] == e.component[w]);
                }
            }
            for c in &e.components {
                let diam = (0..n).filter(|&v| e.component[v] == c.id).map(|v| ecc[v]).max().unwrap();
                prop_assert_eq!(c.diameter, diam);
                prop_assert_eq!(c.size, (0..n).filter(|&v| e.component[v] == c.id).count());
            }
        }
    }
}
