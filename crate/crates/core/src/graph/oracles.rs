//! Reference checks used to validate the distributed protocols and the
//! peeling algorithms.

use super::{Graph, GraphError, VertexId, VertexSet};

/// Largest graph accepted by [`brute_force_degeneracy`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 16;

fn check_set(g: &Graph, u: &VertexSet) -> Result<(), GraphError> {
    if let Some(&bad) = u.members().iter().find(|&&v| v as usize >= g.n()) {
        return Err(GraphError::InvalidVertex { vertex: bad.into(), n: g.n() });
    }
    Ok(())
}

/// `true` iff `u` is independent and every vertex outside `u` has a neighbour in it.
pub fn is_valid_mis(g: &Graph, u: &VertexSet) -> Result<bool, GraphError> {
    check_set(g, u)?;
    let mut inside = vec![false; g.n()];
    for v in u.iter() {
        inside[v as usize] = true;
    }
    for v in g.vertices() {
        let has_member_neighbor = g.neighbors(v).iter().any(|&w| inside[w as usize]);
        if inside[v as usize] == has_member_neighbor {
            // member with a member neighbour, or non-member left undominated
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sequential greedy MIS: scan `order`, keep a vertex iff no kept neighbour.
pub fn greedy_mis(g: &Graph, order: &[VertexId]) -> Result<VertexSet, GraphError> {
    if order.len() != g.n() {
        return Err(GraphError::InvalidInput(format!(
            "order has {} entries for {} vertices",
            order.len(),
            g.n()
        )));
    }
    let mut seen = vec![false; g.n()];
    for &v in order {
        g.check_vertex(v)?;
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(GraphError::InvalidInput(format!("vertex {v} repeated in order")));
        }
    }
    let mut inside = vec![false; g.n()];
    for &v in order {
        if !g.neighbors(v).iter().any(|&w| inside[w as usize]) {
            inside[v as usize] = true;
        }
    }
    Ok(VertexSet::from_mask(&inside))
}

/// Degeneracy by enumerating every nonempty induced subgraph.
pub fn brute_force_degeneracy(g: &Graph) -> Result<usize, GraphError> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(GraphError::TooLarge { n, max: BRUTE_FORCE_MAX_VERTICES });
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut best = 0;
    for subset in 1u32..(1u32 << n) {
        let min_deg = (0..n)
            .filter(|&v| subset >> v & 1 == 1)
            .map(|v| (adj[v] & subset).count_ones() as usize)
            .min()
            .unwrap();
        best = best.max(min_deg);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn set(n: usize, ids: &[VertexId]) -> VertexSet {
        VertexSet::new(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn mis_examples() {
        assert_eq!(is_valid_mis(&path(3), &set(3, &[1])), Ok(true));
        assert_eq!(is_valid_mis(&path(3), &set(3, &[0])), Ok(false));
        assert_eq!(is_valid_mis(&complete(3), &set(3, &[0, 1])), Ok(false));
        assert_eq!(is_valid_mis(&Graph::empty(0), &VertexSet::empty(0)), Ok(true));
        assert!(is_valid_mis(&path(3), &set(5, &[4])).is_err());
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_mis(&path(3), &[0, 1, 2]).unwrap(), set(3, &[0, 2]));
        assert_eq!(greedy_mis(&path(3), &[1, 0, 2]).unwrap(), set(3, &[1]));
        assert_eq!(greedy_mis(&Graph::empty(3), &[2, 0, 1]).unwrap(), set(3, &[0, 1, 2]));
        assert!(greedy_mis(&path(3), &[0, 0, 1]).is_err());
        assert!(greedy_mis(&path(3), &[0, 1]).is_err());
        assert!(greedy_mis(&path(3), &[0, 1, 3]).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_degeneracy(&complete(4)), Ok(3));
        assert_eq!(brute_force_degeneracy(&path(7)), Ok(1));
        assert_eq!(brute_force_degeneracy(&star(6)), Ok(1));
        assert_eq!(brute_force_degeneracy(&petersen()), Ok(3));
        assert_eq!(brute_force_degeneracy(&Graph::empty(4)), Ok(0));
        assert!(matches!(brute_force_degeneracy(&path(17)), Err(GraphError::TooLarge { n: 17, max: 16 })));
    }

    fn arb_graph_and_set() -> impl Strategy<Value = (Graph, VertexSet)> {
        (1usize..12, any::<u64>(), any::<u16>(), 0.0f64..1.0).prop_map(|(n, seed, bits, p)| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = crate::graph::traversal::tests::random_graph(n, p, &mut rng);
            let s = VertexSet::new(n, (0..n as VertexId).filter(|v| bits >> v & 1 == 1)).unwrap();
            (g, s)
        })
    }

    proptest! {
        #[test]
        fn validity_matches_definition((g, s) in arb_graph_and_set()) {
            let independent = g.edges().all(|(a, b)| !(s.contains(a) && s.contains(b)));
            let maximal = g.vertices().all(|v| s.contains(v) || g.neighbors(v).iter().any(|&w| s.contains(w)));
            prop_assert_eq!(is_valid_mis(&g, &s).unwrap(), independent && maximal);
        }

        #[test]
        fn greedy_is_always_valid(n in 1usize..40, p in 0.0f64..0.6, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = crate::graph::traversal::tests::random_graph(n, p, &mut rng);
            let mut order: Vec<VertexId> = g.vertices().collect();
            order.shuffle(&mut rng);
            let mis = greedy_mis(&g, &order).unwrap();
            prop_assert!(is_valid_mis(&g, &mis).unwrap());
        }
    }
}
