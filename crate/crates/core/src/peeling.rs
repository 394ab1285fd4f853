//! Vertex elimination orders: exact degeneracy, weight-order peeling and the
//! arboricity bounds they imply.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{self, Write};

use num_rational::Ratio;

use crate::graph::{Graph, GraphError, VertexId};
use crate::netgen::WeightSequence;
use crate::scalar::Real;

/// An elimination order with the residual degree of each vertex at removal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelingResult {
    /// Largest entry of `trace` (0 for the empty graph).
    pub value: usize,
    pub order: Vec<VertexId>,
    pub trace: Vec<usize>,
}

impl PeelingResult {
    fn from_order(order: Vec<VertexId>, trace: Vec<usize>) -> Self {
        let value = trace.iter().copied().max().unwrap_or(0);
        PeelingResult { value, order, trace }
    }

    /// CSV with header `step,vertex,residual_degree`; steps count from 0.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "step,vertex,residual_degree")?;
        for (step, (v, d)) in self.order.iter().zip(&self.trace).enumerate() {
            writeln!(out, "{step},{v},{d}")?;
        }
        out.flush()
    }
}

/// Degeneracy by repeatedly removing a minimum-degree vertex, smallest id first.
///
/// Buckets indexed by residual degree hold min-heaps of ids with lazy
/// deletion, giving `O((n + m) log n)` with a deterministic order.
pub fn degeneracy(g: &Graph) -> PeelingResult {
    let n = g.n();
    let mut residual: Vec<usize> = g.degrees();
    let mut removed = vec![false; n];
    let max_deg = residual.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BinaryHeap<Reverse<VertexId>>> = vec![BinaryHeap::new(); max_deg + 1];
    for v in g.vertices() {
        buckets[residual[v as usize]].push(Reverse(v));
    }

    let mut order = Vec::with_capacity(n);
    let mut trace = Vec::with_capacity(n);
    let mut cursor = 0usize;
    while order.len() < n {
        let Reverse(v) = loop {
            match buckets[cursor].pop() {
                Some(Reverse(v)) if !removed[v as usize] && residual[v as usize] == cursor => break Reverse(v),
                Some(_) => continue,
                None => cursor += 1,
            }
        };
        let d = residual[v as usize];
        removed[v as usize] = true;
        order.push(v);
        trace.push(d);
        for &w in g.neighbors(v) {
            let wi = w as usize;
            if !removed[wi] {
                residual[wi] -= 1;
                buckets[residual[wi]].push(Reverse(w));
            }
        }
        cursor = d.saturating_sub(1);
    }
    PeelingResult::from_order(order, trace)
}

/// Peels vertices in non-decreasing weight order (ties by smaller id).
pub fn modified_degeneracy<R: Real>(g: &Graph, w: &WeightSequence<R>) -> Result<PeelingResult, GraphError> {
    if w.len() != g.n() {
        return Err(GraphError::InvalidInput(format!(
            "{} weights for a graph with {} vertices",
            w.len(),
            g.n()
        )));
    }
    let weights = w.weights();
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|&a, &b| {
        weights[a as usize]
            .partial_cmp(&weights[b as usize])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    Ok(peel_in_order(g, order))
}

/// Residual-degree trace of an arbitrary elimination order.
pub fn peel_in_order(g: &Graph, order: Vec<VertexId>) -> PeelingResult {
    let mut removed = vec![false; g.n()];
    let trace = order
        .iter()
        .map(|&v| {
            removed[v as usize] = true;
            g.neighbors(v).iter().filter(|&&u| !removed[u as usize]).count()
        })
        .collect();
    PeelingResult::from_order(order, trace)
}

/// Lower and upper bounds on the arboricity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArboricityBounds {
    /// `ceil(density)`.
    pub lower: usize,
    /// The degeneracy.
    pub upper: usize,
    /// Densest `|E(H)| / (|V(H)| - 1)` found among the suffixes of the
    /// min-degree elimination order.
    pub density: Ratio<usize>,
    /// Size of the suffix attaining `density`.
    pub witness_vertices: usize,
}

/// Nash-Williams lower bound over the suffixes of the degeneracy order and
/// the degeneracy as upper bound.
pub fn arboricity_bounds(g: &Graph) -> Result<ArboricityBounds, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::TooSmall { n: g.n(), min: 2 });
    }
    let peel = degeneracy(g);
    let mut edges_left = g.m();
    let mut density = Ratio::from_integer(0);
    let mut witness_vertices = g.n();
    for (step, &d) in peel.trace.iter().enumerate() {
        let vertices_left = g.n() - step;
        if vertices_left < 2 {
            break;
        }
        let r = Ratio::new(edges_left, vertices_left - 1);
        if r > density {
            density = r;
            witness_vertices = vertices_left;
        }
        edges_left -= d;
    }
    Ok(ArboricityBounds { lower: density.ceil().to_integer(), upper: peel.value, density, witness_vertices })
}

/// `2^((log2 n)^(1/3))`, the degeneracy boundary for `n`-vertex graphs.
pub fn degeneracy_threshold(n: usize) -> f64 {
    (n as f64).log2().cbrt().exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::brute_force_degeneracy;
    use crate::graph::fixtures::*;
    use crate::netgen::weight_sequence;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        crate::graph::traversal::tests::random_graph(n, p, &mut rng)
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(&complete(4)).value, 3);
        assert_eq!(degeneracy(&path(5)).value, 1);
        assert_eq!(degeneracy(&Graph::empty(0)).value, 0);
        assert_eq!(degeneracy(&petersen()).value, 3);
        // smallest id first among equal degrees
        assert_eq!(degeneracy(&path(4)).order, vec![0, 1, 2, 3]);
        assert_eq!(degeneracy(&cycle(4)).order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn weight_order_on_star_with_light_center() {
        // The center gets the smallest weight, so it goes first with all 4 leaves present.
        let g = star(4);
        let w = WeightSequence::from_weights(vec![1.0, 2.0, 3.0, 4.0, 5.0], 3.0, 1.0).unwrap();
        let r = modified_degeneracy(&g, &w).unwrap();
        assert_eq!(r.value, 4);
        assert_eq!(r.order[0], 0);
        assert_eq!(degeneracy(&g).value, 1);
    }

    #[test]
    fn weight_order_matching_min_degree_order() {
        let g = path(5);
        let w = weight_sequence(5, 3.0, 1.0).unwrap();
        assert_eq!(modified_degeneracy(&g, &w).unwrap().value, degeneracy(&g).value);
    }

    #[test]
    fn weight_length_mismatch() {
        let w = weight_sequence(3, 3.0, 1.0).unwrap();
        assert!(matches!(modified_degeneracy(&path(4), &w), Err(GraphError::InvalidInput(_))));
    }

    #[test]
    fn arboricity_examples() {
        let k4 = arboricity_bounds(&complete(4)).unwrap();
        assert_eq!((k4.lower, k4.upper), (2, 3));
        assert_eq!(k4.density, Ratio::new(2, 1));
        let tree = arboricity_bounds(&path(6)).unwrap();
        assert_eq!((tree.lower, tree.upper), (1, 1));
        let c6 = arboricity_bounds(&cycle(6)).unwrap();
        assert_eq!((c6.lower, c6.upper), (2, 2));
        assert_eq!(c6.density, Ratio::new(6, 5));
        assert!(matches!(arboricity_bounds(&Graph::empty(1)), Err(GraphError::TooSmall { .. })));
    }

    #[test]
    fn threshold_value() {
        assert!((degeneracy_threshold(10_000) - 5.1647).abs() < 1e-3);
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        degeneracy(&path(3)).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "step,vertex,residual_degree\n0,0,1\n1,1,1\n2,2,0\n");
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        for seed in 0..300u64 {
            let n = 1 + (seed % 9) as usize;
            let p = (seed % 7) as f64 / 6.0;
            let g = random_graph(n, p, seed);
            assert_eq!(degeneracy(&g).value, brute_force_degeneracy(&g).unwrap(), "seed {seed}");
        }
    }

    proptest! {
        #[test]
        fn bounded_by_max_degree(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, seed);
            let r = degeneracy(&g);
            prop_assert!(r.value <= g.max_degree());
            let mut sorted = r.order.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..n as VertexId).collect::<Vec<_>>());
        }

        #[test]
        fn any_order_dominates(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>(), beta in 2.1f64..5.0) {
            let g = random_graph(n, p, seed);
            let w = weight_sequence(n.max(2), beta, 1.0).unwrap();
            if n >= 2 {
                prop_assert!(modified_degeneracy(&g, &w).unwrap().value >= degeneracy(&g).value);
                let b = arboricity_bounds(&g).unwrap();
                prop_assert!(b.lower <= b.upper);
            }
        }

        #[test]
        fn isolated_vertex_changes_nothing(n in 2usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, seed);
            let bigger = Graph::from_edges(n + 1, g.edges()).unwrap();
            prop_assert_eq!(degeneracy(&g).value, degeneracy(&bigger).value);
            let w = weight_sequence(n, 3.0, 1.0).unwrap();
            let mut wb = w.weights().to_vec();
            wb.push(wb[n - 1] * 2.0);
            let wb = WeightSequence::from_weights(wb, 3.0, 1.0).unwrap();
            prop_assert_eq!(modified_degeneracy(&g, &w).unwrap().value, modified_degeneracy(&bigger, &wb).unwrap().value);
        }
    }
}
