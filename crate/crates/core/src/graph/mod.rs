//! Immutable simple undirected graphs, vertex sets and induced subgraphs.
//!
//! Vertices are dense ids `0..n`. Adjacency is stored in compressed sparse
//! row form with every neighbour list sorted ascending, so two graphs with the
//! same edge set compare equal and edge queries are a binary search.

mod io;
mod oracles;
pub(crate) mod traversal;

pub use io::{read_edge_list, write_edge_list};
pub use oracles::{brute_force_degeneracy, greedy_mis, is_valid_mis, BRUTE_FORCE_MAX_VERTICES};
pub use traversal::{bfs_distances, component_diameters, ComponentSummary, Components};

use thiserror::Error;

/// Vertex identifier.
pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: u64, n: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph with {n} vertices exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("graph with {n} vertices is below the minimum of {min}")]
    TooSmall { n: usize, min: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Simple undirected graph in CSR form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], targets: Vec::new() }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate edges
    /// and out-of-range endpoints. Edge orientation is irrelevant.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if n > VertexId::MAX as usize {
            return Err(GraphError::TooLarge { n, max: VertexId::MAX as usize });
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::InvalidVertex { vertex: x.into(), n });
                }
            }
            if u == v {
                return Err(GraphError::InvalidInput(format!("self-loop at vertex {u}")));
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidInput(format!(
                "duplicate edge {} {}",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, &pairs))
    }

    /// `pairs` must be sorted, unique, `u < v` and in range.
    pub(crate) fn from_sorted_unique(n: usize, pairs: &[(VertexId, VertexId)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * pairs.len()];
        // Lexicographic pair order makes each row come out sorted: a row
        // first receives its smaller neighbours (as `v`), then larger ones.
        for &(u, v) in pairs {
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for &(u, v) in pairs {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
        }
        Graph { offsets, targets }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbour list of `v`. Panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Degree of `v`; see [`Graph::try_degree`] for a checked variant.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn try_degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.degree(v))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.n() && (v as usize) < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertices().map(|v| self.degree(v)).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.n() as VertexId
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { vertex: v.into(), n: self.n() })
        }
    }

    /// Subgraph induced by `s`, relabelled densely in ascending id order.
    ///
    /// The returned map sends each new id to its original id.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<VertexId>), GraphError> {
        if s.universe() != self.n() {
            if let Some(&bad) = s.members().iter().find(|&&v| v as usize >= self.n()) {
                return Err(GraphError::InvalidVertex { vertex: bad.into(), n: self.n() });
            }
        }
        let map: Vec<VertexId> = s.members().to_vec();
        let mut relabel = vec![VertexId::MAX; self.n()];
        for (new, &old) in map.iter().enumerate() {
            relabel[old as usize] = new as VertexId;
        }
        let mut pairs = Vec::new();
        for (new_u, &old_u) in map.iter().enumerate() {
            for &old_v in self.neighbors(old_u) {
                let new_v = relabel[old_v as usize];
                if new_v != VertexId::MAX && new_v as usize > new_u {
                    pairs.push((new_u as VertexId, new_v));
                }
            }
        }
        // Ascending relabel preserves order, so `pairs` is already sorted.
        Ok((Graph::from_sorted_unique(map.len(), &pairs), map))
    }
}

/// Sorted set of distinct vertex ids of a graph with `universe` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, serde::Serialize)]
pub struct VertexSet {
    universe: usize,
    members: Vec<VertexId>,
}

impl VertexSet {
    /// Rejects out-of-range ids and duplicates.
    pub fn new<I>(universe: usize, ids: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut members: Vec<VertexId> = ids.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v as usize >= universe) {
            return Err(GraphError::InvalidVertex { vertex: bad.into(), n: universe });
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidInput(format!("duplicate vertex {}", w[0])));
        }
        Ok(VertexSet { universe, members })
    }

    pub fn empty(universe: usize) -> Self {
        VertexSet { universe, members: Vec::new() }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { universe, members: (0..universe as VertexId).collect() }
    }

    /// Set of ids `i` with `mask[i]`.
    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            universe: mask.len(),
            members: (0..mask.len() as VertexId).filter(|&v| mask[v as usize]).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn to_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &v in &self.members {
            mask[v as usize] = true;
        }
        mask
    }

    /// Maps members of a subgraph's vertex set back through an id-map.
    pub fn lift(&self, id_map: &[VertexId], universe: usize) -> Result<VertexSet, GraphError> {
        VertexSet::new(universe, self.members.iter().map(|&v| id_map[v as usize]))
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().copied()
    }
}
