//! Simple undirected graphs on at most 62 vertices, with the graph6 text
//! codec and the graph-level predicates and transformations used by the
//! structural checks (overfull test, full-deficiency pairs, vertex splitting).
//!
//! Graphs are immutable after construction; transformations return new graphs.

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count (short graph6 form).
pub const MAX_VERTICES: usize = 62;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph too large: {0} vertices (max {MAX_VERTICES})")]
    TooLarge(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("edge {0}-{1} not in graph")]
    NoSuchEdge(usize, usize),
}

/// Errors from the graph6 decoder, each carrying the byte offset at which the
/// problem was detected.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Graph6Error {
    #[error("empty graph6 line")]
    Empty,
    #[error("malformed header byte 0x{byte:02x} at offset {offset}")]
    MalformedHeader { byte: u8, offset: usize },
    #[error("byte 0x{byte:02x} out of graph6 range at offset {offset}")]
    BadBodyByte { byte: u8, offset: usize },
    #[error("truncated bit body: expected {expected} body bytes, got {got} (offset {offset})")]
    Truncated {
        expected: usize,
        got: usize,
        offset: usize,
    },
    #[error("trailing garbage at offset {offset}")]
    TrailingGarbage { offset: usize },
}

/// A simple undirected graph with dense 0-based vertex labels.
///
/// Adjacency is kept as one bitmask per vertex, which bounds `n` by 62 (the
/// short graph6 form) and makes neighbourhood queries single loads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    degree: Vec<usize>,
    m: usize,
    max_degree: usize,
    min_degree: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, g6={})", self.n, self.m, self.to_graph6())
    }
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate edges
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        let mut adj = vec![0u64; n];
        let mut m = 0;
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u] >> v & 1 == 1 {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            m += 1;
        }
        Ok(Self::from_adj(n, adj, m))
    }

    fn from_adj(n: usize, adj: Vec<u64>, m: usize) -> Graph {
        let degree: Vec<usize> = adj.iter().map(|a| a.count_ones() as usize).collect();
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        let min_degree = degree.iter().copied().min().unwrap_or(0);
        Graph {
            n,
            adj,
            degree,
            m,
            max_degree,
            min_degree,
        }
    }

    /// Cycle C_n.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Path P_n (n vertices, n-1 edges).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Complete bipartite graph K_{a,b}.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).unwrap()
    }

    /// The Petersen graph.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5)); // outer 5-cycle
            edges.push((i, i + 5)); // spokes
            edges.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    /// The octahedron K_{2,2,2} (4-regular on 6 vertices).
    pub fn octahedron() -> Graph {
        let mut edges = Vec::new();
        // vertices paired as antipodes: (0,1), (2,3), (4,5)
        for u in 0..6 {
            for v in u + 1..6 {
                if u / 2 != v / 2 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(6, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n, "vertex {v} out of range");
        self.degree[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && u != v && self.adj[u] >> v & 1 == 1
    }

    /// Neighbour set of `v` as a bitmask.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        assert!(v < self.n, "vertex {v} out of range");
        self.adj[v]
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.neighbor_mask(v);
        BitIter(mask)
    }

    /// Checked neighbour query mirroring the adjacency interface: the
    /// neighbour list and degree of `v`, or an error if `v` is out of range.
    pub fn adjacency(&self, v: usize) -> Result<(Vec<usize>, usize), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        let ns: Vec<usize> = self.neighbors(v).collect();
        let d = ns.len();
        Ok((ns, d))
    }

    /// All edges (u, v) with u < v in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            let mut mask = self.adj[u] >> (u + 1) << (u + 1);
            while mask != 0 {
                let v = mask.trailing_zeros() as usize;
                out.push((u, v));
                mask &= mask - 1;
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= self.adj[v];
                f &= f - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.n
    }

    /// BFS distances from `v` (usize::MAX for unreachable vertices).
    pub fn distances(&self, v: usize) -> Vec<usize> {
        assert!(v < self.n);
        let mut dist = vec![usize::MAX; self.n];
        dist[v] = 0;
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// New graph with the edge u-v removed.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NoSuchEdge(u.min(v), u.max(v)));
        }
        let mut adj = self.adj.clone();
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
        Ok(Self::from_adj(self.n, adj, self.m - 1))
    }

    /// New graph with vertex `v` removed; the remaining vertices are
    /// relabelled densely, preserving their relative order.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        let map = |w: usize| if w > v { w - 1 } else { w };
        let mut edges = Vec::new();
        for (a, b) in self.edges() {
            if a != v && b != v {
                edges.push((map(a), map(b)));
            }
        }
        Graph::from_edges(self.n - 1, &edges)
    }

    /// `true` iff m > Δ·⌊n/2⌋.
    pub fn is_overfull(&self) -> bool {
        self.m > self.max_degree * (self.n / 2)
    }

    /// All adjacent pairs (u, v), u < v, with d(u) + d(v) = Δ + 2.
    pub fn full_deficiency_pairs(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| self.degree[u] + self.degree[v] == self.max_degree + 2)
            .collect()
    }

    /// Splits vertex `v`: `v` keeps the `left` part of its neighbourhood, a
    /// new vertex labelled `n` gets the `right` part, and the two halves are
    /// joined by an edge. All other adjacencies are unchanged.
    pub fn split_vertex(&self, v: usize, partition: &VertexPartition) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if self.n + 1 > MAX_VERTICES {
            return Err(GraphError::TooLarge(self.n + 1));
        }
        partition.validate(self, v)?;
        let new = self.n;
        let mut edges = Vec::new();
        for (a, b) in self.edges() {
            if a != v && b != v {
                edges.push((a, b));
            }
        }
        for &w in &partition.left {
            edges.push((v, w));
        }
        for &w in &partition.right {
            edges.push((new, w));
        }
        edges.push((v, new));
        Graph::from_edges(self.n + 1, &edges)
    }

    /// Decodes a short-form graph6 line.
    ///
    /// Nonzero padding bits are tolerated (only the n(n-1)/2 meaningful bits
    /// are read); extra body bytes and out-of-range bytes are rejected with
    /// their offsets.
    pub fn from_graph6(line: &str) -> Result<Graph, Graph6Error> {
        let bytes = line.trim_end_matches(['\n', '\r']).as_bytes();
        if bytes.is_empty() {
            return Err(Graph6Error::Empty);
        }
        let header = bytes[0];
        if !(63..=63 + MAX_VERTICES as u8).contains(&header) {
            return Err(Graph6Error::MalformedHeader {
                byte: header,
                offset: 0,
            });
        }
        let n = (header - 63) as usize;
        let nbits = n * (n.saturating_sub(1)) / 2;
        let expected = nbits.div_ceil(6);
        let body = &bytes[1..];
        if body.len() < expected {
            return Err(Graph6Error::Truncated {
                expected,
                got: body.len(),
                offset: bytes.len(),
            });
        }
        if body.len() > expected {
            return Err(Graph6Error::TrailingGarbage {
                offset: 1 + expected,
            });
        }
        for (i, &b) in body.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::BadBodyByte {
                    byte: b,
                    offset: 1 + i,
                });
            }
        }
        let mut adj = vec![0u64; n];
        let mut m = 0;
        let mut bit_index = 0;
        'outer: for j in 1..n {
            for i in 0..j {
                let byte = body[bit_index / 6] - 63;
                let bit = byte >> (5 - bit_index % 6) & 1;
                if bit == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                    m += 1;
                }
                bit_index += 1;
                if bit_index == nbits {
                    break 'outer;
                }
            }
        }
        Ok(Self::from_adj(n, adj, m))
    }

    /// Encodes the graph as a short-form graph6 line (no trailing newline).
    pub fn to_graph6(&self) -> String {
        let mut out = String::new();
        out.push((63 + self.n as u8) as char);
        let mut acc = 0u8;
        let mut used = 0;
        for j in 1..self.n {
            for i in 0..j {
                acc = acc << 1 | (self.adj[i] >> j & 1) as u8;
                used += 1;
                if used == 6 {
                    out.push((acc + 63) as char);
                    acc = 0;
                    used = 0;
                }
            }
        }
        if used > 0 {
            out.push(((acc << (6 - used)) + 63) as char);
        }
        out
    }
}

/// Iterator over set bits of a mask, ascending.
struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

/// A bipartition of the neighbourhood of a vertex about to be split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl VertexPartition {
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> VertexPartition {
        left.sort_unstable();
        right.sort_unstable();
        VertexPartition { left, right }
    }

    /// Checks that left/right are disjoint, both nonempty, and together cover
    /// exactly N(v).
    pub fn validate(&self, g: &Graph, v: usize) -> Result<(), GraphError> {
        if self.left.is_empty() || self.right.is_empty() {
            return Err(GraphError::InvalidPartition("empty side".into()));
        }
        let mut left_mask = 0u64;
        let mut right_mask = 0u64;
        for &w in &self.left {
            if w >= g.n() {
                return Err(GraphError::VertexOutOfRange(w, g.n()));
            }
            if left_mask >> w & 1 == 1 {
                return Err(GraphError::InvalidPartition(format!("repeated vertex {w}")));
            }
            left_mask |= 1 << w;
        }
        for &w in &self.right {
            if w >= g.n() {
                return Err(GraphError::VertexOutOfRange(w, g.n()));
            }
            if right_mask >> w & 1 == 1 {
                return Err(GraphError::InvalidPartition(format!("repeated vertex {w}")));
            }
            right_mask |= 1 << w;
        }
        if left_mask & right_mask != 0 {
            return Err(GraphError::InvalidPartition("sides overlap".into()));
        }
        if left_mask | right_mask != g.neighbor_mask(v) {
            return Err(GraphError::InvalidPartition(format!(
                "sides do not cover N({v}) exactly"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_decodes_k4() {
        let g = Graph::from_graph6("C~").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 6);
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn graph6_encodes_k5() {
        // reference codec value; note the canonical zero padding
        assert_eq!(Graph::complete(5).to_graph6(), "D~{");
    }

    #[test]
    fn graph6_tolerates_nonzero_padding() {
        // same bits as D~{ with the two padding bits set
        assert_eq!(Graph::from_graph6("D~~").unwrap(), Graph::complete(5));
    }

    #[test]
    fn graph6_single_vertex() {
        let g = Graph::from_graph6("@").unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
        assert_eq!(g.to_graph6(), "@");
    }

    #[test]
    fn graph6_round_trips_small_graphs() {
        for g in [
            Graph::cycle(5),
            Graph::complete(4),
            Graph::petersen(),
            Graph::octahedron(),
            Graph::complete_bipartite(3, 3),
            Graph::from_edges(3, &[]).unwrap(),
        ] {
            let line = g.to_graph6();
            assert_eq!(Graph::from_graph6(&line).unwrap(), g, "line {line}");
        }
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        assert_eq!(
            Graph::from_graph6(" ~~"),
            Err(Graph6Error::MalformedHeader {
                byte: b' ',
                offset: 0
            })
        );
        assert_eq!(
            Graph::from_graph6("D~"),
            Err(Graph6Error::Truncated {
                expected: 2,
                got: 1,
                offset: 2
            })
        );
        assert_eq!(
            Graph::from_graph6("C~~"),
            Err(Graph6Error::TrailingGarbage { offset: 2 })
        );
        assert_eq!(
            Graph::from_graph6("D~\x1f"),
            Err(Graph6Error::BadBodyByte {
                byte: 0x1f,
                offset: 2
            })
        );
        assert_eq!(Graph::from_graph6(""), Err(Graph6Error::Empty));
    }

    #[test]
    fn adjacency_queries() {
        let c5 = Graph::cycle(5);
        assert_eq!(c5.adjacency(0).unwrap(), (vec![1, 4], 2));
        let k4 = Graph::complete(4);
        for v in 0..4 {
            assert_eq!(k4.adjacency(v).unwrap().1, 3);
        }
        let iso = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(iso.adjacency(0).unwrap(), (vec![], 0));
        assert!(matches!(
            c5.adjacency(7),
            Err(GraphError::VertexOutOfRange(7, 5))
        ));
    }

    #[test]
    fn overfull_examples() {
        assert!(Graph::cycle(5).is_overfull()); // 5 > 2*2
        assert!(!Graph::complete(4).is_overfull()); // 6 > 3*2 fails
        assert!(!Graph::from_edges(2, &[(0, 1)]).unwrap().is_overfull());
        assert!(Graph::complete(5).is_overfull()); // 10 > 4*2
    }

    #[test]
    fn full_deficiency_pairs_examples() {
        assert!(Graph::complete(4).full_deficiency_pairs().is_empty());
        assert!(Graph::path(3).full_deficiency_pairs().is_empty());
        let split = Graph::complete(4)
            .split_vertex(0, &VertexPartition::new(vec![1], vec![2, 3]))
            .unwrap();
        assert!(split.full_deficiency_pairs().contains(&(0, 4)));
    }

    #[test]
    fn split_k4_shape() {
        let g = Graph::complete(4);
        let split = g
            .split_vertex(0, &VertexPartition::new(vec![1], vec![2, 3]))
            .unwrap();
        assert_eq!(split.n(), 5);
        assert_eq!(split.m(), 7);
        let mut degs: Vec<_> = (0..5).map(|v| split.degree(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![2, 3, 3, 3, 3]);
        assert!(split.has_edge(0, 4));
    }

    #[test]
    fn split_degree_two_cycle_vertex_lengthens_cycle() {
        let c4 = Graph::cycle(4);
        let split = c4
            .split_vertex(0, &VertexPartition::new(vec![1], vec![3]))
            .unwrap();
        assert_eq!(split.n(), 5);
        assert_eq!(split.m(), 5);
        assert!((0..5).all(|v| split.degree(v) == 2));
        assert!(split.is_connected()); // a 2-regular connected graph is C_5
    }

    #[test]
    fn split_rejects_bad_partitions() {
        let k4 = Graph::complete(4);
        assert!(matches!(
            k4.split_vertex(0, &VertexPartition::new(vec![], vec![1, 2, 3])),
            Err(GraphError::InvalidPartition(_))
        ));
        assert!(matches!(
            k4.split_vertex(0, &VertexPartition::new(vec![1], vec![2])),
            Err(GraphError::InvalidPartition(_))
        ));
        assert!(matches!(
            k4.split_vertex(0, &VertexPartition::new(vec![1, 2], vec![2, 3])),
            Err(GraphError::InvalidPartition(_))
        ));
    }

    #[test]
    fn split_increases_counts_by_one() {
        let g = Graph::octahedron();
        let split = g
            .split_vertex(2, &VertexPartition::new(vec![0], vec![1, 4, 5]))
            .unwrap();
        assert_eq!(split.n(), g.n() + 1);
        assert_eq!(split.m(), g.m() + 1);
        assert!(split.full_deficiency_pairs().contains(&(2, 6)));
        // a balanced split of a regular graph: the split site is the only pair
        let balanced = g
            .split_vertex(2, &VertexPartition::new(vec![0, 1], vec![4, 5]))
            .unwrap();
        assert_eq!(balanced.full_deficiency_pairs(), vec![(2, 6)]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange(3, 2))
        ));
        assert!(matches!(
            Graph::from_edges(63, &[]),
            Err(GraphError::TooLarge(63))
        ));
    }

    #[test]
    fn degree_cache_consistent() {
        let g = Graph::petersen();
        assert_eq!(g.max_degree(), 3);
        assert_eq!(g.min_degree(), 3);
        assert_eq!(g.m(), 15);
        let degsum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        assert_eq!(degsum, 2 * g.m());
    }

    #[test]
    fn connectivity_and_distances() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        let d = Graph::cycle(6).distances(0);
        assert_eq!(d, vec![0, 1, 2, 3, 2, 1]);
    }
}
