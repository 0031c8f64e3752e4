//! Exact chromatic-index computation, class-1/2 classification, criticality
//! testing, coloring enumeration, and the constructive fan-recoloring
//! (Δ+1)-colorer.
//!
//! The decision kernel backtracks over edges, preferring the most constrained
//! uncolored edge (ties broken by a static max-degree-first order), prunes on
//! empty candidate sets, breaks color symmetry by pinning the star of one
//! maximum-degree vertex, and bounds completions by the per-color matching
//! capacity ⌊#vertices-missing-the-color / 2⌋. Everything is deterministic
//! for a fixed input and seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::Coloring;
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ChromaticError {
    #[error("k = {0} is below the maximum degree {1}; trivially infeasible")]
    KBelowMaxDegree(usize, usize),
    #[error("edgeless graph: chromatic index is 0, classification refused")]
    Edgeless,
}

/// Class 1 (χ′ = Δ) or class 2 (χ′ = Δ+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    One,
    Two,
}

impl std::fmt::Display for GraphClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphClass::One => write!(f, "1"),
            GraphClass::Two => write!(f, "2"),
        }
    }
}

/// Enumeration mode: one representative per color-permutation orbit, or all
/// proper colorings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Canonical,
    Full,
}

/// The result of enumerating proper total k-colorings of a target graph.
#[derive(Debug, Clone)]
pub struct ColoringEnumeration {
    pub graph: Arc<Graph>,
    pub k: usize,
    pub mode: EnumerationMode,
    pub colorings: Vec<Coloring>,
    /// True when a nonzero cap stopped the enumeration early.
    pub truncated: bool,
}

/// Shared backtracking state over a fixed edge list.
struct Search<'g> {
    graph: &'g Arc<Graph>,
    k: usize,
    /// Edge list in assignment order.
    edges: Vec<(usize, usize)>,
    /// Skip this edge entirely (used to enumerate colorings of G − e while
    /// keeping the coloring bound to G).
    excluded: Option<(usize, usize)>,
}

impl<'g> Search<'g> {
    fn new(graph: &'g Arc<Graph>, k: usize, excluded: Option<(usize, usize)>) -> Search<'g> {
        let excluded = excluded.map(|(u, v)| (u.min(v), u.max(v)));
        let edges: Vec<(usize, usize)> = graph
            .edges()
            .into_iter()
            .filter(|&e| Some(e) != excluded)
            .collect();
        Search {
            graph,
            k,
            edges,
            excluded,
        }
    }

    /// Static max-degree-first order: edges at the pinned root star first,
    /// then by descending endpoint degrees, then lexicographic.
    fn max_degree_first(&mut self) -> usize {
        let g = self.graph;
        let root = (0..g.n())
            .max_by_key(|&v| {
                (
                    g.degree(v)
                        - self
                            .excluded
                            .map_or(0, |(a, b)| usize::from(a == v || b == v)),
                    usize::MAX - v,
                )
            })
            .unwrap_or(0);
        self.edges.sort_by_key(|&(u, v)| {
            let at_root = u == root || v == root;
            let du = g.degree(u);
            let dv = g.degree(v);
            (
                usize::from(!at_root),
                usize::MAX - du.max(dv),
                usize::MAX - du.min(dv),
                u,
                v,
            )
        });
        root
    }

    /// Sum over colors of ⌊#vertices-missing-it / 2⌋ still covers the
    /// uncolored edges? Each color class extension is a matching on the
    /// vertices currently missing that color.
    fn capacity_ok(&self, coloring: &Coloring, uncolored: usize) -> bool {
        let n = self.graph.n();
        let mut capacity = 0usize;
        for c in 1..=self.k {
            let missing_at = (0..n)
                .filter(|&v| !coloring.present_colors(v).contains(c))
                .count();
            capacity += missing_at / 2;
            if capacity >= uncolored {
                return true;
            }
        }
        capacity >= uncolored
    }

    fn candidates(&self, coloring: &Coloring, u: usize, v: usize) -> u64 {
        let full = if self.k == 64 {
            u64::MAX
        } else {
            (1u64 << self.k) - 1
        };
        full & !coloring.present_colors(u).0 & !coloring.present_colors(v).0
    }

    /// Depth-first decision search with most-constrained-edge selection.
    /// Returns the first total coloring found, or None.
    fn decide(&self, coloring: &mut Coloring, colored: &mut Vec<bool>) -> bool {
        let remaining = colored.iter().filter(|&&c| !c).count();
        if remaining == 0 {
            return true;
        }
        if !self.capacity_ok(coloring, remaining) {
            return false;
        }
        // most constrained edge; ties fall back to list order
        let mut best: Option<(usize, u64, u32)> = None;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if colored[i] {
                continue;
            }
            let cand = self.candidates(coloring, u, v);
            let count = cand.count_ones();
            if count == 0 {
                return false;
            }
            if best.map_or(true, |(_, _, bc)| count < bc) {
                best = Some((i, cand, count));
                if count == 1 {
                    break;
                }
            }
        }
        let (i, cand, _) = best.unwrap();
        let (u, v) = self.edges[i];
        let mut mask = cand;
        while mask != 0 {
            let c = mask.trailing_zeros() as usize + 1;
            mask &= mask - 1;
            coloring.color_edge(u, v, c).expect("candidate is proper");
            colored[i] = true;
            if self.decide(coloring, colored) {
                return true;
            }
            coloring.uncolor_edge(u, v).unwrap();
            colored[i] = false;
        }
        false
    }

    /// Like `decide` but with the candidate color order shuffled at every
    /// node by a seeded RNG; used for deterministic pseudo-random sampling.
    fn decide_random(
        &self,
        coloring: &mut Coloring,
        colored: &mut Vec<bool>,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let remaining = colored.iter().filter(|&&c| !c).count();
        if remaining == 0 {
            return true;
        }
        if !self.capacity_ok(coloring, remaining) {
            return false;
        }
        let mut best: Option<(usize, u64, u32)> = None;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if colored[i] {
                continue;
            }
            let cand = self.candidates(coloring, u, v);
            let count = cand.count_ones();
            if count == 0 {
                return false;
            }
            if best.map_or(true, |(_, _, bc)| count < bc) {
                best = Some((i, cand, count));
                if count == 1 {
                    break;
                }
            }
        }
        let (i, cand, _) = best.unwrap();
        let (u, v) = self.edges[i];
        let mut colors: Vec<usize> = (1..=self.k).filter(|&c| cand >> (c - 1) & 1 == 1).collect();
        colors.shuffle(rng);
        for c in colors {
            coloring.color_edge(u, v, c).expect("candidate is proper");
            colored[i] = true;
            if self.decide_random(coloring, colored, rng) {
                return true;
            }
            coloring.uncolor_edge(u, v).unwrap();
            colored[i] = false;
        }
        false
    }

    /// Exhaustive enumeration in static edge order; in canonical mode only
    /// restricted-growth color words are produced (colors appear in order of
    /// first use), which are exactly the lexicographically least members of
    /// the color-permutation orbits. Yields in lexicographic word order.
    fn enumerate(
        &self,
        coloring: &mut Coloring,
        pos: usize,
        used: usize,
        mode: EnumerationMode,
        cap: usize,
        out: &mut Vec<Coloring>,
        truncated: &mut bool,
    ) {
        if cap != 0 && out.len() >= cap {
            *truncated = true;
            return;
        }
        if pos == self.edges.len() {
            out.push(coloring.clone());
            return;
        }
        let remaining = self.edges.len() - pos;
        if !self.capacity_ok(coloring, remaining) {
            return;
        }
        let (u, v) = self.edges[pos];
        let cand = self.candidates(coloring, u, v);
        let limit = match mode {
            EnumerationMode::Canonical => (used + 1).min(self.k),
            EnumerationMode::Full => self.k,
        };
        for c in 1..=limit {
            if cand >> (c - 1) & 1 == 0 {
                continue;
            }
            coloring.color_edge(u, v, c).expect("candidate is proper");
            self.enumerate(
                coloring,
                pos + 1,
                used.max(c),
                mode,
                cap,
                out,
                truncated,
            );
            coloring.uncolor_edge(u, v).unwrap();
            if cap != 0 && out.len() >= cap {
                *truncated = true;
                return;
            }
        }
    }
}

/// Pins the star of `root` to colors 1..d(root) in ascending-neighbour order.
/// Sound for the decision problem: any proper k-coloring can be permuted to
/// match.
fn pin_root_star(
    coloring: &mut Coloring,
    colored: &mut [bool],
    edges: &[(usize, usize)],
    root: usize,
    excluded: Option<(usize, usize)>,
) {
    let graph = coloring.graph().clone();
    let mut next = 1usize;
    for w in graph.neighbors(root) {
        let key = (root.min(w), root.max(w));
        if Some(key) == excluded {
            continue;
        }
        coloring
            .color_edge(root, w, next)
            .expect("star colors are distinct");
        let idx = edges.iter().position(|&e| e == key).unwrap();
        colored[idx] = true;
        next += 1;
    }
}

/// A proper total k-coloring of `graph` if one exists, else `None`.
/// Rejects k < Δ rather than answering. Deterministic for a fixed input.
pub fn find_delta_coloring(
    graph: &Arc<Graph>,
    k: usize,
) -> Result<Option<Coloring>, ChromaticError> {
    find_coloring_excluding(graph, k, None)
}

/// Same decision kernel, with one edge excluded from the target edge set; the
/// result is a coloring of `graph` that leaves the excluded edge uncolored.
pub fn find_coloring_excluding(
    graph: &Arc<Graph>,
    k: usize,
    excluded: Option<(usize, usize)>,
) -> Result<Option<Coloring>, ChromaticError> {
    let target_delta = target_max_degree(graph, excluded);
    if k < target_delta {
        return Err(ChromaticError::KBelowMaxDegree(k, target_delta));
    }
    assert!(k <= 64, "at most 64 colors supported");
    let mut search = Search::new(graph, k, excluded);
    let root = search.max_degree_first();
    let mut coloring = Coloring::empty(graph.clone(), k);
    let mut colored = vec![false; search.edges.len()];
    pin_root_star(&mut coloring, &mut colored, &search.edges, root, search.excluded);
    if search.decide(&mut coloring, &mut colored) {
        Ok(Some(coloring))
    } else {
        Ok(None)
    }
}

fn target_max_degree(graph: &Graph, excluded: Option<(usize, usize)>) -> usize {
    match excluded {
        None => graph.max_degree(),
        Some((a, b)) => (0..graph.n())
            .map(|v| graph.degree(v) - usize::from(v == a || v == b))
            .max()
            .unwrap_or(0),
    }
}

/// χ′(G): 0 for an edgeless graph, otherwise Δ or Δ+1.
pub fn chromatic_index(graph: &Arc<Graph>) -> usize {
    if graph.m() == 0 {
        return 0;
    }
    let delta = graph.max_degree();
    match find_delta_coloring(graph, delta) {
        Ok(Some(_)) => delta,
        Ok(None) => {
            // the bound χ′ ≤ Δ+1 is constructive
            debug_assert!(vizing_plus_one_coloring(graph).is_proper());
            delta + 1
        }
        Err(_) => unreachable!("k = Δ is never rejected"),
    }
}

/// Class 1 iff χ′ = Δ. Refused on edgeless graphs.
pub fn classify(graph: &Arc<Graph>) -> Result<GraphClass, ChromaticError> {
    if graph.m() == 0 {
        return Err(ChromaticError::Edgeless);
    }
    if chromatic_index(graph) == graph.max_degree() {
        Ok(GraphClass::One)
    } else {
        Ok(GraphClass::Two)
    }
}

/// The critical edges: those e with G−e Δ(G)-colorable. Class-1 graphs have
/// none by convention.
pub fn critical_edges(graph: &Arc<Graph>) -> Vec<(usize, usize)> {
    if graph.m() == 0 || classify(graph) != Ok(GraphClass::Two) {
        return Vec::new();
    }
    let delta = graph.max_degree();
    graph
        .edges()
        .into_iter()
        .filter(|&(u, v)| {
            find_coloring_excluding(graph, delta, Some((u, v)))
                .expect("k = Δ(G) ≥ Δ(G−e)")
                .is_some()
        })
        .collect()
}

/// Connected, class 2, and every edge critical.
pub fn is_delta_critical(graph: &Arc<Graph>) -> bool {
    if graph.m() == 0 || !graph.is_connected() {
        return false;
    }
    if classify(graph) != Ok(GraphClass::Two) {
        return false;
    }
    critical_edges(graph).len() == graph.m()
}

/// Enumerates proper total k-colorings of `graph`.
///
/// Canonical mode yields exactly one representative per color-permutation
/// orbit (the lexicographically least edge-order color word); full mode
/// yields everything. `cap` bounds the yielded count (0 = unbounded); order
/// is lexicographic in the color word either way.
pub fn enumerate_colorings(
    graph: &Arc<Graph>,
    k: usize,
    mode: EnumerationMode,
    cap: usize,
) -> ColoringEnumeration {
    enumerate_colorings_excluding(graph, k, mode, cap, None)
}

/// Enumeration variant that skips one edge of the graph: the yielded
/// colorings are total on G − e but remain bound to G (the excluded edge
/// stays uncolored), which is the shape the structural checks consume.
pub fn enumerate_colorings_excluding(
    graph: &Arc<Graph>,
    k: usize,
    mode: EnumerationMode,
    cap: usize,
    excluded: Option<(usize, usize)>,
) -> ColoringEnumeration {
    let search = Search::new(graph, k, excluded);
    let mut out = Vec::new();
    let mut truncated = false;
    if k >= target_max_degree(graph, search.excluded) && k <= 64 {
        let mut coloring = Coloring::empty(graph.clone(), k);
        search.enumerate(&mut coloring, 0, 0, mode, cap, &mut out, &mut truncated);
    }
    ColoringEnumeration {
        graph: graph.clone(),
        k,
        mode,
        colorings: out,
        truncated,
    }
}

/// Deterministic pseudo-random sample of canonical k-colorings of G − e
/// (or of G when `excluded` is None): repeated randomized descents, each
/// canonicalized, deduplicated, first-seen order. May return fewer than
/// `count` distinct colorings.
pub fn sample_canonical_colorings(
    graph: &Arc<Graph>,
    k: usize,
    count: usize,
    seed: u64,
    excluded: Option<(usize, usize)>,
) -> Vec<Coloring> {
    let search = Search::new(graph, k, excluded);
    if k < target_max_degree(graph, search.excluded) || k > 64 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let attempts = count.saturating_mul(3).max(8);
    for _ in 0..attempts {
        if out.len() >= count {
            break;
        }
        let mut coloring = Coloring::empty(graph.clone(), k);
        let mut colored = vec![false; search.edges.len()];
        if !search.decide_random(&mut coloring, &mut colored, &mut rng) {
            break; // infeasible: no amount of retrying helps
        }
        let canon = coloring.canonical_colors();
        if seen.insert(canon.color_word()) {
            out.push(canon);
        }
    }
    out
}

/// Constructive (Δ+1)-coloring by iterative fan building, chain inversion
/// and fan rotation; never searches. The color count is a bound, not a
/// demand.
pub fn vizing_plus_one_coloring(graph: &Arc<Graph>) -> Coloring {
    let k = graph.max_degree() + 1;
    let mut coloring = Coloring::empty(graph.clone(), k);
    for (u, v) in graph.edges() {
        extend_by_fan(&mut coloring, u, v);
        debug_assert!(coloring.is_proper());
    }
    debug_assert!(coloring.is_total());
    coloring
}

/// Colors the uncolored edge u-v0, recoloring as needed. With k = Δ+1 every
/// vertex always misses at least one color, which the fan argument turns
/// into a free color for the edge.
fn extend_by_fan(coloring: &mut Coloring, u: usize, v0: usize) {
    let graph = coloring.graph().clone();
    // maximal fan at u starting with v0: each next edge's color is missing
    // at the previous fan vertex; lowest-index extension first
    let mut fan = vec![v0];
    let mut in_fan = vec![false; graph.n()];
    in_fan[v0] = true;
    loop {
        let last = *fan.last().unwrap();
        let miss_last = coloring.missing_colors(last);
        let next = graph
            .neighbors(u)
            .find(|&w| {
                !in_fan[w]
                    && coloring
                        .edge_color(u, w)
                        .is_some_and(|c| miss_last.contains(c))
            });
        match next {
            Some(w) => {
                fan.push(w);
                in_fan[w] = true;
            }
            None => break,
        }
    }
    let c = coloring.missing_colors(u).min().expect("k = Δ+1");
    let d = coloring
        .missing_colors(*fan.last().unwrap())
        .min()
        .expect("k = Δ+1");
    if c != d {
        // invert the (c,d)-chain from u; afterwards d is missing at u
        coloring.swap_at(u, c, d).expect("u misses c");
    }
    // find the first fan vertex where d is now missing and the prefix is
    // still a fan under the current coloring
    let mut w_idx = None;
    let mut prefix_ok = true;
    for (i, &w) in fan.iter().enumerate() {
        if i > 0 {
            let col = coloring.edge_color(u, w);
            let prev_missing = coloring.missing_colors(fan[i - 1]);
            prefix_ok = prefix_ok && col.is_some_and(|cc| prev_missing.contains(cc));
        }
        if prefix_ok && coloring.missing_colors(w).contains(d) {
            w_idx = Some(i);
            break;
        }
    }
    let w_idx = w_idx.expect("fan argument guarantees a rotation point");
    // rotate the fan prefix: shift each edge's color down, then close with d
    for i in 0..w_idx {
        let next_color = coloring.edge_color(u, fan[i + 1]).expect("fan edge");
        coloring.uncolor_edge(u, fan[i + 1]).unwrap();
        coloring.color_edge(u, fan[i], next_color).unwrap();
    }
    coloring.color_edge(u, fan[w_idx], d).expect("d is free at both ends");
}
