//! Detection and enumeration of the colored structures anchored at an
//! uncolored edge: multifans, Kierstead paths, short brooms (with their
//! per-color multiplicity profiles and inducing-chain decompositions), and
//! forks. Each enumerator has an independent `*_is_valid` checker that
//! re-validates a structure literally against its defining condition.
//!
//! All growth and enumeration is greedy/DFS with ties broken by lowest
//! vertex index, then lowest color, so results are deterministic.

use std::fmt;

use crate::coloring::{ColorSet, Coloring};

/// A fan of colored edges at a center: each edge's color is missing at some
/// earlier leaf. `leaves[0]` is the far end of the uncolored edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multifan {
    pub center: usize,
    pub leaves: Vec<usize>,
    /// Colors of center-leaf edges; `colors[0]` pairs with the uncolored
    /// edge and is 0.
    pub colors: Vec<usize>,
}

impl Multifan {
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs = vec![self.center];
        vs.extend_from_slice(&self.leaves);
        vs
    }
}

impl fmt::Display for Multifan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "multifan r={} leaves={:?} colors={:?}",
            self.center, self.leaves, self.colors
        )
    }
}

/// A path whose first edge is uncolored and whose every later edge's color
/// is missing at some strictly earlier path vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KiersteadPath {
    pub vertices: Vec<usize>,
    /// Colors of edges v_i v_{i+1} for i ≥ 1 (the first edge is uncolored).
    pub colors: Vec<usize>,
}

impl KiersteadPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

impl fmt::Display for KiersteadPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kierstead vertices={:?} colors={:?}",
            self.vertices, self.colors
        )
    }
}

/// A short broom: handle (x, xy, y, yz, z) with φ(yz) missing at x, plus
/// bristles zv_i whose colors are missed among the earlier broom vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortBroom {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// φ(yz).
    pub handle_color: usize,
    pub bristles: Vec<usize>,
    /// φ(z v_i), aligned with `bristles`.
    pub bristle_colors: Vec<usize>,
    /// True iff every (x, xy, y, yz, z, zv_i, v_i) is a Kierstead path.
    pub simple: bool,
}

impl ShortBroom {
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs = vec![self.x, self.y, self.z];
        vs.extend_from_slice(&self.bristles);
        vs
    }

    pub fn p(&self) -> usize {
        self.bristles.len()
    }
}

impl fmt::Display for ShortBroom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "broom x={} y={} z={} bristles={:?} colors={:?} simple={}",
            self.x, self.y, self.z, self.bristles, self.bristle_colors, self.simple
        )
    }
}

/// Where a bristle's admission color was found: the handle set {x, y} or an
/// earlier bristle (by index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BristleParent {
    Handle,
    Bristle(usize),
}

/// Per-bristle record of the inducing-chain decomposition: each bristle is
/// rooted (its color is missing at x or y) or attaches to the lowest-index
/// earlier bristle missing its color. Following parents yields a chain whose
/// every step color is missed at the immediate predecessor, rooted at a
/// color from missing(x) ∪ missing(y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducingChain {
    pub vertex: usize,
    pub parent: BristleParent,
    /// The root color of this bristle's chain (a color missing at x or y).
    pub inducing_color: usize,
}

/// The per-color multiplicity profile of a broom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroomProfile {
    /// m(α) for α in [1, k], indexed by α − 1: one less than the number of
    /// broom vertices missing α when α is missed at all, else 0.
    pub m: Vec<usize>,
    /// Σ_α m(α).
    pub sum: usize,
    /// The colors with m ≥ 1.
    pub multi_missed: Vec<usize>,
    /// The inducing-chain decomposition of the bristles, in bristle order.
    pub chains: Vec<InducingChain>,
}

/// Two 5-vertex paths from the uncolored edge sharing a handle, with
/// crosswise tip conditions; all seven vertices distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fork {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub s: [usize; 2],
    pub t: [usize; 2],
    /// Colors of yz, zs1, zs2, s1t1, s2t2.
    pub colors: [usize; 5],
}

impl Fork {
    pub fn vertices(&self) -> [usize; 7] {
        [
            self.x, self.y, self.z, self.s[0], self.s[1], self.t[0], self.t[1],
        ]
    }
}

impl fmt::Display for Fork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fork x={} y={} z={} s={:?} t={:?} colors={:?}",
            self.x, self.y, self.z, self.s, self.t, self.colors
        )
    }
}

/// Grows the maximal multifan centered at `r` from the uncolored edge r-s1.
/// Scans colored edges at r in ascending-neighbour order, admitting an edge
/// whenever its color is missed by an earlier leaf, until nothing can be
/// added. Admissibility only grows as leaves are added, so the result is
/// the unique maximal closure.
pub fn grow_multifan(coloring: &Coloring, r: usize, s1: usize) -> Result<Multifan, String> {
    let g = coloring.graph().clone();
    if !g.has_edge(r, s1) {
        return Err(format!("no edge {r}-{s1}"));
    }
    if coloring.edge_color(r, s1).is_some() {
        return Err(format!("edge {r}-{s1} is colored"));
    }
    let mut leaves = vec![s1];
    let mut colors = vec![0];
    let mut missing_union = coloring.missing_colors(s1);
    let mut in_fan = vec![false; g.n()];
    in_fan[r] = true;
    in_fan[s1] = true;
    loop {
        let mut added = false;
        for w in g.neighbors(r) {
            if in_fan[w] {
                continue;
            }
            if let Some(c) = coloring.edge_color(r, w) {
                if missing_union.contains(c) {
                    leaves.push(w);
                    colors.push(c);
                    missing_union = missing_union.union(coloring.missing_colors(w));
                    in_fan[w] = true;
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    Ok(Multifan {
        center: r,
        leaves,
        colors,
    })
}

/// Re-validates a multifan: distinct vertices, uncolored first edge, and
/// every later edge's color missing at a strictly earlier leaf.
pub fn multifan_is_valid(coloring: &Coloring, fan: &Multifan) -> bool {
    let g = coloring.graph();
    let vs = fan.vertices();
    if fan.leaves.is_empty() || fan.leaves.len() != fan.colors.len() {
        return false;
    }
    let mut sorted = vs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vs.len() {
        return false;
    }
    if !g.has_edge(fan.center, fan.leaves[0])
        || coloring.edge_color(fan.center, fan.leaves[0]).is_some()
    {
        return false;
    }
    for i in 1..fan.leaves.len() {
        let (leaf, c) = (fan.leaves[i], fan.colors[i]);
        if !g.has_edge(fan.center, leaf) || coloring.edge_color(fan.center, leaf) != Some(c) {
            return false;
        }
        if !fan.leaves[..i]
            .iter()
            .any(|&prev| coloring.missing_colors(prev).contains(c))
        {
            return false;
        }
    }
    true
}

fn extend_kierstead(
    coloring: &Coloring,
    vertices: &mut Vec<usize>,
    colors: &mut Vec<usize>,
    union_before_last: ColorSet,
    max_vertices: usize,
    out: &mut Vec<KiersteadPath>,
) {
    out.push(KiersteadPath {
        vertices: vertices.clone(),
        colors: colors.clone(),
    });
    if vertices.len() == max_vertices {
        return;
    }
    let last = *vertices.last().unwrap();
    let g = coloring.graph().clone();
    for w in g.neighbors(last) {
        if vertices.contains(&w) {
            continue;
        }
        let Some(c) = coloring.edge_color(last, w) else {
            continue;
        };
        if !union_before_last.contains(c) {
            continue;
        }
        vertices.push(w);
        colors.push(c);
        let next_union =
            union_before_last.union(coloring.missing_colors(vertices[vertices.len() - 2]));
        extend_kierstead(coloring, vertices, colors, next_union, max_vertices, out);
        vertices.pop();
        colors.pop();
    }
}

/// All Kierstead paths starting with the uncolored edge in the given
/// orientation (v0, e, v1), from 2 up to `max_vertices` vertices, in DFS
/// order with ascending extensions.
pub fn enumerate_kierstead_paths(
    coloring: &Coloring,
    v0: usize,
    v1: usize,
    max_vertices: usize,
) -> Result<Vec<KiersteadPath>, String> {
    let g = coloring.graph();
    if !g.has_edge(v0, v1) {
        return Err(format!("no edge {v0}-{v1}"));
    }
    if coloring.edge_color(v0, v1).is_some() {
        return Err(format!("edge {v0}-{v1} is colored"));
    }
    if !(2..=5).contains(&max_vertices) {
        return Err(format!("max_vertices {max_vertices} outside 2..=5"));
    }
    let mut out = Vec::new();
    let mut vertices = vec![v0, v1];
    let mut colors = Vec::new();
    // when extending from v_1 the admissible colors come from missing(v_0)
    extend_kierstead(
        coloring,
        &mut vertices,
        &mut colors,
        coloring.missing_colors(v0),
        max_vertices,
        &mut out,
    );
    Ok(out)
}

/// Re-validates a Kierstead path: distinct vertices, first edge uncolored,
/// every later edge colored with a color missing at a strictly earlier
/// vertex.
pub fn kierstead_path_is_valid(coloring: &Coloring, path: &KiersteadPath) -> bool {
    let g = coloring.graph();
    let vs = &path.vertices;
    if vs.len() < 2 || path.colors.len() != vs.len() - 2 {
        return false;
    }
    let mut sorted = vs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vs.len() {
        return false;
    }
    if !g.has_edge(vs[0], vs[1]) || coloring.edge_color(vs[0], vs[1]).is_some() {
        return false;
    }
    for i in 1..vs.len() - 1 {
        let (a, b) = (vs[i], vs[i + 1]);
        let c = path.colors[i - 1];
        if !g.has_edge(a, b) || coloring.edge_color(a, b) != Some(c) {
            return false;
        }
        if !vs[..i]
            .iter()
            .any(|&v| coloring.missing_colors(v).contains(c))
        {
            return false;
        }
    }
    true
}

/// Broom enumeration scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BroomMode {
    All,
    Maximal,
}

impl std::str::FromStr for BroomMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(BroomMode::All),
            "maximal" => Ok(BroomMode::Maximal),
            other => Err(format!("unknown broom mode {other:?} (all|maximal)")),
        }
    }
}

/// All short brooms rooted at the uncolored edge x-y (in this orientation),
/// over every admissible handle vertex z, with p ≥ 1 bristles. In `All`
/// mode every admissible bristle sequence is yielded, so the output is
/// closed under prefixes; `Maximal` keeps only sequences with no admissible
/// extension at the same z. DFS with ascending candidates.
pub fn enumerate_short_brooms(
    coloring: &Coloring,
    x: usize,
    y: usize,
    mode: BroomMode,
) -> Result<Vec<ShortBroom>, String> {
    let g = coloring.graph().clone();
    if !g.has_edge(x, y) {
        return Err(format!("no edge {x}-{y}"));
    }
    if coloring.edge_color(x, y).is_some() {
        return Err(format!("edge {x}-{y} is colored"));
    }
    let missing_x = coloring.missing_colors(x);
    let missing_xy = missing_x.union(coloring.missing_colors(y));
    let mut out = Vec::new();
    for z in g.neighbors(y) {
        if z == x {
            continue;
        }
        let Some(handle_color) = coloring.edge_color(y, z) else {
            continue;
        };
        if !missing_x.contains(handle_color) {
            continue;
        }
        let mut bristles = Vec::new();
        let mut colors = Vec::new();
        let union0 = missing_xy.union(coloring.missing_colors(z));
        grow_bristles(
            coloring,
            (x, y, z, handle_color),
            union0,
            missing_xy,
            mode,
            &mut bristles,
            &mut colors,
            &mut out,
        );
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn grow_bristles(
    coloring: &Coloring,
    handle: (usize, usize, usize, usize),
    missing_union: ColorSet,
    missing_xy: ColorSet,
    mode: BroomMode,
    bristles: &mut Vec<usize>,
    colors: &mut Vec<usize>,
    out: &mut Vec<ShortBroom>,
) {
    let (x, y, z, handle_color) = handle;
    let g = coloring.graph().clone();
    let mut extended = false;
    for v in g.neighbors(z) {
        if v == x || v == y || bristles.contains(&v) {
            continue;
        }
        let Some(c) = coloring.edge_color(z, v) else {
            continue;
        };
        if !missing_union.contains(c) {
            continue;
        }
        extended = true;
        bristles.push(v);
        colors.push(c);
        let next_union = missing_union.union(coloring.missing_colors(v));
        grow_bristles(
            coloring,
            handle,
            next_union,
            missing_xy,
            mode,
            bristles,
            colors,
            out,
        );
        bristles.pop();
        colors.pop();
    }
    if bristles.is_empty() {
        return; // p ≥ 1
    }
    if mode == BroomMode::All || !extended {
        let simple = colors.iter().all(|&c| missing_xy.contains(c));
        out.push(ShortBroom {
            x,
            y,
            z,
            handle_color,
            bristles: bristles.clone(),
            bristle_colors: colors.clone(),
            simple,
        });
    }
}

/// Re-validates a short broom against its definition (and the handle
/// requirement φ(yz) missing at x).
pub fn broom_is_valid(coloring: &Coloring, broom: &ShortBroom) -> bool {
    let g = coloring.graph();
    let vs = broom.vertices();
    let mut sorted = vs.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vs.len() || broom.bristles.is_empty() {
        return false;
    }
    if broom.bristles.len() != broom.bristle_colors.len() {
        return false;
    }
    if !g.has_edge(broom.x, broom.y) || coloring.edge_color(broom.x, broom.y).is_some() {
        return false;
    }
    if !g.has_edge(broom.y, broom.z)
        || coloring.edge_color(broom.y, broom.z) != Some(broom.handle_color)
    {
        return false;
    }
    if !coloring
        .missing_colors(broom.x)
        .contains(broom.handle_color)
    {
        return false;
    }
    let mut earlier = vec![broom.x, broom.y, broom.z];
    for (&v, &c) in broom.bristles.iter().zip(&broom.bristle_colors) {
        if !g.has_edge(broom.z, v) || coloring.edge_color(broom.z, v) != Some(c) {
            return false;
        }
        if !earlier
            .iter()
            .any(|&w| coloring.missing_colors(w).contains(c))
        {
            return false;
        }
        earlier.push(v);
    }
    broom.simple == is_simple_broom(coloring, broom)
}

/// True iff every (x, xy, y, yz, z, zv_i, v_i) is a Kierstead path, which
/// for a valid broom reduces to every bristle color being missed at x or y.
pub fn is_simple_broom(coloring: &Coloring, broom: &ShortBroom) -> bool {
    let missing_xy = coloring
        .missing_colors(broom.x)
        .union(coloring.missing_colors(broom.y));
    broom
        .bristle_colors
        .iter()
        .all(|&c| missing_xy.contains(c))
}

/// Computes the per-color multiplicity profile and the inducing-chain
/// decomposition of a broom. The m-values depend only on the vertex set.
pub fn broom_profile(coloring: &Coloring, broom: &ShortBroom) -> BroomProfile {
    let k = coloring.k();
    let vs = broom.vertices();
    let mut m = vec![0usize; k];
    for c in 1..=k {
        let missed_at = vs
            .iter()
            .filter(|&&v| coloring.missing_colors(v).contains(c))
            .count();
        m[c - 1] = missed_at.saturating_sub(1);
    }
    let sum = m.iter().sum();
    let multi_missed = (1..=k).filter(|&c| m[c - 1] >= 1).collect();

    let missing_xy = coloring
        .missing_colors(broom.x)
        .union(coloring.missing_colors(broom.y));
    let mut chains: Vec<InducingChain> = Vec::with_capacity(broom.p());
    for (i, (&v, &c)) in broom
        .bristles
        .iter()
        .zip(&broom.bristle_colors)
        .enumerate()
    {
        let (parent, inducing_color) = if missing_xy.contains(c) {
            (BristleParent::Handle, c)
        } else {
            let j = (0..i)
                .find(|&j| coloring.missing_colors(broom.bristles[j]).contains(c))
                .expect("broom validity: color missed at an earlier vertex");
            (BristleParent::Bristle(j), chains[j].inducing_color)
        };
        chains.push(InducingChain {
            vertex: v,
            parent,
            inducing_color,
        });
    }
    BroomProfile {
        m,
        sum,
        multi_missed,
        chains,
    }
}

/// All forks anchored at the uncolored edge x-y (in this orientation):
/// ordered tuples (z, s1, s2, t1, t2) of distinct vertices with the six
/// required edges and the crosswise color/missing-set conditions, in
/// lexicographic tuple order.
pub fn find_forks(coloring: &Coloring, x: usize, y: usize) -> Result<Vec<Fork>, String> {
    let g = coloring.graph().clone();
    if !g.has_edge(x, y) {
        return Err(format!("no edge {x}-{y}"));
    }
    if coloring.edge_color(x, y).is_some() {
        return Err(format!("edge {x}-{y} is colored"));
    }
    let missing_x = coloring.missing_colors(x);
    let missing_xy = missing_x.union(coloring.missing_colors(y));
    let mut out = Vec::new();
    for z in g.neighbors(y) {
        if z == x {
            continue;
        }
        let Some(c_yz) = coloring.edge_color(y, z) else {
            continue;
        };
        if !missing_x.contains(c_yz) {
            continue;
        }
        // stems: neighbours s of z with φ(zs) in missing(x) ∪ missing(y)
        let stems: Vec<(usize, usize)> = g
            .neighbors(z)
            .filter(|&s| s != x && s != y)
            .filter_map(|s| {
                coloring
                    .edge_color(z, s)
                    .filter(|&c| missing_xy.contains(c))
                    .map(|c| (s, c))
            })
            .collect();
        for &(s1, c_zs1) in &stems {
            for &(s2, c_zs2) in &stems {
                if s1 == s2 {
                    continue;
                }
                for t1 in g.neighbors(s1) {
                    if [x, y, z, s1, s2].contains(&t1) {
                        continue;
                    }
                    let Some(c_s1t1) = coloring.edge_color(s1, t1) else {
                        continue;
                    };
                    if !missing_xy.contains(c_s1t1) {
                        continue;
                    }
                    for t2 in g.neighbors(s2) {
                        if [x, y, z, s1, s2, t1].contains(&t2) {
                            continue;
                        }
                        let Some(c_s2t2) = coloring.edge_color(s2, t2) else {
                            continue;
                        };
                        if !missing_xy.contains(c_s2t2)
                            || !coloring.missing_colors(t2).contains(c_s1t1)
                            || !coloring.missing_colors(t1).contains(c_s2t2)
                        {
                            continue;
                        }
                        out.push(Fork {
                            x,
                            y,
                            z,
                            s: [s1, s2],
                            t: [t1, t2],
                            colors: [c_yz, c_zs1, c_zs2, c_s1t1, c_s2t2],
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Re-validates a fork against its defining conditions.
pub fn fork_is_valid(coloring: &Coloring, fork: &Fork) -> bool {
    let g = coloring.graph();
    let vs = fork.vertices();
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 7 || vs.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let [x, y, z] = [fork.x, fork.y, fork.z];
    let [s1, s2] = fork.s;
    let [t1, t2] = fork.t;
    if !g.has_edge(x, y) || coloring.edge_color(x, y).is_some() {
        return false;
    }
    let edges = [(y, z), (z, s1), (z, s2), (s1, t1), (s2, t2)];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if !g.has_edge(a, b) || coloring.edge_color(a, b) != Some(fork.colors[i]) {
            return false;
        }
    }
    let missing_x = coloring.missing_colors(x);
    let missing_xy = missing_x.union(coloring.missing_colors(y));
    missing_x.contains(fork.colors[0])
        && missing_xy.contains(fork.colors[1])
        && missing_xy.contains(fork.colors[2])
        && missing_xy.contains(fork.colors[3])
        && coloring.missing_colors(t2).contains(fork.colors[3])
        && missing_xy.contains(fork.colors[4])
        && coloring.missing_colors(t1).contains(fork.colors[4])
}
