//! Partial proper edge colorings with k colors, per-vertex missing/present
//! color sets, elementary tests, and the Kempe-chain engine (two-color
//! components, endpoint swaps, swap sequences, linkage queries).
//!
//! Colors are 1-based integers in [1, k]. A coloring is bound to one immutable
//! graph; mutations are in place, and callers clone when branching.

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ColoringError {
    #[error("color {0} out of range [1, {1}]")]
    ColorOutOfRange(usize, usize),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("edge {0}-{1} not in graph")]
    NoSuchEdge(usize, usize),
    #[error("chain colors must differ (got {0} twice)")]
    EqualChainColors(usize),
    #[error("vertex {0} is interior to its ({1},{2})-component, swap endpoint is ambiguous")]
    InteriorSwap(usize, usize, usize),
    #[error("color {color} would conflict at vertex {at}")]
    ProprietyViolation { at: usize, color: usize },
    #[error("edge {0}-{1} is already colored")]
    AlreadyColored(usize, usize),
    #[error("edge {0}-{1} is uncolored")]
    Uncolored(usize, usize),
    #[error("recolor source mismatch on {0}-{1}: edge has {2}, statement says {3}")]
    RecolorMismatch(usize, usize, usize, usize),
    #[error("first sequence color {0} is present at vertex {1}")]
    SequenceStartPresent(usize, usize),
    #[error("vertices {0} and {1} are not ({2},{3})-linked")]
    NotLinked(usize, usize, usize, usize),
    #[error("chain is stale: {0}")]
    StaleChain(String),
    #[error("coloring text: {0}")]
    Text(String),
}

/// A set of colors from [1, k], backed by a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ColorSet(pub u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn contains(&self, c: usize) -> bool {
        c >= 1 && c <= 64 && self.0 >> (c - 1) & 1 == 1
    }

    pub fn insert(&mut self, c: usize) {
        debug_assert!((1..=64).contains(&c));
        self.0 |= 1 << (c - 1);
    }

    pub fn remove (&mut self, c: usize) {
        debug_assert!((1..=64).contains(&c));
        self.0 &= !(1 << (c - 1));
    }

    pub fn union(&self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Colors in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let c = mask.trailing_zeros() as usize + 1;
                mask &= mask - 1;
                Some(c)
            }
        })
    }

    pub fn min(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for ColorSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

/// Path or even cycle: the two shapes a two-color component can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Path,
    EvenCycle,
}

/// A maximal (or restricted-to-subpath) two-color alternating component.
///
/// For a path the vertex order runs end to end; for an even cycle it starts
/// at the smallest vertex and closes back to it implicitly. "Meets u before
/// v" is a positional comparison on `vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub alpha: usize,
    pub beta: usize,
    pub vertices: Vec<usize>,
    pub kind: ChainKind,
}

impl Chain {
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// True iff the chain meets `u` strictly before `v` in its vertex order.
    pub fn meets_before(&self, u: usize, v: usize) -> bool {
        match (self.position(u), self.position(v)) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            ChainKind::Path => self.vertices.len().saturating_sub(1),
            ChainKind::EvenCycle => self.vertices.len(),
        }
    }
}

/// One-edge update actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAction {
    Color(usize),
    Recolor(usize, usize),
    Uncolor,
}

/// A partial proper edge coloring of one graph with colors [1, k].
#[derive(Clone)]
pub struct Coloring {
    graph: Arc<Graph>,
    k: usize,
    /// n*n matrix, entry u*n+v; 0 = uncolored. Kept symmetric.
    color: Vec<u8>,
    /// Per-vertex mask of present colors.
    present: Vec<ColorSet>,
    colored: usize,
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring(k={}, {})", self.k, self.word_string())
    }
}

impl PartialEq for Coloring {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.graph == other.graph && self.color == other.color
    }
}

impl Eq for Coloring {}

impl Coloring {
    /// Fully uncolored coloring of `graph` with `k` colors.
    pub fn empty(graph: Arc<Graph>, k: usize) -> Coloring {
        assert!(k <= 64, "at most 64 colors supported");
        let n = graph.n();
        Coloring {
            graph,
            k,
            color: vec![0; n * n],
            present: vec![ColorSet::EMPTY; n],
            colored: 0,
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colored_edges(&self) -> usize {
        self.colored
    }

    /// True iff every edge of the graph is colored.
    pub fn is_total(&self) -> bool {
        self.colored == self.graph.m()
    }

    fn full_mask(&self) -> ColorSet {
        if self.k == 0 {
            ColorSet::EMPTY
        } else {
            ColorSet(u64::MAX >> (64 - self.k))
        }
    }

    fn idx(&self, u: usize, v: usize) -> usize {
        u * self.graph.n() + v
    }

    fn check_vertex(&self, v: usize) -> Result<(), ColoringError> {
        if v >= self.graph.n() {
            Err(ColoringError::VertexOutOfRange(v, self.graph.n()))
        } else {
            Ok(())
        }
    }

    fn check_color(&self, c: usize) -> Result<(), ColoringError> {
        if c == 0 || c > self.k {
            Err(ColoringError::ColorOutOfRange(c, self.k))
        } else {
            Ok(())
        }
    }

    fn check_edge(&self, u: usize, v: usize) -> Result<(), ColoringError> {
        if !self.graph.has_edge(u, v) {
            Err(ColoringError::NoSuchEdge(u.min(v), u.max(v)))
        } else {
            Ok(())
        }
    }

    /// Color of the edge u-v, or None if uncolored. Panics on non-edges.
    pub fn edge_color(&self, u: usize, v: usize) -> Option<usize> {
        assert!(self.graph.has_edge(u, v), "no edge {u}-{v}");
        match self.color[self.idx(u, v)] {
            0 => None,
            c => Some(c as usize),
        }
    }

    pub fn present_colors(&self, v: usize) -> ColorSet {
        assert!(v < self.graph.n());
        self.present[v]
    }

    pub fn missing_colors(&self, v: usize) -> ColorSet {
        assert!(v < self.graph.n());
        ColorSet(self.full_mask().0 & !self.present[v].0)
    }

    /// Union of missing sets over a vertex set.
    pub fn missing_union<I: IntoIterator<Item = usize>>(&self, vs: I) -> ColorSet {
        let mut s = ColorSet::EMPTY;
        for v in vs {
            s = s.union(self.missing_colors(v));
        }
        s
    }

    /// True iff the missing sets of `vs` are pairwise disjoint.
    pub fn is_elementary<I: IntoIterator<Item = usize>>(&self, vs: I) -> bool {
        let mut seen = ColorSet::EMPTY;
        for v in vs {
            let miss = self.missing_colors(v);
            if !seen.intersect(miss).is_empty() {
                return false;
            }
            seen = seen.union(miss);
        }
        true
    }

    /// Full propriety re-scan; the incremental updates keep this true, so it
    /// serves as a post-hoc check in tests and the script engine.
    pub fn is_proper(&self) -> bool {
        let n = self.graph.n();
        for v in 0..n {
            let mut seen = ColorSet::EMPTY;
            for w in self.graph.neighbors(v) {
                if let Some(c) = self.edge_color(v, w) {
                    if seen.contains(c) {
                        return false;
                    }
                    seen.insert(c);
                }
            }
            if seen != self.present[v] {
                return false;
            }
        }
        true
    }

    /// The neighbour reached from `v` along its incident edge colored `c`.
    pub fn colored_neighbor(&self, v: usize, c: usize) -> Option<usize> {
        self.graph
            .neighbors(v)
            .find(|&w| self.color[self.idx(v, w)] as usize == c)
    }

    fn set_raw(&mut self, u: usize, v: usize, c: u8) {
        let old = self.color[self.idx(u, v)];
        if old != 0 {
            self.present[u].remove(old as usize);
            self.present[v].remove(old as usize);
            self.colored -= 1;
        }
        let (iu, iv) = (self.idx(u, v), self.idx(v, u));
        self.color[iu] = c;
        self.color[iv] = c;
        if c != 0 {
            self.present[u].insert(c as usize);
            self.present[v].insert(c as usize);
            self.colored += 1;
        }
    }

    /// Colors the uncolored edge u-v with c, rejecting conflicts.
    pub fn color_edge(&mut self, u: usize, v: usize, c: usize) -> Result<(), ColoringError> {
        self.check_edge(u, v)?;
        self.check_color(c)?;
        if self.edge_color(u, v).is_some() {
            return Err(ColoringError::AlreadyColored(u.min(v), u.max(v)));
        }
        if self.present[u].contains(c) {
            return Err(ColoringError::ProprietyViolation { at: u, color: c });
        }
        if self.present[v].contains(c) {
            return Err(ColoringError::ProprietyViolation { at: v, color: c });
        }
        self.set_raw(u, v, c as u8);
        Ok(())
    }

    /// Recolors u-v from `from` to `to`; `from` must match the current color.
    pub fn recolor_edge(
        &mut self,
        u: usize,
        v: usize,
        from: usize,
        to: usize,
    ) -> Result<(), ColoringError> {
        self.check_edge(u, v)?;
        self.check_color(to)?;
        let cur = self
            .edge_color(u, v)
            .ok_or(ColoringError::Uncolored(u.min(v), u.max(v)))?;
        if cur != from {
            return Err(ColoringError::RecolorMismatch(
                u.min(v),
                u.max(v),
                cur,
                from,
            ));
        }
        if to == from {
            return Ok(());
        }
        if self.present[u].contains(to) {
            return Err(ColoringError::ProprietyViolation { at: u, color: to });
        }
        if self.present[v].contains(to) {
            return Err(ColoringError::ProprietyViolation { at: v, color: to });
        }
        self.set_raw(u, v, to as u8);
        Ok(())
    }

    /// Removes the color of u-v.
    pub fn uncolor_edge(&mut self, u: usize, v: usize) -> Result<(), ColoringError> {
        self.check_edge(u, v)?;
        if self.edge_color(u, v).is_none() {
            return Err(ColoringError::Uncolored(u.min(v), u.max(v)));
        }
        self.set_raw(u, v, 0);
        Ok(())
    }

    /// Single-edge update dispatch.
    pub fn set_edge_color(
        &mut self,
        u: usize,
        v: usize,
        action: EdgeAction,
    ) -> Result<(), ColoringError> {
        match action {
            EdgeAction::Color(c) => self.color_edge(u, v, c),
            EdgeAction::Recolor(from, to) => self.recolor_edge(u, v, from, to),
            EdgeAction::Uncolor => self.uncolor_edge(u, v),
        }
    }

    /// The maximal (α,β)-component containing `v`.
    ///
    /// A vertex missing both colors is a single-vertex path. Path vertex
    /// order starts at the smaller endpoint; a cycle starts at its smallest
    /// vertex and proceeds toward the smaller of that vertex's two chain
    /// neighbours.
    pub fn chain_component(
        &self,
        v: usize,
        alpha: usize,
        beta: usize,
    ) -> Result<Chain, ColoringError> {
        self.check_vertex(v)?;
        self.check_color(alpha)?;
        self.check_color(beta)?;
        if alpha == beta {
            return Err(ColoringError::EqualChainColors(alpha));
        }
        // walk away from `start` beginning with the edge to `first`; the
        // returned flag is true when the walk closed back onto `start`
        let walk = |start: usize, first: usize| -> (Vec<usize>, bool) {
            let mut seq = vec![start, first];
            let (mut prev, mut cur) = (start, first);
            loop {
                let next = [alpha, beta]
                    .into_iter()
                    .filter_map(|c| self.colored_neighbor(cur, c))
                    .find(|&w| w != prev);
                match next {
                    Some(w) if w == start => return (seq, true),
                    Some(w) => {
                        seq.push(w);
                        prev = cur;
                        cur = w;
                    }
                    None => return (seq, false),
                }
            }
        };
        let a = self.colored_neighbor(v, alpha);
        let b = self.colored_neighbor(v, beta);
        let chain = match (a, b) {
            (None, None) => Chain {
                alpha,
                beta,
                vertices: vec![v],
                kind: ChainKind::Path,
            },
            (Some(w), None) | (None, Some(w)) => {
                let (mut verts, closed) = walk(v, w);
                debug_assert!(!closed, "degree-1 chain vertex cannot close a cycle");
                if verts.first() > verts.last() {
                    verts.reverse();
                }
                Chain {
                    alpha,
                    beta,
                    vertices: verts,
                    kind: ChainKind::Path,
                }
            }
            (Some(wa), Some(wb)) => {
                let (right, closed) = walk(v, wa);
                if closed {
                    debug_assert!(right.len() % 2 == 0, "two-color cycles are even");
                    let mut cyc = right;
                    self.normalize_cycle(&mut cyc);
                    Chain {
                        alpha,
                        beta,
                        vertices: cyc,
                        kind: ChainKind::EvenCycle,
                    }
                } else {
                    let (left, _) = walk(v, wb);
                    // stitch: reverse(left minus v) + v + right minus v
                    let mut verts: Vec<usize> = left[1..].iter().rev().copied().collect();
                    verts.push(v);
                    verts.extend_from_slice(&right[1..]);
                    if verts.first() > verts.last() {
                        verts.reverse();
                    }
                    Chain {
                        alpha,
                        beta,
                        vertices: verts,
                        kind: ChainKind::Path,
                    }
                }
            }
        };
        Ok(chain)
    }

    fn normalize_cycle(&self, cyc: &mut Vec<usize>) {
        let minpos = cyc
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        cyc.rotate_left(minpos);
        if cyc.len() > 2 && cyc[1] > cyc[cyc.len() - 1] {
            cyc[1..].reverse();
        }
    }

    /// True iff x and y lie in the same (α,β)-component.
    pub fn linked(
        &self,
        x: usize,
        y: usize,
        alpha: usize,
        beta: usize,
    ) -> Result<bool, ColoringError> {
        self.check_vertex(y)?;
        let chain = self.chain_component(x, alpha, beta)?;
        Ok(chain.position(y).is_some())
    }

    /// The subchain P_[x,y] of the (α,β)-component, ordered from x to y.
    pub fn subchain_between(
        &self,
        x: usize,
        y: usize,
        alpha: usize,
        beta: usize,
    ) -> Result<Chain, ColoringError> {
        self.check_vertex(y)?;
        let chain = self.chain_component(x, alpha, beta)?;
        let px = chain.position(x).expect("x is in its own component");
        let py = chain
            .position(y)
            .ok_or(ColoringError::NotLinked(x, y, alpha, beta))?;
        let vertices: Vec<usize> = match chain.kind {
            ChainKind::Path => {
                if px <= py {
                    chain.vertices[px..=py].to_vec()
                } else {
                    chain.vertices[py..=px].iter().rev().copied().collect()
                }
            }
            ChainKind::EvenCycle => {
                // two arcs exist; take the one walking forward from x
                let len = chain.vertices.len();
                let mut verts = Vec::new();
                let mut i = px;
                loop {
                    verts.push(chain.vertices[i]);
                    if i == py {
                        break;
                    }
                    i = (i + 1) % len;
                }
                verts
            }
        };
        Ok(Chain {
            alpha,
            beta,
            vertices,
            kind: ChainKind::Path,
        })
    }

    /// Exchanges α and β along P_x(α,β). `x` must be an endpoint of its
    /// component (miss at least one of the two colors); an (α,α)-swap is the
    /// identity by convention.
    pub fn swap_at(&mut self, x: usize, alpha: usize, beta: usize) -> Result<(), ColoringError> {
        self.check_vertex(x)?;
        self.check_color(alpha)?;
        self.check_color(beta)?;
        if alpha == beta {
            return Ok(());
        }
        let miss = self.missing_colors(x);
        if !miss.contains(alpha) && !miss.contains(beta) {
            return Err(ColoringError::InteriorSwap(x, alpha, beta));
        }
        let chain = self.chain_component(x, alpha, beta)?;
        debug_assert_eq!(chain.kind, ChainKind::Path);
        self.swap_chain_edges(&chain);
        Ok(())
    }

    /// Exchanges the two colors on every edge of the given component,
    /// covering the whole-cycle case that `swap_at` refuses. The chain must
    /// match the current coloring.
    pub fn swap_component(&mut self, chain: &Chain) -> Result<(), ColoringError> {
        self.validate_chain(chain)?;
        self.swap_chain_edges(chain);
        Ok(())
    }

    fn validate_chain(&self, chain: &Chain) -> Result<(), ColoringError> {
        let vs = &chain.vertices;
        if vs.is_empty() {
            return Err(ColoringError::StaleChain("empty chain".into()));
        }
        let pairs: Vec<(usize, usize)> = match chain.kind {
            ChainKind::Path => vs.windows(2).map(|w| (w[0], w[1])).collect(),
            ChainKind::EvenCycle => {
                if vs.len() % 2 != 0 {
                    return Err(ColoringError::StaleChain("odd cycle length".into()));
                }
                (0..vs.len())
                    .map(|i| (vs[i], vs[(i + 1) % vs.len()]))
                    .collect()
            }
        };
        for (u, v) in pairs {
            if !self.graph.has_edge(u, v) {
                return Err(ColoringError::StaleChain(format!("no edge {u}-{v}")));
            }
            match self.edge_color(u, v) {
                Some(c) if c == chain.alpha || c == chain.beta => {}
                other => {
                    return Err(ColoringError::StaleChain(format!(
                        "edge {u}-{v} has color {other:?}, expected {} or {}",
                        chain.alpha, chain.beta
                    )))
                }
            }
        }
        Ok(())
    }

    /// Exchanges the two colors on the chain's edges. Writes the raw matrix
    /// first and then rebuilds the present caches of the touched vertices:
    /// intermediate per-edge states duplicate colors at interior vertices, so
    /// the incremental cache update of `set_raw` does not apply here.
    fn swap_chain_edges(&mut self, chain: &Chain) {
        let vs = &chain.vertices;
        let count = chain.edge_count();
        for i in 0..count {
            let u = vs[i];
            let v = vs[(i + 1) % vs.len()];
            let c = self.edge_color(u, v).expect("chain edge colored");
            let swapped = if c == chain.alpha {
                chain.beta
            } else {
                chain.alpha
            };
            let (iu, iv) = (self.idx(u, v), self.idx(v, u));
            self.color[iu] = swapped as u8;
            self.color[iv] = swapped as u8;
        }
        for &v in vs {
            self.recompute_present(v);
        }
    }

    fn recompute_present(&mut self, v: usize) {
        let mut mask = self.graph.neighbor_mask(v);
        let mut s = ColorSet::EMPTY;
        while mask != 0 {
            let w = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            let c = self.color[self.idx(v, w)];
            if c != 0 {
                s.insert(c as usize);
            }
        }
        self.present[v] = s;
    }

    /// Swaps the colors on the subchain P_[a,b] only. The endpoints of a
    /// proper subchain may end up with two equal-colored edges, so global
    /// propriety is re-checked at `a` and `b`; violations abort before any
    /// change is kept.
    pub fn swap_subchain(
        &mut self,
        a: usize,
        b: usize,
        alpha: usize,
        beta: usize,
    ) -> Result<(), ColoringError> {
        let sub = self.subchain_between(a, b, alpha, beta)?;
        self.swap_chain_edges(&sub);
        for &end in &[a, b] {
            let mut seen = ColorSet::EMPTY;
            let mut conflict = None;
            for w in self.graph.neighbors(end).collect::<Vec<_>>() {
                if let Some(c) = self.edge_color(end, w) {
                    if seen.contains(c) {
                        conflict = Some(c);
                        break;
                    }
                    seen.insert(c);
                }
            }
            if let Some(c) = conflict {
                // roll back
                self.swap_chain_edges(&sub);
                return Err(ColoringError::ProprietyViolation { at: end, color: c });
            }
        }
        Ok(())
    }

    /// Applies the swap sequence [β₀, β₁, …, β_t] at `x`: t consecutive
    /// Kempe changes, the i-th exchanging (β_{i-1}, β_i) along the current
    /// P_x. Requires β₀ missing at x.
    pub fn swap_sequence(&mut self, x: usize, betas: &[usize]) -> Result<(), ColoringError> {
        self.check_vertex(x)?;
        let Some((&beta0, rest)) = betas.split_first() else {
            return Ok(());
        };
        self.check_color(beta0)?;
        if self.present_colors(x).contains(beta0) {
            return Err(ColoringError::SequenceStartPresent(beta0, x));
        }
        let mut prev = beta0;
        for &next in rest {
            self.swap_at(x, prev, next)?;
            prev = next;
        }
        Ok(())
    }

    /// Applies the color permutation `perm` (perm[c-1] is the image of c).
    pub fn permute_colors(&self, perm: &[usize]) -> Coloring {
        assert_eq!(perm.len(), self.k);
        let mut out = Coloring::empty(self.graph.clone(), self.k);
        for (u, v) in self.graph.edges() {
            if let Some(c) = self.edge_color(u, v) {
                out.set_raw(u, v, perm[c - 1] as u8);
            }
        }
        out
    }

    /// The colors of all edges in lexicographic edge order (0 = uncolored).
    pub fn color_word(&self) -> Vec<u8> {
        self.graph
            .edges()
            .into_iter()
            .map(|(u, v)| self.color[self.idx(u, v)])
            .collect()
    }

    fn word_string(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.color_word().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            if *c == 0 {
                s.push('-');
            } else {
                let _ = write!(s, "{c}");
            }
        }
        s
    }

    /// Relabels colors so that they first appear in increasing order along
    /// the edge-order color word: the lexicographically least member of the
    /// color-permutation orbit.
    pub fn canonical_colors(&self) -> Coloring {
        let mut perm = vec![0usize; self.k];
        let mut next = 1;
        for c in self.color_word() {
            if c != 0 && perm[c as usize - 1] == 0 {
                perm[c as usize - 1] = next;
                next += 1;
            }
        }
        for p in perm.iter_mut() {
            if *p == 0 {
                *p = next;
                next += 1;
            }
        }
        self.permute_colors(&perm)
    }

    /// Deterministic 64-bit FNV-1a over (k, color word), stable across runs
    /// and platforms; used by the script engine's step traces.
    pub fn stable_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        };
        eat(self.k as u8);
        for c in self.color_word() {
            eat(c);
        }
        h
    }

    /// Emits the coloring text format: first line `k <int>`, then one line
    /// `<u> <v> <color|->` per edge in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("k {}\n", self.k);
        for (u, v) in self.graph.edges() {
            match self.edge_color(u, v) {
                Some(c) => {
                    let _ = writeln!(out, "{u} {v} {c}");
                }
                None => {
                    let _ = writeln!(out, "{u} {v} -");
                }
            }
        }
        out
    }

    /// Parses the coloring text format against a graph. Lines may appear in
    /// any order; edges not mentioned stay uncolored; unknown or repeated
    /// edges and improper assignments are rejected.
    pub fn from_text(graph: Arc<Graph>, text: &str) -> Result<Coloring, ColoringError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| {
            ColoringError::Text("missing `k <int>` header line".into())
        })?;
        let k = header
            .strip_prefix("k")
            .map(str::trim)
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| ColoringError::Text(format!("bad header line: {header:?}")))?;
        if k > 64 {
            return Err(ColoringError::Text(format!("k = {k} too large (max 64)")));
        }
        let mut coloring = Coloring::empty(graph, k);
        let mut seen = std::collections::HashSet::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(ColoringError::Text(format!("bad edge line: {line:?}")));
            }
            let u: usize = fields[0]
                .parse()
                .map_err(|_| ColoringError::Text(format!("bad vertex: {:?}", fields[0])))?;
            let v: usize = fields[1]
                .parse()
                .map_err(|_| ColoringError::Text(format!("bad vertex: {:?}", fields[1])))?;
            coloring.check_edge(u, v)?;
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(ColoringError::Text(format!("repeated edge {u}-{v}")));
            }
            if fields[2] == "-" {
                continue;
            }
            let c: usize = fields[2]
                .parse()
                .map_err(|_| ColoringError::Text(format!("bad color: {:?}", fields[2])))?;
            coloring.color_edge(u, v, c)?;
        }
        Ok(coloring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K_3 on {x=0, y=1, z=2} with xy uncolored, xz↦1, yz↦2, k colors.
    fn k3_minus_xy(k: usize) -> Coloring {
        let g = Arc::new(Graph::complete(3));
        let mut c = Coloring::empty(g, k);
        c.color_edge(0, 2, 1).unwrap();
        c.color_edge(1, 2, 2).unwrap();
        c
    }

    /// C_5 with edge 0-1 uncolored: 12↦1, 23↦2, 34↦1, 40↦2, k=2.
    fn c5_minus_01() -> Coloring {
        let g = Arc::new(Graph::cycle(5));
        let mut c = Coloring::empty(g, 2);
        c.color_edge(1, 2, 1).unwrap();
        c.color_edge(2, 3, 2).unwrap();
        c.color_edge(3, 4, 1).unwrap();
        c.color_edge(4, 0, 2).unwrap();
        c
    }

    #[test]
    fn missing_sets_k3() {
        let c = k3_minus_xy(2);
        assert_eq!(c.missing_colors(0), ColorSet::from_iter([2]));
        assert_eq!(c.missing_colors(1), ColorSet::from_iter([1]));
        assert!(c.missing_colors(2).is_empty());
    }

    #[test]
    fn missing_sets_isolated_vertex() {
        let g = Arc::new(Graph::from_edges(1, &[]).unwrap());
        let c = Coloring::empty(g, 3);
        assert_eq!(c.missing_colors(0), ColorSet::from_iter([1, 2, 3]));
    }

    #[test]
    fn missing_sets_c5() {
        let c = c5_minus_01();
        assert_eq!(c.missing_colors(0), ColorSet::from_iter([1]));
        assert_eq!(c.missing_colors(1), ColorSet::from_iter([2]));
        assert!(c.missing_colors(2).is_empty());
    }

    #[test]
    fn propriety() {
        assert!(c5_minus_01().is_proper());
        let g = Arc::new(Graph::complete(3));
        let empty = Coloring::empty(g.clone(), 3);
        assert!(empty.is_proper());
        // all edges same color is rejected on construction
        let mut c = Coloring::empty(g, 1);
        c.color_edge(0, 1, 1).unwrap();
        assert!(matches!(
            c.color_edge(0, 2, 1),
            Err(ColoringError::ProprietyViolation { at: 0, color: 1 })
        ));
    }

    #[test]
    fn elementary_examples() {
        let c = k3_minus_xy(2);
        assert!(c.is_elementary([0, 1, 2]));
        let g = Arc::new(Graph::from_edges(2, &[]).unwrap());
        let iso = Coloring::empty(g, 1);
        assert!(!iso.is_elementary([0, 1])); // both miss color 1
        assert!(iso.is_elementary([0])); // singleton
    }

    #[test]
    fn chain_even_cycle() {
        let g = Arc::new(Graph::cycle(4));
        let mut c = Coloring::empty(g, 2);
        c.color_edge(0, 1, 1).unwrap();
        c.color_edge(1, 2, 2).unwrap();
        c.color_edge(2, 3, 1).unwrap();
        c.color_edge(3, 0, 2).unwrap();
        for v in 0..4 {
            let chain = c.chain_component(v, 1, 2).unwrap();
            assert_eq!(chain.kind, ChainKind::EvenCycle);
            assert_eq!(chain.edge_count(), 4);
            assert_eq!(chain.vertices[0], 0); // normalized start
        }
    }

    #[test]
    fn chain_path_abc() {
        let g = Arc::new(Graph::path(3));
        let mut c = Coloring::empty(g, 2);
        c.color_edge(0, 1, 1).unwrap();
        c.color_edge(1, 2, 2).unwrap();
        let chain = c.chain_component(0, 1, 2).unwrap();
        assert_eq!(chain.kind, ChainKind::Path);
        assert_eq!(chain.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn chain_k3_trace() {
        let c = k3_minus_xy(2);
        let chain = c.chain_component(0, 1, 2).unwrap();
        assert_eq!(chain.vertices, vec![0, 2, 1]);
        assert_eq!(chain.kind, ChainKind::Path);
        assert!(chain.meets_before(2, 1));
    }

    #[test]
    fn chain_single_vertex_when_both_missing() {
        let g = Arc::new(Graph::path(3));
        let c = Coloring::empty(g, 2);
        let chain = c.chain_component(1, 1, 2).unwrap();
        assert_eq!(chain.vertices, vec![1]);
        assert_eq!(chain.kind, ChainKind::Path);
    }

    #[test]
    fn chain_rejects_equal_colors() {
        let c = k3_minus_xy(2);
        assert!(matches!(
            c.chain_component(0, 1, 1),
            Err(ColoringError::EqualChainColors(1))
        ));
    }

    #[test]
    fn swap_at_k3() {
        let mut c = k3_minus_xy(2);
        c.swap_at(0, 1, 2).unwrap();
        assert_eq!(c.edge_color(0, 2), Some(2));
        assert_eq!(c.edge_color(1, 2), Some(1));
        assert_eq!(c.missing_colors(0), ColorSet::from_iter([1]));
        assert!(c.is_proper());
    }

    #[test]
    fn swap_identity_convention() {
        let mut c = k3_minus_xy(3);
        let before = c.clone();
        c.swap_at(0, 3, 3).unwrap();
        assert_eq!(c, before);
    }

    #[test]
    fn swap_is_involution() {
        let mut c = c5_minus_01();
        let before = c.clone();
        c.swap_at(0, 1, 2).unwrap();
        assert_ne!(c, before);
        c.swap_at(0, 1, 2).unwrap();
        assert_eq!(c, before);
    }

    #[test]
    fn swap_rejects_interior_vertex() {
        let c5 = c5_minus_01();
        // vertex 2 has both colors present
        let mut c = c5.clone();
        assert!(matches!(
            c.swap_at(2, 1, 2),
            Err(ColoringError::InteriorSwap(2, 1, 2))
        ));
    }

    #[test]
    fn swap_component_handles_cycles() {
        let g = Arc::new(Graph::cycle(4));
        let mut c = Coloring::empty(g, 2);
        c.color_edge(0, 1, 1).unwrap();
        c.color_edge(1, 2, 2).unwrap();
        c.color_edge(2, 3, 1).unwrap();
        c.color_edge(3, 0, 2).unwrap();
        let chain = c.chain_component(0, 1, 2).unwrap();
        c.swap_component(&chain).unwrap();
        assert_eq!(c.edge_color(0, 1), Some(2));
        assert_eq!(c.edge_color(1, 2), Some(1));
        assert!(c.is_proper());
        // stale chain rejected after the swap changed nothing structural
        let mut c2 = c.clone();
        c2.uncolor_edge(0, 1).unwrap();
        assert!(matches!(
            c2.swap_component(&chain),
            Err(ColoringError::StaleChain(_))
        ));
    }

    #[test]
    fn swap_sequence_rules() {
        let mut c = c5_minus_01();
        let before = c.clone();
        // [β, β] is the identity
        c.swap_sequence(0, &[1, 1]).unwrap();
        assert_eq!(c, before);
        // β₀ present at x is an error
        assert!(matches!(
            c.swap_sequence(0, &[2, 1]),
            Err(ColoringError::SequenceStartPresent(2, 0))
        ));
        // [1, 2] is a single (1,2)-swap at 0
        let mut c2 = c.clone();
        c2.swap_sequence(0, &[1, 2]).unwrap();
        let mut c3 = c.clone();
        c3.swap_at(0, 1, 2).unwrap();
        assert_eq!(c2, c3);
        assert!(c2.is_proper());
    }

    #[test]
    fn linked_and_subchain() {
        let c = k3_minus_xy(2);
        assert!(c.linked(0, 1, 1, 2).unwrap());
        assert!(c.linked(0, 0, 1, 2).unwrap());
        let sub = c.subchain_between(0, 0, 1, 2).unwrap();
        assert_eq!(sub.vertices, vec![0]);
        let sub = c.subchain_between(1, 2, 1, 2).unwrap();
        assert_eq!(sub.vertices, vec![1, 2]);
        let g = Arc::new(Graph::from_edges(2, &[]).unwrap());
        let iso = Coloring::empty(g, 2);
        assert!(!iso.linked(0, 1, 1, 2).unwrap());
        assert!(matches!(
            iso.subchain_between(0, 1, 1, 2),
            Err(ColoringError::NotLinked(0, 1, 1, 2))
        ));
    }

    #[test]
    fn swap_preserves_disjoint_components() {
        let g = Arc::new(Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap());
        let mut c = Coloring::empty(g, 2);
        c.color_edge(0, 1, 1).unwrap();
        c.color_edge(1, 2, 2).unwrap();
        c.color_edge(3, 4, 1).unwrap();
        c.color_edge(4, 5, 2).unwrap();
        let m5 = c.missing_colors(5);
        c.swap_at(0, 1, 2).unwrap();
        assert_eq!(c.missing_colors(5), m5);
        assert_eq!(c.edge_color(3, 4), Some(1));
        assert_eq!(c.edge_color(0, 1), Some(2));
    }

    #[test]
    fn set_edge_color_examples() {
        let mut c = k3_minus_xy(3);
        c.set_edge_color(0, 1, EdgeAction::Color(3)).unwrap();
        assert!(c.is_proper());
        assert!(c.is_total());

        let mut c = k3_minus_xy(3);
        assert!(matches!(
            c.set_edge_color(0, 1, EdgeAction::Color(1)),
            Err(ColoringError::ProprietyViolation { at: 0, color: 1 })
        ));

        // recolor yz: 2→1 after swapping xz to 2 keeps things proper
        let mut c = k3_minus_xy(3);
        c.swap_at(0, 1, 3).unwrap(); // now xz↦3
        c.set_edge_color(1, 2, EdgeAction::Recolor(2, 1)).unwrap();
        assert!(c.is_proper());

        let mut c = k3_minus_xy(3);
        assert!(matches!(
            c.set_edge_color(1, 2, EdgeAction::Recolor(1, 3)),
            Err(ColoringError::RecolorMismatch(1, 2, 2, 1))
        ));
        assert!(matches!(
            c.set_edge_color(0, 1, EdgeAction::Uncolor),
            Err(ColoringError::Uncolored(0, 1))
        ));
    }

    #[test]
    fn text_round_trip() {
        let c = c5_minus_01();
        let text = c.to_text();
        let back = Coloring::from_text(c.graph().clone(), &text).unwrap();
        assert_eq!(back, c);
        // order-insensitive
        let shuffled = "k 2\n4 0 2\n1 2 1\n3 4 1\n2 3 2\n0 1 -\n";
        let back = Coloring::from_text(c.graph().clone(), shuffled).unwrap();
        assert_eq!(back, c);
        // rejects unknown and repeated edges
        assert!(Coloring::from_text(c.graph().clone(), "k 2\n0 2 1\n").is_err());
        assert!(Coloring::from_text(c.graph().clone(), "k 2\n0 1 1\n1 0 2\n").is_err());
    }

    #[test]
    fn canonical_color_relabelling() {
        let c = c5_minus_01();
        let perm = c.permute_colors(&[2, 1]);
        assert_eq!(perm.canonical_colors(), c.canonical_colors());
        let canon = c.canonical_colors();
        // first colored edge in edge order gets color 1
        let word = canon.color_word();
        let first = word.iter().find(|&&w| w != 0).copied();
        assert_eq!(first, Some(1));
    }

    #[test]
    fn stable_hash_changes_with_colors() {
        let c = c5_minus_01();
        let mut c2 = c.clone();
        c2.swap_at(0, 1, 2).unwrap();
        assert_ne!(c.stable_hash(), c2.stable_hash());
    }
}
