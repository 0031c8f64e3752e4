//! Isomorph-free generation of all connected graphs on up to 9 vertices,
//! plus the independent brute-force oracles used by the acceptance
//! criteria. Generation augments the (n−1)-vertex corpus by one vertex in
//! every possible way (every connected graph has a non-cut vertex, so this
//! covers everything) and deduplicates by a canonical form: the
//! lexicographically least adjacency word over vertex orderings that
//! respect an iterated-refinement class order.

use std::collections::HashSet;
use std::sync::{Arc, Mutex, OnceLock};

use critgraph::graph::Graph;

/// Iterated neighbourhood refinement; returns a class rank per vertex.
/// Ranks are isomorphism-invariant (built from degrees and sorted
/// neighbour-rank multisets only).
fn refine(n: usize, adj: &[u64]) -> Vec<usize> {
    let mut rank: Vec<u64> = (0..n).map(|v| adj[v].count_ones() as u64).collect();
    let mut classes = {
        let mut distinct: Vec<u64> = rank.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    };
    loop {
        let mut sigs: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<u64> = (0..n)
                    .filter(|&w| adj[v] >> w & 1 == 1)
                    .map(|w| rank[w])
                    .collect();
                ns.sort_unstable();
                (rank[v], ns)
            })
            .collect();
        let mut sorted: Vec<(u64, Vec<u64>)> = sigs.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() == classes {
            break;
        }
        classes = sorted.len();
        for v in 0..n {
            let sig = std::mem::take(&mut sigs[v]);
            rank[v] = sorted.binary_search(&sig).unwrap() as u64;
        }
    }
    // densify to 0..k-1 in rank order
    let mut distinct: Vec<u64> = rank.clone();
    distinct.sort_unstable();
    distinct.dedup();
    rank.iter()
        .map(|r| distinct.binary_search(r).unwrap())
        .collect()
}

struct CanonSearch<'a> {
    n: usize,
    adj: &'a [u64],
    /// class rank required at each position
    position_class: Vec<usize>,
    class_of: Vec<usize>,
    placed: Vec<usize>,
    rows: Vec<u16>,
    best: Option<Vec<u16>>,
}

impl<'a> CanonSearch<'a> {
    fn run(n: usize, adj: &'a [u64]) -> Vec<u16> {
        let class_of = refine(n, adj);
        let nclasses = class_of.iter().copied().max().unwrap_or(0) + 1;
        let mut position_class = Vec::with_capacity(n);
        for c in 0..nclasses {
            for _ in 0..class_of.iter().filter(|&&x| x == c).count() {
                position_class.push(c);
            }
        }
        let mut search = CanonSearch {
            n,
            adj,
            position_class,
            class_of,
            placed: Vec::with_capacity(n),
            rows: Vec::with_capacity(n),
            best: None,
        };
        search.dfs();
        search.best.expect("at least one ordering")
    }

    fn dfs(&mut self) {
        let depth = self.placed.len();
        if let Some(best) = &self.best {
            // prune orderings whose row prefix already exceeds the best
            match self.rows[..].cmp(&best[..depth]) {
                std::cmp::Ordering::Greater => return,
                std::cmp::Ordering::Less | std::cmp::Ordering::Equal => {}
            }
        }
        if depth == self.n {
            self.best = Some(self.rows.clone());
            return;
        }
        let klass = self.position_class[depth];
        let mut cands: Vec<(u16, usize)> = (0..self.n)
            .filter(|&v| self.class_of[v] == klass && !self.placed.contains(&v))
            .map(|v| {
                let mut row = 0u16;
                for (j, &p) in self.placed.iter().enumerate() {
                    row |= (((self.adj[v] >> p) & 1) as u16) << (depth - 1 - j);
                }
                (row, v)
            })
            .collect();
        cands.sort_unstable();
        for (row, v) in cands {
            self.rows.push(row);
            self.placed.push(v);
            self.dfs();
            self.rows.pop();
            self.placed.pop();
        }
    }
}

/// The canonical graph6 line of (n, adj): the minimal adjacency word,
/// re-encoded. Isomorphic graphs map to the same line.
pub fn canonical_graph6(n: usize, adj: &[u64]) -> String {
    if n == 0 {
        return "?".to_string();
    }
    let rows = CanonSearch::run(n, adj);
    let mut out = String::new();
    out.push((63 + n as u8) as char);
    let mut acc = 0u8;
    let mut used = 0;
    for (j, row) in rows.iter().enumerate().skip(1) {
        for i in 0..j {
            let bit = (row >> (j - 1 - i) & 1) as u8;
            acc = acc << 1 | bit;
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

fn adjacency_of(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbor_mask(v)).collect()
}

/// All connected graphs on exactly `n` vertices, up to isomorphism, as
/// sorted canonical graph6 lines. Cached per n; supported up to n = 9.
pub fn connected_graphs(n: usize) -> &'static Vec<String> {
    static CACHE: OnceLock<Vec<OnceLock<Vec<String>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..=9).map(|_| OnceLock::new()).collect());
    assert!((1..=9).contains(&n), "corpus supported for 1 ≤ n ≤ 9");
    cache[n].get_or_init(|| {
        if n == 1 {
            return vec!["@".to_string()];
        }
        let parents = connected_graphs(n - 1);
        let new = n - 1;
        let results: Mutex<HashSet<String>> = Mutex::new(HashSet::new());
        let next_parent = std::sync::atomic::AtomicUsize::new(0);
        let workers = std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(4)
            .min(8);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut local: Vec<String> = Vec::new();
                    loop {
                        let idx =
                            next_parent.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if idx >= parents.len() {
                            break;
                        }
                        let parent = Graph::from_graph6(&parents[idx]).unwrap();
                        let mut adj = adjacency_of(&parent);
                        adj.push(0);
                        for subset in 1u64..(1 << new) {
                            for (v, a) in adj.iter_mut().enumerate().take(new) {
                                if subset >> v & 1 == 1 {
                                    *a |= 1 << new;
                                } else {
                                    *a &= !(1 << new);
                                }
                            }
                            adj[new] = subset;
                            local.push(canonical_graph6(n, &adj));
                        }
                        if local.len() > 8192 {
                            results.lock().unwrap().extend(local.drain(..));
                        }
                    }
                    results.lock().unwrap().extend(local);
                });
            }
        });
        let mut lines: Vec<String> = results.into_inner().unwrap().into_iter().collect();
        lines.sort_unstable();
        lines
    })
}

// ---------------------------------------------------------------------------
// independent oracles (plain exhaustive assignment, no library pruning)

/// Exhaustive backtracking over edges in lexicographic order; candidate
/// colors are those unused at either endpoint, nothing more.
pub fn oracle_feasible(g: &Graph, k: usize) -> bool {
    fn bt(edges: &[(usize, usize)], k: usize, i: usize, used: &mut [u64]) -> bool {
        if i == edges.len() {
            return true;
        }
        let (u, v) = edges[i];
        let free = !(used[u] | used[v]) & ((1u64 << k) - 1);
        let mut mask = free;
        while mask != 0 {
            let c = mask.trailing_zeros() as u64;
            mask &= mask - 1;
            used[u] |= 1 << c;
            used[v] |= 1 << c;
            if bt(edges, k, i + 1, used) {
                return true;
            }
            used[u] &= !(1 << c);
            used[v] &= !(1 << c);
        }
        false
    }
    if k == 0 {
        return g.m() == 0;
    }
    bt(&g.edges(), k, 0, &mut vec![0u64; g.n()])
}

/// The oracle chromatic index: try k = Δ, then k = Δ+1.
pub fn oracle_chromatic_index(g: &Graph) -> usize {
    if g.m() == 0 {
        return 0;
    }
    let delta = g.max_degree();
    if oracle_feasible(g, delta) {
        delta
    } else {
        assert!(oracle_feasible(g, delta + 1), "upper bound violated");
        delta + 1
    }
}

/// Independent definition re-check of Δ-criticality: connected, the oracle
/// says class 2, and the oracle says every single-edge deletion is
/// Δ(G)-colorable.
pub fn oracle_is_delta_critical(g: &Graph) -> bool {
    if g.m() == 0 || !g.is_connected() {
        return false;
    }
    let delta = g.max_degree();
    if oracle_feasible(g, delta) {
        return false;
    }
    g.edges()
        .into_iter()
        .all(|(u, v)| oracle_feasible(&g.delete_edge(u, v).unwrap(), delta))
}

/// Simple deterministic parallel map preserving input order.
pub fn parallel_map<T, F>(items: &[String], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&str) -> T + Sync,
{
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(4)
        .min(8);
    let results: Mutex<Vec<Option<T>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let value = f(&items[idx]);
                results.lock().unwrap()[idx] = Some(value);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|v| v.expect("worker filled every slot"))
        .collect()
}

/// The Δ-critical members of the connected corpus on exactly n vertices
/// (decided by the library), cached.
pub fn delta_critical_graphs(n: usize) -> &'static Vec<String> {
    static CACHE: OnceLock<Vec<OnceLock<Vec<String>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..=9).map(|_| OnceLock::new()).collect());
    cache[n].get_or_init(|| {
        let lines = connected_graphs(n);
        let flags = parallel_map(lines, |line| {
            let g = Arc::new(Graph::from_graph6(line).unwrap());
            critgraph::is_delta_critical(&g)
        });
        lines
            .iter()
            .zip(flags)
            .filter(|(_, keep)| *keep)
            .map(|(line, _)| line.clone())
            .collect()
    })
}

/// Canonical line of a constructor-built graph, for catalog membership
/// queries against the corpus.
pub fn canon_of(g: &Graph) -> String {
    canonical_graph6(g.n(), &adjacency_of(g))
}
