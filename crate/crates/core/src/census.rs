//! Exact counts of k-matchings and of small path/cycle patterns.
//!
//! Two independent counters live here. [`count_pattern`] places the pattern's
//! components one at a time and divides out the symmetry overcount;
//! [`brute_force_oracle`] walks every edge subset of the right size and reads
//! off its component shapes. They share no code beyond the graph itself.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::plane_graph::EmbeddedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("pattern {pattern}: {total} ordered placements not divisible by symmetry factor {factor}")]
    InexactDivision { pattern: String, total: u64, factor: u64 },
    #[error("pattern {pattern}: count overflowed 64 bits")]
    Overflow { pattern: String },
}

/// One connected piece of a pattern, measured in edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    Path(usize),
    Cycle(usize),
}

impl Component {
    pub fn edges(self) -> usize {
        match self {
            Component::Path(e) | Component::Cycle(e) => e,
        }
    }

    pub fn vertices(self) -> usize {
        match self {
            Component::Path(e) => e + 1,
            Component::Cycle(e) => e,
        }
    }

    fn automorphisms(self) -> u64 {
        match self {
            Component::Path(_) => 2,
            Component::Cycle(e) => 2 * e as u64,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Path(1) => f.write_str("edge"),
            Component::Path(e) => write!(f, "path({e})"),
            Component::Cycle(e) => write!(f, "cycle({e})"),
        }
    }
}

/// A small subgraph given as a multiset of paths and cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub name: String,
    /// Components in descending order.
    pub components: Vec<Component>,
}

/// Names of the seventeen catalogued patterns, in catalogue order.
pub const PATTERN_NAMES: [&str; 17] =
    ["C", "D", "E", "H", "I", "J", "K", "L", "O", "P", "Q", "R", "S", "T", "U", "V", "W"];

impl Pattern {
    pub fn new(name: impl Into<String>, mut components: Vec<Component>) -> Self {
        components.sort_unstable_by(|a, b| b.cmp(a));
        Pattern { name: name.into(), components }
    }

    /// The pattern "k pairwise disjoint edges".
    pub fn matching(k: usize) -> Self {
        Pattern::new(format!("M{k}"), vec![Component::Path(1); k])
    }

    /// Looks up one of the catalogued patterns by its single-letter name.
    pub fn by_name(name: &str) -> Option<Self> {
        use Component::{Cycle, Path};
        let edge = Path(1);
        let components = match name {
            "C" => vec![Path(3)],
            "D" => vec![Path(2), edge, edge],
            "E" => vec![Path(3), edge],
            "H" => vec![Cycle(4)],
            "I" => vec![Path(4)],
            "J" => vec![Path(2), edge, edge, edge],
            "K" => vec![Path(3), edge, edge],
            "L" => vec![Cycle(4), edge],
            "O" => vec![Path(4), edge],
            "P" => vec![Path(5)],
            "Q" => vec![Path(5), edge],
            "R" => vec![Path(2), edge, edge, edge, edge],
            "S" => vec![Path(3), edge, edge, edge],
            "T" => vec![Cycle(4), edge, edge],
            "U" => vec![Path(4), edge, edge],
            "V" => vec![Cycle(4), Path(2)],
            "W" => vec![Path(2), Path(2), edge],
            _ => return None,
        };
        Some(Pattern::new(name, components))
    }

    pub fn catalog() -> Vec<Pattern> {
        PATTERN_NAMES.iter().map(|n| Pattern::by_name(n).expect("catalogued")).collect()
    }

    pub fn edge_total(&self) -> usize {
        self.components.iter().map(|c| c.edges()).sum()
    }

    pub fn vertex_total(&self) -> usize {
        self.components.iter().map(|c| c.vertices()).sum()
    }

    /// Order of the pattern's automorphism group.
    pub fn automorphism_count(&self) -> u64 {
        let own: u64 = self.components.iter().map(|c| c.automorphisms()).product();
        own * self.runs().map(factorial).product::<u64>()
    }

    // Lengths of runs of identical components.
    fn runs(&self) -> impl Iterator<Item = usize> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            if i >= self.components.len() {
                return None;
            }
            let start = i;
            while i < self.components.len() && self.components[i] == self.components[start] {
                i += 1;
            }
            Some(i - start)
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{} = {}", self.name, parts.join(" + "))
    }
}

fn factorial(r: usize) -> u64 {
    (1..=r as u64).product()
}

/// Number of k-matchings, by backtracking over edges in index order.
pub fn count_matchings(g: &EmbeddedGraph, k: usize) -> u64 {
    let mut used = vec![false; g.vertex_count()];
    disjoint_edges(g, &mut used, k, 0)
}

// Ways to choose `k` disjoint edges with index >= `from`, avoiding `used`.
fn disjoint_edges(g: &EmbeddedGraph, used: &mut [bool], k: usize, from: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    let edges = g.edges();
    if k == 1 {
        return edges[from..].iter().filter(|&&(u, v)| !used[u] && !used[v]).count() as u64;
    }
    let mut total = 0;
    for (i, &(u, v)) in edges.iter().enumerate().skip(from) {
        if used[u] || used[v] {
            continue;
        }
        used[u] = true;
        used[v] = true;
        total += disjoint_edges(g, used, k - 1, i + 1);
        used[u] = false;
        used[v] = false;
    }
    total
}

/// Number of subgraphs of `g` isomorphic to `p` (edge subsets, not induced).
///
/// Paths and cycles are placed as vertex sequences, which counts each one
/// once per symmetry; single edges are chosen in index order and need no
/// correction. The overcount is divided out and must divide exactly.
pub fn count_pattern(g: &EmbeddedGraph, p: &Pattern) -> Result<u64, CensusError> {
    if p.vertex_total() > g.vertex_count() {
        return Ok(0);
    }
    let (shaped, edges): (Vec<Component>, Vec<Component>) =
        p.components.iter().partition(|&&c| c != Component::Path(1));
    let edge_automorphisms = (1u64 << edges.len()) * factorial(edges.len());
    let factor = p.automorphism_count() / edge_automorphisms;

    let mut placer = Placer { g, used: vec![false; g.vertex_count()], seq: Vec::with_capacity(6), overflow: false };
    let total = placer.place(&shaped, edges.len());
    if placer.overflow {
        return Err(CensusError::Overflow { pattern: p.name.clone() });
    }
    if !total.is_multiple_of(factor) {
        return Err(CensusError::InexactDivision { pattern: p.name.clone(), total, factor });
    }
    Ok(total / factor)
}

struct Placer<'a> {
    g: &'a EmbeddedGraph,
    used: Vec<bool>,
    seq: Vec<usize>,
    overflow: bool,
}

impl Placer<'_> {
    fn place(&mut self, rest: &[Component], single_edges: usize) -> u64 {
        let Some((&first, rest)) = rest.split_first() else {
            return disjoint_edges(self.g, &mut self.used, single_edges, 0);
        };
        let mut total = 0u64;
        for start in 0..self.g.vertex_count() {
            if self.used[start] {
                continue;
            }
            self.used[start] = true;
            self.seq.push(start);
            let sub = self.grow(first, rest, single_edges);
            total = total.checked_add(sub).unwrap_or_else(|| {
                self.overflow = true;
                0
            });
            self.seq.pop();
            self.used[start] = false;
        }
        total
    }

    // Extends the current vertex sequence until `shape` is complete, then
    // places the remaining components.
    fn grow(&mut self, shape: Component, rest: &[Component], single_edges: usize) -> u64 {
        let target = shape.vertices();
        let last = *self.seq.last().expect("seeded");
        if self.seq.len() == target {
            if let Component::Cycle(_) = shape {
                if !self.g.is_edge(last, self.seq[0]) {
                    return 0;
                }
            }
            let saved = std::mem::take(&mut self.seq);
            let count = self.place(rest, single_edges);
            self.seq = saved;
            return count;
        }
        let mut total = 0u64;
        for &v in self.g.neighbors(last) {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.seq.push(v);
            total = total.checked_add(self.grow(shape, rest, single_edges)).unwrap_or_else(|| {
                self.overflow = true;
                0
            });
            self.seq.pop();
            self.used[v] = false;
        }
        total
    }
}

/// Canonical shape of an edge set: sorted component codes, zero padded.
///
/// A code is `2 * edges + 1` for a path and `2 * edges + 2` for a cycle;
/// anything else (a vertex of degree three, say) is recorded as `u8::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeKey([u8; 6]);

impl ShapeKey {
    pub fn of(p: &Pattern) -> ShapeKey {
        let mut codes = [0u8; 6];
        for (slot, c) in codes.iter_mut().zip(&p.components) {
            *slot = match *c {
                Component::Path(e) => 2 * e as u8 + 1,
                Component::Cycle(e) => 2 * e as u8 + 2,
            };
        }
        codes.sort_unstable_by(|a, b| b.cmp(a));
        ShapeKey(codes)
    }
}

/// Tallies the shape of every `size`-edge subset of `g`.
pub fn brute_force_census(g: &EmbeddedGraph, size: usize) -> BTreeMap<ShapeKey, u64> {
    assert!((1..=6).contains(&size), "edge subsets of size 1..=6 only");
    let edges = g.edges();
    let mut tally = BTreeMap::new();
    let mut pick = vec![0usize; size];
    let m = edges.len();
    if size > m {
        return tally;
    }
    for (i, slot) in pick.iter_mut().enumerate() {
        *slot = i;
    }
    let mut chosen = [(0usize, 0usize); 6];
    loop {
        for (slot, &i) in chosen.iter_mut().zip(&pick) {
            *slot = edges[i];
        }
        *tally.entry(shape_of(&chosen[..size])).or_insert(0) += 1;

        // Next combination in lexicographic order.
        let mut i = size;
        while i > 0 && pick[i - 1] == m - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..size {
            pick[j] = pick[j - 1] + 1;
        }
    }
    tally
}

fn shape_of(edges: &[(usize, usize)]) -> ShapeKey {
    let mut verts = [usize::MAX; 12];
    let mut nverts = 0;
    let mut local = |v: usize, verts: &mut [usize; 12]| -> usize {
        match verts[..nverts].iter().position(|&w| w == v) {
            Some(i) => i,
            None => {
                verts[nverts] = v;
                nverts += 1;
                nverts - 1
            }
        }
    };
    let mut ends = [(0usize, 0usize); 6];
    for (slot, &(u, v)) in ends.iter_mut().zip(edges) {
        *slot = (local(u, &mut verts), local(v, &mut verts));
    }
    let ends = &ends[..edges.len()];

    let mut parent = [0usize; 12];
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i;
    }
    fn root(parent: &mut [usize; 12], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut degree = [0u8; 12];
    for &(a, b) in ends {
        degree[a] += 1;
        degree[b] += 1;
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        parent[ra] = rb;
    }

    // Per component root: vertices, edges, max degree.
    let mut comp_v = [0u8; 12];
    let mut comp_e = [0u8; 12];
    let mut comp_max = [0u8; 12];
    for (x, &d) in degree.iter().enumerate().take(nverts) {
        let r = root(&mut parent, x);
        comp_v[r] += 1;
        comp_max[r] = comp_max[r].max(d);
    }
    for &(a, _) in ends {
        let r = root(&mut parent, a);
        comp_e[r] += 1;
    }
    let mut codes = [0u8; 6];
    let mut n = 0;
    for r in 0..nverts {
        if comp_v[r] == 0 {
            continue;
        }
        let (v, e, d) = (comp_v[r], comp_e[r], comp_max[r]);
        codes[n] = if d <= 2 && e + 1 == v {
            2 * e + 1
        } else if d == 2 && e == v {
            2 * e + 2
        } else {
            u8::MAX
        };
        n += 1;
    }
    codes.sort_unstable_by(|a, b| b.cmp(a));
    ShapeKey(codes)
}

/// Counts occurrences of `p` by testing every edge subset of its size.
pub fn brute_force_oracle(g: &EmbeddedGraph, p: &Pattern) -> u64 {
    let size = p.edge_total();
    if size > g.edge_count() {
        return 0;
    }
    brute_force_census(g, size).get(&ShapeKey::of(p)).copied().unwrap_or(0)
}

/// Oracle counts for many patterns, one subset sweep per edge total.
pub fn brute_force_counts(g: &EmbeddedGraph, patterns: &[Pattern]) -> BTreeMap<String, u64> {
    let mut sweeps: BTreeMap<usize, BTreeMap<ShapeKey, u64>> = BTreeMap::new();
    patterns
        .iter()
        .map(|p| {
            let size = p.edge_total();
            let tally = sweeps.entry(size).or_insert_with(|| {
                if size > g.edge_count() {
                    BTreeMap::new()
                } else {
                    brute_force_census(g, size)
                }
            });
            (p.name.clone(), tally.get(&ShapeKey::of(p)).copied().unwrap_or(0))
        })
        .collect()
}

/// All brute-force counts for one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CountLedger {
    /// `k -> M(G, k)`.
    pub matchings: BTreeMap<usize, u64>,
    /// Pattern name -> `N(X)`.
    pub patterns: BTreeMap<String, u64>,
}

impl CountLedger {
    /// Counts matchings for `k = 1..=6` and every catalogued pattern.
    pub fn collect(g: &EmbeddedGraph) -> Result<Self, CensusError> {
        let mut ledger = CountLedger::default();
        for k in 1..=6 {
            ledger.matchings.insert(k, count_matchings(g, k));
        }
        for p in Pattern::catalog() {
            let count = count_pattern(g, &p)?;
            ledger.patterns.insert(p.name, count);
        }
        Ok(ledger)
    }

    pub fn matching(&self, k: usize) -> Option<u64> {
        self.matchings.get(&k).copied()
    }

    pub fn pattern(&self, name: &str) -> Option<u64> {
        self.patterns.get(name).copied()
    }
}
