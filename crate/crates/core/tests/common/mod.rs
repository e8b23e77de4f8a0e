#![allow(dead_code)]

use fullerene46::census::Pattern;
use fullerene46::generators::{default_corpus, generate, GraphKind};
use fullerene46::EmbeddedGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn corpus() -> Vec<(GraphKind, EmbeddedGraph)> {
    default_corpus().into_iter().map(|k| (k, generate(k))).collect()
}

/// `count` random relabellings of `g`, reproducible from `seed`.
pub fn relabellings(g: &EmbeddedGraph, seed: u64, count: usize) -> Vec<EmbeddedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
            perm.shuffle(&mut rng);
            g.relabel(&perm)
        })
        .collect()
}

/// Perfect matchings by pairing the lowest unmatched vertex each step.
pub fn perfect_matchings(g: &EmbeddedGraph) -> u64 {
    fn go(g: &EmbeddedGraph, used: &mut Vec<bool>) -> u64 {
        let Some(v) = used.iter().position(|&u| !u) else { return 1 };
        used[v] = true;
        let mut total = 0;
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                total += go(g, used);
                used[w] = false;
            }
        }
        used[v] = false;
        total
    }
    go(g, &mut vec![false; g.vertex_count()])
}

/// Matchings of orders 1 to 6 followed by the whole catalog.
pub fn all_patterns() -> Vec<Pattern> {
    let mut all: Vec<Pattern> = (1..=6).map(Pattern::matching).collect();
    all.extend(Pattern::catalog());
    all
}
