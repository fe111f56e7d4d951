#![allow(dead_code)]

use cohortcut::rng::rng_from_seed;
use cohortcut::{EdgeTag, Graph};
use rand::Rng;

/// Erdos-Renyi graph with every pair drawn independently at `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, EdgeTag::Class));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Cut size counted straight from the edge list.
pub fn count_cut(g: &Graph, labels: &[bool]) -> u64 {
    g.edges().filter(|&(u, v, _)| labels[u] != labels[v]).count() as u64
}

pub fn labels_of(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Largest cut over all 2^n labelings.
pub fn brute_force_max_cut(g: &Graph) -> u64 {
    let n = g.node_count();
    assert!(n <= 20, "brute force oracle is for small graphs");
    (0..1u64 << n)
        .map(|mask| count_cut(g, &labels_of(mask, n)))
        .max()
        .unwrap_or(0)
}
