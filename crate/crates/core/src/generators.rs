//! Seeded random graph and point-cloud fixtures.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Connected undirected graph: a random recursive tree plus each remaining
/// pair with probability `extra`, weights uniform in `[w_lo, w_hi)`.
pub fn random_connected(n: usize, extra: f64, (w_lo, w_hi): (f64, f64), seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut present = std::collections::HashSet::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        present.insert((j, i));
        rows.push((j, i, rng.random_range(w_lo..w_hi)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !present.contains(&(i, j)) && rng.random_bool(extra) {
                rows.push((i, j, rng.random_range(w_lo..w_hi)));
            }
        }
    }
    Graph::from_edge_list(&rows, n, false).expect("generated edges are valid")
}

/// Random recursive tree with unit weights.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<_> = (1..n).map(|i| (rng.random_range(0..i), i, 1.0)).collect();
    Graph::from_edge_list(&rows, n, false).expect("generated edges are valid")
}

/// Sparse undirected graph where every node links to `per_node` distinct
/// random others (average degree close to `2 per_node`), unit weights.
pub fn random_sparse(n: usize, per_node: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n * per_node);
    for i in 0..n {
        for j in sample(&mut rng, n - 1, per_node.min(n - 1)) {
            let j = if j >= i { j + 1 } else { j };
            pairs.push((i.min(j), i.max(j)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let rows: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
    Graph::from_edge_list(&rows, n, false).expect("generated edges are valid")
}

/// `n` points uniform in the unit cube of dimension `dim`.
pub fn random_points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect()
}
