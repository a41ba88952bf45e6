//! Weighted graphs and their constructors.
//!
//! A [`Graph`] is immutable once built. Undirected graphs store each edge in
//! both directions so that every consumer can treat the edge list uniformly.

use crate::error::{GspError, Result};

/// Tolerance for matching the two directions of an undirected edge.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    directed: bool,
    /// Sorted by `(src, dst)`, no duplicates.
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from `(src, dst, weight)` rows.
    ///
    /// Undirected rows may be given once or in both directions; when both
    /// directions are present their weights must agree.
    pub fn from_edge_list(rows: &[(usize, usize, f64)], n: usize, directed: bool) -> Result<Graph> {
        if n == 0 {
            return Err(GspError::TooSmall { min: 1, got: 0 });
        }
        let mut edges = Vec::with_capacity(if directed { rows.len() } else { 2 * rows.len() });
        for &(src, dst, weight) in rows {
            for index in [src, dst] {
                if index >= n {
                    return Err(GspError::IndexOutOfRange { index, n });
                }
            }
            if src == dst {
                return Err(GspError::SelfLoop(src));
            }
            if !weight.is_finite() {
                return Err(GspError::NonFiniteWeight { src, dst });
            }
            if !directed && weight < 0.0 {
                return Err(GspError::NegativeWeight { src, dst, weight });
            }
            edges.push(Edge { src, dst, weight });
        }

        if directed {
            edges.sort_by_key(|e| (e.src, e.dst));
            if let Some(w) = edges.windows(2).find(|w| (w[0].src, w[0].dst) == (w[1].src, w[1].dst)) {
                return Err(GspError::DuplicateEdge { src: w[0].src, dst: w[0].dst });
            }
            return Ok(Graph { n, directed, edges });
        }

        // Undirected: canonicalize to (min, max), then merge the two directions.
        let mut canon: Vec<(usize, usize, f64, bool)> = edges
            .iter()
            .map(|e| (e.src.min(e.dst), e.src.max(e.dst), e.weight, e.src < e.dst))
            .collect();
        canon.sort_by(|a, b| (a.0, a.1, !a.3).cmp(&(b.0, b.1, !b.3)));
        let mut merged: Vec<Edge> = Vec::with_capacity(2 * canon.len());
        let mut i = 0;
        while i < canon.len() {
            let (lo, hi, w, forward) = canon[i];
            let mut j = i + 1;
            if j < canon.len() && (canon[j].0, canon[j].1) == (lo, hi) {
                let (_, _, w2, forward2) = canon[j];
                if forward == forward2 {
                    return Err(GspError::DuplicateEdge { src: lo, dst: hi });
                }
                if (w - w2).abs() > SYMMETRY_TOL {
                    return Err(GspError::AsymmetricWeight { src: lo, dst: hi, forward: w, backward: w2 });
                }
                j += 1;
                if j < canon.len() && (canon[j].0, canon[j].1) == (lo, hi) {
                    return Err(GspError::DuplicateEdge { src: lo, dst: hi });
                }
            }
            merged.push(Edge { src: lo, dst: hi, weight: w });
            merged.push(Edge { src: hi, dst: lo, weight: w });
            i = j;
        }
        merged.sort_by_key(|e| (e.src, e.dst));
        Ok(Graph { n, directed, edges: merged })
    }

    /// Cycle on `n` nodes. The directed cycle has edges `k -> k+1 mod n`, whose
    /// adjacency is the classical cyclic delay.
    pub fn cycle(n: usize, directed: bool) -> Result<Graph> {
        let min = if directed { 2 } else { 3 };
        if n < min {
            return Err(GspError::TooSmall { min, got: n });
        }
        let rows: Vec<_> = (0..n).map(|k| (k, (k + 1) % n, 1.0)).collect();
        Graph::from_edge_list(&rows, n, directed)
    }

    /// Undirected path `0 - 1 - ... - (n-1)` with unit weights.
    pub fn path(n: usize) -> Result<Graph> {
        let rows: Vec<_> = (1..n).map(|k| (k - 1, k, 1.0)).collect();
        Graph::from_edge_list(&rows, n, false)
    }

    /// Undirected k-nearest-neighbor graph with Gaussian weights
    /// `exp(-d^2 / (2 sigma^2))`, symmetrized by union.
    pub fn knn(points: &[Vec<f64>], k: usize, sigma: f64) -> Result<Graph> {
        if k == 0 {
            return Err(GspError::InvalidParameter("k must be at least 1".into()));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(GspError::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        let n = points.len();
        if n < k + 1 {
            return Err(GspError::KTooLarge { k, needed: k + 1, got: n });
        }
        let dim = points[0].len();
        if let Some(bad) = points.iter().position(|p| p.len() != dim) {
            return Err(GspError::DimensionMismatch { expected: dim, got: points[bad].len() });
        }

        let sq_dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
        let mut pairs: Vec<(usize, usize, f64)> = Vec::with_capacity(n * k);
        let mut row: Vec<(f64, usize)> = Vec::with_capacity(n);
        for i in 0..n {
            row.clear();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d2 = sq_dist(&points[i], &points[j]);
                if d2 == 0.0 {
                    return Err(GspError::DuplicatePoints(i.min(j), i.max(j)));
                }
                row.push((d2, j));
            }
            row.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(d2, j) in &row[..k] {
                pairs.push((i.min(j), i.max(j), d2));
            }
        }
        pairs.sort_by_key(|p| (p.0, p.1));
        pairs.dedup_by_key(|p| (p.0, p.1));
        let rows: Vec<_> = pairs
            .into_iter()
            .map(|(i, j, d2)| (i, j, (-d2 / (2.0 * sigma * sigma)).exp()))
            .collect();
        Graph::from_edge_list(&rows, n, false)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// All stored edge records, sorted by `(src, dst)`. Undirected graphs list
    /// each edge twice.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted in-degree of every node (equal to out-degree when undirected).
    pub fn degrees(&self) -> Vec<f64> {
        // summed in sorted order so the result does not depend on labels
        let mut incoming = vec![Vec::new(); self.n];
        for e in &self.edges {
            incoming[e.dst].push(e.weight);
        }
        incoming
            .into_iter()
            .map(|mut w| {
                w.sort_by(f64::total_cmp);
                w.iter().sum()
            })
            .collect()
    }

    /// Neighbor lists, ignoring direction. Used for hop distances.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Breadth-first hop distance from `source`; `None` for unreachable nodes.
    pub fn hop_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        if source >= self.n {
            return Err(GspError::IndexOutOfRange { index: source, n: self.n });
        }
        let adj = self.neighbors();
        let mut dist = vec![None; self.n];
        let mut queue = std::collections::VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_connected(&self) -> bool {
        self.hop_distances(0).map(|d| d.iter().all(Option::is_some)).unwrap_or(false)
    }

    /// Relabels node `i` as `perm[i]`. The new adjacency is `P A P^T`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(GspError::NotAPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(GspError::NotAPermutation(self.n));
            }
            seen[p] = true;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge { src: perm[e.src], dst: perm[e.dst], weight: e.weight })
            .collect();
        edges.sort_by_key(|e| (e.src, e.dst));
        Ok(Graph { n: self.n, directed: self.directed, edges })
    }
}
