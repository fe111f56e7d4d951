use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Adjacency, Graph};

/// Summary statistics of a contact network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub density: f64,
    /// Mean local clustering; nodes of degree < 2 contribute 0.
    pub clustering_coefficient: f64,
    /// Mean shortest-path length over connected ordered pairs; `None` when no pair is connected.
    pub mean_geodesic_distance: Option<f64>,
    /// Ordered pairs `(u, v)`, `u != v`, with no path between them.
    pub disconnected_pairs: u64,
    pub avg_degree: f64,
}

pub fn network_stats(g: &Graph) -> NetworkStats {
    let n = g.node_count();
    let m = g.edge_count();
    let density = if n < 2 {
        0.0
    } else {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    };
    let avg_degree = if n == 0 { 0.0 } else { 2.0 * m as f64 / n as f64 };
    let adj = g.compact();
    let clustering_coefficient = average_clustering(&adj);
    let (distance_sum, connected_pairs) = geodesic_totals(&adj);
    let total_pairs = n as u64 * (n as u64).saturating_sub(1);
    NetworkStats {
        node_count: n,
        edge_count: m,
        density,
        clustering_coefficient,
        mean_geodesic_distance: (connected_pairs > 0)
            .then(|| distance_sum as f64 / connected_pairs as f64),
        disconnected_pairs: total_pairs - connected_pairs,
        avg_degree,
    }
}

fn average_clustering(adj: &Adjacency) -> f64 {
    let n = adj.node_count();
    if n == 0 {
        return 0.0;
    }
    let mut local: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || vec![false; n],
            |mark, u| {
                let nbrs = adj.neighbors(u);
                let d = nbrs.len();
                if d < 2 {
                    return 0.0;
                }
                for &v in nbrs {
                    mark[v as usize] = true;
                }
                // each triangle through u is seen twice
                let mut links = 0u64;
                for &v in nbrs {
                    links += adj.neighbors(v as usize).iter().filter(|&&w| mark[w as usize]).count() as u64;
                }
                for &v in nbrs {
                    mark[v as usize] = false;
                }
                links as f64 / (d as f64 * (d as f64 - 1.0))
            },
        )
        .collect();
    // summing in sorted order makes the mean independent of node labels
    local.sort_unstable_by(f64::total_cmp);
    local.iter().sum::<f64>() / n as f64
}

/// Sum of BFS distances and number of reachable ordered pairs.
fn geodesic_totals(adj: &Adjacency) -> (u64, u64) {
    let n = adj.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::with_capacity(n)),
            |(dist, queue), s| {
                dist.fill(u32::MAX);
                dist[s] = 0;
                queue.clear();
                queue.push_back(s);
                let mut sum = 0u64;
                let mut reached = 0u64;
                while let Some(u) = queue.pop_front() {
                    let du = dist[u];
                    for &v in adj.neighbors(u) {
                        let v = v as usize;
                        if dist[v] == u32::MAX {
                            dist[v] = du + 1;
                            sum += u64::from(du + 1);
                            reached += 1;
                            queue.push_back(v);
                        }
                    }
                }
                (sum, reached)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}
