//! Classical Max-Cut backends behind a single entry point.
//!
//! All backends work on single-flip gains: `gain[i]` is the change in cut
//! value if node `i` switches sides, i.e. (#same-side neighbors) minus
//! (#other-side neighbors).

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CutAssignment;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph};
use crate::rng::{derive_seed, rng_from_seed};

/// Largest graph the exhaustive solver accepts.
pub const EXACT_NODE_LIMIT: usize = 26;

const SA_RESTART_STREAM: u64 = 0x5A;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Exact,
    SimulatedAnnealing,
    GreedyLocalSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub seed: u64,
    /// Sweeps per restart; one sweep is `n` single-flip proposals.
    pub sa_sweeps: usize,
    pub sa_restarts: usize,
    /// Starting temperature; `None` uses the maximum node degree of the instance.
    pub sa_initial_temperature: Option<f64>,
    /// Geometric factor applied to the temperature after every sweep.
    pub sa_cooling_factor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            kind: SolverKind::SimulatedAnnealing,
            seed: 0,
            sa_sweeps: 100,
            sa_restarts: 8,
            sa_initial_temperature: None,
            sa_cooling_factor: 0.95,
        }
    }
}

impl SolverConfig {
    pub fn with_kind(kind: SolverKind, seed: u64) -> Self {
        SolverConfig {
            kind,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sa_sweeps == 0 || self.sa_restarts == 0 {
            return Err(Error::Config("sa_sweeps and sa_restarts must be positive".into()));
        }
        if let Some(t) = self.sa_initial_temperature {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("sa_initial_temperature must be positive, got {t}")));
            }
        }
        if !(self.sa_cooling_factor > 0.0 && self.sa_cooling_factor < 1.0) {
            return Err(Error::Config(format!(
                "sa_cooling_factor must lie in (0, 1), got {}",
                self.sa_cooling_factor
            )));
        }
        Ok(())
    }
}

/// Splits `g` into two sides maximizing (exactly or heuristically) the cut.
///
/// Edgeless graphs get an even split by index: the first `ceil(n/2)` nodes
/// on side 0.
pub fn solve_maxcut(g: &Graph, config: &SolverConfig) -> Result<CutAssignment> {
    config.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Argument("cannot cut an empty graph".into()));
    }
    if config.kind == SolverKind::Exact && n > EXACT_NODE_LIMIT {
        return Err(Error::Capability(format!(
            "exact solver enumerates at most {EXACT_NODE_LIMIT} nodes, graph has {n}"
        )));
    }
    if g.edge_count() == 0 {
        let half = n.div_ceil(2);
        return Ok(CutAssignment {
            labels: (0..n).map(|i| i >= half).collect(),
            cut_value: 0,
        });
    }

    let adj = g.compact();
    let (labels, cut_value) = match config.kind {
        SolverKind::Exact => exhaustive(&adj),
        SolverKind::SimulatedAnnealing => {
            let t0 = config
                .sa_initial_temperature
                .unwrap_or(g.max_degree() as f64);
            anneal_restarts(&adj, config, t0)
        }
        SolverKind::GreedyLocalSearch => {
            let mut rng = rng_from_seed(config.seed);
            let mut labels: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let cut = greedy_ascent(&adj, &mut labels);
            (labels, cut)
        }
    };
    debug_assert_eq!(Some(cut_value), super::cut_value(g, &labels).ok());
    Ok(CutAssignment { labels, cut_value })
}

fn gains(adj: &Adjacency, labels: &[bool]) -> Vec<i64> {
    (0..adj.node_count())
        .map(|i| {
            adj.neighbors(i)
                .iter()
                .map(|&j| if labels[j as usize] == labels[i] { 1 } else { -1 })
                .sum()
        })
        .collect()
}

fn cut_of(adj: &Adjacency, labels: &[bool]) -> u64 {
    let twice: usize = (0..adj.node_count())
        .map(|i| adj.neighbors(i).iter().filter(|&&j| labels[j as usize] != labels[i]).count())
        .sum();
    (twice / 2) as u64
}

#[inline]
fn flip(adj: &Adjacency, labels: &mut [bool], gain: &mut [i64], i: usize) {
    labels[i] = !labels[i];
    gain[i] = -gain[i];
    let li = labels[i];
    for &j in adj.neighbors(i) {
        let j = j as usize;
        // the edge (i, j) changed state; j's gain moves by 2
        gain[j] += if labels[j] == li { 2 } else { -2 };
    }
}

/// Gray-code enumeration of all labelings with the last node pinned to side 0.
fn exhaustive(adj: &Adjacency) -> (Vec<bool>, u64) {
    let n = adj.node_count();
    let mut labels = vec![false; n];
    let mut gain = gains(adj, &labels);
    let mut cut: i64 = 0;
    let mut best = (0i64, labels.clone());
    let free = n - 1;
    for step in 1u64..(1u64 << free) {
        let i = step.trailing_zeros() as usize;
        cut += gain[i];
        flip(adj, &mut labels, &mut gain, i);
        if cut > best.0 {
            best = (cut, labels.clone());
        }
    }
    (best.1, best.0 as u64)
}

/// Flips any improving node, scanning in index order, until none remains.
fn greedy_ascent(adj: &Adjacency, labels: &mut [bool]) -> u64 {
    let mut gain = gains(adj, labels);
    loop {
        let mut improved = false;
        for i in 0..labels.len() {
            if gain[i] > 0 {
                flip(adj, labels, &mut gain, i);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    cut_of(adj, labels)
}

fn anneal_restarts(adj: &Adjacency, config: &SolverConfig, t0: f64) -> (Vec<bool>, u64) {
    let runs: Vec<(Vec<bool>, u64)> = (0..config.sa_restarts)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(config.seed, SA_RESTART_STREAM, r as u64);
            anneal(adj, seed, t0, config.sa_cooling_factor, config.sa_sweeps)
        })
        .collect();
    // earliest restart wins ties
    runs.into_iter()
        .reduce(|best, run| if run.1 > best.1 { run } else { best })
        .expect("at least one restart")
}

/// One annealing run returning the best state visited.
fn anneal(adj: &Adjacency, seed: u64, t0: f64, cooling: f64, sweeps: usize) -> (Vec<bool>, u64) {
    let n = adj.node_count();
    let mut rng = rng_from_seed(seed);
    let mut labels: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut gain = gains(adj, &labels);
    let mut cut = cut_of(adj, &labels) as i64;

    let mut best_cut = cut;
    let mut best_labels = labels.clone();
    // the current state is the best seen but has not been copied yet
    let mut best_pending = false;

    let mut temperature = t0;
    for _ in 0..sweeps {
        for _ in 0..n {
            let i = rng.gen_range(0..n);
            let delta = gain[i];
            let accept = delta >= 0 || rng.gen::<f64>() < (delta as f64 / temperature).exp();
            if !accept {
                continue;
            }
            if best_pending && delta <= 0 {
                best_labels.copy_from_slice(&labels);
                best_pending = false;
            }
            cut += delta;
            flip(adj, &mut labels, &mut gain, i);
            if cut > best_cut {
                best_cut = cut;
                best_pending = true;
            }
        }
        temperature *= cooling;
    }
    if best_pending {
        best_labels.copy_from_slice(&labels);
    }
    (best_labels, best_cut as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeTag;
    use crate::qubomc::cut_value;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, EdgeTag::Class))).unwrap()
    }

    const KINDS: [SolverKind; 3] = [
        SolverKind::Exact,
        SolverKind::SimulatedAnnealing,
        SolverKind::GreedyLocalSearch,
    ];

    #[test]
    fn single_node() {
        for kind in KINDS {
            let cut = solve_maxcut(&Graph::new(1), &SolverConfig::with_kind(kind, 3)).unwrap();
            assert_eq!(cut.labels, vec![false]);
            assert_eq!(cut.cut_value, 0);
        }
    }

    #[test]
    fn five_cycle_and_k33() {
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let k33 = graph(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        for kind in [SolverKind::Exact, SolverKind::SimulatedAnnealing] {
            let cfg = SolverConfig::with_kind(kind, 1);
            assert_eq!(solve_maxcut(&c5, &cfg).unwrap().cut_value, 4);
            assert_eq!(solve_maxcut(&k33, &cfg).unwrap().cut_value, 9);
        }
    }

    #[test]
    fn edgeless_graphs_split_evenly() {
        for kind in KINDS {
            let cut = solve_maxcut(&Graph::new(5), &SolverConfig::with_kind(kind, 0)).unwrap();
            assert_eq!(cut.labels, vec![false, false, false, true, true]);
        }
    }

    #[test]
    fn exact_refuses_large_graphs() {
        let g = Graph::new(EXACT_NODE_LIMIT + 1);
        let err = solve_maxcut(&g, &SolverConfig::with_kind(SolverKind::Exact, 0)).unwrap_err();
        assert!(matches!(err, Error::Capability(_)));
    }

    #[test]
    fn greedy_result_is_one_flip_optimal() {
        let g = crate::netgen::generate_cen(&crate::netgen::CenConfig {
            node_count: 60,
            ring_degree_k: 6,
            rewire_probability: 0.3,
            seed: 5,
        })
        .unwrap();
        let cut = solve_maxcut(&g, &SolverConfig::with_kind(SolverKind::GreedyLocalSearch, 2)).unwrap();
        assert_eq!(cut.cut_value, cut_value(&g, &cut.labels).unwrap());
        assert!(gains(&g.compact(), &cut.labels).iter().all(|&d| d <= 0));
    }

    #[test]
    fn annealing_is_seed_deterministic() {
        let g = crate::netgen::generate_cen(&crate::netgen::CenConfig {
            node_count: 80,
            ring_degree_k: 8,
            rewire_probability: 0.2,
            seed: 1,
        })
        .unwrap();
        let cfg = SolverConfig::with_kind(SolverKind::SimulatedAnnealing, 42);
        assert_eq!(solve_maxcut(&g, &cfg).unwrap(), solve_maxcut(&g, &cfg).unwrap());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig { sa_cooling_factor: 1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
        cfg = SolverConfig { sa_restarts: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
        cfg = SolverConfig { sa_initial_temperature: Some(0.0), ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg: SolverConfig = serde_json::from_str(r#"{"kind":"greedy_local_search","seed":4}"#).unwrap();
        assert_eq!(cfg.kind, SolverKind::GreedyLocalSearch);
        assert_eq!(cfg.sa_sweeps, 100);
        assert_eq!(cfg.sa_restarts, 8);
    }
}
