//! Contact-network construction.
//!
//! Course enrollment networks are Watts-Strogatz small-world graphs whose ring
//! degree and rewiring probability are calibrated to a target density and
//! clustering coefficient. Student interaction networks add probabilistic
//! floor, dorm and campus edges on top of a cohort-separated enrollment network.

mod stats;

pub use stats::{network_stats, NetworkStats};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cohort::CohortAssignment;
use crate::error::{Error, Result};
use crate::graph::{EdgeTag, Graph};
use crate::rng::rng_from_seed;

/// Watts-Strogatz generator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenConfig {
    pub node_count: usize,
    pub ring_degree_k: usize,
    pub rewire_probability: f64,
    #[serde(default)]
    pub seed: u64,
}

impl CenConfig {
    /// Picks `k` from a target density and `p` from a target clustering coefficient.
    ///
    /// `k` is `density * (n - 1)` rounded to the nearest even integer. `p` solves
    /// `C(0) * (1 - p)^3 = clustering` with the ring-lattice clustering
    /// `C(0) = 3(k - 2) / (4(k - 1))`, clamped to `[0, 1]`.
    pub fn calibrated(node_count: usize, density: f64, clustering: f64, seed: u64) -> Result<Self> {
        if node_count < 3 {
            return Err(Error::Config(format!(
                "calibration needs at least 3 nodes, got {node_count}"
            )));
        }
        if !(density > 0.0 && density <= 1.0) || !(0.0..=1.0).contains(&clustering) {
            return Err(Error::Config(format!(
                "targets out of range: density {density}, clustering {clustering}"
            )));
        }
        let raw_k = density * (node_count - 1) as f64;
        let k = ((2.0 * (raw_k / 2.0).round()) as usize).clamp(2, even_below(node_count));
        let lattice = ring_lattice_clustering(k);
        let rewire_probability = if clustering >= lattice {
            0.0
        } else if clustering <= 0.0 {
            1.0
        } else {
            (1.0 - (clustering / lattice).cbrt()).clamp(0.0, 1.0)
        };
        let config = CenConfig {
            node_count,
            ring_degree_k: k,
            rewire_probability,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    /// Enrollment-network fit for a 3800-student campus.
    pub fn large_campus(seed: u64) -> Self {
        Self::calibrated(3800, 0.040, 0.465, seed).expect("valid calibration targets")
    }

    /// Same density and clustering targets at 800 students.
    pub fn small_campus(seed: u64) -> Self {
        Self::calibrated(800, 0.040, 0.465, seed).expect("valid calibration targets")
    }

    pub fn validate(&self) -> Result<()> {
        let CenConfig {
            node_count: n,
            ring_degree_k: k,
            rewire_probability: p,
            ..
        } = *self;
        if n == 0 {
            return Err(Error::Config("node_count must be positive".into()));
        }
        if k == 0 || k % 2 != 0 {
            return Err(Error::Config(format!(
                "ring_degree_k must be even and positive, got {k}"
            )));
        }
        if k >= n {
            return Err(Error::Config(format!(
                "ring_degree_k ({k}) must be below node_count ({n})"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!(
                "rewire_probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(())
    }
}

fn even_below(n: usize) -> usize {
    let m = n - 1;
    m - m % 2
}

/// Clustering coefficient of a ring lattice where every node links to its `k/2` nearest neighbors per side.
pub fn ring_lattice_clustering(k: usize) -> f64 {
    if k < 2 {
        return 0.0;
    }
    3.0 * (k as f64 - 2.0) / (4.0 * (k as f64 - 1.0))
}

/// Mean-field clustering estimate of a rewired lattice.
pub fn ws_clustering_estimate(k: usize, p: f64) -> f64 {
    ring_lattice_clustering(k) * (1.0 - p).powi(3)
}

/// Generates a Watts-Strogatz small-world graph with every edge tagged `class`.
///
/// Rewiring follows the classic procedure: for each ring offset `j` in
/// `1..=k/2` and each node `u`, the lattice edge `(u, u + j)` is moved with
/// probability `p` to `(u, w)` for a uniformly chosen `w` that is neither `u`
/// nor already adjacent. Edge count is always `n * k / 2`.
pub fn generate_cen(config: &CenConfig) -> Result<Graph> {
    config.validate()?;
    let n = config.node_count;
    let half = config.ring_degree_k / 2;
    let mut g = Graph::new(n);
    for j in 1..=half {
        for u in 0..n {
            let v = (u + j) % n;
            if !g.has_edge(u, v) {
                g.insert(u, v, EdgeTag::Class);
            }
        }
    }

    let p = config.rewire_probability;
    let mut rng = rng_from_seed(config.seed);
    for j in 1..=half {
        for u in 0..n {
            let v = (u + j) % n;
            if rng.gen::<f64>() >= p {
                continue;
            }
            // A node already adjacent to everyone keeps its edge.
            if g.degree(u) >= n - 1 {
                continue;
            }
            let mut w = rng.gen_range(0..n);
            while w == u || g.has_edge(u, w) {
                w = rng.gen_range(0..n);
            }
            // (u, v) may have been rewired away already by v's own pass.
            if g.remove_edge(u, v).is_some() {
                g.insert(u, w, EdgeTag::Class);
            }
        }
    }
    Ok(g)
}

/// Dormitory layout and per-pair interaction probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinConfig {
    pub dorm_count: usize,
    pub floors_per_dorm: usize,
    pub p_floor: f64,
    pub p_dorm: f64,
    pub p_campus: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SinConfig {
    pub fn cohort_count(&self) -> usize {
        self.dorm_count * self.floors_per_dorm
    }

    /// Dorm housing cohort `c`: floors of one dorm are consecutive cohort indices.
    pub fn dorm_of(&self, cohort: usize) -> usize {
        cohort / self.floors_per_dorm
    }

    pub fn validate(&self) -> Result<()> {
        if self.dorm_count == 0 || self.floors_per_dorm == 0 {
            return Err(Error::Config(
                "dorm_count and floors_per_dorm must be positive".into(),
            ));
        }
        for (name, p) in [
            ("p_floor", self.p_floor),
            ("p_dorm", self.p_dorm),
            ("p_campus", self.p_campus),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// Adds floor, dorm and campus interaction edges between non-adjacent pairs.
///
/// Every unordered pair not already adjacent draws one uniform variate (in
/// lexicographic pair order) and receives an edge tagged by its pair class
/// if the draw falls below that class's probability. Existing edges are kept.
pub fn augment_sin(g: &Graph, assignment: &CohortAssignment, config: &SinConfig) -> Result<Graph> {
    config.validate()?;
    if assignment.cohort_count() != config.cohort_count() {
        return Err(Error::Config(format!(
            "assignment has {} cohorts but {} dorms x {} floors = {}",
            assignment.cohort_count(),
            config.dorm_count,
            config.floors_per_dorm,
            config.cohort_count()
        )));
    }
    if assignment.node_count() != g.node_count() {
        return Err(Error::Config(format!(
            "assignment covers {} nodes, graph has {}",
            assignment.node_count(),
            g.node_count()
        )));
    }

    let cohort_of = assignment.cohort_of();
    let mut out = g.clone();
    let mut rng = rng_from_seed(config.seed);
    let n = g.node_count();
    for u in 0..n {
        let cu = cohort_of[u];
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            let cv = cohort_of[v];
            let (tag, p) = if cu == cv {
                (EdgeTag::Floor, config.p_floor)
            } else if config.dorm_of(cu) == config.dorm_of(cv) {
                (EdgeTag::Dorm, config.p_dorm)
            } else {
                (EdgeTag::Campus, config.p_campus)
            };
            if rng.gen::<f64>() < p {
                out.insert(u, v, tag);
            }
        }
    }
    Ok(out)
}
