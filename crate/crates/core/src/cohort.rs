//! Cohort assignment: recursive Max-Cut bisection, the uniform random
//! baseline, and removal of inter-cohort edges.

use std::cmp::Reverse;
use std::fs;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qubomc::{solve_maxcut, CutAssignment, SolverConfig};
use crate::rng::{derive_seed, rng_from_seed};

/// Node-to-cohort map for `cohort_count` cohorts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AssignmentFile", into = "AssignmentFile")]
pub struct CohortAssignment {
    cohort_of: Vec<usize>,
    cohort_count: usize,
    cohort_sizes: Vec<usize>,
    cut_edges_removed: usize,
}

impl CohortAssignment {
    /// Validates `cohort_of` against `g` and derives sizes and the inter-cohort edge count.
    pub fn from_labels(g: &Graph, cohort_of: Vec<usize>, cohort_count: usize) -> Result<Self> {
        if cohort_of.len() != g.node_count() {
            return Err(Error::Argument(format!(
                "assignment covers {} nodes, graph has {}",
                cohort_of.len(),
                g.node_count()
            )));
        }
        let mut a = Self::unchecked(cohort_of, cohort_count)?;
        a.cut_edges_removed = g
            .edges()
            .filter(|&(u, v, _)| a.cohort_of[u] != a.cohort_of[v])
            .count();
        Ok(a)
    }

    fn unchecked(cohort_of: Vec<usize>, cohort_count: usize) -> Result<Self> {
        if cohort_count == 0 {
            return Err(Error::Argument("cohort count must be positive".into()));
        }
        let mut cohort_sizes = vec![0; cohort_count];
        for (i, &c) in cohort_of.iter().enumerate() {
            if c >= cohort_count {
                return Err(Error::Argument(format!(
                    "node {i} assigned to cohort {c}, only {cohort_count} cohorts"
                )));
            }
            cohort_sizes[c] += 1;
        }
        Ok(CohortAssignment {
            cohort_of,
            cohort_count,
            cohort_sizes,
            cut_edges_removed: 0,
        })
    }

    pub fn cohort_of(&self) -> &[usize] {
        &self.cohort_of
    }

    pub fn cohort_count(&self) -> usize {
        self.cohort_count
    }

    pub fn node_count(&self) -> usize {
        self.cohort_of.len()
    }

    pub fn cohort_sizes(&self) -> &[usize] {
        &self.cohort_sizes
    }

    /// Edges of the partitioned graph whose endpoints lie in different cohorts.
    pub fn cut_edges_removed(&self) -> usize {
        self.cut_edges_removed
    }

    pub fn members(&self, cohort: usize) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&i| self.cohort_of[i] == cohort)
            .collect()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string(self).map_err(|e| Error::json(path, e))?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// `{"n_cohorts": N, "cohort_of": [...], "cut_edges_removed": int}`
#[derive(Serialize, Deserialize)]
struct AssignmentFile {
    n_cohorts: usize,
    cohort_of: Vec<usize>,
    cut_edges_removed: usize,
}

impl TryFrom<AssignmentFile> for CohortAssignment {
    type Error = Error;

    fn try_from(f: AssignmentFile) -> Result<Self> {
        let mut a = CohortAssignment::unchecked(f.cohort_of, f.n_cohorts)?;
        a.cut_edges_removed = f.cut_edges_removed;
        Ok(a)
    }
}

impl From<CohortAssignment> for AssignmentFile {
    fn from(a: CohortAssignment) -> Self {
        AssignmentFile {
            n_cohorts: a.cohort_count,
            cohort_of: a.cohort_of,
            cut_edges_removed: a.cut_edges_removed,
        }
    }
}

const SPLIT_STREAM: u64 = 0xC0;

/// Repeatedly bisects every cohort by Max-Cut on its induced subgraph until
/// there are `n_cohorts` of them.
///
/// Cohort `c` at one level becomes cohorts `2c` (side 0) and `2c + 1`
/// (side 1) at the next, so siblings stay adjacent in the final numbering.
/// A cohort whose induced subgraph has no edges is split evenly by node
/// index. If the solver leaves one side empty on a graph with edges, the
/// node whose move costs the least cut value is moved across.
pub fn partition_recursive_maxcut(
    g: &Graph,
    n_cohorts: usize,
    solver: &SolverConfig,
) -> Result<CohortAssignment> {
    if n_cohorts == 0 || !n_cohorts.is_power_of_two() {
        return Err(Error::Argument(format!(
            "cohort count must be a power of two, got {n_cohorts}"
        )));
    }
    if n_cohorts > g.node_count() {
        return Err(Error::Argument(format!(
            "cannot form {n_cohorts} cohorts from {} nodes",
            g.node_count()
        )));
    }

    let mut cohorts: Vec<Vec<usize>> = vec![(0..g.node_count()).collect()];
    let mut split_total = 0usize;
    let mut depth = 0u64;
    while cohorts.len() < n_cohorts {
        let splits: Vec<(Vec<usize>, Vec<usize>, u64)> = cohorts
            .par_iter()
            .enumerate()
            .map(|(idx, members)| {
                let seed = derive_seed(solver.seed, SPLIT_STREAM ^ depth, idx as u64);
                bisect(g, members, &SolverConfig { seed, ..*solver })
            })
            .collect::<Result<_>>()?;
        cohorts = Vec::with_capacity(2 * cohorts.len());
        for (left, right, cut) in splits {
            split_total += cut as usize;
            cohorts.push(left);
            cohorts.push(right);
        }
        depth += 1;
    }

    let mut cohort_of = vec![0; g.node_count()];
    for (c, members) in cohorts.iter().enumerate() {
        for &u in members {
            cohort_of[u] = c;
        }
    }
    let assignment = CohortAssignment::from_labels(g, cohort_of, n_cohorts)?;
    debug_assert_eq!(assignment.cut_edges_removed, split_total);
    Ok(assignment)
}

fn bisect(g: &Graph, members: &[usize], solver: &SolverConfig) -> Result<(Vec<usize>, Vec<usize>, u64)> {
    if members.len() < 2 {
        // a lone node cannot be split; its sibling cohort stays empty
        return Ok((members.to_vec(), Vec::new(), 0));
    }
    let sub = g.induced_subgraph(members);
    let mut cut = solve_maxcut(&sub, solver)?;
    ensure_two_sides(&sub, &mut cut);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (&u, &side) in members.iter().zip(&cut.labels) {
        if side {
            right.push(u);
        } else {
            left.push(u);
        }
    }
    Ok((left, right, cut.cut_value))
}

/// Moves one node across if every node landed on the same side.
///
/// With all nodes on one side nothing is cut, so moving node `i` cuts all
/// `deg(i)` of its edges; the highest-degree node (lowest index on ties) moves.
fn ensure_two_sides(sub: &Graph, cut: &mut CutAssignment) {
    let (zeros, ones) = cut.side_sizes();
    if sub.node_count() < 2 || (zeros > 0 && ones > 0) {
        return;
    }
    let mover = (0..sub.node_count())
        .min_by_key(|&i| Reverse(sub.degree(i)))
        .expect("non-empty cohort");
    cut.labels[mover] = !cut.labels[mover];
    cut.cut_value += sub.degree(mover) as u64;
}

/// Assigns every node a cohort uniformly at random.
pub fn partition_random(g: &Graph, n_cohorts: usize, seed: u64) -> Result<CohortAssignment> {
    if n_cohorts == 0 {
        return Err(Error::Argument("cohort count must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let cohort_of = (0..g.node_count())
        .map(|_| rng.gen_range(0..n_cohorts))
        .collect();
    CohortAssignment::from_labels(g, cohort_of, n_cohorts)
}

/// Copy of `g` without the edges that join different cohorts.
pub fn apply_cohort_separation(g: &Graph, assignment: &CohortAssignment) -> Result<Graph> {
    if assignment.node_count() != g.node_count() {
        return Err(Error::Argument(format!(
            "assignment covers {} nodes, graph has {}",
            assignment.node_count(),
            g.node_count()
        )));
    }
    let c = assignment.cohort_of();
    Graph::from_edges(
        g.node_count(),
        g.edges().filter(|&(u, v, _)| c[u] == c[v]),
    )
}
