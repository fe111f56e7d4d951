//! Max-Cut objective, its Ising and QUBO encodings, and classical solvers.

mod ising;
mod qubo;
mod solver;

pub use ising::{ising_energy, spins_from_labels, to_ising, IsingModel};
pub use qubo::{export_qubo, Qubo};
pub use solver::{solve_maxcut, SolverConfig, SolverKind, EXACT_NODE_LIMIT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Two-way node labeling together with the number of edges it cuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutAssignment {
    pub labels: Vec<bool>,
    pub cut_value: u64,
}

impl CutAssignment {
    pub fn evaluate(g: &Graph, labels: Vec<bool>) -> Result<Self> {
        let cut_value = cut_value(g, &labels)?;
        Ok(CutAssignment { labels, cut_value })
    }

    pub fn side_sizes(&self) -> (usize, usize) {
        let ones = self.labels.iter().filter(|&&x| x).count();
        (self.labels.len() - ones, ones)
    }
}

/// Number of edges whose endpoints carry different labels.
pub fn cut_value(g: &Graph, labels: &[bool]) -> Result<u64> {
    check_len(g.node_count(), labels.len())?;
    Ok(g.edges().filter(|&(u, v, _)| labels[u] != labels[v]).count() as u64)
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Argument(format!(
            "expected {expected} labels, got {got}"
        )));
    }
    Ok(())
}
