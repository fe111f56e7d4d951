use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Pairwise Ising energy `offset + sum J_ij s_i s_j` over spins `s in {+1, -1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub spin_count: usize,
    /// Keyed by `(i, j)` with `i < j`.
    pub couplings: BTreeMap<(usize, usize), f64>,
    pub constant_offset: f64,
}

/// Ising form of the cut objective: each edge contributes `(1 - s_i s_j) / 2`,
/// which is 1 exactly when the edge is cut.
pub fn to_ising(g: &Graph) -> IsingModel {
    let mut couplings = BTreeMap::new();
    let mut constant_offset = 0.0;
    for (u, v, _) in g.edges() {
        *couplings.entry((u, v)).or_insert(0.0) += -0.5;
        constant_offset += 0.5;
    }
    IsingModel {
        spin_count: g.node_count(),
        couplings,
        constant_offset,
    }
}

pub fn ising_energy(m: &IsingModel, spins: &[i8]) -> Result<f64> {
    if spins.len() != m.spin_count {
        return Err(Error::Argument(format!(
            "expected {} spins, got {}",
            m.spin_count,
            spins.len()
        )));
    }
    if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::Argument(format!("spin values must be +1 or -1, got {bad}")));
    }
    let interaction: f64 = m
        .couplings
        .iter()
        .map(|(&(i, j), &c)| c * f64::from(spins[i] * spins[j]))
        .sum();
    Ok(m.constant_offset + interaction)
}

/// `s_i = 1 - 2 x_i`: label 0 maps to spin +1, label 1 to spin -1.
pub fn spins_from_labels(labels: &[bool]) -> Vec<i8> {
    labels.iter().map(|&x| if x { -1 } else { 1 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeTag;

    fn single_edge() -> IsingModel {
        to_ising(&Graph::from_edges(2, [(0, 1, EdgeTag::Class)]).unwrap())
    }

    #[test]
    fn single_edge_expansion() {
        let m = single_edge();
        assert_eq!(m.couplings.len(), 1);
        assert_eq!(m.couplings[&(0, 1)], -0.5);
        assert_eq!(m.constant_offset, 0.5);
    }

    #[test]
    fn edgeless_model_is_empty() {
        let m = to_ising(&Graph::new(5));
        assert_eq!(m.spin_count, 5);
        assert!(m.couplings.is_empty());
        assert_eq!(m.constant_offset, 0.0);
    }

    #[test]
    fn aligned_and_antialigned_spins() {
        let m = single_edge();
        assert_eq!(ising_energy(&m, &[1, 1]).unwrap(), 0.0);
        assert_eq!(ising_energy(&m, &[1, -1]).unwrap(), 1.0);
        assert_eq!(ising_energy(&m, &[-1, -1]).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_spins() {
        let m = single_edge();
        assert!(ising_energy(&m, &[1]).is_err());
        assert!(ising_energy(&m, &[1, 0]).is_err());
    }

    #[test]
    fn label_spin_mapping() {
        assert_eq!(spins_from_labels(&[false, true]), vec![1, -1]);
    }
}
