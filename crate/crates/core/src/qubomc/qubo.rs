//! QUBO coefficient files for external annealers.
//!
//! ```text
//! # qubo n=<node_count>
//! i j c
//! ...
//! ```
//!
//! One line per nonzero coefficient with `i <= j`; `i == j` lines are linear
//! terms. Coefficients are integers and the objective is minimized.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER_PREFIX: &str = "# qubo n=";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qubo {
    pub variable_count: usize,
    /// `(i, j, coefficient)` with `i <= j`, nonzero coefficients only.
    pub terms: Vec<(usize, usize, i64)>,
}

impl Qubo {
    /// Negated cut objective: `-f(x) = sum_i -deg(i) x_i + sum_{(i,j) in E} 2 x_i x_j`.
    pub fn from_maxcut(g: &Graph) -> Qubo {
        let mut terms: Vec<(usize, usize, i64)> = (0..g.node_count())
            .filter(|&i| g.degree(i) > 0)
            .map(|i| (i, i, -(g.degree(i) as i64)))
            .collect();
        terms.extend(g.edges().map(|(u, v, _)| (u, v, 2)));
        Qubo {
            variable_count: g.node_count(),
            terms,
        }
    }

    pub fn energy(&self, bits: &[bool]) -> i64 {
        self.terms
            .iter()
            .filter(|&&(i, j, _)| bits[i] && bits[j])
            .map(|&(_, _, c)| c)
            .sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER_PREFIX}{}\n", self.variable_count);
        for (i, j, c) in &self.terms {
            writeln!(out, "{i} {j} {c}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Qubo> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty QUBO file".into()))?;
        let variable_count = header
            .strip_prefix(HEADER_PREFIX)
            .and_then(|n| n.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::Format(format!("bad QUBO header {header:?}")))?;

        let mut seen = BTreeSet::new();
        let mut terms = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let bad = || Error::Format(format!("line {}: bad coefficient line {line:?}", lineno + 2));
            let fields: Vec<&str> = line.split(' ').collect();
            let [i, j, c] = fields.as_slice() else {
                return Err(bad());
            };
            let i: usize = i.parse().map_err(|_| bad())?;
            let j: usize = j.parse().map_err(|_| bad())?;
            let c: i64 = c.parse().map_err(|_| bad())?;
            if i > j || j >= variable_count || c == 0 || !seen.insert((i, j)) {
                return Err(bad());
            }
            terms.push((i, j, c));
        }
        Ok(Qubo {
            variable_count,
            terms,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Qubo> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Qubo::parse(&text)
    }
}

/// Writes the QUBO whose minimizers are the maximum cuts of `g`.
pub fn export_qubo(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, Qubo::from_maxcut(g).to_text()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeTag;

    #[test]
    fn single_edge_lines() {
        let g = Graph::from_edges(2, [(0, 1, EdgeTag::Class)]).unwrap();
        assert_eq!(
            Qubo::from_maxcut(&g).to_text(),
            "# qubo n=2\n0 0 -1\n1 1 -1\n0 1 2\n"
        );
    }

    #[test]
    fn edgeless_graph_has_header_only() {
        let text = Qubo::from_maxcut(&Graph::new(4)).to_text();
        assert_eq!(text, "# qubo n=4\n");
        assert_eq!(Qubo::parse(&text).unwrap().terms, vec![]);
    }

    #[test]
    fn triangle_minimum_is_negated_max_cut() {
        let g = Graph::from_edges(3, [(0, 1, EdgeTag::Class), (1, 2, EdgeTag::Class), (0, 2, EdgeTag::Class)]).unwrap();
        let q = Qubo::from_maxcut(&g);
        let min = (0u32..8)
            .map(|m| q.energy(&[(m & 1) != 0, (m & 2) != 0, (m & 4) != 0]))
            .min()
            .unwrap();
        assert_eq!(min, -2);
    }

    #[test]
    fn parser_rejects_malformed_files() {
        for bad in [
            "",
            "# qubo\n",
            "# qubo n=2\n1 0 2\n",
            "# qubo n=2\n0 2 1\n",
            "# qubo n=2\n0 1 x\n",
            "# qubo n=2\n0 1\n",
            "# qubo n=2\n0 1 2\n0 1 2\n",
            "# qubo n=2\n0 1 0\n",
        ] {
            assert!(Qubo::parse(bad).is_err(), "{bad:?}");
        }
    }
}
