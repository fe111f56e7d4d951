//! Undirected simple contact graph with per-edge interaction tags.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Why two students are adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeTag {
    /// Shared physical class.
    Class,
    /// Same dormitory floor (same cohort).
    Floor,
    /// Same dormitory, different floor.
    Dorm,
    /// Different dormitories.
    Campus,
}

impl EdgeTag {
    pub const ALL: [EdgeTag; 4] = [EdgeTag::Class, EdgeTag::Floor, EdgeTag::Dorm, EdgeTag::Campus];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Class => "class",
            EdgeTag::Floor => "floor",
            EdgeTag::Dorm => "dorm",
            EdgeTag::Campus => "campus",
        }
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Format(format!("unknown edge tag {s:?}")))
    }
}

/// Undirected simple graph on nodes `0..node_count`.
///
/// Each unordered pair appears at most once regardless of tag. Neighbor
/// maps are ordered, so every traversal of the graph is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct Graph {
    adjacency: Vec<BTreeMap<usize, EdgeTag>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(node_count: usize) -> Self {
        Graph {
            adjacency: vec![BTreeMap::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// endpoints and duplicate pairs.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, EdgeTag)>,
    ) -> Result<Self> {
        let mut g = Graph::new(node_count);
        for (u, v, tag) in edges {
            g.try_add_edge(u, v, tag)?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|nbrs| nbrs.contains_key(&v))
    }

    pub fn edge_tag(&self, u: usize, v: usize) -> Option<EdgeTag> {
        self.adjacency.get(u).and_then(|nbrs| nbrs.get(&v).copied())
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[u].keys().copied()
    }

    /// Adds `{u, v}`; fails on a self-loop, an out-of-range endpoint or an existing pair.
    pub fn try_add_edge(&mut self, u: usize, v: usize, tag: EdgeTag) -> Result<()> {
        let n = self.node_count();
        if u >= n || v >= n {
            return Err(Error::Format(format!(
                "edge ({u}, {v}) out of range for {n} nodes"
            )));
        }
        if u == v {
            return Err(Error::Format(format!("self-loop on node {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::Format(format!("duplicate edge ({u}, {v})")));
        }
        self.insert(u, v, tag);
        Ok(())
    }

    pub(crate) fn insert(&mut self, u: usize, v: usize, tag: EdgeTag) {
        debug_assert!(u != v && !self.has_edge(u, v));
        self.adjacency[u].insert(v, tag);
        self.adjacency[v].insert(u, tag);
        self.edge_count += 1;
    }

    /// Removes `{u, v}` and returns its tag, if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Option<EdgeTag> {
        let tag = self.adjacency.get_mut(u)?.remove(&v)?;
        self.adjacency[v].remove(&u);
        self.edge_count -= 1;
        Some(tag)
    }

    /// All edges as `(u, v, tag)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeTag)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.range(u + 1..).map(move |(&v, &tag)| (u, v, tag))
        })
    }

    pub fn count_tag(&self, tag: EdgeTag) -> usize {
        self.edges().filter(|&(_, _, t)| t == tag).count()
    }

    /// Subgraph induced by `nodes`; node `nodes[i]` becomes node `i`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            local[u] = i;
        }
        let mut sub = Graph::new(nodes.len());
        for (i, &u) in nodes.iter().enumerate() {
            for (&v, &tag) in &self.adjacency[u] {
                let j = local[v];
                if j != usize::MAX && i < j {
                    sub.insert(i, j, tag);
                }
            }
        }
        sub
    }

    /// Compressed adjacency for the hot loops (search, annealing, epidemics).
    pub fn compact(&self) -> Adjacency {
        let mut offsets = Vec::with_capacity(self.node_count() + 1);
        let mut targets = Vec::with_capacity(2 * self.edge_count);
        offsets.push(0);
        for nbrs in &self.adjacency {
            targets.extend(nbrs.keys().map(|&v| v as u32));
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Graph> {
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

/// CSR neighbor lists.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }
}

/// On-disk form: `{"n": int, "edges": [[u, v, "tag"], ...]}` with `u < v`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, EdgeTag)>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Graph> {
        if let Some(&(u, v, _)) = file.edges.iter().find(|(u, v, _)| u > v) {
            return Err(Error::Format(format!("edge ({u}, {v}) must be written with u < v")));
        }
        Graph::from_edges(file.n, file.edges)
    }
}

impl From<Graph> for GraphFile {
    fn from(g: Graph) -> GraphFile {
        GraphFile {
            n: g.node_count(),
            edges: g.edges().collect(),
        }
    }
}
