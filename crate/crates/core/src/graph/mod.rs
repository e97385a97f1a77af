// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Undirected simple graphs with stable node and edge identifiers.
//!
//! Nodes are the dense range `0..n`. Edges are stored with their endpoints
//! ordered (`u < v`) and sorted lexicographically; the position in that order
//! is the edge id. Neighbor lists are sorted ascending, which is the canonical
//! tie-breaking order used throughout the crate.

mod connectivity;
mod failure;
mod minor;

pub use connectivity::{biconnected_components, components, is_connected, st_edge_connectivity, surviving_subgraph, Subgraph};
pub use failure::FailureSet;
pub use minor::{apply_minor_op, minor_by_ops, MinorMapping, MinorOp, MinorResult};

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// Node identifier, dense in `0..n`.
pub type NodeId = usize;
/// Edge identifier, dense in `0..m`.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(NodeId, NodeId),
    #[error("node {0} does not exist")]
    MissingNode(NodeId),
    #[error("graph must have at least one node")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid minor mapping: {0}")]
    InvalidMinor(String),
}

/// Recipe for [`build_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Complete(usize),
    /// Part A gets ids `0..a`, part B gets `a..a+b`.
    CompleteBipartite(usize, usize),
    MinusEdges(Box<GraphSpec>, Vec<(NodeId, NodeId)>),
    EdgeList(Vec<(NodeId, NodeId)>),
}

pub fn build_graph(spec: &GraphSpec) -> Result<Graph, GraphError> {
    match spec {
        GraphSpec::Complete(n) => Graph::complete(*n),
        GraphSpec::CompleteBipartite(a, b) => Graph::complete_bipartite(*a, *b),
        GraphSpec::MinusEdges(base, removed) => build_graph(base)?.minus_edges(removed),
        GraphSpec::EdgeList(pairs) => {
            let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
            Graph::new(n, pairs)
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    name: Option<String>,
    edges: Vec<(NodeId, NodeId)>,
    adj: Vec<Vec<NodeId>>,
    adj_eid: Vec<Vec<EdgeId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops, duplicates and out-of-range
    /// endpoints are rejected.
    pub fn new(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u >= n {
                return Err(GraphError::MissingNode(u));
            }
            if v >= n {
                return Err(GraphError::MissingNode(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_edges(n, edges))
    }

    /// `edges` must be sorted, deduplicated, with `u < v < n`.
    fn from_sorted_edges(n: usize, edges: Vec<(NodeId, NodeId)>) -> Graph {
        let mut adj: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); n];
        for (eid, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, eid));
            adj[v].push((u, eid));
        }
        let mut nbrs = Vec::with_capacity(n);
        let mut eids = Vec::with_capacity(n);
        for mut list in adj {
            list.sort_unstable();
            nbrs.push(list.iter().map(|&(w, _)| w).collect());
            eids.push(list.iter().map(|&(_, e)| e).collect());
        }
        Graph { name: None, edges, adj: nbrs, adj_eid: eids }
    }

    /// Like [`Graph::new`] but silently drops loops and repeated pairs.
    pub(crate) fn new_lenient(n: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
        let mut edges: Vec<_> = pairs
            .into_iter()
            .filter(|&(u, v)| u != v && u < n && v < n)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_edges(n, edges)
    }

    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Ok(Self::from_sorted_edges(n, edges).with_name(format!("K{n}")))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
        if a + b == 0 {
            return Err(GraphError::Empty);
        }
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        Ok(Self::from_sorted_edges(a + b, edges).with_name(format!("K{a},{b}")))
    }

    pub fn path(n: usize) -> Result<Graph, GraphError> {
        let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &pairs)
    }

    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        let mut pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            pairs.push((0, n - 1));
        }
        Graph::new(n, &pairs)
    }

    /// Removes the listed edges; each must exist.
    pub fn minus_edges(&self, removed: &[(NodeId, NodeId)]) -> Result<Graph, GraphError> {
        let mut drop = vec![false; self.m()];
        for &(u, v) in removed {
            let e = self.edge_id(u, v).ok_or(GraphError::MissingEdge(u, v))?;
            drop[e] = true;
        }
        let edges = self
            .edges
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(&e, _)| e)
            .collect();
        let mut g = Self::from_sorted_edges(self.n(), edges);
        g.name = self.name.as_ref().map(|s| format!("{s}-{}", removed.len()));
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.n()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    /// Edge ids parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.adj_eid[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if u >= self.n() || v >= self.n() {
            return None;
        }
        self.adj[u].binary_search(&v).ok().map(|i| self.adj_eid[u][i])
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Position of `w` in the sorted neighbor list of `v`.
    pub fn neighbor_index(&self, v: NodeId, w: NodeId) -> Option<usize> {
        self.adj[v].binary_search(&w).ok()
    }

    /// Removes `drop` nodes; returns the graph and the old-to-new id map.
    pub fn remove_nodes(&self, drop: &[NodeId]) -> (Graph, Vec<Option<NodeId>>) {
        let mut map = vec![None; self.n()];
        let mut next = 0;
        for v in self.nodes() {
            if !drop.contains(&v) {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((map[u]?, map[v]?)))
            .collect();
        let mut g = Self::from_sorted_edges(next, edges);
        g.name = self.name.clone();
        (g, map)
    }

    /// Two-colouring, if the graph is bipartite. Colour `false` is given to
    /// the smallest node of every component.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n()];
        let mut queue = std::collections::VecDeque::new();
        for root in self.nodes() {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(false);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                for &w in self.neighbors(v) {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    /// Parses the textual edge-list format: one `u v` pair per line,
    /// 0-based ids, `#` starts a comment line. Node count is one more than the
    /// largest id, or the value of an optional `# nodes: N` header.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut pairs = Vec::new();
        let mut declared = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(rest) = comment.trim().strip_prefix("nodes:") {
                    declared = Some(rest.trim().parse::<usize>().map_err(|e| GraphError::Parse {
                        line: i + 1,
                        msg: e.to_string(),
                    })?);
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let mut next_id = || -> Result<NodeId, GraphError> {
                let tok = it.next().ok_or_else(|| GraphError::Parse {
                    line: i + 1,
                    msg: "expected two node ids".into(),
                })?;
                tok.parse().map_err(|_| GraphError::Parse { line: i + 1, msg: format!("bad node id {tok:?}") })
            };
            let u = next_id()?;
            let v = next_id()?;
            pairs.push((u, v));
        }
        let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = declared.map_or(n, |d| d.max(n));
        Graph::new(n, &pairs)
    }

    /// Inverse of [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "# {name}");
        }
        let _ = writeln!(out, "# nodes: {}", self.n());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_sizes() {
        assert_eq!(Graph::complete(7).unwrap().m(), 21);
        assert_eq!(Graph::complete_bipartite(4, 4).unwrap().m(), 16);
        let k33 = Graph::complete_bipartite(3, 3).unwrap();
        assert!(k33.neighbors(0).iter().all(|&v| (3..6).contains(&v)));
    }

    #[test]
    fn k5_minus_two_shape() {
        let spec = GraphSpec::MinusEdges(Box::new(GraphSpec::Complete(5)), vec![(3, 4), (2, 4)]);
        let g = build_graph(&spec).unwrap();
        assert_eq!(g.m(), 8);
        assert_eq!(g.neighbors(4), &[0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::new(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::new(3, &[(2, 2)]), Err(GraphError::SelfLoop(2)));
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(k3.minus_edges(&[(0, 5)]), Err(GraphError::MissingEdge(0, 5)));
    }

    #[test]
    fn edge_ids_are_lexicographic() {
        let g = Graph::new(4, &[(3, 2), (0, 3), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (2, 3)]);
        assert_eq!(g.edge_id(3, 0), Some(1));
        assert_eq!(g.neighbors(3), &[0, 2]);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::complete_bipartite(2, 3).unwrap();
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.n(), g.n());
        assert!(Graph::parse_edge_list("0 x\n").is_err());
        let isolated = Graph::parse_edge_list("# nodes: 5\n0 1\n").unwrap();
        assert_eq!(isolated.n(), 5);
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        assert!(Graph::cycle(5).unwrap().bipartition().is_none());
        let parts = Graph::complete_bipartite(2, 3).unwrap().bipartition().unwrap();
        assert_eq!(parts, vec![false, false, true, true, true]);
    }
}
