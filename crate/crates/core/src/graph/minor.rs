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

use super::{Graph, GraphError, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorOp {
    /// Merge the endpoints of an existing edge into the smaller id.
    Contract(NodeId, NodeId),
    DeleteEdge(NodeId, NodeId),
    DeleteNode(NodeId),
}

/// Result of one or more minor operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorResult {
    pub graph: Graph,
    /// Old id to new id; `None` for deleted nodes.
    pub map: Vec<Option<NodeId>>,
}

impl MinorResult {
    /// Branch sets and edge witnesses of the result inside the original graph.
    pub fn mapping(&self, original: &Graph) -> MinorMapping {
        MinorMapping::from_node_map(original, &self.graph, &self.map)
            .expect("minor operations yield a valid model")
    }
}

pub fn apply_minor_op(g: &Graph, op: MinorOp) -> Result<MinorResult, GraphError> {
    let check = |v: NodeId| if v < g.n() { Ok(()) } else { Err(GraphError::MissingNode(v)) };
    match op {
        MinorOp::DeleteNode(v) => {
            check(v)?;
            let (graph, map) = g.remove_nodes(&[v]);
            Ok(MinorResult { graph, map })
        }
        MinorOp::DeleteEdge(u, v) => {
            check(u)?;
            check(v)?;
            if !g.has_edge(u, v) {
                return Err(GraphError::MissingEdge(u, v));
            }
            let key = (u.min(v), u.max(v));
            let pairs = g.edges().iter().copied().filter(|&e| e != key);
            let mut graph = Graph::new_lenient(g.n(), pairs);
            graph.name = g.name.clone();
            Ok(MinorResult { graph, map: (0..g.n()).map(Some).collect() })
        }
        MinorOp::Contract(u, v) => {
            check(u)?;
            check(v)?;
            if !g.has_edge(u, v) {
                return Err(GraphError::MissingEdge(u, v));
            }
            let (keep, gone) = (u.min(v), u.max(v));
            let map: Vec<Option<NodeId>> = g
                .nodes()
                .map(|x| {
                    let x = if x == gone { keep } else { x };
                    Some(if x > gone { x - 1 } else { x })
                })
                .collect();
            let pairs = g.edges().iter().map(|&(a, b)| (map[a].unwrap(), map[b].unwrap()));
            let mut graph = Graph::new_lenient(g.n() - 1, pairs);
            graph.name = g.name.clone();
            Ok(MinorResult { graph, map })
        }
    }
}

/// Applies `ops` in order. Node ids in each op refer to the graph produced
/// by the preceding ops; the returned map composes all steps.
pub fn minor_by_ops(g: &Graph, ops: &[MinorOp]) -> Result<MinorResult, GraphError> {
    let mut acc = MinorResult { graph: g.clone(), map: g.nodes().map(Some).collect() };
    for &op in ops {
        let step = apply_minor_op(&acc.graph, op)?;
        acc.map = acc.map.iter().map(|o| o.and_then(|x| step.map[x])).collect();
        acc.graph = step.graph;
    }
    Ok(acc)
}

/// A model of `H` inside `G`: one connected branch set per `H` node and a
/// `G` edge between the branch sets of every `H` edge.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MinorMapping {
    pub branch_sets: Vec<Vec<NodeId>>,
    /// Indexed by `H` edge id; the pair is ordered as the `H` edge.
    pub edge_witness: Vec<(NodeId, NodeId)>,
}

impl MinorMapping {
    /// Builds the model induced by an old-to-new node map, picking the
    /// lexicographically smallest witness per `H` edge.
    pub fn from_node_map(g: &Graph, h: &Graph, map: &[Option<NodeId>]) -> Result<MinorMapping, GraphError> {
        let mut branch_sets = vec![Vec::new(); h.n()];
        for (v, o) in map.iter().enumerate() {
            if let Some(x) = *o {
                if x >= h.n() {
                    return Err(GraphError::InvalidMinor(format!("node {v} maps outside H")));
                }
                branch_sets[x].push(v);
            }
        }
        let mut edge_witness = Vec::with_capacity(h.m());
        for &(a, b) in h.edges() {
            let w = g
                .edges()
                .iter()
                .find_map(|&(u, v)| match (map[u], map[v]) {
                    (Some(x), Some(y)) if (x, y) == (a, b) => Some((u, v)),
                    (Some(x), Some(y)) if (x, y) == (b, a) => Some((v, u)),
                    _ => None,
                })
                .ok_or_else(|| GraphError::InvalidMinor(format!("no witness for H edge ({a}, {b})")))?;
            edge_witness.push(w);
        }
        let m = MinorMapping { branch_sets, edge_witness };
        m.validate(g, h)?;
        Ok(m)
    }

    pub fn validate(&self, g: &Graph, h: &Graph) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidMinor(msg));
        if self.branch_sets.len() != h.n() {
            return bad(format!("{} branch sets for {} H nodes", self.branch_sets.len(), h.n()));
        }
        if self.edge_witness.len() != h.m() {
            return bad(format!("{} witnesses for {} H edges", self.edge_witness.len(), h.m()));
        }
        let mut owner = vec![None; g.n()];
        for (x, set) in self.branch_sets.iter().enumerate() {
            if set.is_empty() {
                return bad(format!("branch set of {x} is empty"));
            }
            for &v in set {
                if v >= g.n() {
                    return bad(format!("node {v} not in G"));
                }
                if owner[v].replace(x).is_some() {
                    return bad(format!("node {v} in two branch sets"));
                }
            }
            // connectivity inside the set
            let mut seen = vec![set[0]];
            let mut stack = vec![set[0]];
            while let Some(v) = stack.pop() {
                for &w in g.neighbors(v) {
                    if owner[w] == Some(x) && !seen.contains(&w) && set.contains(&w) {
                        seen.push(w);
                        stack.push(w);
                    }
                }
            }
            if seen.len() != set.len() {
                return bad(format!("branch set of {x} is disconnected"));
            }
        }
        for (e, (&(a, b), &(u, v))) in h.edges().iter().zip(&self.edge_witness).enumerate() {
            if !g.has_edge(u, v) || owner[u] != Some(a) || owner[v] != Some(b) {
                return bad(format!("witness ({u}, {v}) does not realise H edge {e}"));
            }
        }
        Ok(())
    }
}
