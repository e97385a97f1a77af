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

use std::collections::VecDeque;

use super::{EdgeId, FailureSet, Graph, NodeId};

/// `G \ F` together with the original id of every surviving edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub original_eid: Vec<EdgeId>,
}

pub fn surviving_subgraph(g: &Graph, f: &FailureSet) -> Subgraph {
    let (pairs, ids): (Vec<_>, Vec<_>) = (0..g.m())
        .filter(|&e| !f.contains(e))
        .map(|e| (g.edge(e), e))
        .unzip();
    // survivors are already sorted, so eids map monotonically
    let mut graph = Graph::new_lenient(g.n(), pairs);
    if let Some(name) = g.name() {
        graph = graph.with_name(name);
    }
    Subgraph { graph, original_eid: ids }
}

/// Nodes reachable from `from` in `G \ F`.
pub(crate) fn reachable(g: &Graph, f: &FailureSet, from: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
            if !seen[w] && !f.contains(e) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Connected components of `G \ F`, each sorted, ordered by smallest member.
pub fn components(g: &Graph, f: &FailureSet) -> Vec<Vec<NodeId>> {
    let mut parent: Vec<NodeId> = (0..g.n()).collect();
    fn find(parent: &mut [NodeId], mut v: NodeId) -> NodeId {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if f.contains(e) {
            continue;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut slot: Vec<Option<usize>> = vec![None; g.n()];
    let mut out: Vec<Vec<NodeId>> = Vec::new();
    for v in g.nodes() {
        let r = find(&mut parent, v);
        let idx = *slot[r].get_or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[idx].push(v);
    }
    out
}

pub fn is_connected(g: &Graph, f: &FailureSet) -> bool {
    g.n() <= 1 || reachable(g, f, 0).iter().all(|&b| b)
}

/// Maximum number of pairwise edge-disjoint `u`-`v` paths in `G \ F`,
/// computed as a unit-capacity max-flow with BFS augmentation.
pub fn st_edge_connectivity(g: &Graph, f: &FailureSet, u: NodeId, v: NodeId) -> usize {
    assert_ne!(u, v, "connectivity of a node with itself");
    // residual capacity per (edge, direction): index 2e is u->v for edge (u<v)
    let mut cap = vec![0u8; 2 * g.m()];
    for e in 0..g.m() {
        if !f.contains(e) {
            cap[2 * e] = 1;
            cap[2 * e + 1] = 1;
        }
    }
    let arc = |e: EdgeId, from: NodeId| -> usize {
        if g.edge(e).0 == from {
            2 * e
        } else {
            2 * e + 1
        }
    };
    let mut flow = 0;
    let mut pred: Vec<Option<(NodeId, EdgeId)>> = vec![None; g.n()];
    loop {
        pred.iter_mut().for_each(|p| *p = None);
        let mut visited = vec![false; g.n()];
        visited[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for (&y, &e) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
                if !visited[y] && cap[arc(e, x)] > 0 {
                    visited[y] = true;
                    pred[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        if !visited[v] {
            return flow;
        }
        let mut y = v;
        while let Some((x, e)) = pred[y] {
            cap[arc(e, x)] -= 1;
            cap[arc(e, y)] += 1;
            y = x;
        }
        flow += 1;
    }
}

/// Biconnected components (blocks) of `g` as sorted edge-id lists, ordered
/// by smallest edge id. Bridges form single-edge blocks; isolated nodes
/// belong to no block.
pub fn biconnected_components(g: &Graph) -> Vec<Vec<EdgeId>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut blocks = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frame: (node, edge used to enter, next neighbor index)
        let mut stack: Vec<(NodeId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, via, ref mut i)) = stack.last_mut() {
            if *i < g.degree(v) {
                let (w, e) = (g.neighbors(v)[*i], g.incident_edges(v)[*i]);
                *i += 1;
                if Some(e) == via {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, Some(e), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let e = via.expect("non-root frames have an entry edge");
                        let mut block = Vec::new();
                        while let Some(x) = edge_stack.pop() {
                            block.push(x);
                            if x == e {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks.sort();
    blocks
}
