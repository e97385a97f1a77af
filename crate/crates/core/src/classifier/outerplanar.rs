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

use super::planarity::planar_embedding;
use super::small::Named;
use crate::graph::{biconnected_components, Graph, MinorMapping, NodeId};

/// Rotation system of an outerplanar graph with every node on one face.
/// Each rotation starts right after the (removed) apex slot, so its first
/// entry is the outer-face successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterplanarEmbedding {
    pub rotation: Vec<Vec<NodeId>>,
    pub outer_cycle: Vec<NodeId>,
}

impl OuterplanarEmbedding {
    /// Next neighbor of `v` strictly after `u` in rotation order that
    /// satisfies `alive`, wrapping; `u` itself if nothing else qualifies.
    pub fn next_alive(&self, v: NodeId, u: NodeId, alive: impl Fn(NodeId) -> bool) -> Option<NodeId> {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&x| x == u)?;
        (1..=rot.len()).map(|k| rot[(i + k) % rot.len()]).find(|&x| alive(x))
    }

    /// First neighbor of `v` in rotation order that satisfies `alive`.
    pub fn first_alive(&self, v: NodeId, alive: impl Fn(NodeId) -> bool) -> Option<NodeId> {
        self.rotation[v].iter().copied().find(|&x| alive(x))
    }
}

/// Outerplanar embedding via planarity of `g` plus a universal apex node.
pub fn outerplanar_embedding(g: &Graph) -> Option<OuterplanarEmbedding> {
    let apex = g.n();
    let pairs: Vec<_> = g.edges().iter().copied().chain(g.nodes().map(|v| (v, apex))).collect();
    let h = Graph::new(g.n() + 1, &pairs).expect("apex extension is simple");
    let emb = planar_embedding(&h)?;
    let rotation = g
        .nodes()
        .map(|v| {
            let rot = &emb.rotation[v];
            let i = rot.iter().position(|&x| x == apex).expect("apex is adjacent to all");
            rot[i + 1..].iter().chain(&rot[..i]).copied().collect()
        })
        .collect();
    Some(OuterplanarEmbedding { rotation, outer_cycle: emb.rotation[apex].clone() })
}

pub fn is_outerplanar_graph(g: &Graph) -> bool {
    outerplanar_embedding(g).is_some()
}

/// Outcome of an outerplanarity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outerplanarity {
    Outerplanar(OuterplanarEmbedding),
    /// A `K4` or `K_{2,3}` minor model.
    Obstructed { obstruction: Named, mapping: MinorMapping },
}

impl Outerplanarity {
    pub fn holds(&self) -> bool {
        matches!(self, Outerplanarity::Outerplanar(_))
    }
}

/// Decides outerplanarity; a negative answer carries a `K4` or `K_{2,3}`
/// minor model.
pub fn is_outerplanar(g: &Graph) -> Outerplanarity {
    match outerplanar_embedding(g) {
        Some(emb) => Outerplanarity::Outerplanar(emb),
        None => {
            let (obstruction, mapping) = obstruction(g);
            Outerplanarity::Obstructed { obstruction, mapping }
        }
    }
}

fn obstruction(g: &Graph) -> (Named, MinorMapping) {
    let sub = |edges: &[(NodeId, NodeId)]| Graph::new(g.n(), edges).expect("subgraph of a simple graph");
    let mut edges: Vec<(NodeId, NodeId)> = biconnected_components(g)
        .into_iter()
        .map(|b| b.into_iter().map(|e| g.edge(e)).collect::<Vec<_>>())
        .find(|b| !is_outerplanar_graph(&sub(b)))
        .expect("a non-outerplanar graph has a non-outerplanar block");
    // shrink to an edge-minimal non-outerplanar subgraph
    let mut i = 0;
    while i < edges.len() {
        let mut rest = edges.clone();
        rest.remove(i);
        if is_outerplanar_graph(&sub(&rest)) {
            i += 1;
        } else {
            edges = rest;
        }
    }
    let s = sub(&edges);
    let branch: Vec<NodeId> = s.nodes().filter(|&v| s.degree(v) >= 3).collect();
    let trace = |from: NodeId, first: NodeId| {
        let (mut prev, mut cur, mut inner) = (from, first, Vec::new());
        while s.degree(cur) == 2 {
            inner.push(cur);
            let next = s.neighbors(cur).iter().copied().find(|&w| w != prev).expect("degree two");
            (prev, cur) = (cur, next);
        }
        (inner, cur)
    };
    let mut map = vec![None; g.n()];
    let named = if branch.len() == 4 {
        for (x, &b) in branch.iter().enumerate() {
            map[b] = Some(x);
        }
        for (x, &b) in branch.iter().enumerate() {
            for &w in s.neighbors(b) {
                let (inner, end) = trace(b, w);
                if end > b {
                    for v in inner {
                        map[v] = Some(x);
                    }
                }
            }
        }
        Named::K4
    } else {
        assert_eq!(branch.len(), 2, "minimal obstruction is a K4 or K2,3 subdivision");
        let (a, b) = (branch[0], branch[1]);
        map[a] = Some(0);
        map[b] = Some(1);
        for (i, &w) in s.neighbors(a).iter().enumerate() {
            let (inner, end) = trace(a, w);
            debug_assert_eq!(end, b);
            map[inner[0]] = Some(2 + i);
            for &v in &inner[1..] {
                map[v] = Some(1);
            }
        }
        Named::K23
    };
    let mapping = MinorMapping::from_node_map(g, &named.graph(), &map).expect("traced subdivision is a valid model");
    (named, mapping)
}
