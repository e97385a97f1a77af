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

//! Constructive attacks: the adaptive block attack on `K_{3+5r}` and the
//! lifting of small-graph attacks to larger complete (bipartite) graphs.

use std::collections::{BTreeSet, HashMap};

use super::AdversaryError;
use crate::forwarding::{simulate_route, ForwardingPattern, RoutingModel, WalkOutcome, WalkStatus};
use crate::graph::{st_edge_connectivity, FailureSet, Graph, NodeId};

/// What a packet entering a block from `s` does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    Returns,
    Trapped,
}

/// Alive links inside one five-node block plus its links to `s` and `t`.
#[derive(Debug, Clone)]
struct BlockConfig {
    alive: Vec<(NodeId, NodeId)>,
    fate: Fate,
    has_path: bool,
}

struct Attack<'a> {
    g: &'a Graph,
    p: &'a ForwardingPattern,
    s: NodeId,
    t: NodeId,
}

impl Attack<'_> {
    fn run(&self, alive: &[(NodeId, NodeId)]) -> Result<(FailureSet, WalkOutcome), AdversaryError> {
        let f = FailureSet::all_except(self.g, alive)?;
        let out = simulate_route(self.g, &f, self.p, self.s, self.s, self.t)?;
        Ok((f, out))
    }

    /// Classifies a block configuration by simulating it in isolation.
    fn classify(&self, alive: Vec<(NodeId, NodeId)>) -> Result<Option<BlockConfig>, AdversaryError> {
        let (f, out) = self.run(&alive)?;
        let fate = match out.status {
            WalkStatus::Reached { .. } => return Ok(None),
            _ if out.trace.iter().skip(1).any(|&(v, _)| v == self.s) => Fate::Returns,
            _ => Fate::Trapped,
        };
        let has_path = st_edge_connectivity(self.g, &f, self.s, self.t) >= 1;
        Ok(Some(BlockConfig { alive, fate, has_path }))
    }

    fn out_at(&self, v: NodeId, alive: &[NodeId], inport: NodeId) -> Result<NodeId, AdversaryError> {
        Ok(self.p.decide(&self.p.view(v, alive, Some(inport)))?)
    }

    /// Candidate configurations for one block, following the case split:
    /// a degree-two node refusing to pass the packet on, then the orbit of
    /// the entry under the hub's permutation.
    fn block_configs(&self, block: &[NodeId]) -> Result<Vec<BlockConfig>, AdversaryError> {
        let (s, t) = (self.s, self.t);
        let mut found = Vec::new();
        for &a in block {
            for &b in block {
                for &c in block {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let mut alive = [a, c];
                    alive.sort_unstable();
                    if self.out_at(b, &alive, a)? == c {
                        continue;
                    }
                    if let Some(cfg) = self.classify(vec![(s, a), (a, b), (b, c), (c, t)])? {
                        found.push(cfg);
                    }
                }
            }
        }
        for &v1 in block {
            for &v2 in block {
                if v1 == v2 {
                    continue;
                }
                let rest: Vec<NodeId> = block.iter().copied().filter(|&x| x != v1 && x != v2).collect();
                let mut hub: Vec<NodeId> = block.iter().copied().filter(|&x| x != v2).collect();
                hub.sort_unstable();
                let mut orbit = vec![v1];
                let mut x = v1;
                let closes = loop {
                    x = self.out_at(v2, &hub, x)?;
                    if orbit.contains(&x) {
                        break x == v1;
                    }
                    orbit.push(x);
                };
                let spokes = || rest.iter().map(|&x| (v2, x));
                let base = [(s, v1), (v1, v2)];
                if let Some(&vi) = rest.iter().find(|x| !orbit.contains(x)) {
                    let alive = base.into_iter().chain(spokes()).chain([(vi, t)]).collect();
                    found.extend(self.classify(alive)?);
                }
                if !closes {
                    let alive = base.into_iter().chain(spokes()).collect();
                    found.extend(self.classify(alive)?);
                }
                if closes && orbit.len() == 4 {
                    let (a, b, c) = (orbit[1], orbit[2], orbit[3]);
                    let alive = base.into_iter().chain(spokes()).chain([(a, c), (b, t)]).collect();
                    found.extend(self.classify(alive)?);
                }
            }
        }
        Ok(found)
    }
}

/// Builds a failure set on `K_{3+5r}` under which `p` misses `t` although
/// `s` and `t` stay `r`-edge-connected.
///
/// Nodes other than `s` and `t` are split into `r` five-node blocks and one
/// spare node. Each block keeps a single link to `s` and is configured so
/// that either a path to `t` is lost to the packet or the packet is trapped;
/// the spare node keeps its link to `s` and, when a block traps the packet,
/// its link to `t`. Relabelings are explored by trying every spare node and
/// every configuration of the case split. The result is validated by
/// simulation and a Menger check before it is returned.
pub fn attack_complete_r(g: &Graph, p: &ForwardingPattern, r: usize) -> Result<FailureSet, AdversaryError> {
    let n = 3 + 5 * r;
    if r == 0 || g.n() != n || g.m() != n * (n - 1) / 2 {
        return Err(AdversaryError::Precondition(format!("graph must be K{n} for r={r}")));
    }
    if p.model == RoutingModel::Touring {
        return Err(AdversaryError::Precondition("attack needs a routing pattern".into()));
    }
    let Some(t) = p.scope.t else {
        return Err(AdversaryError::Precondition("pattern must carry a destination".into()));
    };
    let s = p.scope.s.unwrap_or(if t == 0 { 1 } else { 0 });
    if s == t || s >= n || t >= n {
        return Err(AdversaryError::Precondition("source and destination must be distinct nodes".into()));
    }
    let attack = Attack { g, p, s, t };
    let others: Vec<NodeId> = g.nodes().filter(|&v| v != s && v != t).collect();
    let mut worst_block = Vec::new();
    let mut cache: HashMap<Vec<NodeId>, Vec<BlockConfig>> = HashMap::new();
    for &spare in &others {
        let rest: Vec<NodeId> = others.iter().copied().filter(|&v| v != spare).collect();
        for block in rest.chunks(5) {
            if !cache.contains_key(block) {
                cache.insert(block.to_vec(), attack.block_configs(block)?);
            }
        }
        let per_block: Vec<(&[NodeId], &Vec<BlockConfig>)> = rest.chunks(5).map(|b| (b, &cache[b])).collect();
        let lacking: Vec<usize> =
            (0..per_block.len()).filter(|&i| !per_block[i].1.iter().any(|c| c.has_path)).collect();
        if lacking.len() > 1 {
            worst_block = per_block[lacking[0]].0.to_vec();
            continue;
        }
        let choices: Vec<Vec<&BlockConfig>> = per_block
            .iter()
            .enumerate()
            .map(|(i, (_, cfgs))| {
                if lacking.contains(&i) {
                    cfgs.iter().filter(|c| c.fate == Fate::Trapped).collect()
                } else {
                    cfgs.iter().filter(|c| c.has_path).collect()
                }
            })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            worst_block = per_block[lacking.first().copied().unwrap_or(0)].0.to_vec();
            continue;
        }
        let need_spare_path = !lacking.is_empty();
        let depth = choices.iter().map(|c| c.len()).max().unwrap_or(1).min(16);
        for pick in 0..depth {
            let mut alive: Vec<(NodeId, NodeId)> = vec![(s, spare)];
            if need_spare_path {
                alive.push((spare, t));
            }
            for c in &choices {
                alive.extend(c[pick.min(c.len() - 1)].alive.iter().copied());
            }
            let (f, out) = attack.run(&alive)?;
            if !matches!(out.status, WalkStatus::Reached { .. }) && st_edge_connectivity(g, &f, s, t) >= r {
                return Ok(f);
            }
            if pick + 1 >= depth {
                worst_block = per_block.last().map(|b| b.0.to_vec()).unwrap_or_default();
            }
        }
    }
    Err(AdversaryError::CaseAnalysis { block: worst_block })
}

/// Target of [`lift_attack`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftShape {
    /// `K_n` with `n >= 8`, lifted from `K_7`.
    Complete(usize),
    /// `K_{a,b}` with `a >= b >= 4`, lifted from `K_{4,4}`.
    Bipartite(usize, usize),
}

/// A small-graph attack embedded in a larger graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedAttack {
    pub graph: Graph,
    pub failures: FailureSet,
    /// Nodes of the small graph, keeping their ids.
    pub real: Vec<NodeId>,
    pub virtual_nodes: Vec<NodeId>,
    pub t: NodeId,
}

impl LiftedAttack {
    /// Alive links between a real node other than `t` and a virtual node.
    pub fn leaks(&self) -> Vec<(NodeId, NodeId)> {
        let virt: BTreeSet<NodeId> = self.virtual_nodes.iter().copied().collect();
        (0..self.graph.m())
            .filter(|&e| !self.failures.contains(e))
            .map(|e| self.graph.edge(e))
            .filter(|&(u, v)| {
                let real_side = |x: NodeId| x != self.t && !virt.contains(&x);
                (real_side(u) && virt.contains(&v)) || (real_side(v) && virt.contains(&u))
            })
            .collect()
    }
}

/// Embeds `inner` (a failure set on `K_7` or `K_{4,4}` with destination `t`)
/// into a larger complete or complete bipartite graph by additionally
/// failing every link between a non-destination real node and a virtual
/// node. A pattern on the large graph then behaves like one on the small
/// graph, since the packet can never reach the virtual part.
///
/// For the bipartite shape the destination's side becomes the smaller part.
pub fn lift_attack(shape: LiftShape, inner: &FailureSet, t: NodeId) -> Result<LiftedAttack, AdversaryError> {
    let (small, graph, virtual_nodes) = match shape {
        LiftShape::Complete(n) => {
            if n < 8 {
                return Err(AdversaryError::Precondition(format!("complete lift needs n >= 8, got {n}")));
            }
            if inner.len() > 15 {
                return Err(AdversaryError::Precondition("inner attack on K7 exceeds 15 links".into()));
            }
            (Graph::complete(7)?, Graph::complete(n)?, (7..n).collect::<Vec<_>>())
        }
        LiftShape::Bipartite(a, b) => {
            if b < 4 || a < b {
                return Err(AdversaryError::Precondition(format!("bipartite lift needs a >= b >= 4, got ({a}, {b})")));
            }
            if inner.len() > 11 {
                return Err(AdversaryError::Precondition("inner attack on K4,4 exceeds 11 links".into()));
            }
            let (cx, cy) = if t < 4 { (b - 4, a - 4) } else { (a - 4, b - 4) };
            let xs: Vec<NodeId> = (0..4).chain(8..8 + cx).collect();
            let ys: Vec<NodeId> = (4..8).chain(8 + cx..8 + cx + cy).collect();
            let pairs: Vec<_> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
            let n = 8 + cx + cy;
            (Graph::complete_bipartite(4, 4)?, Graph::new(n, &pairs)?.with_name(format!("K{a},{b}")), (8..n).collect())
        }
    };
    if inner.universe() != small.m() {
        return Err(AdversaryError::Precondition(format!(
            "inner attack has {} links, expected {}",
            inner.universe(),
            small.m()
        )));
    }
    if t >= small.n() {
        return Err(AdversaryError::Precondition(format!("destination {t} is not a real node")));
    }
    let mut failures = FailureSet::none_for(&graph);
    for (u, v) in inner.edges(&small) {
        failures.insert(graph.edge_id(u, v).expect("real links survive the lift"));
    }
    for u in small.nodes().filter(|&u| u != t) {
        for &x in &virtual_nodes {
            if let Some(e) = graph.edge_id(u, x) {
                failures.insert(e);
            }
        }
    }
    Ok(LiftedAttack { graph, failures, real: small.nodes().collect(), virtual_nodes, t })
}
