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

use super::{ForwardingError, ForwardingPattern, RoutingModel};
use crate::graph::{FailureSet, Graph, NodeId};

/// Alive neighbor lists of every node in `G \ F`, stored flat.
#[derive(Debug, Clone, Default)]
pub struct Survivors {
    off: Vec<usize>,
    flat: Vec<NodeId>,
}

impl Survivors {
    pub fn new(g: &Graph, f: &FailureSet) -> Survivors {
        let mut s = Survivors::default();
        s.refill(g, f);
        s
    }

    pub fn refill(&mut self, g: &Graph, f: &FailureSet) {
        self.off.clear();
        self.flat.clear();
        self.off.push(0);
        for v in g.nodes() {
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                if !f.contains(e) {
                    self.flat.push(w);
                }
            }
            self.off.push(self.flat.len());
        }
    }

    pub fn alive(&self, v: NodeId) -> &[NodeId] {
        &self.flat[self.off[v]..self.off[v + 1]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkStatus {
    Reached { hops: usize },
    /// The state at trace index `prefix_len` recurs after `cycle_len` steps.
    Looped { prefix_len: usize, cycle_len: usize },
    Isolated,
}

/// A trace entry: the node and the neighbor the packet came from (`None` for ⊥).
pub type State = (NodeId, Option<NodeId>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkOutcome {
    pub status: WalkStatus,
    pub trace: Vec<State>,
}

impl WalkOutcome {
    /// Nodes of the periodic part of a looping walk.
    pub fn cycle_nodes(&self) -> Vec<NodeId> {
        match self.status {
            WalkStatus::Looped { prefix_len, .. } => self.trace[prefix_len..].iter().map(|s| s.0).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TourStatus {
    TourComplete,
    /// `missing` lists unvisited nodes of the start's component; it is
    /// empty when every node was seen but the walk never came back.
    TourFailed { missing: Vec<NodeId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourOutcome {
    pub status: TourStatus,
    pub trace: Vec<State>,
}

const UNSEEN: usize = usize::MAX;

/// Reusable simulation scratch space for one graph.
#[derive(Debug, Clone)]
pub struct Walker<'g> {
    g: &'g Graph,
    state_off: Vec<usize>,
    seen: Vec<usize>,
    touched: Vec<usize>,
    survivors: Survivors,
    mark: Vec<bool>,
    stack: Vec<NodeId>,
    pub trace: Vec<State>,
}

impl<'g> Walker<'g> {
    pub fn new(g: &'g Graph) -> Walker<'g> {
        let mut state_off = Vec::with_capacity(g.n() + 1);
        let mut total = 0;
        for v in g.nodes() {
            state_off.push(total);
            total += g.degree(v) + 1;
        }
        state_off.push(total);
        Walker {
            g,
            state_off,
            seen: vec![UNSEEN; total],
            touched: Vec::new(),
            survivors: Survivors::new(g, &FailureSet::none_for(g)),
            mark: vec![false; g.n()],
            stack: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    /// Number of distinct (node, inport) states.
    pub fn state_count(&self) -> usize {
        self.state_off[self.g.n()]
    }

    pub fn set_failures(&mut self, f: &FailureSet) {
        self.survivors.refill(self.g, f);
    }

    pub fn survivors(&self) -> &Survivors {
        &self.survivors
    }

    fn state(&self, v: NodeId, inport: Option<NodeId>) -> usize {
        self.state_off[v] + inport.map_or(0, |u| self.g.neighbor_index(v, u).expect("inport is a neighbor") + 1)
    }

    fn reset(&mut self) {
        for &i in &self.touched {
            self.seen[i] = UNSEEN;
        }
        self.touched.clear();
        self.trace.clear();
    }

    /// Walks from `(start, ⊥)` under the current failures, stopping at
    /// `stop` if given. The trace is left in `self.trace`.
    fn walk(&mut self, p: &ForwardingPattern, start: NodeId, stop: Option<NodeId>) -> Result<WalkStatus, ForwardingError> {
        self.reset();
        let (mut cur, mut inport) = (start, None);
        loop {
            if stop == Some(cur) {
                self.trace.push((cur, inport));
                return Ok(WalkStatus::Reached { hops: self.trace.len() - 1 });
            }
            let idx = self.state(cur, inport);
            let first = self.seen[idx];
            if first != UNSEEN {
                return Ok(WalkStatus::Looped { prefix_len: first, cycle_len: self.trace.len() - first });
            }
            self.seen[idx] = self.trace.len();
            self.touched.push(idx);
            self.trace.push((cur, inport));
            let alive = self.survivors.alive(cur);
            if alive.is_empty() {
                return Ok(WalkStatus::Isolated);
            }
            let out = p.decide(&p.view(cur, alive, inport))?;
            inport = Some(cur);
            cur = out;
        }
    }

    /// Routes with the scope of `p` towards its destination.
    pub fn route(&mut self, p: &ForwardingPattern, start: NodeId) -> Result<WalkStatus, ForwardingError> {
        let t = p.scope.t.ok_or_else(|| ForwardingError::Scope("pattern has no destination".into()))?;
        self.walk(p, start, Some(t))
    }

    /// Whether the walk from `start` delivers to the destination of `p`.
    pub fn delivers(&mut self, p: &ForwardingPattern, start: NodeId) -> Result<bool, ForwardingError> {
        Ok(matches!(self.route(p, start)?, WalkStatus::Reached { .. }))
    }

    /// Nodes in the component of `start` under the current failures, sorted.
    pub fn component_of(&mut self, start: NodeId) -> Vec<NodeId> {
        self.mark.iter_mut().for_each(|m| *m = false);
        self.mark[start] = true;
        self.stack.clear();
        self.stack.push(start);
        let mut out = vec![start];
        while let Some(v) = self.stack.pop() {
            for &w in self.survivors.alive(v) {
                if !self.mark[w] {
                    self.mark[w] = true;
                    self.stack.push(w);
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn tour(&mut self, p: &ForwardingPattern, start: NodeId) -> Result<TourStatus, ForwardingError> {
        let component = self.component_of(start);
        let status = self.walk(p, start, None)?;
        if component.len() == 1 {
            return Ok(TourStatus::TourComplete);
        }
        let mut first_visit = vec![usize::MAX; self.g.n()];
        let mut last_first = 0;
        for (i, &(v, _)) in self.trace.iter().enumerate() {
            if first_visit[v] == usize::MAX {
                first_visit[v] = i;
                last_first = i;
            }
        }
        let missing: Vec<NodeId> = component.into_iter().filter(|&v| first_visit[v] == usize::MAX).collect();
        if !missing.is_empty() {
            return Ok(TourStatus::TourFailed { missing });
        }
        let prefix_len = match status {
            WalkStatus::Looped { prefix_len, .. } => prefix_len,
            _ => unreachable!("a tour walk in a nontrivial component only ends by looping"),
        };
        let returns = self.trace[prefix_len..].iter().any(|s| s.0 == start)
            || self.trace[last_first + 1..].iter().any(|s| s.0 == start);
        Ok(if returns { TourStatus::TourComplete } else { TourStatus::TourFailed { missing } })
    }
}

/// Walk of a routing pattern from `start` in `G \ F` towards `t`.
pub fn simulate_route(
    g: &Graph,
    f: &FailureSet,
    p: &ForwardingPattern,
    start: NodeId,
    s: NodeId,
    t: NodeId,
) -> Result<WalkOutcome, ForwardingError> {
    if p.model == RoutingModel::Touring {
        return Err(ForwardingError::Scope("touring patterns are simulated with simulate_tour".into()));
    }
    if p.scope.t != Some(t) {
        return Err(ForwardingError::Scope(format!("pattern is built for t={:?}, not {t}", p.scope.t)));
    }
    if p.model == RoutingModel::SourceDestination && (p.scope.s != Some(s) || start != s) {
        return Err(ForwardingError::Scope(format!("source-destination pattern must start at s={s}")));
    }
    let mut w = Walker::new(g);
    w.set_failures(f);
    let status = w.route(p, start)?;
    Ok(WalkOutcome { status, trace: std::mem::take(&mut w.trace) })
}

/// Walk of a touring pattern from `start` in `G \ F`.
pub fn simulate_tour(g: &Graph, f: &FailureSet, p: &ForwardingPattern, start: NodeId) -> Result<TourOutcome, ForwardingError> {
    if p.model != RoutingModel::Touring {
        return Err(ForwardingError::Scope("simulate_tour needs a touring pattern".into()));
    }
    let mut w = Walker::new(g);
    w.set_failures(f);
    let status = w.tour(p, start)?;
    Ok(TourOutcome { status, trace: std::mem::take(&mut w.trace) })
}
