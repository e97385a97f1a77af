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

use std::collections::HashSet;
use std::sync::Arc;

use super::PatternError;
use crate::forwarding::{ForwardingPattern, LocalView, Provenance, Scope};
use crate::graph::{Graph, MinorMapping, NodeId};

struct Projection {
    g: Graph,
    p: ForwardingPattern,
    owner: Vec<Option<NodeId>>,
    /// Per minor node `x`: its branch set and, per minor neighbor `z`, the
    /// witness edge as (endpoint in `x`, endpoint in `z`).
    branch: Vec<Vec<NodeId>>,
    witness: Vec<Vec<(NodeId, NodeId, NodeId)>>,
    entry: Vec<NodeId>,
}

impl Projection {
    fn witness(&self, x: NodeId, z: NodeId) -> Option<(NodeId, NodeId)> {
        self.witness[x].iter().find(|w| w.0 == z).map(|w| (w.1, w.2))
    }

    /// Alive neighbors of `c` (inside branch set of `x`) when the minor
    /// node `x` sees `alive`: internal links plus live witness links.
    fn alive_at(&self, x: NodeId, c: NodeId, alive: &[NodeId]) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self.g.neighbors(c).iter().copied().filter(|&d| self.owner[d] == Some(x)).collect();
        for &(z, a, b) in &self.witness[x] {
            if a == c && alive.binary_search(&z).is_ok() {
                out.push(b);
            }
        }
        out.sort_unstable();
        out
    }

    fn decide(&self, v: &LocalView<'_>) -> Option<NodeId> {
        let x = v.node;
        let (mut cur, mut inport) = match v.inport {
            Some(y) => {
                let (a, b) = self.witness(x, y)?;
                (a, Some(b))
            }
            None => (self.entry[x], None),
        };
        let mut seen = HashSet::new();
        while seen.insert((cur, inport)) {
            let alive = self.alive_at(x, cur, v.alive);
            if alive.is_empty() {
                break;
            }
            let view = self.p.view(cur, &alive, inport);
            let out = self.p.decide(&view).ok()?;
            if self.owner[out] != Some(x) {
                return self.owner[out];
            }
            inport = Some(cur);
            cur = out;
        }
        // the walk never leaves the branch set: bounce
        v.inport.or_else(|| v.alive.first().copied())
    }
}

/// A pattern on the minor `h` that simulates `p` on `g`: branch sets are
/// traversed internally with all internal links alive, each minor link is
/// its witness link, and every other link of `g` counts as failed.
pub fn project_to_minor(g: &Graph, p: &ForwardingPattern, h: &Graph, m: &MinorMapping) -> Result<ForwardingPattern, PatternError> {
    m.validate(g, h)?;
    let mut owner = vec![None; g.n()];
    for (x, set) in m.branch_sets.iter().enumerate() {
        for &v in set {
            owner[v] = Some(x);
        }
    }
    let mut witness = vec![Vec::new(); h.n()];
    for (&(a, b), &(u, v)) in h.edges().iter().zip(&m.edge_witness) {
        witness[a].push((b, u, v));
        witness[b].push((a, v, u));
    }
    if [p.scope.s, p.scope.t].iter().flatten().any(|&v| owner[v].is_none()) {
        return Err(PatternError::Shape("scope nodes must lie in branch sets".into()));
    }
    let scope = Scope { s: p.scope.s.and_then(|v| owner[v]), t: p.scope.t.and_then(|v| owner[v]) };
    if let (Some(s), Some(t)) = (p.scope.s, p.scope.t) {
        if owner[s] == owner[t] {
            return Err(PatternError::Shape("source and destination must lie in distinct branch sets".into()));
        }
    }
    let entry = m
        .branch_sets
        .iter()
        .enumerate()
        .map(|(x, set)| match p.scope.s {
            Some(s) if owner[s] == Some(x) => s,
            _ => set[0],
        })
        .collect();
    let proj = Arc::new(Projection { g: g.clone(), p: p.clone(), owner, branch: m.branch_sets.clone(), witness, entry });
    let prov = Provenance::new("projection").with("of", &p.provenance.generator).with("branch_sets", format!("{:?}", proj.branch));
    Ok(ForwardingPattern::new(p.model, scope, prov, move |v: &LocalView<'_>| proj.decide(v)))
}
