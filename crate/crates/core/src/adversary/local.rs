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

use crate::forwarding::{ForwardingError, ForwardingPattern};
use crate::graph::{FailureSet, Graph, NodeId};

/// Neighbors `j` of `v` that could be the only relay towards `t` from `v`'s
/// point of view: `v` reaches `t` in `G \ F_v` once all other alive
/// neighbors of `v` except `t` itself are removed. Only the failures
/// incident to `v` count.
pub fn relevant_neighbors(g: &Graph, f: &FailureSet, v: NodeId, t: NodeId) -> Vec<NodeId> {
    assert_ne!(v, t, "relevance is defined for nodes other than t");
    let alive: Vec<NodeId> = g
        .neighbors(v)
        .iter()
        .zip(g.incident_edges(v))
        .filter(|&(_, &e)| !f.contains(e))
        .map(|(&w, _)| w)
        .collect();
    alive
        .iter()
        .copied()
        .filter(|&j| {
            if j == t {
                return true;
            }
            // search from j avoiding v and the other alive neighbors
            let mut blocked = vec![false; g.n()];
            blocked[v] = true;
            for &x in &alive {
                blocked[x] = x != j && x != t;
            }
            blocked[j] = true;
            let mut stack = vec![j];
            while let Some(x) = stack.pop() {
                if x == t {
                    return true;
                }
                for &y in g.neighbors(x) {
                    if !blocked[y] {
                        blocked[y] = true;
                        stack.push(y);
                    }
                }
            }
            false
        })
        .collect()
}

/// Result of [`orbit_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub relevant: Vec<NodeId>,
    /// Cycles of the local inport-to-outport map over the alive neighbors.
    pub cycles: Vec<Vec<NodeId>>,
    pub pass: bool,
}

/// Whether all relevant neighbors of `v` lie on one cycle of `p`'s local
/// map at `v` under `f`.
pub fn orbit_check(g: &Graph, f: &FailureSet, v: NodeId, p: &ForwardingPattern, t: NodeId) -> Result<OrbitReport, ForwardingError> {
    let relevant = relevant_neighbors(g, f, v, t);
    let alive: Vec<NodeId> = g
        .neighbors(v)
        .iter()
        .zip(g.incident_edges(v))
        .filter(|&(_, &e)| !f.contains(e))
        .map(|(&w, _)| w)
        .collect();
    let map: Vec<NodeId> = alive
        .iter()
        .map(|&u| p.decide(&p.view(v, &alive, Some(u))))
        .collect::<Result<_, _>>()?;
    let index = |x: NodeId| alive.binary_search(&x).expect("outputs are alive neighbors");
    let mut cycles = Vec::new();
    let mut state = vec![0u8; alive.len()];
    for i in 0..alive.len() {
        let mut path = Vec::new();
        let mut j = i;
        while state[j] == 0 {
            state[j] = 1;
            path.push(j);
            j = index(map[j]);
        }
        if state[j] == 1 {
            let at = path.iter().position(|&x| x == j).unwrap();
            cycles.push(path[at..].iter().map(|&x| alive[x]).collect());
        }
        for x in path {
            state[x] = 2;
        }
    }
    let pass = cycles.iter().any(|c: &Vec<NodeId>| relevant.iter().all(|r| c.contains(r)));
    Ok(OrbitReport { relevant, cycles, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forwarding::{LocalView, Provenance, RoutingModel, Scope};

    #[test]
    fn star_center_has_one_relevant_neighbor() {
        // centre 0, leaves 1..3, t=4 hangs off leaf 2
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (2, 4)]).unwrap();
        assert_eq!(relevant_neighbors(&g, &FailureSet::none_for(&g), 0, 4), vec![2]);
    }

    #[test]
    fn complete_graph_all_relevant() {
        let g = Graph::complete(5).unwrap();
        assert_eq!(relevant_neighbors(&g, &FailureSet::none_for(&g), 0, 4), vec![1, 2, 3, 4]);
    }

    #[test]
    fn only_local_failures_count() {
        let g = Graph::complete(4).unwrap();
        // (1,3) fails far from node 0: still relevant from 0's view
        let f = FailureSet::from_edges(&g, &[(1, 3), (0, 3)]).unwrap();
        assert_eq!(relevant_neighbors(&g, &f, 0, 3), vec![1, 2]);
    }

    #[test]
    fn bounce_map_fails_orbit() {
        let scope = Scope { s: None, t: Some(2) };
        let bounce = ForwardingPattern::new(RoutingModel::DestinationOnly, scope, Provenance::new("bounce"), |v: &LocalView<'_>| v.inport);
        let g = Graph::new(4, &[(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        let r = orbit_check(&g, &FailureSet::none_for(&g), 0, &bounce, 2).unwrap();
        assert_eq!(r.relevant, vec![1, 3]);
        assert!(!r.pass);
        assert_eq!(r.cycles, vec![vec![1], vec![3]]);
    }
}
