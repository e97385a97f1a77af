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

use std::collections::HashMap;

use super::{fallback, OuterplanarEmbedding, PatternError};
use crate::forwarding::{ForwardingPattern, LocalView, Provenance, RoutingModel, Scope};
use crate::graph::{Graph, NodeId};

/// Right-hand-rule walk on an induced subgraph, given by its embedding and
/// the id maps between the two graphs.
#[derive(Debug, Clone)]
pub(crate) struct SubTour {
    emb: OuterplanarEmbedding,
    to_sub: Vec<Option<NodeId>>,
    from_sub: Vec<NodeId>,
}

impl SubTour {
    pub(crate) fn new(emb: OuterplanarEmbedding, to_sub: Vec<Option<NodeId>>) -> SubTour {
        let mut from_sub = vec![0; emb.rotation.len()];
        for (v, o) in to_sub.iter().enumerate() {
            if let Some(x) = *o {
                from_sub[x] = v;
            }
        }
        SubTour { emb, to_sub, from_sub }
    }

    pub(crate) fn identity(emb: OuterplanarEmbedding) -> SubTour {
        let to_sub = (0..emb.rotation.len()).map(Some).collect();
        SubTour::new(emb, to_sub)
    }

    /// Next hop along the face, or `None` if the node is outside the
    /// subgraph or has no alive neighbor inside it.
    pub(crate) fn step(&self, v: &LocalView<'_>) -> Option<NodeId> {
        let sv = self.to_sub[v.node]?;
        let alive = |x: NodeId| v.is_alive(self.from_sub[x]);
        let next = match v.inport.and_then(|u| self.to_sub[u]) {
            Some(su) => self.emb.next_alive(sv, su, alive),
            None => self.emb.first_alive(sv, alive),
        };
        next.map(|x| self.from_sub[x])
    }
}

/// Touring by the right-hand rule: forward to the next alive neighbor after
/// the inport in rotation order; ⊥ starts with the outer-face successor.
pub fn gen_outerplanar_tour(g: &Graph, emb: &OuterplanarEmbedding) -> Result<ForwardingPattern, PatternError> {
    if emb.rotation.len() != g.n()
        || g.nodes().any(|v| {
            let mut r = emb.rotation[v].clone();
            r.sort_unstable();
            r != g.neighbors(v)
        })
    {
        return Err(PatternError::Shape("embedding does not match the graph".into()));
    }
    let walk = SubTour::identity(emb.clone());
    let rule = move |v: &LocalView<'_>| walk.step(v).or_else(|| fallback(v));
    Ok(ForwardingPattern::new(RoutingModel::Touring, Scope::default(), Provenance::new("outerplanar-tour"), rule))
}

/// Touring with fixed cyclic neighbor orders: the next alive neighbor after
/// the inport in `orders[v]`, and the first alive one for ⊥.
pub fn cyclic_tour(g: &Graph, orders: Vec<Vec<NodeId>>) -> Result<ForwardingPattern, PatternError> {
    if orders.len() != g.n()
        || g.nodes().any(|v| {
            let mut r = orders[v].clone();
            r.sort_unstable();
            r != g.neighbors(v)
        })
    {
        return Err(PatternError::Shape("each order must list the node's neighbors".into()));
    }
    let prov = Provenance::new("cyclic-tour").with("orders", format!("{orders:?}"));
    let rule = move |v: &LocalView<'_>| {
        let order = &orders[v.node];
        let start = match v.inport {
            None => return order.iter().copied().find(|&x| v.is_alive(x)),
            Some(u) => order.iter().position(|&x| x == u)?,
        };
        (1..=order.len()).map(|k| order[(start + k) % order.len()]).find(|&x| v.is_alive(x))
    };
    Ok(ForwardingPattern::new(RoutingModel::Touring, Scope::default(), prov, rule))
}

/// Every cyclic-permutation touring pattern of `g`: one cyclic order per
/// node, each written starting from its smallest neighbor.
pub fn all_cyclic_tours(g: &Graph) -> Vec<ForwardingPattern> {
    fn perms(items: &[NodeId]) -> Vec<Vec<NodeId>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        (0..items.len())
            .flat_map(|i| {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                perms(&rest).into_iter().map(move |mut p| {
                    p.insert(0, x);
                    p
                })
            })
            .collect()
    }
    let per_node: Vec<Vec<Vec<NodeId>>> = g
        .nodes()
        .map(|v| {
            let nb = g.neighbors(v);
            if nb.is_empty() {
                return vec![Vec::new()];
            }
            perms(&nb[1..]).into_iter().map(|p| [&nb[..1], &p[..]].concat()).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0; g.n()];
    loop {
        let orders = idx.iter().enumerate().map(|(v, &i)| per_node[v][i].clone()).collect();
        out.push(cyclic_tour(g, orders).expect("orders list the neighbors"));
        let mut v = g.n();
        loop {
            if v == 0 {
                return out;
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < per_node[v].len() {
                break;
            }
            idx[v] = 0;
        }
    }
}

/// Edge-disjoint Hamiltonian cycles, each as a node sequence without the
/// closing repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamDecomposition {
    pub n: usize,
    pub cycles: Vec<Vec<NodeId>>,
}

impl HamDecomposition {
    /// Checks that every cycle is Hamiltonian in `g` and no edge is reused.
    pub fn validate(&self, g: &Graph) -> Result<(), PatternError> {
        let mut used = vec![false; g.m()];
        for c in &self.cycles {
            let mut seen = vec![false; g.n()];
            if c.len() != g.n() || c.iter().any(|&v| v >= g.n() || std::mem::replace(&mut seen[v], true)) {
                return Err(PatternError::Shape("cycle is not Hamiltonian".into()));
            }
            for i in 0..c.len() {
                let e = g
                    .edge_id(c[i], c[(i + 1) % c.len()])
                    .ok_or_else(|| PatternError::Shape("cycle uses a non-edge".into()))?;
                if std::mem::replace(&mut used[e], true) {
                    return Err(PatternError::Shape("cycles share an edge".into()));
                }
            }
        }
        Ok(())
    }
}

fn is_complete(g: &Graph) -> bool {
    g.m() == g.n() * (g.n() - 1) / 2
}

fn walecki(n: usize) -> Vec<Vec<NodeId>> {
    // n odd; nodes 0..n-1 on a circle of size 2k = n-1, centre n-1
    let k = (n - 1) / 2;
    let ring = 2 * k;
    (0..k)
        .map(|i| {
            let mut c = vec![n - 1, i];
            for j in 1..=k {
                c.push((i + j) % ring);
                if j < k {
                    c.push((i + ring - j) % ring);
                }
            }
            c
        })
        .collect()
}

/// Inserts node `x` into every cycle by replacing one edge per cycle; the
/// replaced edges must be pairwise vertex-disjoint.
fn insert_extra(cycles: Vec<Vec<NodeId>>, x: NodeId) -> Option<Vec<Vec<NodeId>>> {
    fn search(cycles: &[Vec<NodeId>], i: usize, used: &mut Vec<NodeId>, pick: &mut Vec<usize>) -> bool {
        if i == cycles.len() {
            return true;
        }
        let c = &cycles[i];
        for p in 0..c.len() {
            let (a, b) = (c[p], c[(p + 1) % c.len()]);
            if used.contains(&a) || used.contains(&b) {
                continue;
            }
            used.extend([a, b]);
            pick.push(p);
            if search(cycles, i + 1, used, pick) {
                return true;
            }
            pick.pop();
            used.truncate(used.len() - 2);
        }
        false
    }
    let mut pick = Vec::new();
    if !search(&cycles, 0, &mut Vec::new(), &mut pick) {
        return None;
    }
    Some(
        cycles
            .into_iter()
            .zip(pick)
            .map(|(mut c, p)| {
                c.insert(p + 1, x);
                c
            })
            .collect(),
    )
}

/// Hamiltonian decomposition of `K_n` (Walecki; for even `n` the extra node
/// is spliced into the `(n-2)/2` cycles of `K_{n-1}`) or of `K_{a,a}` with
/// even `a` (parts `0..a` and `a..2a`).
pub fn ham_decompose(g: &Graph) -> Result<HamDecomposition, PatternError> {
    let n = g.n();
    let cycles = if n >= 3 && is_complete(g) {
        if n % 2 == 1 {
            walecki(n)
        } else if n >= 4 {
            insert_extra(walecki(n - 1), n - 1).ok_or_else(|| PatternError::Shape("no disjoint splice edges".into()))?
        } else {
            unreachable!()
        }
    } else if n.is_multiple_of(2) && n >= 4 && g.m() == (n / 2) * (n / 2) && g.edges().iter().all(|&(u, v)| u < n / 2 && v >= n / 2) {
        let a = n / 2;
        if a % 2 == 1 {
            return Err(PatternError::Shape(format!("K{a},{a} with odd part size has no Hamiltonian decomposition")));
        }
        (0..a / 2)
            .map(|i| {
                let mut c = Vec::with_capacity(n);
                for step in 0..a {
                    let j = (a - step) % a;
                    c.push(j);
                    c.push(a + (j + 2 * i) % a);
                }
                c
            })
            .collect()
    } else {
        return Err(PatternError::Shape("expected K_n (n >= 3) or K_{a,a} with parts 0..a, a..2a".into()));
    };
    let d = HamDecomposition { n, cycles };
    d.validate(g)?;
    Ok(d)
}

/// Touring along Hamiltonian cycles: keep following the cycle the packet
/// arrived on; on a failed successor switch to the lowest later cycle with
/// an alive successor, and bounce when none is left.
pub fn gen_ham_tour(d: &HamDecomposition) -> ForwardingPattern {
    let k = d.cycles.len();
    let mut succ = vec![vec![0; d.n]; k];
    let mut cycle_of: HashMap<(NodeId, NodeId), usize> = HashMap::new();
    for (i, c) in d.cycles.iter().enumerate() {
        for p in 0..c.len() {
            let (a, b) = (c[p], c[(p + 1) % c.len()]);
            succ[i][a] = b;
            cycle_of.insert((a.min(b), a.max(b)), i);
        }
    }
    let rule = move |v: &LocalView<'_>| {
        let x = v.node;
        let from = match v.inport.and_then(|u| cycle_of.get(&(u.min(x), u.max(x))).copied()) {
            Some(i) if v.is_alive(succ[i][x]) => return Some(succ[i][x]),
            Some(i) => i + 1,
            None => 0,
        };
        (from..k).map(|j| succ[j][x]).find(|&y| v.is_alive(y)).or_else(|| fallback(v))
    };
    let prov = Provenance::new("ham-tour").with("cycles", k);
    ForwardingPattern::new(RoutingModel::Touring, Scope::default(), prov, rule)
}

/// Routing derived from the Hamiltonian tour: hop to `t` when that link is
/// alive, otherwise forward as [`gen_ham_tour`] does.
pub fn gen_ham_route(d: &HamDecomposition, model: RoutingModel, scope: Scope) -> Result<ForwardingPattern, PatternError> {
    let t = scope.t.ok_or_else(|| PatternError::Shape("routing needs a destination".into()))?;
    if model == RoutingModel::Touring || (model.uses_source() && scope.s.is_none()) {
        return Err(PatternError::Shape(format!("{model} routing needs a matching scope")));
    }
    let tour = gen_ham_tour(d);
    let rule = move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            return Some(t);
        }
        tour.decide(&LocalView { src: None, dst: None, ..*v }).ok()
    };
    let prov = Provenance::new("ham-route").with("cycles", d.cycles.len());
    Ok(ForwardingPattern::new(model, scope, prov, rule))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions_are_valid() {
        for n in [3, 5, 7, 9, 11] {
            let g = Graph::complete(n).unwrap();
            let d = ham_decompose(&g).unwrap();
            assert_eq!(d.cycles.len(), (n - 1) / 2);
            assert_eq!(d.cycles.len() * n, g.m());
        }
        for n in [4, 6, 8, 10] {
            let d = ham_decompose(&Graph::complete(n).unwrap()).unwrap();
            assert_eq!(d.cycles.len(), (n - 2) / 2);
        }
        for a in [2, 4, 6] {
            let g = Graph::complete_bipartite(a, a).unwrap();
            let d = ham_decompose(&g).unwrap();
            assert_eq!(d.cycles.len(), a / 2);
            assert!(d.cycles.iter().all(|c| c.len() == 2 * a));
        }
        assert!(ham_decompose(&Graph::complete_bipartite(3, 3).unwrap()).is_err());
        assert!(ham_decompose(&Graph::cycle(5).unwrap().minus_edges(&[(0, 1)]).unwrap()).is_err());
    }

    #[test]
    fn cyclic_tour_count_on_k4() {
        assert_eq!(all_cyclic_tours(&Graph::complete(4).unwrap()).len(), 16);
        assert_eq!(all_cyclic_tours(&Graph::complete_bipartite(2, 3).unwrap()).len(), 4);
    }
}
