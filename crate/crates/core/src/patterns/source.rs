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

use super::{check_pair, cyclic_next, fallback, prefer, PatternError, TableReading};
use crate::forwarding::{ForwardingPattern, LocalView, Provenance, RoutingModel, Scope};
use crate::graph::{Graph, NodeId};

fn sd_scope(s: NodeId, t: NodeId) -> Scope {
    Scope { s: Some(s), t: Some(t) }
}

/// Algorithm 1 for graphs with at most five nodes. Identifier order is
/// ascending node id.
pub fn gen_alg1_k5(g: &Graph, s: NodeId, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    if g.n() > 5 {
        return Err(PatternError::Shape(format!("Algorithm 1 needs at most 5 nodes, got {}", g.n())));
    }
    check_pair(g, s, t)?;
    let rule = move |v: &LocalView<'_>| -> Option<NodeId> {
        if v.is_alive(t) {
            return Some(t);
        }
        let a = v.alive;
        if v.node == s {
            return match (a.len(), v.inport) {
                (1, _) => Some(a[0]),
                (2, None) => Some(a[0]),
                (2, Some(_)) => Some(a[1]),
                (3, None) => Some(a[0]),
                (3, Some(x)) if x == a[2] => Some(a[1]),
                (3, Some(_)) => Some(a[2]),
                _ => None,
            };
        }
        let Some(inport) = v.inport else { return a.first().copied() };
        if inport == s {
            return a.iter().copied().find(|&x| x != s).or(Some(s));
        }
        if let Some(x) = a.iter().copied().find(|&x| x != s && x != inport) {
            return Some(x);
        }
        if v.is_alive(s) {
            return Some(s);
        }
        Some(inport)
    };
    let prov = Provenance::new("alg1-k5").with("s", s).with("t", t);
    Ok(ForwardingPattern::new(RoutingModel::SourceDestination, sd_scope(s, t), prov, rule))
}

type Prefs = HashMap<(NodeId, Option<NodeId>), Vec<NodeId>>;

fn table_rule(t: NodeId, prefs: Prefs) -> impl Fn(&LocalView<'_>) -> Option<NodeId> + Send + Sync {
    move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            return Some(t);
        }
        match prefs.get(&(v.node, v.inport)) {
            Some(list) => prefer(v, list),
            None => fallback(v),
        }
    }
}

/// The two preference tables for `K_{3,3}` (parts `0..3` and `3..6`), one
/// for source and destination in different parts and one for the same part.
/// Uses the amended same-part table, whose source tries `v1, v3, v2` on ⊥.
pub fn gen_k33_source(g: &Graph, s: NodeId, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    gen_k33_source_with(g, s, t, TableReading::Amended)
}

/// [`gen_k33_source`] with an explicit table reading.
pub fn gen_k33_source_with(g: &Graph, s: NodeId, t: NodeId, reading: TableReading) -> Result<ForwardingPattern, PatternError> {
    check_pair(g, s, t)?;
    let part = |v: NodeId| v >= 3;
    if g.n() != 6 || g.edges().iter().any(|&(u, v)| part(u) == part(v)) {
        return Err(PatternError::Shape("expected a subgraph of K3,3 with parts 0..3 and 3..6".into()));
    }
    let side = |p: bool| (0..6).filter(move |&v| part(v) == p);
    let mut prefs = Prefs::new();
    let mut add = |node: NodeId, inport: Option<NodeId>, list: &[NodeId]| {
        prefs.insert((node, inport), list.to_vec());
    };
    let same = part(s) == part(t);
    if !same {
        let bc: Vec<_> = side(part(s)).filter(|&x| x != s).collect();
        let vs: Vec<_> = side(part(t)).filter(|&x| x != t).collect();
        let (b, c, v1, v2) = (bc[0], bc[1], vs[0], vs[1]);
        add(s, None, &[t, v1, v2]);
        add(s, Some(v1), &[v2]);
        add(s, Some(v2), &[v2]);
        for x in [b, c] {
            add(x, Some(v1), &[t, v2, v1]);
            add(x, Some(v2), &[t, v1, v2]);
        }
        add(v1, Some(s), &[b, c, s]);
        add(v1, Some(b), &[c, s, b]);
        add(v1, Some(c), &[b, s, c]);
        add(v2, Some(s), &[b, c]);
        add(v2, Some(b), &[c, b]);
        add(v2, Some(c), &[b, c]);
    } else {
        let b = side(part(s)).find(|&x| x != s && x != t).unwrap();
        let vs: Vec<_> = side(!part(s)).collect();
        let (v1, v2, v3) = (vs[0], vs[1], vs[2]);
        match reading {
            TableReading::Verbatim => add(s, None, &[v1, v2, v3]),
            TableReading::Amended => add(s, None, &[v1, v3, v2]),
        }
        add(s, Some(v1), &[v3, v2]);
        add(s, Some(v2), &[v3]);
        add(s, Some(v3), &[v2]);
        add(b, Some(v1), &[v2, v3, v1]);
        add(b, Some(v2), &[v3, v1, v2]);
        add(b, Some(v3), &[v1, v2, v3]);
        add(v1, Some(s), &[t, b, s]);
        add(v1, Some(b), &[t, s, b]);
        add(v2, Some(s), &[t, b, s]);
        add(v2, Some(b), &[t, b, s]);
        add(v3, Some(s), &[t, b, s]);
        add(v3, Some(b), &[t, s, b]);
    }
    let prov = Provenance::new("k33-source")
        .with("s", s)
        .with("t", t)
        .with("case", if same { "same-part" } else { "opposite-parts" })
        .with("reading", reading.name());
    Ok(ForwardingPattern::new(RoutingModel::SourceDestination, sd_scope(s, t), prov, table_rule(t, prefs)))
}

/// Hop to `t` when possible; the source cycles through its alive neighbors,
/// every other node bounces back.
pub fn gen_distance2(g: &Graph, s: NodeId, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    check_pair(g, s, t)?;
    let rule = move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            Some(t)
        } else if v.node == s {
            cyclic_next(v)
        } else {
            fallback(v)
        }
    };
    let prov = Provenance::new("distance2").with("s", s).with("t", t);
    Ok(ForwardingPattern::new(RoutingModel::SourceDestination, sd_scope(s, t), prov, rule))
}

/// Hop to `t` when possible; the source and its neighbors cycle through
/// alive neighbors, all other nodes bounce back.
pub fn gen_distance3_bipartite(g: &Graph, s: NodeId, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    check_pair(g, s, t)?;
    if g.bipartition().is_none() {
        return Err(PatternError::NotBipartite);
    }
    let mut cycling = vec![false; g.n()];
    cycling[s] = true;
    for &u in g.neighbors(s) {
        cycling[u] = true;
    }
    let rule = move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            Some(t)
        } else if cycling[v.node] {
            cyclic_next(v)
        } else {
            fallback(v)
        }
    };
    let prov = Provenance::new("distance3-bipartite").with("s", s).with("t", t);
    Ok(ForwardingPattern::new(RoutingModel::SourceDestination, sd_scope(s, t), prov, rule))
}

/// Every node forwards to the next alive neighbor after the inport in
/// ascending cyclic order (⊥ picks the smallest); routing models hop to `t`
/// first.
pub fn round_robin(model: RoutingModel, scope: Scope) -> ForwardingPattern {
    let t = if model.uses_destination() { scope.t } else { None };
    let rule = move |v: &LocalView<'_>| match t {
        Some(t) if v.is_alive(t) => Some(t),
        _ => cyclic_next(v),
    };
    ForwardingPattern::new(model, scope, Provenance::new("round-robin"), rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forwarding::check_totality;

    #[test]
    fn alg1_lines() {
        let g = Graph::complete(5).unwrap();
        let p = gen_alg1_k5(&g, 0, 4).unwrap();
        assert_eq!(p.decide(&p.view(0, &[2, 3], None)), Ok(2));
        assert_eq!(p.decide(&p.view(0, &[2, 3], Some(3))), Ok(3));
        assert_eq!(p.decide(&p.view(0, &[1, 2, 3], Some(3))), Ok(2));
        assert_eq!(p.decide(&p.view(0, &[1, 2, 3], Some(1))), Ok(3));
        assert_eq!(p.decide(&p.view(2, &[0], Some(0))), Ok(0));
        assert_eq!(p.decide(&p.view(2, &[0, 3], Some(3))), Ok(0));
        assert_eq!(p.decide(&p.view(2, &[0, 1, 3], Some(0))), Ok(1));
        assert_eq!(p.decide(&p.view(2, &[1, 4], Some(1))), Ok(4));
        assert!(check_totality(&g, &p).unwrap().is_empty());
        assert!(gen_alg1_k5(&Graph::complete(6).unwrap(), 0, 1).is_err());
    }

    #[test]
    fn k33_table_rows() {
        let g = Graph::complete_bipartite(3, 3).unwrap();
        // opposite parts: s=a=0, t=v3=5, b=1, c=2, v1=3, v2=4
        let p = gen_k33_source(&g, 0, 5).unwrap();
        assert_eq!(p.decide(&p.view(1, &[3, 4], Some(3))), Ok(4));
        assert_eq!(p.decide(&p.view(1, &[3], Some(3))), Ok(3));
        // same part: s=0, t=2, b=1, v1..v3=3..5
        let p = gen_k33_source_with(&g, 0, 2, TableReading::Verbatim).unwrap();
        assert_eq!(p.decide(&p.view(0, &[3, 4, 5], None)), Ok(3));
        assert_eq!(p.decide(&p.view(0, &[4, 5], None)), Ok(4));
        assert!(check_totality(&g, &p).unwrap().is_empty());
        let p = gen_k33_source(&g, 0, 2).unwrap();
        assert_eq!(p.decide(&p.view(0, &[4, 5], None)), Ok(5));
    }

    #[test]
    fn round_robin_hops_to_t() {
        let p = round_robin(RoutingModel::DestinationOnly, Scope { s: None, t: Some(9) });
        assert_eq!(p.decide(&p.view(0, &[1, 5, 9], Some(1))), Ok(9));
        assert_eq!(p.decide(&p.view(0, &[1, 5, 7], Some(7))), Ok(1));
    }
}
