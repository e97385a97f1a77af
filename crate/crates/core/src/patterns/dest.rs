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

use super::tour::SubTour;
use super::{check_nodes, fallback, prefer, PatternError, TableReading};
use crate::classifier::outerplanar::outerplanar_embedding;
use crate::forwarding::{ForwardingPattern, LocalView, Provenance, RoutingModel, Scope};
use crate::graph::{Graph, NodeId};

fn dest_scope(t: NodeId) -> Scope {
    Scope { s: None, t: Some(t) }
}

/// Right-hand-rule tour of `g` without `drop`, or `None` if that graph is
/// not outerplanar.
fn tour_without(g: &Graph, drop: &[NodeId]) -> Option<SubTour> {
    let (sub, map) = g.remove_nodes(drop);
    Some(SubTour::new(outerplanar_embedding(&sub)?, map))
}

/// Destination-based routing for graphs that are outerplanar once `t` is
/// removed: hop to `t` when possible, otherwise tour `G \ t`.
pub fn gen_outerplanar_plus_dest(g: &Graph, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    check_nodes(g, &[t])?;
    let walk = tour_without(g, &[t]).ok_or(PatternError::NotOuterplanar)?;
    let rule = move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            return Some(t);
        }
        walk.step(v).or_else(|| fallback(v))
    };
    let prov = Provenance::new("outerplanar-plus-dest").with("t", t);
    Ok(ForwardingPattern::new(RoutingModel::DestinationOnly, dest_scope(t), prov, rule))
}

/// Preference table visiting both neighbors `v1 < v2` of `t` in a five-node
/// graph where `t` has at most two neighbors; the other nodes are `v3 < v4`.
/// Graphs where `t` has more neighbors use the outerplanar construction.
/// Uses the amended table, where `v2` tries `v1, v4, v3` on ⊥.
pub fn gen_k5m2_dest(g: &Graph, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    gen_k5m2_dest_with(g, t, TableReading::Amended)
}

/// [`gen_k5m2_dest`] with an explicit table reading.
pub fn gen_k5m2_dest_with(g: &Graph, t: NodeId, reading: TableReading) -> Result<ForwardingPattern, PatternError> {
    check_nodes(g, &[t])?;
    if g.n() > 5 {
        return Err(PatternError::Shape(format!("expected at most 5 nodes, got {}", g.n())));
    }
    if g.n() < 5 || g.degree(t) > 2 {
        return gen_outerplanar_plus_dest(g, t)
            .map_err(|_| PatternError::Shape("graph is not a subgraph of K5 minus two links".into()));
    }
    let mut order: Vec<NodeId> = g.neighbors(t).to_vec();
    order.extend((0..5).filter(|&v| v != t && !g.has_edge(v, t)));
    let [v1, v2, v3, v4] = [order[0], order[1], order[2], order[3]];
    let mut prefs: HashMap<(NodeId, Option<NodeId>), Vec<NodeId>> = HashMap::new();
    let mut add = |node, inport, list: [NodeId; 3]| {
        prefs.insert((node, inport), list.to_vec());
    };
    add(v1, None, [v2, v3, v4]);
    add(v1, Some(v3), [v2, v4, v3]);
    add(v1, Some(v4), [v2, v3, v4]);
    add(v1, Some(v2), [v3, v4, v2]);
    match reading {
        TableReading::Verbatim => add(v2, None, [v1, v3, v4]),
        TableReading::Amended => add(v2, None, [v1, v4, v3]),
    }
    add(v2, Some(v3), [v1, v4, v3]);
    add(v2, Some(v4), [v1, v3, v4]);
    add(v2, Some(v1), [v3, v4, v1]);
    add(v3, None, [v2, v1, v4]);
    add(v3, Some(v1), [v2, v4, v1]);
    add(v3, Some(v2), [v1, v4, v2]);
    add(v3, Some(v4), [v1, v2, v4]);
    add(v4, None, [v1, v2, v3]);
    add(v4, Some(v1), [v2, v3, v1]);
    add(v4, Some(v2), [v1, v3, v2]);
    add(v4, Some(v3), [v2, v1, v3]);
    let rule = move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            return Some(t);
        }
        match prefs.get(&(v.node, v.inport)) {
            Some(list) => prefer(v, list),
            None => fallback(v),
        }
    };
    let prov = Provenance::new("k5m2-dest")
        .with("t", t)
        .with("v1..v4", format!("{v1},{v2},{v3},{v4}"))
        .with("reading", reading.name());
    Ok(ForwardingPattern::new(RoutingModel::DestinationOnly, dest_scope(t), prov, rule))
}

/// Destination-based routing on subgraphs of `K_{3,3}` missing at least two
/// links. If `t` has a single neighbor `w`, packets hop to `t`, else to `w`,
/// else tour `G \ {t, w}`; otherwise `G \ t` is toured.
pub fn gen_k33m2_dest(g: &Graph, t: NodeId) -> Result<ForwardingPattern, PatternError> {
    check_nodes(g, &[t])?;
    if g.n() > 6 || g.m() > 7 || g.bipartition().is_none() {
        return Err(PatternError::Shape("expected a subgraph of K3,3 missing at least two links".into()));
    }
    if g.degree(t) != 1 {
        return gen_outerplanar_plus_dest(g, t).map_err(|_| PatternError::Shape("G without t is not outerplanar".into()));
    }
    let w = g.neighbors(t)[0];
    let walk = tour_without(g, &[t, w]).ok_or(PatternError::NotOuterplanar)?;
    let rule = move |v: &LocalView<'_>| {
        if v.is_alive(t) {
            return Some(t);
        }
        if v.node != w && v.is_alive(w) {
            return Some(w);
        }
        walk.step(v).or_else(|| fallback(v))
    };
    let prov = Provenance::new("k33m2-dest").with("t", t).with("via", w);
    Ok(ForwardingPattern::new(RoutingModel::DestinationOnly, dest_scope(t), prov, rule))
}
